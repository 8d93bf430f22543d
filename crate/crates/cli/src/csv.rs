use std::io::{self, Write};

use propfrac::EvalTable;

pub const HEADER: &str = "t,value,error_estimate";

/// Writes `t,value,error_estimate` rows with 17 significant digits.
pub fn write_table(mut out: impl Write, table: &EvalTable) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for row in &table.rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e}",
            row.t, row.value, row.error_estimate
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use propfrac::{EvalRow, Expr, KernelFunction, OpKind, OperatorSpec};

    #[test]
    fn rows_roundtrip_exactly() {
        let table = EvalTable {
            spec: OperatorSpec {
                op: OpKind::PropDeriv,
                alpha: 0.0,
                rho: 0.0,
                kernel: KernelFunction::identity(),
                anchor: None,
                f: Expr::parse("x").unwrap(),
            },
            rows: vec![EvalRow {
                t: 0.1,
                value: 1.0 / 3.0,
                error_estimate: 0.0,
                converged: true,
            }],
        };
        let mut buf = Vec::new();
        write_table(&mut buf, &table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(HEADER));
        let fields: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(fields, vec![0.1, 1.0 / 3.0, 0.0]);
        assert!(!text.contains('\r'));
    }
}

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::Path;

use propfrac::operator::{linear_grid, GridError};
use propfrac::verify;
use propfrac::{EvalTable, Expr, KernelFunction, OpKind, OperatorSpec, QuadConfig};
use sha2::{Digest, Sha256};

use crate::args::{EvalArgs, TableArgs, VerifyArgs};
use crate::csv::write_table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        Failure {
            code: if e.t.is_some() {
                EXIT_NUMERICAL
            } else {
                EXIT_INVALID
            },
            message: e.to_string(),
        }
    }
}

/// Unvalidated operator description as given on the command line or in a
/// table line.
struct RawSpec {
    op: OpKind,
    alpha: Option<f64>,
    rho: f64,
    kernel: KernelFunction,
    a: Option<f64>,
    b: Option<f64>,
    f: String,
    grid: String,
}

struct Job {
    spec: OperatorSpec,
    grid: Vec<f64>,
    grid_text: String,
}

impl RawSpec {
    fn build(self) -> Result<Job, Failure> {
        let f = Expr::parse(&self.f).map_err(|e| Failure::invalid(format!("in f: {e}")))?;
        let anchor = match (self.op.needs_anchor(), self.op.is_left(), self.a, self.b) {
            (false, _, None, None) => None,
            (false, ..) => return Err(Failure::invalid(format!("{} takes no anchor", self.op))),
            (true, true, Some(a), None) => Some(a),
            (true, false, None, Some(b)) => Some(b),
            (true, true, ..) => {
                return Err(Failure::invalid(format!(
                    "{} needs exactly the anchor a",
                    self.op
                )))
            }
            (true, false, ..) => {
                return Err(Failure::invalid(format!(
                    "{} needs exactly the anchor b",
                    self.op
                )))
            }
        };
        let alpha = match (self.op.needs_alpha(), self.alpha) {
            (true, Some(alpha)) => alpha,
            (true, None) => return Err(Failure::invalid(format!("{} needs alpha", self.op))),
            (false, Some(_)) => {
                return Err(Failure::invalid(format!("{} takes no alpha", self.op)))
            }
            (false, None) => 0.0,
        };
        let spec = OperatorSpec {
            op: self.op,
            alpha,
            rho: self.rho,
            kernel: self.kernel,
            anchor,
            f,
        };
        spec.validate().map_err(Failure::invalid)?;
        let grid = parse_grid(&self.grid)?;
        for &t in &grid {
            spec.check_point(t).map_err(Failure::invalid)?;
            if !spec.kernel.can_eval(t) {
                return Err(Failure::invalid(format!(
                    "grid point {t} lies outside the kernel domain"
                )));
            }
        }
        Ok(Job {
            spec,
            grid,
            grid_text: self.grid,
        })
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::invalid(format!("grid `{text}` is not start:end:points"));
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, count] = parts[..] else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let end: f64 = end.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    linear_grid(start, end, count).map_err(Failure::invalid)
}

fn run_job(job: &Job, cfg: &QuadConfig) -> Result<EvalTable, Failure> {
    cfg.validate().map_err(Failure::invalid)?;
    let table = job.spec.evaluate_grid(&job.grid, cfg)?;
    for row in table.rows.iter().filter(|r| !r.converged) {
        eprintln!(
            "warning: quadrature did not converge at t = {} (error estimate {:.3e})",
            row.t, row.error_estimate
        );
    }
    Ok(table)
}

fn report(failure: &Failure) -> i32 {
    eprintln!("error: {}", failure.message);
    failure.code
}

pub fn eval(args: &EvalArgs) -> i32 {
    let raw = RawSpec {
        op: args.op,
        alpha: args.alpha,
        rho: args.rho,
        kernel: args.kernel.clone(),
        a: args.a,
        b: args.b,
        f: args.f.clone(),
        grid: args.grid.clone(),
    };
    let result = raw
        .build()
        .and_then(|job| run_job(&job, &args.quad.config()));
    let table = match result {
        Ok(table) => table,
        Err(failure) => return report(&failure),
    };
    let written = match &args.output {
        Some(path) => File::create(path).and_then(|file| write_table(BufWriter::new(file), &table)),
        None => write_table(io::stdout().lock(), &table),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_INVALID
        }
    }
}

pub fn verify(args: &VerifyArgs) -> i32 {
    let cfg = args.quad.config();
    if let Err(e) = cfg.validate() {
        return report(&Failure::invalid(e));
    }
    let results = verify::run(args.suite, &args.tolerances(), &cfg);
    let failed = results.iter().filter(|r| !r.passed()).count();
    for r in &results {
        if !args.failures_only || !r.passed() {
            println!("{r}");
        }
    }
    println!(
        "suite {}: {} cases, {} passed, {failed} failed",
        args.suite,
        results.len(),
        results.len() - failed
    );
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

/// Splits `key=value` pairs. A whitespace-separated token without `=`
/// continues the previous value, so `f=x^2 + 1` needs no quoting.
fn parse_pairs(line: &str) -> Result<BTreeMap<String, String>, Failure> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for token in line.split_whitespace() {
        match token.split_once('=') {
            Some((key, value)) => {
                if pairs.iter().any(|(k, _)| k == key) {
                    return Err(Failure::invalid(format!("duplicate key `{key}`")));
                }
                pairs.push((key.to_string(), value.to_string()));
            }
            None => match pairs.last_mut() {
                Some((_, value)) => {
                    value.push(' ');
                    value.push_str(token);
                }
                None => {
                    return Err(Failure::invalid(format!(
                        "expected key=value, found `{token}`"
                    )))
                }
            },
        }
    }
    Ok(pairs.into_iter().collect())
}

fn raw_from_pairs(mut pairs: BTreeMap<String, String>) -> Result<RawSpec, Failure> {
    fn number(pairs: &mut BTreeMap<String, String>, key: &str) -> Result<Option<f64>, Failure> {
        pairs
            .remove(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Failure::invalid(format!("{key} `{v}` is not a number")))
            })
            .transpose()
    }
    let required = |pairs: &mut BTreeMap<String, String>, key: &str| {
        pairs
            .remove(key)
            .ok_or_else(|| Failure::invalid(format!("missing `{key}`")))
    };
    let op = required(&mut pairs, "op")?
        .parse::<OpKind>()
        .map_err(Failure::invalid)?;
    let kernel = match pairs.remove("kernel") {
        Some(k) => k.parse::<KernelFunction>().map_err(Failure::invalid)?,
        None => KernelFunction::identity(),
    };
    let raw = RawSpec {
        op,
        alpha: number(&mut pairs, "alpha")?,
        rho: number(&mut pairs, "rho")?.ok_or_else(|| Failure::invalid("missing `rho`"))?,
        kernel,
        a: number(&mut pairs, "a")?,
        b: number(&mut pairs, "b")?,
        f: required(&mut pairs, "f")?,
        grid: required(&mut pairs, "grid")?,
    };
    if let Some(key) = pairs.keys().next() {
        return Err(Failure::invalid(format!("unknown key `{key}`")));
    }
    Ok(raw)
}

/// Deterministic file name from the canonical form of a spec.
fn spec_file_name(job: &Job, cfg: &QuadConfig) -> String {
    let s = &job.spec;
    let canonical = format!(
        "op={} alpha={:e} rho={:e} kernel={} anchor={:?} f={} grid={} nodes={}:{} tol={:e}:{:e}",
        s.op,
        s.alpha,
        s.rho,
        s.kernel,
        s.anchor,
        s.f,
        job.grid_text,
        cfg.base_nodes,
        cfg.max_nodes,
        cfg.rel_tol,
        cfg.abs_tol
    );
    let digest = Sha256::digest(canonical.as_bytes());
    format!("spec-{}.csv", &hex::encode(digest)[..16])
}

fn table_line(line: &str, out_dir: &Path, cfg: &QuadConfig) -> Result<String, Failure> {
    let job = raw_from_pairs(parse_pairs(line)?)?.build()?;
    let table = run_job(&job, cfg)?;
    let name = spec_file_name(&job, cfg);
    let path = out_dir.join(&name);
    File::create(&path)
        .and_then(|file| write_table(BufWriter::new(file), &table))
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))?;
    Ok(name)
}

pub fn table(args: &TableArgs) -> i32 {
    let text = match fs::read_to_string(&args.file) {
        Ok(text) => text,
        Err(e) => {
            return report(&Failure::invalid(format!(
                "cannot read {}: {e}",
                args.file.display()
            )))
        }
    };
    if let Err(e) = fs::create_dir_all(&args.out_dir) {
        return report(&Failure::invalid(format!(
            "cannot create {}: {e}",
            args.out_dir.display()
        )));
    }
    let cfg = args.quad.config();
    let mut worst = EXIT_OK;
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match table_line(line, &args.out_dir, &cfg) {
            Ok(name) => println!("line {}: {name}", index + 1),
            Err(failure) => {
                eprintln!("line {}: error: {}", index + 1, failure.message);
                // Invalid lines dominate numerical failures in the exit code.
                worst = match (worst, failure.code) {
                    (EXIT_INVALID, _) | (_, EXIT_INVALID) => EXIT_INVALID,
                    (_, code) => code,
                };
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_allow_spaces_in_values() {
        let p = parse_pairs("op=left-int f=x^2 + sin(x) grid=0:1:2").unwrap();
        assert_eq!(p["f"], "x^2 + sin(x)");
        assert_eq!(p["grid"], "0:1:2");
        assert!(parse_pairs("oops op=left-int").is_err());
        assert!(parse_pairs("a=1 a=2").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.5:1.5:3").unwrap(), vec![0.5, 1.0, 1.5]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:x").is_err());
        assert!(parse_grid("1:0:3").is_err());
    }

    #[test]
    fn anchors_follow_the_side() {
        let raw = |op: OpKind, a: Option<f64>, b: Option<f64>| RawSpec {
            op,
            alpha: Some(0.5),
            rho: 1.0,
            kernel: KernelFunction::identity(),
            a,
            b,
            f: "1".into(),
            grid: "1:2:2".into(),
        };
        assert!(raw(OpKind::LeftInt, Some(0.0), None).build().is_ok());
        assert!(raw(OpKind::LeftInt, None, Some(3.0)).build().is_err());
        assert!(raw(OpKind::RightInt, None, Some(3.0)).build().is_ok());
        assert!(raw(OpKind::RightInt, None, Some(1.5)).build().is_err());
    }

    #[test]
    fn file_names_are_stable_and_distinct() {
        let cfg = QuadConfig::default();
        let job = |f: &str| {
            raw_from_pairs(
                parse_pairs(&format!(
                    "op=left-int alpha=0.5 rho=1 a=0 f={f} grid=0.5:1.5:3"
                ))
                .unwrap(),
            )
            .unwrap()
            .build()
            .unwrap()
        };
        assert_eq!(
            spec_file_name(&job("1"), &cfg),
            spec_file_name(&job("1"), &cfg)
        );
        assert_ne!(
            spec_file_name(&job("1"), &cfg),
            spec_file_name(&job("x"), &cfg)
        );
        assert!(spec_file_name(&job("1"), &cfg).starts_with("spec-"));
    }
}

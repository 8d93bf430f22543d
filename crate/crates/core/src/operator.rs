//! Operator selection, parameter validation and grid evaluation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fracderiv::{caputo, rl_deriv};
use crate::fracint::fractional_integral;
use crate::function::Side;
use crate::kernels::KernelFunction;
use crate::params::{Order, Proportion};
use crate::propderiv::{prop_deriv, prop_integral_1};
use crate::quadrature::{Estimate, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    LeftInt,
    RightInt,
    LeftRl,
    RightRl,
    LeftCaputo,
    RightCaputo,
    PropDeriv,
    PropInt,
}

impl OpKind {
    pub const ALL: [OpKind; 8] = [
        OpKind::LeftInt,
        OpKind::RightInt,
        OpKind::LeftRl,
        OpKind::RightRl,
        OpKind::LeftCaputo,
        OpKind::RightCaputo,
        OpKind::PropDeriv,
        OpKind::PropInt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::LeftInt => "left-int",
            OpKind::RightInt => "right-int",
            OpKind::LeftRl => "left-rl",
            OpKind::RightRl => "right-rl",
            OpKind::LeftCaputo => "left-caputo",
            OpKind::RightCaputo => "right-caputo",
            OpKind::PropDeriv => "prop-deriv",
            OpKind::PropInt => "prop-int",
        }
    }

    pub fn is_left(self) -> bool {
        !matches!(
            self,
            OpKind::RightInt | OpKind::RightRl | OpKind::RightCaputo
        )
    }

    pub fn side(self) -> Side {
        if self.is_left() {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// Whether the operator needs an anchor point (`a` or `b`).
    pub fn needs_anchor(self) -> bool {
        self != OpKind::PropDeriv
    }

    /// Whether the operator takes an order `alpha`.
    pub fn needs_alpha(self) -> bool {
        !matches!(self, OpKind::PropDeriv | OpKind::PropInt)
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OpKind::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = OpKind::ALL.iter().map(|op| op.name()).collect();
                format!(
                    "unknown operator `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// A fully specified operator applied to an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub op: OpKind,
    pub alpha: f64,
    pub rho: f64,
    pub kernel: KernelFunction,
    /// `a` for left operators (and `prop-int`), `b` for right ones.
    pub anchor: Option<f64>,
    pub f: Expr,
}

impl OperatorSpec {
    /// Checks the operator-specific parameter constraints.
    pub fn validate(&self) -> Result<()> {
        match self.op {
            OpKind::PropDeriv => {
                Proportion::local(self.rho)?;
            }
            OpKind::PropInt => {
                Proportion::new(self.rho)?;
            }
            OpKind::LeftRl | OpKind::RightRl => {
                Proportion::new(self.rho)?;
                Order::new(self.alpha)?;
            }
            _ => {
                Proportion::new(self.rho)?;
                Order::positive(self.alpha)?;
            }
        }
        if self.op.needs_anchor() {
            let anchor = self.anchor.ok_or(Error::invalid(
                "anchor",
                f64::NAN,
                "this operator needs an anchor",
            ))?;
            if !anchor.is_finite() {
                return Err(Error::invalid("anchor", anchor, "must be finite"));
            }
            self.kernel.eval(anchor)?;
        }
        Ok(())
    }

    /// Checks that `t` is on the admissible side of the anchor.
    pub fn check_point(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::invalid("t", t, "must be finite"));
        }
        let Some(anchor) = self.anchor.filter(|_| self.op.needs_anchor()) else {
            return Ok(());
        };
        let strict = matches!(self.op, OpKind::LeftRl | OpKind::RightRl);
        let ok = match (self.op.side(), strict) {
            (Side::Left, false) => t >= anchor,
            (Side::Left, true) => t > anchor,
            (Side::Right, false) => t <= anchor,
            (Side::Right, true) => t < anchor,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(
                "t",
                t,
                "lies on the wrong side of the anchor",
            ))
        }
    }

    pub fn evaluate(&self, t: f64, cfg: &QuadConfig) -> Result<Estimate> {
        self.validate()?;
        self.check_point(t)?;
        let anchor = self.anchor.unwrap_or(f64::NAN);
        let side = self.op.side();
        let g = &self.kernel;
        let f = &self.f;
        match self.op {
            OpKind::PropDeriv => {
                prop_deriv(f, g, Proportion::local(self.rho)?, t).map(Estimate::exact)
            }
            OpKind::PropInt => prop_integral_1(f, g, Proportion::new(self.rho)?, anchor, t, cfg),
            OpKind::LeftInt | OpKind::RightInt => {
                let (alpha, rho) = (Order::positive(self.alpha)?, Proportion::new(self.rho)?);
                fractional_integral(f, g, alpha, rho, side, anchor, t, cfg)
            }
            OpKind::LeftRl | OpKind::RightRl => {
                let (alpha, rho) = (Order::new(self.alpha)?, Proportion::new(self.rho)?);
                rl_deriv(f, g, alpha, rho, side, anchor, t, cfg)
            }
            OpKind::LeftCaputo | OpKind::RightCaputo => {
                let (alpha, rho) = (Order::positive(self.alpha)?, Proportion::new(self.rho)?);
                caputo(f, g, alpha, rho, side, anchor, t, cfg)
            }
        }
    }

    /// Evaluates every grid point (in parallel); rows keep grid order.
    pub fn evaluate_grid(&self, grid: &[f64], cfg: &QuadConfig) -> Result<EvalTable, GridError> {
        self.validate()
            .map_err(|error| GridError { t: None, error })?;
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(GridError {
                t: None,
                error: Error::invalid("grid", f64::NAN, "points must be strictly increasing"),
            });
        }
        let rows = grid
            .par_iter()
            .map(|&t| {
                self.evaluate(t, cfg)
                    .map(|est| EvalRow {
                        t,
                        value: est.value,
                        error_estimate: est.error_estimate,
                        converged: est.converged,
                    })
                    .map_err(|error| GridError { t: Some(t), error })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EvalTable {
            spec: self.clone(),
            rows,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub t: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// Operator values on an increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTable {
    pub spec: OperatorSpec,
    pub rows: Vec<EvalRow>,
}

/// Failure while evaluating a grid; `t` is the offending point, if any.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}{error}", t.map(|t| format!("at t = {t}: ")).unwrap_or_default())]
pub struct GridError {
    pub t: Option<f64>,
    pub error: Error,
}

/// `count` equally spaced points from `start` to `end`, both included.
pub fn linear_grid(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 || !start.is_finite() || !end.is_finite() {
        return Err(Error::invalid(
            "grid",
            count as f64,
            "needs finite bounds and at least one point",
        ));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    if !(start < end) {
        return Err(Error::invalid("grid", start, "start must be below end"));
    }
    let step = (end - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                end
            } else {
                start + step * i as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(op: OpKind, alpha: f64, rho: f64, anchor: Option<f64>, f: &str) -> OperatorSpec {
        OperatorSpec {
            op,
            alpha,
            rho,
            kernel: KernelFunction::identity(),
            anchor,
            f: Expr::parse(f).unwrap(),
        }
    }

    #[test]
    fn names_roundtrip() {
        for op in OpKind::ALL {
            assert_eq!(op.name().parse::<OpKind>().unwrap(), op);
        }
        assert!("left".parse::<OpKind>().is_err());
    }

    #[test]
    fn validation_rules() {
        assert!(spec(OpKind::LeftInt, 0.0, 1.0, Some(0.0), "1")
            .validate()
            .is_err());
        assert!(spec(OpKind::LeftRl, 0.0, 1.0, Some(0.0), "1")
            .validate()
            .is_ok());
        assert!(spec(OpKind::LeftInt, 0.5, 1.5, Some(0.0), "1")
            .validate()
            .is_err());
        assert!(spec(OpKind::LeftInt, 0.5, 1.0, None, "1")
            .validate()
            .is_err());
        assert!(spec(OpKind::PropDeriv, 0.0, 0.0, None, "1")
            .validate()
            .is_ok());
        assert!(spec(OpKind::PropInt, 0.0, 0.0, Some(0.0), "1")
            .validate()
            .is_err());
        let s = spec(OpKind::RightInt, 0.5, 1.0, Some(2.0), "1");
        assert!(s.check_point(2.0).is_ok());
        assert!(s.check_point(2.5).is_err());
        let s = spec(OpKind::RightRl, 0.5, 1.0, Some(2.0), "1");
        assert!(s.check_point(2.0).is_err());
    }

    #[test]
    fn grid_evaluation_keeps_order() {
        let s = spec(OpKind::LeftInt, 0.5, 1.0, Some(0.0), "1");
        let grid = linear_grid(0.5, 1.5, 3).unwrap();
        assert_eq!(grid, vec![0.5, 1.0, 1.5]);
        let table = s.evaluate_grid(&grid, &QuadConfig::default()).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert!((table.rows[1].value - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-10);
        let ts: Vec<f64> = table.rows.iter().map(|r| r.t).collect();
        assert_eq!(ts, grid);
    }

    #[test]
    fn prop_deriv_with_zero_rho_returns_f() {
        let s = spec(OpKind::PropDeriv, 0.0, 0.0, None, "sin(x) + x^2");
        for t in linear_grid(-1.0, 2.0, 7).unwrap() {
            assert_eq!(
                s.evaluate(t, &QuadConfig::default()).unwrap().value,
                s.f.eval(t).unwrap()
            );
        }
    }

    #[test]
    fn grid_errors_name_the_point() {
        let s = spec(OpKind::LeftInt, 0.5, 1.0, Some(0.0), "ln(x - 1)");
        let err = s
            .evaluate_grid(&[0.5, 2.0], &QuadConfig::default())
            .unwrap_err();
        assert!(err.t.is_some());
        assert!(linear_grid(1.0, 0.0, 3).is_err());
        assert!(linear_grid(0.0, 1.0, 0).is_err());
    }
}

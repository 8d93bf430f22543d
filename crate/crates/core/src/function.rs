use crate::error::Result;
use crate::expr::Expr;

/// A real function of one variable that may fail to evaluate.
///
/// Implemented by [`Expr`] and by any `Fn(f64) -> Result<f64>`, so
/// operators can be nested: the output of one integral is a valid input to
/// another.
pub trait RealFn {
    fn value(&self, x: f64) -> Result<f64>;
}

impl RealFn for Expr {
    fn value(&self, x: f64) -> Result<f64> {
        self.eval(x)
    }
}

impl<F> RealFn for F
where
    F: Fn(f64) -> Result<f64>,
{
    fn value(&self, x: f64) -> Result<f64> {
        self(x)
    }
}

/// Which end of the interval an operator is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Anchored at `a`, acting on `t > a`.
    Left,
    /// Anchored at `b`, acting on `t < b`.
    Right,
}

impl Side {
    /// `+1` for left operators, `-1` for right ones.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

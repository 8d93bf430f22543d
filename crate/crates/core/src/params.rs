use crate::error::{Error, Result};
use crate::expr::MAX_ORDER;

/// The proportion `rho`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Proportion(f64);

impl Proportion {
    /// `rho` in `(0, 1]`, as required by the integral operators.
    pub fn new(rho: f64) -> Result<Self> {
        if rho > 0.0 && rho <= 1.0 {
            Ok(Proportion(rho))
        } else {
            Err(Error::invalid("rho", rho, "must lie in (0, 1]"))
        }
    }

    /// `rho` in `[0, 1]`; only the local derivative admits `rho = 0`.
    pub fn local(rho: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&rho) {
            Ok(Proportion(rho))
        } else {
            Err(Error::invalid("rho", rho, "must lie in [0, 1]"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Rate `(rho - 1)/rho` of the exponential factor.
    pub fn rate(self) -> f64 {
        (self.0 - 1.0) / self.0
    }

    pub(crate) fn require_positive(self) -> Result<Self> {
        Proportion::new(self.0)
    }
}

/// The fractional order `alpha`.
///
/// Admissible orders satisfy `floor(alpha) + 1 <= 4`, the highest
/// derivative a jet carries.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    /// `alpha >= 0`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::invalid(
                "alpha",
                alpha,
                "must be a finite non-negative number",
            ));
        }
        if alpha.floor() as usize + 1 > MAX_ORDER {
            return Err(Error::invalid("alpha", alpha, "must be below 4"));
        }
        Ok(Order(alpha))
    }

    /// `alpha > 0`, as required by integrals and Caputo derivatives.
    pub fn positive(alpha: f64) -> Result<Self> {
        let order = Order::new(alpha)?;
        if alpha == 0.0 {
            return Err(Error::invalid("alpha", alpha, "must be positive"));
        }
        Ok(order)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `n = floor(alpha) + 1`.
    pub fn n(self) -> usize {
        self.0.floor() as usize + 1
    }

    pub(crate) fn require_positive(self) -> Result<Self> {
        Order::positive(self.0)
    }
}

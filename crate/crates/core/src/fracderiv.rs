//! Riemann-Liouville-type and Caputo-type proportional fractional
//! derivatives, built from [`crate::fracint`] and [`crate::propderiv`].
//!
//! * RL type: `D^n (I^{n-α} f)`; the outer `D^n` is applied numerically
//!   (central differences with one Richardson step per level).
//! * Caputo type: `I^{n-α} (D^n f)`; `D^n f` is exact at every node via
//!   jets, so no numerical differentiation is involved.
//!
//! `n = floor(α) + 1`. Right-sided variants use the reversed derivative.

use crate::error::{Error, Result};
use crate::expr::{Expr, MAX_ORDER};
use crate::fracint::{fractional_integral, fractional_integral_fixed};
use crate::function::{RealFn, Side};
use crate::kernels::KernelFunction;
use crate::params::{Order, Proportion};
use crate::propderiv::prop_deriv_iterate;
use crate::quadrature::{Estimate, QuadConfig};

/// Relative finite-difference step for a single derivative level.
pub const STEP_FIRST_ORDER: f64 = 1e-5;
/// Relative step used when two or more levels are nested.
pub const STEP_NESTED: f64 = 1e-3;

const MAX_STEP_SHRINKS: usize = 4;

pub fn left_rl_deriv(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    a: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    rl_deriv(f, g, alpha, rho, Side::Left, a, t, cfg)
}

pub fn right_rl_deriv(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    b: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    rl_deriv(f, g, alpha, rho, Side::Right, b, t, cfg)
}

#[allow(clippy::too_many_arguments)]
pub fn rl_deriv(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    side: Side,
    anchor: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let rho = rho.require_positive()?;
    check_open_side(side, anchor, t)?;
    let n = alpha.n();
    let inner_order = Order::positive(n as f64 - alpha.get())?;
    let center = fractional_integral(f, g, inner_order, rho, side, anchor, t, cfg)?;
    let nodes = center.nodes;
    let inner = |s: f64| fractional_integral_fixed(f, g, inner_order, rho, side, anchor, s, nodes);
    let step = if n == 1 {
        STEP_FIRST_ORDER
    } else {
        STEP_NESTED
    };
    let d = numeric_prop_deriv_with_step(&inner, g, rho, n, side, anchor, t, step)?;
    Ok(Estimate {
        value: d.value,
        error_estimate: d.error_estimate + center.error_estimate,
        converged: center.converged,
        nodes,
    })
}

/// `D^n F(t)` (or the reversed `⊖D^n` for `Side::Right`) for a function
/// known only through its values, with the default step for `n`.
pub fn numeric_prop_deriv(
    func: &impl RealFn,
    g: &KernelFunction,
    rho: Proportion,
    n: usize,
    side: Side,
    anchor: f64,
    t: f64,
) -> Result<Estimate> {
    let step = if n == 1 {
        STEP_FIRST_ORDER
    } else {
        STEP_NESTED
    };
    numeric_prop_deriv_with_step(func, g, rho, n, side, anchor, t, step)
}

#[allow(clippy::too_many_arguments)]
fn numeric_prop_deriv_with_step(
    func: &impl RealFn,
    g: &KernelFunction,
    rho: Proportion,
    n: usize,
    side: Side,
    anchor: f64,
    t: f64,
    rel_step: f64,
) -> Result<Estimate> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let stencil = Stencil {
        func,
        g,
        keep: 1.0 - rho.get(),
        mix: side.sign() * rho.get(),
        side,
        anchor,
    };
    // Keep the stencil well away from the (possibly singular) anchor.
    let h = rel_step
        .max(rel_step * t.abs())
        .min(0.125 * (t - anchor).abs());
    let (value, correction) = stencil.level(n, t, h)?;
    Ok(Estimate {
        value,
        error_estimate: correction,
        converged: true,
        nodes: 0,
    })
}

struct Stencil<'a, F> {
    func: &'a F,
    g: &'a KernelFunction,
    keep: f64,
    mix: f64,
    side: Side,
    anchor: f64,
}

impl<F: RealFn> Stencil<'_, F> {
    fn admissible(&self, x: f64) -> bool {
        let inside = match self.side {
            Side::Left => x > self.anchor,
            Side::Right => x < self.anchor,
        };
        inside && self.g.contains(x)
    }

    /// Value of the `k`-fold operator at `s` and the size of the last
    /// Richardson correction.
    fn level(&self, k: usize, s: f64, h: f64) -> Result<(f64, f64)> {
        if k == 0 {
            return Ok((self.func.value(s)?, 0.0));
        }
        let phi = |x: f64| self.level(k - 1, x, h).map(|v| v.0);
        let (d, corr) = self.derivative(&phi, s, h)?;
        let value = self.keep * phi(s)? + self.mix * d / self.g.prime(s)?;
        Ok((value, (self.mix * corr / self.g.prime(s)?).abs()))
    }

    /// First derivative with one Richardson extrapolation; falls back to
    /// one-sided second-order differences near the anchor or the domain
    /// boundary.
    fn derivative(
        &self,
        phi: &impl Fn(f64) -> Result<f64>,
        s: f64,
        mut h: f64,
    ) -> Result<(f64, f64)> {
        for _ in 0..MAX_STEP_SHRINKS {
            let diff: Option<Box<dyn Fn(f64) -> Result<f64> + '_>> =
                if self.admissible(s - h) && self.admissible(s + h) {
                    Some(Box::new(|h: f64| {
                        Ok((phi(s + h)? - phi(s - h)?) / (2.0 * h))
                    }))
                } else if self.admissible(s + 2.0 * h) {
                    Some(Box::new(|h: f64| {
                        Ok((-3.0 * phi(s)? + 4.0 * phi(s + h)? - phi(s + 2.0 * h)?) / (2.0 * h))
                    }))
                } else if self.admissible(s - 2.0 * h) {
                    Some(Box::new(|h: f64| {
                        Ok((3.0 * phi(s)? - 4.0 * phi(s - h)? + phi(s - 2.0 * h)?) / (2.0 * h))
                    }))
                } else {
                    None
                };
            match diff {
                Some(d) => {
                    let coarse = d(h)?;
                    let fine = d(0.5 * h)?;
                    let extrapolated = (4.0 * fine - coarse) / 3.0;
                    return Ok((extrapolated, (extrapolated - fine).abs()));
                }
                None => h *= 0.1,
            }
        }
        Err(Error::Numerical(format!(
            "difference stencil around t = {s} leaves the admissible interval"
        )))
    }
}

fn check_open_side(side: Side, anchor: f64, t: f64) -> Result<()> {
    match side {
        Side::Left if !(t > anchor) => Err(Error::invalid("t", t, "left derivatives need t > a")),
        Side::Right if !(t < anchor) => Err(Error::invalid("t", t, "right derivatives need t < b")),
        _ => Ok(()),
    }
}

pub fn left_caputo(
    f: &Expr,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    a: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    caputo(f, g, alpha, rho, Side::Left, a, t, cfg)
}

pub fn right_caputo(
    f: &Expr,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    b: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    caputo(f, g, alpha, rho, Side::Right, b, t, cfg)
}

#[allow(clippy::too_many_arguments)]
pub fn caputo(
    f: &Expr,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    side: Side,
    anchor: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let alpha = alpha.require_positive()?;
    let rho = rho.require_positive()?;
    let n = alpha.n();
    let inner_order = Order::positive(n as f64 - alpha.get())?;
    let dn = |s: f64| prop_deriv_iterate(f, g, rho, n, s, side);
    fractional_integral(&dn, g, inner_order, rho, side, anchor, t, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracint::left_integral;
    use crate::oracles::gamma_fn;
    use crate::propderiv::prop_integral_1;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    fn rho(r: f64) -> Proportion {
        Proportion::new(r).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn rl_of_linear_function() {
        let cfg = QuadConfig::default();
        let id = KernelFunction::identity();
        let v = left_rl_deriv(&e("x"), &id, ord(0.5), rho(1.0), 0.0, 1.0, &cfg).unwrap();
        let expected = gamma_fn(2.0).unwrap() / gamma_fn(1.5).unwrap();
        assert!(rel(v.value, expected) < 1e-6, "{v:?}");
    }

    #[test]
    fn zero_order_is_identity() {
        let cfg = QuadConfig::default();
        let g = KernelFunction::log();
        let f = e("cos(x) + x");
        for t in [1.3, 2.0] {
            let v = left_rl_deriv(&f, &g, ord(0.0), rho(0.6), 1.0, t, &cfg).unwrap();
            assert!(rel(v.value, f.eval(t).unwrap()) < 1e-7);
            let v = right_rl_deriv(&f, &g, ord(0.0), rho(0.6), 2.5, t, &cfg).unwrap();
            assert!(rel(v.value, f.eval(t).unwrap()) < 1e-7);
        }
    }

    #[test]
    fn classical_right_rl() {
        // ρ = 1, g = t: right RL derivative of (b-x)^(β-1) is
        // Γ(β)/Γ(β-α) (b-t)^(β-1-α).
        let cfg = QuadConfig::default();
        let id = KernelFunction::identity();
        let (b, t, beta) = (2.0, 0.8, 2.5);
        for alpha in [0.4, 1.3] {
            let f = e("(2 - x)^1.5");
            let v = right_rl_deriv(&f, &id, ord(alpha), rho(1.0), b, t, &cfg).unwrap();
            let want = gamma_fn(beta).unwrap() / gamma_fn(beta - alpha).unwrap()
                * (b - t).powf(beta - 1.0 - alpha);
            assert!(
                rel(v.value, want) < 1e-6,
                "α={alpha}: {} vs {want}",
                v.value
            );
        }
    }

    #[test]
    fn caputo_of_square() {
        let cfg = QuadConfig::default();
        let id = KernelFunction::identity();
        let v = left_caputo(&e("x^2"), &id, ord(0.5), rho(1.0), 0.0, 1.0, &cfg).unwrap();
        let closed = gamma_fn(3.0).unwrap() / gamma_fn(2.5).unwrap();
        assert!(rel(v.value, closed) < 1e-12);
        assert!(rel(closed, 1.504_505_556_127_036_7) < 1e-9);
        // Independent brute force of ∫₀¹ (1-τ)^(-1/2) 2τ dτ / Γ(1/2) with
        // τ = 1 - u².
        let m = 100_000;
        let h = 1.0 / m as f64;
        let brute: f64 = (0..m)
            .map(|i| {
                let u = (i as f64 + 0.5) * h;
                2.0 * 2.0 * (1.0 - u * u) * h
            })
            .sum::<f64>()
            / std::f64::consts::PI.sqrt();
        assert!(rel(v.value, brute) < 1e-9);
    }

    #[test]
    fn classical_right_caputo() {
        // Right Caputo of (b-x)^2 with ρ = 1, g = t:
        // I_b^{1-α}(-2(b-x)) ... = Γ(3)/Γ(3-α) (b-t)^(2-α).
        let cfg = QuadConfig::default();
        let id = KernelFunction::identity();
        let (b, alpha) = (2.0, 0.5);
        for t in [0.5, 1.5] {
            let v = right_caputo(&e("(2 - x)^2"), &id, ord(alpha), rho(1.0), b, t, &cfg).unwrap();
            let want = 2.0 / gamma_fn(3.0 - alpha).unwrap() * (b - t).powf(2.0 - alpha);
            assert!(rel(v.value, want) < 1e-12);
        }
    }

    #[test]
    fn caputo_annihilates_low_powers() {
        let cfg = QuadConfig::default();
        let g = KernelFunction::log();
        for (alpha, r) in [(0.5, 0.4), (1.5, 1.0), (1.5, 0.4)] {
            let c = Proportion::new(r).unwrap().rate();
            for k in 0..ord(alpha).n() {
                let f = e(&format!("exp({c}*ln(x))*(ln(x) - 0)^{k}"));
                let v = left_caputo(&f, &g, ord(alpha), rho(r), 1.0, 2.3, &cfg).unwrap();
                assert!(v.value.abs() <= 1e-8, "α={alpha} ρ={r} k={k}: {}", v.value);
            }
        }
    }

    #[test]
    fn fundamental_pair_of_order_one() {
        // D^{ρ,g} applied to the order-one integral gives back f.
        let cfg = QuadConfig::default();
        let g = KernelFunction::power(2.0).unwrap();
        let f = e("cos(x) + x^2");
        let r = rho(0.6);
        let integral = |s: f64| Ok(prop_integral_1(&f, &g, r, 0.2, s, &cfg)?.value);
        for t in [0.7, 1.4] {
            let d = numeric_prop_deriv(&integral, &g, r, 1, Side::Left, 0.2, t).unwrap();
            assert!(rel(d.value, f.eval(t).unwrap()) < 1e-9, "{d:?}");
        }
    }

    #[test]
    fn n_fold_order_one_integral() {
        let cfg = QuadConfig::default();
        let g = KernelFunction::log();
        let f = e("cos(x)");
        let r = rho(0.5);
        let (a, t) = (0.5, 1.8);
        let once = |s: f64| Ok(prop_integral_1(&f, &g, r, a, s, &cfg)?.value);
        let twice = |s: f64| Ok(prop_integral_1(&once, &g, r, a, s, &cfg)?.value);
        let thrice = prop_integral_1(&twice, &g, r, a, t, &cfg).unwrap().value;
        let i2 = left_integral(&f, &g, ord(2.0), r, a, t, &cfg)
            .unwrap()
            .value;
        let i3 = left_integral(&f, &g, ord(3.0), r, a, t, &cfg)
            .unwrap()
            .value;
        assert!(rel(twice(t).unwrap(), i2) < 1e-7);
        assert!(rel(thrice, i3) < 1e-7);
        let i1 = left_integral(&f, &g, ord(1.0), r, a, t, &cfg)
            .unwrap()
            .value;
        assert!(rel(once(t).unwrap(), i1) < 1e-9);
    }

    #[test]
    fn stencil_near_anchor_is_one_sided() {
        let cfg = QuadConfig::default();
        let id = KernelFunction::identity();
        // The step shrinks with the distance to the anchor.
        let v = left_rl_deriv(&e("x"), &id, ord(0.5), rho(1.0), 0.0, 5e-6, &cfg).unwrap();
        let want = gamma_fn(2.0).unwrap() / gamma_fn(1.5).unwrap() * 5e-6f64.sqrt();
        assert!(rel(v.value, want) < 1e-6, "{} vs {want}", v.value);
        assert!(left_rl_deriv(&e("x"), &id, ord(0.5), rho(1.0), 0.0, 0.0, &cfg).is_err());
    }
}

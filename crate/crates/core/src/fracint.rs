//! Left and right generalized proportional fractional integrals
//!
//! ```text
//! (I_a f)(t) = 1/(ρ^α Γ(α)) ∫ₐᵗ e^{c (g(t)-g(τ))} (g(t)-g(τ))^(α-1) f(τ) g'(τ) dτ,   c = (ρ-1)/ρ
//! ```
//!
//! and its mirror ending at `b`. With `Δ = |g(t) - g(anchor)|` and
//! `z = |g(τ) - g(t)| / Δ` the integral becomes
//!
//! ```text
//! Δ^α/(ρ^α Γ(α)) ∫₀¹ z^(α-1) e^{cΔz} f(τ(z)) dz
//! ```
//!
//! so the weak singularity at `τ = t` is exactly the Jacobi weight. The
//! other end (`z = 1`, the anchor) is where inputs such as
//! `(g(x)-g(a))^(β-1)` or nested fractional integrals lose smoothness, so
//! the rule is applied in a graded variable `z = 1 - (1-u)^q` that keeps
//! the `u^(α-1)` weight at `u = 0` and flattens the anchor end.

use crate::error::{Error, Result};
use crate::function::{RealFn, Side};
use crate::kernels::KernelFunction;
use crate::oracles::gamma_fn;
use crate::params::{Order, Proportion};
use crate::quadrature::{by_doubling, jacobi_rule, Estimate, QuadConfig};

/// Grading exponent `q` of the substitution `z = 1 - (1-u)^q`.
pub const GRADING: f64 = 4.0;

pub fn left_integral(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    a: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    fractional_integral(f, g, alpha, rho, Side::Left, a, t, cfg)
}

pub fn right_integral(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    b: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    fractional_integral(f, g, alpha, rho, Side::Right, b, t, cfg)
}

/// Either-sided integral anchored at `anchor`.
#[allow(clippy::too_many_arguments)]
pub fn fractional_integral(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    side: Side,
    anchor: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    match Mapped::new(g, alpha, rho, side, anchor, t)? {
        None => Ok(Estimate::exact(0.0)),
        Some(m) => by_doubling(cfg, |n| m.sum(f, n)),
    }
}

/// Same integral with a fixed node count, so that neighbouring `t` share
/// one rule and the result is smooth in `t`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn fractional_integral_fixed(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: Order,
    rho: Proportion,
    side: Side,
    anchor: f64,
    t: f64,
    nodes: usize,
) -> Result<f64> {
    match Mapped::new(g, alpha, rho, side, anchor, t)? {
        None => Ok(0.0),
        Some(m) => m.sum(f, nodes),
    }
}

/// The integral after mapping `[anchor, t]` onto `z ∈ [0, 1]`.
struct Mapped<'a> {
    g: &'a KernelFunction,
    side: Side,
    anchor: f64,
    t: f64,
    alpha: f64,
    g_anchor: f64,
    delta: f64,
    lambda: f64,
    prefactor: f64,
}

impl<'a> Mapped<'a> {
    /// `None` when `t` coincides with the anchor (the integral is zero).
    fn new(
        g: &'a KernelFunction,
        alpha: Order,
        rho: Proportion,
        side: Side,
        anchor: f64,
        t: f64,
    ) -> Result<Option<Self>> {
        let alpha = alpha.require_positive()?.get();
        let rho = rho.require_positive()?;
        let ordered = match side {
            Side::Left => t >= anchor,
            Side::Right => t <= anchor,
        };
        if !ordered {
            return Err(Error::invalid(
                "t",
                t,
                match side {
                    Side::Left => "left operators need t >= a",
                    Side::Right => "right operators need t <= b",
                },
            ));
        }
        let g_anchor = g.eval(anchor)?;
        let g_t = g.eval(t)?;
        if t == anchor {
            return Ok(None);
        }
        let delta = side.sign() * (g_t - g_anchor);
        if !(delta > 0.0) {
            return Err(Error::KernelNotIncreasing { t, value: delta });
        }
        let rho_v = rho.get();
        let prefactor = delta.powf(alpha) / (rho_v.powf(alpha) * gamma_fn(alpha)?);
        Ok(Some(Mapped {
            g,
            side,
            anchor,
            t,
            alpha,
            g_anchor,
            delta,
            lambda: rho.rate() * delta,
            prefactor,
        }))
    }

    fn sum(&self, f: &impl RealFn, n: usize) -> Result<f64> {
        let rule = jacobi_rule(self.alpha, n)?;
        let sign = self.side.sign();
        let (lo, hi) = match self.side {
            Side::Left => (self.anchor, self.t),
            Side::Right => (self.t, self.anchor),
        };
        let mut acc = 0.0;
        for (u, w) in rule.iter() {
            // w1 = 1 - z, measured from the anchor to keep it accurate.
            let log1m = (-u).ln_1p();
            let w1 = (GRADING * log1m).exp();
            let z = -(GRADING * log1m).exp_m1();
            let jac = GRADING * ((GRADING - 1.0) * log1m).exp() * (z / u).powf(self.alpha - 1.0);
            let s = self.g_anchor + sign * w1 * self.delta;
            if s == self.g_anchor {
                continue;
            }
            let tau = self.g.inverse_in(s, lo, hi)?;
            // Points that round onto the anchor carry negligible weight
            // but may sit on a singularity of f.
            if sign * (self.g.eval(tau)? - self.g_anchor) <= 0.0 {
                continue;
            }
            acc += w * jac * (self.lambda * z).exp() * f.value(tau)?;
        }
        Ok(self.prefactor * acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::oracles::{cf_left_integral, cf_right_integral};

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
    fn constant_input() {
        let cfg = QuadConfig::default();
        let id = KernelFunction::identity();
        let v = left_integral(&e("1"), &id, ord(0.5), rho(1.0), 0.0, 1.0, &cfg).unwrap();
        assert!(
            rel(v.value, std::f64::consts::FRAC_2_SQRT_PI) < 1e-12,
            "{v:?}"
        );
        assert!(v.converged);
        let v = left_integral(&e("1"), &id, ord(1.0), rho(1.0), 0.0, 3.0, &cfg).unwrap();
        assert!(rel(v.value, 3.0) < 1e-14);
        let v = right_integral(&e("1"), &id, ord(1.0), rho(1.0), 3.0, 0.0, &cfg).unwrap();
        assert!(rel(v.value, 3.0) < 1e-14);
        let log = KernelFunction::log();
        let v = right_integral(
            &e("1"),
            &log,
            ord(0.5),
            rho(1.0),
            std::f64::consts::E,
            1.0,
            &cfg,
        )
        .unwrap();
        assert!(rel(v.value, std::f64::consts::FRAC_2_SQRT_PI) < 1e-12);
    }

    #[test]
    fn anchor_point_is_exactly_zero() {
        let cfg = QuadConfig::default();
        let v = left_integral(
            &e("1/x"),
            &KernelFunction::log(),
            ord(0.3),
            rho(0.5),
            2.0,
            2.0,
            &cfg,
        )
        .unwrap();
        assert_eq!(v, Estimate::exact(0.0));
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = QuadConfig::default();
        let id = KernelFunction::identity();
        let one = e("1");
        assert!(left_integral(&one, &id, ord(0.5), rho(1.0), 1.0, 0.0, &cfg).is_err());
        assert!(right_integral(&one, &id, ord(0.5), rho(1.0), 0.0, 1.0, &cfg).is_err());
        assert!(left_integral(&one, &id, ord(0.0), rho(1.0), 0.0, 1.0, &cfg).is_err());
        let r0 = Proportion::local(0.0).unwrap();
        assert!(left_integral(&one, &id, ord(0.5), r0, 0.0, 1.0, &cfg).is_err());
        assert!(left_integral(
            &one,
            &KernelFunction::log(),
            ord(0.5),
            rho(1.0),
            0.0,
            1.0,
            &cfg
        )
        .is_err());
        // Domain errors of f propagate.
        assert!(left_integral(&e("ln(x - 0.5)"), &id, ord(0.5), rho(1.0), 0.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn closed_form_inputs() {
        let cfg = QuadConfig::default();
        let kernels = [
            (KernelFunction::identity(), 0.0),
            (KernelFunction::log(), 1.0),
            (KernelFunction::power(2.0).unwrap(), 0.5),
            (KernelFunction::shifted_power(2.0, 0.5).unwrap(), 0.5),
        ];
        for (g, a) in &kernels {
            for beta in [1.0, 1.5, 2.7] {
                for alpha in [0.3, 1.5] {
                    let r = rho(0.4);
                    let c = r.rate();
                    let ga = g.eval(*a).unwrap();
                    let f = |x: f64| -> Result<f64> {
                        let gx = g.eval(x)?;
                        Ok((c * gx).exp() * (gx - ga).powf(beta - 1.0))
                    };
                    let t = a + 1.3;
                    let got = left_integral(&f, g, ord(alpha), r, *a, t, &cfg).unwrap();
                    let want = cf_left_integral(ord(alpha), beta, r, g, *a, t).unwrap();
                    assert!(
                        rel(got.value, want) < 1e-9,
                        "{g} β={beta} α={alpha}: {got:?} vs {want}"
                    );

                    let b = a + 2.0;
                    let gb = g.eval(b).unwrap();
                    let f = |x: f64| -> Result<f64> {
                        let gx = g.eval(x)?;
                        Ok((-c * gx).exp() * (gb - gx).powf(beta - 1.0))
                    };
                    let t = a + 0.4;
                    let got = right_integral(&f, g, ord(alpha), r, b, t, &cfg).unwrap();
                    let want = cf_right_integral(ord(alpha), beta, r, g, b, t).unwrap();
                    assert!(rel(got.value, want) < 1e-9, "right {g} β={beta} α={alpha}");
                }
            }
        }
    }

    #[test]
    fn custom_kernel_matches_builtin() {
        let cfg = QuadConfig::default();
        let f = e("cos(x)");
        let builtin = KernelFunction::power(2.0).unwrap();
        let custom = KernelFunction::custom(e("x^2/2"))
            .with_domain(0.0, 100.0)
            .unwrap();
        let a = left_integral(&f, &builtin, ord(0.6), rho(0.7), 0.3, 1.4, &cfg).unwrap();
        let b = left_integral(&f, &custom, ord(0.6), rho(0.7), 0.3, 1.4, &cfg).unwrap();
        assert!(rel(a.value, b.value) < 1e-12);
    }

    #[test]
    fn linearity() {
        let cfg = QuadConfig::default();
        let g = KernelFunction::log();
        let (c1, c2) = (2.5, -0.75);
        let combo = e("2.5*cos(x) - 0.75*x^2");
        for (alpha, r) in [(0.4, 0.6), (1.3, 1.0)] {
            let i = |f: &Expr| {
                left_integral(f, &g, ord(alpha), rho(r), 0.5, 2.2, &cfg)
                    .unwrap()
                    .value
            };
            let lhs = i(&combo);
            let rhs = c1 * i(&e("cos(x)")) + c2 * i(&e("x^2"));
            assert!(rel(lhs, rhs) < 1e-10);
        }
    }

    #[test]
    fn orders_commute() {
        let cfg = QuadConfig::default();
        let g = KernelFunction::identity();
        let f = e("cos(x)");
        let (a, t, r) = (0.1, 1.2, rho(0.5));
        let iter = |first: f64, second: f64| {
            let inner = |x: f64| Ok(left_integral(&f, &g, ord(first), r, a, x, &cfg)?.value);
            left_integral(&inner, &g, ord(second), r, a, t, &cfg)
                .unwrap()
                .value
        };
        for (alpha, beta) in [(0.3, 0.4), (1.2, 0.6)] {
            assert!(rel(iter(alpha, beta), iter(beta, alpha)) < 1e-8);
        }
    }
}

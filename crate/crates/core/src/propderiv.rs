//! The local proportional derivative `(1-rho) f + rho f'/g'`, its iterates
//! and reversed form, and the order-one proportional integral.

use crate::error::{Error, Result};
use crate::expr::{Expr, Jet, MAX_ORDER};
use crate::function::{RealFn, Side};
use crate::kernels::KernelFunction;
use crate::params::Proportion;
use crate::quadrature::{by_doubling, legendre_rule, Estimate, QuadConfig};

/// `D^{rho,g} f(t) = (1-rho) f(t) + rho f'(t)/g'(t)`.
pub fn prop_deriv(f: &Expr, g: &KernelFunction, rho: Proportion, t: f64) -> Result<f64> {
    prop_deriv_n(f, g, rho, 1, t)
}

/// `n`-fold iterate of [`prop_deriv`], computed exactly from jets of `f`
/// and `g`.
pub fn prop_deriv_n(
    f: &Expr,
    g: &KernelFunction,
    rho: Proportion,
    n: usize,
    t: f64,
) -> Result<f64> {
    iterate(f, g, rho, n, t, Side::Left)
}

/// Reversed derivative `(1-rho) f(t) - rho f'(t)/g'(t)` used by right-sided
/// operators.
pub fn prop_deriv_reverse(f: &Expr, g: &KernelFunction, rho: Proportion, t: f64) -> Result<f64> {
    prop_deriv_reverse_n(f, g, rho, 1, t)
}

pub fn prop_deriv_reverse_n(
    f: &Expr,
    g: &KernelFunction,
    rho: Proportion,
    n: usize,
    t: f64,
) -> Result<f64> {
    iterate(f, g, rho, n, t, Side::Right)
}

/// Iterated derivative on the given side; `Side::Right` selects the
/// reversed operator.
pub fn prop_deriv_iterate(
    f: &Expr,
    g: &KernelFunction,
    rho: Proportion,
    n: usize,
    t: f64,
    side: Side,
) -> Result<f64> {
    iterate(f, g, rho, n, t, side)
}

fn iterate(
    f: &Expr,
    g: &KernelFunction,
    rho: Proportion,
    n: usize,
    t: f64,
    side: Side,
) -> Result<f64> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let fj = f.eval_jet(t, n)?;
    apply_jets(fj, g, rho, n, t, side)
}

/// Applies `(1-rho + ±rho (1/g') d/dt)^n` to the jet `h` of order `>= n`.
pub(crate) fn apply_jets(
    mut h: Jet,
    g: &KernelFunction,
    rho: Proportion,
    n: usize,
    t: f64,
    side: Side,
) -> Result<f64> {
    let gp = g.jet(t, n)?.differentiate();
    if !(gp.value() > 0.0) {
        return Err(Error::KernelNotIncreasing {
            t,
            value: gp.value(),
        });
    }
    let inv_gp = gp.recip();
    let (keep, mix) = (1.0 - rho.get(), side.sign() * rho.get());
    for _ in 0..n {
        let d = h.differentiate();
        h = h.truncate(d.order()).scale(keep) + (d * inv_gp).scale(mix);
    }
    Ok(h.value())
}

/// `(1/rho) ∫ₐᵗ exp(((rho-1)/rho)(g(t)-g(s))) f(s) g'(s) ds`, by
/// Gauss-Legendre in `s` with node doubling.
pub fn prop_integral_1(
    f: &impl RealFn,
    g: &KernelFunction,
    rho: Proportion,
    a: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let rho = rho.require_positive()?;
    if !(t >= a) {
        return Err(Error::invalid("t", t, "must not precede the anchor a"));
    }
    let gt = g.eval(t)?;
    g.eval(a)?;
    if t == a {
        return Ok(Estimate::exact(0.0));
    }
    let c = rho.rate();
    let len = t - a;
    by_doubling(cfg, |n| {
        let rule = legendre_rule(n)?;
        let mut sum = 0.0;
        for (z, w) in rule.iter() {
            let s = a + len * z;
            sum += w * (c * (gt - g.eval(s)?)).exp() * f.value(s)? * g.prime(s)?;
        }
        Ok(sum * len / rho.get())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn rho(r: f64) -> Proportion {
        Proportion::local(r).unwrap()
    }

    fn id() -> KernelFunction {
        KernelFunction::identity()
    }

    #[test]
    fn local_derivative_examples() {
        assert_eq!(prop_deriv(&e("x"), &id(), rho(0.5), 2.0).unwrap(), 1.5);
        let log = KernelFunction::log();
        assert_eq!(prop_deriv(&e("7"), &log, rho(0.25), 3.0).unwrap(), 5.25);
        // exp(((r-1)/r) g) h with h = x, g = t, r = 0.5 at t = 1: r h' e^{-1}.
        let v = prop_deriv(&e("exp(-1*x)*x"), &id(), rho(0.5), 1.0).unwrap();
        assert!((v - 0.5 * (-1f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn iterated_examples() {
        let f = e("sin(x)*x^2");
        assert_eq!(
            prop_deriv_n(&f, &id(), rho(0.3), 1, 0.8).unwrap(),
            prop_deriv(&f, &id(), rho(0.3), 0.8).unwrap()
        );
        assert_eq!(
            prop_deriv_n(&e("x^2"), &id(), rho(1.0), 2, 3.0).unwrap(),
            2.0
        );
        // (0.5 + 0.5 d/dt)^2 e^t = e^t at t = 0.
        assert!((prop_deriv_n(&e("exp(x)"), &id(), rho(0.5), 2, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(prop_deriv_n(&e("x"), &id(), rho(0.5), 5, 1.0).is_err());
        assert!(prop_deriv_n(&e("x"), &id(), rho(0.5), 0, 1.0).is_err());
    }

    #[test]
    fn reversed_examples() {
        assert_eq!(
            prop_deriv_reverse(&e("x"), &id(), rho(0.5), 2.0).unwrap(),
            0.5
        );
        assert_eq!(
            prop_deriv_reverse(&e("x^2"), &id(), rho(1.0), 1.0).unwrap(),
            -2.0
        );
        // ⊖D[e^{-((r-1)/r) g} h] = -r (h'/g') e^{-((r-1)/r) g}; h = x, r = 0.5, t = 0.
        let v = prop_deriv_reverse(&e("exp(x)*x"), &id(), rho(0.5), 0.0).unwrap();
        assert!((v + 0.5).abs() < 1e-16);
    }

    #[test]
    fn reversed_iterate_matches_hand_expansion() {
        // ⊖D² f = (1-r)² f - 2r(1-r) f'/g' + r² (f'/g')'/g', g = ln t.
        let (r, t) = (0.3, 1.7f64);
        let f = e("sin(x)");
        let (f0, f1, f2) = (t.sin(), t.cos(), -t.sin());
        // f'/g' = t f', derivative f' + t f''
        let expected =
            (1.0 - r) * (1.0 - r) * f0 - 2.0 * r * (1.0 - r) * t * f1 + r * r * t * (f1 + t * f2);
        let got = prop_deriv_reverse_n(&f, &KernelFunction::log(), rho(r), 2, t).unwrap();
        assert!((got - expected).abs() < 1e-14);
    }

    #[test]
    fn rejects_decreasing_kernel() {
        let g = KernelFunction::custom(e("-x"));
        assert!(matches!(
            prop_deriv(&e("x"), &g, rho(0.5), 1.0),
            Err(Error::KernelNotIncreasing { .. })
        ));
    }

    #[test]
    fn order_one_integral_examples() {
        let cfg = QuadConfig::default();
        let one = e("1");
        let p = |r: f64| Proportion::new(r).unwrap();
        let v = prop_integral_1(&one, &id(), p(1.0), 0.0, 2.0, &cfg).unwrap();
        assert!((v.value - 2.0).abs() < 1e-14 && v.converged);
        let v = prop_integral_1(
            &one,
            &KernelFunction::log(),
            p(1.0),
            1.0,
            std::f64::consts::E,
            &cfg,
        )
        .unwrap();
        assert!((v.value - 1.0).abs() < 1e-14);
        let v = prop_integral_1(&one, &id(), p(0.5), 0.0, 1.0, &cfg).unwrap();
        assert!((v.value - 2.0 * (1.0 - (-1f64).exp())).abs() < 1e-14);
        assert_eq!(
            prop_integral_1(&one, &id(), p(0.5), 1.0, 1.0, &cfg)
                .unwrap()
                .value,
            0.0
        );
        assert!(prop_integral_1(&one, &id(), p(0.5), 1.0, 0.0, &cfg).is_err());
        assert!(prop_integral_1(&one, &id(), rho(0.0), 0.0, 1.0, &cfg).is_err());
    }
}

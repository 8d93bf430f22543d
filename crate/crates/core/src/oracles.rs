//! Gamma function and closed-form values of the operators applied to
//! `exp(±((rho-1)/rho) g(x)) (±(g(x) - g(anchor)))^(beta-1)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr, Func, Node};
use crate::kernels::KernelFunction;
use crate::operator::OpKind;
use crate::params::{Order, Proportion};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Γ(x) by the Lanczos approximation (g = 7, nine coefficients), with the
/// reflection formula below 1/2.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if is_pole(x) || x.is_nan() {
        return Err(Error::GammaPole(x));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let w = x + LANCZOS_G + 0.5;
        // Split the power so that w^(x+1/2) does not overflow before e^-w.
        let half = w.powf(0.5 * (x + 0.5));
        (2.0 * PI).sqrt() * half * (-w).exp() * half * acc
    }
}

/// 1/Γ(x), exactly zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if is_pole(x) {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}

fn check_left(g: &KernelFunction, a: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > a) {
        return Err(Error::invalid("t", t, "must exceed the anchor a"));
    }
    Ok((g.eval(t)?, g.eval(t)? - g.eval(a)?))
}

fn check_right(g: &KernelFunction, b: f64, t: f64) -> Result<(f64, f64)> {
    if !(t < b) {
        return Err(Error::invalid("t", t, "must be below the anchor b"));
    }
    Ok((g.eval(t)?, g.eval(b)? - g.eval(t)?))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("beta", beta, "must be positive"))
    }
}

fn integral_factor(alpha: Order, beta: f64, rho: Proportion) -> Result<f64> {
    let alpha = alpha.require_positive()?.get();
    check_beta(beta)?;
    let rho = rho.require_positive()?.get();
    Ok(gamma_fn(beta)? * recip_gamma(beta + alpha) / rho.powf(alpha))
}

fn derivative_factor(alpha: Order, beta: f64, rho: Proportion) -> Result<f64> {
    check_beta(beta)?;
    let rho = rho.require_positive()?.get();
    let alpha = alpha.get();
    Ok(rho.powf(alpha) * gamma_fn(beta)? * recip_gamma(beta - alpha))
}

/// Left integral of `e^{c g(x)} (g(x)-g(a))^(beta-1)`:
/// `Γ(β)/(Γ(β+α) ρ^α) e^{c g(t)} (g(t)-g(a))^(α+β-1)`.
pub fn cf_left_integral(
    alpha: Order,
    beta: f64,
    rho: Proportion,
    g: &KernelFunction,
    a: f64,
    t: f64,
) -> Result<f64> {
    let k = integral_factor(alpha, beta, rho)?;
    let (gt, dg) = check_left(g, a, t)?;
    Ok(k * (rho.rate() * gt).exp() * dg.powf(alpha.get() + beta - 1.0))
}

/// Right integral of `e^{-c g(x)} (g(b)-g(x))^(beta-1)`.
pub fn cf_right_integral(
    alpha: Order,
    beta: f64,
    rho: Proportion,
    g: &KernelFunction,
    b: f64,
    t: f64,
) -> Result<f64> {
    let k = integral_factor(alpha, beta, rho)?;
    let (gt, dg) = check_right(g, b, t)?;
    Ok(k * (-rho.rate() * gt).exp() * dg.powf(alpha.get() + beta - 1.0))
}

/// Left Riemann-Liouville-type derivative:
/// `ρ^α Γ(β)/Γ(β-α) e^{c g(t)} (g(t)-g(a))^(β-1-α)`.
///
/// When `β - α` is a non-positive integer the value is exactly zero; see
/// [`rl_pole`].
pub fn cf_left_rl_deriv(
    alpha: Order,
    beta: f64,
    rho: Proportion,
    g: &KernelFunction,
    a: f64,
    t: f64,
) -> Result<f64> {
    let k = derivative_factor(alpha, beta, rho)?;
    let (gt, dg) = check_left(g, a, t)?;
    if k == 0.0 {
        return Ok(0.0);
    }
    Ok(k * (rho.rate() * gt).exp() * dg.powf(beta - 1.0 - alpha.get()))
}

pub fn cf_right_rl_deriv(
    alpha: Order,
    beta: f64,
    rho: Proportion,
    g: &KernelFunction,
    b: f64,
    t: f64,
) -> Result<f64> {
    let k = derivative_factor(alpha, beta, rho)?;
    let (gt, dg) = check_right(g, b, t)?;
    if k == 0.0 {
        return Ok(0.0);
    }
    Ok(k * (-rho.rate() * gt).exp() * dg.powf(beta - 1.0 - alpha.get()))
}

/// True when the closed-form derivative vanishes through 1/Γ(β-α) = 0.
pub fn rl_pole(alpha: Order, beta: f64) -> bool {
    is_pole(beta - alpha.get())
}

/// Which branch of the Caputo closed form applies for `(alpha, beta)`.
fn caputo_annihilated(alpha: Order, beta: f64) -> Result<bool> {
    let n = alpha.require_positive()?.n() as f64;
    let k = beta - 1.0;
    if k >= 0.0 && k.fract() == 0.0 && k < n {
        Ok(true)
    } else if beta > n {
        Ok(false)
    } else {
        Err(Error::invalid(
            "beta",
            beta,
            "Caputo closed form needs beta > n or beta - 1 in {0, .., n-1}",
        ))
    }
}

/// Left Caputo-type derivative: the Riemann-Liouville formula for `β > n`,
/// and zero for the exponents `β - 1 = k ∈ {0, .., n-1}`.
pub fn cf_left_caputo(
    alpha: Order,
    beta: f64,
    rho: Proportion,
    g: &KernelFunction,
    a: f64,
    t: f64,
) -> Result<f64> {
    if caputo_annihilated(alpha, beta)? {
        check_left(g, a, t)?;
        rho.require_positive()?;
        return Ok(0.0);
    }
    cf_left_rl_deriv(alpha, beta, rho, g, a, t)
}

pub fn cf_right_caputo(
    alpha: Order,
    beta: f64,
    rho: Proportion,
    g: &KernelFunction,
    b: f64,
    t: f64,
) -> Result<f64> {
    if caputo_annihilated(alpha, beta)? {
        check_right(g, b, t)?;
        rho.require_positive()?;
        return Ok(0.0);
    }
    cf_right_rl_deriv(alpha, beta, rho, g, b, t)
}

/// Classical Riemann-Liouville integral of `x^p` from 0:
/// `Γ(p+1)/Γ(p+1+α) t^(p+α)`.
pub fn cf_classical_rl_power(p: f64, alpha: f64, t: f64) -> Result<f64> {
    if !(p > -1.0) {
        return Err(Error::invalid("p", p, "must exceed -1"));
    }
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha", alpha, "must be positive"));
    }
    if !(t > 0.0) {
        return Err(Error::invalid("t", t, "must be positive"));
    }
    Ok(gamma_fn(p + 1.0)? * recip_gamma(p + 1.0 + alpha) * t.powf(p + alpha))
}

/// One closed-form test case: an operator, its parameters, the point `t`
/// and the input function the closed form is known for.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub kind: OpKind,
    pub alpha: Order,
    pub beta: f64,
    pub rho: Proportion,
    pub kernel: KernelFunction,
    pub anchor: f64,
    pub t: f64,
}

impl OracleCase {
    /// `exp(c g(x)) (g(x) - g(a))^(β-1)` for left operators and
    /// `exp(-c g(x)) (g(b) - g(x))^(β-1)` for right ones.
    pub fn input(&self) -> Result<Expr> {
        let c = self.rho.rate();
        let g_anchor = self.kernel.eval(self.anchor)?;
        let g = self.kernel.to_node();
        let (rate, gap) = if self.kind.is_left() {
            (
                c,
                Node::binary(BinOp::Sub, g.clone(), Node::Const(g_anchor)),
            )
        } else {
            (
                -c,
                Node::binary(BinOp::Sub, Node::Const(g_anchor), g.clone()),
            )
        };
        let exp = Node::call(Func::Exp, Node::binary(BinOp::Mul, Node::Const(rate), g));
        let power = Node::binary(BinOp::Pow, gap, Node::Const(self.beta - 1.0));
        Ok(Expr::from_node(Node::binary(BinOp::Mul, exp, power)))
    }

    pub fn expected(&self) -> Result<f64> {
        let (alpha, beta, rho, g, x, t) = (
            self.alpha,
            self.beta,
            self.rho,
            &self.kernel,
            self.anchor,
            self.t,
        );
        match self.kind {
            OpKind::LeftInt => cf_left_integral(alpha, beta, rho, g, x, t),
            OpKind::RightInt => cf_right_integral(alpha, beta, rho, g, x, t),
            OpKind::LeftRl => cf_left_rl_deriv(alpha, beta, rho, g, x, t),
            OpKind::RightRl => cf_right_rl_deriv(alpha, beta, rho, g, x, t),
            OpKind::LeftCaputo => cf_left_caputo(alpha, beta, rho, g, x, t),
            OpKind::RightCaputo => cf_right_caputo(alpha, beta, rho, g, x, t),
            OpKind::PropDeriv | OpKind::PropInt => Err(Error::Numerical(format!(
                "no closed form registered for {}",
                self.kind
            ))),
        }
    }
}

//! Strictly increasing kernel functions `g` with derivative and inverse.
//!
//! Built-in families cover the classical special cases: `Identity`
//! (Riemann-Liouville), `Log` (Hadamard), `Power` (Katugampola) and
//! `ShiftedPower`. Anything else can be supplied as an expression.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr, Func, Jet, Node};

/// Number of Chebyshev sample points used by [`KernelFunction::validate`].
pub const VALIDATION_SAMPLES: usize = 1001;

const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    Identity,
    Log,
    /// `t^mu / mu`
    Power {
        mu: f64,
    },
    /// `(t - shift)^mu / mu`
    ShiftedPower {
        mu: f64,
        shift: f64,
    },
    Custom(Expr),
}

/// A kernel `g` together with the open interval on which it is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFunction {
    family: KernelFamily,
    lo: f64,
    hi: f64,
}

/// Outcome of sampling `g'` over an interval.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelValidation {
    Ok,
    /// First sample (in increasing `t`) where `g'` is not positive or could
    /// not be evaluated (`derivative` is NaN then). `crossing` brackets the
    /// sign change between the previous good sample and `t` by bisection.
    Violation {
        t: f64,
        derivative: f64,
        crossing: f64,
    },
}

impl KernelValidation {
    pub fn is_ok(&self) -> bool {
        matches!(self, KernelValidation::Ok)
    }
}

impl KernelFunction {
    pub fn identity() -> Self {
        Self::with_family(KernelFamily::Identity, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn log() -> Self {
        Self::with_family(KernelFamily::Log, 0.0, f64::INFINITY)
    }

    pub fn power(mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(Self::with_family(
            KernelFamily::Power { mu },
            0.0,
            f64::INFINITY,
        ))
    }

    pub fn shifted_power(mu: f64, shift: f64) -> Result<Self> {
        check_mu(mu)?;
        if !shift.is_finite() {
            return Err(Error::invalid("shift", shift, "must be finite"));
        }
        Ok(Self::with_family(
            KernelFamily::ShiftedPower { mu, shift },
            shift,
            f64::INFINITY,
        ))
    }

    /// Expression-defined kernel on the whole real line. Monotonicity is
    /// not assumed; see [`KernelFunction::validate`].
    pub fn custom(expr: Expr) -> Self {
        Self::with_family(KernelFamily::Custom(expr), f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Restricts the declared domain to `(lo, hi)`.
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || lo < self.lo || hi > self.hi {
            return Err(Error::invalid(
                "domain",
                lo,
                "must be a non-empty sub-interval",
            ));
        }
        self.lo = lo;
        self.hi = hi;
        Ok(self)
    }

    fn with_family(family: KernelFamily, lo: f64, hi: f64) -> Self {
        KernelFunction { family, lo, hi }
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Whether `t` lies in the open domain.
    pub fn contains(&self, t: f64) -> bool {
        self.lo < t && t < self.hi
    }

    /// Whether `g(t)` is finite; power families extend to the left end.
    pub fn can_eval(&self, t: f64) -> bool {
        match self.family {
            KernelFamily::Power { .. } | KernelFamily::ShiftedPower { .. } => {
                self.lo <= t && t < self.hi
            }
            _ => self.contains(t),
        }
    }

    fn domain_error(&self, t: f64) -> Error {
        Error::KernelDomain {
            t,
            domain: format!("({}, {})", self.lo, self.hi),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.can_eval(t) {
            return Err(self.domain_error(t));
        }
        Ok(match &self.family {
            KernelFamily::Identity => t,
            KernelFamily::Log => t.ln(),
            KernelFamily::Power { mu } => pow_mu(t, *mu) / mu,
            KernelFamily::ShiftedPower { mu, shift } => pow_mu(t - shift, *mu) / mu,
            KernelFamily::Custom(e) => e.eval(t)?,
        })
    }

    /// `g'(t)`, which must be positive.
    pub fn prime(&self, t: f64) -> Result<f64> {
        let d = self.prime_unchecked(t)?;
        if d > 0.0 {
            Ok(d)
        } else {
            Err(Error::KernelNotIncreasing { t, value: d })
        }
    }

    fn prime_unchecked(&self, t: f64) -> Result<f64> {
        if !self.contains(t) {
            return Err(self.domain_error(t));
        }
        Ok(match &self.family {
            KernelFamily::Identity => 1.0,
            KernelFamily::Log => 1.0 / t,
            KernelFamily::Power { mu } => pow_mu(t, mu - 1.0),
            KernelFamily::ShiftedPower { mu, shift } => pow_mu(t - shift, mu - 1.0),
            KernelFamily::Custom(e) => e.eval_jet(t, 1)?.derivative(1),
        })
    }

    /// Taylor jet of `g` at `t` up to `order`.
    pub fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        if !self.contains(t) {
            return Err(self.domain_error(t));
        }
        let x = Jet::variable(t, order);
        Ok(match &self.family {
            KernelFamily::Identity => x,
            KernelFamily::Log => x.ln(),
            KernelFamily::Power { mu } => x.powf(*mu).scale(1.0 / mu),
            KernelFamily::ShiftedPower { mu, shift } => {
                (x - Jet::constant(*shift, order)).powf(*mu).scale(1.0 / mu)
            }
            KernelFamily::Custom(e) => e.eval_jet(t, order)?,
        })
    }

    /// Solves `g(x) = s`.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        let out_of_range = || Error::KernelInversion {
            s,
            reason: "value outside the kernel range".into(),
        };
        match &self.family {
            KernelFamily::Identity => Ok(s),
            KernelFamily::Log => Ok(s.exp()),
            KernelFamily::Power { mu } => {
                if s < 0.0 {
                    return Err(out_of_range());
                }
                Ok(pow_mu(mu * s, 1.0 / mu))
            }
            KernelFamily::ShiftedPower { mu, shift } => {
                if s < 0.0 {
                    return Err(out_of_range());
                }
                Ok(shift + pow_mu(mu * s, 1.0 / mu))
            }
            KernelFamily::Custom(_) => {
                let (lo, hi) = self.find_bracket(s)?;
                self.newton_bisect(s, lo, hi)
            }
        }
    }

    /// Solves `g(x) = s` knowing that the root lies in `[lo, hi]`.
    pub fn inverse_in(&self, s: f64, lo: f64, hi: f64) -> Result<f64> {
        match self.family {
            KernelFamily::Custom(_) => self.newton_bisect(s, lo, hi),
            _ => Ok(self.inverse(s)?.clamp(lo, hi)),
        }
    }

    fn find_bracket(&self, s: f64) -> Result<(f64, f64)> {
        let center = match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => 0.5 * (self.lo + self.hi),
            (true, false) => self.lo + 1.0,
            (false, true) => self.hi - 1.0,
            (false, false) => 0.0,
        };
        let mut width = 1.0;
        for _ in 0..64 {
            let lo = (center - width).max(next_up(self.lo));
            let hi = (center + width).min(next_down(self.hi));
            if let (Ok(glo), Ok(ghi)) = (self.eval(lo), self.eval(hi)) {
                if glo <= s && s <= ghi {
                    return Ok((lo, hi));
                }
            }
            width *= 2.0;
        }
        Err(Error::KernelInversion {
            s,
            reason: "could not bracket the root".into(),
        })
    }

    /// Newton iteration safeguarded by a shrinking bracket.
    fn newton_bisect(&self, s: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
        let tol = 1e-13 * s.abs().max(1.0);
        let mut x = 0.5 * (lo + hi);
        for _ in 0..NEWTON_MAX_ITER {
            let j = self.jet(x, 1)?;
            let r = j.value() - s;
            if r.abs() <= tol {
                return Ok(x);
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let step = x - r / j.derivative(1);
            x = if step > lo && step < hi && step.is_finite() {
                step
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                return Ok(x);
            }
        }
        Err(Error::KernelInversion {
            s,
            reason: format!("no convergence after {NEWTON_MAX_ITER} iterations"),
        })
    }

    /// Samples `g'` at [`VALIDATION_SAMPLES`] Chebyshev points of `(lo, hi)`
    /// and reports the first non-positive value.
    pub fn validate(&self, lo: f64, hi: f64) -> Result<KernelValidation> {
        if !(lo < hi) || lo < self.lo || hi > self.hi {
            return Err(Error::invalid(
                "interval",
                lo,
                "must be a non-empty sub-interval of the kernel domain",
            ));
        }
        let m = VALIDATION_SAMPLES;
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let bad = |t: f64| match self.prime_unchecked(t) {
            Ok(d) if d > 0.0 => None,
            Ok(d) => Some(d),
            Err(_) => Some(f64::NAN),
        };
        let mut previous = None;
        // cos is decreasing on (0, pi), so k = m-1 .. 0 walks upward in t.
        for k in (0..m).rev() {
            let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * m) as f64;
            let t = mid + half * theta.cos();
            if let Some(d) = bad(t) {
                let crossing = match previous {
                    None => t,
                    Some(mut good) => {
                        let mut bad_t = t;
                        for _ in 0..60 {
                            let probe = 0.5 * (good + bad_t);
                            if bad(probe).is_some() {
                                bad_t = probe;
                            } else {
                                good = probe;
                            }
                        }
                        0.5 * (good + bad_t)
                    }
                };
                return Ok(KernelValidation::Violation {
                    t,
                    derivative: d,
                    crossing,
                });
            }
            previous = Some(t);
        }
        Ok(KernelValidation::Ok)
    }

    /// Expression tree for `g(x)`, used to build test inputs that contain `g`.
    pub fn to_node(&self) -> Node {
        let scaled_power = |base: Node, mu: f64| {
            Node::binary(
                BinOp::Div,
                Node::binary(BinOp::Pow, base, Node::Const(mu)),
                Node::Const(mu),
            )
        };
        match &self.family {
            KernelFamily::Identity => Node::Var,
            KernelFamily::Log => Node::call(Func::Ln, Node::Var),
            KernelFamily::Power { mu } => scaled_power(Node::Var, *mu),
            KernelFamily::ShiftedPower { mu, shift } => scaled_power(
                Node::binary(BinOp::Sub, Node::Var, Node::Const(*shift)),
                *mu,
            ),
            KernelFamily::Custom(e) => e.root().clone(),
        }
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("mu", mu, "must be positive"))
    }
}

/// `x^p`, exact for small integer `p` so that `Power(1)` is the identity.
fn pow_mu(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_finite() {
        x + f64::EPSILON * x.abs().max(1.0)
    } else {
        x
    }
}

fn next_down(x: f64) -> f64 {
    if x.is_finite() {
        x - f64::EPSILON * x.abs().max(1.0)
    } else {
        x
    }
}

/// Error returned when a kernel selection string cannot be understood.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid kernel `{input}`: {reason}")]
pub struct KernelSyntaxError {
    pub input: String,
    pub reason: String,
}

/// Parses `identity`, `log`, `power:MU`, `shifted-power:MU:A` or
/// `expr:<expression>`.
impl FromStr for KernelFunction {
    type Err = KernelSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| KernelSyntaxError {
            input: s.to_owned(),
            reason,
        };
        let num = |text: &str, what: &str| {
            text.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("{what} `{text}` is not a number")))
        };
        let s = s.trim();
        if let Some(body) = s.strip_prefix("expr:") {
            return Expr::parse(body)
                .map(KernelFunction::custom)
                .map_err(|e| err(e.to_string()));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["identity"] => Ok(KernelFunction::identity()),
            ["log"] => Ok(KernelFunction::log()),
            ["power", mu] => KernelFunction::power(num(mu, "mu")?).map_err(|e| err(e.to_string())),
            ["shifted-power", mu, a] => {
                KernelFunction::shifted_power(num(mu, "mu")?, num(a, "shift")?)
                    .map_err(|e| err(e.to_string()))
            }
            _ => Err(err(
                "expected identity, log, power:MU, shifted-power:MU:A or expr:<expression>".into(),
            )),
        }
    }
}

impl fmt::Display for KernelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            KernelFamily::Identity => f.write_str("identity"),
            KernelFamily::Log => f.write_str("log"),
            KernelFamily::Power { mu } => write!(f, "power:{mu}"),
            KernelFamily::ShiftedPower { mu, shift } => write!(f, "shifted-power:{mu}:{shift}"),
            KernelFamily::Custom(e) => write!(f, "expr:{e}"),
        }
    }
}

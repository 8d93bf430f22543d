//! Built-in verification suites: closed-form oracles, semigroup, inverse,
//! order reduction, classical reductions and Caputo annihilation.
//!
//! Every suite returns one [`CaseResult`] per case. Cases are evaluated in
//! parallel but results keep a fixed order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fracderiv::{caputo, rl_deriv};
use crate::fracint::fractional_integral;
use crate::function::{RealFn, Side};
use crate::kernels::KernelFunction;
use crate::operator::OpKind;
use crate::oracles::{cf_classical_rl_power, gamma_fn, OracleCase};
use crate::params::{Order, Proportion};
use crate::quadrature::QuadConfig;

/// Smooth test functions shared by tests and benches.
pub const EXPR_CORPUS: &[&str] = &[
    "1",
    "x",
    "x^2",
    "cos(x)",
    "2*x^2 + sin(x)",
    "exp(-x)*x",
    "sqrt(x + 1)",
    "ln(x + 2)",
    "1/(1 + x^2)",
    "pow(x + 1, 1.5) - 3*x",
    "exp(sin(x))",
    "abs(x - 7) + x^3/6",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative, closed-form integrals.
    pub integral: f64,
    /// Relative, RL-type derivative oracles.
    pub rl: f64,
    /// Relative, Caputo oracles with `β > n`.
    pub caputo: f64,
    /// Absolute, Caputo annihilation.
    pub annihilation: f64,
    /// Relative, semigroup and order commutativity.
    pub semigroup: f64,
    /// Relative, left inverse and order reduction.
    pub inverse: f64,
    /// Relative, reduction to the classical RL integral.
    pub reduction: f64,
    /// Relative, Hadamard and Katugampola self-consistency.
    pub reduction_self: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            integral: 1e-7,
            rl: 1e-4,
            caputo: 1e-7,
            annihilation: 1e-8,
            semigroup: 1e-7,
            inverse: 1e-4,
            reduction: 1e-8,
            reduction_self: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Oracles,
    Semigroup,
    Inverse,
    Reductions,
    Annihilation,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Oracles,
        Suite::Semigroup,
        Suite::Inverse,
        Suite::Reductions,
        Suite::Annihilation,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracles => "oracles",
            Suite::Semigroup => "semigroup",
            Suite::Inverse => "inverse",
            Suite::Reductions => "reductions",
            Suite::Annihilation => "annihilation",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// How a case's error is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `|c - e| / |e|`, or `|c - e|` when `e` is exactly zero.
    Relative,
    Absolute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub suite: &'static str,
    pub label: String,
    pub computed: f64,
    pub expected: f64,
    pub error: f64,
    pub tolerance: f64,
    pub metric: Metric,
    /// Set when the computation itself failed.
    pub failure: Option<String>,
}

impl CaseResult {
    fn new(
        suite: &'static str,
        label: String,
        metric: Metric,
        tolerance: f64,
        outcome: Result<(f64, f64)>,
    ) -> Self {
        match outcome {
            Ok((computed, expected)) => {
                let diff = (computed - expected).abs();
                let error = match metric {
                    Metric::Relative if expected != 0.0 => diff / expected.abs(),
                    _ => diff,
                };
                CaseResult {
                    suite,
                    label,
                    computed,
                    expected,
                    error,
                    tolerance,
                    metric,
                    failure: None,
                }
            }
            Err(e) => CaseResult {
                suite,
                label,
                computed: f64::NAN,
                expected: f64::NAN,
                error: f64::INFINITY,
                tolerance,
                metric,
                failure: Some(e.to_string()),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.error <= self.tolerance
    }
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let metric = match self.metric {
            Metric::Relative => "rel-err",
            Metric::Absolute => "abs-err",
        };
        write!(
            f,
            "{status} [{}] {} computed={:.15e} expected={:.15e} {metric}={:.3e} tol={:.1e}",
            self.suite, self.label, self.computed, self.expected, self.error, self.tolerance
        )?;
        if let Some(reason) = &self.failure {
            write!(f, " error: {reason}")?;
        }
        Ok(())
    }
}

pub fn run(suite: Suite, tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    match suite {
        Suite::Oracles => [
            oracle_integrals(tol, cfg),
            oracle_rl(tol, cfg),
            oracle_caputo(tol, cfg),
        ]
        .concat(),
        Suite::Semigroup => semigroup(tol, cfg),
        Suite::Inverse => [left_inverse(tol, cfg), order_reduction(tol, cfg)].concat(),
        Suite::Reductions => reductions(tol, cfg),
        Suite::Annihilation => annihilation(tol, cfg),
        Suite::All => Suite::ALL[..5]
            .iter()
            .flat_map(|&s| run(s, tol, cfg))
            .collect(),
    }
}

/// The four kernels of the oracle grids with the left anchor used for each.
pub fn oracle_kernels() -> Vec<(KernelFunction, f64)> {
    vec![
        (KernelFunction::identity(), 0.0),
        (KernelFunction::log(), 1.0),
        (KernelFunction::power(2.0).expect("valid"), 0.5),
        (KernelFunction::shifted_power(2.0, 0.5).expect("valid"), 0.5),
    ]
}

const ORACLE_OFFSETS: [f64; 3] = [0.25, 1.0, 2.0];
/// Right operators end at `b = a + RIGHT_SPAN`.
const RIGHT_SPAN: f64 = 2.25;

fn oracle_points(kind: OpKind, a: f64) -> Vec<(f64, f64)> {
    ORACLE_OFFSETS
        .iter()
        .map(|&d| {
            if kind.is_left() {
                (a, a + d)
            } else {
                let b = a + RIGHT_SPAN;
                (b, b - d)
            }
        })
        .collect()
}

fn oracle_cases(
    kinds: &[OpKind],
    betas: &[f64],
    alphas: &[f64],
    rhos: &[f64],
    kernels: &[(KernelFunction, f64)],
) -> Vec<OracleCase> {
    let mut cases = Vec::new();
    for &kind in kinds {
        for &beta in betas {
            for &alpha in alphas {
                for &rho in rhos {
                    for (kernel, a) in kernels {
                        for (anchor, t) in oracle_points(kind, *a) {
                            cases.push(OracleCase {
                                kind,
                                alpha: Order::new(alpha).expect("grid order"),
                                beta,
                                rho: Proportion::new(rho).expect("grid proportion"),
                                kernel: kernel.clone(),
                                anchor,
                                t,
                            });
                        }
                    }
                }
            }
        }
    }
    cases
}

fn oracle_label(c: &OracleCase) -> String {
    format!(
        "{} alpha={} beta={} rho={} g={} anchor={} t={}",
        c.kind,
        c.alpha.get(),
        c.beta,
        c.rho.get(),
        c.kernel,
        c.anchor,
        c.t
    )
}

fn run_oracles(
    suite: &'static str,
    cases: Vec<OracleCase>,
    metric: Metric,
    tol: f64,
    cfg: &QuadConfig,
) -> Vec<CaseResult> {
    cases
        .par_iter()
        .map(|c| {
            let outcome = (|| {
                let f = c.input()?;
                let side = c.kind.side();
                let computed = match c.kind {
                    OpKind::LeftInt | OpKind::RightInt => fractional_integral(
                        &f, &c.kernel, c.alpha, c.rho, side, c.anchor, c.t, cfg,
                    )?,
                    OpKind::LeftRl | OpKind::RightRl => {
                        rl_deriv(&f, &c.kernel, c.alpha, c.rho, side, c.anchor, c.t, cfg)?
                    }
                    _ => caputo(&f, &c.kernel, c.alpha, c.rho, side, c.anchor, c.t, cfg)?,
                };
                Ok((computed.value, c.expected()?))
            })();
            CaseResult::new(suite, oracle_label(c), metric, tol, outcome)
        })
        .collect()
}

/// Closed-form integrals over β × α × ρ × g, both sides.
pub fn oracle_integrals(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let cases = oracle_cases(
        &[OpKind::LeftInt, OpKind::RightInt],
        &[1.0, 1.5, 2.0, 2.7],
        &[0.3, 0.5, 0.9, 1.5],
        &[0.4, 0.8, 1.0],
        &oracle_kernels(),
    );
    run_oracles(
        "oracle-integral",
        cases,
        Metric::Relative,
        tol.integral,
        cfg,
    )
}

/// Closed-form RL-type derivatives, both sides. `β = α` hits the Γ pole and
/// is compared in absolute terms against zero.
pub fn oracle_rl(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let kernels = oracle_kernels().into_iter().take(2).collect::<Vec<_>>();
    let cases = oracle_cases(
        &[OpKind::LeftRl, OpKind::RightRl],
        &[1.5, 2.0, 2.7],
        &[0.3, 0.5, 1.5],
        &[0.5, 1.0],
        &kernels,
    );
    run_oracles("oracle-rl", cases, Metric::Relative, tol.rl, cfg)
}

/// Closed-form Caputo derivatives for `β > n`, both sides.
pub fn oracle_caputo(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let mut results = Vec::new();
    for (alphas, betas) in [
        (&[0.3, 0.5, 0.9][..], &[1.5, 2.0, 2.7][..]),
        (&[1.5][..], &[2.5, 2.7, 3.5][..]),
    ] {
        let cases = oracle_cases(
            &[OpKind::LeftCaputo, OpKind::RightCaputo],
            betas,
            alphas,
            &[0.4, 0.8, 1.0],
            &oracle_kernels(),
        );
        results.extend(run_oracles(
            "oracle-caputo",
            cases,
            Metric::Relative,
            tol.caputo,
            cfg,
        ));
    }
    results
}

/// Caputo derivatives of `exp(±c g) gap^k` for `k < n` vanish.
pub fn annihilation(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let mut cases = Vec::new();
    for alpha in [0.5, 1.5] {
        let n = Order::new(alpha).expect("grid order").n();
        let betas: Vec<f64> = (0..n).map(|k| k as f64 + 1.0).collect();
        cases.extend(oracle_cases(
            &[OpKind::LeftCaputo, OpKind::RightCaputo],
            &betas,
            &[alpha],
            &[0.4, 1.0],
            &oracle_kernels(),
        ));
    }
    run_oracles(
        "annihilation",
        cases,
        Metric::Absolute,
        tol.annihilation,
        cfg,
    )
}

/// Left anchor and right end of the composition grids.
const GRID_A: f64 = 0.1;
const GRID_B: f64 = 1.5;
const GRID_STEP: f64 = 0.14;

fn grid_points(side: Side) -> Vec<f64> {
    (1..=10)
        .map(|k| match side {
            Side::Left => GRID_A + GRID_STEP * k as f64,
            Side::Right => GRID_B - GRID_STEP * k as f64,
        })
        .collect()
}

fn anchor_for(side: Side) -> f64 {
    match side {
        Side::Left => GRID_A,
        Side::Right => GRID_B,
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// A composition case: one side, kernel, ρ, input and point.
#[derive(Debug, Clone)]
struct Composition {
    side: Side,
    kernel: KernelFunction,
    rho: Proportion,
    f: Expr,
    t: f64,
}

impl Composition {
    fn label(&self, orders: &str) -> String {
        format!(
            "{} {orders} rho={} g={} f={} t={}",
            side_name(self.side),
            self.rho.get(),
            self.kernel,
            self.f,
            self.t
        )
    }

    fn integral(&self, f: &impl RealFn, alpha: f64, at: f64, cfg: &QuadConfig) -> Result<f64> {
        let alpha = Order::positive(alpha)?;
        Ok(fractional_integral(
            f,
            &self.kernel,
            alpha,
            self.rho,
            self.side,
            anchor_for(self.side),
            at,
            cfg,
        )?
        .value)
    }

    fn rl(&self, f: &impl RealFn, alpha: f64, cfg: &QuadConfig) -> Result<f64> {
        let alpha = Order::new(alpha)?;
        Ok(rl_deriv(
            f,
            &self.kernel,
            alpha,
            self.rho,
            self.side,
            anchor_for(self.side),
            self.t,
            cfg,
        )?
        .value)
    }
}

fn compositions(kernels: &[KernelFunction], rhos: &[f64], fs: &[&str]) -> Vec<Composition> {
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        for kernel in kernels {
            for &rho in rhos {
                for f in fs {
                    for t in grid_points(side) {
                        out.push(Composition {
                            side,
                            kernel: kernel.clone(),
                            rho: Proportion::new(rho).expect("grid proportion"),
                            f: Expr::parse(f).expect("corpus expression"),
                            t,
                        });
                    }
                }
            }
        }
    }
    out
}

/// `I^α I^β f = I^(α+β) f` and `I^α I^β f = I^β I^α f`.
pub fn semigroup(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let kernels = [
        KernelFunction::identity(),
        KernelFunction::log(),
        KernelFunction::power(2.0).expect("valid"),
    ];
    let cases = compositions(&kernels, &[0.5, 1.0], &["1", "x", "cos(x)"]);
    let pairs = [(0.3, 0.4), (0.5, 0.5), (1.2, 0.6)];
    let work: Vec<_> = cases
        .iter()
        .flat_map(|c| pairs.iter().map(move |&p| (c, p)))
        .collect();
    work.par_iter()
        .flat_map_iter(|&(c, (alpha, beta))| {
            let inner_beta = |s: f64| c.integral(&c.f, beta, s, cfg);
            let inner_alpha = |s: f64| c.integral(&c.f, alpha, s, cfg);
            let ab = c.integral(&inner_beta, alpha, c.t, cfg);
            let combined = ab
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|&ab| Ok((ab, c.integral(&c.f, alpha + beta, c.t, cfg)?)));
            let swapped = ab
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|&ab| Ok((ab, c.integral(&inner_alpha, beta, c.t, cfg)?)));
            [
                CaseResult::new(
                    "semigroup",
                    c.label(&format!("I^{alpha} I^{beta} = I^{}", alpha + beta)),
                    Metric::Relative,
                    tol.semigroup,
                    combined,
                ),
                CaseResult::new(
                    "semigroup",
                    c.label(&format!("I^{alpha} I^{beta} = I^{beta} I^{alpha}")),
                    Metric::Relative,
                    tol.semigroup,
                    swapped,
                ),
            ]
        })
        .collect()
}

/// `D^α I^α f = f` with the RL-type derivative.
pub fn left_inverse(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let kernels = [KernelFunction::identity(), KernelFunction::log()];
    let cases = compositions(&kernels, &[0.5, 1.0], &["1", "cos(x)"]);
    let work: Vec<_> = cases
        .iter()
        .flat_map(|c| [0.3, 0.5, 1.5].into_iter().map(move |a| (c, a)))
        .collect();
    work.par_iter()
        .map(|&(c, alpha)| {
            let outcome = (|| {
                let inner = |s: f64| c.integral(&c.f, alpha, s, cfg);
                Ok((c.rl(&inner, alpha, cfg)?, c.f.eval(c.t)?))
            })();
            CaseResult::new(
                "inverse",
                c.label(&format!("D^{alpha} I^{alpha} = id")),
                Metric::Relative,
                tol.inverse,
                outcome,
            )
        })
        .collect()
}

/// `D^β I^α f = I^(α-β) f` for `β < α`.
pub fn order_reduction(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let kernels = [KernelFunction::identity(), KernelFunction::log()];
    let cases = compositions(&kernels, &[0.5, 1.0], &["1", "cos(x)"]);
    let work: Vec<_> = cases
        .iter()
        .flat_map(|c| [(0.4, 1.1), (0.5, 0.8)].into_iter().map(move |p| (c, p)))
        .collect();
    work.par_iter()
        .map(|&(c, (beta, alpha))| {
            let outcome = (|| {
                let inner = |s: f64| c.integral(&c.f, alpha, s, cfg);
                Ok((
                    c.rl(&inner, beta, cfg)?,
                    c.integral(&c.f, alpha - beta, c.t, cfg)?,
                ))
            })();
            CaseResult::new(
                "order-reduction",
                c.label(&format!("D^{beta} I^{alpha} = I^{}", alpha - beta)),
                Metric::Relative,
                tol.inverse,
                outcome,
            )
        })
        .collect()
}

/// With ρ = 1: kernels equal to the identity reproduce the classical RL
/// integral of `x^p`; Hadamard and Katugampola kernels agree with an
/// independent tanh-sinh evaluation of the classical integrals.
pub fn reductions(tol: &Tolerances, cfg: &QuadConfig) -> Vec<CaseResult> {
    let one = Proportion::new(1.0).expect("valid");
    let mut work: Vec<(KernelFunction, f64, f64, f64, f64, bool)> = Vec::new();
    let identities = [
        KernelFunction::identity(),
        KernelFunction::power(1.0).expect("valid"),
        KernelFunction::shifted_power(1.0, 0.0).expect("valid"),
    ];
    let others = [
        (KernelFunction::log(), 1.0),
        (KernelFunction::power(2.0).expect("valid"), 0.5),
        (KernelFunction::power(0.5).expect("valid"), 0.5),
        (KernelFunction::shifted_power(2.0, 0.5).expect("valid"), 0.5),
    ];
    for p in [0.0, 1.0, 2.0] {
        for alpha in [0.5, 1.5] {
            for g in &identities {
                for t in [0.5, 1.0, 2.0] {
                    work.push((g.clone(), 0.0, t, p, alpha, true));
                }
            }
            for (g, a) in &others {
                for d in [0.5, 1.0, 2.0] {
                    work.push((g.clone(), *a, a + d, p, alpha, false));
                }
            }
        }
    }
    work.par_iter()
        .map(|(g, a, t, p, alpha, classical)| {
            let a = *a;
            let outcome = (|| {
                let f = Expr::parse(&format!("x^{p}"))?;
                let computed = fractional_integral(
                    &f,
                    g,
                    Order::positive(*alpha)?,
                    one,
                    Side::Left,
                    a,
                    *t,
                    cfg,
                )?
                .value;
                let expected = if *classical {
                    cf_classical_rl_power(*p, *alpha, *t)?
                } else {
                    classical_integral_tanh_sinh(&f, g, *alpha, a, *t)?
                };
                Ok((computed, expected))
            })();
            let (suite, tol) = if *classical {
                ("reduction-rl", tol.reduction)
            } else {
                ("reduction-self", tol.reduction_self)
            };
            CaseResult::new(
                suite,
                format!("alpha={alpha} g={g} a={a} f=x^{p} t={t}"),
                Metric::Relative,
                tol,
                outcome,
            )
        })
        .collect()
}

/// Sample points for [`jet_consistency`], inside every corpus domain.
pub const JET_POINTS: [f64; 6] = [-0.75, -0.3, 0.2, 0.9, 1.7, 2.6];

/// Jet derivatives of orders 1..=3 against Richardson-extrapolated central
/// differences of the next lower order (order 0 is plain evaluation).
/// Uses absolute error where the derivative is below `1e-8`.
pub fn jet_consistency(tol: f64) -> Vec<CaseResult> {
    let mut results = Vec::new();
    for src in EXPR_CORPUS {
        let f = Expr::parse(src).expect("corpus expression");
        for x in JET_POINTS {
            for k in 1..=3usize {
                let outcome = (|| {
                    let lower = |y: f64| -> Result<f64> {
                        let jet = f.eval_jet(y, k - 1)?;
                        Ok(jet.derivative(k - 1))
                    };
                    let h = 1e-3 * x.abs().max(1.0);
                    let central =
                        |h: f64| -> Result<f64> { Ok((lower(x + h)? - lower(x - h)?) / (2.0 * h)) };
                    let fd = (4.0 * central(0.5 * h)? - central(h)?) / 3.0;
                    Ok((f.eval_jet(x, k)?.derivative(k), fd))
                })();
                let metric = match &outcome {
                    Ok((_, fd)) if fd.abs() < 1e-8 => Metric::Absolute,
                    _ => Metric::Relative,
                };
                results.push(CaseResult::new(
                    "jet",
                    format!("f={src} x={x} order={k}"),
                    metric,
                    tol,
                    outcome,
                ));
            }
        }
    }
    results
}

/// `(1/Γ(α)) ∫_a^t (g(t) - g(τ))^(α-1) f(τ) g'(τ) dτ` by tanh-sinh
/// quadrature in τ, with the kernel gap computed from `t - τ` directly.
fn classical_integral_tanh_sinh(
    f: &impl RealFn,
    g: &KernelFunction,
    alpha: f64,
    a: f64,
    t: f64,
) -> Result<f64> {
    let len = t - a;
    let gap = |d: f64| -> Result<f64> {
        let x = d / t;
        Ok(match g.family() {
            crate::kernels::KernelFamily::Log => -(-x).ln_1p(),
            crate::kernels::KernelFamily::Power { mu } => {
                -t.powf(*mu) * (mu * (-x).ln_1p()).exp_m1() / mu
            }
            crate::kernels::KernelFamily::ShiftedPower { mu, shift } => {
                let base = t - shift;
                -base.powf(*mu) * (mu * (-d / base).ln_1p()).exp_m1() / mu
            }
            crate::kernels::KernelFamily::Identity => d,
            _ => g.eval(t)? - g.eval(t - d)?,
        })
    };
    let integrand = |u: f64| -> Result<f64> {
        let v = std::f64::consts::FRAC_PI_2 * u.sinh();
        // d = t - τ and e = τ - a, both accurate near their endpoints.
        let d = len / (1.0 + (2.0 * v).exp());
        let e = len / (1.0 + (-2.0 * v).exp());
        if d <= 0.0 || e <= 0.0 {
            return Ok(0.0);
        }
        let gap = gap(d)?;
        if gap <= 0.0 {
            return Ok(0.0);
        }
        let tau = if d < e { t - d } else { a + e };
        if tau <= a {
            return Ok(0.0);
        }
        let weight = std::f64::consts::FRAC_PI_2 * u.cosh() / v.cosh().powi(2);
        Ok(gap.powf(alpha - 1.0) * f.value(tau)? * g.prime(tau)? * weight * len / 2.0)
    };
    let mut h = 0.5;
    let mut sum = integrand(0.0)?;
    let mut k = 1;
    loop {
        let u = k as f64 * h;
        if u > 4.0 {
            break;
        }
        sum += integrand(u)? + integrand(-u)?;
        k += 1;
    }
    let mut previous = sum * h;
    for _ in 0..8 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let u = k as f64 * h;
            if u > 4.0 {
                break;
            }
            sum += integrand(u)? + integrand(-u)?;
            k += 2;
        }
        let current = sum * h;
        if (current - previous).abs() <= 1e-14 * current.abs() {
            return Ok(current / gamma_fn(alpha)?);
        }
        previous = current;
    }
    Err(Error::Numerical(format!(
        "tanh-sinh reference did not converge at t = {t}"
    )))
}

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use propfrac::fracderiv::{left_caputo, left_rl_deriv};
use propfrac::fracint::left_integral;
use propfrac::quadrature::jacobi_nodes;
use propfrac::verify::EXPR_CORPUS;
use propfrac::{Expr, KernelFunction, Order, Proportion, QuadConfig};

fn rules(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_nodes");
    for n in [32, 128, 512] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| jacobi_nodes(black_box(0.37), n).unwrap())
        });
    }
    group.finish();
}

fn operators(c: &mut Criterion) {
    let cfg = QuadConfig::default();
    let f = Expr::parse("exp(sin(x)) + x^2").unwrap();
    let rho = Proportion::new(0.7).unwrap();
    for (name, g, a) in [
        ("identity", KernelFunction::identity(), 0.0),
        ("log", KernelFunction::log(), 1.0),
        (
            "custom",
            KernelFunction::custom(Expr::parse("x + x^3/3").unwrap()),
            0.0,
        ),
    ] {
        c.bench_function(&format!("left_integral/{name}"), |b| {
            let alpha = Order::positive(0.6).unwrap();
            b.iter(|| left_integral(&f, &g, alpha, rho, a, black_box(a + 1.3), &cfg).unwrap())
        });
        c.bench_function(&format!("left_caputo/{name}"), |b| {
            let alpha = Order::positive(1.4).unwrap();
            b.iter(|| left_caputo(&f, &g, alpha, rho, a, black_box(a + 1.3), &cfg).unwrap())
        });
        c.bench_function(&format!("left_rl_deriv/{name}"), |b| {
            let alpha = Order::positive(1.4).unwrap();
            b.iter(|| left_rl_deriv(&f, &g, alpha, rho, a, black_box(a + 1.3), &cfg).unwrap())
        });
    }
}

fn expressions(c: &mut Criterion) {
    let exprs: Vec<Expr> = EXPR_CORPUS
        .iter()
        .map(|s| Expr::parse(s).unwrap())
        .collect();
    c.bench_function("parse/corpus", |b| {
        b.iter(|| {
            for s in EXPR_CORPUS {
                black_box(Expr::parse(black_box(s)).unwrap());
            }
        })
    });
    c.bench_function("eval/corpus", |b| {
        b.iter(|| {
            exprs
                .iter()
                .map(|e| e.eval(black_box(0.8)).unwrap())
                .sum::<f64>()
        })
    });
    c.bench_function("eval_jet4/corpus", |b| {
        b.iter(|| {
            exprs
                .iter()
                .map(|e| e.eval_jet(black_box(0.8), 4).unwrap().value())
                .sum::<f64>()
        })
    });
}

criterion_group!(benches, rules, operators, expressions);
criterion_main!(benches);

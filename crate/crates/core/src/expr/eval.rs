use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{BinOp, Func, Jet, Node};
use crate::error::{Error, Result};

/// Integer exponents up to this magnitude use repeated multiplication.
const MAX_INT_EXPONENT: f64 = 1024.0;

/// Arithmetic shared by plain and jet evaluation, so that the value
/// component of a jet is computed by exactly the same float operations.
pub(super) trait Number:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(c: f64, like: &Self) -> Self;
    fn val(&self) -> f64;
    fn order(&self) -> usize;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powf(self, p: f64) -> Self;
    fn pow(self, e: Self) -> Self;
}

impl Number for f64 {
    fn lift(c: f64, _: &Self) -> Self {
        c
    }
    fn val(&self) -> f64 {
        *self
    }
    fn order(&self) -> usize {
        0
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn pow(self, e: Self) -> Self {
        f64::powf(self, e)
    }
}

impl Number for Jet {
    fn lift(c: f64, like: &Self) -> Self {
        Jet::constant(c, like.order())
    }
    fn val(&self) -> f64 {
        self.value()
    }
    fn order(&self) -> usize {
        Jet::order(self)
    }
    fn exp(self) -> Self {
        Jet::exp(&self)
    }
    fn ln(self) -> Self {
        Jet::ln(&self)
    }
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn sqrt(self) -> Self {
        Jet::sqrt(&self)
    }
    fn powf(self, p: f64) -> Self {
        Jet::powf(&self, p)
    }
    fn pow(self, e: Self) -> Self {
        Jet::pow(&self, &e)
    }
}

pub(super) fn eval_node<N: Number>(node: &Node, x: &N) -> Result<N> {
    let out = eval_rec(node, x)?;
    if out.val().is_finite() {
        Ok(out)
    } else {
        Err(Error::Domain {
            op: "non-finite result",
            arg: out.val(),
        })
    }
}

fn eval_rec<N: Number>(node: &Node, x: &N) -> Result<N> {
    Ok(match node {
        Node::Const(c) => N::lift(*c, x),
        Node::Var => *x,
        Node::Neg(inner) => -eval_rec(inner, x)?,
        Node::Call(func, arg) => call(*func, eval_rec(arg, x)?)?,
        Node::Binary(BinOp::Pow, base, exponent) => {
            let b = eval_rec(base, x)?;
            if exponent.is_constant() {
                let p = eval_rec::<f64>(exponent, &0.0)?;
                pow_const(b, p)?
            } else {
                let e = eval_rec(exponent, x)?;
                if b.val() <= 0.0 {
                    return Err(Error::Domain {
                        op: "pow (variable exponent)",
                        arg: b.val(),
                    });
                }
                b.pow(e)
            }
        }
        Node::Binary(op, l, r) => {
            let (l, r) = (eval_rec(l, x)?, eval_rec(r, x)?);
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r.val() == 0.0 {
                        return Err(Error::Domain {
                            op: "division",
                            arg: 0.0,
                        });
                    }
                    l / r
                }
                BinOp::Pow => unreachable!(),
            }
        }
    })
}

fn call<N: Number>(func: Func, a: N) -> Result<N> {
    let v = a.val();
    let bad = match func {
        Func::Ln => v <= 0.0,
        Func::Sqrt => v < 0.0 || (v == 0.0 && a.order() > 0),
        Func::Abs => v == 0.0 && a.order() > 0,
        _ => false,
    };
    if bad || v.is_nan() {
        return Err(Error::Domain {
            op: func.name(),
            arg: v,
        });
    }
    Ok(match func {
        Func::Exp => a.exp(),
        Func::Ln => a.ln(),
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Sqrt => a.sqrt(),
        Func::Abs => {
            if v.is_sign_negative() {
                -a
            } else {
                a
            }
        }
    })
}

fn pow_const<N: Number>(b: N, p: f64) -> Result<N> {
    let v = b.val();
    if p.fract() == 0.0 && p.abs() <= MAX_INT_EXPONENT {
        if p < 0.0 && v == 0.0 {
            return Err(Error::Domain {
                op: "pow (zero base, negative exponent)",
                arg: v,
            });
        }
        return Ok(powi(b, p as i64));
    }
    if v > 0.0 {
        Ok(b.powf(p))
    } else if v == 0.0 && p > 0.0 && b.order() == 0 {
        Ok(N::lift(0.0, &b))
    } else {
        Err(Error::Domain {
            op: "pow (non-integer exponent)",
            arg: v,
        })
    }
}

fn powi<N: Number>(b: N, n: i64) -> N {
    let mut acc: Option<N> = None;
    let mut base = b;
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(r) => r * base,
                None => base,
            });
        }
        e >>= 1;
        if e > 0 {
            base = base * base;
        }
    }
    let one = N::lift(1.0, &b);
    let r = acc.unwrap_or(one);
    if n < 0 {
        one / r
    } else {
        r
    }
}

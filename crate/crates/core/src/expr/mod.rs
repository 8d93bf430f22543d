//! A small arithmetic expression language for univariate real functions.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right-associative
//! primary := number | 'x' | 'e' | 'pi' | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Functions: `exp`, `ln`, `sin`, `cos`, `sqrt`, `abs` (one argument) and
//! `pow` (two arguments, equivalent to `^`). `^` binds tighter than unary
//! minus, so `-x^2` is `-(x^2)`.
//!
//! Every expression can be evaluated either as a plain `f64` or as a
//! truncated Taylor [`Jet`], which yields exact derivatives up to order 4.

mod eval;
mod jet;
mod parse;

use std::fmt;

pub use jet::{Jet, MAX_ORDER};
pub use parse::ParseError;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// One node of an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn binary(op: BinOp, lhs: Node, rhs: Node) -> Node {
        Node::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Node) -> Node {
        Node::Call(func, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Node) -> Node {
        Node::Neg(Box::new(inner))
    }

    /// True when the subtree does not reference `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Node::Const(_) => true,
            Node::Var => false,
            Node::Neg(inner) | Node::Call(_, inner) => inner.is_constant(),
            Node::Binary(_, l, r) => l.is_constant() && r.is_constant(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Node::Neg(_) => 3,
            Node::Binary(BinOp::Pow, ..) => 4,
            Node::Const(_) | Node::Var | Node::Call(..) => 5,
        }
    }
}

/// A parsed expression in the single variable `x`.
///
/// Immutable once built; evaluation takes `&self` and is safe to share
/// across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        parse::parse(text).map(|root| Expr { root })
    }

    pub fn from_node(root: Node) -> Expr {
        Expr { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluates the expression at `x`.
    ///
    /// Domain violations (`ln` of a non-positive number, division by zero,
    /// ...) are reported as [`crate::Error::Domain`] rather than as NaN.
    pub fn eval(&self, x: f64) -> Result<f64> {
        eval::eval_node::<f64>(&self.root, &x)
    }

    /// Evaluates the value and the first `order` derivatives at `x`.
    pub fn eval_jet(&self, x: f64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(crate::Error::UnsupportedOrder(order));
        }
        eval::eval_node::<Jet>(&self.root, &Jet::variable(x, order))
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.root, f)
    }
}

fn write_const(c: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let a = c.abs();
    let body = if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{a:e}")
    } else {
        format!("{a}")
    };
    if c.is_sign_negative() {
        write!(f, "(-{body})")
    } else {
        f.write_str(&body)
    }
}

fn write_child(node: &Node, paren: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if paren {
        f.write_str("(")?;
        write_node(node, f)?;
        f.write_str(")")
    } else {
        write_node(node, f)
    }
}

fn write_node(node: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match node {
        Node::Const(c) => write_const(*c, f),
        Node::Var => f.write_str("x"),
        Node::Neg(inner) => {
            f.write_str("-")?;
            write_child(inner, inner.precedence() < 3, f)
        }
        Node::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            write_node(arg, f)?;
            f.write_str(")")
        }
        Node::Binary(BinOp::Pow, l, r) => {
            write_child(l, l.precedence() <= 4, f)?;
            f.write_str("^")?;
            write_child(r, r.precedence() < 4, f)
        }
        Node::Binary(op, l, r) => {
            let p = node.precedence();
            write_child(l, l.precedence() < p, f)?;
            f.write_str(match op {
                BinOp::Add => " + ",
                BinOp::Sub => " - ",
                BinOp::Mul => " * ",
                BinOp::Div => " / ",
                BinOp::Pow => unreachable!(),
            })?;
            write_child(r, r.precedence() <= p, f)
        }
    }
}

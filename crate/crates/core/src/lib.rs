//! Generalized proportional fractional integrals and derivatives of a
//! function with respect to a strictly increasing kernel `g`.
//!
//! ```
//! use propfrac::{fracint, Expr, KernelFunction, Order, Proportion, QuadConfig};
//!
//! let f = Expr::parse("1").unwrap();
//! let g = KernelFunction::identity();
//! let alpha = Order::positive(0.5).unwrap();
//! let rho = Proportion::new(1.0).unwrap();
//! let v = fracint::left_integral(&f, &g, alpha, rho, 0.0, 1.0, &QuadConfig::default()).unwrap();
//! assert!((v.value - 1.1283791670955126).abs() < 1e-10);
//! ```

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod fracderiv;
pub mod fracint;
pub mod function;
pub mod kernels;
pub mod operator;
pub mod oracles;
pub mod params;
pub mod propderiv;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{Expr, Jet};
pub use function::{RealFn, Side};
pub use kernels::{KernelFamily, KernelFunction, KernelValidation};
pub use operator::{EvalRow, EvalTable, OpKind, OperatorSpec};
pub use params::{Order, Proportion};
pub use quadrature::{Estimate, QuadConfig};

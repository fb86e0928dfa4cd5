//! On-the-fly model checking of alternating-time temporal logic over concurrent game structures.
//!
//! A query `q ⊨ φ` is encoded as an extended dependency graph whose minimum fixed point
//! assigns 1 to the root exactly when the query holds. The graph is either built in full
//! and solved level by level ([`global`]), or explored lazily by a pool of workers that stops
//! as soon as the root value is certain ([`local`]), in an order chosen by a search
//! [`strategy`].

pub mod atl;
pub mod dot;
pub mod edg;
pub mod error;
pub mod expr;
pub mod game;
pub mod global;
pub mod lcgs;
pub mod local;
pub mod models;
pub mod strategy;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use error::{FormulaError, LcgsError, Location, ModelError};
pub use expr::{BinaryOp, Builtin, EvalContext, Expr, UnaryOp};
pub use game::{GameStructure, State};
pub use lcgs::CompiledGame;

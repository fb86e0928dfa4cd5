//! The LCGS modelling language: lexer, parser, and instantiation into a [`CompiledGame`].
//!
//! ```
//! let game = gamecheck::lcgs::compile(
//!     "player p = counter [];
//!      template counter
//!          x : [0 .. 3] init 0;
//!          x' = min(x + 1, 3);
//!          label full = x == 3;
//!          [tick] 1;
//!      endtemplate",
//! )
//! .unwrap();
//! assert_eq!(game.variables[0].name, "p.x");
//! ```

pub mod ast;
mod compile;
mod compiled;
pub mod lexer;
pub mod parser;

pub use ast::LcgsAst;
pub use compile::{check_ranges, fold_constants, resolve_and_instantiate, simplify};
pub use compiled::{Action, CompiledGame, Label, Player, Variable};
pub use lexer::tokenize;
pub use parser::parse;

use crate::error::LcgsError;

/// Parse LCGS source into a syntax tree.
pub fn parse_source(source: &str) -> Result<LcgsAst, LcgsError> {
    parse(&tokenize(source)?)
}

/// Lex, parse, instantiate and range-check LCGS source.
pub fn compile(source: &str) -> Result<CompiledGame, LcgsError> {
    resolve_and_instantiate(&parse_source(source)?)
}

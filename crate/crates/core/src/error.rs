use std::fmt;

use thiserror::Error;

/// A source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Errors raised while turning LCGS text into a game.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcgsError {
    #[error("{location}: unexpected character {found:?}")]
    Lexical { location: Location, found: char },
    #[error("{location}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        location: Location,
        expected: Vec<String>,
        found: String,
    },
    #[error("duplicate declaration of `{name}`{}", scope_suffix(.scope))]
    Duplicate { name: String, scope: Option<String> },
    #[error("undefined identifier `{name}`{}", scope_suffix(.scope))]
    Undefined { name: String, scope: Option<String> },
    #[error("player `{player}` instantiates unknown template `{template}`")]
    UnknownTemplate { player: String, template: String },
    #[error("circular definition involving `{0}`")]
    Circular(String),
    #[error("invalid relabelling in player `{player}`: {reason}")]
    InvalidRelabelling { player: String, reason: String },
    #[error("`{name}` in player `{player}` must be a constant expression")]
    NotConstant { player: String, name: String },
    #[error("variable `{name}` has an empty range [{lo} .. {hi}]")]
    EmptyRange { name: String, lo: i64, hi: i64 },
    #[error("variable `{name}` is initialised to {value}, outside its range [{lo} .. {hi}]")]
    InitOutOfRange {
        name: String,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("variable `{name}` needs exactly one update `{name}' = ...;`, found {count}")]
    UpdateCount { name: String, count: usize },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("action indicator `{0}` may only appear in update expressions")]
    MisplacedAction(String),
    #[error("the model declares no players")]
    NoPlayers,
    #[error("{0}")]
    Evaluation(#[from] ModelError),
}

fn scope_suffix(scope: &Option<String>) -> String {
    match scope {
        Some(s) => format!(" in {s}"),
        None => String::new(),
    }
}

/// Errors raised while exploring a game at run time.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("player `{player}` has no available action in state {state:?}")]
    NoMoves { player: String, state: Vec<i64> },
    #[error("update of `{variable}` yields {value}, outside [{lo} .. {hi}], in state {state:?}")]
    OutOfRange {
        variable: String,
        value: i64,
        lo: i64,
        hi: i64,
        state: Vec<i64>,
    },
    #[error("division by zero in state {state:?}")]
    DivisionByZero { state: Vec<i64> },
    #[error("integer overflow in state {state:?}")]
    Overflow { state: Vec<i64> },
    #[error("action indicators can only be evaluated during a transition")]
    ActionOutsideTransition,
    #[error("explored more than {limit} configurations")]
    TooLarge { limit: usize },
}

/// Errors raised while reading an ATL query.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{location}: unexpected character {found:?}")]
    Lexical { location: Location, found: char },
    #[error("{location}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        location: Location,
        expected: Vec<String>,
        found: String,
    },
    #[error("{location}: unknown player `{name}`")]
    UnknownPlayer { location: Location, name: String },
    #[error("{location}: unknown proposition `{name}`")]
    UnknownProposition { location: Location, name: String },
}

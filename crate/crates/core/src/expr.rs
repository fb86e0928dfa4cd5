//! Compiled expressions over state vectors.
//!
//! Every LCGS expression is lowered into [`Expr`] once the frontend has resolved identifiers.
//! Variables refer to slots of the flattened state vector and action indicators refer to
//! `(player, action)` pairs in declaration order. Booleans and integers share one domain:
//! comparisons and connectives yield `0`/`1`, and any nonzero integer is truthy.

use std::fmt;

use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge | BinaryOp::Eq | BinaryOp::Ne
        )
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinaryOp::And | BinaryOp::Or)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Min,
    Max,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Min => "min",
            Builtin::Max => "max",
        }
    }
}

/// A resolved expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(i64),
    /// Slot of the state vector.
    Var(usize),
    /// 1 if `player` took `action` in the transition being computed, else 0.
    ActionTaken { player: usize, action: usize },
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Builtin, Vec<Expr>),
}

/// Evaluation environment: the current state and, during transitions only, the
/// action each player took (as an index into that player's declared actions).
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub state: &'a [i64],
    pub actions: Option<&'a [usize]>,
}

impl<'a> EvalContext<'a> {
    pub fn state(state: &'a [i64]) -> Self {
        EvalContext { state, actions: None }
    }

    pub fn transition(state: &'a [i64], actions: &'a [usize]) -> Self {
        EvalContext {
            state,
            actions: Some(actions),
        }
    }
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Unary(UnaryOp::Not, Box::new(e))
    }

    pub fn eval(&self, ctx: &EvalContext<'_>) -> Result<i64, ModelError> {
        let overflow = || ModelError::Overflow {
            state: ctx.state.to_vec(),
        };
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(slot) => ctx.state[*slot],
            Expr::ActionTaken { player, action } => match ctx.actions {
                Some(taken) => (taken[*player] == *action) as i64,
                None => return Err(ModelError::ActionOutsideTransition),
            },
            Expr::Unary(UnaryOp::Neg, e) => e.eval(ctx)?.checked_neg().ok_or_else(overflow)?,
            Expr::Unary(UnaryOp::Not, e) => (e.eval(ctx)? == 0) as i64,
            Expr::Binary(BinaryOp::And, l, r) => (l.eval(ctx)? != 0 && r.eval(ctx)? != 0) as i64,
            Expr::Binary(BinaryOp::Or, l, r) => (l.eval(ctx)? != 0 || r.eval(ctx)? != 0) as i64,
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.eval(ctx)?, r.eval(ctx)?);
                match op {
                    BinaryOp::Add => a.checked_add(b).ok_or_else(overflow)?,
                    BinaryOp::Sub => a.checked_sub(b).ok_or_else(overflow)?,
                    BinaryOp::Mul => a.checked_mul(b).ok_or_else(overflow)?,
                    BinaryOp::Div => {
                        if b == 0 {
                            return Err(ModelError::DivisionByZero {
                                state: ctx.state.to_vec(),
                            });
                        }
                        // Rust integer division truncates toward zero.
                        a.checked_div(b).ok_or_else(overflow)?
                    }
                    BinaryOp::Lt => (a < b) as i64,
                    BinaryOp::Le => (a <= b) as i64,
                    BinaryOp::Gt => (a > b) as i64,
                    BinaryOp::Ge => (a >= b) as i64,
                    BinaryOp::Eq => (a == b) as i64,
                    BinaryOp::Ne => (a != b) as i64,
                    BinaryOp::And | BinaryOp::Or => unreachable!(),
                }
            }
            Expr::Call(f, args) => {
                let mut values = args.iter().map(|a| a.eval(ctx));
                let first = values.next().expect("builtins take at least one argument")?;
                values.try_fold(first, |acc, v| {
                    let v = v?;
                    Ok(match f {
                        Builtin::Min => acc.min(v),
                        Builtin::Max => acc.max(v),
                    })
                })?
            }
        })
    }

    /// Evaluate as a condition.
    pub fn holds(&self, ctx: &EvalContext<'_>) -> Result<bool, ModelError> {
        Ok(self.eval(ctx)? != 0)
    }

    /// Whether the expression mentions any action indicator.
    pub fn uses_actions(&self) -> bool {
        match self {
            Expr::ActionTaken { .. } => true,
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Unary(_, e) => e.uses_actions(),
            Expr::Binary(_, l, r) => l.uses_actions() || r.uses_actions(),
            Expr::Call(_, args) => args.iter().any(Expr::uses_actions),
        }
    }

    /// Whether the expression reads any state variable or action indicator.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) | Expr::ActionTaken { .. } => false,
            Expr::Unary(_, e) => e.is_constant(),
            Expr::Binary(_, l, r) => l.is_constant() && r.is_constant(),
            Expr::Call(_, args) => args.iter().all(Expr::is_constant),
        }
    }

    /// Boolean-valued at the top level (comparison, connective or negation).
    pub fn is_boolean(&self) -> bool {
        match self {
            Expr::Unary(UnaryOp::Not, _) => true,
            Expr::Binary(op, _, _) => op.is_comparison() || op.is_logical(),
            _ => false,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(slot) => write!(f, "${slot}"),
            Expr::ActionTaken { player, action } => write!(f, "@{player}.{action}"),
            Expr::Unary(UnaryOp::Neg, e) => write!(f, "-({e})"),
            Expr::Unary(UnaryOp::Not, e) => write!(f, "!({e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(b, args) => {
                write!(f, "{}(", b.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

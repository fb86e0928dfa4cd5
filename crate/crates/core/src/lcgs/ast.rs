//! Syntax tree of an LCGS program, as written (before relabelling and resolution).

use std::fmt;

pub use crate::expr::{BinaryOp, Builtin, UnaryOp};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Ident(String),
    /// `owner.member`, e.g. `opp_right.health`.
    Qualified(String, String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Builtin, Vec<Expr>),
}

impl Expr {
    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.to_string())
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstDecl {
    pub name: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: Expr,
    pub hi: Expr,
    pub init: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateDecl {
    pub name: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDecl {
    pub name: String,
    pub condition: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: String,
    pub available: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TemplateDecl {
    pub name: String,
    pub vars: Vec<VarDecl>,
    pub updates: Vec<UpdateDecl>,
    pub labels: Vec<LabelDecl>,
    pub actions: Vec<ActionDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerDecl {
    pub name: String,
    pub template: String,
    pub relabelling: Vec<(String, Expr)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LcgsAst {
    pub consts: Vec<ConstDecl>,
    pub templates: Vec<TemplateDecl>,
    pub players: Vec<PlayerDecl>,
}

impl LcgsAst {
    pub fn template(&self, name: &str) -> Option<&TemplateDecl> {
        self.templates.iter().find(|t| t.name == name)
    }
}

// Printing is fully parenthesised so that re-parsing yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) if *v < 0 => write!(f, "(-{})", v.unsigned_abs()),
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Ident(name) => f.write_str(name),
            Expr::Qualified(owner, member) => write!(f, "{owner}.{member}"),
            Expr::Unary(UnaryOp::Neg, e) => write!(f, "(-{e})"),
            Expr::Unary(UnaryOp::Not, e) => write!(f, "(!{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(b, args) => {
                write!(f, "{}(", b.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for TemplateDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "template {}", self.name)?;
        for v in &self.vars {
            writeln!(f, "    {} : [{} .. {}] init {};", v.name, v.lo, v.hi, v.init)?;
        }
        for u in &self.updates {
            writeln!(f, "    {}' = {};", u.name, u.value)?;
        }
        for l in &self.labels {
            writeln!(f, "    label {} = {};", l.name, l.condition)?;
        }
        for a in &self.actions {
            writeln!(f, "    [{}] {};", a.name, a.available)?;
        }
        writeln!(f, "endtemplate")
    }
}

impl fmt::Display for LcgsAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.consts {
            writeln!(f, "const {} = {};", c.name, c.value)?;
        }
        for t in &self.templates {
            writeln!(f)?;
            write!(f, "{t}")?;
        }
        if !self.players.is_empty() {
            writeln!(f)?;
        }
        for p in &self.players {
            write!(f, "player {} = {} [", p.name, p.template)?;
            for (i, (from, to)) in p.relabelling.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{from}={to}")?;
            }
            writeln!(f, "];")?;
        }
        Ok(())
    }
}

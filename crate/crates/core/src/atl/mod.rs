//! Alternating-time temporal logic.
//!
//! [`Phi`] is the user-facing syntax, including derived operators. [`desugar`] rewrites it
//! into the core forms `true`, `p`, `¬`, `∨`, `⟪A⟫◯`, `⟪A⟫U` and `⟦A⟧U`, and a
//! [`FormulaArena`] hash-conses core formulas so that equal subformulas share one id.

mod arena;
mod parser;

pub use arena::{FormulaArena, FormulaId, Node};
pub use parser::parse_formula;

use std::fmt;

use crate::game::GameStructure;

/// A coalition, as a bitset over player indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PlayerSet(u64);

impl PlayerSet {
    pub const MAX_PLAYERS: usize = 64;

    pub fn empty() -> Self {
        PlayerSet(0)
    }

    pub fn all(k: usize) -> Self {
        assert!(k <= Self::MAX_PLAYERS);
        PlayerSet(if k == 64 { u64::MAX } else { (1u64 << k) - 1 })
    }

    pub fn from_players(players: impl IntoIterator<Item = usize>) -> Self {
        players.into_iter().fold(PlayerSet(0), |s, p| s.with(p))
    }

    pub fn with(self, player: usize) -> Self {
        assert!(player < Self::MAX_PLAYERS);
        PlayerSet(self.0 | (1 << player))
    }

    pub fn contains(self, player: usize) -> bool {
        player < Self::MAX_PLAYERS && self.0 & (1 << player) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..Self::MAX_PLAYERS).filter(move |&p| self.contains(p))
    }

    fn write(self, f: &mut fmt::Formatter<'_>, game: &dyn GameStructure) -> fmt::Result {
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(game.player_name(p))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Phi {
    True,
    False,
    Prop(usize),
    Not(Box<Phi>),
    Or(Box<Phi>, Box<Phi>),
    And(Box<Phi>, Box<Phi>),
    EnforceNext(PlayerSet, Box<Phi>),
    DespiteNext(PlayerSet, Box<Phi>),
    EnforceUntil(PlayerSet, Box<Phi>, Box<Phi>),
    DespiteUntil(PlayerSet, Box<Phi>, Box<Phi>),
    EnforceEventually(PlayerSet, Box<Phi>),
    DespiteEventually(PlayerSet, Box<Phi>),
    EnforceInvariant(PlayerSet, Box<Phi>),
    DespiteInvariant(PlayerSet, Box<Phi>),
}

#[allow(clippy::should_implement_trait)]
impl Phi {
    pub fn not(phi: Phi) -> Phi {
        Phi::Not(Box::new(phi))
    }

    pub fn or(a: Phi, b: Phi) -> Phi {
        Phi::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Phi, b: Phi) -> Phi {
        Phi::And(Box::new(a), Box::new(b))
    }

    pub fn is_core(&self) -> bool {
        match self {
            Phi::True | Phi::Prop(_) => true,
            Phi::Not(a) | Phi::EnforceNext(_, a) => a.is_core(),
            Phi::Or(a, b) | Phi::EnforceUntil(_, a, b) | Phi::DespiteUntil(_, a, b) => {
                a.is_core() && b.is_core()
            }
            _ => false,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Phi::True | Phi::False | Phi::Prop(_) => 1,
            Phi::Not(a)
            | Phi::EnforceNext(_, a)
            | Phi::DespiteNext(_, a)
            | Phi::EnforceEventually(_, a)
            | Phi::DespiteEventually(_, a)
            | Phi::EnforceInvariant(_, a)
            | Phi::DespiteInvariant(_, a) => 1 + a.size(),
            Phi::Or(a, b)
            | Phi::And(a, b)
            | Phi::EnforceUntil(_, a, b)
            | Phi::DespiteUntil(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Render in query syntax.
    pub fn display<'a>(&'a self, game: &'a dyn GameStructure) -> impl fmt::Display + 'a {
        PhiDisplay { phi: self, game }
    }
}

/// Node count of the core form of `phi`.
pub fn subformula_size(phi: &Phi) -> usize {
    desugar(phi).size()
}

/// Rewrite derived operators into core forms.
pub fn desugar(phi: &Phi) -> Phi {
    let d = |x: &Phi| Box::new(desugar(x));
    let not = |x: Phi| Phi::Not(Box::new(x));
    match phi {
        Phi::True => Phi::True,
        Phi::False => not(Phi::True),
        Phi::Prop(p) => Phi::Prop(*p),
        Phi::Not(a) => Phi::Not(d(a)),
        Phi::Or(a, b) => Phi::Or(d(a), d(b)),
        Phi::And(a, b) => not(Phi::Or(
            Box::new(not(desugar(a))),
            Box::new(not(desugar(b))),
        )),
        Phi::EnforceNext(c, a) => Phi::EnforceNext(*c, d(a)),
        Phi::DespiteNext(c, a) => not(Phi::EnforceNext(*c, Box::new(not(desugar(a))))),
        Phi::EnforceUntil(c, a, b) => Phi::EnforceUntil(*c, d(a), d(b)),
        Phi::DespiteUntil(c, a, b) => Phi::DespiteUntil(*c, d(a), d(b)),
        Phi::EnforceEventually(c, a) => Phi::EnforceUntil(*c, Box::new(Phi::True), d(a)),
        Phi::DespiteEventually(c, a) => Phi::DespiteUntil(*c, Box::new(Phi::True), d(a)),
        Phi::EnforceInvariant(c, a) => not(Phi::DespiteUntil(
            *c,
            Box::new(Phi::True),
            Box::new(not(desugar(a))),
        )),
        Phi::DespiteInvariant(c, a) => not(Phi::EnforceUntil(
            *c,
            Box::new(Phi::True),
            Box::new(not(desugar(a))),
        )),
    }
}

struct PhiDisplay<'a> {
    phi: &'a Phi,
    game: &'a dyn GameStructure,
}

impl fmt::Display for PhiDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |phi| PhiDisplay {
            phi,
            game: self.game,
        };
        let enforce = |f: &mut fmt::Formatter<'_>, c: &PlayerSet| {
            f.write_str("<<")?;
            c.write(f, self.game)?;
            f.write_str(">>")
        };
        let despite = |f: &mut fmt::Formatter<'_>, c: &PlayerSet| {
            f.write_str("[[")?;
            c.write(f, self.game)?;
            f.write_str("]]")
        };
        match self.phi {
            Phi::True => f.write_str("true"),
            Phi::False => f.write_str("false"),
            Phi::Prop(p) => f.write_str(self.game.proposition_name(*p)),
            Phi::Not(a) => write!(f, "!{}", sub(a)),
            Phi::Or(a, b) => write!(f, "({} || {})", sub(a), sub(b)),
            Phi::And(a, b) => write!(f, "({} && {})", sub(a), sub(b)),
            Phi::EnforceNext(c, a) => {
                enforce(f, c)?;
                write!(f, " X {}", sub(a))
            }
            Phi::DespiteNext(c, a) => {
                despite(f, c)?;
                write!(f, " X {}", sub(a))
            }
            Phi::EnforceEventually(c, a) => {
                enforce(f, c)?;
                write!(f, " F {}", sub(a))
            }
            Phi::DespiteEventually(c, a) => {
                despite(f, c)?;
                write!(f, " F {}", sub(a))
            }
            Phi::EnforceInvariant(c, a) => {
                enforce(f, c)?;
                write!(f, " G {}", sub(a))
            }
            Phi::DespiteInvariant(c, a) => {
                despite(f, c)?;
                write!(f, " G {}", sub(a))
            }
            Phi::EnforceUntil(c, a, b) => {
                enforce(f, c)?;
                write!(f, " ({} U {})", sub(a), sub(b))
            }
            Phi::DespiteUntil(c, a, b) => {
                despite(f, c)?;
                write!(f, " ({} U {})", sub(a), sub(b))
            }
        }
    }
}

//! Query syntax:
//!
//! ```text
//! phi      := and ('||' and)*
//! and      := unary ('&&' unary)*
//! unary    := '!' unary | primary
//! primary  := '(' phi ')' | 'true' | 'false' | IDENT '.' IDENT
//!           | '<<' players '>>' temporal | '[[' players ']]' temporal
//! temporal := 'X' unary | 'F' unary | 'G' unary | '(' phi 'U' phi ')'
//! players  := (IDENT (',' IDENT)*)?
//! ```

use super::{Phi, PlayerSet};
use crate::error::{FormulaError, Location};
use crate::game::GameStructure;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LAngle,
    RAngle,
    LDouble,
    RDouble,
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    AndAnd,
    OrOr,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("`{name}`"),
            Tok::LAngle => "`<<`".into(),
            Tok::RAngle => "`>>`".into(),
            Tok::LDouble => "`[[`".into(),
            Tok::RDouble => "`]]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bang => "`!`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Location)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let location = Location { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let pair = |s: &str| chars[i..].starts_with(&s.chars().collect::<Vec<_>>());
        let tok = if c.is_ascii_alphanumeric() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            let (tok, width) = if pair("<<") {
                (Tok::LAngle, 2)
            } else if pair(">>") {
                (Tok::RAngle, 2)
            } else if pair("[[") {
                (Tok::LDouble, 2)
            } else if pair("]]") {
                (Tok::RDouble, 2)
            } else if pair("&&") {
                (Tok::AndAnd, 2)
            } else if pair("||") {
                (Tok::OrOr, 2)
            } else {
                match c {
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    ',' => (Tok::Comma, 1),
                    '.' => (Tok::Dot, 1),
                    '!' => (Tok::Bang, 1),
                    _ => return Err(FormulaError::Lexical { location, found: c }),
                }
            };
            i += width;
            tok
        };
        column += i - start;
        out.push((tok, location));
    }
    out.push((Tok::End, Location { line, column }));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, Location)>,
    pos: usize,
    game: &'a dyn GameStructure,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn location(&self) -> Location {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if tok != Tok::End {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[&str]) -> FormulaError {
        FormulaError::Syntax {
            location: self.location(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn phi(&mut self) -> Result<Phi, FormulaError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::OrOr {
            self.advance();
            lhs = Phi::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Phi, FormulaError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::AndAnd {
            self.advance();
            lhs = Phi::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Phi, FormulaError> {
        if *self.peek() == Tok::Bang {
            self.advance();
            return Ok(Phi::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Phi, FormulaError> {
        let location = self.location();
        match self.advance() {
            Tok::LParen => {
                let inner = self.phi()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(w) if w == "true" => Ok(Phi::True),
            Tok::Ident(w) if w == "false" => Ok(Phi::False),
            Tok::Ident(owner) => {
                self.expect(Tok::Dot)?;
                let member = match self.advance() {
                    Tok::Ident(m) => m,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&["label name"]));
                    }
                };
                let name = format!("{owner}.{member}");
                self.game
                    .proposition_index(&name)
                    .map(Phi::Prop)
                    .ok_or(FormulaError::UnknownProposition { location, name })
            }
            Tok::LAngle => {
                let coalition = self.players(Tok::RAngle)?;
                self.temporal(coalition, true)
            }
            Tok::LDouble => {
                let coalition = self.players(Tok::RDouble)?;
                self.temporal(coalition, false)
            }
            Tok::End => Err(self.error(&["formula"])),
            _ => {
                self.pos -= 1;
                Err(self.error(&["formula"]))
            }
        }
    }

    fn players(&mut self, close: Tok) -> Result<PlayerSet, FormulaError> {
        let mut set = PlayerSet::empty();
        if *self.peek() == close {
            self.advance();
            return Ok(set);
        }
        loop {
            let location = self.location();
            match self.advance() {
                Tok::Ident(name) => match self.game.player_index(&name) {
                    Some(p) if p < PlayerSet::MAX_PLAYERS => set = set.with(p),
                    _ => return Err(FormulaError::UnknownPlayer { location, name }),
                },
                _ => {
                    self.pos -= 1;
                    return Err(self.error(&["player name"]));
                }
            }
            match self.advance() {
                Tok::Comma => continue,
                t if t == close => return Ok(set),
                _ => {
                    self.pos -= 1;
                    return Err(self.error(&["`,`", &close.describe()]));
                }
            }
        }
    }

    fn temporal(&mut self, c: PlayerSet, enforce: bool) -> Result<Phi, FormulaError> {
        let op = if self.keyword("X") || self.keyword("F") || self.keyword("G") {
            match self.advance() {
                Tok::Ident(w) => w,
                _ => unreachable!(),
            }
        } else if *self.peek() == Tok::LParen {
            self.advance();
            let lhs = self.phi()?;
            if !self.keyword("U") {
                return Err(self.error(&["`U`"]));
            }
            self.advance();
            let rhs = self.phi()?;
            self.expect(Tok::RParen)?;
            let (lhs, rhs) = (Box::new(lhs), Box::new(rhs));
            return Ok(if enforce {
                Phi::EnforceUntil(c, lhs, rhs)
            } else {
                Phi::DespiteUntil(c, lhs, rhs)
            });
        } else {
            return Err(self.error(&["`X`", "`F`", "`G`", "`(`"]));
        };
        let body = Box::new(self.unary()?);
        Ok(match (op.as_str(), enforce) {
            ("X", true) => Phi::EnforceNext(c, body),
            ("X", false) => Phi::DespiteNext(c, body),
            ("F", true) => Phi::EnforceEventually(c, body),
            ("F", false) => Phi::DespiteEventually(c, body),
            ("G", true) => Phi::EnforceInvariant(c, body),
            _ => Phi::DespiteInvariant(c, body),
        })
    }
}

/// Parse a query against the players and labels of `game`.
pub fn parse_formula(text: &str, game: &dyn GameStructure) -> Result<Phi, FormulaError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        game,
    };
    let phi = parser.phi()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(&["`&&`", "`||`", "end of input"]));
    }
    Ok(phi)
}

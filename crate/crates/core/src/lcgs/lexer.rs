use std::fmt;

use crate::error::{LcgsError, Location};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Const,
    Template,
    EndTemplate,
    Player,
    Label,
    Init,
    Min,
    Max,
    Ident(String),
    /// `name'`, the next-state value of a variable.
    Primed(String),
    Int(i64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semicolon,
    Colon,
    Dot,
    DotDot,
    Assign,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    AndAnd,
    OrOr,
    Bang,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Token::Const => "`const`",
            Token::Template => "`template`",
            Token::EndTemplate => "`endtemplate`",
            Token::Player => "`player`",
            Token::Label => "`label`",
            Token::Init => "`init`",
            Token::Min => "`min`",
            Token::Max => "`max`",
            Token::Ident(name) => return write!(f, "identifier `{name}`"),
            Token::Primed(name) => return write!(f, "`{name}'`"),
            Token::Int(v) => return write!(f, "integer `{v}`"),
            Token::LBracket => "`[`",
            Token::RBracket => "`]`",
            Token::LParen => "`(`",
            Token::RParen => "`)`",
            Token::Comma => "`,`",
            Token::Semicolon => "`;`",
            Token::Colon => "`:`",
            Token::Dot => "`.`",
            Token::DotDot => "`..`",
            Token::Assign => "`=`",
            Token::Eq => "`==`",
            Token::Ne => "`!=`",
            Token::Lt => "`<`",
            Token::Le => "`<=`",
            Token::Gt => "`>`",
            Token::Ge => "`>=`",
            Token::Plus => "`+`",
            Token::Minus => "`-`",
            Token::Star => "`*`",
            Token::Slash => "`/`",
            Token::AndAnd => "`&&`",
            Token::OrOr => "`||`",
            Token::Bang => "`!`",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub location: Location,
}

fn keyword(word: &str) -> Option<Token> {
    Some(match word {
        "const" => Token::Const,
        "template" => Token::Template,
        "endtemplate" => Token::EndTemplate,
        "player" => Token::Player,
        "label" => Token::Label,
        "init" => Token::Init,
        "min" => Token::Min,
        "max" => Token::Max,
        _ => return None,
    })
}

/// Split LCGS source into tokens. Line comments (`// ...`) and whitespace are dropped.
pub fn tokenize(source: &str) -> Result<Vec<Spanned>, LcgsError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let location = Location { line, column };
        let peek = chars.get(i + 1).copied();

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
        if c == '/' && peek == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let token = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if i < chars.len() && chars[i] == '\'' {
                i += 1;
                Token::Primed(word)
            } else {
                keyword(&word).unwrap_or(Token::Ident(word))
            }
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            match digits.parse() {
                Ok(v) => Token::Int(v),
                Err(_) => return Err(LcgsError::Lexical { location, found: c }),
            }
        } else {
            let (token, width) = match (c, peek) {
                ('.', Some('.')) => (Token::DotDot, 2),
                ('=', Some('=')) => (Token::Eq, 2),
                ('!', Some('=')) => (Token::Ne, 2),
                ('<', Some('=')) => (Token::Le, 2),
                ('>', Some('=')) => (Token::Ge, 2),
                ('&', Some('&')) => (Token::AndAnd, 2),
                ('|', Some('|')) => (Token::OrOr, 2),
                ('[', _) => (Token::LBracket, 1),
                (']', _) => (Token::RBracket, 1),
                ('(', _) => (Token::LParen, 1),
                (')', _) => (Token::RParen, 1),
                (',', _) => (Token::Comma, 1),
                (';', _) => (Token::Semicolon, 1),
                (':', _) => (Token::Colon, 1),
                ('.', _) => (Token::Dot, 1),
                ('=', _) => (Token::Assign, 1),
                ('<', _) => (Token::Lt, 1),
                ('>', _) => (Token::Gt, 1),
                ('+', _) => (Token::Plus, 1),
                ('-', _) => (Token::Minus, 1),
                ('*', _) => (Token::Star, 1),
                ('/', _) => (Token::Slash, 1),
                ('!', _) => (Token::Bang, 1),
                _ => return Err(LcgsError::Lexical { location, found: c }),
            };
            i += width;
            token
        };
        column += i - start;
        tokens.push(Spanned { token, location });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Token> {
        tokenize(src).unwrap().into_iter().map(|t| t.token).collect()
    }

    #[test]
    fn primed_update() {
        assert_eq!(
            kinds("health' = 2;"),
            vec![
                Token::Primed("health".into()),
                Token::Assign,
                Token::Int(2),
                Token::Semicolon
            ]
        );
    }

    #[test]
    fn action_declaration() {
        assert_eq!(
            kinds("[shoot_right] h > 0;"),
            vec![
                Token::LBracket,
                Token::Ident("shoot_right".into()),
                Token::RBracket,
                Token::Ident("h".into()),
                Token::Gt,
                Token::Int(0),
                Token::Semicolon
            ]
        );
    }

    #[test]
    fn comments_are_dropped() {
        let tokens = kinds("// comment\nconst x = 1;");
        assert_eq!(tokens.len(), 5);
        assert_eq!(tokens[0], Token::Const);
    }

    #[test]
    fn ranges_do_not_swallow_dots() {
        assert_eq!(
            kinds("[0..max_health]"),
            vec![
                Token::LBracket,
                Token::Int(0),
                Token::DotDot,
                Token::Ident("max_health".into()),
                Token::RBracket
            ]
        );
    }

    #[test]
    fn locations_are_tracked() {
        let tokens = tokenize("const\n  x").unwrap();
        assert_eq!(tokens[1].location, Location { line: 2, column: 3 });
    }

    #[test]
    fn stray_character_is_reported() {
        let err = tokenize("const x = 1 # 2;").unwrap_err();
        assert_eq!(
            err,
            LcgsError::Lexical {
                location: Location { line: 1, column: 13 },
                found: '#'
            }
        );
    }
}

use super::ast::*;
use super::lexer::{Spanned, Token};
use crate::error::{LcgsError, Location};

/// Parse a token sequence into an [`LcgsAst`].
///
/// ```text
/// program  := (const | template | player)*
/// const    := 'const' IDENT '=' expr ';'
/// template := 'template' IDENT item* 'endtemplate'
/// item     := IDENT ':' '[' expr '..' expr ']' 'init' expr ';'
///           | IDENT' '=' expr ';'
///           | 'label' IDENT '=' expr ';'
///           | '[' IDENT ']' expr ';'
/// player   := 'player' IDENT '=' IDENT ('[' (IDENT '=' expr (',' IDENT '=' expr)*)? ']')? ';'
/// ```
pub fn parse(tokens: &[Spanned]) -> Result<LcgsAst, LcgsError> {
    let mut parser = Parser { tokens, pos: 0 };
    let mut ast = LcgsAst::default();
    while let Some(tok) = parser.peek() {
        match tok {
            Token::Const => ast.consts.push(parser.const_decl()?),
            Token::Template => ast.templates.push(parser.template()?),
            Token::Player => ast.players.push(parser.player()?),
            _ => return Err(parser.unexpected(&["`const`", "`template`", "`player`"])),
        }
    }
    Ok(ast)
}

/// Parse a standalone LCGS expression (used by tests and tooling).
pub fn parse_expr(tokens: &[Spanned]) -> Result<Expr, LcgsError> {
    let mut parser = Parser { tokens, pos: 0 };
    let e = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected(&["end of input"]));
    }
    Ok(e)
}

struct Parser<'t> {
    tokens: &'t [Spanned],
    pos: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + offset).map(|t| &t.token)
    }

    fn location(&self) -> Location {
        match self.tokens.get(self.pos) {
            Some(t) => t.location,
            None => self
                .tokens
                .last()
                .map(|t| Location {
                    line: t.location.line,
                    column: t.location.column + 1,
                })
                .unwrap_or(Location { line: 1, column: 1 }),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> LcgsError {
        LcgsError::Syntax {
            location: self.location(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self
                .peek()
                .map(|t| t.to_string())
                .unwrap_or_else(|| "end of input".to_string()),
        }
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expect(&mut self, token: Token) -> Result<(), LcgsError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&[&token.to_string()]))
        }
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, LcgsError> {
        match self.peek() {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(name.clone())
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn const_decl(&mut self) -> Result<ConstDecl, LcgsError> {
        self.expect(Token::Const)?;
        let name = self.ident()?;
        self.expect(Token::Assign)?;
        let value = self.expr()?;
        self.expect(Token::Semicolon)?;
        Ok(ConstDecl { name, value })
    }

    fn template(&mut self) -> Result<TemplateDecl, LcgsError> {
        self.expect(Token::Template)?;
        let mut template = TemplateDecl {
            name: self.ident()?,
            ..TemplateDecl::default()
        };
        loop {
            match self.peek() {
                Some(Token::EndTemplate) => {
                    self.pos += 1;
                    return Ok(template);
                }
                Some(Token::Ident(_)) => {
                    let name = self.ident()?;
                    self.expect(Token::Colon)?;
                    self.expect(Token::LBracket)?;
                    let lo = self.expr()?;
                    self.expect(Token::DotDot)?;
                    let hi = self.expr()?;
                    self.expect(Token::RBracket)?;
                    self.expect(Token::Init)?;
                    let init = self.expr()?;
                    self.expect(Token::Semicolon)?;
                    template.vars.push(VarDecl { name, lo, hi, init });
                }
                Some(Token::Primed(name)) => {
                    let name = name.clone();
                    self.pos += 1;
                    self.expect(Token::Assign)?;
                    let value = self.expr()?;
                    self.expect(Token::Semicolon)?;
                    template.updates.push(UpdateDecl { name, value });
                }
                Some(Token::Label) => {
                    self.pos += 1;
                    let name = self.ident()?;
                    self.expect(Token::Assign)?;
                    let condition = self.expr()?;
                    self.expect(Token::Semicolon)?;
                    template.labels.push(LabelDecl { name, condition });
                }
                Some(Token::LBracket) => {
                    self.pos += 1;
                    let name = self.ident()?;
                    self.expect(Token::RBracket)?;
                    let available = self.expr()?;
                    self.expect(Token::Semicolon)?;
                    template.actions.push(ActionDecl { name, available });
                }
                _ => {
                    return Err(self.unexpected(&[
                        "variable declaration",
                        "update",
                        "`label`",
                        "`[`",
                        "`endtemplate`",
                    ]))
                }
            }
        }
    }

    fn player(&mut self) -> Result<PlayerDecl, LcgsError> {
        self.expect(Token::Player)?;
        let name = self.ident()?;
        self.expect(Token::Assign)?;
        let template = self.ident()?;
        let mut relabelling = Vec::new();
        if self.eat(&Token::LBracket) && !self.eat(&Token::RBracket) {
            loop {
                let from = self.ident()?;
                self.expect(Token::Assign)?;
                let to = self.expr()?;
                relabelling.push((from, to));
                if self.eat(&Token::RBracket) {
                    break;
                }
                if !self.eat(&Token::Comma) {
                    return Err(self.unexpected(&["`,`", "`]`"]));
                }
            }
        }
        self.expect(Token::Semicolon)?;
        Ok(PlayerDecl {
            name,
            template,
            relabelling,
        })
    }

    // Precedence, loosest first: ||, &&, comparisons, + -, * /, unary.
    fn expr(&mut self) -> Result<Expr, LcgsError> {
        self.binary_level(0)
    }

    fn binary_level(&mut self, level: usize) -> Result<Expr, LcgsError> {
        const LEVELS: [&[(Token, BinaryOp)]; 5] = [
            &[(Token::OrOr, BinaryOp::Or)],
            &[(Token::AndAnd, BinaryOp::And)],
            &[
                (Token::Eq, BinaryOp::Eq),
                (Token::Ne, BinaryOp::Ne),
                (Token::Lt, BinaryOp::Lt),
                (Token::Le, BinaryOp::Le),
                (Token::Gt, BinaryOp::Gt),
                (Token::Ge, BinaryOp::Ge),
            ],
            &[(Token::Plus, BinaryOp::Add), (Token::Minus, BinaryOp::Sub)],
            &[(Token::Star, BinaryOp::Mul), (Token::Slash, BinaryOp::Div)],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary_level(level + 1)?;
        // Comparisons do not chain.
        let chains = level != 2;
        while let Some(op) = self
            .peek()
            .and_then(|t| LEVELS[level].iter().find(|(tok, _)| tok == t))
            .map(|(_, op)| *op)
        {
            self.pos += 1;
            let rhs = self.binary_level(level + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
            if !chains {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, LcgsError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(Expr::Unary(UnaryOp::Neg, Box::new(self.unary()?)))
            }
            Some(Token::Bang) => {
                self.pos += 1;
                Ok(Expr::Unary(UnaryOp::Not, Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, LcgsError> {
        match self.peek() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(*v))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Token::Dot)
                    && matches!(self.peek_at(1), Some(Token::Ident(_)))
                {
                    self.pos += 1;
                    let member = self.ident()?;
                    Ok(Expr::Qualified(name.clone(), member))
                } else {
                    Ok(Expr::Ident(name.clone()))
                }
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            Some(tok @ (Token::Min | Token::Max)) => {
                let builtin = if *tok == Token::Min {
                    Builtin::Min
                } else {
                    Builtin::Max
                };
                self.bump();
                self.expect(Token::LParen)?;
                let mut args = vec![self.expr()?];
                while self.eat(&Token::Comma) {
                    args.push(self.expr()?);
                }
                self.expect(Token::RParen)?;
                Ok(Expr::Call(builtin, args))
            }
            _ => Err(self.unexpected(&["expression"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcgs::lexer::tokenize;

    fn parse_src(src: &str) -> Result<LcgsAst, LcgsError> {
        parse(&tokenize(src)?)
    }

    fn expr(src: &str) -> Expr {
        parse_expr(&tokenize(src).unwrap()).unwrap()
    }

    #[test]
    fn empty_program() {
        assert_eq!(parse_src("").unwrap(), LcgsAst::default());
        assert_eq!(parse_src("// nothing here\n").unwrap(), LcgsAst::default());
    }

    #[test]
    fn precedence() {
        use BinaryOp::*;
        let e = expr("a + b * c > 1 && !d || e");
        let expected = Expr::binary(
            Or,
            Expr::binary(
                And,
                Expr::binary(
                    Gt,
                    Expr::binary(
                        Add,
                        Expr::ident("a"),
                        Expr::binary(Mul, Expr::ident("b"), Expr::ident("c")),
                    ),
                    Expr::Int(1),
                ),
                Expr::Unary(UnaryOp::Not, Box::new(Expr::ident("d"))),
            ),
            Expr::ident("e"),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn subtraction_is_left_associative() {
        use BinaryOp::*;
        let e = expr("a - b - c");
        assert_eq!(
            e,
            Expr::binary(
                Sub,
                Expr::binary(Sub, Expr::ident("a"), Expr::ident("b")),
                Expr::ident("c")
            )
        );
    }

    #[test]
    fn qualified_and_builtin() {
        let e = expr("max(health - opp.shoot, 0)");
        match e {
            Expr::Call(Builtin::Max, args) => {
                assert_eq!(args.len(), 2);
                assert_eq!(
                    args[0],
                    Expr::binary(
                        BinaryOp::Sub,
                        Expr::ident("health"),
                        Expr::Qualified("opp".into(), "shoot".into())
                    )
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn player_with_empty_relabelling() {
        let ast = parse_src("player p = ghost [];").unwrap();
        assert_eq!(ast.players[0].template, "ghost");
        assert!(ast.players[0].relabelling.is_empty());
    }

    #[test]
    fn missing_semicolon_reports_location_and_expectation() {
        let err = parse_src("const x = 1\nconst y = 2;").unwrap_err();
        match err {
            LcgsError::Syntax {
                location, expected, ..
            } => {
                assert_eq!(location, Location { line: 2, column: 1 });
                assert!(expected.iter().any(|e| e.contains(';')));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comparisons_do_not_chain() {
        assert!(parse_expr(&tokenize("a < b < c").unwrap()).is_err());
    }
}

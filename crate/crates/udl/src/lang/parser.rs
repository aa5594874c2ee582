//! Recursive-descent parser for UDL.
//!
//! Statements are parsed independently: when one fails the parser reports a
//! diagnostic, skips past the next `;`, and continues, so every malformed
//! statement in a file is reported in one pass. Expression precedence, from
//! loosest to tightest: `+ -`, `* /`, unary `-`, `^` with a literal integer
//! exponent, atoms (numbers, names, parentheses, `sqrt(..)`,
//! `pow(.., p, q)`).

use crate::lang::ast::{
    BinOp, Expr, ExprArena, ExprId, ExprKind, Ident, Pos, Program, Span, Stmt, StmtKind,
};
use crate::lang::diag::{DiagCode, Diagnostic};
use crate::lang::lexer::{Token, TokenKind};
use crate::quantity::Precision;

/// Parses a token stream into a program, collecting statement-level
/// diagnostics instead of stopping at the first.
pub fn parse(file: &str, source: &str, tokens: Vec<Token>) -> (Program, Vec<Diagnostic>) {
    let mut parser = Parser {
        file,
        tokens,
        i: 0,
        arena: ExprArena::default(),
        diags: Vec::new(),
        stmts: Vec::new(),
    };
    parser.run();
    let program = Program {
        file: file.to_string(),
        source: source.to_string(),
        stmts: parser.stmts,
        arena: parser.arena,
    };
    (program, parser.diags)
}

struct Parser<'a> {
    file: &'a str,
    tokens: Vec<Token>,
    i: usize,
    arena: ExprArena,
    diags: Vec<Diagnostic>,
    stmts: Vec<Stmt>,
}

impl Parser<'_> {
    fn run(&mut self) {
        while !matches!(self.peek().kind, TokenKind::Eof) {
            match self.statement() {
                Ok(stmt) => self.stmts.push(stmt),
                Err(diag) => {
                    self.diags.push(diag);
                    self.resync();
                }
            }
        }
    }

    /// Skips past the next `;` so parsing can resume at a statement
    /// boundary.
    fn resync(&mut self) {
        loop {
            match self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::Semi => {
                    self.advance();
                    break;
                }
                _ => {
                    self.advance();
                }
            }
        }
    }

    fn statement(&mut self) -> Result<Stmt, Diagnostic> {
        let pos = self.peek().pos;
        let kind = match self.peek().kind {
            TokenKind::KwDim => self.dim_decl()?,
            TokenKind::KwUnit => self.unit_decl()?,
            TokenKind::KwConst => self.const_decl()?,
            TokenKind::KwLet => self.let_decl()?,
            TokenKind::KwPrint => self.print_stmt()?,
            _ => {
                return Err(self.error_here(format!(
                    "expected a statement, found {}",
                    self.peek().kind.describe()
                )))
            }
        };
        Ok(Stmt { kind, pos })
    }

    fn dim_decl(&mut self) -> Result<StmtKind, Diagnostic> {
        self.advance();
        let name = self.expect_ident("an axis name")?;
        self.expect(&TokenKind::Semi, "`;`")?;
        Ok(StmtKind::DimDecl { name })
    }

    fn unit_decl(&mut self) -> Result<StmtKind, Diagnostic> {
        self.advance();
        let symbol = self.expect_ident("a unit symbol")?;
        self.expect(&TokenKind::Eq, "`=`")?;
        if matches!(self.peek().kind, TokenKind::KwBase) {
            self.advance();
            self.expect(&TokenKind::LParen, "`(`")?;
            let axis = self.expect_ident("an axis name")?;
            self.expect(&TokenKind::Comma, "`,`")?;
            let factor_pos = self.peek().pos;
            let negative = matches!(self.peek().kind, TokenKind::Minus);
            if negative {
                self.advance();
            }
            let factor = self.expect_number("a conversion factor")?;
            self.expect(&TokenKind::RParen, "`)`")?;
            self.expect(&TokenKind::Semi, "`;`")?;
            Ok(StmtKind::BaseUnitDecl {
                symbol,
                axis,
                factor: if negative { -factor } else { factor },
                factor_pos,
            })
        } else {
            let expr = self.expr()?;
            self.expect(&TokenKind::Semi, "`;`")?;
            Ok(StmtKind::UnitDecl { symbol, expr })
        }
    }

    fn const_decl(&mut self) -> Result<StmtKind, Diagnostic> {
        self.advance();
        let name = self.expect_ident("a constant name")?;
        self.expect(&TokenKind::Eq, "`=`")?;
        let expr = self.expr()?;
        self.expect(&TokenKind::Semi, "`;`")?;
        Ok(StmtKind::ConstDecl { name, expr })
    }

    fn let_decl(&mut self) -> Result<StmtKind, Diagnostic> {
        self.advance();
        let name = self.expect_ident("a variable name")?;
        self.expect(&TokenKind::Colon, "`:`")?;
        let annotation = self.expr()?;
        let precision = if matches!(self.peek().kind, TokenKind::At) {
            self.advance();
            let ident = self.expect_ident("`single` or `double`")?;
            match ident.name.as_str() {
                "single" => Some(Precision::Single),
                "double" => Some(Precision::Double),
                other => {
                    return Err(Diagnostic::new(
                        self.file,
                        ident.pos,
                        DiagCode::ParseError,
                        format!("expected `single` or `double`, found `{other}`"),
                    ))
                }
            }
        } else {
            None
        };
        self.expect(&TokenKind::Eq, "`=`")?;
        let expr = self.expr()?;
        self.expect(&TokenKind::Semi, "`;`")?;
        Ok(StmtKind::LetDecl { name, annotation, precision, expr })
    }

    fn print_stmt(&mut self) -> Result<StmtKind, Diagnostic> {
        self.advance();
        let expr = self.expr()?;
        self.expect(&TokenKind::KwIn, "`in`")?;
        let in_unit = self.expr()?;
        self.expect(&TokenKind::Semi, "`;`")?;
        Ok(StmtKind::Print { expr, in_unit })
    }

    fn expr(&mut self) -> Result<ExprId, Diagnostic> {
        let mut lhs = self.mul_expr()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => break,
            };
            let op_pos = self.advance().pos;
            let rhs = self.mul_expr()?;
            lhs = self.binary(op, lhs, rhs, op_pos);
        }
        Ok(lhs)
    }

    fn mul_expr(&mut self) -> Result<ExprId, Diagnostic> {
        let mut lhs = self.unary_expr()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                _ => break,
            };
            let op_pos = self.advance().pos;
            let rhs = self.unary_expr()?;
            lhs = self.binary(op, lhs, rhs, op_pos);
        }
        Ok(lhs)
    }

    fn binary(&mut self, op: BinOp, lhs: ExprId, rhs: ExprId, pos: Pos) -> ExprId {
        let span = self.arena[lhs].span.join(self.arena[rhs].span);
        self.arena.alloc(Expr { kind: ExprKind::Binary { op, lhs, rhs }, pos, span })
    }

    fn unary_expr(&mut self) -> Result<ExprId, Diagnostic> {
        if matches!(self.peek().kind, TokenKind::Minus) {
            let minus = self.advance();
            let operand = self.unary_expr()?;
            let span = minus.span.join(self.arena[operand].span);
            return Ok(self.arena.alloc(Expr { kind: ExprKind::Neg(operand), pos: minus.pos, span }));
        }
        self.power_expr()
    }

    fn power_expr(&mut self) -> Result<ExprId, Diagnostic> {
        let base = self.atom()?;
        if matches!(self.peek().kind, TokenKind::Caret) {
            let caret = self.advance();
            let (exp, exp_span) = self.int_literal("an integer exponent")?;
            let span = self.arena[base].span.join(exp_span);
            return Ok(self.arena.alloc(Expr {
                kind: ExprKind::PowInt { base, exp },
                pos: caret.pos,
                span,
            }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprId, Diagnostic> {
        let token = self.peek().clone();
        match token.kind {
            TokenKind::Number(value) => {
                self.advance();
                Ok(self.arena.alloc(Expr {
                    kind: ExprKind::Number(value),
                    pos: token.pos,
                    span: token.span,
                }))
            }
            TokenKind::Ident(name) => {
                self.advance();
                Ok(self.arena.alloc(Expr {
                    kind: ExprKind::Name(name),
                    pos: token.pos,
                    span: token.span,
                }))
            }
            TokenKind::LParen => {
                let open = self.advance();
                let inner = self.expr()?;
                let close = self.expect(&TokenKind::RParen, "`)`")?;
                // The parenthesized text belongs to the inner expression, so
                // labels echo the source exactly as written.
                self.arena.widen(inner, open.span.join(close.span));
                Ok(inner)
            }
            TokenKind::KwSqrt => {
                let kw = self.advance();
                self.expect(&TokenKind::LParen, "`(`")?;
                let arg = self.expr()?;
                let close = self.expect(&TokenKind::RParen, "`)`")?;
                let span = kw.span.join(close.span);
                Ok(self.arena.alloc(Expr { kind: ExprKind::Sqrt(arg), pos: kw.pos, span }))
            }
            TokenKind::KwPow => {
                let kw = self.advance();
                self.expect(&TokenKind::LParen, "`(`")?;
                let base = self.expr()?;
                self.expect(&TokenKind::Comma, "`,`")?;
                let (p, _) = self.int_literal("an integer power")?;
                self.expect(&TokenKind::Comma, "`,`")?;
                let q_pos = self.peek().pos;
                let (q, _) = self.int_literal("an integer root")?;
                if q < 1 {
                    return Err(Diagnostic::new(
                        self.file,
                        q_pos,
                        DiagCode::ParseError,
                        format!("power denominator must be a positive integer, got {q}"),
                    ));
                }
                let close = self.expect(&TokenKind::RParen, "`)`")?;
                let span = kw.span.join(close.span);
                Ok(self.arena.alloc(Expr { kind: ExprKind::Pow { base, p, q }, pos: kw.pos, span }))
            }
            other => Err(self.error_here(format!("expected an expression, found {}", other.describe()))),
        }
    }

    /// A literal integer, optionally negated; rejects fractions and
    /// exponents of ten.
    fn int_literal(&mut self, what: &str) -> Result<(i64, Span), Diagnostic> {
        let negative = if matches!(self.peek().kind, TokenKind::Minus) {
            Some(self.advance())
        } else {
            None
        };
        let token = self.peek().clone();
        let TokenKind::Number(value) = token.kind else {
            return Err(self.error_here(format!(
                "expected {what}, found {}",
                token.kind.describe()
            )));
        };
        // An integer literal renders back to pure digits; `2.5` or `1e3`
        // does not.
        if value.fract() != 0.0 || value.abs() >= i64::MAX as f64 {
            return Err(Diagnostic::new(
                self.file,
                token.pos,
                DiagCode::ParseError,
                format!("expected {what}, found `{value}`"),
            ));
        }
        self.advance();
        let magnitude = value as i64;
        let (value, span) = match negative {
            Some(minus) => (-magnitude, minus.span.join(token.span)),
            None => (magnitude, token.span),
        };
        Ok((value, span))
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.i]
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.i].clone();
        if !matches!(token.kind, TokenKind::Eof) {
            self.i += 1;
        }
        token
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<Token, Diagnostic> {
        if std::mem::discriminant(&self.peek().kind) == std::mem::discriminant(kind) {
            Ok(self.advance())
        } else {
            Err(self.error_here(format!("expected {what}, found {}", self.peek().kind.describe())))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<Ident, Diagnostic> {
        let token = self.peek().clone();
        if let TokenKind::Ident(name) = token.kind {
            self.advance();
            Ok(Ident { name, pos: token.pos })
        } else {
            Err(self.error_here(format!("expected {what}, found {}", token.kind.describe())))
        }
    }

    fn expect_number(&mut self, what: &str) -> Result<f64, Diagnostic> {
        let token = self.peek().clone();
        if let TokenKind::Number(value) = token.kind {
            self.advance();
            Ok(value)
        } else {
            Err(self.error_here(format!("expected {what}, found {}", token.kind.describe())))
        }
    }

    fn error_here(&self, message: String) -> Diagnostic {
        Diagnostic::new(self.file, self.peek().pos, DiagCode::ParseError, message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::lexer::lex;

    fn parse_ok(source: &str) -> Program {
        let tokens = lex("test.udl", source).unwrap();
        let (program, diags) = parse("test.udl", source, tokens);
        assert!(diags.is_empty(), "unexpected diagnostics: {diags:?}");
        program
    }

    fn parse_err(source: &str) -> Vec<Diagnostic> {
        let tokens = lex("test.udl", source).unwrap();
        let (_, diags) = parse("test.udl", source, tokens);
        assert!(!diags.is_empty(), "expected diagnostics for {source:?}");
        diags
    }

    #[test]
    fn parses_each_statement_form() {
        let program = parse_ok(
            "dim length;\n\
             unit m = base(length, 1.0);\n\
             unit km = 1000 * m;\n\
             const c = 2.99792458e8 * m;\n\
             let d : m @single = 2 * km + 1 * m;\n\
             print d in km;\n",
        );
        assert_eq!(program.stmts.len(), 6);
        assert!(matches!(program.stmts[0].kind, StmtKind::DimDecl { .. }));
        assert!(matches!(
            program.stmts[1].kind,
            StmtKind::BaseUnitDecl { factor, .. } if factor == 1.0
        ));
        assert!(matches!(program.stmts[2].kind, StmtKind::UnitDecl { .. }));
        assert!(matches!(program.stmts[3].kind, StmtKind::ConstDecl { .. }));
        assert!(matches!(
            program.stmts[4].kind,
            StmtKind::LetDecl { precision: Some(Precision::Single), .. }
        ));
        assert!(matches!(program.stmts[5].kind, StmtKind::Print { .. }));
    }

    #[test]
    fn precedence_nests_caret_inside_unary_inside_mul() {
        let program = parse_ok("let x : m = -2 ^ 2 * 3;");
        let StmtKind::LetDecl { expr, .. } = &program.stmts[0].kind else { unreachable!() };
        // -2^2 * 3 parses as (-(2^2)) * 3.
        let ExprKind::Binary { op: BinOp::Mul, lhs, .. } = &program.arena[*expr].kind else {
            panic!("expected a product at the top");
        };
        let ExprKind::Neg(inner) = &program.arena[*lhs].kind else {
            panic!("expected unary minus under the product");
        };
        assert!(matches!(program.arena[*inner].kind, ExprKind::PowInt { exp: 2, .. }));
    }

    #[test]
    fn addition_binds_loosest() {
        let program = parse_ok("let x : m = 1 * m + 75 * cm;");
        let StmtKind::LetDecl { expr, .. } = &program.stmts[0].kind else { unreachable!() };
        let ExprKind::Binary { op, lhs, rhs } = &program.arena[*expr].kind else {
            panic!("expected a sum at the top");
        };
        assert_eq!(*op, BinOp::Add);
        assert!(matches!(program.arena[*lhs].kind, ExprKind::Binary { op: BinOp::Mul, .. }));
        assert!(matches!(program.arena[*rhs].kind, ExprKind::Binary { op: BinOp::Mul, .. }));
    }

    #[test]
    fn spans_cover_the_written_text_including_parens() {
        let program = parse_ok("print (2*height) / g0 in s;");
        let StmtKind::Print { expr, in_unit } = &program.stmts[0].kind else { unreachable!() };
        assert_eq!(program.snippet(program.arena[*expr].span), "(2*height) / g0");
        assert_eq!(program.snippet(program.arena[*in_unit].span), "s");
        let ExprKind::Binary { lhs, .. } = &program.arena[*expr].kind else { unreachable!() };
        assert_eq!(program.snippet(program.arena[*lhs].span), "(2*height)");
    }

    #[test]
    fn binary_nodes_sit_at_their_operator() {
        let program = parse_ok("let x : m = 1*m + 1*s;");
        let StmtKind::LetDecl { expr, .. } = &program.stmts[0].kind else { unreachable!() };
        let node = &program.arena[*expr];
        assert_eq!((node.pos.line, node.pos.col), (1, 17));
    }

    #[test]
    fn pow_takes_literal_integer_arguments() {
        let program = parse_ok("let x : m = pow(y, -3, 2);");
        let StmtKind::LetDecl { expr, .. } = &program.stmts[0].kind else { unreachable!() };
        assert!(matches!(program.arena[*expr].kind, ExprKind::Pow { p: -3, q: 2, .. }));

        let errs = parse_err("let x : m = pow(y, 1, 0);");
        assert!(errs[0].message.contains("positive integer"));
        let errs = parse_err("let x : m = pow(y, 1, -2);");
        assert_eq!(errs[0].code, DiagCode::ParseError);
        let errs = parse_err("let x : m = y ^ 2.5;");
        assert!(errs[0].message.contains("integer exponent"));
    }

    #[test]
    fn recovery_reports_every_bad_statement() {
        let source = "dim length;\nlet x : = 1;\ndim mass;\nprint 1 m;\ndim time;";
        let tokens = lex("test.udl", source).unwrap();
        let (program, diags) = parse("test.udl", source, tokens);
        assert_eq!(diags.len(), 2);
        assert_eq!((diags[0].line, diags[0].col), (2, 9));
        assert_eq!((diags[1].line, diags[1].col), (4, 9));
        // The three well-formed statements still parse.
        assert_eq!(program.stmts.len(), 3);
    }

    #[test]
    fn juxtaposition_is_rejected() {
        let errs = parse_err("let x : m = 2 m;");
        assert_eq!(errs[0].code, DiagCode::ParseError);
        assert!(errs[0].message.contains("expected `;`"));
    }
}

//! Tokenizer for UDL source text.
//!
//! Produces a flat token list ending in [`TokenKind::Eof`]. Lexing recovers
//! from bad input (an unexpected character, a malformed exponent) by
//! reporting a diagnostic and continuing, so a single pass can report every
//! lexical problem in the file. `//` starts a comment running to end of
//! line.

use crate::lang::ast::{Pos, Span};
use crate::lang::diag::{DiagCode, Diagnostic};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    KwDim,
    KwUnit,
    KwBase,
    KwConst,
    KwLet,
    KwPrint,
    KwIn,
    KwSqrt,
    KwPow,
    Ident(String),
    Number(f64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Colon,
    Semi,
    Comma,
    At,
    LParen,
    RParen,
    Eof,
}

impl TokenKind {
    /// Short description for "expected X, found Y" messages.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::KwDim => "`dim`".into(),
            TokenKind::KwUnit => "`unit`".into(),
            TokenKind::KwBase => "`base`".into(),
            TokenKind::KwConst => "`const`".into(),
            TokenKind::KwLet => "`let`".into(),
            TokenKind::KwPrint => "`print`".into(),
            TokenKind::KwIn => "`in`".into(),
            TokenKind::KwSqrt => "`sqrt`".into(),
            TokenKind::KwPow => "`pow`".into(),
            TokenKind::Ident(name) => format!("`{name}`"),
            TokenKind::Number(_) => "a number".into(),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::Eq => "`=`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::At => "`@`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
    pub span: Span,
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    src_len: usize,
    i: usize,
    line: u32,
    col: u32,
    file: &'a str,
    tokens: Vec<Token>,
    diags: Vec<Diagnostic>,
}

/// Tokenizes `source`, returning either the token list (ending in `Eof`) or
/// every lexical diagnostic found.
pub fn lex(file: &str, source: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let mut lx = Lexer {
        chars: source.char_indices().collect(),
        src_len: source.len(),
        i: 0,
        line: 1,
        col: 1,
        file,
        tokens: Vec::new(),
        diags: Vec::new(),
    };
    lx.run(source);
    if lx.diags.is_empty() {
        Ok(lx.tokens)
    } else {
        Err(lx.diags)
    }
}

impl Lexer<'_> {
    fn run(&mut self, source: &str) {
        while let Some((offset, c)) = self.peek() {
            let pos = Pos { line: self.line, col: self.col };
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '/' if self.peek_at(1) == Some('/') => {
                    while let Some((_, c)) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                '+' => self.single(TokenKind::Plus, pos, offset),
                '-' => self.single(TokenKind::Minus, pos, offset),
                '*' => self.single(TokenKind::Star, pos, offset),
                '/' => self.single(TokenKind::Slash, pos, offset),
                '^' => self.single(TokenKind::Caret, pos, offset),
                '=' => self.single(TokenKind::Eq, pos, offset),
                ':' => self.single(TokenKind::Colon, pos, offset),
                ';' => self.single(TokenKind::Semi, pos, offset),
                ',' => self.single(TokenKind::Comma, pos, offset),
                '@' => self.single(TokenKind::At, pos, offset),
                '(' => self.single(TokenKind::LParen, pos, offset),
                ')' => self.single(TokenKind::RParen, pos, offset),
                c if c.is_ascii_digit() => self.number(source, pos, offset),
                c if c.is_ascii_alphabetic() || c == '_' => self.ident(source, pos, offset),
                other => {
                    self.diags.push(Diagnostic::new(
                        self.file,
                        pos,
                        DiagCode::ParseError,
                        format!("unexpected character `{other}`"),
                    ));
                    self.bump();
                }
            }
        }
        let end = Pos { line: self.line, col: self.col };
        self.tokens.push(Token {
            kind: TokenKind::Eof,
            pos: end,
            span: Span::new(self.src_len as u32, self.src_len as u32),
        });
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.i).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.i + ahead).map(|&(_, c)| c)
    }

    fn bump(&mut self) {
        if let Some(&(_, c)) = self.chars.get(self.i) {
            self.i += 1;
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.i).map_or(self.src_len, |&(o, _)| o)
    }

    fn single(&mut self, kind: TokenKind, pos: Pos, offset: usize) {
        self.bump();
        let end = self.offset();
        self.tokens.push(Token { kind, pos, span: Span::new(offset as u32, end as u32) });
    }

    fn ident(&mut self, source: &str, pos: Pos, offset: usize) {
        while let Some((_, c)) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        let text = &source[offset..self.offset()];
        let kind = match text {
            "dim" => TokenKind::KwDim,
            "unit" => TokenKind::KwUnit,
            "base" => TokenKind::KwBase,
            "const" => TokenKind::KwConst,
            "let" => TokenKind::KwLet,
            "print" => TokenKind::KwPrint,
            "in" => TokenKind::KwIn,
            "sqrt" => TokenKind::KwSqrt,
            "pow" => TokenKind::KwPow,
            _ => TokenKind::Ident(text.to_string()),
        };
        self.tokens.push(Token { kind, pos, span: Span::new(offset as u32, self.offset() as u32) });
    }

    fn number(&mut self, source: &str, pos: Pos, offset: usize) {
        while self.peek().is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.bump();
        }
        // A fraction dot is only part of the number when a digit follows.
        if self.peek().is_some_and(|(_, c)| c == '.')
            && self.peek_at(1).is_some_and(|c| c.is_ascii_digit())
        {
            self.bump();
            while self.peek().is_some_and(|(_, c)| c.is_ascii_digit()) {
                self.bump();
            }
        }
        // Same for an exponent marker: `e` must introduce digits.
        if self.peek().is_some_and(|(_, c)| c == 'e' || c == 'E') {
            let after_sign = match self.peek_at(1) {
                Some('+') | Some('-') => 2,
                _ => 1,
            };
            if self.peek_at(after_sign).is_some_and(|c| c.is_ascii_digit()) {
                for _ in 0..after_sign {
                    self.bump();
                }
                while self.peek().is_some_and(|(_, c)| c.is_ascii_digit()) {
                    self.bump();
                }
            }
        }
        let text = &source[offset..self.offset()];
        match text.parse::<f64>() {
            Ok(value) => self.tokens.push(Token {
                kind: TokenKind::Number(value),
                pos,
                span: Span::new(offset as u32, self.offset() as u32),
            }),
            Err(_) => self.diags.push(Diagnostic::new(
                self.file,
                pos,
                DiagCode::ParseError,
                format!("malformed number literal `{text}`"),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(source: &str) -> Vec<TokenKind> {
        lex("test.udl", source).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn tokenizes_a_let_statement() {
        use TokenKind::*;
        assert_eq!(
            kinds("let t : s = sqrt(2*height/g0);"),
            vec![
                KwLet,
                Ident("t".into()),
                Colon,
                Ident("s".into()),
                Eq,
                KwSqrt,
                LParen,
                Number(2.0),
                Star,
                Ident("height".into()),
                Slash,
                Ident("g0".into()),
                RParen,
                Semi,
                Eof,
            ]
        );
    }

    #[test]
    fn parses_number_forms() {
        assert_eq!(kinds("9.81"), vec![TokenKind::Number(9.81), TokenKind::Eof]);
        assert_eq!(kinds("1e-3"), vec![TokenKind::Number(1e-3), TokenKind::Eof]);
        assert_eq!(
            kinds("2.99792458e8"),
            vec![TokenKind::Number(2.99792458e8), TokenKind::Eof]
        );
        assert_eq!(kinds("5E+2"), vec![TokenKind::Number(500.0), TokenKind::Eof]);
    }

    #[test]
    fn comments_run_to_end_of_line() {
        assert_eq!(
            kinds("dim x; // the x axis\ndim y;"),
            vec![
                TokenKind::KwDim,
                TokenKind::Ident("x".into()),
                TokenKind::Semi,
                TokenKind::KwDim,
                TokenKind::Ident("y".into()),
                TokenKind::Semi,
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn tracks_line_and_column_positions() {
        let tokens = lex("test.udl", "dim a;\n  let b").unwrap();
        let positions: Vec<_> = tokens.iter().map(|t| (t.pos.line, t.pos.col)).collect();
        // dim a ; let b eof
        assert_eq!(positions, vec![(1, 1), (1, 5), (1, 6), (2, 3), (2, 7), (2, 8)]);
    }

    #[test]
    fn unexpected_characters_are_reported_with_positions() {
        let errs = lex("test.udl", "dim $;\nlet ?").unwrap_err();
        assert_eq!(errs.len(), 2);
        assert_eq!((errs[0].line, errs[0].col), (1, 5));
        assert!(errs[0].message.contains('$'));
        assert_eq!((errs[1].line, errs[1].col), (2, 5));
        assert_eq!(errs[0].code, DiagCode::ParseError);
    }

    #[test]
    fn dot_without_digits_is_not_part_of_a_number() {
        let errs = lex("test.udl", "1.;").unwrap_err();
        // `1` lexes, the dangling dot is the error.
        assert_eq!(errs.len(), 1);
        assert_eq!((errs[0].line, errs[0].col), (1, 2));
    }
}

//! Positioned diagnostics with stable error codes.

use std::fmt;

use crate::lang::ast::Pos;

/// Machine-readable category of a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagCode {
    ParseError,
    UnknownUnit,
    UnknownAxis,
    Redefinition,
    DimensionMismatch,
    NonIntegerExponent,
    CapacityOverflow,
    InvalidFactor,
    DomainError,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::ParseError => "ParseError",
            DiagCode::UnknownUnit => "UnknownUnit",
            DiagCode::UnknownAxis => "UnknownAxis",
            DiagCode::Redefinition => "Redefinition",
            DiagCode::DimensionMismatch => "DimensionMismatch",
            DiagCode::NonIntegerExponent => "NonIntegerExponent",
            DiagCode::CapacityOverflow => "CapacityOverflow",
            DiagCode::InvalidFactor => "InvalidFactor",
            DiagCode::DomainError => "DomainError",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One reported problem, tied to a file position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: String,
    pub line: u32,
    pub col: u32,
    pub code: DiagCode,
    pub message: String,
}

impl Diagnostic {
    pub fn new(file: impl Into<String>, pos: Pos, code: DiagCode, message: impl Into<String>) -> Self {
        Self { file: file.into(), line: pos.line, col: pos.col, code, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    /// Renders as `<file>:<line>:<col>: error[<code>]: <message>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: error[{}]: {}",
            self.file, self.line, self.col, self.code, self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

/// Orders diagnostics by position for stable multi-error reports.
pub fn sort_diags(diags: &mut [Diagnostic]) {
    diags.sort_by_key(|d| (d.line, d.col));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_the_reporting_format() {
        let d = Diagnostic::new(
            "prog.udl",
            Pos { line: 7, col: 14 },
            DiagCode::DimensionMismatch,
            "cannot add `m^1` and `s^1`",
        );
        assert_eq!(
            d.to_string(),
            "prog.udl:7:14: error[DimensionMismatch]: cannot add `m^1` and `s^1`"
        );
    }

    #[test]
    fn sorting_is_by_line_then_column() {
        let at = |line, col| Diagnostic::new("f", Pos { line, col }, DiagCode::ParseError, "x");
        let mut diags = vec![at(3, 9), at(1, 2), at(3, 1)];
        sort_diags(&mut diags);
        let order: Vec<_> = diags.iter().map(|d| (d.line, d.col)).collect();
        assert_eq!(order, vec![(1, 2), (3, 1), (3, 9)]);
    }
}

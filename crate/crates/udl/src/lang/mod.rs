//! UDL: a small declaration language for units and checked arithmetic.
//!
//! A program declares axes (`dim length;`), units (`unit m = base(length,
//! 1.0);`, `unit km = 1000 * m;`), constants, `let` bindings with a
//! dimension annotation, and `print .. in ..` statements. The pipeline is
//! [`lexer`] to [`parser`] to [`check`], after which [`eval`] runs the
//! program either with full dimension bookkeeping or stripped to bare
//! floats.

pub mod ast;
pub mod check;
pub mod diag;
pub mod eval;
pub mod lexer;
pub mod parser;

use crate::system::UnitSystem;
use check::{CheckOptions, TypedProgram};
use diag::{sort_diags, Diagnostic};

/// Lexes and parses a source file, failing if any syntax diagnostics were
/// produced.
pub fn parse_source(file: &str, source: &str) -> Result<ast::Program, Vec<Diagnostic>> {
    let tokens = lexer::lex(file, source)?;
    let (program, diags) = parser::parse(file, source, tokens);
    if diags.is_empty() {
        Ok(program)
    } else {
        Err(diags)
    }
}

/// Full front end: lex, parse, and check in one call, reporting every
/// diagnostic found, sorted by source position.
pub fn analyze(
    file: &str,
    source: &str,
    system: UnitSystem,
    opts: &CheckOptions,
) -> Result<TypedProgram, Vec<Diagnostic>> {
    let tokens = lexer::lex(file, source)?;
    let (program, mut diags) = parser::parse(file, source, tokens);
    // Well-formed statements are checked even when others failed to parse,
    // so one run reports as much as possible.
    match check::check(program, system, opts) {
        Ok(tp) if diags.is_empty() => Ok(tp),
        Ok(_) => {
            sort_diags(&mut diags);
            Err(diags)
        }
        Err(mut more) => {
            diags.append(&mut more);
            sort_diags(&mut diags);
            Err(diags)
        }
    }
}

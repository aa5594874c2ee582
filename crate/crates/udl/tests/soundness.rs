//! Soundness of the checker: every single-token corruption of a correct
//! program is rejected, with the right diagnostic code at the right source
//! position, and the three checker configurations disagree only where their
//! semantics genuinely differ.

mod common;

use common::{analyze_with, line_col, FREE_FALL};
use udl::lang::check::DimEncoding;
use udl::{eval_checked, eval_fast, format_output, DiagCode, Precision};

fn mutate(needle: &str, replacement: &str) -> String {
    assert_eq!(
        FREE_FALL.matches(needle).count(),
        1,
        "needle {needle:?} must be unique in the fixture"
    );
    FREE_FALL.replacen(needle, replacement, 1)
}

/// One corrupted fixture: what to replace, the expected diagnostic, and a
/// unique needle in the mutated source whose start is the expected position.
struct Mutation {
    needle: &'static str,
    replacement: &'static str,
    code: DiagCode,
    at: (&'static str, usize),
}

#[test]
fn every_mutation_is_rejected_at_the_right_position() {
    use DiagCode::*;
    let table = [
        Mutation { needle: "1 * m;", replacement: "1 * s;", code: DimensionMismatch, at: ("let height", 0) },
        Mutation { needle: "height : m", replacement: "height : s", code: DimensionMismatch, at: ("let height", 0) },
        Mutation { needle: "9.81 * m / s^2;", replacement: "9.81 * m / s^3;", code: DimensionMismatch, at: ("let g0", 0) },
        Mutation { needle: "let t : s", replacement: "let t : g", code: DimensionMismatch, at: ("let t", 0) },
        Mutation { needle: "sqrt(2 * height / g0)", replacement: "sqrt(2 * height)", code: NonIntegerExponent, at: ("sqrt", 0) },
        Mutation { needle: "2 * height", replacement: "2 + height", code: DimensionMismatch, at: ("+", 0) },
        Mutation { needle: "/ g0)", replacement: "/ g9)", code: UnknownUnit, at: ("g9", 0) },
        Mutation { needle: "print t in s;", replacement: "print t in m;", code: DimensionMismatch, at: ("print", 0) },
        Mutation { needle: "print t in s;", replacement: "print t in q;", code: UnknownUnit, at: ("q;", 0) },
        Mutation { needle: "print t in s;", replacement: "print t + height in s;", code: DimensionMismatch, at: ("+", 0) },
        Mutation { needle: "base(length, 1.0)", replacement: "base(len, 1.0)", code: UnknownAxis, at: ("len,", 0) },
        Mutation { needle: "base(mass, 1e-3)", replacement: "base(mass, 0.0)", code: InvalidFactor, at: ("0.0", 0) },
    ];

    for m in &table {
        let source = mutate(m.needle, m.replacement);
        let expected_pos = line_col(&source, m.at.0, m.at.1);
        for encoding in [DimEncoding::Packed, DimEncoding::Vector] {
            let diags = analyze_with(&source, encoding, true, Precision::Double)
                .err()
                .unwrap_or_else(|| {
                    panic!("mutation {:?} -> {:?} was accepted", m.needle, m.replacement)
                });
            assert_eq!(diags.len(), 1, "mutation {:?} under {encoding:?}: {diags:#?}", m.needle);
            let d = &diags[0];
            assert_eq!(d.code, m.code, "mutation {:?} under {encoding:?}: {d}", m.needle);
            assert_eq!(
                (d.line, d.col),
                expected_pos,
                "mutation {:?} -> {:?} under {encoding:?}: {d}",
                m.needle,
                m.replacement
            );
        }
    }
}

#[test]
fn shadowing_a_unit_reports_the_redefinition_and_the_lost_binding() {
    // Renaming `height`'s declaration to `m` fails twice for real: the name
    // collides with the unit, and `height` now has no declaration at all.
    // Nothing else cascades; `t` and the print stay quiet.
    let source = mutate("let height", "let m");
    let diags = analyze_with(&source, DimEncoding::Packed, true, Precision::Double).unwrap_err();
    assert_eq!(diags.len(), 2, "{diags:#?}");
    assert_eq!(diags[0].code, DiagCode::Redefinition);
    assert_eq!((diags[0].line, diags[0].col), line_col(&source, "m : m", 0));
    assert_eq!(diags[1].code, DiagCode::UnknownUnit);
    assert_eq!((diags[1].line, diags[1].col), line_col(&source, "height / g0", 0));
}

#[test]
fn oversized_exponent_overflows_packed_but_mismatches_vector() {
    // s^8 cannot be packed into a base-10 digit, so the packed strict
    // checker reports the overflow at the caret. The vector checker carries
    // the exponent fine and instead catches the annotation mismatch.
    let source = mutate("9.81 * m / s^2;", "9.81 * m / s^8;");

    let diags = analyze_with(&source, DimEncoding::Packed, true, Precision::Double).unwrap_err();
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].code, DiagCode::CapacityOverflow);
    assert_eq!((diags[0].line, diags[0].col), line_col(&source, "^8", 0));

    let diags = analyze_with(&source, DimEncoding::Vector, true, Precision::Double).unwrap_err();
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].code, DiagCode::DimensionMismatch);
    assert_eq!((diags[0].line, diags[0].col), line_col(&source, "let g0", 0));

    // Compat packing wraps the digit instead of erroring, which lands on a
    // code distinct from the annotation's, so even compat rejects this one.
    let diags = analyze_with(&source, DimEncoding::Packed, false, Precision::Double).unwrap_err();
    assert_eq!(diags[0].code, DiagCode::DimensionMismatch);
}

#[test]
fn compat_packing_accepts_an_aliased_program_the_other_modes_reject() {
    // (1 * m)^10 has dimension length^10, but its packed code collides with
    // the mass axis under radix 10. Compat arithmetic cannot tell the two
    // apart, so the program checks and runs; strict packing overflows at the
    // caret and the vector checker sees a plain mismatch.
    let source = "\
dim length;
dim mass;
unit m = base(length, 1.0);
unit g = base(mass, 1e-3);
let x : g = (1 * m)^10;
print x in g;
";

    let compat = analyze_with(source, DimEncoding::Packed, false, Precision::Double)
        .expect("compat accepts the aliased program");
    let records = eval_checked(&compat).unwrap();
    assert_eq!(format_output(&records[0]), "x = 1000 g");
    let fast = eval_fast(&compat).unwrap();
    assert_eq!(records[0].value.to_bits(), fast[0].value.to_bits());

    let diags = analyze_with(source, DimEncoding::Packed, true, Precision::Double).unwrap_err();
    assert_eq!(diags[0].code, DiagCode::CapacityOverflow);
    assert_eq!((diags[0].line, diags[0].col), line_col(source, "^10", 0));

    let diags = analyze_with(source, DimEncoding::Vector, true, Precision::Double).unwrap_err();
    assert_eq!(diags[0].code, DiagCode::DimensionMismatch);
    assert_eq!((diags[0].line, diags[0].col), line_col(source, "let x", 0));
}

#[test]
fn independent_bad_statements_each_get_one_diagnostic() {
    let source = "\
dim length;
unit m = base(length, 1.0);
let a : m = 1;
let b : s = 1 * m;
print 1 * m in 1;
";
    let diags = analyze_with(source, DimEncoding::Packed, true, Precision::Double).unwrap_err();
    assert_eq!(diags.len(), 3);
    assert_eq!(diags[0].code, DiagCode::DimensionMismatch);
    assert_eq!((diags[0].line, diags[0].col), (3, 1));
    assert_eq!(diags[1].code, DiagCode::UnknownUnit);
    assert_eq!((diags[1].line, diags[1].col), line_col(source, "s = 1 * m", 0));
    assert_eq!(diags[2].code, DiagCode::DimensionMismatch);
    assert_eq!((diags[2].line, diags[2].col), (5, 1));
    // Sorted by position.
    let positions: Vec<(u32, u32)> = diags.iter().map(|d| (d.line, d.col)).collect();
    let mut sorted = positions.clone();
    sorted.sort_unstable();
    assert_eq!(positions, sorted);
}

#[test]
fn parse_and_check_diagnostics_are_merged_in_source_order() {
    let source = "\
dim length;
unit m = base(length, 1.0);
let a : = 2;
let b : m = 2 * q;
";
    let diags = analyze_with(source, DimEncoding::Packed, true, Precision::Double).unwrap_err();
    assert_eq!(diags.len(), 2);
    assert_eq!(diags[0].code, DiagCode::ParseError);
    assert_eq!((diags[0].line, diags[0].col), (3, 9));
    assert_eq!(diags[1].code, DiagCode::UnknownUnit);
    assert_eq!((diags[1].line, diags[1].col), (4, 17));
}

#[test]
fn diagnostics_render_in_compiler_format() {
    let source = mutate("print t in s;", "print t in m;");
    let diags = analyze_with(&source, DimEncoding::Packed, true, Precision::Double).unwrap_err();
    let rendered = diags[0].to_string();
    assert_eq!(
        rendered,
        "test.udl:13:1: error[DimensionMismatch]: cannot print `s^1` in `m^1`"
    );
}

#[test]
fn annotation_mismatch_message_names_the_binding() {
    let source = mutate("1 * m;", "1 * s;");
    let diags = analyze_with(&source, DimEncoding::Packed, true, Precision::Double).unwrap_err();
    assert!(
        diags[0].message.contains("`height` is annotated `m^1`"),
        "unexpected message: {}",
        diags[0].message
    );
    assert!(diags[0].message.contains("`s^1`"), "unexpected message: {}", diags[0].message);
}

#[test]
fn the_uncorrupted_fixture_is_accepted_everywhere() {
    for encoding in [DimEncoding::Packed, DimEncoding::Vector] {
        for strict in [true, false] {
            analyze_with(FREE_FALL, encoding, strict, Precision::Double)
                .unwrap_or_else(|d| panic!("clean fixture rejected: {d:#?}"));
        }
    }
}

//! Shared fixtures and helpers for the integration tests. Not every test
//! target uses every helper.
#![allow(dead_code)]

use udl::lang::check::{CheckOptions, DimEncoding, TypedProgram};
use udl::lang::diag::Diagnostic;
use udl::lang::eval::OutputRecord;
use udl::{analyze, EncodingConfig, Precision, UnitSystem};

/// The canonical worked example: drop height, gravity, fall time.
pub const FREE_FALL: &str = "\
dim length;
dim mass;
dim time;

unit m = base(length, 1.0);
unit g = base(mass, 1e-3);
unit s = base(time, 1.0);

let height : m = 1 * m;
let g0 : m / s^2 = 9.81 * m / s^2;
let t : s = sqrt(2 * height / g0);

print t in s;
";

/// Derived units, a constant, mixed-unit sums, and exact conversions.
pub const SI_UNITS: &str = "\
dim length;
dim mass;
dim time;

unit m = base(length, 1.0);
unit g = base(mass, 1e-3);
unit s = base(time, 1.0);

unit cm = m / 100;
unit kg = 1000 * g;
unit J = kg * m^2 / s^2;

const c = 2.99792458e8 * m / s;

let height : cm = 1 * m + 75 * cm;
let energy : J = 2 * kg * (3 * m / (2 * s))^2;

print height in cm;
print c in m / s;
print energy in J;
";

pub fn system(strict: bool) -> UnitSystem {
    UnitSystem::new(EncodingConfig::new(7, 10, strict).unwrap())
}

pub fn options(encoding: DimEncoding, precision: Precision) -> CheckOptions {
    CheckOptions { encoding, default_precision: precision }
}

pub fn analyze_with(
    source: &str,
    encoding: DimEncoding,
    strict: bool,
    precision: Precision,
) -> Result<TypedProgram, Vec<Diagnostic>> {
    analyze("test.udl", source, system(strict), &options(encoding, precision))
}

pub fn analyze_ok(source: &str, encoding: DimEncoding) -> TypedProgram {
    analyze_with(source, encoding, true, Precision::Double)
        .unwrap_or_else(|diags| panic!("expected a clean program, got {diags:#?}"))
}

/// 1-based line and column of the `nth` occurrence of `needle`.
pub fn line_col(source: &str, needle: &str, nth: usize) -> (u32, u32) {
    let index = source
        .match_indices(needle)
        .nth(nth)
        .unwrap_or_else(|| panic!("needle {needle:?} occurrence {nth} not found"))
        .0;
    let before = &source[..index];
    let line = before.matches('\n').count() as u32 + 1;
    let col = before.chars().rev().take_while(|&c| c != '\n').count() as u32 + 1;
    (line, col)
}

/// Bitwise comparison of output records, so NaN and signed zero differences
/// cannot hide.
pub fn assert_records_identical(a: &[OutputRecord], b: &[OutputRecord]) {
    assert_eq!(a.len(), b.len(), "record counts differ");
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x.label, y.label);
        assert_eq!(x.unit_text, y.unit_text);
        assert_eq!(
            x.value.to_bits(),
            y.value.to_bits(),
            "values differ for `{}`: {} vs {}",
            x.label,
            x.value,
            y.value
        );
    }
}

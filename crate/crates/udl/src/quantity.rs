//! Runtime values that carry a dimension and a floating-point precision.
//!
//! A [`Quantity`] stores its value as `f64` regardless of precision; single
//! precision results are rounded through `f32` after every operation, so the
//! value always sits on the grid of its declared precision. Mixed-precision
//! arithmetic promotes to the wider precision, matching what the underlying
//! hardware types would do.
//!
//! Addition, subtraction, comparison, and unit conversion require both sides
//! to have the same dimension and report [`QuantityError::DimensionMismatch`]
//! otherwise. Multiplication and division always succeed and combine the
//! dimensions. Fractional powers scale the dimension through the configured
//! encoding and evaluate the value through [`pow_value`], which takes a
//! hardware root path for denominators 1, 2, and 3 and the exp/log route for
//! everything else.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::dim::{DimError, DimVector, EncodingConfig};
use crate::instrument;
use crate::system::UnitDef;

/// Floating-point width of a quantity. `Double` is the default and the wider
/// of the two, so promotion is simply `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Precision {
    Single,
    #[default]
    Double,
}

impl Precision {
    /// Rounds a value onto this precision's storage grid.
    pub fn round(self, value: f64) -> f64 {
        match self {
            Precision::Single => value as f32 as f64,
            Precision::Double => value,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Single => f.write_str("single"),
            Precision::Double => f.write_str("double"),
        }
    }
}

/// Errors from quantity arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantityError {
    /// The operands of an addition, subtraction, comparison, or conversion
    /// have different dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: DimVector, right: DimVector },
    /// The dimension algebra itself failed (capacity or non-integer
    /// exponents).
    #[error(transparent)]
    Dim(#[from] DimError),
    /// The value computation has no defined result, such as an even root of
    /// a negative number or a comparison against NaN.
    #[error("{0}")]
    Domain(String),
}

/// A value, its precision, and its dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    value: f64,
    precision: Precision,
    dim: DimVector,
}

impl Quantity {
    /// Builds a quantity, rounding the value onto the precision's grid.
    pub fn new(value: f64, precision: Precision, dim: DimVector) -> Self {
        Self { value: precision.round(value), precision, dim }
    }

    /// A bare number with all exponents zero.
    pub fn dimensionless(value: f64, precision: Precision, axis_count: usize) -> Self {
        Self::new(value, precision, DimVector::zero(axis_count))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn is_dimensionless(&self) -> bool {
        self.dim.is_dimensionless()
    }

    /// Sum of two quantities with matching dimensions.
    pub fn try_add(&self, rhs: &Self) -> Result<Self, QuantityError> {
        self.additive(rhs, |a, b| a + b)
    }

    /// Difference of two quantities with matching dimensions.
    pub fn try_sub(&self, rhs: &Self) -> Result<Self, QuantityError> {
        self.additive(rhs, |a, b| a - b)
    }

    fn additive(&self, rhs: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self, QuantityError> {
        if !self.dim.matches(&rhs.dim) {
            return Err(self.mismatch(rhs));
        }
        let precision = self.precision.max(rhs.precision);
        Ok(Self::new(f(self.value, rhs.value), precision, self.dim.clone()))
    }

    /// Product; dimensions multiply (exponents add), precisions promote.
    pub fn multiply(&self, rhs: &Self) -> Self {
        let precision = self.precision.max(rhs.precision);
        Self::new(self.value * rhs.value, precision, self.dim.multiply(&rhs.dim))
    }

    /// Quotient; dimensions divide (exponents subtract), precisions promote.
    pub fn divide(&self, rhs: &Self) -> Self {
        let precision = self.precision.max(rhs.precision);
        Self::new(self.value / rhs.value, precision, self.dim.divide(&rhs.dim))
    }

    /// Negation; dimension and precision are unchanged.
    pub fn negate(&self) -> Self {
        Self::new(-self.value, self.precision, self.dim.clone())
    }

    /// Square root. The dimension must halve exactly under a strict config;
    /// a negative value propagates NaN the way hardware sqrt does.
    pub fn sqrt(&self, cfg: &EncodingConfig) -> Result<Self, QuantityError> {
        let dim = self.dim.pow_frac(1, 2, cfg)?;
        Ok(Self::new(self.value.sqrt(), self.precision, dim))
    }

    /// Raises the quantity to the rational power `p/q` (`q >= 1`).
    pub fn pow_rational(&self, p: i64, q: i64, cfg: &EncodingConfig) -> Result<Self, QuantityError> {
        let dim = self.dim.pow_frac(p, q, cfg)?;
        let value = pow_value(self.value, p, q)?;
        Ok(Self::new(value, self.precision, dim))
    }

    /// Orders two quantities with matching dimensions. NaN on either side is
    /// a domain error rather than an arbitrary answer.
    pub fn try_cmp(&self, rhs: &Self) -> Result<Ordering, QuantityError> {
        if !self.dim.matches(&rhs.dim) {
            return Err(self.mismatch(rhs));
        }
        self.value
            .partial_cmp(&rhs.value)
            .ok_or_else(|| QuantityError::Domain("cannot order NaN-valued quantities".into()))
    }

    /// Converts to a plain number expressed in `unit`, which must have the
    /// same dimension.
    pub fn in_unit(&self, unit: &UnitDef) -> Result<f64, QuantityError> {
        if !self.dim.matches(unit.dim()) {
            return Err(QuantityError::DimensionMismatch {
                left: self.dim.clone(),
                right: unit.dim().clone(),
            });
        }
        Ok(self.value / unit.factor())
    }

    fn mismatch(&self, rhs: &Self) -> QuantityError {
        QuantityError::DimensionMismatch { left: self.dim.clone(), right: rhs.dim.clone() }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim.is_dimensionless() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} {}", self.value, self.dim)
        }
    }
}

/// Evaluates `x^(p/q)` for `q >= 1`.
///
/// Denominators 1, 2, and 3 use hardware-friendly routes: exponentiation by
/// squaring on the value or on its sqrt/cbrt. Other denominators go through
/// `exp((p/q) * ln |x|)` with the sign restored for odd roots of negative
/// values. An even root of a negative value is a domain error; note the
/// asymmetry with [`Quantity::sqrt`], which propagates NaN instead.
pub fn pow_value(x: f64, p: i64, q: i64) -> Result<f64, QuantityError> {
    assert!(q >= 1, "fractional power denominator must be positive");
    if x < 0.0 && q % 2 == 0 {
        return Err(QuantityError::Domain(format!(
            "cannot take an even root ({p}/{q}) of the negative value {x}"
        )));
    }
    if p == 0 {
        instrument::count_pow_fast();
        return Ok(1.0);
    }
    match q {
        1 => {
            instrument::count_pow_fast();
            Ok(powi(x, p))
        }
        2 => {
            instrument::count_pow_fast();
            Ok(powi(x.sqrt(), p))
        }
        3 => {
            instrument::count_pow_fast();
            Ok(powi(x.cbrt(), p))
        }
        _ => {
            instrument::count_pow_general();
            let sign = if x < 0.0 && p % 2 != 0 { -1.0 } else { 1.0 };
            Ok(sign * (x.abs().ln() * (p as f64 / q as f64)).exp())
        }
    }
}

/// Integer power by repeated squaring; `p` may be negative.
fn powi(x: f64, p: i64) -> f64 {
    let mut base = if p < 0 { x.recip() } else { x };
    let mut n = p.unsigned_abs();
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

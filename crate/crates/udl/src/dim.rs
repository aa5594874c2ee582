//! Dimension vectors, packed dimension codes, and the algebra on both.
//!
//! A dimension is the list of integer exponents over the base axes: with
//! axes (length, mass, time), velocity is `(1, 0, -1)`. The same information
//! can be folded into a single signed integer by treating the exponents as
//! balanced digits of a fixed radix, so axis `i` contributes
//! `exponent * radix^i` to the code. Multiplying quantities then adds codes
//! and dividing subtracts them, which is what makes dimension bookkeeping
//! cheap enough to strip entirely from release builds.
//!
//! Balanced digits at radix `R` cover `[-floor((R-1)/2), +ceil((R-1)/2)]`,
//! so the default radix 10 stores exponents from -4 to +5 per axis. The
//! packing is injective only while every exponent stays inside that window;
//! [`EncodingConfig::strict`] decides whether leaving it is an error
//! ([`DimError::CapacityOverflow`]) or is silently allowed to alias, the way
//! raw integer template arithmetic would.

use std::fmt;
use std::ops::{Add, Sub};

use thiserror::Error;

use crate::instrument;

/// Errors produced by dimension packing and fractional powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DimError {
    /// An exponent does not fit the per-axis digit window of the packed
    /// encoding, or a packed code carries digits beyond the last configured
    /// axis (reported with `axis` equal to the axis count).
    #[error("exponent {exponent} on axis {axis} does not fit the packed digit range [{lo}, {hi}]")]
    CapacityOverflow {
        axis: usize,
        exponent: i64,
        lo: i64,
        hi: i64,
    },
    /// A fractional power `p/q` applied to this exponent does not yield an
    /// integer.
    #[error("exponent {exponent} on axis {axis} raised to the power {p}/{q} is not an integer")]
    NonIntegerExponent {
        axis: usize,
        exponent: i64,
        p: i64,
        q: i64,
    },
}

/// Errors from constructing an [`EncodingConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("at least one axis is required")]
    NoAxes,
    #[error("radix must be at least 3, got {0}")]
    RadixTooSmall(i64),
    #[error("radix {radix} with {axes} axes does not fit a 64-bit packed code")]
    WidthExceeded { radix: i64, axes: usize },
}

/// Fixed parameters of the packed encoding: how many axes exist, the digit
/// radix, and whether capacity violations are errors (`strict`) or alias
/// silently (`compat`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingConfig {
    axis_count: usize,
    radix: i64,
    strict: bool,
}

impl EncodingConfig {
    pub const DEFAULT_AXES: usize = 7;
    pub const DEFAULT_RADIX: i64 = 10;

    /// Builds a config after validating that `radix^axis_count` fits in a
    /// 64-bit code.
    pub fn new(axis_count: usize, radix: i64, strict: bool) -> Result<Self, ConfigError> {
        if axis_count == 0 {
            return Err(ConfigError::NoAxes);
        }
        if radix < 3 {
            return Err(ConfigError::RadixTooSmall(radix));
        }
        let mut span: i64 = 1;
        for _ in 0..axis_count {
            span = span
                .checked_mul(radix)
                .ok_or(ConfigError::WidthExceeded { radix, axes: axis_count })?;
        }
        Ok(Self { axis_count, radix, strict })
    }

    pub fn axis_count(&self) -> usize {
        self.axis_count
    }

    pub fn radix(&self) -> i64 {
        self.radix
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    /// Same config with the strictness flag replaced.
    pub fn with_strict(self, strict: bool) -> Self {
        Self { strict, ..self }
    }

    /// Smallest exponent a packed digit can hold: `-floor((radix-1)/2)`.
    pub fn digit_min(&self) -> i64 {
        -((self.radix - 1) / 2)
    }

    /// Largest exponent a packed digit can hold: `+ceil((radix-1)/2)`.
    pub fn digit_max(&self) -> i64 {
        self.radix / 2
    }

    /// Contribution of a unit exponent on `axis` to a packed code.
    pub fn place_value(&self, axis: usize) -> i64 {
        self.radix.pow(axis as u32)
    }
}

impl Default for EncodingConfig {
    /// Seven strict axes at radix 10, the setup used throughout the library.
    fn default() -> Self {
        Self::new(Self::DEFAULT_AXES, Self::DEFAULT_RADIX, true).expect("default config is valid")
    }
}

/// Exponent vector over the base axes.
///
/// The vector form has unbounded exponents; capacity only matters when a
/// vector is packed into a [`PackedDim`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimVector(Vec<i64>);

impl DimVector {
    /// The dimensionless vector (all exponents zero).
    pub fn zero(axis_count: usize) -> Self {
        Self(vec![0; axis_count])
    }

    /// The unit vector for a single axis, as carried by a base unit.
    pub fn axis(axis_count: usize, index: usize) -> Self {
        assert!(index < axis_count, "axis index {index} out of range for {axis_count} axes");
        let mut exps = vec![0; axis_count];
        exps[index] = 1;
        Self(exps)
    }

    pub fn new(exponents: Vec<i64>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn axis_count(&self) -> usize {
        self.0.len()
    }

    pub fn is_dimensionless(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Exponent sum, as produced by multiplying two quantities.
    pub fn multiply(&self, rhs: &Self) -> Self {
        instrument::count_dim_op();
        self.zip_with(rhs, i64::saturating_add)
    }

    /// Exponent difference, as produced by dividing two quantities.
    pub fn divide(&self, rhs: &Self) -> Self {
        instrument::count_dim_op();
        self.zip_with(rhs, i64::saturating_sub)
    }

    /// Counted equality test, the check performed by additions, comparisons,
    /// and unit conversions.
    pub fn matches(&self, rhs: &Self) -> bool {
        instrument::count_dim_op();
        self == rhs
    }

    /// Scales every exponent by `p/q`. Strict configs reject exponents that
    /// the scaling would make non-integer; compat configs truncate toward
    /// zero exactly like integer division in the packed form.
    pub fn pow_frac(&self, p: i64, q: i64, cfg: &EncodingConfig) -> Result<Self, DimError> {
        instrument::count_dim_op();
        assert!(q >= 1, "fractional power denominator must be positive");
        let mut out = Vec::with_capacity(self.0.len());
        for (axis, &e) in self.0.iter().enumerate() {
            let num = e as i128 * p as i128;
            if cfg.strict() && num % q as i128 != 0 {
                return Err(DimError::NonIntegerExponent { axis, exponent: e, p, q });
            }
            let scaled = num / q as i128;
            if cfg.strict() && i64::try_from(scaled).is_err() {
                return Err(DimError::CapacityOverflow {
                    axis,
                    exponent: e,
                    lo: i64::MIN,
                    hi: i64::MAX,
                });
            }
            out.push(scaled as i64);
        }
        Ok(Self(out))
    }

    /// Packs the exponents into a single code with axis `i` at place value
    /// `radix^i`. Strict configs verify every exponent against the digit
    /// window first; compat configs pack whatever they are given and accept
    /// that distinct vectors may collide.
    pub fn pack(&self, cfg: &EncodingConfig) -> Result<PackedDim, DimError> {
        instrument::count_dim_op();
        assert_eq!(
            self.0.len(),
            cfg.axis_count(),
            "dimension vector length does not match the configured axis count"
        );
        if cfg.strict() {
            let (lo, hi) = (cfg.digit_min(), cfg.digit_max());
            for (axis, &e) in self.0.iter().enumerate() {
                if e < lo || e > hi {
                    return Err(DimError::CapacityOverflow { axis, exponent: e, lo, hi });
                }
            }
        }
        Ok(pack_code(self, cfg))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!(self.0.len(), rhs.0.len(), "dimension axis counts differ");
        Self(self.0.iter().zip(&rhs.0).map(|(&a, &b)| f(a, b)).collect())
    }
}

impl From<Vec<i64>> for DimVector {
    fn from(exponents: Vec<i64>) -> Self {
        Self(exponents)
    }
}

impl From<&[i64]> for DimVector {
    fn from(exponents: &[i64]) -> Self {
        Self(exponents.to_vec())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Packs without counting or range checks; compat semantics, wrapping on
/// (absurdly large) overflow. Used internally for leaf codes so that only
/// genuine per-operation work reaches the instrumentation counters.
pub(crate) fn pack_code(v: &DimVector, cfg: &EncodingConfig) -> PackedDim {
    let mut code: i64 = 0;
    let mut place: i64 = 1;
    for (axis, &e) in v.exponents().iter().enumerate() {
        code = code.wrapping_add(e.wrapping_mul(place));
        if axis + 1 < v.axis_count() {
            place = place.wrapping_mul(cfg.radix());
        }
    }
    PackedDim(code)
}

/// A dimension folded into one signed 64-bit code.
///
/// Codes add under multiplication and subtract under division, so the
/// arithmetic is a homomorphic image of [`DimVector`] as long as every
/// exponent stays inside the digit window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedDim(i64);

impl PackedDim {
    pub fn new(code: i64) -> Self {
        Self(code)
    }

    pub fn code(&self) -> i64 {
        self.0
    }

    /// Counted equality test on codes, the packed analogue of
    /// [`DimVector::matches`].
    pub fn matches(&self, rhs: &Self) -> bool {
        instrument::count_dim_op();
        self == rhs
    }

    /// Recovers the exponent vector by extracting balanced digits. Errors
    /// with [`DimError::CapacityOverflow`] if the code carries digits beyond
    /// the configured axes, which can only happen to codes produced by
    /// compat-mode arithmetic.
    pub fn unpack(&self, cfg: &EncodingConfig) -> Result<DimVector, DimError> {
        instrument::count_dim_op();
        let (exps, leftover) = unpack_digits(self.0, cfg);
        if leftover != 0 {
            return Err(DimError::CapacityOverflow {
                axis: cfg.axis_count(),
                exponent: leftover,
                lo: cfg.digit_min(),
                hi: cfg.digit_max(),
            });
        }
        Ok(DimVector(exps))
    }

    /// Like [`PackedDim::unpack`] but discards digits beyond the last axis,
    /// returning whatever the low digits spell. This is the readback a
    /// compat-mode code gets.
    pub fn unpack_lossy(&self, cfg: &EncodingConfig) -> DimVector {
        instrument::count_dim_op();
        DimVector(unpack_digits(self.0, cfg).0)
    }

    /// Scales the dimension by `p/q` directly on the code. Strict configs
    /// take the exact route (unpack, scale the vector, repack) so that
    /// non-integer results and capacity violations surface as errors; compat
    /// configs divide the raw code the way integer template arithmetic does.
    pub fn scale(&self, p: i64, q: i64, cfg: &EncodingConfig) -> Result<Self, DimError> {
        instrument::count_dim_op();
        assert!(q >= 1, "fractional power denominator must be positive");
        if cfg.strict() {
            self.unpack(cfg)?.pow_frac(p, q, cfg)?.pack(cfg)
        } else {
            let scaled = self.0 as i128 * p as i128 / q as i128;
            Ok(Self(scaled as i64))
        }
    }
}

impl Add for PackedDim {
    type Output = PackedDim;

    /// Code for the product dimension.
    fn add(self, rhs: Self) -> Self {
        instrument::count_dim_op();
        Self(self.0.wrapping_add(rhs.0))
    }
}

impl Sub for PackedDim {
    type Output = PackedDim;

    /// Code for the quotient dimension.
    fn sub(self, rhs: Self) -> Self {
        instrument::count_dim_op();
        Self(self.0.wrapping_sub(rhs.0))
    }
}

impl fmt::Display for PackedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn unpack_digits(code: i64, cfg: &EncodingConfig) -> (Vec<i64>, i64) {
    let radix = cfg.radix();
    let hi = cfg.digit_max();
    let mut rest = code;
    let mut exps = Vec::with_capacity(cfg.axis_count());
    for _ in 0..cfg.axis_count() {
        let mut digit = rest.rem_euclid(radix);
        if digit > hi {
            digit -= radix;
        }
        exps.push(digit);
        rest = (rest - digit) / radix;
    }
    (exps, rest)
}

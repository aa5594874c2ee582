//! Unit systems: named axes, base and derived units, and named constants.
//!
//! Every unit carries a dimension vector and a conversion factor into the
//! system's coherent internal representation. Base units anchor an axis
//! (`m` is the internal length unit exactly when its factor is 1.0), and
//! derived units are folded from expressions over existing symbols at
//! definition time, so using a derived unit later costs one constant.
//!
//! Axes, units, and constants share one namespace; defining any name twice
//! is an error rather than a shadowing.

use std::ops::{Div, Mul, Neg};

use indexmap::IndexMap;
use thiserror::Error;

use crate::dim::{DimVector, EncodingConfig};
use crate::quantity::{Precision, Quantity, QuantityError};

/// A named unit: its dimension and its factor relative to the coherent
/// internal unit of that dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDef {
    symbol: String,
    dim: DimVector,
    factor: f64,
}

impl UnitDef {
    pub fn new(symbol: impl Into<String>, dim: DimVector, factor: f64) -> Self {
        Self { symbol: symbol.into(), dim, factor }
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }
}

/// Errors from defining axes, units, and constants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("`{0}` is already defined")]
    Redefinition(String),
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("unknown unit or constant `{0}`")]
    UnknownUnit(String),
    #[error("invalid factor {factor} for `{symbol}`: conversion factors must be positive and finite")]
    InvalidFactor { symbol: String, factor: f64 },
    #[error("invalid value {value} for constant `{name}`: constants must be finite")]
    NonFiniteConstant { name: String, value: f64 },
    #[error("cannot define axis `{name}`: all {max} axes are in use")]
    AxisOverflow { name: String, max: usize },
    #[error(transparent)]
    Quantity(#[from] QuantityError),
}

/// Expression tree for unit and constant definitions, folded at definition
/// time by [`UnitSystem::fold`].
#[derive(Debug, Clone, PartialEq)]
pub enum UnitExpr {
    Number(f64),
    Symbol(String),
    Mul(Box<UnitExpr>, Box<UnitExpr>),
    Div(Box<UnitExpr>, Box<UnitExpr>),
    Neg(Box<UnitExpr>),
    PowInt(Box<UnitExpr>, i64),
    Sqrt(Box<UnitExpr>),
    Pow(Box<UnitExpr>, i64, i64),
}

impl UnitExpr {
    pub fn num(value: f64) -> Self {
        Self::Number(value)
    }

    pub fn sym(symbol: impl Into<String>) -> Self {
        Self::Symbol(symbol.into())
    }

    pub fn powi(self, exp: i64) -> Self {
        Self::PowInt(Box::new(self), exp)
    }

    pub fn sqrt(self) -> Self {
        Self::Sqrt(Box::new(self))
    }

    pub fn pow(self, p: i64, q: i64) -> Self {
        Self::Pow(Box::new(self), p, q)
    }
}

impl Mul for UnitExpr {
    type Output = UnitExpr;

    fn mul(self, rhs: Self) -> Self {
        Self::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Div for UnitExpr {
    type Output = UnitExpr;

    fn div(self, rhs: Self) -> Self {
        Self::Div(Box::new(self), Box::new(rhs))
    }
}

impl Neg for UnitExpr {
    type Output = UnitExpr;

    fn neg(self) -> Self {
        Self::Neg(Box::new(self))
    }
}

/// Registry of axes, units, and constants under one encoding config.
#[derive(Debug, Clone)]
pub struct UnitSystem {
    cfg: EncodingConfig,
    axes: Vec<String>,
    units: IndexMap<String, UnitDef>,
    constants: IndexMap<String, Quantity>,
}

impl UnitSystem {
    pub fn new(cfg: EncodingConfig) -> Self {
        Self { cfg, axes: Vec::new(), units: IndexMap::new(), constants: IndexMap::new() }
    }

    pub fn cfg(&self) -> &EncodingConfig {
        &self.cfg
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a == name)
    }

    pub fn unit(&self, symbol: &str) -> Option<&UnitDef> {
        self.units.get(symbol)
    }

    pub fn constant(&self, name: &str) -> Option<&Quantity> {
        self.constants.get(name)
    }

    /// Units in definition order.
    pub fn units(&self) -> impl Iterator<Item = &UnitDef> {
        self.units.values()
    }

    /// Constants in definition order.
    pub fn constants(&self) -> impl Iterator<Item = (&str, &Quantity)> {
        self.constants.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// True if the name is taken by an axis, unit, or constant.
    pub fn is_defined(&self, name: &str) -> bool {
        self.axis_index(name).is_some()
            || self.units.contains_key(name)
            || self.constants.contains_key(name)
    }

    /// Declares a new axis, returning its index (also its packed place).
    pub fn define_axis(&mut self, name: &str) -> Result<usize, SystemError> {
        if self.is_defined(name) {
            return Err(SystemError::Redefinition(name.into()));
        }
        if self.axes.len() >= self.cfg.axis_count() {
            return Err(SystemError::AxisOverflow { name: name.into(), max: self.cfg.axis_count() });
        }
        self.axes.push(name.into());
        Ok(self.axes.len() - 1)
    }

    /// Defines a unit spanning exactly one axis with the given conversion
    /// factor into the axis's coherent unit.
    pub fn define_base_unit(&mut self, symbol: &str, axis: &str, factor: f64) -> Result<(), SystemError> {
        let index = self
            .axis_index(axis)
            .ok_or_else(|| SystemError::UnknownAxis(axis.into()))?;
        let dim = DimVector::axis(self.cfg.axis_count(), index);
        self.insert_unit(UnitDef::new(symbol, dim, factor))
    }

    /// Folds `expr` and registers the result as a unit.
    pub fn define_derived_unit(&mut self, symbol: &str, expr: &UnitExpr) -> Result<(), SystemError> {
        let folded = self.fold(expr)?;
        self.insert_unit(UnitDef::new(symbol, folded.dim().clone(), folded.value()))
    }

    /// Folds `expr` and registers the result as a constant.
    pub fn define_constant(&mut self, name: &str, expr: &UnitExpr) -> Result<(), SystemError> {
        let folded = self.fold(expr)?;
        self.insert_constant(name, folded)
    }

    /// Registers an already-folded unit after validating its symbol and
    /// factor.
    pub fn insert_unit(&mut self, def: UnitDef) -> Result<(), SystemError> {
        assert_eq!(
            def.dim.axis_count(),
            self.cfg.axis_count(),
            "unit dimension length does not match the configured axis count"
        );
        if self.is_defined(&def.symbol) {
            return Err(SystemError::Redefinition(def.symbol));
        }
        if !(def.factor.is_finite() && def.factor > 0.0) {
            return Err(SystemError::InvalidFactor { symbol: def.symbol, factor: def.factor });
        }
        self.units.insert(def.symbol.clone(), def);
        Ok(())
    }

    /// Registers an already-folded constant. Constants may be zero or
    /// negative but must be finite.
    pub fn insert_constant(&mut self, name: &str, value: Quantity) -> Result<(), SystemError> {
        if self.is_defined(name) {
            return Err(SystemError::Redefinition(name.into()));
        }
        if !value.value().is_finite() {
            return Err(SystemError::NonFiniteConstant { name: name.into(), value: value.value() });
        }
        self.constants.insert(name.into(), value);
        Ok(())
    }

    /// Evaluates a unit expression to a quantity at full precision. Symbols
    /// resolve to units (as their factor) or constants (as their value).
    pub fn fold(&self, expr: &UnitExpr) -> Result<Quantity, SystemError> {
        let n = self.cfg.axis_count();
        match expr {
            UnitExpr::Number(v) => Ok(Quantity::dimensionless(*v, Precision::Double, n)),
            UnitExpr::Symbol(s) => {
                if let Some(unit) = self.units.get(s) {
                    Ok(Quantity::new(unit.factor, Precision::Double, unit.dim.clone()))
                } else if let Some(value) = self.constants.get(s) {
                    Ok(value.clone())
                } else {
                    Err(SystemError::UnknownUnit(s.clone()))
                }
            }
            UnitExpr::Mul(a, b) => Ok(self.fold(a)?.multiply(&self.fold(b)?)),
            UnitExpr::Div(a, b) => Ok(self.fold(a)?.divide(&self.fold(b)?)),
            UnitExpr::Neg(a) => Ok(self.fold(a)?.negate()),
            UnitExpr::PowInt(a, k) => Ok(self.fold(a)?.pow_rational(*k, 1, &self.cfg)?),
            UnitExpr::Sqrt(a) => Ok(self.fold(a)?.sqrt(&self.cfg)?),
            UnitExpr::Pow(a, p, q) => Ok(self.fold(a)?.pow_rational(*p, *q, &self.cfg)?),
        }
    }

    /// Renders a dimension as a product of per-axis symbols with exponents,
    /// like `m^2 kg^1 s^-2`, or `dimensionless` when all exponents are zero.
    ///
    /// Each axis is labelled by its coherent unit (the first unit on the
    /// axis with factor exactly 1.0), falling back to the first unit on the
    /// axis and then to the axis name itself.
    pub fn dim_display(&self, dim: &DimVector) -> String {
        if dim.is_dimensionless() {
            return "dimensionless".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in dim.exponents().iter().enumerate() {
            if e != 0 {
                parts.push(format!("{}^{}", self.axis_symbol(i), e));
            }
        }
        parts.join(" ")
    }

    fn axis_symbol(&self, index: usize) -> String {
        let n = self.cfg.axis_count();
        let axis_dim = DimVector::axis(n, index);
        let on_axis = |u: &&UnitDef| *u.dim() == axis_dim;
        if let Some(unit) = self.units.values().find(|u| on_axis(u) && u.factor == 1.0) {
            return unit.symbol.clone();
        }
        if let Some(unit) = self.units.values().find(on_axis) {
            return unit.symbol.clone();
        }
        match self.axes.get(index) {
            Some(name) => name.clone(),
            None => format!("axis{index}"),
        }
    }
}

//! Two evaluators over a checked program.
//!
//! [`eval_checked`] re-derives the dimension of every intermediate value at
//! runtime, exactly the bookkeeping a debug build of a dimension-checked
//! numeric type would do. [`eval_fast`] is the stripped form: units have
//! already been folded into plain conversion factors, so it runs on bare
//! floats and performs zero dimension operations, which the instrumentation
//! counters can confirm. Both walk the same tree, apply the same precision
//! rounding after every step, and therefore produce bit-identical output.
//!
//! Checked evaluation carries dimensions as exponent vectors, except for
//! packed compat runs, which keep raw integer codes so that runtime
//! behaviour (including aliasing) matches what the compat checker accepted.
//! For strict runs the two carriers are interchangeable because checking
//! already proved every intermediate stays inside the digit window.

use std::collections::HashMap;

use crate::dim::{pack_code, DimVector, PackedDim};
use crate::lang::ast::{BinOp, ExprId, ExprKind, StmtKind};
use crate::lang::check::{DimEncoding, TypedProgram};
use crate::lang::diag::{DiagCode, Diagnostic};
use crate::quantity::{pow_value, Precision, QuantityError};

/// One line of program output before formatting.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    /// The printed expression exactly as written in the source.
    pub label: String,
    pub value: f64,
    /// The target unit expression as written, or `None` when it is
    /// dimensionless.
    pub unit_text: Option<String>,
}

/// Renders a record as `<label> = <value>[ <unit>]`, with the value in
/// Rust's shortest round-trip form.
pub fn format_output(record: &OutputRecord) -> String {
    match &record.unit_text {
        Some(unit) => format!("{} = {} {}", record.label, record.value, unit),
        None => format!("{} = {}", record.label, record.value),
    }
}

/// Runtime dimension carrier for the checked evaluator.
#[derive(Debug, Clone)]
enum RtDim {
    Vec(DimVector),
    Code(PackedDim),
}

/// A runtime value in the checked evaluator.
#[derive(Debug, Clone)]
struct RtQuantity {
    value: f64,
    prec: Precision,
    dim: RtDim,
}

/// Evaluates with full dimension bookkeeping. Dimension mismatches cannot
/// occur on a checked program; what can still fail at runtime is value-level:
/// a fractional power of a negative variable, or a print unit that evaluates
/// to zero or worse.
pub fn eval_checked(tp: &TypedProgram) -> Result<Vec<OutputRecord>, Diagnostic> {
    let use_codes = tp.encoding == DimEncoding::Packed && !tp.system.cfg().strict();
    let mut eval = Checked { tp, use_codes, vars: HashMap::new() };
    let mut records = Vec::new();
    for (index, stmt) in tp.program.stmts.iter().enumerate() {
        match &stmt.kind {
            StmtKind::LetDecl { name, expr, .. } => {
                let q = eval.expr(*expr)?;
                let prec = tp.binding_precision(index).expect("let statements bind a precision");
                eval.vars.insert(
                    name.name.clone(),
                    RtQuantity { value: prec.round(q.value), prec, dim: q.dim },
                );
            }
            StmtKind::Print { expr, in_unit } => {
                let q = eval.expr(*expr)?;
                let u = eval.expr(*in_unit)?;
                // The conversion's own dimension check, one counted op.
                assert!(eval.dim_eq(&q.dim, &u.dim), "print checked against its unit");
                check_print_unit(tp, *in_unit, u.value)?;
                records.push(record(tp, *expr, *in_unit, q.value / u.value));
            }
            _ => {}
        }
    }
    Ok(records)
}

/// Evaluates on bare floats: no dimensions are constructed, compared, or
/// combined anywhere on this path.
pub fn eval_fast(tp: &TypedProgram) -> Result<Vec<OutputRecord>, Diagnostic> {
    let mut eval = Fast { tp, vars: HashMap::new() };
    let mut records = Vec::new();
    for (index, stmt) in tp.program.stmts.iter().enumerate() {
        match &stmt.kind {
            StmtKind::LetDecl { name, expr, .. } => {
                let v = eval.expr(*expr)?;
                let prec = tp.binding_precision(index).expect("let statements bind a precision");
                eval.vars.insert(name.name.clone(), (prec.round(v.0), prec));
            }
            StmtKind::Print { expr, in_unit } => {
                let q = eval.expr(*expr)?;
                let u = eval.expr(*in_unit)?;
                check_print_unit(tp, *in_unit, u.0)?;
                records.push(record(tp, *expr, *in_unit, q.0 / u.0));
            }
            _ => {}
        }
    }
    Ok(records)
}

fn record(tp: &TypedProgram, expr: ExprId, in_unit: ExprId, value: f64) -> OutputRecord {
    let program = &tp.program;
    let unit_text = if tp.node(in_unit).dim.is_dimensionless() {
        None
    } else {
        Some(program.snippet(program.arena[in_unit].span).to_string())
    };
    OutputRecord {
        label: program.snippet(program.arena[expr].span).to_string(),
        value,
        unit_text,
    }
}

fn check_print_unit(tp: &TypedProgram, in_unit: ExprId, value: f64) -> Result<(), Diagnostic> {
    if value.is_finite() && value > 0.0 {
        return Ok(());
    }
    Err(Diagnostic::new(
        &tp.program.file,
        tp.program.arena[in_unit].pos,
        DiagCode::DomainError,
        format!("print unit evaluates to {value}; conversion needs a positive finite value"),
    ))
}

fn domain_diag(tp: &TypedProgram, id: ExprId, err: QuantityError) -> Diagnostic {
    let message = match err {
        QuantityError::Domain(m) => m,
        other => other.to_string(),
    };
    Diagnostic::new(&tp.program.file, tp.program.arena[id].pos, DiagCode::DomainError, message)
}

struct Checked<'a> {
    tp: &'a TypedProgram,
    use_codes: bool,
    vars: HashMap<String, RtQuantity>,
}

impl Checked<'_> {
    fn expr(&mut self, id: ExprId) -> Result<RtQuantity, Diagnostic> {
        let tp = self.tp;
        let dp = tp.default_precision;
        match &tp.program.arena[id].kind {
            ExprKind::Number(v) => Ok(self.leaf(dp.round(*v), dp, None)),
            ExprKind::Name(name) => {
                if let Some(var) = self.vars.get(name) {
                    return Ok(var.clone());
                }
                if let Some(unit) = tp.system.unit(name) {
                    let dim = unit.dim().clone();
                    return Ok(self.leaf(dp.round(unit.factor()), dp, Some(dim)));
                }
                let value = tp.system.constant(name).expect("checked name resolves");
                let dim = value.dim().clone();
                Ok(self.leaf(dp.round(value.value()), dp, Some(dim)))
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.expr(*lhs)?;
                let r = self.expr(*rhs)?;
                let prec = l.prec.max(r.prec);
                let (value, dim) = match op {
                    BinOp::Add | BinOp::Sub => {
                        assert!(self.dim_eq(&l.dim, &r.dim), "additive operands checked");
                        let v = if *op == BinOp::Add { l.value + r.value } else { l.value - r.value };
                        (v, l.dim)
                    }
                    BinOp::Mul => (l.value * r.value, self.dim_combine(&l.dim, &r.dim, true)),
                    BinOp::Div => (l.value / r.value, self.dim_combine(&l.dim, &r.dim, false)),
                };
                Ok(RtQuantity { value: prec.round(value), prec, dim })
            }
            ExprKind::Neg(x) => {
                let inner = self.expr(*x)?;
                Ok(RtQuantity {
                    value: inner.prec.round(-inner.value),
                    prec: inner.prec,
                    dim: inner.dim,
                })
            }
            ExprKind::PowInt { base, exp } => self.power(id, *base, *exp, 1),
            ExprKind::Sqrt(arg) => {
                let inner = self.expr(*arg)?;
                let dim = self.dim_pow(&inner.dim, 1, 2);
                Ok(RtQuantity {
                    value: inner.prec.round(inner.value.sqrt()),
                    prec: inner.prec,
                    dim,
                })
            }
            ExprKind::Pow { base, p, q } => self.power(id, *base, *p, *q),
        }
    }

    fn power(&mut self, id: ExprId, base: ExprId, p: i64, q: i64) -> Result<RtQuantity, Diagnostic> {
        let inner = self.expr(base)?;
        let dim = self.dim_pow(&inner.dim, p, q);
        let raw = pow_value(inner.value, p, q).map_err(|e| domain_diag(self.tp, id, e))?;
        Ok(RtQuantity { value: inner.prec.round(raw), prec: inner.prec, dim })
    }

    fn leaf(&self, value: f64, prec: Precision, dim: Option<DimVector>) -> RtQuantity {
        let cfg = self.tp.system.cfg();
        let n = cfg.axis_count();
        let dim = dim.unwrap_or_else(|| DimVector::zero(n));
        let dim = if self.use_codes {
            // Materializing a leaf's code is a constant, not a runtime
            // dimension operation, so it bypasses the counted pack.
            RtDim::Code(pack_code(&dim, cfg))
        } else {
            RtDim::Vec(dim)
        };
        RtQuantity { value, prec, dim }
    }

    fn dim_eq(&self, a: &RtDim, b: &RtDim) -> bool {
        match (a, b) {
            (RtDim::Vec(x), RtDim::Vec(y)) => x.matches(y),
            (RtDim::Code(x), RtDim::Code(y)) => x.matches(y),
            _ => unreachable!("mixed runtime dimension carriers"),
        }
    }

    fn dim_combine(&self, a: &RtDim, b: &RtDim, mul: bool) -> RtDim {
        match (a, b) {
            (RtDim::Vec(x), RtDim::Vec(y)) => {
                RtDim::Vec(if mul { x.multiply(y) } else { x.divide(y) })
            }
            (RtDim::Code(x), RtDim::Code(y)) => RtDim::Code(if mul { *x + *y } else { *x - *y }),
            _ => unreachable!("mixed runtime dimension carriers"),
        }
    }

    fn dim_pow(&self, a: &RtDim, p: i64, q: i64) -> RtDim {
        let cfg = self.tp.system.cfg();
        match a {
            RtDim::Vec(x) => {
                RtDim::Vec(x.pow_frac(p, q, cfg).expect("power checked against the dimension"))
            }
            RtDim::Code(x) => {
                // Codes are only carried in compat runs, where scaling
                // truncates instead of failing.
                RtDim::Code(x.scale(p, q, cfg).expect("compat scaling is total"))
            }
        }
    }
}

struct Fast<'a> {
    tp: &'a TypedProgram,
    vars: HashMap<String, (f64, Precision)>,
}

impl Fast<'_> {
    /// Mirrors [`Checked::expr`] minus every dimension step: same value
    /// arithmetic, same precision promotion and rounding, in the same order.
    fn expr(&mut self, id: ExprId) -> Result<(f64, Precision), Diagnostic> {
        let tp = self.tp;
        let dp = tp.default_precision;
        match &tp.program.arena[id].kind {
            ExprKind::Number(v) => Ok((dp.round(*v), dp)),
            ExprKind::Name(name) => {
                if let Some(&var) = self.vars.get(name) {
                    return Ok(var);
                }
                if let Some(unit) = tp.system.unit(name) {
                    return Ok((dp.round(unit.factor()), dp));
                }
                let value = tp.system.constant(name).expect("checked name resolves");
                Ok((dp.round(value.value()), dp))
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let (lv, lp) = self.expr(*lhs)?;
                let (rv, rp) = self.expr(*rhs)?;
                let prec = lp.max(rp);
                let value = match op {
                    BinOp::Add => lv + rv,
                    BinOp::Sub => lv - rv,
                    BinOp::Mul => lv * rv,
                    BinOp::Div => lv / rv,
                };
                Ok((prec.round(value), prec))
            }
            ExprKind::Neg(x) => {
                let (v, prec) = self.expr(*x)?;
                Ok((prec.round(-v), prec))
            }
            ExprKind::PowInt { base, exp } => {
                let (v, prec) = self.expr(*base)?;
                let raw = pow_value(v, *exp, 1).map_err(|e| domain_diag(tp, id, e))?;
                Ok((prec.round(raw), prec))
            }
            ExprKind::Sqrt(arg) => {
                let (v, prec) = self.expr(*arg)?;
                Ok((prec.round(v.sqrt()), prec))
            }
            ExprKind::Pow { base, p, q } => {
                let (v, prec) = self.expr(*base)?;
                let raw = pow_value(v, *p, *q).map_err(|e| domain_diag(tp, id, e))?;
                Ok((prec.round(raw), prec))
            }
        }
    }
}

//! Syntax tree for UDL programs.
//!
//! Expressions live in a flat arena and refer to each other by [`ExprId`].
//! Every node keeps the position of its defining token (for diagnostics,
//! binary operators sit at their operator token) and the byte span of the
//! full subexpression text (for echoing source back in output labels).

use std::ops::Index;

use crate::quantity::Precision;

/// A 1-based line and column in the source file. Columns count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

/// Half-open byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub fn new(lo: u32, hi: u32) -> Self {
        Self { lo, hi }
    }

    /// Smallest span covering both.
    pub fn join(self, other: Span) -> Span {
        Span { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }
}

/// Handle into an [`ExprArena`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExprId(u32);

impl ExprId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An identifier with the position it was written at.
#[derive(Debug, Clone)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Number(f64),
    /// Reference to a unit, constant, or variable.
    Name(String),
    Binary { op: BinOp, lhs: ExprId, rhs: ExprId },
    Neg(ExprId),
    /// `base ^ exp` with a literal integer exponent.
    PowInt { base: ExprId, exp: i64 },
    Sqrt(ExprId),
    /// `pow(base, p, q)`, the rational power `p/q`.
    Pow { base: ExprId, p: i64, q: i64 },
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
    pub span: Span,
}

/// Flat storage for all expressions of one program.
#[derive(Debug, Clone, Default)]
pub struct ExprArena {
    nodes: Vec<Expr>,
}

impl ExprArena {
    pub fn alloc(&mut self, expr: Expr) -> ExprId {
        let id = ExprId(self.nodes.len() as u32);
        self.nodes.push(expr);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Grows a node's span, used to absorb surrounding parentheses.
    pub fn widen(&mut self, id: ExprId, span: Span) {
        let node = &mut self.nodes[id.index()];
        node.span = node.span.join(span);
    }
}

impl Index<ExprId> for ExprArena {
    type Output = Expr;

    fn index(&self, id: ExprId) -> &Expr {
        &self.nodes[id.index()]
    }
}

#[derive(Debug, Clone)]
pub enum StmtKind {
    /// `dim name;`
    DimDecl { name: Ident },
    /// `unit symbol = base(axis, factor);`
    BaseUnitDecl { symbol: Ident, axis: Ident, factor: f64, factor_pos: Pos },
    /// `unit symbol = expr;`
    UnitDecl { symbol: Ident, expr: ExprId },
    /// `const name = expr;`
    ConstDecl { name: Ident, expr: ExprId },
    /// `let name : annotation [@precision] = expr;`
    LetDecl { name: Ident, annotation: ExprId, precision: Option<Precision>, expr: ExprId },
    /// `print expr in unit-expr;`
    Print { expr: ExprId, in_unit: ExprId },
}

#[derive(Debug, Clone)]
pub struct Stmt {
    pub kind: StmtKind,
    /// Position of the statement's leading keyword.
    pub pos: Pos,
}

/// A parsed program together with its source, for span slicing.
#[derive(Debug, Clone)]
pub struct Program {
    pub file: String,
    pub source: String,
    pub stmts: Vec<Stmt>,
    pub arena: ExprArena,
}

impl Program {
    /// The exact source text under a span.
    pub fn snippet(&self, span: Span) -> &str {
        &self.source[span.lo as usize..span.hi as usize]
    }
}

//! Holomorphic expressions in the single variable `z`.
//!
//! Expressions are parsed into an [`ExprNode`] tree and evaluated as
//! second-order jets ([`Jet2`]): value, first and second complex derivative.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := '-'? power            (must fold to an integer constant)
//! primary  := number | number 'i' | 'i' | 'z'
//!           | func '(' expr ')' | '(' expr ')'
//! func     := 'exp' | 'log' | 'sin' | 'cos'
//! number   := digits ('.' digits?)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! Precedence from tightest to loosest: `^`, unary `-`, `*` `/`, `+` `-`.
//! `^` is right-associative and only accepts integer exponents, so every
//! expression stays single-valued.

mod jet;
mod parse;

use std::fmt;

pub use jet::{eval_jet2, EvalError, EvalErrorKind, Jet2};
pub use parse::{parse, ParseError};

use num_complex::Complex64;

/// A complex number `re + i·im`.
pub type ComplexScalar = Complex64;

/// Built-in holomorphic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }
}

/// Expression tree.
///
/// Trees are immutable once built and can be shared freely between threads.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Const(ComplexScalar),
    Var,
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    Neg(Box<ExprNode>),
    IntPow(Box<ExprNode>, i32),
    Call(Func, Box<ExprNode>),
}

impl ExprNode {
    pub fn constant(re: f64, im: f64) -> Self {
        ExprNode::Const(ComplexScalar::new(re, im))
    }

    pub fn add(a: ExprNode, b: ExprNode) -> Self {
        ExprNode::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: ExprNode, b: ExprNode) -> Self {
        ExprNode::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: ExprNode, b: ExprNode) -> Self {
        ExprNode::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: ExprNode, b: ExprNode) -> Self {
        ExprNode::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: ExprNode) -> Self {
        ExprNode::Neg(Box::new(a))
    }

    pub fn powi(a: ExprNode, k: i32) -> Self {
        ExprNode::IntPow(Box::new(a), k)
    }

    pub fn call(f: Func, a: ExprNode) -> Self {
        ExprNode::Call(f, Box::new(a))
    }

    /// True if the tree does not reference `z`.
    pub fn is_constant(&self) -> bool {
        match self {
            ExprNode::Const(_) => true,
            ExprNode::Var => false,
            ExprNode::Add(a, b) | ExprNode::Sub(a, b) | ExprNode::Mul(a, b) | ExprNode::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            ExprNode::Neg(a) | ExprNode::IntPow(a, _) | ExprNode::Call(_, a) => a.is_constant(),
        }
    }

    /// Plain value at `z`, without derivatives.
    pub fn eval(&self, z: ComplexScalar) -> Result<ComplexScalar, EvalError> {
        eval_jet2(self, z).map(|j| j.v)
    }
}

/// Canonical fully-parenthesized text. Parsing the output yields a tree
/// with identical evaluation semantics.
pub fn print(e: &ExprNode) -> String {
    e.to_string()
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // `{:?}` is the shortest representation that round-trips exactly.
    let s = format!("{:?}", x.abs());
    if x.is_sign_negative() {
        write!(f, "(-{s})")
    } else {
        f.write_str(&s)
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Const(c) => {
                if c.im == 0.0 && !c.im.is_sign_negative() {
                    write_real(f, c.re)
                } else if c.re == 0.0 && !c.re.is_sign_negative() && !c.im.is_sign_negative() {
                    write!(f, "{:?}i", c.im)
                } else {
                    f.write_str("(")?;
                    write_real(f, c.re)?;
                    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                    write!(f, "{sign}{:?}i)", c.im.abs())
                }
            }
            ExprNode::Var => f.write_str("z"),
            ExprNode::Add(a, b) => write!(f, "({a}+{b})"),
            ExprNode::Sub(a, b) => write!(f, "({a}-{b})"),
            ExprNode::Mul(a, b) => write!(f, "({a}*{b})"),
            ExprNode::Div(a, b) => write!(f, "({a}/{b})"),
            ExprNode::Neg(a) => write!(f, "(-{a})"),
            ExprNode::IntPow(a, k) => write!(f, "({a}^{k})"),
            ExprNode::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

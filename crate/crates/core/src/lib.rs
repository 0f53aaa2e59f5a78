//! Ribaucour-type surfaces from holomorphic Weierstrass data.
//!
//! A pair of holomorphic functions `(f, g)` determines a surface whose Gauss
//! map is the stereographic image of `g` and whose support function is
//! `exp(Re f)`. Such surfaces satisfy `2 Psi H + (Lambda + Psi^2) K = 0`.
//!
//! - [`expr`]: parsing and second-order jets of holomorphic expressions
//! - [`weierstrass`]: closed-form geometry at a parameter point
//! - [`fd`]: finite-difference oracle for any parameterized surface
//! - [`oracle`]: closed form vs. oracle comparison
//! - [`rotation`]: the rotational family and its singular parallels
//! - [`sampler`]: grid sampling, masking, OBJ/CSV output

// `!(x <= tol)` is used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// `ExprNode::add` and friends are tree constructors, not operators.
#![allow(clippy::should_implement_trait)]

pub mod corpus;
pub mod expr;
pub mod fd;
pub mod forms;
pub mod oracle;
pub mod rotation;
pub mod sampler;
pub mod weierstrass;

pub use expr::{ComplexScalar, ExprNode, Jet2};
pub use weierstrass::{evaluate, CoreError, GeneratorPair, SurfaceJet, Thresholds};

pub mod concom;
pub mod diffop;
pub mod error;
pub mod field;
pub mod fourier;
pub mod gcd;
pub mod kernel;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod quasiexp;
pub mod ratfunc;
pub mod reflector;
pub mod specfile;
pub mod symbol;
pub mod text;
pub mod wavefun;

use num_complex::Complex;
use num_rational::BigRational;

pub use diffop::{DiffOp, Substitution};
pub use error::{Error, Result};
pub use field::Field;
pub use poly::{Mono, MultiPoly};
pub use quasiexp::QuasiExp;
pub use ratfunc::RatFunc;
pub use symbol::Var;

/// Exact rationals.
pub type Rational = BigRational;
/// Gaussian rationals, the default scalar.
pub type Scalar = Complex<BigRational>;
pub type Poly = MultiPoly<Scalar>;
pub type Rf = RatFunc<Scalar>;
pub type Op = DiffOp<Scalar>;
pub type Qe = QuasiExp<Scalar>;

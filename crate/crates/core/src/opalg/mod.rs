//! Exact symbolic algebra over the canonical operators `x, y, z, p_x, p_y, p_z`.
//!
//! Coefficients are exact; nothing in this module touches floating point
//! except [`coeff::Coeff::eval`], which is the bridge to the matrix side.

pub mod coeff;
pub mod expr;
pub mod hamiltonian;
pub mod tensor;
pub mod text;

pub use coeff::{Coeff, Param, ParamEnv};
pub use expr::{commutator, Axis, CanonicalSymbol, Kind, Monomial, OperatorExpr};
pub use hamiltonian::{dump_buckets, expand_nc_hamiltonian, BUCKETS};
pub use tensor::{bopp_shift, lambda_contract, AntisymTensor, Contraction, Space};
pub use text::{parse, to_text};

//! Characteristic polynomials, eigenvalues and discriminant geometry of
//! partially symmetric and symmetric tensors.

pub mod bincubic;
pub mod cubic;
pub mod cyclotomic;
pub mod disc;
pub mod error;
pub mod fiber;
pub mod homotopy;
pub mod hurwitz;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod resultant;
pub mod scalar;
pub mod spectra;
pub mod symmetry;
pub mod tensor;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};
pub use resultant::{char_poly, discriminant, resultant, CharPoly};
pub use scalar::{Rational, Scalar};
pub use tensor::{eigencount, PSTensor, SymForm};

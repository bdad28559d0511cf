//! Exact and floating polynomial arithmetic.

pub mod modp;
pub mod monomial;
pub mod mpoly;
pub mod roots;
pub mod text;
pub mod upoly;

pub use monomial::{monomials_of_degree, Monomial};
pub use mpoly::MPoly;
pub use roots::{exact_roots, univariate_roots, Root, RootOptions};
pub use text::{format_poly, format_poly_named, parse_poly};
pub use upoly::{default_nodes, univariate_interpolate, UPoly};

//! Exact arithmetic: polynomials over the integers and rationals, their
//! factorization, real and complex roots, and simple number fields.

pub mod complex;
pub mod factor;
pub mod interval;
pub mod modular;
pub mod numfield;
pub mod poly;
pub mod roots;

pub use complex::{squared_moduli, RootModulus};
pub use factor::{factor_over_z, is_irreducible, Factorization};
pub use interval::Interval;
pub use numfield::{embed_real, roots_in_field, NfElem, NumberField};
pub use poly::{discriminant, resultant, IntPoly, Poly, RatPoly};
pub use roots::{isolate_real_roots, AlgebraicNumber, Sturm};

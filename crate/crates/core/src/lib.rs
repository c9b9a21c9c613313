//! Exact computations around metaplectic covers of `GL_r` over a tame local
//! field and the type-A affine Hecke algebras attached to their simple types.
//!
//! Layers, bottom up: [`ffield`] (small finite fields), [`hilbert`] (tame
//! Hilbert symbols), [`cocycle`] (cover commutators), [`weyl`] (twisted
//! extended affine Weyl groups), [`scalar`] and [`hecke`] (Hecke algebras over
//! `Q(v)`, `z = v²`), [`lattice`] and [`typeparams`] (congruence lattices and
//! type invariants), [`linalg`] and [`hmodules`] (induced modules).

pub mod cocycle;
pub mod ffield;
pub mod hecke;
pub mod hilbert;
pub mod hmodules;
pub mod lattice;
pub mod linalg;
pub mod scalar;
pub mod typeparams;
pub mod weyl;

pub use cocycle::{CocycleError, CoverParams};
pub use ffield::{make_field, FFElem, FieldError, FiniteField};
pub use hilbert::{Extension, HilbertError, LocalField, LocalFieldElem, MuN};

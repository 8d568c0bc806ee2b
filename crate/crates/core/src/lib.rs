//! Mod-p Breuil modules over `F_{p^f}[u]/u^{ep}`.

pub mod abelian;
pub mod cyclotomic;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod hom;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod monodromy;
pub mod params;
pub mod random;
pub mod ring;
pub mod simples;
pub mod tame;

pub use error::{Error, Result};
pub use field::{Field, FieldElem};
pub use hom::{hom, IsoResult, Morphism};
pub use matrix::{AMatrix, AVec};
pub use module::BreuilModule;
pub use params::GlobalParams;
pub use ring::{APoly, CoeffRing};

//! Finite monoids and their acts: ideals and generation degree, limits and
//! colimits of acts, quantifier-free types, the pullback independence
//! relation, injectivity and purity tests, and cellular constructions.

pub mod act;
pub mod catalog;
pub mod cover;
pub mod enumerate;
pub mod error;
pub mod hom;
pub mod independence;
pub mod injectivity;
pub mod io;
pub mod limits;
pub mod monoid;
pub mod par;
pub mod report;
pub mod sample;
pub mod saturation;
pub mod selftest;
pub mod types;

pub use act::Act;
pub use error::{Error, Result};
pub use hom::ActHom;
pub use monoid::{LeftIdeal, Monoid};

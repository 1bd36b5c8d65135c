//! Weak Riemannian geometry of spaces of metrics on symplectic surfaces.

pub mod amgeom;
pub mod assoc;
pub mod decomp;
pub mod fields;
pub mod matalg;
pub mod pointgeom;
pub mod quotient;
pub mod tensorcalc;

//! Construction and verification of Heisenberg-symmetric Calabi-Yau threefolds
//! over finite fields.

pub mod field;
pub mod linalg;
pub mod mpoly;
pub mod heisenberg;
pub mod families;
pub mod singular;
pub mod scan;
pub mod sample;
pub mod torsion;
pub mod verify;

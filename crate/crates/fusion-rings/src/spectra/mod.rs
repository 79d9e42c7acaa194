//! Spectral data of commutative fusion rings: character tables, S- and
//! T-matrices, and the modular relation.

pub mod character;
pub mod modular;
pub mod smatrix;
pub mod snf;
pub mod vafa;

pub use character::{character_table, verify_diagonalization, CharacterTable, DEFAULT_PRECISION};
pub use modular::{modular_data, ModularData, ModularDatum};
pub use smatrix::s_matrices;
pub use snf::{smith_normal_form, Snf};
pub use vafa::{vafa_candidates, VafaCandidates};

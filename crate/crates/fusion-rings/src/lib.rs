//! Fusion ring enumeration and analysis.

pub mod canon;
pub mod catalog;
pub mod criteria;
pub mod dims;
pub mod enumerate;
pub mod error;
pub mod precision;
pub mod ring;
pub mod song;
pub mod spectra;

pub use canon::{canonical_code, canonical_form, catalog_names, equivalent, format_name, Canonical, CanonicalCode};
pub use catalog::{read_catalog, write_catalog, RingRecord};
pub use criteria::{replay_zsc, schur_product, zero_spectrum, ObstructionWitness};
pub use dims::{fp_dimensions, FpDims};
pub use enumerate::{enumerate_rings, EnumOptions, Enumeration};
pub use error::{FusionError, Result};
pub use ring::{direct_product, pivotal_orbit, AxiomTag, FusionRing, ValidationReport, Violation};
pub use song::{
    group_ring, haagerup_izumi, make_group, near_group, song_extension,
    stabilizer_identity_check, two_particle_extensions, ExtensionReport, FiniteGroup, SongSpec,
};
pub use spectra::{
    character_table, modular_data, s_matrices, smith_normal_form, vafa_candidates,
    verify_diagonalization, CharacterTable, ModularData, ModularDatum, Snf, VafaCandidates,
};

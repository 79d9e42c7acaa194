//! Finite groups and the extensions of group rings they generate.

pub mod extension;
pub mod group;

pub use extension::{
    haagerup_izumi, near_group, one_particle_extensions, song_extension,
    stabilizer_identity_check, two_particle_extensions, ExtensionReport, SongSpec,
};
pub use group::{
    cyclic, dihedral, group_ring, make_group, product, quaternion, small_groups, FiniteGroup,
};

//! Lattices in Q^n, the lattice zeta sum and Berezin kernels.

pub mod berezin;
pub mod enumerate;
pub mod hnf;
pub mod zeta;

pub use berezin::{
    berezin_gram, berezin_kernel, berezin_psd_probe, berezin_witness_search, random_lattice, random_lattice_set,
    WitnessSearch,
};
pub use enumerate::{enumerate_lattices, sublattices, LatticeStream, DEFAULT_CAP};
pub use hnf::{hermite_normal_form, Flag, RationalLattice};
pub use zeta::{
    tamagawa_by_enumeration, tamagawa_partial, zeta_lhs_converged, zeta_lhs_partial, zeta_rhs, PartialSum, ZetaParams,
};

//! Classification and verification toolkit for pseudo H-type Lie algebras.
//!
//! A pseudo H-type Lie algebra `n_{r,s} = V ⊕ Z` is a 2-step nilpotent Lie
//! algebra whose bracket is induced by a Clifford module action of
//! `Cl(R^{r,s})` on an admissible module `V`.  Bases of `V` on which all
//! structure constants lie in `{-1, 0, 1}` arise from maximal groups of
//! positive involutions inside the finite monomial group generated by the
//! Clifford generators `z_1, ..., z_{r+s}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`cliff`] — arithmetic in the signed monomial group `G(B_{r,s})`,
//! * [`codes`] — admissible binary codes describing groups of positive
//!   involutions, their support partitions and minimal module dimensions,
//! * [`classify`] — canonical forms under signature-preserving coordinate
//!   permutations and the enumeration of equivalence classes of maximal
//!   admissible codes,
//! * [`repsn`] — minimal admissible modules induced from a maximal group,
//!   together with verification of the Clifford and admissibility relations,
//! * [`liealg`] — integral structure constants of the associated Lie
//!   algebra, isomorphism witnesses and non-isomorphism obstructions.

pub mod classify;
pub mod cliff;
pub mod codes;
pub mod liealg;
pub mod repsn;

pub use classify::{
    apply_perm, are_equivalent, canonical_form, canonical_form_with_perm, enumerate_maximal,
    match_paper_tables, paper_rows, standard_group, ClassRecord, ClassificationReport, ColPerm,
    MatchError,
};
pub use cliff::{
    commutes, involution_type, mul, positive_involution, span_group, square_sign, InvolutionType,
    Monomial, Signature, SignedGroup, Support,
};
pub use codes::{
    codeword_admissible, ell, is_admissible_code, min_module_dim, pi0, Code, CodeStats,
    SupportPartition,
};
pub use liealg::{
    build_isomorphism, duality_roundtrip, exceptional_frame, exceptional_frame_check,
    find_isomorphism, lattice_closure_check, obstruction_anticommuting, structure_constants,
    verify_frame, verify_isomorphism, verify_tensor, AlgebraError, CenterMap, ExceptionalCase,
    FrameError, HTypeAlgebra, IsoError, IsomorphismWitness,
};
pub use repsn::{
    build_module, build_module_from_gens, eigenspace_dims, verify_admissible, verify_clifford,
    AdmissibilityViolation, CliffordViolation, InducedModule, ModuleError,
};

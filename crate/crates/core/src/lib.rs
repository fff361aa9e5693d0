//! Covers of Hilbert squares of surfaces, computed on finite group-action
//! models.
//!
//! A Galois cover `Z → S` with deck group `G` is modelled by the free
//! `G`-set `G × B`, where `B` is a finite set of base labels. The modules
//! build the induced cover of the symmetric square, classify covers from a
//! presentation of `π₁`, and keep track of reflexive Hodge numbers.

pub mod catalog;
pub mod fpgroup;
pub mod groups;
pub mod hilbcover;
pub mod hodge;
pub mod monodromy;
pub mod permgroup;
pub mod smith;
pub mod verify;

pub use fpgroup::{AbelianInvariants, CosetTable, Presentation};
pub use hilbcover::{GSet, HilbConstruction, MultiplicationTable, SymQuotient};
pub use hodge::HodgeVector;
pub use monodromy::{CoverDescriptor, SurfaceDescriptor};
pub use permgroup::{Group, GroupError, Permutation};

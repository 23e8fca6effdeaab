//! Cloning systems, Thompson-like groups and the interval-map model of the
//! Higman–Thompson groups `F_d ⊂ T_d ⊂ V_d`.
//!
//! Elements are handled exactly: d-adic rationals use arbitrary precision
//! integers and every group operation is performed on tree-pair diagrams or
//! on piecewise maps between standard d-adic intervals.

pub mod cloning;
pub mod cocycle;
pub mod dadic;
pub mod error;
pub mod intmap;
pub mod perm;
pub mod tlgroup;
pub mod trees;

pub use cloning::{
    BaseGroup, CheckReport, CloningSystem, Cyclic, Integers, ProductEndoSystem, ProductVariant, Property, Sample,
    SymmetricSystem, SymmetricVariant, SystemProperties, TrivialSystem, Verdict, Witness,
};

pub use cocycle::{CanonicalTriplet, CocycleVector, CosetHandle};
pub use dadic::{Address, DAdic, StdInterval, StdPartition};
pub use error::{Error, Result};
pub use intmap::{Certificate, Fact, PLMap};
pub use perm::Permutation;
pub use tlgroup::{GroupElement, PairRecord, ThompsonGroup, TreePair};
pub use trees::DAryTree;

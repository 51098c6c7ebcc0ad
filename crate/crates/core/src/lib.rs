//! Castelnuovo-Mumford regularity of Hibi rings of finite distributive
//! lattices, computed combinatorially.
//!
//! A distributive lattice `L` is handled through its poset `P` of
//! join-irreducibles (`L` is the lattice of down-sets of `P`). The
//! regularity of the Hibi ring `R(L)` equals the degree of its h-vector,
//! which this crate obtains in several independent ways:
//!
//! * descent sets of linear extensions of `P` ([`hilbert::flag_beta`]),
//! * the f-vector of the order complex of `L` ([`hilbert::f_vector`]),
//! * for planar lattices, the maximal number of squares in a cyclic
//!   sublattice and the maximal descent count of a maximal chain under an
//!   explicit EL-labeling ([`planar`]).
//!
//! [`engine::regularity`] ties these together, splitting `L` along cut edges
//! first, and falls back to the antichain/size bounds when enumeration is
//! over budget.

pub mod census;
pub mod engine;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod hilbert;
pub mod lattice;
pub mod planar;
pub mod poset;
pub mod set;
pub mod sweep;

pub use engine::{has_linear_resolution, regularity, regularity_of_poset, Budget, LinearResolution, Method, Mode, RegularityReport};
pub use error::{Error, Result};
pub use hilbert::{FVector, FlagBeta, HVector};
pub use lattice::{Block, CutEdge, DistLattice};
pub use planar::{EdgeLabeling, MaximalChain, Planarity, PlanarEmbedding};
pub use poset::{descent_set, parse_poset, DescentSet, LinearExtension, NaturalLabeling, Poset};
pub use set::ElemSet;

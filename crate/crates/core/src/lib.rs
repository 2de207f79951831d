//! Exact lattice computations for singular two-dimensional moduli spaces of
//! twisted semistable sheaves on K3 surfaces: Mukai-lattice arithmetic,
//! wall/chamber enumeration, affine ADE classification of singular strata,
//! Weyl-group bookkeeping of exceptional curves, and generators for the
//! lattice families that realise every ADE type.

pub mod arith;
pub mod families;
pub mod lattice;
pub(crate) mod linalg;
pub mod mukai;
pub mod report;
pub mod roots;
pub mod schema;
pub mod singularity;
pub mod walls;

pub use arith::{Int, Rat};
pub use lattice::{LatticeError, LatticeVector, PicardLattice, Signature, Sublattice};
pub use mukai::{twisted_comparator, Decomposition, MukaiError, MukaiVector, TwistParameter};
pub use report::{pipeline_classify, PipelineError, PipelineOptions, Report};

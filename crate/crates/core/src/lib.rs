//! Statistical data depth.
//!
//! A depth function assigns every point `z` a centrality value in `[0, 1]` with respect
//! to a data cloud. This crate implements
//!
//! - metric depths: L2, affine invariant L2, Mahalanobis, projection and Oja depth
//!   ([`metric`]);
//! - weighted-mean depths and regions, including zonoid depth in any dimension ([`wm`]);
//! - halfspace (Tukey) and simplicial depth with exact bivariate algorithms
//!   ([`combinatorial`]);
//! - functional data depths built from a multivariate base depth ([`functional`]);
//! - central regions, depth lifts, the induced dispersion order and semi-metric
//!   ([`regions`], [`lift`]);
//! - a randomized checker for the defining postulates of a depth function
//!   ([`postulates`]).
//!
//! Every operation is a pure function of its inputs; randomized ones take an explicit
//! seed.

pub mod cloud;
pub mod combinatorial;
pub mod depth;
pub mod directions;
pub mod error;
pub mod functional;
pub mod geometry;
pub mod lift;
pub mod lp;
pub mod metric;
pub mod postulates;
pub mod registry;
pub mod regions;
pub mod scatter;
pub mod wm;

pub use cloud::{DataCloud, DepthValue};
pub use directions::DirectionBudget;
pub use error::{DepthError, Result};
pub use geometry::{ConvexRegion, Pt};
pub use registry::{DepthKind, DepthOptions};
pub use scatter::{MomentEstimator, Scatter, ScatterEstimator};

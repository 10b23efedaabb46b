//! Exact algorithms for divisorial fans of complexity-one torus actions and
//! colored fans of spherical varieties.

pub mod construction;
pub mod corpus;
pub mod divisorial;
pub mod downgrade;
pub mod error;
pub mod io;
pub mod lattice;
pub mod poly;
pub mod spherical;
pub mod weyl;

pub use divisorial::{
    equal_canonical, ChartLabel, DivisorLabel, DivisorialFan, PDivisor, RationalDivisor,
    SliceComplex,
};
pub use error::{Error, Report, Result, Violation, ViolationKind};
pub use lattice::{ExactScalar, LatticeMap, LatticeVector, SplitSequence};
pub use poly::{Cone, Fan, MinValue, Polyhedron};
pub use spherical::{Color, ColoredCone, ColoredFan, SphericalDatum};
pub use weyl::WeylGroup;

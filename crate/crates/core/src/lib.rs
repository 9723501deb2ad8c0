//! Coxeter decompositions of bounded hyperbolic tetrahedra, pyramids and
//! triangular prisms: enumeration, canonical records and independent
//! geometric verification.

pub mod angle;
pub mod catalog;
pub mod engine;
pub mod kernel;
pub mod links;
pub mod model;
pub mod oracle;

pub use angle::{AngleError, AngleFraction, MergeResult};
pub use catalog::{CatalogFile, Selection};
pub use engine::{CatalogEntry, EngineError, SearchConfig};
pub use kernel::tetra::CoxeterTetrahedron;
pub use model::{Decoration, ShapeKind};

/// Points and plane normals in `R^{3,1}`.
pub type Vector = kernel::Vector<f64>;
pub type Isometry = kernel::Isometry<f64>;
pub type Realization = kernel::Realization<f64>;
pub type FundamentalCell = kernel::cell::FundamentalCell<f64>;
pub type Hull = kernel::hull::Hull<f64>;

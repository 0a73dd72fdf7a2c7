//! Construction of translation surfaces with prescribed affine symmetries
//! from orbits of marked pairs on a canonical cone surface.

pub mod body;
pub mod builder;
pub mod cone;
pub mod direction;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod pipeline;
pub mod predicates;
pub mod render;
pub mod scalar;
pub mod simulation;
pub mod triple;
pub mod verify;

pub use builder::TranslationSurface;
pub use cone::{enumerate_trans, CanonicalMap, ConePoint, MarkedPair, StratumSig, TransElem};
pub use error::{ConfigError, FormatError, GeomError, ScalarError};
pub use linalg::{arg_cmp, Mat2, Vec2};
pub use pipeline::{run, RunConfig, RunError, RunOutput, RunReport, SurfaceRecord};
pub use scalar::Scalar;
pub use simulation::CosetPolicy;
pub use verify::{GeneratorStatus, VerificationReport};

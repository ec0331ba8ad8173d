pub mod algebra;
pub mod error;
pub mod report;

pub use error::{Error, Result};
pub use report::{Check, Report, Verdict};
pub mod ambient;
pub mod factcat;
pub mod frobenius;
pub mod homotopy;
pub mod parallel;
pub mod random;
pub mod triangles;

pub use ambient::{named_backend, named_backends, Backend, BackendKind, InverseData, ObjectHandle};

pub mod bessel;
pub mod bilinear;
pub mod curve;
pub mod eigen;
pub mod error;
pub mod fields;
pub mod lab;
pub mod nodal;
pub mod quadrature;
pub mod spectral;
pub mod trace_ops;

pub use curve::{build_curve, BoundaryCurve, CurveSpec, GeometricFactor, TraceData};
pub use error::{Error, Result};

//! drillgauge: computable certificates for hyperbolic Dehn filling.
//!
//! Effective-rigidity bounds turn cusp-torus geometry into a priori control
//! over cone-manifold deformations: how fast the core geodesic grows, how
//! much volume a filling loses, which surgery slopes provably yield
//! hyperbolic manifolds. This crate makes those bounds executable:
//!
//! * [`flat_torus`] — unit-area cusp shapes, slopes, normalized/extremal
//!   lengths, and complete short-slope enumeration;
//! * [`tube`] — tube-boundary scalars (meridian, area, curvature) and
//!   pluggable certified tube-radius floors;
//! * [`harmonic_bounds`] — the deformation error interval, boundary-term
//!   bounds, the L2 estimate, and an exact maximizer for signature
//!   `(+,-,-)` boundary forms over their admissible ellipses;
//! * [`family_ode`] — certified envelope integration of cone-angle
//!   families (closed-form power-law steps, Schlaefli volume enclosures,
//!   validity-cap monitoring, drilling certificates);
//! * [`slope_census`] — slope-exclusion counts, moduli-space maxima for
//!   the published constants 60 and 114, threshold certificates, and
//!   surgery-space region descriptors;
//! * [`cli`] — the `drillgauge` command-line tool wrapping all of it.
//!
//! # Example
//!
//! ```
//! use drillgauge::{CuspShape, Slope, certify_fill, CertifyConfig, Verdict};
//!
//! // a cusp torus on which the user slope (1, 0) has normalized length 8
//! let shape = CuspShape::from_modulus(0.0, 1.0 / 64.0).unwrap();
//! let cert = certify_fill(
//!     &shape,
//!     "example",
//!     Slope::new(1, 0).unwrap(),
//!     &CertifyConfig::default(),
//! );
//! assert_eq!(cert.verdict, Verdict::CertifiedHyperbolic);
//! ```
//!
//! Runnable demonstrations of each capability live in `examples/`.

pub mod cli;
pub mod constants;
pub mod error;
pub mod family_ode;
pub mod flat_torus;
pub mod harmonic_bounds;
pub mod slope_census;
pub mod tube;

pub use error::{Error, Result};
pub use family_ode::{
    drilling_certificate, init_family, integrate_to, model_complex_length, step, ComplexLength,
    ConeFamilyState, FamilyStatus, FamilyTrace, ModelComplexLength, Termination,
};
pub use flat_torus::{CuspShape, ShapeRecord, Slope, WeightedClass};
pub use harmonic_bounds::{
    b00_upper, bmm, error_interval, l2_upper, slice_max, BoundaryForm, ErrorInterval,
    L2BoundReport, SliceMax,
};
pub use slope_census::{
    certify_class, certify_fill, count_excluded, hds_region, max_excluded_over_moduli, Certificate,
    CertifyConfig, HdsRegion, ModuliSearchResult, SearchConfig, Subject, Verdict,
};
pub use tube::{principal_curvature, tube_boundary, RadiusFloor, TubeBoundary};

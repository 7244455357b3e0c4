//! The versioned table of certified threshold constants.
//!
//! Every threshold a certificate can cite lives here, under a single version
//! string, so that certificates are auditable: a verdict names the constants
//! it compared against, and the constants come from exactly one place.
//!
//! All threshold comparisons are inclusive at the stated values
//! (`>=` for lower thresholds, `<=` for upper ones).

/// Version tag recorded in every emitted certificate.
pub const CONSTANTS_VERSION: &str = "HK-exposition";

/// A closed manifold whose shortest geodesic is at most this long can be
/// deformed down to the complete structure on the geodesic complement.
pub const DRILL_LENGTH_MAX: f64 = 0.162;

/// Maximum volume lost when drilling a geodesic of length at most
/// [`DRILL_LENGTH_MAX`].
pub const DRILL_VOLUME_LOSS: f64 = 0.329;

/// Smallest volume of an orientable one-cusped hyperbolic 3-manifold.
pub const MIN_CUSPED_VOLUME: f64 = 2.0299;

/// Tube-radius floor maintained along cone-angle families while the
/// angle-length product stays below [`TUBE_PRODUCT_CAP`].
pub const TUBE_RADIUS_FLOOR: f64 = 0.531;

/// Validity cap on the cone-angle x core-length product for the constant
/// radius floor.
pub const TUBE_PRODUCT_CAP: f64 = 1.019;

/// Normalized-length threshold certifying a hyperbolic Dehn filling on a
/// one-cusped manifold.
pub const FILL_THRESHOLD_SINGLE: f64 = 7.515;

/// Per-cusp normalized-length threshold in the multi-cusp setting
/// (FILL_THRESHOLD_SINGLE * sqrt(2), rounded as published).
pub const FILL_THRESHOLD_MULTI: f64 = 10.627;

/// Normalized-length radius of the excluded ellipse: weighted classes
/// outside it lie in hyperbolic Dehn surgery space.
pub const HDS_THRESHOLD: f64 = 7.583;

/// Volume-change bound attached to fillings with normalized length at
/// least [`HDS_THRESHOLD`].
pub const HDS_VOLUME_BOUND: f64 = 0.306;

/// Upper bound on the number of slopes of normalized length below
/// [`FILL_THRESHOLD_SINGLE`] on any unit-area cusp torus.
pub const MAX_EXCLUDED_SINGLE: usize = 60;

/// Upper bound on the per-cusp exclusion count at the multi-cusp
/// threshold [`FILL_THRESHOLD_MULTI`].
pub const MAX_EXCLUDED_MULTI: usize = 114;

/// arctanh(1/sqrt(3)): the tube-radius gate above which the core-length
/// derivative stays positive and cone angles beyond 2*pi remain controlled.
pub const HIGH_ANGLE_RADIUS_GATE: f64 = 0.658_478_948_462_408_3;

/// Maximum slope-exclusion count certified at a given enumeration bound,
/// if the bound is one of the two published thresholds.
///
/// A moduli-space search that reports more than this is an internal
/// discrepancy: the tool surfaces it (CLI exit code 4) rather than
/// accepting the result silently.
pub fn exclusion_cap(bound: f64) -> Option<usize> {
    if bound == FILL_THRESHOLD_SINGLE {
        Some(MAX_EXCLUDED_SINGLE)
    } else if bound == FILL_THRESHOLD_MULTI {
        Some(MAX_EXCLUDED_MULTI)
    } else {
        None
    }
}

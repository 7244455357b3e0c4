//! Crate-wide error type.
//!
//! Every fallible operation in the library returns [`Result`]. Variants are
//! split roughly into input/parse problems ([`Error::BadConfig`]), domain
//! violations (non-positive geometry, degenerate lattices, zero classes), and
//! certified-hypothesis failures ([`Error::HypothesisViolated`]), which the
//! CLI maps onto distinct exit codes.

/// Errors produced by the geometry, bound-evaluation, and integration layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The supplied basis vectors do not span a 2-dimensional lattice.
    #[error("degenerate lattice: basis determinant {det:e} has magnitude below 1e-12")]
    DegenerateLattice { det: f64 },

    /// A length or membership query was made for the zero homology class.
    #[error("zero homology class has no length")]
    ZeroClass,

    /// Slopes must be primitive; ({p}, {q}) has a common factor.
    #[error("slope ({p}, {q}) is not primitive")]
    NonPrimitiveSlope { p: i64, q: i64 },

    /// A quantity that must be strictly positive was not.
    #[error("{name} must be positive and finite, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    /// Tube radius must be strictly positive.
    #[error("tube radius must be positive, got {value}")]
    NonPositiveRadius { value: f64 },

    /// An infinite tube radius (cusp) supports curvature queries only.
    #[error("infinite tube radius (cusp): meridian and area are undefined")]
    InfiniteRadius,

    /// The cone-angle–core-length product left the range on which the
    /// radius floor is asserted; no tube radius is certified.
    #[error(
        "hypothesis violated: cone-angle x length product {product} exceeds validity cap {cap}"
    )]
    HypothesisViolated { product: f64, cap: f64 },

    /// A boundary form failed the (+,-,-) signature requirement.
    #[error("quadratic form does not have signature (+,-,-): eigenvalues {eigenvalues:?}")]
    BadSignature { eigenvalues: [f64; 3] },

    /// The direction handed to the slice maximizer must lie on the
    /// angle-changing axis.
    #[error("direction vector must lie on the angle axis (only the first coordinate nonzero)")]
    OffAxis,

    /// Malformed configuration, search parameters, or input records.
    #[error("bad configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate malformed input rather than a
    /// domain/hypothesis failure. The CLI reports these with exit code 2.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::BadConfig(_))
    }
}

//! Slope-exclusion counting and certificate emission.
//!
//! The exclusion count of a cusp shape at bound `B` is the number of
//! canonical primitive slopes of normalized length strictly below `B`:
//! the slopes a length-threshold theorem cannot certify. The moduli-space
//! search maximizes that count over the fundamental domain
//! `{|x| <= 1/2, x^2 + y^2 >= 1, y <= y_cap}` to confirm the published
//! worst-case constants (60 at the single-cusp threshold 7.515, 114 per
//! cusp at the multi-cusp threshold 10.627). A search result exceeding a
//! published constant is a discrepancy and is surfaced, never suppressed.
//!
//! Certificates are plain values: pure functions of their inputs and the
//! versioned constants table, so re-running reproduces them bit for bit.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{self, CONSTANTS_VERSION};
use crate::error::{Error, Result};
use crate::family_ode::{self, FamilyStatus, IntegrateOptions};
use crate::flat_torus::{CuspShape, Slope, WeightedClass};
use crate::tube::RadiusFloor;

/// What a certificate asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The filled manifold carries a complete hyperbolic structure.
    CertifiedHyperbolic,
    /// The weighted class lies in hyperbolic Dehn surgery space.
    InHdsRegion,
    /// A short geodesic can be drilled to reach the cusped structure.
    Drillable,
    /// No theorem in the table applies; never a negative assertion.
    Inconclusive,
}

/// What a certificate is about.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Slope { shape: String, slope: (i64, i64) },
    Class { shape: String, class: (f64, f64) },
    Geodesic { length: f64 },
}

/// A machine-readable verdict with the numbers that justify it.
///
/// `numbers` holds computed values, `thresholds` the constants compared
/// against, `enclosures` certified interval endpoints. A verdict other
/// than `Inconclusive` implies the recorded comparison actually holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub subject: Subject,
    pub numbers: BTreeMap<String, f64>,
    pub thresholds: BTreeMap<String, f64>,
    pub enclosures: BTreeMap<String, f64>,
    pub provenance: Vec<String>,
    pub paper_constants_version: String,
}

impl Certificate {
    pub fn new(subject: Subject, constants_version: &str) -> Self {
        Certificate {
            verdict: Verdict::Inconclusive,
            subject,
            numbers: BTreeMap::new(),
            thresholds: BTreeMap::new(),
            enclosures: BTreeMap::new(),
            provenance: Vec::new(),
            paper_constants_version: constants_version.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }
}

/// Number of canonical primitive slopes with normalized length strictly
/// below `bound`.
pub fn count_excluded(shape: &CuspShape, bound: f64) -> usize {
    shape.count_short_slopes(bound)
}

/// Grid-search configuration for [`max_excluded_over_moduli`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchConfig {
    /// Base grid resolution across `x in [-1/2, 1/2]`.
    pub nx: usize,
    /// Base grid resolution from the domain floor up to `y_cap`.
    pub ny: usize,
    /// Height cap; defaults to `bound^2`, above which at most the single
    /// shortest slope fits under the bound.
    pub y_cap: Option<f64>,
    /// Local refinement rounds around the incumbent maximum.
    pub refine_rounds: usize,
    /// Resolution of each refinement window.
    pub refine_n: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            nx: 101,
            ny: 100,
            y_cap: None,
            refine_rounds: 2,
            refine_n: 21,
        }
    }
}

/// Outcome of a moduli-space exclusion-count maximization.
#[derive(Clone, Debug, Serialize)]
pub struct ModuliSearchResult {
    pub max_count: usize,
    /// Reduced modulus achieving the maximum (lexicographically smallest
    /// among ties).
    pub argmax_modulus: (f64, f64),
    pub samples_evaluated: usize,
    pub refinement_depth: usize,
}

/// Maximize the exclusion count over the fundamental domain.
pub fn max_excluded_over_moduli(bound: f64, config: &SearchConfig) -> Result<ModuliSearchResult> {
    max_excluded_over_moduli_with(bound, config, |_, _| {})
}

/// Like [`max_excluded_over_moduli`], invoking `observer` once per sampled
/// lattice with the shape and the count the search used for it. This is the
/// hook on which the counts are audited against an independent oracle.
pub fn max_excluded_over_moduli_with<F>(
    bound: f64,
    config: &SearchConfig,
    mut observer: F,
) -> Result<ModuliSearchResult>
where
    F: FnMut(&CuspShape, usize),
{
    if !(bound > 0.0) || !bound.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "enumeration bound",
            value: bound,
        });
    }
    if config.nx < 2 || config.ny < 2 || config.refine_n < 2 {
        return Err(Error::BadConfig(
            "grid resolution must be at least 2 in each direction".into(),
        ));
    }
    // for y >= max(bound^2, 1/bound^2) nothing but the slope (1, 0) fits
    // under the bound, so the count is identically 1 beyond that height;
    // a cap below it could clip the true maximum
    let sound_cap = (bound * bound).max(1.0 / (bound * bound)).max(2.0);
    let y_cap = config.y_cap.unwrap_or(sound_cap);
    if y_cap < sound_cap {
        return Err(Error::BadConfig(format!(
            "y_cap {y_cap} is below the sound height cap {sound_cap} for bound {bound}"
        )));
    }

    // best = (count, modulus); ties keep the lexicographically smaller modulus
    let better = |a: (usize, (f64, f64)), b: (usize, (f64, f64))| match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if (a.1 .0, a.1 .1) <= (b.1 .0, b.1 .1) {
                a
            } else {
                b
            }
        }
    };

    let mut evaluated: usize = 0;
    let mut best: (usize, (f64, f64)) = (0, (f64::INFINITY, f64::INFINITY));

    // each round produces its sample points; cells are independent, so the
    // counting runs in parallel and reduces deterministically
    let run_round = |points: Vec<(f64, f64)>,
                     observer: &mut F,
                     evaluated: &mut usize,
                     best: &mut (usize, (f64, f64))|
     -> Result<()> {
        let counted: Vec<(CuspShape, usize)> = points
            .par_iter()
            .map(|&(x, y)| {
                let shape = CuspShape::from_modulus(x, y)?;
                let count = count_excluded(&shape, bound);
                Ok((shape, count))
            })
            .collect::<Result<_>>()?;
        for (shape, count) in counted {
            observer(&shape, count);
            *evaluated += 1;
            *best = better(*best, (count, shape.modulus()));
        }
        Ok(())
    };

    // base round: uniform in x, uniform in y from the domain floor per column
    let mut base_points = Vec::with_capacity(config.nx * config.ny);
    let mut spacing = (0.0, 0.0);
    for i in 0..config.nx {
        let x = -0.5 + i as f64 / (config.nx - 1) as f64;
        let y_min = (1.0 - x * x).sqrt().max(1e-6);
        let dy = (y_cap - y_min) / (config.ny - 1) as f64;
        spacing = (1.0 / (config.nx - 1) as f64, dy);
        for j in 0..config.ny {
            base_points.push((x, y_min + j as f64 * dy));
        }
    }
    run_round(base_points, &mut observer, &mut evaluated, &mut best)?;

    // explicit guard at the cap: the count on the cap row must not exceed
    // the incumbent maximum (it is 1 there by the cap rule above)
    for i in 0..config.nx {
        let x = -0.5 + i as f64 / (config.nx - 1) as f64;
        let at_cap = count_excluded(&CuspShape::from_modulus(x, y_cap)?, bound);
        if at_cap > best.0 {
            return Err(Error::BadConfig(format!(
                "count {at_cap} at the height cap exceeds the searched maximum {}; \
                 the cap clipped the search",
                best.0
            )));
        }
    }

    // local refinement: shrink a window around the incumbent
    let mut depth = 0;
    let mut window = (1.5 * spacing.0, 1.5 * spacing.1);
    for _ in 0..config.refine_rounds {
        let (cx, cy) = best.1;
        let mut points = Vec::with_capacity(config.refine_n * config.refine_n);
        for i in 0..config.refine_n {
            let x = (cx - window.0 + 2.0 * window.0 * i as f64 / (config.refine_n - 1) as f64)
                .clamp(-0.5, 0.5);
            let y_min = (1.0 - x * x).sqrt().max(1e-6);
            for j in 0..config.refine_n {
                let y = (cy - window.1 + 2.0 * window.1 * j as f64 / (config.refine_n - 1) as f64)
                    .clamp(y_min, y_cap);
                points.push((x, y));
            }
        }
        run_round(points, &mut observer, &mut evaluated, &mut best)?;
        depth += 1;
        window = (
            3.0 * window.0 / (config.refine_n - 1) as f64,
            3.0 * window.1 / (config.refine_n - 1) as f64,
        );
    }

    Ok(ModuliSearchResult {
        max_count: best.0,
        argmax_modulus: best.1,
        samples_evaluated: evaluated,
        refinement_depth: depth,
    })
}

/// Options for [`certify_fill`] and [`certify_class`].
#[derive(Clone, Debug)]
pub struct CertifyConfig {
    /// Use the per-cusp multi-cusp threshold 10.627 instead of 7.515.
    pub multi_cusp: bool,
    /// Attach a cone-family integration (volume enclosure) to positive
    /// verdicts.
    pub integrate: bool,
    pub floor: RadiusFloor,
    pub alpha_start: f64,
    pub d_alpha_max: f64,
    pub rel_slack: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            multi_cusp: false,
            integrate: false,
            floor: RadiusFloor::default_constant(),
            alpha_start: 1e-4,
            d_alpha_max: 0.05,
            rel_slack: 0.0,
        }
    }
}

fn attach_volume_bounds(cert: &mut Certificate, l_hat: f64, config: &CertifyConfig) {
    if l_hat >= constants::HDS_THRESHOLD {
        cert.thresholds
            .insert("hds_normalized_length_min".into(), constants::HDS_THRESHOLD);
        cert.enclosures
            .insert("volume_change_max".into(), constants::HDS_VOLUME_BOUND);
        cert.provenance.push("hds-volume-bound".into());
    }
    if config.integrate {
        if let Ok(state) = family_ode::init_family(l_hat, config.alpha_start, config.rel_slack) {
            if let Ok(trace) = family_ode::integrate_to_with(
                &state,
                std::f64::consts::TAU,
                config.d_alpha_max,
                &config.floor,
                IntegrateOptions::default(),
            ) {
                let f = trace.final_state();
                cert.numbers.insert("alpha_reached".into(), f.alpha);
                if f.status == FamilyStatus::Ok {
                    cert.enclosures.insert("dv_lo".into(), f.dv_lo);
                    cert.enclosures.insert("dv_hi".into(), f.dv_hi);
                }
                cert.provenance.push("cone-family-integration".into());
            }
        }
    }
}

/// Certify a Dehn filling along an integer slope by its normalized length.
///
/// Threshold 7.515 on a single cusp (inclusive), 10.627 per cusp in
/// multi-cusp mode. The comparison is one-directional: shorter slopes are
/// `Inconclusive`, never "not hyperbolic".
pub fn certify_fill(
    shape: &CuspShape,
    shape_id: &str,
    slope: Slope,
    config: &CertifyConfig,
) -> Certificate {
    let l_hat = shape.slope_length(slope);
    let threshold = if config.multi_cusp {
        constants::FILL_THRESHOLD_MULTI
    } else {
        constants::FILL_THRESHOLD_SINGLE
    };
    let mut cert = Certificate::new(
        Subject::Slope {
            shape: shape_id.to_string(),
            slope: (slope.p(), slope.q()),
        },
        CONSTANTS_VERSION,
    );
    cert.numbers.insert("normalized_length".into(), l_hat);
    cert.numbers.insert("extremal_length".into(), l_hat * l_hat);
    cert.thresholds
        .insert("normalized_length_min".into(), threshold);

    if l_hat >= threshold {
        cert.verdict = Verdict::CertifiedHyperbolic;
        cert.provenance.push(if config.multi_cusp {
            "filling-threshold-multi-cusp".into()
        } else {
            "filling-threshold".into()
        });
        attach_volume_bounds(&mut cert, l_hat, config);
    } else {
        cert.verdict = Verdict::Inconclusive;
        cert.provenance.push("below-filling-threshold".into());
    }
    cert
}

/// Certify that a weighted class lies in hyperbolic Dehn surgery space:
/// normalized length at least 7.583 (inclusive).
pub fn certify_class(
    shape: &CuspShape,
    shape_id: &str,
    class: WeightedClass,
    config: &CertifyConfig,
) -> Result<Certificate> {
    let l_hat = shape.normalized_length(class)?;
    let mut cert = Certificate::new(
        Subject::Class {
            shape: shape_id.to_string(),
            class: (class.x, class.y),
        },
        CONSTANTS_VERSION,
    );
    cert.numbers.insert("normalized_length".into(), l_hat);
    cert.thresholds
        .insert("normalized_length_min".into(), constants::HDS_THRESHOLD);

    if l_hat >= constants::HDS_THRESHOLD {
        cert.verdict = Verdict::InHdsRegion;
        cert.provenance.push("hds-region-threshold".into());
        attach_volume_bounds(&mut cert, l_hat, config);
    } else {
        cert.verdict = Verdict::Inconclusive;
        cert.provenance.push("inside-excluded-ellipse".into());
    }
    Ok(cert)
}

/// The excluded ellipse of a shape in user homology coordinates.
///
/// `matrix` is the quadratic form whose open unit sublevel set is the
/// excluded region: a class is outside the ellipse exactly when its
/// normalized length is at least `threshold`.
#[derive(Clone, Debug, Serialize)]
pub struct HdsRegion {
    pub matrix: [[f64; 2]; 2],
    pub threshold: f64,
    #[serde(skip)]
    shape: CuspShape,
    #[serde(skip)]
    pub semi_major: f64,
    #[serde(skip)]
    pub semi_minor: f64,
}

impl HdsRegion {
    /// Membership in the certified region (outside the ellipse), decided by
    /// the defining length comparison.
    pub fn contains(&self, class: WeightedClass) -> Result<bool> {
        Ok(self.shape.normalized_length(class)? >= self.threshold)
    }

    /// The exported descriptor `{"matrix": [[a,b],[b,c]], "threshold": r}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("region serializes")
    }
}

/// Region descriptor for the complement of the excluded ellipse at the
/// given normalized-length threshold (default 7.583).
pub fn hds_region(shape: &CuspShape, threshold: f64) -> Result<HdsRegion> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "threshold",
            value: threshold,
        });
    }
    let g = shape.user_gram();
    let t2 = threshold * threshold;
    let matrix = [[g[0][0] / t2, g[0][1] / t2], [g[1][0] / t2, g[1][1] / t2]];
    // closed-form symmetric 2x2 eigenvalues; semi-axes are 1/sqrt(lambda)
    let tr = matrix[0][0] + matrix[1][1];
    let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let (lam_min, lam_max) = (tr / 2.0 - disc, tr / 2.0 + disc);
    Ok(HdsRegion {
        matrix,
        threshold,
        shape: shape.clone(),
        semi_major: 1.0 / lam_min.sqrt(),
        semi_minor: 1.0 / lam_max.sqrt(),
    })
}

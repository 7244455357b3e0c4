//! Certified integration of cone-angle families.
//!
//! Along a family of cone-manifold structures the core length obeys
//! `dl/dalpha = (l/alpha)(1 + E)` with `E` trapped in the tube-radius
//! interval of [`error_interval`]. For constant `E = e` the equation solves
//! in closed form, `l(a) = l(alpha) * (a/alpha)^(1+e)`, so the extremal
//! constant fields give exact per-step envelopes: no Runge-Kutta, no
//! truncation error, just power laws plus a configurable outward slack
//! (default 1e-12 per step) to absorb floating-point rounding.
//!
//! Volume change rides along for free: `dV/dalpha = -l/2`, and the
//! power-law envelopes of `l` integrate exactly.
//!
//! The integrator monitors the product `alpha * l_hi` against the radius
//! floor's validity cap; a crossing degrades the state to
//! `HypothesisViolated`, localized by bisection to well within 1e-6 in
//! `alpha`. Cone angles beyond `2*pi` are refused unless the certified
//! radius has stayed at least `arctanh(1/sqrt(3))` along the whole trace.

use serde::Serialize;

use crate::constants::{self, HIGH_ANGLE_RADIUS_GATE};
use crate::error::{Error, Result};
use crate::harmonic_bounds::error_interval;
use crate::slope_census::{Certificate, Subject, Verdict};
use crate::tube::RadiusFloor;

const TWO_PI: f64 = std::f64::consts::TAU;

/// Default multiplicative outward slack applied per step.
pub const DEFAULT_OUTWARD_SLACK: f64 = 1e-12;

/// Bisection width for localizing a validity-cap crossing, in alpha.
const VIOLATION_LOCALIZATION: f64 = 1e-9;

/// Step size below which the integrator declares lack of progress.
const STEP_UNDERFLOW: f64 = 1e-12;

/// Certification status of a family state. Statuses only degrade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyStatus {
    /// Enclosures are certified under the floor's hypotheses.
    Ok,
    /// The angle-length product left the floor's validity range.
    HypothesisViolated,
    /// No certified radius floor applies (stall, or continuation past
    /// 2*pi without the required radius gate).
    RadiusUncertified,
}

impl std::fmt::Display for FamilyStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FamilyStatus::Ok => "ok",
            FamilyStatus::HypothesisViolated => "hypothesis_violated",
            FamilyStatus::RadiusUncertified => "radius_uncertified",
        };
        f.write_str(s)
    }
}

/// One certified point of a cone-angle family: the angle, enclosures for
/// core length and accumulated volume decrease, and the tube-radius floor
/// in force.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConeFamilyState {
    pub alpha: f64,
    pub ell_lo: f64,
    pub ell_hi: f64,
    /// Enclosure of `V(alpha_start) - V(alpha)`.
    pub dv_lo: f64,
    pub dv_hi: f64,
    /// Certified tube-radius floor used for the last step
    /// (infinite before any step: the family starts at the cusp side).
    pub radius: f64,
    pub status: FamilyStatus,
}

impl ConeFamilyState {
    /// Angle-length product tracked against the floor's validity cap.
    pub fn product(&self) -> f64 {
        self.alpha * self.ell_hi
    }

    pub fn ell_mid(&self) -> f64 {
        0.5 * (self.ell_lo + self.ell_hi)
    }
}

/// Initial state at `alpha_start` from the normalized length of the filling
/// slope: the extremal length `l_hat^2` is the limiting ratio
/// `alpha / l` at the cusp, so `l ~ alpha_start / l_hat^2`, widened by the
/// caller's relative slack.
pub fn init_family(l_hat: f64, alpha_start: f64, rel_slack: f64) -> Result<ConeFamilyState> {
    for (name, v) in [("normalized length", l_hat), ("alpha_start", alpha_start)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveInput { name, value: v });
        }
    }
    if !(rel_slack >= 0.0) || !rel_slack.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "relative slack",
            value: rel_slack,
        });
    }
    let ell = alpha_start / (l_hat * l_hat);
    Ok(ConeFamilyState {
        alpha: alpha_start,
        ell_lo: ell * (1.0 - rel_slack),
        ell_hi: ell * (1.0 + rel_slack),
        dv_lo: 0.0,
        dv_hi: 0.0,
        radius: f64::INFINITY,
        status: FamilyStatus::Ok,
    })
}

/// One extremal power-law leg: propagate `value * (s/alpha)^growth_exponent`
/// from `alpha` to `alpha_next`, and integrate `value(s)/2` along the way
/// (the volume increment of Schlaefli's formula, signed with the direction).
///
/// With `growth_exponent = 0` the value is frozen and the integral is
/// exactly `value * (alpha_next - alpha) / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawStep {
    pub value_end: f64,
    pub volume_integral: f64,
}

pub fn power_law_envelope(
    value: f64,
    alpha: f64,
    alpha_next: f64,
    growth_exponent: f64,
) -> PowerLawStep {
    let rho = alpha_next / alpha;
    let value_end = value * rho.powf(growth_exponent);
    let p = growth_exponent + 1.0;
    let ln_rho = rho.ln();
    let volume_integral = if p.abs() < 1e-12 {
        0.5 * value * alpha * ln_rho
    } else {
        0.5 * value * alpha * (p * ln_rho).exp_m1() / p
    };
    PowerLawStep {
        value_end,
        volume_integral,
    }
}

/// Advance a state by `d_alpha` under the given radius floor, with the
/// default outward slack.
pub fn step(state: &ConeFamilyState, d_alpha: f64, floor: &RadiusFloor) -> Result<ConeFamilyState> {
    step_with_slack(state, d_alpha, floor, DEFAULT_OUTWARD_SLACK)
}

/// Advance a state by `d_alpha` with an explicit per-step outward slack.
///
/// The enclosure is propagated by the extremal power laws
/// `l_hi' = l_hi * rho^(1+e_hi)`, `l_lo' = l_lo * rho^(1+e_lo)` for
/// increasing steps (exponents swap when decreasing), where `(e_lo, e_hi)`
/// is the error interval at the certified radius floor. The floor is
/// evaluated at the worst angle-length product attained during the step
/// (for tabulated floors this is a short monotone fixed-point iteration;
/// for constant floors it coincides with the product at the step start),
/// so the enclosure stays certified across the whole step.
///
/// A validity-cap crossing inside the step is not an error: the state is
/// advanced to the bisected crossing point and returned with status
/// `HypothesisViolated`.
pub fn step_with_slack(
    state: &ConeFamilyState,
    d_alpha: f64,
    floor: &RadiusFloor,
    outward_slack: f64,
) -> Result<ConeFamilyState> {
    if state.status != FamilyStatus::Ok {
        return Err(Error::BadConfig(
            "cannot step a state whose certification has degraded".into(),
        ));
    }
    if d_alpha == 0.0 || !d_alpha.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "step size",
            value: d_alpha,
        });
    }
    let alpha_next = state.alpha + d_alpha;
    if !(alpha_next > 0.0) {
        return Err(Error::NonPositiveInput {
            name: "cone angle after step",
            value: alpha_next,
        });
    }
    step_to(state, alpha_next, floor, outward_slack)
}

fn widen(lo: f64, hi: f64, slack: f64) -> (f64, f64) {
    (lo - slack * lo.abs(), hi + slack * hi.abs())
}

/// Certified radius for a step whose angle-length product moves from the
/// current value toward `product_end`; `None` while iterating means the
/// step crosses the validity cap.
fn certified_radius_for_step(
    state: &ConeFamilyState,
    alpha_next: f64,
    floor: &RadiusFloor,
) -> Result<f64> {
    let p_start = state.product();
    let mut radius = floor.floor_at(p_start)?;
    if alpha_next < state.alpha {
        // product decreases with alpha: the start value is the worst case
        return Ok(radius);
    }
    let rho = alpha_next / state.alpha;
    // monotone fixed point: smaller radius -> wider interval -> larger end
    // product -> smaller radius; converges in a few rounds
    for _ in 0..64 {
        let e = error_interval(radius)?;
        let p_end = alpha_next * state.ell_hi * rho.powf(1.0 + e.e_hi);
        let clamped = p_end.min(floor.validity_cap());
        let next = floor.floor_at(clamped)?;
        // the iterates only decrease; stop once they stabilize
        if next >= radius - 1e-12 {
            return Ok(next.min(radius));
        }
        radius = next;
    }
    Ok(radius)
}

fn step_to(
    state: &ConeFamilyState,
    alpha_next: f64,
    floor: &RadiusFloor,
    outward_slack: f64,
) -> Result<ConeFamilyState> {
    let radius = match certified_radius_for_step(state, alpha_next, floor) {
        Ok(r) => r,
        Err(Error::HypothesisViolated { .. }) => {
            // already out of range before moving
            let mut s = *state;
            s.status = FamilyStatus::HypothesisViolated;
            return Ok(s);
        }
        Err(e) => return Err(e),
    };
    let e = error_interval(radius)?;

    let increasing = alpha_next > state.alpha;
    let cap = floor.validity_cap();

    if increasing {
        // the upper envelope of the product is monotone; find any cap
        // crossing before committing to the full step
        let product_at = |a: f64| a * state.ell_hi * (a / state.alpha).powf(1.0 + e.e_hi);
        if product_at(alpha_next) > cap {
            let mut lo = state.alpha;
            let mut hi = alpha_next;
            while hi - lo > VIOLATION_LOCALIZATION {
                let mid = 0.5 * (lo + hi);
                if product_at(mid) > cap {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mut out = advance(state, hi, &e, radius, outward_slack);
            out.status = FamilyStatus::HypothesisViolated;
            return Ok(out);
        }
    }

    Ok(advance(state, alpha_next, &e, radius, outward_slack))
}

/// Pure envelope propagation to `alpha_next` under a fixed error interval.
fn advance(
    state: &ConeFamilyState,
    alpha_next: f64,
    e: &crate::harmonic_bounds::ErrorInterval,
    radius: f64,
    slack: f64,
) -> ConeFamilyState {
    let increasing = alpha_next > state.alpha;
    // envelope exponents swap direction with the step sign
    let (x_hi, x_lo) = if increasing {
        (1.0 + e.e_hi, 1.0 + e.e_lo)
    } else {
        (1.0 + e.e_lo, 1.0 + e.e_hi)
    };
    let hi = power_law_envelope(state.ell_hi, state.alpha, alpha_next, x_hi);
    let lo = power_law_envelope(state.ell_lo, state.alpha, alpha_next, x_lo);
    let (ell_lo, ell_hi) = widen(lo.value_end, hi.value_end, slack);
    // increasing: lower envelope integral bounds dv from below;
    // decreasing: both integrals are negative and the roles flip
    let (j_lo, j_hi) = if increasing {
        (lo.volume_integral, hi.volume_integral)
    } else {
        (hi.volume_integral, lo.volume_integral)
    };
    let (j_lo, j_hi) = widen(j_lo, j_hi, slack);
    ConeFamilyState {
        alpha: alpha_next,
        ell_lo,
        ell_hi,
        dv_lo: state.dv_lo + j_lo,
        dv_hi: state.dv_hi + j_hi,
        radius,
        status: FamilyStatus::Ok,
    }
}

/// Why an integration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTarget,
    HypothesisViolated,
    /// Continuation past 2*pi requires the radius gate arctanh(1/sqrt(3)).
    RefusedPastTwoPi,
    /// Step size underflowed below 1e-12 without reaching the target.
    Stalled,
}

/// Echo of the configuration an integration ran under.
#[derive(Clone, Debug, Serialize)]
pub struct TraceConfig {
    pub alpha_target: f64,
    pub d_alpha_max: f64,
    pub outward_slack: f64,
    pub floor: RadiusFloor,
}

/// The recorded steps of one cone-angle family integration.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyTrace {
    pub samples: Vec<ConeFamilyState>,
    pub config: TraceConfig,
    pub termination: Termination,
}

impl FamilyTrace {
    pub fn final_state(&self) -> &ConeFamilyState {
        self.samples
            .last()
            .expect("traces hold at least one sample")
    }

    /// Smallest certified radius floor over all completed steps.
    pub fn min_radius(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.radius)
            .fold(f64::INFINITY, f64::min)
    }

    /// CSV export: `alpha,ell_lo,ell_hi,dv_lo,dv_hi,radius,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,ell_lo,ell_hi,dv_lo,dv_hi,radius,status\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{}\n",
                s.alpha, s.ell_lo, s.ell_hi, s.dv_lo, s.dv_hi, s.radius, s.status
            ));
        }
        out
    }
}

/// Extra knobs for [`integrate_to_with`].
#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    /// Multiplicative outward widening applied per step.
    pub outward_slack: f64,
    /// Cap on the step size relative to the current angle; keeps the step
    /// count logarithmic near the singular point alpha = 0.
    pub max_step_ratio: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            outward_slack: DEFAULT_OUTWARD_SLACK,
            max_step_ratio: 0.125,
        }
    }
}

/// Integrate from `state` to `alpha_target` with steps of at most
/// `d_alpha_max`, recording every accepted step.
pub fn integrate_to(
    state: &ConeFamilyState,
    alpha_target: f64,
    d_alpha_max: f64,
    floor: &RadiusFloor,
) -> Result<FamilyTrace> {
    integrate_to_with(
        state,
        alpha_target,
        d_alpha_max,
        floor,
        IntegrateOptions::default(),
    )
}

pub fn integrate_to_with(
    state: &ConeFamilyState,
    alpha_target: f64,
    d_alpha_max: f64,
    floor: &RadiusFloor,
    options: IntegrateOptions,
) -> Result<FamilyTrace> {
    if !(alpha_target > 0.0) || !alpha_target.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "alpha_target",
            value: alpha_target,
        });
    }
    if !(d_alpha_max > 0.0) || !d_alpha_max.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "d_alpha_max",
            value: d_alpha_max,
        });
    }
    let config = TraceConfig {
        alpha_target,
        d_alpha_max,
        outward_slack: options.outward_slack,
        floor: floor.clone(),
    };
    let mut samples = vec![*state];
    if state.status != FamilyStatus::Ok {
        return Ok(FamilyTrace {
            samples,
            config,
            termination: Termination::HypothesisViolated,
        });
    }

    let dir = (alpha_target - state.alpha).signum();
    if dir == 0.0 || state.alpha == alpha_target {
        return Ok(FamilyTrace {
            samples,
            config,
            termination: Termination::ReachedTarget,
        });
    }

    let mut cur = *state;
    let mut min_radius = f64::INFINITY;
    let termination = loop {
        let remaining = (alpha_target - cur.alpha) * dir;
        if remaining <= 0.0 {
            break Termination::ReachedTarget;
        }
        let d_cap = d_alpha_max.min(options.max_step_ratio * cur.alpha);
        if d_cap < STEP_UNDERFLOW && d_cap < remaining {
            cur.status = FamilyStatus::RadiusUncertified;
            update_last(&mut samples, cur);
            break Termination::Stalled;
        }

        let mut next_alpha = if d_cap >= remaining {
            alpha_target
        } else {
            cur.alpha + dir * d_cap
        };
        // land exactly on 2*pi before attempting to continue beyond it
        if dir > 0.0 && next_alpha > TWO_PI && cur.alpha < TWO_PI - STEP_UNDERFLOW {
            next_alpha = TWO_PI;
        }
        // any step touching angles above 2*pi needs the radius gate, both
        // for the trace so far and for the radius this step would use
        if cur.alpha.max(next_alpha) > TWO_PI {
            if let Ok(r) = certified_radius_for_step(&cur, next_alpha, floor) {
                if min_radius.min(r) < HIGH_ANGLE_RADIUS_GATE {
                    cur.status = FamilyStatus::RadiusUncertified;
                    update_last(&mut samples, cur);
                    break Termination::RefusedPastTwoPi;
                }
            }
        }

        let next = step_to(&cur, next_alpha, floor, options.outward_slack)?;
        if next.alpha == cur.alpha {
            // degraded before moving: record on the current sample
            cur.status = next.status;
            update_last(&mut samples, cur);
            break Termination::HypothesisViolated;
        }
        min_radius = min_radius.min(next.radius);
        samples.push(next);
        cur = next;
        if cur.status != FamilyStatus::Ok {
            break Termination::HypothesisViolated;
        }
    };

    Ok(FamilyTrace {
        samples,
        config,
        termination,
    })
}

fn update_last(samples: &mut [ConeFamilyState], state: ConeFamilyState) {
    if let Some(last) = samples.last_mut() {
        *last = state;
    }
}

/// Final volume-change enclosure of a trace, with the asymptotic reference
/// value `pi^2 / l_hat^2` for comparison.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct VolumeChangeBounds {
    pub dv_lo: f64,
    pub dv_hi: f64,
    pub nz_reference: f64,
}

pub fn volume_change_bounds(trace: &FamilyTrace, l_hat: f64) -> VolumeChangeBounds {
    let f = trace.final_state();
    VolumeChangeBounds {
        dv_lo: f.dv_lo,
        dv_hi: f.dv_hi,
        nz_reference: std::f64::consts::PI.powi(2) / (l_hat * l_hat),
    }
}

/// Complex translation-rotation length of a peripheral element:
/// `re` is the real translation length, `im` the rotation angle mod 2*pi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexLength {
    pub re: f64,
    pub im: f64,
}

impl ComplexLength {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re > 0.0) || !re.is_finite() {
            return Err(Error::NonPositiveInput {
                name: "complex length real part",
                value: re,
            });
        }
        Ok(ComplexLength {
            re,
            im: im.rem_euclid(TWO_PI),
        })
    }
}

/// A model-equation prediction, marked as such: the `rigorous` flag is
/// always false, since the model carries no longitude or correction terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelComplexLength {
    pub complex_length: ComplexLength,
    pub rigorous: bool,
}

/// Exact solution of the model equation `dL/dalpha = L/alpha`: componentwise
/// scaling by `alpha / alpha0`.
///
/// The real part matches the certified enclosure midpoint in the zero-error
/// regime; the twist angle has no certified counterpart, so the result is
/// flagged non-rigorous.
pub fn model_complex_length(
    l0: ComplexLength,
    alpha0: f64,
    alpha: f64,
) -> Result<ModelComplexLength> {
    for (name, v) in [("alpha0", alpha0), ("alpha", alpha)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveInput { name, value: v });
        }
    }
    let scale = alpha / alpha0;
    Ok(ModelComplexLength {
        complex_length: ComplexLength::new(l0.re * scale, l0.im * scale)?,
        rigorous: false,
    })
}

/// Drilling certificate: a closed manifold whose shortest geodesic is at
/// most 0.162 deforms down to the complete structure on the geodesic
/// complement, losing at most 0.329 of volume. Combined with the smallest
/// one-cusped volume 2.0299 this gives the universal floor 1.7009; a
/// caller-supplied volume for the cusped manifold sharpens it.
///
/// The threshold is one-directional: longer geodesics yield `Inconclusive`,
/// never "not drillable".
pub fn drilling_certificate(
    shortest_geodesic: f64,
    cusped_volume_floor: Option<f64>,
) -> Result<Certificate> {
    if !(shortest_geodesic > 0.0) || !shortest_geodesic.is_finite() {
        return Err(Error::NonPositiveInput {
            name: "shortest geodesic length",
            value: shortest_geodesic,
        });
    }
    if let Some(v) = cusped_volume_floor {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveInput {
                name: "cusped volume floor",
                value: v,
            });
        }
    }

    let mut cert = Certificate::new(
        Subject::Geodesic {
            length: shortest_geodesic,
        },
        constants::CONSTANTS_VERSION,
    );
    cert.numbers
        .insert("geodesic_length".into(), shortest_geodesic);
    cert.thresholds
        .insert("geodesic_length_max".into(), constants::DRILL_LENGTH_MAX);

    if shortest_geodesic <= constants::DRILL_LENGTH_MAX {
        let universal = constants::MIN_CUSPED_VOLUME - constants::DRILL_VOLUME_LOSS;
        let mut best = universal;
        cert.thresholds.insert(
            "volume_comparison_loss".into(),
            constants::DRILL_VOLUME_LOSS,
        );
        cert.enclosures
            .insert("volume_lower_bound_universal".into(), universal);
        if let Some(v) = cusped_volume_floor {
            let relative = v - constants::DRILL_VOLUME_LOSS;
            cert.numbers.insert("cusped_volume_floor".into(), v);
            cert.enclosures
                .insert("volume_lower_bound_relative".into(), relative);
            best = best.max(relative);
        }
        cert.enclosures.insert("volume_lower_bound".into(), best);
        cert.verdict = Verdict::Drillable;
        cert.provenance = vec!["short-geodesic-drilling".into(), "volume-comparison".into()];
    } else {
        cert.verdict = Verdict::Inconclusive;
        cert.provenance = vec!["short-geodesic-drilling".into()];
    }
    Ok(cert)
}

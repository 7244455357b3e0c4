//! Geometry of the embedded tube around a (possibly singular) core geodesic.
//!
//! A tube of radius `R` around a core geodesic of length `l` with cone angle
//! `alpha` has a flat boundary torus whose scalars determine every bound
//! formula downstream:
//!
//! * meridian length `m = alpha * sinh(R)`,
//! * boundary area `alpha * l * sinh(R) * cosh(R)`,
//! * principal normal curvature `kappa = coth(R)` (the other curvature is
//!   `1/kappa`, so they determine each other).
//!
//! A cusp is the `R = infinity` limit: [`principal_curvature`] accepts it
//! (`kappa -> 1`), while meridian and area computations reject it.
//!
//! [`RadiusFloor`] is the pluggable packing input: a certified lower bound
//! `R_min(alpha * l)` valid while the angle-length product stays below a cap.
//! The built-in default is the constant floor 0.531 with cap 1.019; sharper
//! decreasing tables can be loaded from JSON.

use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Error, Result};

/// Scalar geometry of the boundary torus of an embedded tube.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TubeBoundary {
    pub radius: f64,
    pub cone_angle: f64,
    pub core_length: f64,
    /// Meridian length `alpha * sinh(R)`.
    pub meridian: f64,
    /// Boundary area `alpha * l * sinh(R) * cosh(R)`.
    pub area: f64,
    /// Principal normal curvature `coth(R)`.
    pub kappa: f64,
}

/// Populate all tube-boundary scalars for a finite-radius tube.
pub fn tube_boundary(cone_angle: f64, core_length: f64, radius: f64) -> Result<TubeBoundary> {
    check_positive("cone angle", cone_angle)?;
    check_positive("core length", core_length)?;
    if radius.is_infinite() {
        return Err(Error::InfiniteRadius);
    }
    if !(radius > 0.0) || radius.is_nan() {
        return Err(Error::NonPositiveRadius { value: radius });
    }
    let sh = radius.sinh();
    let ch = radius.cosh();
    Ok(TubeBoundary {
        radius,
        cone_angle,
        core_length,
        meridian: cone_angle * sh,
        area: cone_angle * core_length * sh * ch,
        kappa: ch / sh,
    })
}

/// Principal normal curvature `coth(R)` of the boundary torus.
///
/// The sole tube quantity defined at the cusp limit: `R = infinity`
/// yields exactly 1.
pub fn principal_curvature(radius: f64) -> Result<f64> {
    if radius == f64::INFINITY {
        return Ok(1.0);
    }
    if !(radius > 0.0) {
        return Err(Error::NonPositiveRadius { value: radius });
    }
    Ok(radius.cosh() / radius.sinh())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveInput { name, value })
    }
}

/// A certified tube-radius lower bound as a function of the cone-angle x
/// core-length product, asserted only up to `validity_cap`.
///
/// Tables must be strictly monotone: smaller products certify larger radii
/// (the floor grows without bound as the product tends to zero, at a rate
/// the table's provider must supply).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusFloor {
    Constant {
        value: f64,
        validity_cap: f64,
    },
    Tabulated {
        table: Vec<(f64, f64)>,
        validity_cap: f64,
    },
}

/// JSON schema of a tabulated floor file:
/// `{"validity_cap": real, "table": [[al, rmin], ...]}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FloorFile {
    validity_cap: f64,
    table: Vec<[f64; 2]>,
}

impl RadiusFloor {
    /// The built-in constant floor 0.531, valid while `alpha * l <= 1.019`.
    pub fn default_constant() -> Self {
        RadiusFloor::Constant {
            value: constants::TUBE_RADIUS_FLOOR,
            validity_cap: constants::TUBE_PRODUCT_CAP,
        }
    }

    /// A constant floor with an explicit cap.
    pub fn constant(value: f64, validity_cap: f64) -> Result<Self> {
        let f = RadiusFloor::Constant {
            value,
            validity_cap,
        };
        f.validate()?;
        Ok(f)
    }

    /// An unconditional infinite floor: the exact model regime where the
    /// deformation error interval collapses to zero.
    pub fn model() -> Self {
        RadiusFloor::Constant {
            value: f64::INFINITY,
            validity_cap: f64::INFINITY,
        }
    }

    /// A tabulated floor from `(product, r_min)` pairs sorted by product.
    pub fn tabulated(table: Vec<(f64, f64)>, validity_cap: f64) -> Result<Self> {
        let f = RadiusFloor::Tabulated {
            table,
            validity_cap,
        };
        f.validate()?;
        Ok(f)
    }

    /// Parse the tabulated floor file schema.
    pub fn tabulated_from_json(json: &str) -> Result<Self> {
        let file: FloorFile = serde_json::from_str(json)
            .map_err(|e| Error::BadConfig(format!("floor table: {e}")))?;
        Self::tabulated(
            file.table.into_iter().map(|[a, r]| (a, r)).collect(),
            file.validity_cap,
        )
    }

    pub fn validity_cap(&self) -> f64 {
        match self {
            RadiusFloor::Constant { validity_cap, .. } => *validity_cap,
            RadiusFloor::Tabulated { validity_cap, .. } => *validity_cap,
        }
    }

    fn validate(&self) -> Result<()> {
        let cap = self.validity_cap();
        if !(cap > 0.0) {
            return Err(Error::BadConfig(format!(
                "validity cap must be positive, got {cap}"
            )));
        }
        match self {
            RadiusFloor::Constant { value, .. } => {
                if !(*value > 0.0) {
                    return Err(Error::BadConfig(format!(
                        "floor value must be positive, got {value}"
                    )));
                }
            }
            RadiusFloor::Tabulated { table, .. } => {
                if table.is_empty() {
                    return Err(Error::BadConfig("floor table is empty".into()));
                }
                for w in table.windows(2) {
                    let ((a0, r0), (a1, r1)) = (w[0], w[1]);
                    if !(a1 > a0) || !(r1 < r0) {
                        return Err(Error::BadConfig(format!(
                            "floor table must be strictly monotone \
                             (products increasing, radii decreasing): \
                             ({a0}, {r0}) then ({a1}, {r1})"
                        )));
                    }
                }
                if table.iter().any(|&(a, r)| !(a > 0.0) || !(r > 0.0)) {
                    return Err(Error::BadConfig(
                        "floor table entries must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Certified radius floor at the given angle-length product.
    ///
    /// Returns [`Error::HypothesisViolated`] when the product exceeds the
    /// validity cap: past that point no tube radius is certified at all.
    /// Tabulated lookups interpolate linearly and round the result downward
    /// by one ulp, except on exact table hits.
    pub fn floor_at(&self, product: f64) -> Result<f64> {
        check_positive("angle-length product", product).or_else(|e| {
            // an infinite product is never certified either
            if product == f64::INFINITY {
                Err(Error::HypothesisViolated {
                    product,
                    cap: self.validity_cap(),
                })
            } else {
                Err(e)
            }
        })?;
        let cap = self.validity_cap();
        if product > cap {
            return Err(Error::HypothesisViolated { product, cap });
        }
        match self {
            RadiusFloor::Constant { value, .. } => Ok(*value),
            RadiusFloor::Tabulated { table, .. } => {
                if product <= table[0].0 {
                    return Ok(table[0].1);
                }
                if product >= table[table.len() - 1].0 {
                    return Ok(table[table.len() - 1].1);
                }
                for w in table.windows(2) {
                    let ((a0, r0), (a1, r1)) = (w[0], w[1]);
                    if product == a0 {
                        return Ok(r0);
                    }
                    if product == a1 {
                        return Ok(r1);
                    }
                    if product > a0 && product < a1 {
                        let t = (product - a0) / (a1 - a0);
                        return Ok((r0 + t * (r1 - r0)).next_down());
                    }
                }
                unreachable!("interval search covers (first, last)")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Area oracle: numerically integrate the induced metric on the
    /// distance-R torus around a geodesic, in the hyperboloid model.
    ///
    /// The surface is parametrized by arclength t along the core and normal
    /// angle theta; the embedding is
    /// `X(t, theta) = (cosh R cosh t, cosh R sinh t, sinh R cos theta,
    /// sinh R sin theta)`. The metric determinant comes from central
    /// finite differences and the Minkowski inner product, and the area from
    /// the 2D trapezoid rule over `[0, l] x [0, alpha]`.
    fn integrated_tube_area(alpha: f64, ell: f64, radius: f64) -> f64 {
        let embed = |t: f64, th: f64| -> [f64; 4] {
            [
                radius.cosh() * t.cosh(),
                radius.cosh() * t.sinh(),
                radius.sinh() * th.cos(),
                radius.sinh() * th.sin(),
            ]
        };
        let minkowski =
            |a: [f64; 4], b: [f64; 4]| -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
        let n = 64;
        let (dt, dth) = (ell / n as f64, alpha / n as f64);
        let h = 1e-5;
        let mut area = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let (t, th) = (i as f64 * dt, j as f64 * dth);
                let xp = embed(t + h, th);
                let xm = embed(t - h, th);
                let tp = embed(t, th + h);
                let tm = embed(t, th - h);
                let du = [
                    (xp[0] - xm[0]) / (2.0 * h),
                    (xp[1] - xm[1]) / (2.0 * h),
                    (xp[2] - xm[2]) / (2.0 * h),
                    (xp[3] - xm[3]) / (2.0 * h),
                ];
                let dv = [
                    (tp[0] - tm[0]) / (2.0 * h),
                    (tp[1] - tm[1]) / (2.0 * h),
                    (tp[2] - tm[2]) / (2.0 * h),
                    (tp[3] - tm[3]) / (2.0 * h),
                ];
                let g11 = minkowski(du, du);
                let g12 = minkowski(du, dv);
                let g22 = minkowski(dv, dv);
                let density = (g11 * g22 - g12 * g12).max(0.0).sqrt();
                let wi = if i == 0 || i == n { 0.5 } else { 1.0 };
                let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
                let w = wi * wj;
                area += w * density;
            }
        }
        area * dt * dth
    }

    #[test]
    fn area_formula_matches_integrated_metric() {
        for &(alpha, ell, radius) in &[
            (std::f64::consts::TAU, 0.1, 0.531),
            (1.0, 0.5, 1.0),
            (4.0, 0.03, 2.0),
        ] {
            let tb = tube_boundary(alpha, ell, radius).unwrap();
            let oracle = integrated_tube_area(alpha, ell, radius);
            assert!(
                (tb.area - oracle).abs() < 1e-6 * tb.area,
                "area {} vs integrated {}",
                tb.area,
                oracle
            );
        }
    }

    #[test]
    fn defining_formulas_at_the_floor_radius() {
        let alpha = std::f64::consts::TAU;
        let tb = tube_boundary(alpha, 0.1, 0.531).unwrap();
        // independent evaluation via exponentials
        let sh = (0.531_f64.exp() - (-0.531_f64).exp()) / 2.0;
        let ch = (0.531_f64.exp() + (-0.531_f64).exp()) / 2.0;
        assert!((tb.meridian - alpha * sh).abs() < 1e-12);
        assert!((tb.kappa - ch / sh).abs() < 1e-12);
        assert!((tb.area - alpha * 0.1 * sh * ch).abs() < 1e-12);
    }

    #[test]
    fn small_radius_limits() {
        let m0 = tube_boundary(std::f64::consts::TAU, 1.0, 1e-8).unwrap();
        assert!(m0.meridian < 1e-6);
        assert!(m0.kappa > 1e7);
    }

    #[test]
    fn linear_in_cone_angle() {
        let a = tube_boundary(1.3, 0.2, 0.9).unwrap();
        let b = tube_boundary(2.6, 0.2, 0.9).unwrap();
        assert!((b.meridian - 2.0 * a.meridian).abs() < 1e-12);
        assert!((b.area - 2.0 * a.area).abs() < 1e-12);
        assert_eq!(a.kappa, b.kappa);
    }

    #[test]
    fn area_meridian_cross_identity() {
        // area / (m * l) = cosh(R)
        let mut radius = 0.05;
        while radius < 8.0 {
            let tb = tube_boundary(2.0, 0.7, radius).unwrap();
            let ratio = tb.area / (tb.meridian * tb.core_length);
            assert!((ratio - radius.cosh()).abs() < 1e-10 * ratio);
            radius += 0.173;
        }
    }

    #[test]
    fn kappa_exceeds_one_and_decays() {
        let mut prev = f64::INFINITY;
        for &r in &[0.1, 0.5, 1.0, 3.0, 10.0] {
            let k = principal_curvature(r).unwrap();
            assert!(k > 1.0 && k < prev);
            prev = k;
        }
        assert_eq!(principal_curvature(f64::INFINITY).unwrap(), 1.0);
        let k = principal_curvature(0.4).unwrap();
        assert!((k * (1.0 / k) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(matches!(
            tube_boundary(0.0, 1.0, 1.0),
            Err(Error::NonPositiveInput { .. })
        ));
        assert!(matches!(
            tube_boundary(1.0, -1.0, 1.0),
            Err(Error::NonPositiveInput { .. })
        ));
        assert!(matches!(
            tube_boundary(1.0, 1.0, 0.0),
            Err(Error::NonPositiveRadius { .. })
        ));
        assert!(matches!(
            tube_boundary(1.0, 1.0, f64::INFINITY),
            Err(Error::InfiniteRadius)
        ));
        assert!(matches!(
            principal_curvature(-2.0),
            Err(Error::NonPositiveRadius { .. })
        ));
    }

    #[test]
    fn constant_floor_behavior() {
        let f = RadiusFloor::default_constant();
        assert_eq!(f.floor_at(0.5).unwrap(), 0.531);
        assert!(matches!(
            f.floor_at(1.2),
            Err(Error::HypothesisViolated { .. })
        ));
        // inclusive at the cap
        assert_eq!(f.floor_at(1.019).unwrap(), 0.531);
    }

    #[test]
    fn tabulated_floor_interpolation() {
        let f = RadiusFloor::tabulated(vec![(0.1, 1.5), (1.0, 0.531)], 1.019).unwrap();
        // exact hits return table values untouched
        assert_eq!(f.floor_at(0.1).unwrap(), 1.5);
        assert_eq!(f.floor_at(1.0).unwrap(), 0.531);
        // below the first entry: flat extension (no upward extrapolation)
        assert_eq!(f.floor_at(0.01).unwrap(), 1.5);
        // beyond the last entry but within the cap: flat extension
        assert_eq!(f.floor_at(1.01).unwrap(), 0.531);
        // interior: linear, rounded downward
        let mid = f.floor_at(0.55).unwrap();
        let lin = 1.5 + (0.55 - 0.1) / 0.9 * (0.531 - 1.5);
        assert!(mid <= lin && lin - mid < 1e-12);
        assert!(matches!(
            f.floor_at(1.5),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn tabulated_floor_is_non_increasing() {
        let f = RadiusFloor::tabulated(
            vec![(0.05, 2.0), (0.2, 1.1), (0.6, 0.8), (1.0, 0.531)],
            1.019,
        )
        .unwrap();
        let mut prev = f64::INFINITY;
        let mut p = 0.01;
        while p <= 1.019 {
            let r = f.floor_at(p).unwrap();
            assert!(r <= prev + 1e-15, "floor increased at {p}");
            prev = r;
            p += 0.007;
        }
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(RadiusFloor::tabulated(vec![], 1.0).is_err());
        assert!(RadiusFloor::tabulated(vec![(0.5, 1.0), (0.4, 0.9)], 1.0).is_err());
        assert!(RadiusFloor::tabulated(vec![(0.4, 0.9), (0.5, 1.0)], 1.0).is_err());
        assert!(RadiusFloor::constant(0.5, -1.0).is_err());
        assert!(RadiusFloor::constant(-0.5, 1.0).is_err());
    }

    #[test]
    fn floor_file_parsing() {
        let f = RadiusFloor::tabulated_from_json(
            r#"{"validity_cap": 1.019, "table": [[0.1, 1.5], [1.0, 0.531]]}"#,
        )
        .unwrap();
        assert_eq!(f.validity_cap(), 1.019);
        assert!(RadiusFloor::tabulated_from_json(r#"{"table": []}"#).is_err());
        assert!(
            RadiusFloor::tabulated_from_json(r#"{"validity_cap": 1, "table": [], "x": 2}"#)
                .is_err()
        );
    }
}

//! Effective-rigidity bound evaluators.
//!
//! Deforming a cone-manifold changes the core length at a rate controlled by
//! the tube radius alone: `dl/dalpha = (l/alpha)(1 + E)` with `E` confined to
//! the interval computed by [`error_interval`]. The remaining evaluators turn
//! tube-boundary geometry into the scalar boundary-term bounds that drive the
//! deformation estimates:
//!
//! * [`bmm`] — the positive boundary term of the angle-changing model form,
//!   under the square-of-cone-angle parametrization;
//! * [`b00_upper`] — the upper bound `area / (8 m^4)` for the full
//!   angle-plus-longitude part;
//! * [`l2_upper`] — the same right-hand side, read as an L2 bound on the
//!   harmonic representative outside the tube.
//!
//! [`BoundaryForm`] holds the 3x3 quadratic form of the boundary term on the
//! model space `W = W_m + W_l` (signature `+--`). Only the axis signs are
//! pinned; the cross terms are caller-supplied. [`slice_max`] maximizes the
//! form over the admissible ellipse obtained by fixing the angle component,
//! exactly, by reducing to an unconstrained concave 2D quadratic.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tube::tube_boundary;

/// The relative-error interval for `dl/dalpha = (l/alpha)(1 + E)` at tube
/// radius `R`:
///
/// ```text
/// -(1/sinh^2 R) * (2 sinh^2 R + 1) / (2 sinh^2 R + 3)  <=  E  <=  1/sinh^2 R
/// ```
///
/// Both endpoints shrink to zero monotonically as `R` grows. The lower
/// endpoint passes `-1` exactly at `R = arctanh(1/sqrt(3))`: above that
/// radius the core-length derivative keeps the sign of the angle change.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorInterval {
    pub e_lo: f64,
    pub e_hi: f64,
    pub radius: f64,
}

/// Evaluate the error interval at tube radius `radius`.
///
/// `radius = infinity` is accepted as the cusp limit and returns the exact
/// interval `[0, 0]`.
pub fn error_interval(radius: f64) -> Result<ErrorInterval> {
    if !(radius > 0.0) {
        return Err(Error::NonPositiveRadius { value: radius });
    }
    let s = radius.sinh().powi(2);
    let e_hi = 1.0 / s;
    // (2s+1)/(2s+3) written to stay finite as s -> infinity
    let ratio = 1.0 - 2.0 / (2.0 * s + 3.0);
    let e_lo = -(e_hi * ratio) + 0.0; // normalize -0.0 at the limit
    Ok(ErrorInterval { e_lo, e_hi, radius })
}

/// Boundary term of the angle-changing model form:
/// `area(T_R) / (16 m^4) * (tanh R + tanh^3 R)`, with `m = alpha sinh R`.
///
/// Strictly positive: the boundary form is positive definite on the
/// angle-changing line.
pub fn bmm(cone_angle: f64, core_length: f64, radius: f64) -> Result<f64> {
    let tb = tube_boundary(cone_angle, core_length, radius)?;
    let t = radius.tanh();
    Ok(tb.area / (16.0 * tb.meridian.powi(4)) * (t + t.powi(3)))
}

/// Upper bound `area(T_R) / (8 m^4)` for the boundary term of the full
/// angle-plus-longitude part.
pub fn b00_upper(cone_angle: f64, core_length: f64, radius: f64) -> Result<f64> {
    let tb = tube_boundary(cone_angle, core_length, radius)?;
    Ok(tb.area / (8.0 * tb.meridian.powi(4)))
}

/// Certified L2 bound on the harmonic deformation representative outside
/// the tube (plus the correction term inside), with inputs echoed for
/// certificate embedding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct L2BoundReport {
    pub bound: f64,
    pub cone_angle: f64,
    pub core_length: f64,
    pub radius: f64,
}

/// The L2 estimate: same right-hand side as [`b00_upper`].
pub fn l2_upper(cone_angle: f64, core_length: f64, radius: f64) -> Result<L2BoundReport> {
    Ok(L2BoundReport {
        bound: b00_upper(cone_angle, core_length, radius)?,
        cone_angle,
        core_length,
        radius,
    })
}

/// The boundary-term quadratic form `Q` on the 3-dimensional model space
/// `W = W_m + W_l`, in a declared basis `(m, l1, l2)`.
///
/// Validated at construction: symmetric, signature `(+,-,-)`, positive on
/// the `W_m` axis, and negative definite on the `W_l` plane. Cross terms
/// are whatever the caller supplies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryForm {
    matrix: [[f64; 3]; 3],
    basis: [String; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryFormFile {
    matrix: [[f64; 3]; 3],
    basis: [String; 3],
}

impl BoundaryForm {
    pub fn new(matrix: [[f64; 3]; 3]) -> Result<Self> {
        Self::with_basis(
            matrix,
            ["m".to_string(), "l1".to_string(), "l2".to_string()],
        )
    }

    pub fn with_basis(matrix: [[f64; 3]; 3], basis: [String; 3]) -> Result<Self> {
        let scale = matrix
            .iter()
            .flatten()
            .fold(0.0_f64, |m, &v| m.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::BadConfig(
                "boundary form matrix is not finite".into(),
            ));
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                if (matrix[i][j] - matrix[j][i]).abs() > 1e-9 * scale {
                    return Err(Error::BadConfig(format!(
                        "boundary form matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let form = BoundaryForm { matrix, basis };
        form.check_signature()?;
        Ok(form)
    }

    /// Parse the JSON schema `{"matrix": [[..3x3..]], "basis": ["m","l1","l2"]}`.
    pub fn from_json(json: &str) -> Result<Self> {
        let f: BoundaryFormFile = serde_json::from_str(json)
            .map_err(|e| Error::BadConfig(format!("boundary form: {e}")))?;
        Self::with_basis(f.matrix, f.basis)
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.matrix
    }

    pub fn basis(&self) -> &[String; 3] {
        &self.basis
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let m = Matrix3::from_fn(|i, j| self.matrix[i][j]);
        let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        [ev[0], ev[1], ev[2]]
    }

    fn check_signature(&self) -> Result<()> {
        let ev = self.eigenvalues();
        let scale = ev.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        let plus = ev.iter().filter(|&&v| v > tol).count();
        let minus = ev.iter().filter(|&&v| v < -tol).count();
        if plus != 1 || minus != 2 {
            return Err(Error::BadSignature { eigenvalues: ev });
        }
        // the axis conditions pin which subspace carries which sign
        if !(self.matrix[0][0] > 0.0) {
            return Err(Error::BadSignature { eigenvalues: ev });
        }
        if !self.longitude_block_negative_definite() {
            return Err(Error::BadSignature { eigenvalues: ev });
        }
        Ok(())
    }

    /// Negative definiteness of the restriction to the `W_l` plane; this is
    /// what makes the admissible slice an ellipse (compact).
    fn longitude_block_negative_definite(&self) -> bool {
        let a = self.matrix[1][1];
        let c = self.matrix[2][2];
        let b = self.matrix[1][2];
        a < 0.0 && a * c - b * b > 0.0
    }

    /// Evaluate `Q(v)`.
    pub fn eval(&self, v: [f64; 3]) -> f64 {
        let m = Matrix3::from_fn(|i, j| self.matrix[i][j]);
        let v = Vector3::new(v[0], v[1], v[2]);
        (v.transpose() * m * v)[0]
    }
}

/// Result of maximizing `Q` over the admissible slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SliceMax {
    pub max_value: f64,
    pub argmax: [f64; 3],
}

/// Maximize `Q(v_m + w)` over `w` in the longitude plane, subject to
/// `Q(v_m + w) >= 0`.
///
/// Fixing the angle component restricts the nonnegativity cone to an
/// ellipse in the affine plane `v_m + W_l`; since the restriction of `Q` to
/// `W_l` is negative definite the objective is concave there, so the
/// constrained maximum is the unconstrained one:
/// `Q(v_m) - b^T A^{-1} b` with `A` the longitude block and `b` the cross
/// column. It is always at least `Q(v_m)` (take `w = 0`).
pub fn slice_max(form: &BoundaryForm, v_m: [f64; 3]) -> Result<SliceMax> {
    if v_m[1] != 0.0 || v_m[2] != 0.0 {
        return Err(Error::OffAxis);
    }
    let q_vm = form.eval(v_m);
    if !(q_vm > 0.0) {
        return Err(Error::NonPositiveInput {
            name: "Q(v_m)",
            value: q_vm,
        });
    }
    // the compactness of the feasible slice is re-verified before optimizing
    if !form.longitude_block_negative_definite() {
        return Err(Error::BadSignature {
            eigenvalues: form.eigenvalues(),
        });
    }
    let m = form.matrix();
    let t = v_m[0];
    let b = [t * m[0][1], t * m[0][2]];
    let (a11, a12, a22) = (m[1][1], m[1][2], m[2][2]);
    let det = a11 * a22 - a12 * a12;
    // w* = -A^{-1} b
    let w = [
        -(a22 * b[0] - a12 * b[1]) / det,
        -(-a12 * b[0] + a11 * b[1]) / det,
    ];
    // max = Q(v_m) + b^T w*  since  w*^T A w* = -b^T w*
    let max_value = q_vm + (b[0] * w[0] + b[1] * w[1]);
    Ok(SliceMax {
        max_value,
        argmax: [t, w[0], w[1]],
    })
}

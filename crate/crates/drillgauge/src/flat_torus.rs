//! Unit-area flat tori (cusp cross-sections), slopes, and normalized lengths.
//!
//! A cusp cross-section of a one-cusped hyperbolic 3-manifold carries a flat
//! metric, well defined up to scale. Rescaling to area 1 makes the geodesic
//! length of a surgery curve a scale-free invariant, the *normalized length*;
//! its square is the *extremal length* and equals the limiting ratio of cone
//! angle to core length at the cusp.
//!
//! [`CuspShape`] stores a marked lattice in reduced form: the modulus
//! `(x, y)` of the canonical basis (fundamental-domain representative with
//! `|x| <= 1/2`, `x^2 + y^2 >= 1`) together with an integer *marking* matrix
//! that maps user homology coordinates to reduced coordinates. All length
//! queries are answered from that pair, so they are invariant under both
//! rescaling of the input basis and unimodular re-marking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below which a raw basis determinant counts as degenerate.
const DEGENERACY_TOL: f64 = 1e-12;

/// Tolerance for fundamental-domain boundary tie-breaking.
const BOUNDARY_TIE_TOL: f64 = 1e-12;

/// A primitive, canonically signed surgery slope.
///
/// Slopes `(p, q)` and `(-p, -q)` name the same curve; the canonical
/// representative has `q > 0`, or `q == 0` and `p > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    /// Canonicalize and validate a slope.
    ///
    /// Rejects `(0, 0)` and non-primitive pairs.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::ZeroClass);
        }
        if gcd(p, q) != 1 {
            return Err(Error::NonPrimitiveSlope { p, q });
        }
        Ok(Self::canonical(p, q))
    }

    // caller guarantees primitivity
    fn canonical(p: i64, q: i64) -> Self {
        if q < 0 || (q == 0 && p < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// A point of `H_1(T, R)`: the real-coefficient generalization of a slope.
///
/// A weighted curve `lambda * (p, q)` corresponds to `(lambda*p, lambda*q)`;
/// normalized length extends continuously and is positively homogeneous of
/// degree 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedClass {
    pub x: f64,
    pub y: f64,
}

impl WeightedClass {
    pub fn new(x: f64, y: f64) -> Self {
        WeightedClass { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

impl From<Slope> for WeightedClass {
    fn from(s: Slope) -> Self {
        WeightedClass::new(s.p as f64, s.q as f64)
    }
}

/// A unit-area marked flat torus in reduced form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspShape {
    /// Reduced modulus `(x, y)`, `y > 0`, in the fundamental domain.
    modulus: (f64, f64),
    /// Column-convention basis change: `(p', q')^T = marking * (p, q)^T`
    /// maps user coordinates to reduced coordinates. Determinant +-1.
    marking: [[i64; 2]; 2],
}

impl CuspShape {
    /// Reduce a raw lattice basis to a canonical unit-area shape.
    ///
    /// The two vectors are rows `(x, y)` in the plane. Lengths of
    /// corresponding homology classes are preserved up to the global area
    /// rescaling, which normalized lengths quotient out.
    pub fn from_basis(b1: [f64; 2], b2: [f64; 2]) -> Result<Self> {
        for &v in b1.iter().chain(b2.iter()) {
            if !v.is_finite() {
                return Err(Error::BadConfig(format!("non-finite basis entry {v}")));
            }
        }
        let det = b1[0] * b2[1] - b1[1] * b2[0];
        if det.abs() < DEGENERACY_TOL {
            return Err(Error::DegenerateLattice { det });
        }
        reduce(b1, b2)
    }

    /// Shape of the lattice spanned by `1` and `x + iy` (then rescaled to
    /// area 1 and reduced).
    pub fn from_modulus(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() || !x.is_finite() {
            return Err(Error::NonPositiveInput {
                name: "modulus imaginary part",
                value: y,
            });
        }
        Self::from_basis([1.0, 0.0], [x, y])
    }

    /// The square torus, modulus `(0, 1)`.
    pub fn square() -> Self {
        CuspShape {
            modulus: (0.0, 1.0),
            marking: [[1, 0], [0, 1]],
        }
    }

    /// The hexagonal torus, modulus `(1/2, sqrt(3)/2)`.
    pub fn hexagonal() -> Self {
        Self::from_modulus(0.5, 3.0_f64.sqrt() / 2.0).expect("hexagonal modulus is valid")
    }

    pub fn modulus(&self) -> (f64, f64) {
        self.modulus
    }

    pub fn marking(&self) -> [[i64; 2]; 2] {
        self.marking
    }

    /// Map user coordinates to reduced coordinates.
    fn to_reduced(&self, p: f64, q: f64) -> (f64, f64) {
        let m = &self.marking;
        (
            m[0][0] as f64 * p + m[0][1] as f64 * q,
            m[1][0] as f64 * p + m[1][1] as f64 * q,
        )
    }

    /// Map reduced integer coordinates back to user coordinates.
    fn to_user(&self, pr: i64, qr: i64) -> (i64, i64) {
        let m = &self.marking;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        debug_assert!(det == 1 || det == -1);
        // inverse of a +-1-determinant integer matrix is the signed adjugate
        let inv = [
            [det * m[1][1], -det * m[0][1]],
            [-det * m[1][0], det * m[0][0]],
        ];
        (
            inv[0][0] * pr + inv[0][1] * qr,
            inv[1][0] * pr + inv[1][1] * qr,
        )
    }

    /// Normalized length of a homology class: its flat geodesic length on
    /// the torus rescaled to area 1.
    pub fn normalized_length(&self, cls: WeightedClass) -> Result<f64> {
        if cls.is_zero() {
            return Err(Error::ZeroClass);
        }
        let (x, y) = self.modulus;
        let (pr, qr) = self.to_reduced(cls.x, cls.y);
        // |p' + q' * (x + iy)| / sqrt(y); hypot keeps axis classes exact
        Ok((pr + qr * x).hypot(qr * y) / y.sqrt())
    }

    /// Normalized length of an integer slope.
    pub fn slope_length(&self, slope: Slope) -> f64 {
        self.normalized_length(slope.into())
            .expect("slopes are nonzero")
    }

    /// Extremal length: the square of the normalized length, equal to the
    /// limiting ratio of cone angle to core length at the cusp.
    pub fn extremal_length(&self, cls: WeightedClass) -> Result<f64> {
        self.normalized_length(cls).map(|l| l * l)
    }

    /// Gram matrix of the squared normalized length in user coordinates:
    /// `extremal_length(p, q) = (p, q) G (p, q)^T`.
    pub fn user_gram(&self) -> [[f64; 2]; 2] {
        let (x, y) = self.modulus;
        // reduced-coordinate Gram of the unit-area lattice
        let g = [[1.0 / y, x / y], [x / y, (x * x + y * y) / y]];
        let m = &self.marking;
        let mf = [
            [m[0][0] as f64, m[0][1] as f64],
            [m[1][0] as f64, m[1][1] as f64],
        ];
        // M^T G M
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        acc += mf[a][i] * g[a][b] * mf[b][j];
                    }
                }
                out[i][j] = acc;
            }
        }
        out
    }

    /// Visit every canonical primitive slope of normalized length strictly
    /// below `bound`, in reduced coordinates.
    ///
    /// Completeness: if `q(p', q') < bound^2` then `|q'| <= bound / sqrt(y)`,
    /// the dual-basis bound, and for each `q'` the admissible `p'` form an
    /// exactly solvable interval.
    fn for_each_short_class<F: FnMut(i64, i64, f64)>(&self, bound: f64, mut f: F) {
        let (x, y) = self.modulus;
        let sqrt_y = y.sqrt();
        let b2 = bound * bound;

        // q' = 0: only (1, 0) is primitive with the canonical sign
        if 1.0 / sqrt_y < bound {
            f(1, 0, 1.0 / sqrt_y);
        }

        let mut qr: i64 = 1;
        loop {
            let qf = qr as f64;
            // (p' + q'x)^2 < y*b2 - (q'y)^2
            let disc = y * b2 - (qf * y) * (qf * y);
            if disc < 0.0 {
                break;
            }
            let half = disc.sqrt();
            let lo = (-qf * x - half).ceil() as i64;
            let hi = (-qf * x + half).floor() as i64;
            for pr in lo..=hi {
                if gcd(pr, qr) != 1 {
                    continue;
                }
                let len = (pr as f64 + qf * x).hypot(qf * y) / sqrt_y;
                if len < bound {
                    f(pr, qr, len);
                }
            }
            qr += 1;
        }
    }

    /// Every canonical primitive slope with normalized length `< bound`,
    /// with its length, sorted by length (ties by user coordinates).
    pub fn enumerate_slopes(&self, bound: f64) -> Result<Vec<(Slope, f64)>> {
        if !(bound > 0.0) {
            return Err(Error::NonPositiveInput {
                name: "enumeration bound",
                value: bound,
            });
        }
        let mut out = Vec::new();
        self.for_each_short_class(bound, |pr, qr, len| {
            let (p, q) = self.to_user(pr, qr);
            out.push((Slope::canonical(p, q), len));
        });
        out.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap()
                .then(a.0.p.cmp(&b.0.p))
                .then(a.0.q.cmp(&b.0.q))
        });
        Ok(out)
    }

    /// Number of canonical primitive slopes with normalized length
    /// strictly below `bound`.
    pub fn count_short_slopes(&self, bound: f64) -> usize {
        if !(bound > 0.0) {
            return 0;
        }
        let mut n = 0;
        self.for_each_short_class(bound, |_, _, _| n += 1);
        n
    }
}

/// JSON shape record accepted by all shape-consuming commands.
///
/// Exactly one of `basis` and `modulus` must be present:
/// `{"name": ..., "basis": [[e11,e12],[e21,e22]]}` or
/// `{"name": ..., "modulus": [x, y]}`. Batch certification lines may add a
/// `slope` field.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<[[f64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<[i64; 2]>,
}

impl ShapeRecord {
    pub fn to_shape(&self) -> Result<CuspShape> {
        match (&self.basis, &self.modulus) {
            (Some(b), None) => CuspShape::from_basis(b[0], b[1]),
            (None, Some(m)) => CuspShape::from_modulus(m[0], m[1]),
            _ => Err(Error::BadConfig(format!(
                "shape record '{}' needs exactly one of `basis` or `modulus`",
                self.name
            ))),
        }
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Lagrange–Gauss reduction with integer bookkeeping.
///
/// Maintains `v1 = c[0] . (b1, b2)`, `v2 = c[1] . (b1, b2)` for an integer
/// matrix `c`, and returns the reduced modulus together with the
/// user-to-reduced marking. Orientation is normalized once up front; every
/// subsequent operation has determinant +1, so the output is the unique
/// reduced representative of the oriented marked lattice.
fn reduce(b1: [f64; 2], b2: [f64; 2]) -> Result<CuspShape> {
    let mut v1 = b1;
    let mut v2 = b2;
    let mut c: [[i64; 2]; 2] = [[1, 0], [0, 1]];

    let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
    let norm2 = |a: [f64; 2]| dot(a, a);
    let cross = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];

    // oriented basis: Im(v2 / v1) > 0, preserved by everything below
    if cross(v1, v2) < 0.0 {
        v2 = [-v2[0], -v2[1]];
        c[1] = [0, -1];
    }

    // (v1, v2) <- (v2, -v1), the determinant-+1 version of a swap
    let rotate = |v1: &mut [f64; 2], v2: &mut [f64; 2], c: &mut [[i64; 2]; 2]| {
        std::mem::swap(v1, v2);
        *v2 = [-v2[0], -v2[1]];
        c.swap(0, 1);
        c[1] = [-c[1][0], -c[1][1]];
    };

    for iter in 0.. {
        if iter > 64 {
            return Err(Error::DegenerateLattice {
                det: b1[0] * b2[1] - b1[1] * b2[0],
            });
        }
        // ties round to even so boundary moduli (Re tau = +-1/2) are stable
        let mu = (dot(v1, v2) / norm2(v1)).round_ties_even();
        if mu != 0.0 {
            v2 = [v2[0] - mu * v1[0], v2[1] - mu * v1[1]];
            let m = mu as i64;
            c[1][0] -= m * c[0][0];
            c[1][1] -= m * c[0][1];
        }
        if norm2(v2) >= norm2(v1) {
            break;
        }
        rotate(&mut v1, &mut v2, &mut c);
    }

    let tau = |v1: [f64; 2], v2: [f64; 2]| {
        let n = norm2(v1);
        (dot(v1, v2) / n, cross(v1, v2) / n)
    };
    let (mut x, mut y) = tau(v1, v2);

    // domain-boundary ties break toward x >= 0
    if x < 0.0 && (x + 0.5).abs() <= BOUNDARY_TIE_TOL {
        // left edge -> right edge: v2 += v1
        v2 = [v2[0] + v1[0], v2[1] + v1[1]];
        c[1][0] += c[0][0];
        c[1][1] += c[0][1];
        let t = tau(v1, v2);
        x = t.0;
        y = t.1;
    }
    if x < 0.0 && (x * x + y * y - 1.0).abs() <= BOUNDARY_TIE_TOL {
        // left half of the unit circle -> right half
        rotate(&mut v1, &mut v2, &mut c);
        let t = tau(v1, v2);
        x = t.0;
        y = t.1;
    }

    // marking = (C^T)^{-1}: user column coordinates -> reduced columns
    let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    debug_assert!(det == 1 || det == -1);
    let marking = [
        [det * c[1][1], -det * c[1][0]],
        [-det * c[0][1], det * c[0][0]],
    ];

    Ok(CuspShape {
        modulus: (x, y),
        marking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Direct normalized length from a raw basis, bypassing reduction.
    fn raw_length(b1: [f64; 2], b2: [f64; 2], p: f64, q: f64) -> f64 {
        let v = [p * b1[0] + q * b2[0], p * b1[1] + q * b2[1]];
        let area = (b1[0] * b2[1] - b1[1] * b2[0]).abs();
        v[0].hypot(v[1]) / area.sqrt()
    }

    /// Brute-force reduction oracle: orient the basis, then scan oriented
    /// unimodular changes of basis with entries bounded by 10 for the one
    /// landing in the fundamental domain.
    fn brute_force_modulus(b1: [f64; 2], b2: [f64; 2]) -> (f64, f64) {
        let (b1, b2) = if b1[0] * b2[1] - b1[1] * b2[0] < 0.0 {
            (b1, [-b2[0], -b2[1]])
        } else {
            (b1, b2)
        };
        let mut best: Option<(f64, f64)> = None;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                for c in -10i64..=10 {
                    for d in -10i64..=10 {
                        if a * d - b * c != 1 {
                            continue;
                        }
                        let w1 = [
                            a as f64 * b1[0] + b as f64 * b2[0],
                            a as f64 * b1[1] + b as f64 * b2[1],
                        ];
                        let w2 = [
                            c as f64 * b1[0] + d as f64 * b2[0],
                            c as f64 * b1[1] + d as f64 * b2[1],
                        ];
                        let n = w1[0] * w1[0] + w1[1] * w1[1];
                        let re = (w1[0] * w2[0] + w1[1] * w2[1]) / n;
                        let im = (w1[0] * w2[1] - w1[1] * w2[0]).abs() / n;
                        let eps = 1e-9;
                        let in_domain = re.abs() <= 0.5 + eps && re * re + im * im >= 1.0 - eps;
                        if !in_domain {
                            continue;
                        }
                        // canonical tie-breaking toward x >= 0
                        let cand = if re < 0.0
                            && ((re + 0.5).abs() <= eps || (re * re + im * im - 1.0).abs() <= eps)
                        {
                            (-re, im)
                        } else {
                            (re, im)
                        };
                        match best {
                            None => best = Some(cand),
                            Some(prev) => {
                                // all candidates agree up to tie-breaking noise
                                assert!(
                                    (cand.0 - prev.0).abs() < 1e-9
                                        && (cand.1 - prev.1).abs() < 1e-9,
                                    "ambiguous reduction: {:?} vs {:?}",
                                    cand,
                                    prev
                                );
                            }
                        }
                    }
                }
            }
        }
        best.expect("bounded search found a reduced basis")
    }

    /// Box-scan enumeration oracle over the dual-basis integer box.
    fn box_scan(shape: &CuspShape, bound: f64) -> Vec<(Slope, f64)> {
        let (x, y) = shape.modulus();
        let pmax = (bound * ((x * x + y * y) / y).sqrt()).ceil() as i64 + 1;
        let qmax = (bound / y.sqrt()).ceil() as i64 + 1;
        let mut out = Vec::new();
        for q in -qmax..=qmax {
            for p in -pmax..=pmax {
                if (p, q) == (0, 0) || gcd(p, q) != 1 {
                    continue;
                }
                if q < 0 || (q == 0 && p < 0) {
                    continue; // canonical representative only
                }
                let len = (p as f64 + q as f64 * x).hypot(q as f64 * y) / y.sqrt();
                if len < bound {
                    let (pu, qu) = shape.to_user(p, q);
                    out.push((Slope::canonical(pu, qu), len));
                }
            }
        }
        out.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap()
                .then(a.0.p().cmp(&b.0.p()))
                .then(a.0.q().cmp(&b.0.q()))
        });
        out
    }

    fn random_basis(rng: &mut StdRng) -> ([f64; 2], [f64; 2]) {
        loop {
            let b1 = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let b2 = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let det: f64 = b1[0] * b2[1] - b1[1] * b2[0];
            if det.abs() > 0.05 {
                return (b1, b2);
            }
        }
    }

    #[test]
    fn slope_canonicalization() {
        assert_eq!(Slope::new(3, -4).unwrap(), Slope::new(-3, 4).unwrap());
        assert_eq!(Slope::new(-1, 0).unwrap().p(), 1);
        assert_eq!(Slope::new(0, -1).unwrap().q(), 1);
        assert_eq!(Slope::new(0, 0), Err(Error::ZeroClass));
        assert_eq!(
            Slope::new(2, 4),
            Err(Error::NonPrimitiveSlope { p: 2, q: 4 })
        );
    }

    #[test]
    fn square_torus_is_reduced_with_identity_marking() {
        let s = CuspShape::from_basis([1.0, 0.0], [0.0, 1.0]).unwrap();
        assert_eq!(s.modulus(), (0.0, 1.0));
        assert_eq!(s.marking(), [[1, 0], [0, 1]]);
    }

    #[test]
    fn scaled_square_torus_normalizes() {
        let s = CuspShape::from_basis([2.0, 0.0], [0.0, 2.0]).unwrap();
        assert_eq!(s.modulus(), (0.0, 1.0));
    }

    #[test]
    fn sheared_basis_reduces_to_square() {
        let s = CuspShape::from_basis([1.0, 0.0], [5.0, 1.0]).unwrap();
        assert!((s.modulus().0 - 0.0).abs() < 1e-12);
        assert!((s.modulus().1 - 1.0).abs() < 1e-12);
        // marking shears off the integer part: user (0,1) has length sqrt(26)
        let l = s.normalized_length(WeightedClass::new(0.0, 1.0)).unwrap();
        assert!((l - 26.0_f64.sqrt()).abs() < 1e-12);
        // cross-check the modulus against the bounded unimodular search
        let oracle = brute_force_modulus([1.0, 0.0], [5.0, 1.0]);
        assert!((s.modulus().0 - oracle.0).abs() < 1e-9);
        assert!((s.modulus().1 - oracle.1).abs() < 1e-9);
    }

    #[test]
    fn reduction_matches_brute_force_on_random_bases() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..25 {
            let (b1, b2) = random_basis(&mut rng);
            let s = CuspShape::from_basis(b1, b2).unwrap();
            let oracle = brute_force_modulus(b1, b2);
            assert!(
                (s.modulus().0 - oracle.0).abs() < 1e-9 && (s.modulus().1 - oracle.1).abs() < 1e-9,
                "basis {:?} {:?}: got {:?}, oracle {:?}",
                b1,
                b2,
                s.modulus(),
                oracle
            );
        }
    }

    #[test]
    fn reduced_moduli_lie_in_the_fundamental_domain() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..200 {
            let (b1, b2) = random_basis(&mut rng);
            let (x, y) = CuspShape::from_basis(b1, b2).unwrap().modulus();
            assert!(y > 0.0);
            assert!(x.abs() <= 0.5 + 1e-12, "x = {x} outside the strip");
            assert!(x * x + y * y >= 1.0 - 1e-12, "({x}, {y}) below the circle");
        }
    }

    #[test]
    fn degenerate_basis_rejected() {
        let r = CuspShape::from_basis([1.0, 2.0], [0.5, 1.0]);
        assert!(matches!(r, Err(Error::DegenerateLattice { .. })));
    }

    #[test]
    fn reduction_is_idempotent() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..50 {
            let (b1, b2) = random_basis(&mut rng);
            let s = CuspShape::from_basis(b1, b2).unwrap();
            let (x, y) = s.modulus();
            let again = CuspShape::from_modulus(x, y).unwrap();
            assert!((again.modulus().0 - x).abs() < 1e-12);
            assert!((again.modulus().1 - y).abs() < 1e-12);
        }
        // hexagonal point sits on both boundary arcs
        let hex = CuspShape::hexagonal();
        let (x, y) = hex.modulus();
        let again = CuspShape::from_modulus(x, y).unwrap();
        assert!((again.modulus().0 - x).abs() < 1e-12);
        assert!((again.modulus().1 - y).abs() < 1e-12);
    }

    #[test]
    fn unit_covolume_after_normalization() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..50 {
            let (b1, b2) = random_basis(&mut rng);
            let (_x, y) = CuspShape::from_basis(b1, b2).unwrap().modulus();
            // unit-area basis (1/sqrt(y), 0), (x/sqrt(y), sqrt(y))
            let det = (1.0 / y.sqrt()) * y.sqrt();
            assert!((det - 1.0).abs() < 1e-12);
            assert!(y > 0.0);
        }
    }

    #[test]
    fn lengths_preserved_by_reduction() {
        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..50 {
            let (b1, b2) = random_basis(&mut rng);
            let s = CuspShape::from_basis(b1, b2).unwrap();
            for _ in 0..10 {
                let p = rng.gen_range(-5i64..=5);
                let q = rng.gen_range(-5i64..=5);
                if (p, q) == (0, 0) {
                    continue;
                }
                let direct = raw_length(b1, b2, p as f64, q as f64);
                let reduced = s
                    .normalized_length(WeightedClass::new(p as f64, q as f64))
                    .unwrap();
                assert!(
                    (direct - reduced).abs() < 1e-12 * direct.max(1.0),
                    "({p},{q}): direct {direct} vs reduced {reduced}"
                );
            }
        }
    }

    #[test]
    fn square_torus_lengths() {
        let s = CuspShape::square();
        assert_eq!(s.slope_length(Slope::new(1, 0).unwrap()), 1.0);
        let l = s.normalized_length(WeightedClass::new(3.0, 4.0)).unwrap();
        assert!((l - 5.0).abs() < 1e-12);
        let e = s.extremal_length(WeightedClass::new(3.0, 4.0)).unwrap();
        assert!((e - 25.0).abs() < 1e-12);
        assert_eq!(
            s.normalized_length(WeightedClass::new(0.0, 0.0)),
            Err(Error::ZeroClass)
        );
    }

    #[test]
    fn hexagonal_length_against_direct_norm() {
        let s = CuspShape::hexagonal();
        let l = s.slope_length(Slope::new(1, 0).unwrap());
        // direct computation on the lattice <(1,0), (1/2, sqrt3/2)>, area sqrt3/2
        let direct = raw_length([1.0, 0.0], [0.5, 3.0_f64.sqrt() / 2.0], 1.0, 0.0);
        assert!((l - direct).abs() < 1e-12);
        assert!((l - (4.0 / 3.0_f64).powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn extremal_is_square_of_normalized() {
        let mut rng = StdRng::seed_from_u64(15);
        for _ in 0..30 {
            let (b1, b2) = random_basis(&mut rng);
            let s = CuspShape::from_basis(b1, b2).unwrap();
            let cls = WeightedClass::new(rng.gen_range(-4.0..4.0), rng.gen_range(0.1..4.0));
            let n = s.normalized_length(cls).unwrap();
            let e = s.extremal_length(cls).unwrap();
            assert!((e - n * n).abs() <= 1e-12 * e.max(1.0));
        }
    }

    #[test]
    fn homogeneity_of_degree_one() {
        let mut rng = StdRng::seed_from_u64(16);
        let s = CuspShape::hexagonal();
        for _ in 0..100 {
            let cls = WeightedClass::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            if cls.is_zero() {
                continue;
            }
            let lam = rng.gen_range(0.01..10.0);
            let scaled = WeightedClass::new(lam * cls.x, lam * cls.y);
            let a = s.normalized_length(scaled).unwrap();
            let b = lam * s.normalized_length(cls).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn sl2_invariance_of_lengths() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..25 {
            let (b1, b2) = random_basis(&mut rng);
            // random unimodular u = [[a,b],[c,d]]
            let (a, b, c) = (
                rng.gen_range(-3i64..=3),
                rng.gen_range(-3i64..=3),
                rng.gen_range(-3i64..=3),
            );
            let d = if a != 0 && (1 + b * c) % a == 0 {
                (1 + b * c) / a
            } else {
                continue;
            };
            if a * d - b * c != 1 {
                continue;
            }
            let nb1 = [
                a as f64 * b1[0] + b as f64 * b2[0],
                a as f64 * b1[1] + b as f64 * b2[1],
            ];
            let nb2 = [
                c as f64 * b1[0] + d as f64 * b2[0],
                c as f64 * b1[1] + d as f64 * b2[1],
            ];
            let s1 = CuspShape::from_basis(b1, b2).unwrap();
            let s2 = match CuspShape::from_basis(nb1, nb2) {
                Ok(s) => s,
                Err(_) => continue,
            };
            for _ in 0..8 {
                let p = rng.gen_range(-4i64..=4);
                let q = rng.gen_range(-4i64..=4);
                if (p, q) == (0, 0) {
                    continue;
                }
                // class p*b1 + q*b2 reads (p', q') = (p, q) adj(u) in the new basis
                let pp = p * d - q * c;
                let qp = -p * b + q * a;
                let l1 = s1
                    .normalized_length(WeightedClass::new(p as f64, q as f64))
                    .unwrap();
                let l2 = s2
                    .normalized_length(WeightedClass::new(pp as f64, qp as f64))
                    .unwrap();
                assert!((l1 - l2).abs() < 1e-10 * l1.max(1.0));
            }
        }
    }

    #[test]
    fn scale_invariance_of_lengths() {
        let mut rng = StdRng::seed_from_u64(18);
        for _ in 0..25 {
            let (b1, b2) = random_basis(&mut rng);
            let c = rng.gen_range(0.01..100.0);
            let s1 = CuspShape::from_basis(b1, b2).unwrap();
            let s2 = CuspShape::from_basis([c * b1[0], c * b1[1]], [c * b2[0], c * b2[1]]).unwrap();
            let cls = WeightedClass::new(rng.gen_range(-4.0..4.0), rng.gen_range(0.1..4.0));
            let l1 = s1.normalized_length(cls).unwrap();
            let l2 = s2.normalized_length(cls).unwrap();
            assert!((l1 - l2).abs() < 1e-10 * l1.max(1.0));
        }
    }

    #[test]
    fn enumerate_square_torus_small_bounds() {
        let s = CuspShape::square();
        // strictly below 1.3: only the two unit slopes
        let r = s.enumerate_slopes(1.3).unwrap();
        assert_eq!(
            r.iter().map(|(s, _)| (s.p(), s.q())).collect::<Vec<_>>(),
            vec![(0, 1), (1, 0)]
        );
        assert!(r.iter().all(|(_, l)| (*l - 1.0).abs() < 1e-12));

        // sqrt(2) < 1.5, so the diagonal slopes join
        let r = s.enumerate_slopes(1.5).unwrap();
        assert_eq!(
            r.iter().map(|(s, _)| (s.p(), s.q())).collect::<Vec<_>>(),
            vec![(0, 1), (1, 0), (-1, 1), (1, 1)]
        );

        // bound 2.3 adds the four sqrt(5) slopes
        let r = s.enumerate_slopes(2.3).unwrap();
        assert_eq!(r.len(), 8);
        assert!(r.iter().any(|(s, _)| (s.p(), s.q()) == (1, 1)));
        assert!(r.iter().any(|(s, _)| (s.p(), s.q()) == (-1, 1)));

        // strictness: unit slopes sit exactly at 1.0
        assert!(s.enumerate_slopes(1.0).unwrap().is_empty());
        assert_eq!(s.count_short_slopes(1.0), 0);
    }

    #[test]
    fn enumerate_hexagonal_matches_box_scan_over_100() {
        let s = CuspShape::hexagonal();
        let got = s.enumerate_slopes(7.515).unwrap();
        // exhaustive scan over |p|, |q| <= 100 in reduced coordinates
        let (x, y) = s.modulus();
        let mut oracle = Vec::new();
        for q in 0..=100i64 {
            for p in -100..=100i64 {
                if (p, q) == (0, 0) || gcd(p, q) != 1 {
                    continue;
                }
                if q == 0 && p < 0 {
                    continue;
                }
                let len = (p as f64 + q as f64 * x).hypot(q as f64 * y) / y.sqrt();
                if len < 7.515 {
                    let (pu, qu) = s.to_user(p, q);
                    oracle.push(Slope::canonical(pu, qu));
                }
            }
        }
        assert_eq!(got.len(), oracle.len());
        let got_set: std::collections::HashSet<_> = got.iter().map(|(s, _)| *s).collect();
        assert!(oracle.iter().all(|s| got_set.contains(s)));
    }

    #[test]
    fn enumeration_complete_on_random_shapes() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..100 {
            let (b1, b2) = random_basis(&mut rng);
            let s = CuspShape::from_basis(b1, b2).unwrap();
            let bound = rng.gen_range(0.5..12.0);
            let got = s.enumerate_slopes(bound).unwrap();
            let oracle = box_scan(&s, bound);
            assert_eq!(
                got,
                oracle,
                "enumeration mismatch at bound {bound} on {:?}",
                s.modulus()
            );
        }
    }

    #[test]
    fn shape_record_parsing() {
        let r: ShapeRecord =
            serde_json::from_str(r#"{"name": "sq", "basis": [[1,0],[0,1]]}"#).unwrap();
        assert_eq!(r.to_shape().unwrap().modulus(), (0.0, 1.0));

        let r: ShapeRecord = serde_json::from_str(r#"{"name": "m", "modulus": [0, 1]}"#).unwrap();
        assert_eq!(r.to_shape().unwrap().modulus(), (0.0, 1.0));

        // strict parsing: unknown keys rejected
        assert!(serde_json::from_str::<ShapeRecord>(
            r#"{"name": "x", "modulus": [0, 1], "extra": 3}"#
        )
        .is_err());

        // exactly one of basis/modulus
        let r: ShapeRecord = serde_json::from_str(r#"{"name": "x"}"#).unwrap();
        assert!(r.to_shape().is_err());
    }

    #[test]
    fn user_gram_reproduces_extremal_length() {
        let mut rng = StdRng::seed_from_u64(20);
        for _ in 0..30 {
            let (b1, b2) = random_basis(&mut rng);
            let s = CuspShape::from_basis(b1, b2).unwrap();
            let g = s.user_gram();
            let cls = WeightedClass::new(rng.gen_range(-4.0..4.0), rng.gen_range(0.1..4.0));
            let quad =
                g[0][0] * cls.x * cls.x + 2.0 * g[0][1] * cls.x * cls.y + g[1][1] * cls.y * cls.y;
            let e = s.extremal_length(cls).unwrap();
            assert!((quad - e).abs() < 1e-10 * e.max(1.0));
        }
    }
}

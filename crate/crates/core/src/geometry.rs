//! Floating-point primitives for points on unit spheres: angles, chordal
//! distances, hyperplane sections and projections along a line.
//!
//! Inner products are clamped to `[-1, 1]` before `acos`, so antipodal and
//! coincident points never produce `NaN`.
//!
//! Note on naming: the identity `cos φ = 1 - dist² / 2` holds for the
//! *chordal* (Euclidean) distance between unit vectors, which is what
//! [`chordal_distance`] returns. The geodesic distance is [`angle_between`].

use crate::error::{Error, Result};

/// Tolerance on `|‖x‖ - 1|` accepted when validating unit vectors.
pub const EPS_UNIT: f64 = 1e-12;
/// Tolerance used when comparing angles (and for point-distinctness checks).
pub const EPS_ANGLE: f64 = 1e-9;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A point of `S^{n-1} ⊂ R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Validates that `coords` has unit norm within [`EPS_UNIT`].
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(coords, EPS_UNIT)
    }

    pub fn with_tolerance(coords: Vec<f64>, tolerance: f64) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
        }
        let n = norm(&coords);
        if !n.is_finite() || (n - 1.0).abs() > tolerance {
            return Err(Error::NotUnit { norm: n, tolerance });
        }
        Ok(UnitVector(coords))
    }

    /// Rescales a nonzero vector onto the sphere.
    pub fn normalize(mut coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
        }
        let n = norm(&coords);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        coords.iter_mut().for_each(|c| *c /= n);
        Ok(UnitVector(coords))
    }

    /// The `i`-th standard basis vector of `R^dim`.
    pub fn axis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "axis index {i} out of range for dimension {dim}");
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn negated(&self) -> Self {
        UnitVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

fn check_dims(x: &UnitVector, y: &UnitVector) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    Ok(())
}

/// `cos φ(x, y) = ⟨x, y⟩`, clamped to `[-1, 1]`.
pub fn cos_between(x: &UnitVector, y: &UnitVector) -> Result<f64> {
    check_dims(x, y)?;
    Ok(x.dot(y).clamp(-1.0, 1.0))
}

/// Angle in `[0, π]` between two points of the same sphere.
pub fn angle_between(x: &UnitVector, y: &UnitVector) -> Result<f64> {
    cos_between(x, y).map(f64::acos)
}

/// Euclidean distance `√(2 - 2 cos φ)` between two unit vectors.
pub fn chordal_distance(x: &UnitVector, y: &UnitVector) -> Result<f64> {
    cos_between(x, y).map(|c| (2.0 - 2.0 * c).max(0.0).sqrt())
}

/// Minimum pairwise angle of a finite point set together with a pair
/// realizing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinAngle {
    pub angle: f64,
    pub cos: f64,
    pub pair: (usize, usize),
}

/// Scans all unordered pairs. Ties keep the lexicographically first pair.
pub fn min_angle(points: &[UnitVector]) -> Result<MinAngle> {
    if points.len() < 2 {
        return Err(Error::DegenerateCode(format!(
            "minimum angle needs at least 2 points, got {}",
            points.len()
        )));
    }
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.dim(),
            });
        }
    }
    let mut best = f64::NEG_INFINITY;
    let mut pair = (0, 1);
    for i in 0..points.len() {
        let xi = points[i].coords();
        for (j, pj) in points.iter().enumerate().skip(i + 1) {
            let c = dot(xi, pj.coords());
            if c > best {
                best = c;
                pair = (i, j);
            }
        }
    }
    let cos = best.clamp(-1.0, 1.0);
    Ok(MinAngle {
        angle: cos.acos(),
        cos,
        pair,
    })
}

/// Radius `√(1 - h²)` of the section of the unit sphere by a hyperplane at
/// distance `h` from the origin.
pub fn section_radius(h: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&h) {
        return Err(Error::OutOfRange {
            name: "h",
            value: h,
            range: "[0, 1)",
        });
    }
    Ok((1.0 - h * h).sqrt())
}

/// Affine hyperplane `{y : ⟨y, normal⟩ = offset}` with `0 ≤ offset < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: UnitVector,
    offset: f64,
}

impl Hyperplane {
    pub fn new(normal: UnitVector, offset: f64) -> Result<Self> {
        section_radius(offset)?;
        Ok(Hyperplane { normal, offset })
    }

    /// Hyperplane whose section has squared radius `lambda`, normal along the
    /// last axis of `R^dim`.
    pub fn with_squared_radius(dim: usize, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: "(0, 1]",
            });
        }
        Hyperplane::new(UnitVector::axis(dim, dim - 1), (1.0 - lambda).sqrt())
    }

    pub fn normal(&self) -> &UnitVector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `ρ_H`.
    pub fn section_radius(&self) -> f64 {
        (1.0 - self.offset * self.offset).sqrt()
    }
}

/// Oriented line `ℓ` through the origin; its orthogonal hyperplane is `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineThroughOrigin {
    direction: UnitVector,
}

impl LineThroughOrigin {
    pub fn new(direction: UnitVector) -> Self {
        LineThroughOrigin { direction }
    }

    pub fn from_vector(v: Vec<f64>) -> Result<Self> {
        UnitVector::normalize(v).map(Self::new)
    }

    pub fn direction(&self) -> &UnitVector {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }
}

/// Orthonormal basis of the hyperplane orthogonal to `normal`.
///
/// The standard basis vectors other than the one at the pivot (the
/// largest-magnitude coordinate of `normal`) are orthogonalized against
/// `normal` and each other, with a second Gram-Schmidt pass for stability.
/// The result depends only on `normal`.
pub fn orthonormal_complement(normal: &[f64]) -> Vec<Vec<f64>> {
    let n = normal.len();
    let pivot = normal
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, c)| if c.abs() > acc.1 { (i, c.abs()) } else { acc })
        .0;
    let unit: Vec<f64> = {
        let nn = norm(normal);
        normal.iter().map(|c| c / nn).collect()
    };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(1));
    for j in (0..n).filter(|&j| j != pivot) {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        for _ in 0..2 {
            let c = dot(&v, &unit);
            v.iter_mut().zip(&unit).for_each(|(a, b)| *a -= c * b);
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(a, bb)| *a -= c * bb);
            }
        }
        let nv = norm(&v);
        v.iter_mut().for_each(|a| *a /= nv);
        basis.push(v);
    }
    basis
}

/// Result of projecting a unit vector onto `L = ℓ^⊥` and renormalizing.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// The normalized image, in the coordinates of the hyperplane basis.
    pub point: UnitVector,
    /// `v_ℓ = ⟨x, direction⟩`.
    pub axial: f64,
    /// `‖P_L(x)‖`, the distance of `x` from the line.
    pub norm: f64,
}

/// Coordinates on the hyperplane orthogonal to a line.
#[derive(Debug, Clone)]
pub struct HyperplaneFrame {
    line: LineThroughOrigin,
    basis: Vec<Vec<f64>>,
}

impl HyperplaneFrame {
    pub fn new(line: LineThroughOrigin) -> Self {
        let basis = orthonormal_complement(line.direction().coords());
        HyperplaneFrame { line, basis }
    }

    /// Uses a caller-supplied orthonormal basis of `ℓ^⊥`.
    pub fn with_basis(line: LineThroughOrigin, basis: Vec<Vec<f64>>) -> Result<Self> {
        let n = line.dim();
        if basis.len() + 1 != n || basis.iter().any(|b| b.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                actual: basis.len(),
            });
        }
        Ok(HyperplaneFrame { line, basis })
    }

    pub fn line(&self) -> &LineThroughOrigin {
        &self.line
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Hyperplane coordinates of `x - ⟨x, ℓ⟩ℓ`, unnormalized, plus `v_ℓ`.
    pub fn project_raw(&self, x: &UnitVector) -> Result<(Vec<f64>, f64)> {
        check_dims(x, self.line.direction())?;
        let axial = x.dot(self.line.direction());
        let coords = self.basis.iter().map(|b| dot(b, x.coords())).collect();
        Ok((coords, axial))
    }

    pub fn project(&self, x: &UnitVector) -> Result<Projection> {
        let (coords, axial) = self.project_raw(x)?;
        let n = norm(&coords);
        if n <= EPS_UNIT || coords.is_empty() {
            return Err(Error::PointOnAxis { index: 0 });
        }
        let point = UnitVector(coords.into_iter().map(|c| c / n).collect());
        Ok(Projection {
            point,
            axial,
            norm: n,
        })
    }
}

/// Orthogonal projection onto `ℓ^⊥` followed by normalization, expressed in
/// the deterministic basis of [`orthonormal_complement`].
pub fn project_and_normalize(x: &UnitVector, line: &LineThroughOrigin) -> Result<Projection> {
    if line.dim() < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            actual: line.dim(),
        });
    }
    HyperplaneFrame::new(line.clone()).project(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn uv(c: &[f64]) -> UnitVector {
        UnitVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn angle_identities() {
        let x = uv(&[1.0, 0.0]);
        let y = uv(&[0.0, 1.0]);
        assert_eq!(angle_between(&x, &x).unwrap(), 0.0);
        assert_eq!(angle_between(&x, &x.negated()).unwrap(), PI);
        assert!((angle_between(&x, &y).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((chordal_distance(&x, &y).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let x = uv(&[1.0, 0.0]);
        let y = uv(&[0.0, 0.0, 1.0]);
        assert!(matches!(
            angle_between(&x, &y),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_unit() {
        assert!(UnitVector::new(vec![1.0, 1.0]).is_err());
        assert!(UnitVector::new(vec![]).is_err());
        assert!(UnitVector::normalize(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn min_angle_small_configurations() {
        let s = FRAC_1_SQRT_2;
        let square = [uv(&[s, s]), uv(&[-s, s]), uv(&[-s, -s]), uv(&[s, -s])];
        assert!((min_angle(&square).unwrap().angle - FRAC_PI_2).abs() < 1e-12);

        let tri: Vec<_> = (0..3)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 3.0;
                uv(&[t.cos(), t.sin()])
            })
            .collect();
        assert!((min_angle(&tri).unwrap().angle - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!(matches!(
            min_angle(&square[..1]),
            Err(Error::DegenerateCode(_))
        ));
    }

    #[test]
    fn section_radius_values() {
        assert_eq!(section_radius(0.0).unwrap(), 1.0);
        assert!((section_radius(0.6).unwrap() - 0.8).abs() < 1e-15);
        let h = 1.0 / 3f64.sqrt();
        assert!((section_radius(h).unwrap().powi(2) - 2.0 / 3.0).abs() < 1e-15);
        assert!(section_radius(1.0).is_err());
        assert!(section_radius(-0.1).is_err());
    }

    #[test]
    fn projection_examples() {
        let s = FRAC_1_SQRT_2;
        let z = LineThroughOrigin::new(UnitVector::axis(3, 2));
        let p = project_and_normalize(&uv(&[s, 0.0, s]), &z).unwrap();
        assert!((p.axial - s).abs() < 1e-15);
        assert!((p.point.coords()[0] - 1.0).abs() < 1e-15);
        assert!(p.point.coords()[1].abs() < 1e-15);

        let q = project_and_normalize(&uv(&[0.0, 1.0, 0.0]), &z).unwrap();
        assert_eq!(q.axial, 0.0);
        assert!((q.point.coords()[1] - 1.0).abs() < 1e-15);

        assert!(matches!(
            project_and_normalize(&UnitVector::axis(3, 2), &z),
            Err(Error::PointOnAxis { .. })
        ));
    }

    #[test]
    fn complement_is_orthonormal() {
        let normal = [0.3, -0.2, 0.9, 0.1];
        let b = orthonormal_complement(&normal);
        assert_eq!(b.len(), 3);
        for (i, bi) in b.iter().enumerate() {
            assert!(dot(bi, &normal).abs() < 1e-14);
            for (j, bj) in b.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((dot(bi, bj) - e).abs() < 1e-14);
            }
        }
    }
}

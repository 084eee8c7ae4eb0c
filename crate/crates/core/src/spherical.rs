//! Spherical codes `X ⊂ S^{n-1}` and the three spoiling operations:
//!
//! * first spoiling: embed `S^{n-1}` as a hyperplane section of `S^n`,
//!   which maps every inner product `c` to `ρ²c + 1 - ρ²`;
//! * second spoiling: project along a line `ℓ` onto `ℓ^⊥` and renormalize;
//! * third spoiling: keep the points in one hemisphere cut out by `ℓ^⊥`.
//!
//! The composite pipelines at the end chain them to move a code point in
//! prescribed directions of the `(R, cos φ)` plane.

use std::f64::consts::FRAC_PI_2;

use log::warn;
use rand::Rng;

use crate::bounds::kl_bound;
use crate::error::{Error, Result};
use crate::geometry::{
    dot, min_angle, norm, orthonormal_complement, HyperplaneFrame, Hyperplane, LineThroughOrigin,
    MinAngle, UnitVector, EPS_ANGLE, EPS_UNIT,
};
use crate::numfmt::g17;
use crate::random::{self, random_orthogonal, random_unit};

/// A finite set of distinct points on `S^{n-1}`.
///
/// Single-point codes are representable (spoiling can produce them), but
/// every accessor that needs the minimum angle fails on them.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCode {
    dim: usize,
    points: Vec<UnitVector>,
    min: Option<MinAngle>,
}

/// `(R, cos φ)` with `R = log₂(card) / n`, plus the parameters it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCodePoint {
    pub rate: f64,
    pub cos_phi: f64,
    pub phi: f64,
    pub n: usize,
    pub card: usize,
}

impl SphericalCodePoint {
    pub fn k(&self) -> f64 {
        (self.card as f64).log2()
    }
}

impl SphericalCode {
    /// Validates common dimension and pairwise distinctness (chordal
    /// distance above [`EPS_ANGLE`]) and caches the minimum angle.
    pub fn new(points: Vec<UnitVector>) -> Result<Self> {
        let dim = points.first().ok_or(Error::Empty("spherical code"))?.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.dim(),
            });
        }
        let min = if points.len() >= 2 {
            let m = min_angle(&points)?;
            let (i, j) = m.pair;
            let gap: f64 = points[i]
                .coords()
                .iter()
                .zip(points[j].coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if gap <= EPS_ANGLE {
                return Err(Error::DuplicatePoint(i, j));
            }
            Some(m)
        } else {
            None
        };
        Ok(SphericalCode { dim, points, min })
    }

    /// Builds a code from raw rows, rescaling each to unit length.
    pub fn from_rows_normalized(rows: Vec<Vec<f64>>) -> Result<Self> {
        let pts = rows
            .into_iter()
            .map(UnitVector::normalize)
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }

    /// Collapses points closer than [`EPS_ANGLE`] to the first of their
    /// cluster. Returns the code and the number of points dropped.
    fn merging(points: Vec<UnitVector>) -> Result<(Self, usize)> {
        let total = points.len();
        let mut kept: Vec<UnitVector> = Vec::with_capacity(total);
        for p in points {
            let dup = kept.iter().any(|q| {
                q.coords()
                    .iter()
                    .zip(p.coords())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= EPS_ANGLE
            });
            if !dup {
                kept.push(p);
            }
        }
        let dropped = total - kept.len();
        Ok((Self::new(kept)?, dropped))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn card(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[UnitVector] {
        &self.points
    }

    fn degenerate(&self) -> Error {
        Error::DegenerateCode(format!(
            "minimum angle undefined for a code with {} point(s)",
            self.card()
        ))
    }

    pub fn min_angle(&self) -> Result<MinAngle> {
        self.min.ok_or_else(|| self.degenerate())
    }

    pub fn phi(&self) -> Result<f64> {
        self.min_angle().map(|m| m.angle)
    }

    pub fn cos_phi(&self) -> Result<f64> {
        self.min_angle().map(|m| m.cos)
    }

    /// `k = log₂ card`.
    pub fn k(&self) -> f64 {
        (self.card() as f64).log2()
    }

    /// `R = k / n`.
    pub fn rate(&self) -> f64 {
        self.k() / self.dim as f64
    }

    pub fn code_point(&self) -> Result<SphericalCodePoint> {
        let m = self.min_angle()?;
        Ok(SphericalCodePoint {
            rate: self.rate(),
            cos_phi: m.cos,
            phi: m.angle,
            n: self.dim,
            card: self.card(),
        })
    }

    /// Every pairwise inner product `⟨x_i, x_j⟩` for `i < j`, row-major.
    pub fn pairwise_cosines(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.card() * (self.card().saturating_sub(1)) / 2);
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                out.push(a.dot(b).clamp(-1.0, 1.0));
            }
        }
        out
    }

    /// Embeds the code in `R^{dim + extra}` by appending zero coordinates.
    pub fn padded(&self, extra: usize) -> SphericalCode {
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut c = p.coords().to_vec();
                c.resize(self.dim + extra, 0.0);
                UnitVector::new(c).expect("padding preserves the norm")
            })
            .collect();
        SphericalCode {
            dim: self.dim + extra,
            points,
            min: self.min,
        }
    }

    /// Parses the text format: a `dim <n>` header, then one point per line
    /// as `n` whitespace-separated decimals. `#` lines are comments. Norms
    /// must be within `1e-9` of 1 unless `normalize` is set.
    pub fn parse(text: &str, normalize: bool) -> Result<Self> {
        let mut dim = None;
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(n) = dim else {
                let mut it = line.split_whitespace();
                match (it.next(), it.next(), it.next()) {
                    (Some("dim"), Some(v), None) => {
                        let n: usize = v
                            .parse()
                            .map_err(|_| Error::parse(lineno, format!("bad dimension {v:?}")))?;
                        if n == 0 {
                            return Err(Error::parse(lineno, "dimension must be positive"));
                        }
                        dim = Some(n);
                        continue;
                    }
                    _ => return Err(Error::parse(lineno, "expected header `dim <n>`")),
                }
            };
            let coords = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::parse(lineno, format!("bad number {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != n {
                return Err(Error::parse(
                    lineno,
                    format!("expected {n} coordinates, found {}", coords.len()),
                ));
            }
            let p = if normalize {
                UnitVector::normalize(coords)
            } else {
                UnitVector::with_tolerance(coords, 1e-9)
            }
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
            points.push(p);
        }
        if dim.is_none() {
            return Err(Error::parse(0, "missing `dim <n>` header"));
        }
        SphericalCode::new(points)
    }

    /// Inverse of [`SphericalCode::parse`], 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\n", self.dim);
        for p in &self.points {
            let row: Vec<String> = p.coords().iter().map(|&c| g17(c)).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

fn warn_large_angle(code: &SphericalCode, what: &str) {
    if let Ok(phi) = code.phi() {
        if phi > FRAC_PI_2 + EPS_ANGLE {
            warn!("{what}: minimum angle {phi} lies outside the small-angle range");
        }
    }
}

// ---------------------------------------------------------------------------
// First spoiling
// ---------------------------------------------------------------------------

/// Maps `X ⊂ S^{n-1}` onto the section `H ∩ S^n`: each point goes to
/// `ρ_H·ι(x) + h·normal`, where `ι` expresses `R^n` in an orthonormal basis
/// of `normal^⊥`.
pub fn spoil1(code: &SphericalCode, h: &Hyperplane) -> Result<SphericalCode> {
    if h.dim() != code.dim() + 1 {
        return Err(Error::DimensionMismatch {
            expected: code.dim() + 1,
            actual: h.dim(),
        });
    }
    let basis = orthonormal_complement(h.normal().coords());
    let rho = h.section_radius();
    let offset = h.offset();
    let points = code
        .points()
        .iter()
        .map(|x| {
            let mut y: Vec<f64> = h.normal().coords().iter().map(|c| offset * c).collect();
            for (xi, b) in x.coords().iter().zip(&basis) {
                y.iter_mut().zip(b).for_each(|(a, bb)| *a += rho * xi * bb);
            }
            UnitVector::normalize(y)
        })
        .collect::<Result<Vec<_>>>()?;
    SphericalCode::new(points)
}

/// First spoiling through the hyperplane whose section has `ρ² = λ`; the
/// minimum-angle cosine becomes `λ cos φ + 1 - λ`.
pub fn spoil1_lambda(code: &SphericalCode, lambda: f64) -> Result<SphericalCode> {
    if lambda == 0.0 {
        return Err(Error::Collapse);
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "[0, 1]",
        });
    }
    let h = Hyperplane::with_squared_radius(code.dim() + 1, lambda)?;
    spoil1(code, &h)
}

// ---------------------------------------------------------------------------
// Second spoiling
// ---------------------------------------------------------------------------

/// Result of a second spoiling.
#[derive(Debug, Clone)]
pub struct Spoil2Outcome {
    pub code: SphericalCode,
    /// `ξ = min_x ‖P_L(x)‖`, the distance of the code from the line.
    pub xi: f64,
    /// `u = (1 - ξ²) / ξ²`.
    pub u: f64,
    /// `⟨x, ℓ⟩` for every input point, in input order.
    pub axial: Vec<f64>,
    /// Number of input points that landed on an already occupied ray.
    pub merged: usize,
}

/// Projects every point onto `ℓ^⊥` and renormalizes, in the deterministic
/// basis of [`orthonormal_complement`]. Coinciding images are merged.
pub fn spoil2(code: &SphericalCode, line: &LineThroughOrigin) -> Result<Spoil2Outcome> {
    spoil2_in_frame(code, &HyperplaneFrame::new(line.clone()))
}

/// [`spoil2`] with an explicit basis of the target hyperplane.
pub fn spoil2_in_frame(code: &SphericalCode, frame: &HyperplaneFrame) -> Result<Spoil2Outcome> {
    if code.dim() < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            actual: code.dim(),
        });
    }
    if frame.line().dim() != code.dim() {
        return Err(Error::DimensionMismatch {
            expected: code.dim(),
            actual: frame.line().dim(),
        });
    }
    let mut xi = f64::INFINITY;
    let mut axial = Vec::with_capacity(code.card());
    let mut images = Vec::with_capacity(code.card());
    for (index, x) in code.points().iter().enumerate() {
        let p = frame.project(x).map_err(|e| match e {
            Error::PointOnAxis { .. } => Error::PointOnAxis { index },
            other => other,
        })?;
        xi = xi.min(p.norm);
        axial.push(p.axial);
        images.push(p.point);
    }
    let (projected, merged) = SphericalCode::merging(images)?;
    if merged > 0 {
        warn!("second spoiling merged {merged} point(s) onto shared rays");
    }
    if projected.card() < 2 && code.card() >= 2 {
        return Err(Error::DegenerateCode(format!(
            "projection collapsed {} points to one",
            code.card()
        )));
    }
    Ok(Spoil2Outcome {
        code: projected,
        xi,
        u: (1.0 - xi * xi) / (xi * xi),
        axial,
        merged,
    })
}

/// `(1 + u) cos φ + u`: pairs at distance `ξ` from `ℓ` on opposite sides.
pub fn projected_cos_opposite(cos_phi: f64, u: f64) -> f64 {
    (1.0 + u) * cos_phi + u
}

/// `(1 + u) cos φ - u`: pairs at distance `ξ` from `ℓ` on the same side
/// (in particular when `ℓ` bisects the pair).
pub fn projected_cos_same_side(cos_phi: f64, u: f64) -> f64 {
    (1.0 + u) * cos_phi - u
}

/// Exact inner product of the projected-normalized images of two unit
/// vectors with axial components `vx`, `vy`:
/// `(cos θ - v_x v_y) / (√(1-v_x²) √(1-v_y²))`.
pub fn projected_pair_cos(cos_theta: f64, vx: f64, vy: f64) -> f64 {
    (cos_theta - vx * vy) / ((1.0 - vx * vx).sqrt() * (1.0 - vy * vy).sqrt())
}

// ---------------------------------------------------------------------------
// Third spoiling
// ---------------------------------------------------------------------------

/// One of the two half-spaces bounded by `ℓ^⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hemisphere {
    /// `⟨x, ℓ⟩ ≥ 0`.
    NonNegative,
    /// `⟨x, ℓ⟩ < 0`.
    Negative,
}

impl Hemisphere {
    pub fn contains(self, axial: f64) -> bool {
        match self {
            Hemisphere::NonNegative => axial >= 0.0,
            Hemisphere::Negative => axial < 0.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Hemisphere::NonNegative => "non-negative",
            Hemisphere::Negative => "negative",
        }
    }
}

/// The subcode `X ∩ {⟨x, ℓ⟩ ≥ 0}` or `X ∩ {⟨x, ℓ⟩ < 0}`.
pub fn spoil3(code: &SphericalCode, line: &LineThroughOrigin, side: Hemisphere) -> Result<SphericalCode> {
    if line.dim() != code.dim() {
        return Err(Error::DimensionMismatch {
            expected: code.dim(),
            actual: line.dim(),
        });
    }
    let pts: Vec<UnitVector> = code
        .points()
        .iter()
        .filter(|x| side.contains(x.dot(line.direction())))
        .cloned()
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptyHemisphere(side.name()));
    }
    // A subset of a valid code is valid; reuse the checks for the cache.
    SphericalCode::new(pts)
}

/// A line together with the hemisphere holding `c` points, where
/// `card/2 ≤ c < card`.
#[derive(Debug, Clone)]
pub struct BalancedLine {
    pub line: LineThroughOrigin,
    pub side: Hemisphere,
    pub count: usize,
    /// Some point lies within [`EPS_UNIT`] of the separating hyperplane.
    pub touches_boundary: bool,
}

fn split_counts(code: &SphericalCode, dir: &[f64]) -> (usize, usize, bool) {
    let mut plus = 0;
    let mut touch = false;
    for p in code.points() {
        let v = dot(p.coords(), dir);
        if v >= 0.0 {
            plus += 1;
        }
        if v.abs() <= EPS_UNIT {
            touch = true;
        }
    }
    (plus, code.card() - plus, touch)
}

fn balanced_choice(code: &SphericalCode, dir: UnitVector) -> Option<BalancedLine> {
    let (plus, minus, touch) = split_counts(code, dir.coords());
    let (side, count) = if plus >= minus {
        (Hemisphere::NonNegative, plus)
    } else {
        (Hemisphere::Negative, minus)
    };
    (count < code.card()).then(|| BalancedLine {
        line: LineThroughOrigin::new(dir),
        side,
        count,
        touches_boundary: touch,
    })
}

/// Finds `ℓ` and a hemisphere with `card/2 ≤ c < card` points.
///
/// Candidates are tried in a fixed order: the code points themselves,
/// normalized midpoints of pairs, normalized differences of pairs, then
/// `10·card·n` directions drawn from `seed`. A candidate with no point on
/// the separating hyperplane wins immediately; otherwise the first valid
/// boundary-touching candidate is returned.
pub fn find_balanced_line(code: &SphericalCode, seed: u64) -> Result<BalancedLine> {
    if code.card() < 2 {
        return Err(code.degenerate());
    }
    let pts = code.points();
    let mut fallback: Option<BalancedLine> = None;
    let consider = |dir: UnitVector, fallback: &mut Option<BalancedLine>| -> Option<BalancedLine> {
        let choice = balanced_choice(code, dir)?;
        if !choice.touches_boundary {
            return Some(choice);
        }
        if fallback.is_none() {
            *fallback = Some(choice);
        }
        None
    };
    for p in pts {
        if let Some(b) = consider(p.clone(), &mut fallback) {
            return Ok(b);
        }
    }
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let mid: Vec<f64> = a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect();
            if let Ok(dir) = UnitVector::normalize(mid) {
                if let Some(r) = consider(dir, &mut fallback) {
                    return Ok(r);
                }
            }
        }
    }
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let diff: Vec<f64> = a.coords().iter().zip(b.coords()).map(|(x, y)| x - y).collect();
            if let Ok(dir) = UnitVector::normalize(diff) {
                if let Some(r) = consider(dir, &mut fallback) {
                    return Ok(r);
                }
            }
        }
    }
    if let Some(b) = fallback.take() {
        return Ok(b);
    }
    let trials = 10 * code.card() * code.dim();
    let mut rng = random::rng(seed);
    for _ in 0..trials {
        if let Some(b) = consider(random_unit(code.dim(), &mut rng), &mut fallback) {
            return Ok(b);
        }
    }
    fallback.ok_or(Error::SearchExhausted { trials })
}

/// Applies [`find_balanced_line`] and keeps the chosen hemisphere.
pub fn spoil3_balanced(code: &SphericalCode, seed: u64) -> Result<(SphericalCode, BalancedLine)> {
    let b = find_balanced_line(code, seed)?;
    let sub = spoil3(code, &b.line, b.side)?;
    Ok((sub, b))
}

// ---------------------------------------------------------------------------
// Line selection for the composite pipelines
// ---------------------------------------------------------------------------

/// Unit vectors orthogonal to every point of the code (empty when the code
/// spans `R^n`).
fn null_directions(code: &SphericalCode) -> Vec<UnitVector> {
    let n = code.dim();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let reduce = |v: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for _ in 0..2 {
            for b in basis {
                let c = dot(v, b);
                v.iter_mut().zip(b).for_each(|(a, bb)| *a -= c * bb);
            }
        }
    };
    for p in code.points() {
        let mut v = p.coords().to_vec();
        reduce(&mut v, &basis);
        let nv = norm(&v);
        if nv > 1e-9 {
            v.iter_mut().for_each(|a| *a /= nv);
            basis.push(v);
        }
        if basis.len() == n {
            return Vec::new();
        }
    }
    let span = basis.len();
    let mut out = Vec::new();
    for j in 0..n {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        reduce(&mut v, &basis);
        let nv = norm(&v);
        if nv > 1e-6 {
            v.iter_mut().for_each(|a| *a /= nv);
            basis.push(v.clone());
            out.push(UnitVector::normalize(v).expect("nonzero"));
        }
        if basis.len() == n || out.len() == n - span {
            break;
        }
    }
    out
}

fn max_cos(points: &[UnitVector]) -> f64 {
    min_angle(points).map(|m| m.cos).unwrap_or(1.0)
}

/// Pairs `(i, j)` sorted by decreasing inner product, at most `limit`.
fn closest_pairs(code: &SphericalCode, limit: usize) -> Vec<(usize, usize)> {
    let pts = code.points();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            pairs.push((pts[i].dot(&pts[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs.into_iter().take(limit).map(|(_, i, j)| (i, j)).collect()
}

fn projection_candidates<R: Rng>(code: &SphericalCode, rng: &mut R) -> Vec<UnitVector> {
    let n = code.dim();
    let pts = code.points();
    let mut c = null_directions(code);
    c.extend((0..n).map(|i| UnitVector::axis(n, i)));
    for (i, j) in closest_pairs(code, 16) {
        let mid: Vec<f64> = pts[i].coords().iter().zip(pts[j].coords()).map(|(a, b)| a + b).collect();
        if let Ok(u) = UnitVector::normalize(mid) {
            c.push(u);
        }
    }
    c.extend((0..32).map(|_| random_unit(n, rng)));
    c
}

/// Chooses `ℓ` minimizing the largest inner product after projection and
/// applies the second spoiling along it.
pub fn spoil2_best<R: Rng>(code: &SphericalCode, rng: &mut R) -> Result<Spoil2Outcome> {
    if code.dim() < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            actual: code.dim(),
        });
    }
    let mut best: Option<(f64, Spoil2Outcome)> = None;
    for dir in projection_candidates(code, rng) {
        let Ok(out) = spoil2(code, &LineThroughOrigin::new(dir)) else {
            continue;
        };
        if out.merged > 0 {
            continue;
        }
        let score = max_cos(out.code.points());
        if best.as_ref().is_none_or(|(s, _)| score < *s - 1e-15) {
            best = Some((score, out));
        }
    }
    best.map(|(_, o)| o).ok_or_else(|| {
        Error::DegenerateCode("no projection line keeps the points distinct".into())
    })
}

/// Line whose hemispheres split the code exactly in half, found by rotating
/// `start` towards `-start` through `toward` and stopping between the
/// crossing events where the non-negative side holds `card/2` points.
fn rotation_halving(code: &SphericalCode, start: &UnitVector, toward: &UnitVector) -> Option<UnitVector> {
    let card = code.card();
    if card % 2 != 0 {
        return None;
    }
    // ℓ(θ) = cos θ·start + sin θ·toward, θ ∈ [0, π]; ⟨x, ℓ(θ)⟩ = a cos θ + b sin θ.
    let ab: Vec<(f64, f64)> = code
        .points()
        .iter()
        .map(|p| (dot(p.coords(), start.coords()), dot(p.coords(), toward.coords())))
        .collect();
    let mut events: Vec<f64> = ab
        .iter()
        .map(|&(a, b)| {
            // zero of a cos θ + b sin θ in (0, π)
            let t = (-a).atan2(b);
            if t < 0.0 {
                t + std::f64::consts::PI
            } else {
                t
            }
        })
        .collect();
    events.push(0.0);
    events.push(std::f64::consts::PI);
    events.sort_by(f64::total_cmp);
    for w in events.windows(2) {
        if w[1] - w[0] < 1e-9 {
            continue;
        }
        let t = 0.5 * (w[0] + w[1]);
        let (s, c) = t.sin_cos();
        let dir: Vec<f64> = start
            .coords()
            .iter()
            .zip(toward.coords())
            .map(|(x, y)| c * x + s * y)
            .collect();
        let Ok(dir) = UnitVector::normalize(dir) else {
            continue;
        };
        let (plus, _, touch) = split_counts(code, dir.coords());
        if plus == card / 2 && !touch {
            return Some(dir);
        }
    }
    None
}

/// Third spoiling that halves the code exactly when `card` is even (falling
/// back to [`find_balanced_line`] otherwise), choosing among candidate lines
/// the half with the smallest maximal inner product.
pub fn spoil3_halving<R: Rng>(code: &SphericalCode, rng: &mut R) -> Result<SphericalCode> {
    if code.card() < 2 {
        return Err(code.degenerate());
    }
    let n = code.dim();
    let pts = code.points();
    let mut dirs: Vec<UnitVector> = (0..n).map(|i| UnitVector::axis(n, i)).collect();
    dirs.extend(pts.iter().cloned());
    for (i, j) in closest_pairs(code, 16) {
        let d: Vec<f64> = pts[i].coords().iter().zip(pts[j].coords()).map(|(a, b)| a - b).collect();
        if let Ok(u) = UnitVector::normalize(d) {
            dirs.push(u);
        }
    }
    dirs.extend((0..16).map(|_| random_unit(n, rng)));
    let mut rotated = Vec::new();
    for start in dirs.iter().take(n + 8) {
        let toward = random_orthogonal(start, rng);
        if let Some(d) = rotation_halving(code, start, &toward) {
            rotated.push(d);
        }
    }
    dirs.extend(rotated);

    let half = code.card() / 2;
    let mut best: Option<(f64, SphericalCode)> = None;
    if code.card() % 2 == 0 {
        for dir in dirs {
            let (plus, _, touch) = split_counts(code, dir.coords());
            if plus != half || touch {
                continue;
            }
            let line = LineThroughOrigin::new(dir);
            for side in [Hemisphere::NonNegative, Hemisphere::Negative] {
                let sub = spoil3(code, &line, side)?;
                let score = max_cos(sub.points());
                if best.as_ref().is_none_or(|(s, _)| score < *s - 1e-15) {
                    best = Some((score, sub));
                }
            }
        }
    }
    match best {
        Some((_, sub)) => Ok(sub),
        None => spoil3_balanced(code, rng.random()).map(|(c, _)| c),
    }
}

// ---------------------------------------------------------------------------
// Composite pipelines
// ---------------------------------------------------------------------------

/// Code parameters `[n, k, cos φ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeParams {
    pub n: usize,
    pub k: f64,
    pub cos_phi: f64,
}

impl CodeParams {
    pub fn of(code: &SphericalCode) -> Result<Self> {
        Ok(CodeParams {
            n: code.dim(),
            k: code.k(),
            cos_phi: code.cos_phi()?,
        })
    }

    /// Largest deviation in `k` and `cos φ`; `∞` on dimension mismatch.
    pub fn deviation(&self, other: &CodeParams) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        (self.k - other.k).abs().max((self.cos_phi - other.cos_phi).abs())
    }
}

/// Sign choice in `(1 + u) cos φ ± u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionSign {
    /// `+u`: a closest pair straddles the hyperplane `ℓ^⊥`.
    Opposite,
    /// `-u`: a closest pair lies on one side (e.g. `ℓ` bisects it).
    SameSide,
}

/// The three numerical-spoiling templates.
#[derive(Debug, Clone)]
pub enum SpoilTemplate {
    /// `[n + 1, k, λ cos φ + 1 - λ]`.
    Lift { lambda: f64 },
    /// `[n - 1, k, (1 + u) cos φ ± u]` along the given line.
    Project {
        line: LineThroughOrigin,
        sign: ProjectionSign,
    },
    /// `[n - 1, k - a, cos φ]`.
    Reduce { a: usize },
}

/// A pipeline result: the code, the parameters the template asked for, and
/// what the code actually has.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub code: SphericalCode,
    pub target: CodeParams,
    pub achieved: CodeParams,
    /// `λ` of the final first spoiling, if any.
    pub lambda: Option<f64>,
    /// `u` of the (last) second spoiling, if any.
    pub u: Option<f64>,
    pub steps: Vec<String>,
}

impl PipelineOutcome {
    pub fn deviation(&self) -> f64 {
        self.target.deviation(&self.achieved)
    }
}

fn lambda_for(target_cos: f64, cos_pp: f64) -> Result<f64> {
    if 1.0 - cos_pp < 1e-12 {
        return Err(Error::LambdaOutOfRange {
            lambda: f64::NAN,
            reason: "intermediate code has cos φ'' = 1".into(),
        });
    }
    let lambda = (1.0 - target_cos) / (1.0 - cos_pp);
    if !(lambda > 0.0 && lambda <= 1.0 + 1e-12) {
        return Err(Error::LambdaOutOfRange {
            lambda,
            reason: format!(
                "target cos φ = {target_cos} must lie in [cos φ'' = {cos_pp}, 1)"
            ),
        });
    }
    Ok(lambda.min(1.0))
}

/// Halve `halvings` times, project twice, then lift with the `λ` that lands
/// on `target_cos`. Shared by the reduce template and the spoil-down
/// composite.
fn reduce_pipeline(
    code: &SphericalCode,
    halvings: usize,
    target_cos: f64,
    seed: u64,
) -> Result<(SphericalCode, f64, f64, Vec<String>)> {
    if code.dim() < 3 {
        return Err(Error::DimensionTooSmall {
            min: 3,
            actual: code.dim(),
        });
    }
    let mut rng = random::rng(seed);
    let mut steps = Vec::new();
    let mut cur = code.clone();
    for _ in 0..halvings {
        cur = spoil3_halving(&cur, &mut rng)?;
        steps.push(format!("third spoiling -> card {}", cur.card()));
        if cur.card() < 2 {
            return Err(Error::DegenerateCode(
                "halving left a single point".into(),
            ));
        }
    }
    let mut u = 0.0;
    for _ in 0..2 {
        let out = spoil2_best(&cur, &mut rng)?;
        u = out.u;
        cur = out.code;
        steps.push(format!(
            "second spoiling (u = {u}) -> dim {}, cos {}",
            cur.dim(),
            cur.cos_phi()?
        ));
    }
    let cos_pp = cur.cos_phi()?;
    let lambda = lambda_for(target_cos, cos_pp)?;
    let out = spoil1_lambda(&cur, lambda)?;
    steps.push(format!("first spoiling (lambda = {lambda}) -> dim {}", out.dim()));
    Ok((out, lambda, u, steps))
}

/// Realizes one of the numerical-spoiling templates and recomputes the
/// parameters of the result.
///
/// The reduce template asks for `k - a` exactly, which a hemisphere split
/// can only deliver when `card` is divisible by `2^a`; otherwise the
/// achieved `k` is the larger balanced value.
pub fn numerical_spoil(code: &SphericalCode, template: &SpoilTemplate, seed: u64) -> Result<PipelineOutcome> {
    let p = CodeParams::of(code)?;
    warn_large_angle(code, "numerical spoiling");
    let (out, target, lambda, u, steps) = match template {
        SpoilTemplate::Lift { lambda } => {
            let out = spoil1_lambda(code, *lambda)?;
            let target = CodeParams {
                n: p.n + 1,
                k: p.k,
                cos_phi: lambda * p.cos_phi + 1.0 - lambda,
            };
            (out, target, Some(*lambda), None, vec![format!("first spoiling (lambda = {lambda})")])
        }
        SpoilTemplate::Project { line, sign } => {
            let o = spoil2(code, line)?;
            let cos_t = match sign {
                ProjectionSign::Opposite => projected_cos_opposite(p.cos_phi, o.u),
                ProjectionSign::SameSide => projected_cos_same_side(p.cos_phi, o.u),
            };
            let target = CodeParams {
                n: p.n - 1,
                k: p.k,
                cos_phi: cos_t,
            };
            let u = o.u;
            (o.code, target, None, Some(u), vec![format!("second spoiling (u = {u})")])
        }
        SpoilTemplate::Reduce { a } => {
            let a = *a;
            if a == 0 || (a as f64) >= p.k {
                return Err(Error::Precondition(format!(
                    "reduce template needs 0 < a < k, got a = {a}, k = {}",
                    p.k
                )));
            }
            let (out, lambda, u, steps) = reduce_pipeline(code, a, p.cos_phi, seed)?;
            let target = CodeParams {
                n: p.n - 1,
                k: p.k - a as f64,
                cos_phi: p.cos_phi,
            };
            (out, target, Some(lambda), Some(u), steps)
        }
    };
    let achieved = CodeParams::of(&out)?;
    Ok(PipelineOutcome {
        code: out,
        target,
        achieved,
        lambda,
        u,
        steps,
    })
}

/// Spoils `[n, k, cos φ]` down to
/// `[n - 1, k - a_c, (n/(n-1)) cos φ - cos φ_c/(n-1)]` with
/// `a_c = ⌊H(φ_c)⌋`.
pub fn composite_spoil_down(code: &SphericalCode, phi_c: f64, seed: u64) -> Result<PipelineOutcome> {
    let p = CodeParams::of(code)?;
    let phi = code.phi()?;
    if !(phi_c > 0.0 && phi_c < FRAC_PI_2) {
        return Err(Error::OutOfRange {
            name: "phi_c",
            value: phi_c,
            range: "(0, pi/2)",
        });
    }
    if phi <= phi_c {
        return Err(Error::Precondition(format!(
            "need phi > phi_c, got phi = {phi} <= {phi_c}"
        )));
    }
    let a_c = kl_bound(phi_c)?.floor() as usize;
    if (a_c as f64) > p.k {
        return Err(Error::Precondition(format!(
            "need k >= a_c, got k = {} < a_c = {a_c}",
            p.k
        )));
    }
    let n = p.n as f64;
    let target_cos = n / (n - 1.0) * p.cos_phi - phi_c.cos() / (n - 1.0);
    let (out, lambda, u, steps) = reduce_pipeline(code, a_c, target_cos, seed).map_err(|e| match e {
        Error::LambdaOutOfRange { lambda, reason } => Error::Precondition(format!(
            "n too small: need (n/(n-1)) cos phi - cos phi_c/(n-1) >= cos phi'' (lambda = {lambda}; {reason})"
        )),
        other => other,
    })?;
    let target = CodeParams {
        n: p.n - 1,
        k: p.k - a_c as f64,
        cos_phi: target_cos,
    };
    let achieved = CodeParams::of(&out)?;
    Ok(PipelineOutcome {
        code: out,
        target,
        achieved,
        lambda: Some(lambda),
        u: Some(u),
        steps,
    })
}

/// First spoiling with `λ = n/(n+1)`: `[n + 1, k, (n cos φ + 1)/(n + 1)]`.
pub fn composite_spoil_up(code: &SphericalCode) -> Result<PipelineOutcome> {
    let p = CodeParams::of(code)?;
    let n = p.n as f64;
    let lambda = n / (n + 1.0);
    let out = spoil1_lambda(code, lambda)?;
    let achieved = CodeParams::of(&out)?;
    Ok(PipelineOutcome {
        code: out,
        target: CodeParams {
            n: p.n + 1,
            k: p.k,
            cos_phi: (n * p.cos_phi + 1.0) / (n + 1.0),
        },
        achieved,
        lambda: Some(lambda),
        u: None,
        steps: vec![format!("first spoiling (lambda = {lambda})")],
    })
}

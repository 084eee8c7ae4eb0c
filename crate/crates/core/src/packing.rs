//! Periodic sphere packings `⋃_j (u_j + Λ)` with balls of radius `ρ`:
//! theta series, shell and kissing codes, cap areas and density bounds.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use crate::bounds::{kl_bound, rankin_card_bound};
use crate::error::{Error, Result};
use crate::geometry::UnitVector;
use crate::lattice::{Lattice, ThetaAccumulator, ThetaCoefficients, DEFAULT_BUDGET};
use crate::spherical::SphericalCode;

/// Tolerance on `|dist - u|` for shell membership and on tangency.
pub const SHELL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPacking {
    lattice: Lattice,
    translates: Vec<Vec<f64>>,
    radius: f64,
}

impl PeriodicPacking {
    /// Validates that the translates are pairwise incongruent modulo `Λ`
    /// and that no two balls overlap.
    pub fn new(lattice: Lattice, translates: Vec<Vec<f64>>, radius: f64) -> Result<Self> {
        let n = lattice.dim();
        if translates.is_empty() {
            return Err(Error::Empty("translates"));
        }
        if let Some(t) = translates.iter().find(|t| t.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: t.len(),
            });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::OutOfRange {
                name: "radius",
                value: radius,
                range: "(0, inf)",
            });
        }
        for j in 0..translates.len() {
            for k in j + 1..translates.len() {
                let d: Vec<f64> = translates[j].iter().zip(&translates[k]).map(|(a, b)| a - b).collect();
                if lattice.contains(&d, 1e-9)? {
                    return Err(Error::TranslatesCongruent(j, k));
                }
            }
        }
        let p = PeriodicPacking {
            lattice,
            translates,
            radius,
        };
        let d = p.min_distance(DEFAULT_BUDGET)?;
        if d < 2.0 * radius - 1e-9 {
            return Err(Error::Overlap {
                distance: d,
                required: 2.0 * radius,
            });
        }
        Ok(p)
    }

    /// `Λ` with one translate at the origin and touching balls.
    pub fn from_lattice(lattice: Lattice) -> Result<Self> {
        let r = lattice.min_norm(DEFAULT_BUDGET)?.sqrt() / 2.0;
        let n = lattice.dim();
        PeriodicPacking::new(lattice, vec![vec![0.0; n]], r)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn translates(&self) -> &[Vec<f64>] {
        &self.translates
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    fn shift_coeffs(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.lattice.coordinates(v)
    }

    /// Smallest distance between two distinct centers.
    pub fn min_distance(&self, budget: usize) -> Result<f64> {
        let mut best = self.lattice.min_norm(budget)?;
        for (j, uj) in self.translates.iter().enumerate() {
            for uk in &self.translates[j + 1..] {
                let d: Vec<f64> = uj.iter().zip(uk).map(|(a, b)| a - b).collect();
                let c = self.shift_coeffs(&d)?;
                let r2 = d.iter().map(|x| x * x).sum::<f64>().min(best);
                let nearest = self
                    .lattice
                    .enumerate_shifted(&c, r2, budget)?
                    .into_iter()
                    .map(|v| v.norm)
                    .fold(f64::INFINITY, f64::min);
                best = best.min(nearest);
            }
        }
        Ok(best.sqrt())
    }

    /// Centers `c` with `|c - x0| ≤ r`, as offsets `c - x0`.
    pub fn centers_near(&self, x0: &[f64], r: f64, budget: usize) -> Result<Vec<Vec<f64>>> {
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x0.len(),
            });
        }
        let mut out = Vec::new();
        for u in &self.translates {
            let d: Vec<f64> = u.iter().zip(x0).map(|(a, b)| a - b).collect();
            let c = self.shift_coeffs(&d)?;
            for v in self.lattice.enumerate_shifted(&c, r * r, budget)? {
                out.push(v.vector);
            }
        }
        Ok(out)
    }

    /// `Θ_𝒫` coefficients: `(1/ℓ) Σ_{j,k} #{x ∈ Λ : |x + u_j - u_k|² = m}`.
    pub fn theta(&self, m_max: f64, budget: usize) -> Result<ThetaCoefficients> {
        let mut acc = ThetaAccumulator::default();
        for uj in &self.translates {
            for uk in &self.translates {
                let d: Vec<f64> = uj.iter().zip(uk).map(|(a, b)| a - b).collect();
                let c = self.shift_coeffs(&d)?;
                for v in self.lattice.enumerate_shifted(&c, m_max, budget)? {
                    acc.add(v.norm);
                }
            }
        }
        Ok(acc.finish(self.translates.len() as u64, m_max))
    }

    /// Parses the lattice file format:
    ///
    /// ```text
    /// dim 2
    /// 1 0
    /// 0 1
    /// translates 1      # optional, followed by that many rows
    /// 0.5 0.5
    /// radius 0.35       # optional
    /// ```
    ///
    /// Without `translates` the only translate is the origin; without
    /// `radius` the balls touch (half the minimal distance).
    pub fn parse(text: &str) -> Result<Self> {
        enum Want {
            Header,
            Basis,
            Translates(usize),
            Rest,
        }
        let mut state = Want::Header;
        let mut n = 0usize;
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut translates: Option<Vec<Vec<f64>>> = None;
        let mut radius: Option<f64> = None;
        let mut last_line = 0;
        let row = |line: &str, lineno: usize, n: usize| -> Result<Vec<f64>> {
            let v = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::parse(lineno, format!("bad number {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if v.len() != n {
                return Err(Error::parse(lineno, format!("expected {n} numbers, found {}", v.len())));
            }
            Ok(v)
        };
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            last_line = lineno;
            let mut words = line.split_whitespace();
            let key = words.next().unwrap_or("");
            match state {
                Want::Header => {
                    let (Some(v), None) = (words.next(), words.next()) else {
                        return Err(Error::parse(lineno, "expected header `dim <n>`"));
                    };
                    if key != "dim" {
                        return Err(Error::parse(lineno, "expected header `dim <n>`"));
                    }
                    n = v
                        .parse()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| Error::parse(lineno, format!("bad dimension {v:?}")))?;
                    state = Want::Basis;
                }
                Want::Basis => {
                    basis.push(row(line, lineno, n)?);
                    if basis.len() == n {
                        state = Want::Rest;
                    }
                }
                Want::Translates(left) => {
                    translates.get_or_insert_with(Vec::new).push(row(line, lineno, n)?);
                    state = if left > 1 { Want::Translates(left - 1) } else { Want::Rest };
                }
                Want::Rest => {
                    let value = words.next();
                    if words.next().is_some() {
                        return Err(Error::parse(lineno, "trailing tokens"));
                    }
                    match (key, value) {
                        ("translates", Some(v)) if translates.is_none() => {
                            let l: usize = v
                                .parse()
                                .ok()
                                .filter(|&l| l > 0)
                                .ok_or_else(|| Error::parse(lineno, format!("bad translate count {v:?}")))?;
                            translates = Some(Vec::new());
                            state = Want::Translates(l);
                        }
                        ("radius", Some(v)) if radius.is_none() => {
                            let r: f64 = v
                                .parse()
                                .ok()
                                .filter(|r: &f64| *r > 0.0 && r.is_finite())
                                .ok_or_else(|| Error::parse(lineno, format!("bad radius {v:?}")))?;
                            radius = Some(r);
                        }
                        _ => {
                            return Err(Error::parse(
                                lineno,
                                format!("unexpected line {line:?} (expected `translates <l>` or `radius <r>`)"),
                            ))
                        }
                    }
                }
            }
        }
        match state {
            Want::Header => return Err(Error::parse(last_line.max(1), "missing `dim <n>` header")),
            Want::Basis => {
                return Err(Error::parse(
                    last_line.max(1),
                    format!("expected {n} basis rows, found {}", basis.len()),
                ))
            }
            Want::Translates(left) => {
                return Err(Error::parse(last_line, format!("missing {left} translate row(s)")))
            }
            Want::Rest => {}
        }
        let lattice = Lattice::new(basis)?;
        let translates = translates.unwrap_or_else(|| vec![vec![0.0; n]]);
        let radius = match radius {
            Some(r) => r,
            None => {
                let probe = PeriodicPacking {
                    lattice: lattice.clone(),
                    translates: translates.clone(),
                    radius: f64::MIN_POSITIVE,
                };
                probe.min_distance(DEFAULT_BUDGET)? / 2.0
            }
        };
        PeriodicPacking::new(lattice, translates, radius)
    }
}

/// A shell code together with its separation certificate.
#[derive(Debug, Clone)]
pub struct ShellCode {
    pub code: SphericalCode,
    /// `2 arcsin(ρ/u)`, the separation guaranteed by non-overlap.
    pub guaranteed_angle: f64,
    /// The recomputed minimum angle.
    pub min_angle: f64,
}

/// Centers at distance `u` from `x0`, rescaled to the unit sphere.
pub fn shell_code(p: &PeriodicPacking, x0: &[f64], u: f64) -> Result<ShellCode> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::OutOfRange {
            name: "u",
            value: u,
            range: "(0, inf)",
        });
    }
    let pts = p
        .centers_near(x0, u + SHELL_TOL, DEFAULT_BUDGET)?
        .into_iter()
        .filter(|v| (v.iter().map(|x| x * x).sum::<f64>().sqrt() - u).abs() <= SHELL_TOL)
        .map(UnitVector::normalize)
        .collect::<Result<Vec<_>>>()?;
    if pts.len() < 2 {
        return Err(Error::EmptyShell(u, pts.len()));
    }
    let code = SphericalCode::new(pts)?;
    let min_angle = code.phi()?;
    let guaranteed_angle = 2.0 * (p.radius() / u).min(1.0).asin();
    if min_angle < guaranteed_angle - 1e-9 {
        return Err(Error::Overlap {
            distance: 2.0 * u * (min_angle / 2.0).sin(),
            required: 2.0 * p.radius(),
        });
    }
    Ok(ShellCode {
        code,
        guaranteed_angle,
        min_angle,
    })
}

/// Tangency directions from the center `u_j`: the shell at distance `2ρ`.
pub fn kissing_configuration(p: &PeriodicPacking, center: usize) -> Result<SphericalCode> {
    let x0 = p
        .translates()
        .get(center)
        .ok_or(Error::OutOfRange {
            name: "center",
            value: center as f64,
            range: "translate index",
        })?
        .clone();
    match shell_code(p, &x0, 2.0 * p.radius()) {
        Ok(s) => Ok(s.code),
        Err(Error::EmptyShell(_, 0)) => Err(Error::NoTangency(center)),
        Err(Error::EmptyShell(_, 1)) => Err(Error::DegenerateCode(
            "only one tangent neighbour; kissing code needs two".into(),
        )),
        Err(e) => Err(e),
    }
}

/// `Γ(x)` for `x ∈ ½N`, `x > 0`.
fn gamma_half_integer(x: f64) -> f64 {
    let twice = (2.0 * x).round() as i64;
    debug_assert!(twice >= 1 && (2.0 * x - twice as f64).abs() < 1e-12);
    let (mut g, mut t) = if twice % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while t < x - 1e-9 {
        g *= t;
        t += 1.0;
    }
    g
}

/// Surface area `S_n = n π^{n/2} / Γ(n/2 + 1)` of the unit sphere in `R^n`.
pub fn sphere_area(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
    }
    let nf = n as f64;
    Ok(nf * PI.powf(nf / 2.0) / gamma_half_integer(nf / 2.0 + 1.0))
}

/// Volume of the ball of radius `r` in `R^n`.
pub fn ball_volume(n: usize, r: f64) -> Result<f64> {
    Ok(sphere_area(n)? * r.powi(n as i32) / n as f64)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Area of a cap of angular radius `φ/2` on `S^{n-1}`:
/// `S_{n-1} ∫₀^{φ/2} sin^{n-2} x dx`.
pub fn cap_area(n: usize, phi: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, actual: n });
    }
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            range: "[0, pi]",
        });
    }
    let e = (n - 2) as i32;
    let integral = integrate(&|x: f64| x.sin().powi(e), 0.0, phi / 2.0, 1e-12);
    Ok(sphere_area(n - 1)? * integral)
}

/// `Δ_X = card X · S(n, φ_X) / S_n`.
pub fn code_density(code: &SphericalCode) -> Result<f64> {
    let n = code.dim();
    Ok(code.card() as f64 * cap_area(n, code.phi()?)? / sphere_area(n)?)
}

/// Source of a value for `M(n, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MEstimate {
    /// A caller-supplied value.
    Given(f64),
    /// `⌊2π/φ⌋`, exact on the circle (`n = 2`).
    Circle,
    /// `⌊Rankin bound⌋`, valid for `φ > π/2`.
    Rankin,
    /// `2^{n H(φ)}`, a heuristic for `φ ≤ π/2` only.
    KlHeuristic,
}

impl MEstimate {
    pub fn label(&self) -> &'static str {
        match self {
            MEstimate::Given(_) => "given",
            MEstimate::Circle => "exact-circle",
            MEstimate::Rankin => "rankin",
            MEstimate::KlHeuristic => "kl-heuristic",
        }
    }

    pub fn value(&self, n: usize, phi: f64) -> Result<f64> {
        match *self {
            MEstimate::Given(m) if m > 0.0 => Ok(m),
            MEstimate::Given(m) => Err(Error::OutOfRange {
                name: "M",
                value: m,
                range: "(0, inf)",
            }),
            MEstimate::Circle => {
                if n != 2 {
                    return Err(Error::Precondition(format!(
                        "the circle formula needs n = 2, got {n}"
                    )));
                }
                circle_m(phi)
            }
            MEstimate::Rankin => {
                if !(phi > FRAC_PI_2 && phi <= PI) {
                    return Err(Error::OutOfRange {
                        name: "phi",
                        value: phi,
                        range: "(pi/2, pi]",
                    });
                }
                Ok((rankin_card_bound(n, phi.cos().max(-1.0))? + 1e-9).floor())
            }
            MEstimate::KlHeuristic => Ok(2f64.powf(n as f64 * kl_bound(phi)?)),
        }
    }

    /// Picks the exact circle value for `n = 2`, Rankin for large angles and
    /// the heuristic otherwise.
    pub fn auto(n: usize, phi: f64) -> Self {
        if n == 2 {
            MEstimate::Circle
        } else if phi > FRAC_PI_2 {
            MEstimate::Rankin
        } else {
            MEstimate::KlHeuristic
        }
    }
}

/// `M(2, φ) = ⌊2π/φ⌋`.
pub fn circle_m(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi <= PI) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            range: "(0, pi]",
        });
    }
    Ok((2.0 * PI / phi + 1e-9).floor())
}

/// `Δ(n, φ) = M(n, φ) S(n, φ) / S_n`.
pub fn max_code_density(n: usize, phi: f64, m: MEstimate) -> Result<f64> {
    Ok(m.value(n, phi)? * cap_area(n, phi)? / sphere_area(n)?)
}

/// `ℓ · Vol(B_ρ) / |det Λ|`.
pub fn packing_density(p: &PeriodicPacking) -> Result<f64> {
    Ok(p.translates().len() as f64 * ball_volume(p.dim(), p.radius())? / p.lattice().covolume())
}

/// `sinⁿ(φ/2) · M(n+1, φ)`, valid for `0 < φ ≤ π`; `m_next` is the value
/// used for `M(n+1, φ)`.
pub fn density_bound_general(n: usize, phi: f64, m_next: f64) -> Result<f64> {
    if !(phi > 0.0 && phi <= PI) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            range: "(0, pi]",
        });
    }
    Ok((phi / 2.0).sin().powi(n as i32) * m_next)
}

/// `sinⁿ(φ/2) · M(n, φ)`, valid for `π/3 ≤ φ ≤ π`.
pub fn density_bound_large_angle(n: usize, phi: f64, m_same: f64) -> Result<f64> {
    if !(phi >= FRAC_PI_3 - 1e-12 && phi <= PI) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            range: "[pi/3, pi]",
        });
    }
    Ok((phi / 2.0).sin().powi(n as i32) * m_same)
}

/// Both packing-density bounds; the second is `None` below `π/3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityBounds {
    pub general: f64,
    pub large_angle: Option<f64>,
}

pub fn density_bounds(n: usize, phi: f64, m_next: f64, m_same: f64) -> Result<DensityBounds> {
    Ok(DensityBounds {
        general: density_bound_general(n, phi, m_next)?,
        large_angle: if phi >= FRAC_PI_3 - 1e-12 {
            Some(density_bound_large_angle(n, phi, m_same)?)
        } else {
            None
        },
    })
}

/// Summary of a latitude partition `0 = α_0 < … < α_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusReport {
    pub max_width: f64,
    pub min_width: f64,
    /// `max δα + 2 sin(φ/2) min δα`; should tend to 0 along a family.
    pub value: f64,
}

pub fn annulus_condition(latitudes: &[f64], phi: f64) -> Result<AnnulusReport> {
    if latitudes.len() < 2 {
        return Err(Error::Empty("latitude partition"));
    }
    let widths: Vec<f64> = latitudes.windows(2).map(|w| w[1] - w[0]).collect();
    if widths.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Precondition("latitudes must be strictly increasing".into()));
    }
    let max_width = widths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_width = widths.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(AnnulusReport {
        max_width,
        min_width,
        value: max_width + 2.0 * (phi / 2.0).sin() * min_width,
    })
}

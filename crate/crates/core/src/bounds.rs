//! Closed-form bound curves: the Kabatiansky–Levenshtein function `H(φ)`,
//! Rankin's large-angle bounds, their spoiled images, and the regular
//! simplex code that realizes the `n + 1` branch.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::UnitVector;
use crate::spherical::SphericalCode;

/// Default number of samples per figure curve.
pub const DEFAULT_SAMPLES: usize = 512;

fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `H(φ) = a log₂ a - b log₂ b` with `s = sin φ`, `a = (1+s)/(2s)`,
/// `b = (1-s)/(2s)` and `0·log 0 = 0`. Defined on `(0, π/2]`.
/// Slack accepted at the `φ = π/2` end of the domain.
pub const ENDPOINT_TOL: f64 = 1e-9;

pub fn kl_bound(phi: f64) -> Result<f64> {
    // Inputs rounded to ~10 digits may overshoot π/2 slightly.
    if !(phi > 0.0 && phi <= FRAC_PI_2 + ENDPOINT_TOL) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            range: "(0, pi/2]",
        });
    }
    let s = phi.min(FRAC_PI_2).sin();
    let a = (1.0 + s) / (2.0 * s);
    let b = ((1.0 - s) / (2.0 * s)).max(0.0);
    Ok(xlog2x(a) - xlog2x(b))
}

/// Rankin's upper bound on the cardinality of a code in `S^{n-1}` with
/// `cos φ < 0`: `(cos φ - 1)/cos φ` when `cos φ ≤ -1/n`, else `n + 1`.
pub fn rankin_card_bound(n: usize, cos_phi: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
    }
    if !(-1.0..0.0).contains(&cos_phi) {
        return Err(Error::OutOfRange {
            name: "cos_phi",
            value: cos_phi,
            range: "[-1, 0)",
        });
    }
    if cos_phi <= -1.0 / n as f64 {
        Ok((cos_phi - 1.0) / cos_phi)
    } else {
        Ok((n + 1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankinBound {
    pub card: f64,
    /// `(1/n) log₂ card`.
    pub rate: f64,
}

/// Rankin bound at angle `φ ∈ (π/2, π]`.
pub fn rankin_curve(n: usize, phi: f64) -> Result<RankinBound> {
    if !(phi > FRAC_PI_2 && phi <= PI) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            range: "(pi/2, pi]",
        });
    }
    let card = rankin_card_bound(n, phi.cos().max(-1.0))?;
    Ok(RankinBound {
        card,
        rate: card.log2() / n as f64,
    })
}

/// `n + 1` unit vectors in `R^n` with all pairwise inner products `-1/n`.
///
/// The standard basis of `R^{n+1}`, centred, is expressed in the Helmert
/// basis of the sum-zero hyperplane and rescaled to the unit sphere.
pub fn simplex_code(n: usize) -> Result<SphericalCode> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, actual: 0 });
    }
    let scale = ((n + 1) as f64 / n as f64).sqrt();
    let points = (0..=n)
        .map(|i| {
            // Helmert vector h_k = (1, …, 1, -k, 0, …)/√(k(k+1)), k = 1..n.
            let coords = (1..=n)
                .map(|k| {
                    let kf = k as f64;
                    let entry = if i < k {
                        1.0
                    } else if i == k {
                        -kf
                    } else {
                        0.0
                    };
                    scale * entry / (kf * (kf + 1.0)).sqrt()
                })
                .collect();
            UnitVector::normalize(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    SphericalCode::new(points)
}

/// Closed form behind a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// `R = H(φ)`.
    Kl,
    /// `R = (1/n) log₂ min(n + 1, (cos φ - 1)/cos φ)`.
    Rankin { n: usize },
    /// The Rankin curve after `m` first spoilings with `λ = n/(n+1)`:
    /// `R = n/(n+m) · (1/n) log₂ min(n + 1, (cos φ - 1)/cos φ)`.
    SpoiledRankin { n: usize, m: usize },
}

impl CurveKind {
    pub fn eval(&self, phi: f64) -> Result<f64> {
        match *self {
            CurveKind::Kl => kl_bound(phi),
            CurveKind::Rankin { n } => rankin_curve(n, phi).map(|b| b.rate),
            CurveKind::SpoiledRankin { n, m } => {
                rankin_curve(n, phi).map(|b| n as f64 / (n + m) as f64 * b.rate)
            }
        }
    }

    /// Closed interval of `φ` on which [`CurveKind::eval`] is defined.
    pub fn validity(&self) -> (f64, f64) {
        match self {
            CurveKind::Kl => (0.0, FRAC_PI_2),
            _ => (FRAC_PI_2, PI),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CurveKind::Kl => "kl".into(),
            CurveKind::Rankin { n } => format!("rankin_n{n}"),
            CurveKind::SpoiledRankin { n, m } => format!("rankin_n{n}_m{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub phi: f64,
    pub cos_phi: f64,
    pub rate: f64,
}

/// A named curve sampled at strictly increasing `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub name: String,
    pub kind: CurveKind,
    pub samples: Vec<CurveSample>,
}

impl BoundCurve {
    pub fn sample(kind: CurveKind, phis: &[f64]) -> Result<Self> {
        let samples = phis
            .iter()
            .map(|&phi| {
                Ok(CurveSample {
                    phi,
                    cos_phi: phi.cos(),
                    rate: kind.eval(phi)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundCurve {
            name: kind.name(),
            kind,
            samples,
        })
    }
}

/// `cos φ_j = -j/N` for `j = 1..=N`: a uniform grid of `[-1, 0)` listed by
/// increasing `φ`.
pub fn large_angle_grid(samples: usize) -> Vec<f64> {
    (1..=samples)
        .map(|j| {
            if j == samples {
                PI
            } else {
                (-(j as f64) / samples as f64).acos()
            }
        })
        .collect()
}

/// Uniform `φ` grid on `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..samples)
            .map(|i| {
                if i == samples - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (samples - 1) as f64
                }
            })
            .collect(),
    }
}

/// Which family of curves to sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Figure {
    /// Rankin curves for each `n` on the large-angle grid.
    Fig1 { ns: Vec<usize> },
    /// `H(φ)` on `[phi_min, π/2]`.
    Fig2 { phi_min: f64 },
    /// Spoiled Rankin curves for fixed `n` and each `m`.
    Fig3 { n: usize, ms: Vec<usize> },
}

/// Lower end of the default `H(φ)` plotting range.
pub const FIG2_PHI_MIN: f64 = 0.05;

pub fn figure_curves(which: &Figure, samples: usize) -> Result<Vec<BoundCurve>> {
    if samples == 0 {
        return Err(Error::Empty("sample grid"));
    }
    match which {
        Figure::Fig1 { ns } => {
            if ns.is_empty() {
                return Err(Error::Empty("list of n"));
            }
            let grid = large_angle_grid(samples);
            ns.iter()
                .map(|&n| BoundCurve::sample(CurveKind::Rankin { n }, &grid))
                .collect()
        }
        Figure::Fig2 { phi_min } => {
            let grid = uniform_grid(*phi_min, FRAC_PI_2, samples);
            Ok(vec![BoundCurve::sample(CurveKind::Kl, &grid)?])
        }
        Figure::Fig3 { n, ms } => {
            if ms.is_empty() {
                return Err(Error::Empty("list of m"));
            }
            let grid = large_angle_grid(samples);
            ms.iter()
                .map(|&m| BoundCurve::sample(CurveKind::SpoiledRankin { n: *n, m }, &grid))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kl_endpoints() {
        assert_eq!(kl_bound(FRAC_PI_2).unwrap(), 0.0);
        let expect = 1.5 * 1.5f64.log2() + 0.5;
        assert!((kl_bound(PI / 6.0).unwrap() - expect).abs() < 1e-12);
        assert!(kl_bound(0.01).unwrap() > 7.0);
        assert!(kl_bound(0.0).is_err());
        assert!(kl_bound(2.0).is_err());
    }

    #[test]
    fn rankin_branches() {
        assert_eq!(rankin_card_bound(5, -1.0).unwrap(), 2.0);
        assert!((rankin_card_bound(2, -0.5).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(rankin_card_bound(2, -0.25).unwrap(), 3.0);
        assert!(rankin_curve(2, 1.0).is_err());
    }

    #[test]
    fn simplex_dots() {
        for n in 1..=8 {
            let s = simplex_code(n).unwrap();
            assert_eq!(s.card(), n + 1);
            for c in s.pairwise_cosines() {
                assert!((c + 1.0 / n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grids() {
        let g = large_angle_grid(512);
        assert_eq!(g.len(), 512);
        assert_eq!(*g.last().unwrap(), PI);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let u = uniform_grid(0.05, FRAC_PI_2, 512);
        assert_eq!(u[0], 0.05);
        assert_eq!(u[511], FRAC_PI_2);
    }

    #[test]
    fn fig3_curves_decay() {
        let cs = figure_curves(&Figure::Fig3 { n: 2, ms: (1..=5).collect() }, 64).unwrap();
        assert_eq!(cs.len(), 5);
        for w in cs.windows(2) {
            for (a, b) in w[0].samples.iter().zip(&w[1].samples) {
                assert!(b.rate < a.rate);
            }
        }
    }
}

//! Empirical atlas of code points inside the cutoff window.
//!
//! Starting from a list of seed codes, random spoiling operations generate
//! further codes; every observed code point `P` with `P ∈ Z_c` and
//! `R ≤ H(φ)` contributes its lower controlling region (clipped under
//! `H`) to a dominated set. The estimate `α̂_c(φ)` is the largest dominated
//! `R` on a uniform `φ` grid, turned into a non-increasing envelope.
//!
//! This is an inner approximation built from finitely many codes; it says
//! nothing definitive about the true asymptotic bound.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use rand::Rng;

use crate::binary::{embed_binary, BinaryCode};
use crate::bounds::{kl_bound, simplex_code, uniform_grid};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numfmt::g17;
use crate::packing::{kissing_configuration, shell_code, PeriodicPacking};
use crate::random;
use crate::regions::{controlling_regions, plane_point, ControllingRegions, CutoffRegion};
use crate::spherical::{composite_spoil_up, spoil1_lambda, spoil2, spoil3_balanced, SphericalCode};
use crate::geometry::LineThroughOrigin;

/// Number of `φ` cells on `[φ_c, π/2]`.
pub const GRID_CELLS: usize = 1024;
/// Default cutoff angle.
pub const DEFAULT_PHI_C: f64 = 0.25;
/// Default number of spoiling attempts.
pub const DEFAULT_BUDGET: usize = 10_000;

/// A named starting code.
#[derive(Debug, Clone)]
pub struct Seed {
    pub name: String,
    pub code: SphericalCode,
}

/// Binary codes through the cube embedding, regular simplices, and the
/// kissing and second-shell codes of `Z^n`, `A₂`, `D₄` and `E₈`.
pub fn default_seeds() -> Result<Vec<Seed>> {
    let mut seeds = Vec::new();
    let mut push = |name: String, code: SphericalCode| seeds.push(Seed { name, code });
    for n in [3usize, 5, 8] {
        push(format!("repetition({n})"), embed_binary(&BinaryCode::repetition(n))?);
    }
    for n in [4usize, 6, 8] {
        push(format!("even-weight({n})"), embed_binary(&BinaryCode::even_weight(n))?);
    }
    for n in [3usize, 4, 5] {
        push(format!("cube({n})"), embed_binary(&BinaryCode::full(n))?);
    }
    push("reed-muller(1,3)".into(), embed_binary(&BinaryCode::reed_muller_first_order(3))?);
    push("reed-muller(1,4)".into(), embed_binary(&BinaryCode::reed_muller_first_order(4))?);
    push("hamming(7)".into(), embed_binary(&BinaryCode::hamming7())?);
    for n in [2usize, 3, 4, 6, 8] {
        push(format!("simplex({n})"), simplex_code(n)?);
    }
    let lattices = [
        ("Z3", Lattice::integer(3)?),
        ("Z4", Lattice::integer(4)?),
        ("A2", Lattice::a2()),
        ("D4", Lattice::d(4)?),
        ("E8", Lattice::e8()),
    ];
    for (name, lattice) in lattices {
        let p = PeriodicPacking::from_lattice(lattice)?;
        let n = p.dim();
        push(format!("kissing({name})"), kissing_configuration(&p, 0)?);
        let second = (2.0 * p.radius()) * 2f64.sqrt();
        if let Ok(s) = shell_code(&p, &vec![0.0; n], second) {
            push(format!("shell({name},{})", g17(second * second)), s.code);
        }
    }
    Ok(seeds)
}

/// Limits on the generated codes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtlasConfig {
    pub cutoff: CutoffRegion,
    pub budget: usize,
    pub seed: u64,
    pub max_dim: usize,
    pub max_card: usize,
    pub pool_size: usize,
}

impl AtlasConfig {
    pub fn new(phi_c: f64, budget: usize, seed: u64) -> Result<Self> {
        Ok(AtlasConfig {
            cutoff: CutoffRegion::new(phi_c)?,
            budget,
            seed,
            max_dim: 48,
            max_card: 256,
            pool_size: 512,
        })
    }
}

/// One observed code point.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub n: usize,
    pub card: usize,
    pub rate: f64,
    pub cos_phi: f64,
    /// Whether the point lies in `Z_c` under `H` and contributes a
    /// dominated region.
    pub admitted: bool,
    pub provenance: String,
}

#[derive(Debug, Clone)]
pub struct Atlas {
    pub config: AtlasConfig,
    pub observed: Vec<Observation>,
    /// `φ` grid, increasing from `φ_c` to `π/2`.
    pub grid: Vec<f64>,
    /// Cellwise supremum of dominated `R` before monotone post-processing.
    pub raw: Vec<f64>,
    /// Non-increasing envelope `α̂_c`.
    pub envelope: Vec<f64>,
    /// `H(φ)` on the grid.
    pub kl: Vec<f64>,
    /// Spoiling attempts that failed (counted against the budget).
    pub failed_ops: usize,
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Up,
    Lift,
    Halve,
    Project,
}

fn apply<R: Rng>(code: &SphericalCode, op: Op, rng: &mut R) -> Result<(SphericalCode, String)> {
    match op {
        Op::Up => composite_spoil_up(code).map(|o| (o.code, "up".into())),
        Op::Lift => {
            let lambda: f64 = rng.random_range(0.25..1.0);
            spoil1_lambda(code, lambda).map(|c| (c, format!("lift({})", g17(lambda))))
        }
        Op::Halve => spoil3_balanced(code, rng.random()).map(|(c, _)| (c, "halve".into())),
        Op::Project => {
            let line = LineThroughOrigin::new(random::random_unit(code.dim(), rng));
            let out = spoil2(code, &line)?;
            if out.merged > 0 {
                return Err(Error::DegenerateCode("projection merged points".into()));
            }
            Ok((out.code, "project".into()))
        }
    }
}

impl Atlas {
    fn empty(config: AtlasConfig) -> Result<Self> {
        let phi_c = config.cutoff.phi_c;
        let grid = uniform_grid(phi_c, FRAC_PI_2, GRID_CELLS);
        let kl = grid.iter().map(|&p| kl_bound(p)).collect::<Result<Vec<_>>>()?;
        Ok(Atlas {
            config,
            observed: Vec::new(),
            raw: vec![0.0; grid.len()],
            envelope: vec![0.0; grid.len()],
            grid,
            kl,
            failed_ops: 0,
        })
    }

    /// Whether `(cos φ, R)` can anchor a dominated region.
    pub fn admissible(&self, rate: f64, cos_phi: f64) -> Option<ControllingRegions> {
        if !(0.0..=1.0).contains(&cos_phi) {
            return None;
        }
        let phi = cos_phi.acos();
        if phi < self.config.cutoff.phi_c || rate > kl_bound(phi).ok()? {
            return None;
        }
        controlling_regions(plane_point(cos_phi, rate), &self.config.cutoff).ok()
    }

    /// Records a code point and raises the raw estimate under its lower
    /// controlling region. Returns whether the point was admitted.
    pub fn observe(&mut self, code: &SphericalCode, provenance: String) -> Result<bool> {
        let cp = code.code_point()?;
        let regions = self.admissible(cp.rate, cp.cos_phi);
        if let Some(r) = &regions {
            for ((raw, &phi), &h) in self.raw.iter_mut().zip(&self.grid).zip(&self.kl) {
                if let Some(top) = r.lower_top(phi.cos()) {
                    *raw = raw.max(top.min(h));
                }
            }
        }
        self.observed.push(Observation {
            n: cp.n,
            card: cp.card,
            rate: cp.rate,
            cos_phi: cp.cos_phi,
            admitted: regions.is_some(),
            provenance,
        });
        Ok(regions.is_some())
    }

    /// Running maximum from `φ = π/2` down to `φ_c`.
    fn finish(&mut self) {
        let mut best = 0.0f64;
        for i in (0..self.raw.len()).rev() {
            best = best.max(self.raw[i]);
            self.envelope[i] = best;
        }
    }

    /// `α̂_c` at the grid cell containing `φ`.
    pub fn alpha(&self, phi: f64) -> Option<f64> {
        let (lo, hi) = (self.grid[0], *self.grid.last()?);
        if !(lo..=hi).contains(&phi) {
            return None;
        }
        let t = (phi - lo) / (hi - lo) * (self.grid.len() - 1) as f64;
        Some(self.envelope[t.round() as usize])
    }

    pub fn admitted_count(&self) -> usize {
        self.observed.iter().filter(|o| o.admitted).count()
    }

    /// Text snapshot: header, observed points with provenance, envelope.
    pub fn snapshot(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "# spherical-code atlas (inner approximation)");
        let _ = writeln!(s, "phi_c {}", g17(c.cutoff.phi_c));
        let _ = writeln!(s, "a_c {}", c.cutoff.a_c);
        let _ = writeln!(s, "budget {}", c.budget);
        let _ = writeln!(s, "seed {}", c.seed);
        let _ = writeln!(s, "failed_ops {}", self.failed_ops);
        let _ = writeln!(s, "observed {}", self.observed.len());
        let _ = writeln!(s, "# n card R cos_phi admitted provenance");
        for o in &self.observed {
            let _ = writeln!(
                s,
                "{} {} {} {} {} {}",
                o.n,
                o.card,
                g17(o.rate),
                g17(o.cos_phi),
                u8::from(o.admitted),
                o.provenance
            );
        }
        let _ = writeln!(s, "envelope {}", self.grid.len());
        let _ = writeln!(s, "# phi alpha raw kl");
        for i in 0..self.grid.len() {
            let _ = writeln!(
                s,
                "{} {} {} {}",
                g17(self.grid[i]),
                g17(self.envelope[i]),
                g17(self.raw[i]),
                g17(self.kl[i])
            );
        }
        s
    }
}

/// Builds the atlas. Every attempted spoiling counts against the budget,
/// successful or not.
pub fn atlas_build(seeds: &[Seed], config: AtlasConfig) -> Result<Atlas> {
    if config.budget == 0 {
        return Err(Error::OutOfRange {
            name: "budget",
            value: 0.0,
            range: ">= 1",
        });
    }
    if seeds.is_empty() {
        return Err(Error::Empty("seed list"));
    }
    let mut atlas = Atlas::empty(config)?;
    let mut pool: Vec<(SphericalCode, String)> = Vec::new();
    for s in seeds {
        if s.code.card() >= 2 {
            atlas.observe(&s.code, s.name.clone())?;
            if s.code.card() <= config.max_card && s.code.dim() <= config.max_dim {
                pool.push((s.code.clone(), s.name.clone()));
            }
        }
    }
    if pool.is_empty() {
        return Err(Error::DegenerateCode("all seeds are degenerate".into()));
    }
    let mut rng = random::rng(config.seed);
    const OPS: [Op; 4] = [Op::Up, Op::Lift, Op::Halve, Op::Project];
    for _ in 0..config.budget {
        let idx = rng.random_range(0..pool.len());
        let op = OPS[rng.random_range(0..OPS.len())];
        let (code, prov) = &pool[idx];
        let result = apply(code, op, &mut rng).and_then(|(c, tag)| {
            if c.card() < 2 || c.dim() > config.max_dim || c.card() > config.max_card {
                Err(Error::Precondition("outside atlas limits".into()))
            } else {
                Ok((c, format!("{prov}>{tag}")))
            }
        });
        match result {
            Ok((c, p)) => {
                atlas.observe(&c, p.clone())?;
                if pool.len() < config.pool_size {
                    pool.push((c, p));
                } else {
                    let slot = rng.random_range(0..pool.len());
                    pool[slot] = (c, p);
                }
            }
            Err(_) => atlas.failed_ops += 1,
        }
    }
    atlas.finish();
    Ok(atlas)
}

/// Observed codes near a code point.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityReport {
    pub count: usize,
    /// `(n, card)` of each nearby observation, sorted.
    pub members: Vec<(usize, usize)>,
    /// At least two members, with `n` strictly and `card` weakly increasing
    /// in the sorted order.
    pub growing: bool,
}

/// Counts observations within `tol` (max-norm in `(R, cos φ)`) of a point.
pub fn multiplicity_report(atlas: &Atlas, rate: f64, cos_phi: f64, tol: f64) -> MultiplicityReport {
    let mut members: Vec<(usize, usize)> = atlas
        .observed
        .iter()
        .filter(|o| (o.rate - rate).abs() <= tol && (o.cos_phi - cos_phi).abs() <= tol)
        .map(|o| (o.n, o.card))
        .collect();
    members.sort_unstable();
    let growing = members.len() >= 2 && members.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1);
    MultiplicityReport {
        count: members.len(),
        members,
        growing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_monotone_and_reproducible() {
        let seeds = default_seeds().unwrap();
        let cfg = AtlasConfig::new(DEFAULT_PHI_C, 300, 7).unwrap();
        let a = atlas_build(&seeds, cfg).unwrap();
        assert!(a.envelope.windows(2).all(|w| w[0] >= w[1]));
        for (e, h) in a.envelope.iter().zip(&a.kl) {
            assert!(*e <= h + 1e-9);
        }
        assert_eq!(*a.envelope.last().unwrap(), 0.0);
        let b = atlas_build(&seeds, cfg).unwrap();
        assert_eq!(a.snapshot(), b.snapshot());
    }

    #[test]
    fn errors() {
        let cfg = AtlasConfig::new(DEFAULT_PHI_C, 0, 0).unwrap();
        assert!(atlas_build(&default_seeds().unwrap(), cfg).is_err());
        let cfg = AtlasConfig::new(DEFAULT_PHI_C, 10, 0).unwrap();
        assert!(atlas_build(&[], cfg).is_err());
    }

    #[test]
    fn multiplicity_counts() {
        let seeds = default_seeds().unwrap();
        let cfg = AtlasConfig::new(DEFAULT_PHI_C, 50, 1).unwrap();
        let a = atlas_build(&seeds, cfg).unwrap();
        assert_eq!(multiplicity_report(&a, 123.0, 0.5, 1e-9).count, 0);
        let o = &a.observed[0];
        assert!(multiplicity_report(&a, o.rate, o.cos_phi, 1e-12).count >= 1);
    }
}

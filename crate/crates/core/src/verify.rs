//! Self-check suites: randomized property checks of the library's own
//! identities, runnable from the command line with a fixed seed.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use rand::Rng;

use crate::binary::{
    code_parameters, controlling_cones, cos_from_delta, delta_from_cos, embed_binary,
    numerical_spoil_points, BinaryCode, Word,
};
use crate::bounds::{kl_bound, rankin_card_bound, simplex_code};
use crate::error::{Error, Result};
use crate::geometry::{chordal_distance, cos_between, section_radius, HyperplaneFrame, Hyperplane, LineThroughOrigin};
use crate::lattice::{Lattice, DEFAULT_BUDGET};
use crate::packing::{code_density, kissing_configuration, packing_density, PeriodicPacking};
use crate::random::{self, random_code, random_unit, SeededRng};
use crate::spherical::{
    composite_spoil_up, find_balanced_line, numerical_spoil, projected_pair_cos, spoil1, spoil2_in_frame,
    spoil3, SpoilTemplate,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Binary,
    Spoiling,
    Bounds,
    Packings,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Geometry,
        Suite::Binary,
        Suite::Spoiling,
        Suite::Bounds,
        Suite::Packings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Binary => "binary",
            Suite::Spoiling => "spoiling",
            Suite::Bounds => "bounds",
            Suite::Packings => "packings",
        }
    }

    /// `all` expands to every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|&x| vec![x])
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Collector {
    suite: &'static str,
    out: Vec<Check>,
}

impl Collector {
    /// Records `worst ≤ tol` (a failing `Err` counts as failure).
    fn within(&mut self, name: &'static str, worst: Result<f64>, tol: f64) {
        let (passed, detail) = match worst {
            Ok(w) => (w <= tol, format!("max error {w:e} (tolerance {tol:e})")),
            Err(e) => (false, format!("error: {e}")),
        };
        self.out.push(Check {
            suite: self.suite,
            name,
            passed,
            detail,
        });
    }

    fn holds(&mut self, name: &'static str, ok: Result<bool>, detail: impl Into<String>) {
        let (passed, detail) = match ok {
            Ok(b) => (b, detail.into()),
            Err(e) => (false, format!("error: {e}")),
        };
        self.out.push(Check {
            suite: self.suite,
            name,
            passed,
            detail,
        });
    }
}

pub fn run(suite: Suite, seed: u64) -> Vec<Check> {
    let mut c = Collector {
        suite: suite.name(),
        out: Vec::new(),
    };
    let mut rng = random::rng(seed);
    match suite {
        Suite::Geometry => geometry(&mut c, &mut rng),
        Suite::Binary => binary(&mut c, &mut rng),
        Suite::Spoiling => spoiling(&mut c, &mut rng),
        Suite::Bounds => bounds(&mut c, &mut rng),
        Suite::Packings => packings(&mut c),
    }
    c.out
}

fn geometry(c: &mut Collector, rng: &mut SeededRng) {
    c.within(
        "cos = 1 - chord^2/2",
        (|| {
            let mut worst = 0.0f64;
            for _ in 0..200 {
                let n = rng.random_range(1..=16);
                let (x, y) = (random_unit(n, rng), random_unit(n, rng));
                let d = chordal_distance(&x, &y)?;
                worst = worst.max((cos_between(&x, &y)? - (1.0 - d * d / 2.0)).abs());
            }
            Ok(worst)
        })(),
        1e-12,
    );
    c.within(
        "projection angles independent of basis",
        (|| {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let n = rng.random_range(3..=8);
                let x = random_code(n, 6, 0.3, rng).ok_or(Error::SearchExhausted { trials: 0 })?;
                let line = LineThroughOrigin::new(random_unit(n, rng));
                let a = spoil2_in_frame(&x, &HyperplaneFrame::new(line.clone()))?;
                let basis = random_basis(line.direction().coords(), rng);
                let b = spoil2_in_frame(&x, &HyperplaneFrame::with_basis(line, basis)?)?;
                for (p, q) in a.code.pairwise_cosines().iter().zip(b.code.pairwise_cosines()) {
                    worst = worst.max((p - q).abs());
                }
            }
            Ok(worst)
        })(),
        1e-9,
    );
    c.within(
        "section radius identity",
        (0..100)
            .map(|_| {
                let h: f64 = rng.random_range(0.0..1.0);
                section_radius(h).map(|r| (r * r + h * h - 1.0).abs())
            })
            .try_fold(0.0f64, |a, r| r.map(|r| a.max(r))),
        1e-15,
    );
}

/// Random orthonormal basis of `normal^⊥`.
fn random_basis(normal: &[f64], rng: &mut SeededRng) -> Vec<Vec<f64>> {
    let n = normal.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < n - 1 {
        let mut v: Vec<f64> = random_unit(n, rng).into_inner();
        for _ in 0..2 {
            for b in std::iter::once(normal).chain(basis.iter().map(|b| b.as_slice())) {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-6 {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    basis
}

fn random_binary(rng: &mut SeededRng, n: usize, card: usize) -> Result<BinaryCode> {
    let mut words: Vec<Word> = (0..card)
        .map(|_| Word::new((0..n).map(|_| rng.random::<bool>()).collect()))
        .collect();
    words.sort();
    words.dedup();
    BinaryCode::new(words)
}

fn binary(c: &mut Collector, rng: &mut SeededRng) {
    c.within(
        "embedding: cos = 1 - 2d/n",
        (|| {
            let mut worst = 0.0f64;
            let mut done = 0;
            while done < 100 {
                let n = rng.random_range(2..=10);
                let card = rng.random_range(2..=64usize.min(1 << n));
                let code = random_binary(rng, n, card)?;
                if code.card() < 2 {
                    continue;
                }
                let p = code_parameters(&code);
                let x = embed_binary(&code)?;
                worst = worst.max((x.cos_phi()? - (1.0 - 2.0 * p.d as f64 / n as f64)).abs());
                done += 1;
            }
            Ok(worst)
        })(),
        1e-12,
    );
    c.within(
        "delta/cos round trip",
        Ok((0..100)
            .map(|_| {
                let d: f64 = rng.random_range(0.0..1.0);
                (delta_from_cos(cos_from_delta(d)) - d).abs()
            })
            .fold(0.0, f64::max)),
        1e-12,
    );
    c.holds(
        "numerical spoil points lie on their lines",
        (|| {
            for _ in 0..100 {
                let (r, d): (f64, f64) = (rng.random_range(0.05..0.95), rng.random_range(0.05..0.95));
                let n = rng.random_range(2..200);
                let cones = controlling_cones(r, d)?;
                let (p1, p2) = numerical_spoil_points(r, d, n)?;
                let inside = |q: crate::plane::PlanePoint| q.x >= 0.0 && q.y >= 0.0;
                let on1 = (p1.x * (d - 1.0) - (p1.y - 1.0) * r).abs() < 1e-12;
                let on2 = ((p2.x - 1.0) * d - p2.y * (r - 1.0)).abs() < 1e-12;
                let seg1 = !inside(p1) || cones.on_i1(p1, 1e-12);
                let seg2 = !inside(p2) || cones.on_i2(p2, 1e-12);
                if !(on1 && on2 && seg1 && seg2) {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
        "100 random anchors",
    );
}

fn spoiling(c: &mut Collector, rng: &mut SeededRng) {
    c.within(
        "first spoiling: every inner product maps to rho^2 c + 1 - rho^2",
        (|| {
            let mut worst = 0.0f64;
            for _ in 0..50 {
                let n = rng.random_range(2..=6);
                let x = random_code(n, rng.random_range(2..=12), 0.2, rng)
                    .ok_or(Error::SearchExhausted { trials: 0 })?;
                let h: f64 = rng.random_range(0.0..0.95);
                let hp = Hyperplane::new(random_unit(n + 1, rng), h)?;
                let rho2 = 1.0 - h * h;
                let y = spoil1(&x, &hp)?;
                for (a, b) in x.pairwise_cosines().iter().zip(y.pairwise_cosines()) {
                    worst = worst.max((rho2 * a + 1.0 - rho2 - b).abs());
                }
            }
            Ok(worst)
        })(),
        1e-9,
    );
    c.within(
        "second spoiling: pairwise projected angles",
        (|| {
            let mut worst = 0.0f64;
            for _ in 0..50 {
                let n = rng.random_range(3..=6);
                let x = random_code(n, rng.random_range(2..=10), 0.3, rng)
                    .ok_or(Error::SearchExhausted { trials: 0 })?;
                let line = LineThroughOrigin::new(random_unit(n, rng));
                let out = spoil2_in_frame(&x, &HyperplaneFrame::new(line))?;
                if out.merged > 0 {
                    continue;
                }
                let mut k = 0;
                let cos = out.code.pairwise_cosines();
                for i in 0..x.card() {
                    for j in i + 1..x.card() {
                        let want = projected_pair_cos(x.points()[i].dot(&x.points()[j]), out.axial[i], out.axial[j]);
                        worst = worst.max((want - cos[k]).abs());
                        k += 1;
                    }
                }
            }
            Ok(worst)
        })(),
        1e-9,
    );
    c.holds(
        "third spoiling: balanced split and monotone angle",
        (|| {
            for _ in 0..50 {
                let n = rng.random_range(2..=6);
                let x = random_code(n, rng.random_range(2..=16), 0.2, rng)
                    .ok_or(Error::SearchExhausted { trials: 0 })?;
                let b = find_balanced_line(&x, rng.random())?;
                let sub = spoil3(&x, &b.line, b.side)?;
                if !(2 * sub.card() >= x.card() && sub.card() < x.card()) {
                    return Ok(false);
                }
                if sub.card() >= 2 && sub.phi()? < x.phi()? - 1e-12 {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
        "50 random codes",
    );
    c.within(
        "reduce template recomputes to target",
        (|| {
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let x = random_code(4, 8, 0.6, rng).ok_or(Error::SearchExhausted { trials: 0 })?;
                worst = worst.max(numerical_spoil(&x, &SpoilTemplate::Reduce { a: 1 }, rng.random())?.deviation());
            }
            Ok(worst)
        })(),
        1e-6,
    );
    c.within(
        "up step recomputes to target",
        (|| {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let n = rng.random_range(2..=6);
                let x = random_code(n, 6, 0.3, rng).ok_or(Error::SearchExhausted { trials: 0 })?;
                worst = worst.max(composite_spoil_up(&x)?.deviation());
            }
            Ok(worst)
        })(),
        1e-9,
    );
}

fn bounds(c: &mut Collector, rng: &mut SeededRng) {
    c.holds("H(pi/2) = 0", kl_bound(FRAC_PI_2).map(|h| h == 0.0), "0·log 0 = 0");
    c.holds(
        "H strictly decreasing",
        (|| {
            for _ in 0..100 {
                let a: f64 = rng.random_range(1e-3..FRAC_PI_2);
                let b: f64 = rng.random_range(1e-3..FRAC_PI_2);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                if lo < hi && kl_bound(lo)? <= kl_bound(hi)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
        "100 random pairs",
    );
    c.holds(
        "Rankin bound tight on the circle",
        (|| {
            Ok(rankin_card_bound(2, -1.0)? == (2.0 * PI / PI + 1e-9).floor()
                && (rankin_card_bound(2, -0.5)? - (2.0 * PI / (2.0 * FRAC_PI_3) + 1e-9).floor()).abs() < 1e-12)
        })(),
        "cos phi in {-1, -1/2}",
    );
    c.within(
        "simplex inner products",
        (1..=8)
            .map(|n| {
                simplex_code(n).map(|s| {
                    s.pairwise_cosines()
                        .iter()
                        .map(|&d| (d + 1.0 / n as f64).abs())
                        .fold(0.0, f64::max)
                })
            })
            .try_fold(0.0f64, |a, r| r.map(|r| a.max(r))),
        1e-12,
    );
}

fn packings(c: &mut Collector) {
    c.holds(
        "Z2 theta 1,4,4,0,4,8",
        Lattice::integer(2)
            .and_then(|l| l.theta(5.0, DEFAULT_BUDGET))
            .map(|t| (0..=5).map(|m| t.count_at(m as f64)).eq([1.0, 4.0, 4.0, 0.0, 4.0, 8.0])),
        "m = 0..5",
    );
    for (name, lattice, m, want) in [
        ("A2 minimal shell = 6", Lattice::a2(), 1.0, 6.0),
        ("D4 minimal shell = 24", Lattice::d(4).expect("D4"), 2.0, 24.0),
        ("E8 minimal shell = 240", Lattice::e8(), 2.0, 240.0),
    ] {
        c.holds(name, lattice.theta(m, DEFAULT_BUDGET).map(|t| t.count_at(m) == want), "");
    }
    c.within(
        "A2 kissing code density = 1",
        PeriodicPacking::from_lattice(Lattice::a2())
            .and_then(|p| kissing_configuration(&p, 0))
            .and_then(|k| code_density(&k))
            .map(|d| (d - 1.0).abs()),
        1e-12,
    );
    c.within(
        "A2 packing density = pi/sqrt(12)",
        PeriodicPacking::from_lattice(Lattice::a2())
            .and_then(|p| packing_density(&p))
            .map(|d| (d - PI / 12f64.sqrt()).abs()),
        1e-12,
    );
}

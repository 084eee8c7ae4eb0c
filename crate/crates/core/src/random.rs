//! Seeded random geometry used by the search routines, the atlas and the
//! verification suites. All generators are `ChaCha8Rng` so that results are
//! reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::{dot, UnitVector};
use crate::spherical::SphericalCode;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed point of `S^{dim-1}`.
pub fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitVector {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(u) = UnitVector::normalize(v) {
            return u;
        }
    }
}

/// `card` random points of `S^{dim-1}` whose pairwise angles all exceed
/// `min_sep` radians. Gives up (returning `None`) after a bounded number of
/// rejections.
pub fn random_code<R: Rng + ?Sized>(
    dim: usize,
    card: usize,
    min_sep: f64,
    rng: &mut R,
) -> Option<SphericalCode> {
    let max_cos = min_sep.cos();
    let mut pts: Vec<UnitVector> = Vec::with_capacity(card);
    let mut attempts = 0;
    while pts.len() < card {
        attempts += 1;
        if attempts > 1000 * card.max(1) {
            return None;
        }
        let p = random_unit(dim, rng);
        if pts.iter().all(|q| dot(q.coords(), p.coords()) < max_cos) {
            pts.push(p);
        }
    }
    SphericalCode::new(pts).ok()
}

/// Unit vector orthogonal to `u` (uniform on the great sphere `u^⊥`).
pub fn random_orthogonal<R: Rng + ?Sized>(u: &UnitVector, rng: &mut R) -> UnitVector {
    loop {
        let v = random_unit(u.dim(), rng);
        let c = dot(v.coords(), u.coords());
        let w: Vec<f64> = v.coords().iter().zip(u.coords()).map(|(a, b)| a - c * b).collect();
        if let Ok(w) = UnitVector::normalize(w) {
            if dot(w.coords(), u.coords()).abs() < 1e-12 {
                return w;
            }
        }
    }
}

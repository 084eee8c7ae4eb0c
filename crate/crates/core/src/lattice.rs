//! Lattices `Λ = Z^n B` (rows of `B` are the basis vectors), short-vector
//! enumeration and theta-series coefficients.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default cap on the number of enumeration nodes.
pub const DEFAULT_BUDGET: usize = 10_000_000;
/// Norms closer than this share a theta coefficient.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    n: usize,
    basis: DMatrix<f64>,
    gram: DMatrix<f64>,
    /// Upper-triangular factor data: `q[i][i] = r_ii²`, `q[i][j] = r_ij / r_ii`.
    q: Vec<Vec<f64>>,
    det: f64,
}

/// A lattice (or shifted-lattice) vector found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    pub coeffs: Vec<i64>,
    pub vector: Vec<f64>,
    pub norm: f64,
}

impl Lattice {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty("lattice basis"));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: r.len(),
            });
        }
        let basis = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let det = basis.determinant();
        if !(det.abs() > 1e-12) {
            return Err(Error::SingularBasis(det));
        }
        let gram = &basis * basis.transpose();
        let chol = nalgebra::Cholesky::new(gram.clone()).ok_or(Error::SingularBasis(det))?;
        // G = L Lᵀ; with z G zᵀ = |z L|², column i of L gives the i-th term.
        // Use R = Lᵀ (upper triangular): Q(z) = Σ_i r_ii² (z_i + Σ_{j>i} r_ij/r_ii z_j)².
        let r = chol.l().transpose();
        let q = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            r[(i, i)] * r[(i, i)]
                        } else if j > i {
                            r[(i, j)] / r[(i, i)]
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Lattice {
            n,
            basis,
            gram,
            q,
            det,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.basis.row(i).iter().copied().collect())
            .collect()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn determinant(&self) -> f64 {
        self.det
    }

    /// Volume of a fundamental domain, `|det B|`.
    pub fn covolume(&self) -> f64 {
        self.det.abs()
    }

    pub fn point(&self, coeffs: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| coeffs[i] * self.basis[(i, j)]).sum())
            .collect()
    }

    /// Real coefficients `c` with `v = c B`.
    pub fn coordinates(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        let bt = self.basis.transpose();
        let x = bt
            .lu()
            .solve(&DVector::from_column_slice(v))
            .ok_or(Error::SingularBasis(self.det))?;
        Ok(x.iter().copied().collect())
    }

    /// Whether `v` is a lattice vector (all coefficients within `tol` of
    /// integers).
    pub fn contains(&self, v: &[f64], tol: f64) -> Result<bool> {
        Ok(self
            .coordinates(v)?
            .iter()
            .all(|c| (c - c.round()).abs() <= tol))
    }

    /// All `x ∈ Λ` with `|x|² ≤ radius2`.
    pub fn enumerate(&self, radius2: f64, budget: usize) -> Result<Vec<LatticeVector>> {
        self.enumerate_shifted(&vec![0.0; self.n], radius2, budget)
    }

    /// All `x ∈ Λ + shift` with `|x|² ≤ radius2`, where the shift is given
    /// by its real basis coefficients. The `coeffs` field holds the integer
    /// part `z` of `x = (z + shift) B`.
    pub fn enumerate_shifted(&self, shift: &[f64], radius2: f64, budget: usize) -> Result<Vec<LatticeVector>> {
        let mut out = Vec::new();
        self.walk(shift, radius2, budget, &mut |z: &[i64], norm: f64| {
            let y: Vec<f64> = z.iter().zip(shift).map(|(&zi, s)| zi as f64 + s).collect();
            out.push(LatticeVector {
                coeffs: z.to_vec(),
                vector: self.point(&y),
                norm,
            });
        })?;
        Ok(out)
    }

    /// Fincke–Pohst recursion from the last coordinate down, calling `visit`
    /// for every point inside the ball.
    fn walk(
        &self,
        shift: &[f64],
        radius2: f64,
        budget: usize,
        visit: &mut dyn FnMut(&[i64], f64),
    ) -> Result<()> {
        if radius2 < 0.0 {
            return Ok(());
        }
        let n = self.n;
        let mut z = vec![0i64; n];
        let mut nodes = 0usize;
        let slack = radius2 * 1e-12 + 1e-12;
        self.level(n - 1, shift, radius2 + slack, 0.0, &mut z, &mut nodes, budget, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn level(
        &self,
        i: usize,
        shift: &[f64],
        bound: f64,
        partial: f64,
        z: &mut [i64],
        nodes: &mut usize,
        budget: usize,
        visit: &mut dyn FnMut(&[i64], f64),
    ) -> Result<()> {
        let qi = &self.q[i];
        let s: f64 = (i + 1..self.n).map(|j| qi[j] * (z[j] as f64 + shift[j])).sum();
        let center = -shift[i] - s;
        let rem = bound - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let half = (rem / qi[i]).sqrt();
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for zi in lo..=hi {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            z[i] = zi;
            let t = zi as f64 + shift[i] + s;
            let p = partial + qi[i] * t * t;
            if p > bound {
                continue;
            }
            if i == 0 {
                visit(z, p);
            } else {
                self.level(i - 1, shift, bound, p, z, nodes, budget, visit)?;
            }
        }
        z[i] = 0;
        Ok(())
    }

    /// Squared length of the shortest nonzero vector.
    pub fn min_norm(&self, budget: usize) -> Result<f64> {
        let r2 = (0..self.n)
            .map(|i| self.gram[(i, i)])
            .fold(f64::INFINITY, f64::min);
        let best = self
            .enumerate(r2, budget)?
            .into_iter()
            .filter(|v| v.coeffs.iter().any(|&c| c != 0))
            .map(|v| v.norm)
            .fold(f64::INFINITY, f64::min);
        Ok(best)
    }

    /// `N_Λ(m)` for every norm `m ≤ m_max`.
    pub fn theta(&self, m_max: f64, budget: usize) -> Result<ThetaCoefficients> {
        let mut acc = ThetaAccumulator::default();
        self.walk(&vec![0.0; self.n], m_max, budget, &mut |_, norm| acc.add(norm))?;
        Ok(acc.finish(1, m_max))
    }

    /// `Z^n`.
    pub fn integer(n: usize) -> Result<Self> {
        Lattice::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    /// The hexagonal lattice with minimal norm 1.
    pub fn a2() -> Self {
        Lattice::new(vec![vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).expect("A2 basis")
    }

    /// `D_n = {x ∈ Z^n : Σ x_i even}`, `n ≥ 2`, minimal norm 2.
    pub fn d(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { min: 2, actual: n });
        }
        let mut rows = Vec::with_capacity(n);
        let unit = |i: usize| -> Vec<f64> { (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect() };
        let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };
        rows.push(add(&unit(0), &unit(1), 1.0));
        rows.push(add(&unit(0), &unit(1), -1.0));
        for i in 1..n - 1 {
            rows.push(add(&unit(i), &unit(i + 1), -1.0));
        }
        Lattice::new(rows)
    }

    /// `E_8` (even coordinate system), determinant 1, minimal norm 2.
    pub fn e8() -> Self {
        let mut rows = vec![vec![0.0; 8]; 8];
        rows[0][0] = 2.0;
        for i in 1..7 {
            rows[i][i] = 1.0;
            rows[i][i - 1] = -1.0;
        }
        rows[7] = vec![0.5; 8];
        Lattice::new(rows).expect("E8 basis")
    }

    /// Looks up one of the named lattices `Z<n>`, `A2`, `D<n>`, `E8`.
    pub fn named(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let num = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Precondition(format!("unknown lattice {name:?}")))
        };
        match lower.as_str() {
            "a2" => Ok(Lattice::a2()),
            "e8" => Ok(Lattice::e8()),
            _ if lower.starts_with('z') => Lattice::integer(num(&lower[1..])?),
            _ if lower.starts_with('d') => Lattice::d(num(&lower[1..])?),
            _ => Err(Error::Precondition(format!(
                "unknown lattice {name:?} (expected Z<n>, A2, D<n> or E8)"
            ))),
        }
    }
}

/// Counts grouped by norm, stored as numerators over a common denominator
/// (`1` for lattices, `ℓ` for periodic packings).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCoefficients {
    pub m_max: f64,
    pub denominator: u64,
    /// `(norm, numerator)` sorted by norm.
    pub entries: Vec<(f64, u64)>,
}

impl ThetaCoefficients {
    /// Coefficient at norm `m` (0 when no vector has that norm).
    pub fn count_at(&self, m: f64) -> f64 {
        self.numerator_at(m) as f64 / self.denominator as f64
    }

    pub fn numerator_at(&self, m: f64) -> u64 {
        self.entries
            .iter()
            .find(|(k, _)| (k - m).abs() <= NORM_TOL)
            .map_or(0, |&(_, c)| c)
    }

    /// True when every norm is within [`NORM_TOL`] of an integer.
    pub fn is_integral(&self) -> bool {
        self.entries
            .iter()
            .all(|(m, _)| (m - m.round()).abs() <= NORM_TOL)
    }

    /// Rows `(m, count)`; integral series list every integer `0..=m_max`,
    /// zeros included.
    pub fn rows(&self) -> Vec<(f64, f64)> {
        if self.is_integral() {
            let top = (self.m_max + NORM_TOL).floor() as i64;
            (0..=top.max(0))
                .map(|m| (m as f64, self.count_at(m as f64)))
                .collect()
        } else {
            self.entries
                .iter()
                .map(|&(m, c)| (m, c as f64 / self.denominator as f64))
                .collect()
        }
    }
}

#[derive(Default)]
pub(crate) struct ThetaAccumulator {
    norms: Vec<f64>,
}

impl ThetaAccumulator {
    pub(crate) fn add(&mut self, norm: f64) {
        self.norms.push(norm);
    }

    pub(crate) fn finish(mut self, denominator: u64, m_max: f64) -> ThetaCoefficients {
        self.norms.sort_by(f64::total_cmp);
        let mut entries: Vec<(f64, u64)> = Vec::new();
        for m in self.norms {
            match entries.last_mut() {
                Some((rep, c)) if (m - *rep).abs() <= NORM_TOL => *c += 1,
                _ => entries.push((snap(m), 1)),
            }
        }
        ThetaCoefficients {
            m_max,
            denominator,
            entries,
        }
    }
}

/// Rounds values within [`NORM_TOL`] of an integer to it.
fn snap(m: f64) -> f64 {
    if (m - m.round()).abs() <= NORM_TOL {
        m.round()
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_theta() {
        let t = Lattice::integer(2).unwrap().theta(5.0, DEFAULT_BUDGET).unwrap();
        let got: Vec<f64> = (0..=5).map(|m| t.count_at(m as f64)).collect();
        assert_eq!(got, vec![1.0, 4.0, 4.0, 0.0, 4.0, 8.0]);
        assert_eq!(t.rows().len(), 6);
    }

    #[test]
    fn kissing_numbers() {
        assert_eq!(Lattice::a2().theta(1.0, DEFAULT_BUDGET).unwrap().count_at(1.0), 6.0);
        assert_eq!(Lattice::d(4).unwrap().theta(2.0, DEFAULT_BUDGET).unwrap().count_at(2.0), 24.0);
        let e8 = Lattice::e8();
        assert!((e8.determinant().abs() - 1.0).abs() < 1e-12);
        assert_eq!(e8.theta(2.0, DEFAULT_BUDGET).unwrap().count_at(2.0), 240.0);
        assert!((e8.min_norm(DEFAULT_BUDGET).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular_and_budget() {
        assert!(Lattice::new(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
        assert!(matches!(
            Lattice::integer(3).unwrap().theta(100.0, 10),
            Err(Error::BudgetExceeded(10))
        ));
    }

    #[test]
    fn membership() {
        let d4 = Lattice::d(4).unwrap();
        assert!(d4.contains(&[1.0, 1.0, 0.0, 0.0], 1e-9).unwrap());
        assert!(!d4.contains(&[1.0, 0.0, 0.0, 0.0], 1e-9).unwrap());
        assert!(Lattice::named("z3").is_ok());
        assert!(Lattice::named("q7").is_err());
    }
}

//! Oracles shared by the integration tests.
#![allow(dead_code)]

use sphcodes::lattice::Lattice;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn invert(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Counts lattice vectors by norm over the coefficient box that provably
/// contains every vector of norm ≤ `r2` (`|c_i|² ≤ r2 (G⁻¹)_ii`).
pub fn box_counts(l: &Lattice, r2: f64) -> Vec<(f64, u64)> {
    let b = l.basis_rows();
    let n = b.len();
    let g: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| dot(&b[i], &b[j])).collect()).collect();
    let gi = invert(&g);
    let bound: Vec<i64> = (0..n).map(|i| (r2 * gi[i][i]).sqrt().floor() as i64).collect();
    let mut counts: Vec<(f64, u64)> = Vec::new();
    let mut c: Vec<i64> = bound.iter().map(|b| -b).collect();
    // v = Σ c_i b_i, updated as the odometer ticks.
    let mut v: Vec<f64> = (0..n).map(|k| (0..n).map(|i| c[i] as f64 * b[i][k]).sum()).collect();
    loop {
        let norm = dot(&v, &v);
        if norm <= r2 + 1e-9 {
            match counts.iter_mut().find(|(m, _)| (m - norm).abs() < 1e-6) {
                Some(e) => e.1 += 1,
                None => counts.push((norm, 1)),
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                counts.sort_by(|a, b| a.0.total_cmp(&b.0));
                return counts;
            }
            if c[i] < bound[i] {
                c[i] += 1;
                v.iter_mut().zip(&b[i]).for_each(|(x, y)| *x += y);
                break;
            }
            let span = 2.0 * bound[i] as f64;
            v.iter_mut().zip(&b[i]).for_each(|(x, y)| *x -= span * y);
            c[i] = -bound[i];
            i += 1;
        }
    }
}


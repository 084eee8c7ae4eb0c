use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use sphcodes::bounds::simplex_code;
use sphcodes::lattice::{Lattice, DEFAULT_BUDGET};
use sphcodes::packing::{
    code_density, kissing_configuration, max_code_density, shell_code, MEstimate, PeriodicPacking,
};
use sphcodes::random::{random_code, rng};

mod common;
use common::box_counts;

/// Integer-ish basis rows with a bounded condition number.
fn basis(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, n), n).prop_map(move |m| {
        (0..n)
            .map(|i| (0..n).map(|j| m[i][j] * 0.4 + if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    })
}

fn lattice() -> impl Strategy<Value = Lattice> {
    (2usize..=4).prop_flat_map(basis).prop_filter_map("singular basis", |b| {
        let l = Lattice::new(b).ok()?;
        (l.determinant().abs() > 0.1).then_some(l)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn theta_matches_box_enumeration(l in lattice(), m_max in 1.0f64..=10.0) {
        let t = l.theta(m_max, DEFAULT_BUDGET).unwrap();
        let oracle = box_counts(&l, m_max);
        let total: f64 = t.rows().iter().map(|r| r.1).sum();
        let want: u64 = oracle.iter().map(|e| e.1).sum();
        prop_assert_eq!(total, want as f64);
        for (norm, count) in oracle {
            prop_assert_eq!(t.count_at(norm), count as f64, "norm {}", norm);
        }
    }

    #[test]
    fn shell_codes_match_theta_shells(l in lattice(), pick in any::<prop::sample::Index>()) {
        let t = l.theta(6.0, DEFAULT_BUDGET).unwrap();
        let shells: Vec<(f64, f64)> = t.rows().into_iter().filter(|r| r.0 > 0.0 && r.1 > 0.0).collect();
        prop_assume!(!shells.is_empty());
        let (m, count) = shells[pick.index(shells.len())];
        let p = PeriodicPacking::from_lattice(l.clone()).unwrap();
        let s = shell_code(&p, &vec![0.0; l.dim()], m.sqrt()).unwrap();
        prop_assert_eq!(s.code.card() as f64, count);
        prop_assert!(s.min_angle >= s.guaranteed_angle - 1e-9);
    }

    #[test]
    fn code_density_at_most_one(seed in any::<u64>(), n in 2usize..=5, card in 2usize..=24) {
        if let Some(x) = random_code(n, card, 0.3, &mut rng(seed)) {
            prop_assert!(code_density(&x).unwrap() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn integer_lattice_kissing() {
    for n in 1..=6 {
        let p = PeriodicPacking::from_lattice(Lattice::integer(n).unwrap()).unwrap();
        let k = kissing_configuration(&p, 0).unwrap();
        assert_eq!(k.card(), 2 * n);
        // In dimension one the two neighbours are antipodal.
        let want = if n == 1 { PI } else { FRAC_PI_2 };
        assert!((k.phi().unwrap() - want).abs() < 1e-12, "n = {n}");
        if n >= 2 {
            assert!(code_density(&k).unwrap() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn constructed_codes_have_density_at_most_one() {
    for n in 2..=8 {
        assert!(code_density(&simplex_code(n).unwrap()).unwrap() <= 1.0 + 1e-12);
    }
    for name in ["A2", "D4", "E8", "Z3"] {
        let p = PeriodicPacking::from_lattice(Lattice::named(name).unwrap()).unwrap();
        let k = kissing_configuration(&p, 0).unwrap();
        assert!(code_density(&k).unwrap() <= 1.0 + 1e-9, "{name}");
    }
}

#[test]
fn small_angle_circle_density_tends_to_one() {
    for phi in [1e-4, 1e-6, 1e-7] {
        let d = max_code_density(2, phi, MEstimate::Circle).unwrap();
        assert!(d <= 1.0 && 1.0 - d <= phi, "phi = {phi}: {d}");
    }
    let d = max_code_density(2, 1e-7, MEstimate::Circle).unwrap();
    assert!((d - 1.0).abs() < 1e-6);
}

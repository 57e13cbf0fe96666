//! Standalone property suites: structural invariants that must hold for
//! every cataloged group and for randomly sampled rotations, independent of
//! any reference table.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use perrot::group::{build_group, GroupName};
use perrot::holonomy::asymmetric_flatness_check;
use perrot::irreps::irreps;
use perrot::molecule::{perm_action_from_geometry, preset};
use perrot::species::enumerate_species;
use perrot::wigner::wigner_d;
use perrot::{GroupSpec, Rotation};

fn catalog() -> Vec<GroupName> {
    let mut names = vec![GroupName::T, GroupName::O, GroupName::I];
    for n in 2..=8 {
        names.push(GroupName::C(n));
        names.push(GroupName::D(n));
    }
    names
}

#[test]
fn group_axioms() {
    for name in catalog() {
        let g = build_group(name).unwrap();
        let n = g.order();
        assert_eq!(g.mult.len(), n, "{name}");
        for a in 0..n {
            // Identity and two-sided inverse.
            assert_eq!(g.mult[0][a], a, "{name}");
            assert_eq!(g.mult[a][0], a, "{name}");
            assert_eq!(g.mult[a][g.inv[a]], 0, "{name}");
            assert_eq!(g.mult[g.inv[a]][a], 0, "{name}");
            // Rows and columns are permutations (closure + cancellation).
            let mut seen = vec![false; n];
            for b in 0..n {
                assert!(!seen[g.mult[a][b]], "{name}: row {a} repeats");
                seen[g.mult[a][b]] = true;
            }
        }
        // Associativity, exhaustive up to order 24 and sampled beyond.
        let triples: Vec<(usize, usize, usize)> = if n <= 24 {
            (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect()
        } else {
            (0..n).map(|a| (a, (7 * a + 3) % n, (13 * a + 5) % n)).collect()
        };
        for (a, b, c) in triples {
            assert_eq!(g.mult[g.mult[a][b]][c], g.mult[a][g.mult[b][c]], "{name}");
        }
    }
}

#[test]
fn character_orthogonality_and_dimension_sum() {
    for name in catalog() {
        let g = build_group(name).unwrap();
        let reps = irreps(&g).unwrap();
        let order = BigRational::from_integer(g.order().into());
        assert_eq!(
            reps.iter().map(|r| r.dim * r.dim).sum::<usize>(),
            g.order(),
            "{name}: dimension sum rule"
        );
        for (i, ri) in reps.iter().enumerate() {
            for (j, rj) in reps.iter().enumerate() {
                let mut acc = perrot::cyclotomic::Cyclotomic::zero(1);
                for e in 0..g.order() {
                    acc = acc + ri.characters[e].conj() * rj.characters[e].clone();
                }
                let want = if i == j { order.clone() } else { BigRational::from_integer(0.into()) };
                assert_eq!(acc.as_rational(), Some(want), "{name}: <{}, {}>", ri.label, rj.label);
            }
        }
    }
}

#[test]
fn schmidt_rank_equals_species_dimension() {
    for molecule in ["BF3", "CH4", "SF6", "13C60"] {
        let p = preset(molecule).unwrap();
        let GroupSpec::Finite(gname) = p.group else { panic!("{molecule} should be finite") };
        let g = build_group(gname).unwrap();
        let reps = irreps(&g).unwrap();
        let action = perm_action_from_geometry(&g, &p).unwrap();
        let report = enumerate_species(&g, &reps, &action, &p).unwrap();
        for sp in &report.species {
            let d = sp.d;
            let m = DMatrix::from_fn(d, d, |r, c| sp.coupling[r * d + c]);
            let sv = m.svd(false, false).singular_values;
            let want = 1.0 / (d as f64).sqrt();
            assert_eq!(sv.len(), d, "{molecule} {}", sp.display);
            for s in sv.iter() {
                assert!((s - want).abs() < 1e-9, "{molecule} {}: {s}", sp.display);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 16,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn wigner_d_is_a_unitary_homomorphism(
        a1 in 0.0..std::f64::consts::TAU, b1 in 0.0..std::f64::consts::PI, c1 in 0.0..std::f64::consts::TAU,
        a2 in 0.0..std::f64::consts::TAU, b2 in 0.0..std::f64::consts::PI, c2 in 0.0..std::f64::consts::TAU,
        ell in 0usize..9,
    ) {
        let r1 = Rotation::from_euler(a1, b1, c1);
        let r2 = Rotation::from_euler(a2, b2, c2);
        let d1 = wigner_d(ell, &r1).unwrap().matrix;
        let d2 = wigner_d(ell, &r2).unwrap().matrix;
        let d12 = wigner_d(ell, &r1.compose(&r2)).unwrap().matrix;
        let n = 2 * ell + 1;
        let unit = (&d1.adjoint() * &d1 - DMatrix::<Complex64>::identity(n, n))
            .iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let homo = (&d1 * &d2 - &d12).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        prop_assert!(unit < 1e-11, "unitarity residual {unit}");
        prop_assert!(homo < 1e-10, "homomorphism residual {homo}");
    }

    #[test]
    fn asymmetric_connection_trace_vanishes(
        ax in -1.0f64..1.0, ay in -1.0f64..1.0,
        phase in 0.0..std::f64::consts::TAU,
    ) {
        // A smooth closed loop through a random region of SO(3).
        let path = move |t: f64| {
            let th = std::f64::consts::TAU * t + phase;
            Rotation::from_euler(0.3 * ax * th.sin(), 0.2 + 0.1 * (ay * th).cos().abs(), th)
        };
        let traces = asymmetric_flatness_check(6, path, 12, 2e-5).unwrap();
        for (ell, tr) in traces.iter().enumerate() {
            prop_assert!(*tr < 1e-6, "l = {ell}: trace residual {tr}");
        }
    }
}

//! Cross-module invariants on random complexes.

use hdx_core::cochain::{self, WeightFunction, DEFAULT_BUDGET};
use hdx_core::expansion::{cheeger_check, z2_expansion_exact};
use hdx_core::garland::{verify_adjacency_intervals, verify_garland};
use hdx_core::gf2::{BitVec, EchelonBasis};
use hdx_core::random::{self, ModelSpec};
use hdx_core::spectral;
use hdx_core::{ComplexFile, Face, ModelKind, SimplicialComplex, Z2Cochain};
use proptest::prelude::*;

fn lm(n: usize, k: i32, p: f64, seed: u64) -> SimplicialComplex {
    random::linial_meshulam(n, k, p, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coboundary_squares_to_zero(n in 4usize..9, k in 2i32..4, p in 0.2f64..1.0, seed in any::<u64>()) {
        prop_assume!((k as usize) < n);
        let x = lm(n, k, p, seed);
        for i in -1..x.dim() - 1 {
            let lo = cochain::coboundary_csr(&x, i).unwrap();
            let hi = cochain::coboundary_csr(&x, i + 1).unwrap();
            for c in 0..x.face_count(i) {
                let mut e = vec![0.0; x.face_count(i)];
                e[c] = 1.0;
                let out = hi.mul_vec(&lo.mul_vec(&e));
                prop_assert!(out.iter().all(|&v| v == 0.0));
            }
            for c in 0..x.face_count(i) {
                let once = cochain::z2_coboundary_bits(&x, i, &BitVec::unit(x.face_count(i), c)).unwrap();
                prop_assert!(cochain::z2_coboundary_bits(&x, i + 1, &once).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn class_norm_vanishes_exactly_on_coboundaries(n in 4usize..9, p in 0.3f64..1.0, seed in any::<u64>(), bits in prop::collection::vec(any::<bool>(), 36)) {
        let x = lm(n, 2, p, seed);
        let support: Vec<usize> = (0..x.face_count(1)).filter(|&i| bits[i]).collect();
        let f = Z2Cochain { dim: 1, support };
        let norm = cochain::z2_class_norm(&x, &f, DEFAULT_BUDGET).unwrap();
        let basis = cochain::coboundary_span_basis(&x, 1).unwrap();
        let in_b = EchelonBasis::from_vectors(x.face_count(1), &basis).contains(&f.to_bits(&x).unwrap());
        prop_assert_eq!(norm.weight == 0, in_b);
        let shift = cochain::z2_coboundary(&x, &Z2Cochain { dim: 0, support: vec![0, n - 1] }).unwrap();
        let mut g = f.to_bits(&x).unwrap();
        g.xor_assign(&shift.to_bits(&x).unwrap());
        let moved = cochain::z2_class_norm(&x, &Z2Cochain::from_bits(1, &g), DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(moved.weight, norm.weight);
    }

    #[test]
    fn link_degrees_match(n in 5usize..10, p in 0.3f64..1.0, seed in any::<u64>()) {
        let x = lm(n, 2, p, seed);
        prop_assert_eq!(&x.link(&Face::empty()).unwrap().complex, &x);
        for v in 0..n {
            let link = x.link(&Face::vertex(v)).unwrap();
            for (u, &orig) in link.vertex_map.iter().enumerate() {
                let edge = Face::from_unsorted(vec![v, orig]);
                prop_assert_eq!(x.degree(&edge).unwrap(), link.complex.degree(&Face::vertex(u)).unwrap());
            }
        }
    }

    #[test]
    fn sandwich_theorems_hold_on_pure_samples(n in 6usize..14, p in 0.3f64..1.0, seed in any::<u64>()) {
        let x = lm(n, 2, p, seed);
        prop_assume!(x.is_pure());
        let g = verify_garland(&x).unwrap();
        prop_assert!(g.passed, "{:?}", g.violations);
        let d = spectral::mean_degree(&x);
        for scale in [0.5, 1.0, 2.0] {
            let a = verify_adjacency_intervals(&x, scale * d).unwrap();
            prop_assert!(a.passed, "{:?}", a.violations);
        }
    }

    #[test]
    fn positive_expansion_forces_vanishing_cohomology(n in 4usize..7, p in 0.2f64..1.0, seed in any::<u64>()) {
        let x = lm(n, 2, p, seed);
        let r = z2_expansion_exact(&x, 2, DEFAULT_BUDGET).unwrap();
        let h = cochain::gf2_cohomology_dim(&x, 1).unwrap();
        if r.epsilon > 0.0 {
            prop_assert_eq!(h, 0);
            prop_assert_eq!(spectral::hodge_check(&x, 1, &WeightFunction::Unit).unwrap().harmonic_dim, 0);
        } else {
            prop_assert!(h > 0);
        }
    }

    #[test]
    fn adding_faces_keeps_the_class_norm(n in 6usize..12, q in 0.0f64..1.0, seed in any::<u64>()) {
        let y = random::counterexample_y(n, 2, 1.0, seed).unwrap();
        let z = random::counterexample_z(n, 2, 1.0, q, seed).unwrap();
        prop_assert_eq!(&y.a, &z.a);
        let ny = cochain::z2_class_norm(&y.complex, &y.a, DEFAULT_BUDGET).unwrap();
        let nz = cochain::z2_class_norm(&z.complex, &z.a, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(ny.weight, nz.weight);
        prop_assert_eq!(cochain::z2_coboundary(&y.complex, &y.a).unwrap().weight(), 0);
        prop_assert!(z.complex.face_count(2) >= y.complex.face_count(2));
    }

    #[test]
    fn complex_files_round_trip(n in 4usize..10, p in 0.2f64..1.0, seed in any::<u64>()) {
        let spec = ModelSpec { model: ModelKind::CounterexampleZ, n, k: 2, p, q: 0.2, seed };
        let x = random::generate(&spec).unwrap().complex;
        let mut file = x.to_file();
        file.model = Some(spec.clone());
        let json = serde_json::to_string(&file).unwrap();
        let back: ComplexFile = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.model.as_ref(), Some(&spec));
        prop_assert_eq!(SimplicialComplex::from_file(&back).unwrap(), x);
    }
}

#[test]
fn counterexample_z_with_q_zero_is_y() {
    for seed in 0..10 {
        let y = random::counterexample_y(12, 2, 0.7, seed).unwrap();
        let z = random::counterexample_z(12, 2, 0.7, 0.0, seed).unwrap();
        assert_eq!(y.complex, z.complex);
        assert_eq!(y.a, z.a);
    }
}

#[test]
fn cheeger_on_circulant_graphs() {
    for n in [7usize, 9, 12, 15] {
        for jumps in [vec![1, 2], vec![1, 3], vec![2, 3]] {
            let mut e = Vec::new();
            for v in 0..n {
                for &j in &jumps {
                    let w = (v + j) % n;
                    e.push((v.min(w), v.max(w)));
                }
            }
            let g = SimplicialComplex::graph(n, &e).unwrap();
            let r = cheeger_check(&g, DEFAULT_BUDGET).unwrap();
            assert!(r.passed(), "n={n} jumps={jumps:?}: {r:?}");
        }
    }
}

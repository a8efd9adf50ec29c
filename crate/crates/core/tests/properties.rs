use std::sync::Arc;

use latsuper_core::group::{make_group, GroupSpec};
use latsuper_core::lattice::{normal_lattice, NodeId, NormalLattice};
use latsuper_core::product::{decompose_class_function, tensor_product};
use latsuper_core::sct::identities::{basis_character_value, prime_set_identity, subset_identity};
use latsuper_core::sct::{chi_bullet_moebius, chi_bullet_multiplicative, degree_sum, ClassFunction, SctError};
use latsuper_core::{Rational, SCTheory};
use proptest::prelude::*;

fn cyclic(n: usize) -> NormalLattice {
    normal_lattice(Arc::new(make_group(&GroupSpec::cyclic(n)).unwrap()))
}

fn sublattice(n: usize, picks: &[usize]) -> Arc<NormalLattice> {
    let full = cyclic(n);
    let gens: Vec<NodeId> = picks.iter().map(|&i| NodeId(i % full.len())).collect();
    Arc::new(full.sublattice_closure(&gens).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_formula_matches_moebius(n in 1usize..=60, picks in prop::collection::vec(0usize..64, 0..4)) {
        let lat = sublattice(n, &picks);
        let theory = SCTheory::new(lat.clone());
        for id in lat.ids() {
            match chi_bullet_multiplicative::<Rational>(theory.partition(), id) {
                Ok(c) => {
                    let m = chi_bullet_moebius::<Rational>(theory.partition(), id).unwrap();
                    prop_assert_eq!(c.function, m.function);
                }
                Err(SctError::FormulaInapplicable { .. }) => {}
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
    }

    #[test]
    fn float_path_tracks_exact(n in 1usize..=60) {
        let lat = Arc::new(cyclic(n));
        let theory = SCTheory::new(lat.clone());
        for id in lat.ids() {
            let f = chi_bullet_moebius::<f64>(theory.partition(), id).unwrap();
            let exact = &theory.bullet(id).function;
            let back = exact.map(|r: &Rational| latsuper_core::scalar::Scalar::to_f64(r));
            prop_assert!(f.function.approx_eq(&back));
        }
    }

    #[test]
    fn degree_sum_closed_form(n in 1usize..=36, k in 0usize..16, l in 0usize..16, m in 0usize..16) {
        let lat = cyclic(n);
        let pick = |i: usize| NodeId(i % lat.len());
        let s = degree_sum(&lat, pick(k), pick(l), pick(m)).unwrap();
        prop_assert!(s.closed_form.is_none() || s.agrees(), "{:?}", s);
    }

    #[test]
    fn decomposition_round_trips(n in 1usize..=30, picks in prop::collection::vec(0usize..64, 0..3), seed in prop::collection::vec(-5i64..5, 60)) {
        let theory = SCTheory::new(sublattice(n, &picks));
        let blocks = theory.partition().len();
        let f = ClassFunction::new(seed.iter().take(blocks).map(|&v| Rational::from_integer(v.into())).collect());
        if f.len() == blocks {
            let terms = decompose_class_function(&theory, &f).unwrap();
            prop_assert!(terms.len() <= blocks);
        }
    }

    #[test]
    fn products_have_positive_expansions(n in 1usize..=40, a in 0usize..16, b in 0usize..16) {
        let theory = SCTheory::new(Arc::new(cyclic(n)));
        let len = theory.lattice().len();
        let rep = tensor_product(&theory, NodeId(a % len), NodeId(b % len)).unwrap();
        prop_assert!(rep.coefficients.iter().all(|t| t.coefficient > Rational::from_integer(0.into())));
        if rep.hypotheses_hold() {
            prop_assert!(rep.pointwise_identity);
        }
    }

    #[test]
    fn subset_identity_sides_agree(size in 1u32..=5, q in 2i64..=5, a in 0u32..32, d in 0u32..32) {
        let mask = (1u32 << size) - 1;
        let (lhs, rhs) = subset_identity(size, q, a & mask, d & mask);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(basis_character_value(size, q, a & mask, d & mask), lhs);
    }
}

#[test]
fn prime_set_identity_small_moduli() {
    let primes = [2u64, 3, 5];
    for a in [1u64, 2, 3, 5, 6, 10, 15, 30] {
        for b in [1u64, 2, 3, 5, 6, 10, 15, 30] {
            let (lhs, rhs) = prime_set_identity(&primes, a, b);
            assert_eq!(lhs, rhs, "a = {a}, b = {b}");
        }
    }
}

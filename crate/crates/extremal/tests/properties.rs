//! Randomized invariants: field axioms, row reduction, classification
//! stability under relabelling, and the identities behind membership.

mod common;

use common::*;
use extremal::chevalley::{build_chevalley, AmbientAlgebra};
use extremal::dynkin::{builtin_diagram, classify};
use extremal::field::{Field, FieldSpec, Fp};
use extremal::lf::{build_bracket, membership_in_x, premet_holds, scale, ParameterSet};
use extremal::linalg::Matrix;
use extremal::sandwich::SandwichAlgebra;
use extremal::word::MonomialWord;
use extremal::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f5() -> FieldSpec {
    FieldSpec::prime_field(5).unwrap()
}

fn check_rref<K: Field>(spec: FieldSpec, entries: &[Vec<i64>]) {
    let rows: Vec<Vec<K>> = entries
        .iter()
        .map(|r| r.iter().map(|&e| K::embed(spec, e)).collect())
        .collect();
    let m = Matrix::from_rows(spec, rows).unwrap();
    let r = m.rref();
    assert_eq!(r.transform.mul(&m).unwrap(), r.reduced, "T*A = R");
    for w in r.pivot_columns.windows(2) {
        assert!(w[0] < w[1], "pivot columns increase");
    }
    for (row, &col) in r.pivot_columns.iter().enumerate() {
        for i in 0..m.rows() {
            let expected = K::embed(spec, (i == row) as i64);
            assert_eq!(r.reduced.get(i, col), &expected, "pivot column is a unit");
        }
    }
    let kernel = m.kernel_basis();
    assert_eq!(m.rank() + kernel.len(), m.cols(), "rank-nullity");
    for k in &kernel {
        for i in 0..m.rows() {
            let mut acc = K::embed(spec, 0);
            for j in 0..m.cols() {
                acc = acc + m.get(i, j).clone() * k[j].clone();
            }
            assert!(acc.is_zero(), "kernel vector annihilates");
        }
    }
}

fn entry_grid() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..10, c), r)
    })
}

proptest! {
    #[test]
    fn prime_field_axioms(
        p in prop::sample::select(vec![3u64, 5, 7, 13]),
        a in -200i64..200,
        b in -200i64..200,
        c in -200i64..200,
    ) {
        let spec = FieldSpec::prime_field(p).unwrap();
        let e = |n: i64| Fp::embed(spec, n);
        prop_assert_eq!((e(a) + e(b)) + e(c), e(a) + (e(b) + e(c)));
        prop_assert_eq!(e(a) * (e(b) + e(c)), e(a) * e(b) + e(a) * e(c));
        prop_assert_eq!(e(a) * e(b), e(b) * e(a));
        prop_assert!((e(a) + e(-a)).is_zero());
        if !e(a).is_zero() {
            prop_assert_eq!(e(a).inv().unwrap() * e(a), e(1));
        }
    }

    #[test]
    fn row_reduction_invariants(entries in entry_grid()) {
        check_rref::<BigRational>(FieldSpec::Rationals, &entries);
        check_rref::<Fp>(f5(), &entries);
    }

    #[test]
    fn classification_is_label_invariant(
        name in prop::sample::select(vec![
            "A2", "A3", "A5", "D4", "D5", "E6", "A2~", "A3~", "A4~", "D4~", "E6~",
        ]),
        seed in any::<u64>(),
    ) {
        let g = builtin_diagram(name).unwrap();
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.permuted(&perm);
        let a = classify(&g);
        let b = classify(&h);
        prop_assert_eq!(a.name(), b.name());
        prop_assert_eq!(a.is_affine(), b.is_affine());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completed_parameters_stay_members_under_torus(
        seed in any::<u64>(),
        name in prop::sample::select(vec!["A2~", "A3"]),
    ) {
        let g = builtin_diagram(name).unwrap();
        let sand = SandwichAlgebra::<Fp>::build(&g, f5(), 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = random_member_params(&sand, &mut rng);
        prop_assert!(membership_in_x(&build_bracket(&sand, params.clone())).member);
        let t: Vec<Fp> = (0..g.n())
            .map(|_| Fp::sample_nonzero(f5(), &mut rng))
            .collect();
        let moved = scale(&sand, &t, &params);
        prop_assert!(membership_in_x(&build_bracket(&sand, moved)).member);
    }

    #[test]
    fn premet_identity_on_random_members(
        seed in any::<u64>(),
        x in 0usize..3,
        u in 0usize..8,
        v in 0usize..8,
    ) {
        let g = builtin_diagram("A2~").unwrap();
        let sand = SandwichAlgebra::<Fp>::build(&g, f5(), 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = random_member_params(&sand, &mut rng);
        let alg = build_bracket(&sand, params);
        prop_assert!(premet_holds(&alg, x, u, v));
    }

    #[test]
    fn kappa_is_symmetric_on_completed_edges(
        seed in any::<u64>(),
        name in prop::sample::select(vec!["A2", "A3", "D4", "A2~", "A3~"]),
    ) {
        let g = builtin_diagram(name).unwrap();
        let sand = SandwichAlgebra::<Fp>::build(&g, f5(), 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = random_member_params(&sand, &mut rng);
        for &(a, b) in g.edges() {
            let ia = sand.index_of_word(&MonomialWord(vec![a])).unwrap();
            let ib = sand.index_of_word(&MonomialWord(vec![b])).unwrap();
            prop_assert_eq!(params.get(a, ib), params.get(b, ia));
        }
    }

    #[test]
    fn sandwich_identity_holds_at_zero(
        name in prop::sample::select(vec!["A2", "A3", "D4", "A2~", "A3~", "D4~"]),
        x in any::<usize>(),
        j in any::<usize>(),
    ) {
        let g = builtin_diagram(name).unwrap();
        let sand = SandwichAlgebra::<Fp>::build(&g, f5(), 24).unwrap();
        let alg = build_bracket(&sand, ParameterSet::zero(f5()));
        let x = x % g.n();
        let j = j % sand.dimension();
        let ix = sand.index_of_word(&MonomialWord(vec![x])).unwrap();
        let one = Fp::embed(f5(), 1);
        let inner = alg.bracket_vec(&[(ix, one.clone())], &[(j, one.clone())]);
        let outer = alg.bracket_vec(&[(ix, one)], &inner);
        prop_assert!(outer.is_empty());
    }

    #[test]
    fn zero_bracket_respects_the_grading(
        name in prop::sample::select(vec!["A3", "D4", "A2~", "A3~"]),
        i in any::<usize>(),
        j in any::<usize>(),
    ) {
        let g = builtin_diagram(name).unwrap();
        let sand = SandwichAlgebra::<Fp>::build(&g, f5(), 24).unwrap();
        let i = i % sand.dimension();
        let j = j % sand.dimension();
        let sum = sand.basis()[i].weight.plus(&sand.basis()[j].weight);
        for (k, c) in sand.bracket_zero(i, j) {
            prop_assert!(!c.is_zero());
            prop_assert_eq!(&sand.basis()[k].weight, &sum);
        }
    }

    #[test]
    fn chevalley_scaling_commutes_with_the_bracket(
        s1 in 1i64..6,
        s2 in 1i64..6,
        i in 0usize..8,
        j in 0usize..8,
    ) {
        let g = builtin_diagram("A2").unwrap();
        let alg = build_chevalley::<BigRational>(&g, FieldSpec::Rationals).unwrap();
        let s = vec![BigRational::int(s1), BigRational::int(s2)];
        let one = BigRational::int(1);
        let a = vec![(i, one.clone())];
        let b = vec![(j, one)];
        let lhs = alg.torus_scale(&s, &alg.bracket(&a, &b));
        let rhs = alg.bracket(&alg.torus_scale(&s, &a), &alg.torus_scale(&s, &b));
        prop_assert_eq!(lhs, rhs);
    }
}

use num_bigint::BigInt;
use proptest::prelude::*;

use cayley::cg::{chi_sequence_check, default_probes, KClass};
use cayley::derived::{
    atoms, euler, euler_matrix, integer_determinant, is_upper_unitriangular, presets, same_class, ClassCombo,
};
use cayley::sequences::{all_sequences, chi_consistency};
use cayley::{
    check_exceptional_collection, complex_ext, lefschetz_validate, mutate_left, mutate_right, residual_check, Exec,
    FormalComplex, Verdict,
};

#[test]
fn fifteen_objects_are_exceptional() {
    let objs = presets::cg15();
    assert_eq!(objs.len(), 15);
    let t = check_exceptional_collection(&objs, Exec::Parallel);
    assert_eq!(t.verdict(), Verdict::Exceptional);
    assert!(lefschetz_validate(&objs, &presets::CG15_PARTITION));
}

#[test]
fn verdict_does_not_depend_on_executor() {
    let objs = presets::cg15();
    let a = check_exceptional_collection(&objs, Exec::Sequential);
    let b = check_exceptional_collection(&objs, Exec::Parallel);
    assert_eq!(a, b);
}

#[test]
fn swapped_pair_is_not_exceptional() {
    let mut objs = presets::block(0);
    objs.swap(0, 1);
    match check_exceptional_collection(&objs, Exec::Sequential).verdict() {
        Verdict::NotExceptional(cells) => assert!(cells.contains(&(1, 0))),
        v => panic!("{v}"),
    }
}

#[test]
fn lefschetz_rejects_bad_partitions() {
    let objs = presets::cg15();
    assert!(!lefschetz_validate(&objs, &[5, 4, 4, 2]));
    assert!(!lefschetz_validate(&objs, &[3, 4, 5, 3]));
    assert!(!lefschetz_validate(&objs, &[5, 4, 3]));
}

#[test]
fn euler_matrix_is_unitriangular() {
    let objs = presets::cg15();
    let m = euler_matrix(&objs, Exec::Sequential);
    assert!(is_upper_unitriangular(&m));
    assert_eq!(integer_determinant(&m), BigInt::from(1));
}

#[test]
fn determined_ext_has_the_euler_characteristic() {
    let objs = presets::cg15();
    for x in &objs[..6] {
        for y in &objs[..6] {
            let o = complex_ext(x, y).unwrap();
            if let Some(g) = o.result.determined() {
                assert_eq!(g.euler_characteristic(), euler(x, y), "Ext({}, {})", x.name, y.name);
            }
        }
    }
}

#[test]
fn mutations_of_the_r_triangle() {
    let w2q = FormalComplex::atom(atoms::wedge2_q(0));
    let w2u = FormalComplex::atom(atoms::wedge2_u_dual(0));
    let r = presets::r();
    assert!(mutate_left(&w2u, &r).unwrap().same_terms(&w2q));
    let m = mutate_right(&w2u, &w2q).unwrap();
    assert!(same_class(&ClassCombo::of(&m), &ClassCombo::of(&r)));
}

#[test]
fn sigma21_has_a_degree_two_self_extension_after_twist() {
    let s = FormalComplex::atom(atoms::sigma21_u_dual(0));
    let o = complex_ext(&s, &s.twist(-1)).unwrap();
    let g = o.result.determined().expect("determined");
    assert!(g.is_trivial_in(2), "{g}");
    assert_eq!(g.euler_characteristic(), BigInt::from(1));
}

#[test]
fn residual_category_minimum() {
    let rep = residual_check(Exec::Sequential).unwrap();
    assert!(rep.chi_orthogonal());
    assert!(rep.minimum_met());
    assert!(rep.tau_holds());
    assert_eq!(rep.tau.len(), 3);
}

#[test]
fn exact_sequences_are_chi_consistent() {
    let checks = chi_consistency();
    assert_eq!(checks.len(), 19);
    for c in checks {
        assert!(c.holds, "{}", c.name);
    }
}

#[test]
fn broken_sequences_are_caught() {
    let probes = default_probes();
    for s in all_sequences() {
        let mut terms = s.terms.clone();
        terms.remove(terms.len() / 2);
        assert!(!chi_sequence_check(&terms, &probes), "dropping a term of {} went unnoticed", s.name);
    }
    let o = KClass::from(atoms::structure(0));
    assert!(!chi_sequence_check(&[o.clone(), o.twisted(1)], &probes));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn euler_pairing_is_twist_invariant(i in 0usize..15, j in 0usize..15, t in -2i64..=2) {
        let objs = presets::cg15();
        prop_assert_eq!(euler(&objs[i].twist(t), &objs[j].twist(t)), euler(&objs[i], &objs[j]));
    }

    #[test]
    fn shift_negates_class(i in 0usize..15, j in 0usize..15, m in -3i64..=3) {
        let objs = presets::cg15();
        let sign = if m % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(euler(&objs[i].shift(m), &objs[j]), euler(&objs[i], &objs[j]) * sign);
    }

    #[test]
    fn mutation_cone_class(i in 0usize..5, j in 0usize..5) {
        // class of L_E(G) is [G] - χ(E, G)[E]
        prop_assume!(i < j);
        let objs = presets::cg15();
        let (e, g) = (&objs[i], &objs[j]);
        if let Ok(m) = mutate_left(e, g) {
            let want = ClassCombo::of(g).plus(&ClassCombo::of(e).scaled(&(-euler(e, g))));
            prop_assert!(same_class(&ClassCombo::of(&m), &want));
        }
    }
}

use proptest::prelude::*;

use cayley::cg::{atom_cohomology, atom_cohomology_serre, cg_cohomology, euler_of, CohomologyResult, CG};
use cayley::schur::{dualize, twist, SchurBundle};
use cayley::table::{cohomology_table, table_row, TABLE_WEIGHTS};
use cayley::weights::{DominantWeight, GradedRep};
use cayley::Exec;

fn gl7(v: &[i64]) -> DominantWeight {
    DominantWeight::new(v.to_vec()).unwrap().padded(7).unwrap()
}

fn atom(b: &[i64]) -> SchurBundle {
    SchurBundle::new(CG.ambient, b.to_vec(), vec![]).unwrap()
}

/// Nonzero cells of the reference table; everything else vanishes.
const REFERENCE: [([i64; 3], i64, &[i64]); 9] = [
    ([-1, -1, -5], 4, &[]),
    ([0, 0, -3], 2, &[]),
    ([0, 0, 0], 0, &[]),
    ([1, 0, 0], 0, &[1]),
    ([2, 0, 0], 0, &[2]),
    ([1, 1, -1], 0, &[]),
    ([2, 1, -1], 0, &[1]),
    ([1, 1, 0], 0, &[1, 1]),
    ([2, 1, 0], 0, &[2, 1]),
];

#[test]
fn reference_table() {
    for w in TABLE_WEIGHTS {
        let row = table_row(w);
        let want = match REFERENCE.iter().find(|(x, _, _)| *x == w) {
            Some((_, d, rep)) => GradedRep::single(*d, gl7(rep)),
            None => GradedRep::zero(),
        };
        assert_eq!(row.cg.determined(), Some(&want), "weight {w:?}");
    }
}

#[test]
fn shaded_cells_are_where_cg_and_grassmannian_differ() {
    let shaded: Vec<[i64; 3]> = cohomology_table(Exec::Sequential).into_iter().filter(|r| r.shaded).map(|r| r.weight).collect();
    assert_eq!(shaded, vec![[0, 0, -3], [1, 1, -1], [2, 1, -1]]);
    assert_eq!(table_row([-1, -1, -5]).ambient, GradedRep::single(4, gl7(&[])));
}

#[test]
fn table_is_executor_independent() {
    let a = cohomology_table(Exec::Sequential);
    let b = cohomology_table(Exec::Parallel);
    assert_eq!(a.len(), 42);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.cg, y.cg);
        assert_eq!(x.ambient, y.ambient);
    }
}

#[test]
fn structure_and_canonical_sheaf() {
    assert!(atom_cohomology(&atom(&[0, 0, 0])).is_determined_point());
    let top = atom_cohomology(&atom(&[CG.canonical_twist; 3]));
    let g = top.determined().expect("determined").modulo_det();
    assert!(g.is_trivial_in(CG.dim as i64), "{g}");
}

#[test]
fn twisting_line_bundles_are_acyclic_in_the_window() {
    // O(-1), O(-2), O(-3) have no cohomology
    for t in 1..=3 {
        assert!(atom_cohomology(&atom(&[-t; 3])).is_determined_zero(), "O(-{t})");
    }
}

fn dominant3(lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(lo..=hi, 3).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abutment_keeps_euler_characteristic(b in dominant3(-6, 3)) {
        let s = atom(&b);
        if let CohomologyResult::Determined(g) = atom_cohomology(&s) {
            prop_assert_eq!(g.euler_characteristic(), euler_of(&s.clone().into_sum()));
        }
    }

    #[test]
    fn serre_route_agrees_with_direct(b in dominant3(-6, 3)) {
        let s = atom(&b);
        if let (CohomologyResult::Determined(x), CohomologyResult::Determined(y)) =
            (atom_cohomology(&s), atom_cohomology_serre(&s))
        {
            prop_assert_eq!(x.modulo_det().dimensions(), y.modulo_det().dimensions());
        }
    }

    #[test]
    fn euler_characteristic_is_serre_symmetric(b in dominant3(-6, 3)) {
        let s = atom(&b);
        let d = twist(&dualize(&s), CG.canonical_twist);
        prop_assert_eq!(euler_of(&s.into_sum()), euler_of(&d.into_sum()));
    }

    #[test]
    fn sums_split(b in dominant3(-4, 2), c in dominant3(-4, 2)) {
        let (x, y) = (atom(&b).into_sum(), atom(&c).into_sum());
        let both = cg_cohomology(&x.plus(&y));
        if let (Some(g), Some(h)) = (cg_cohomology(&x).determined(), cg_cohomology(&y).determined()) {
            let mut sum = g.clone();
            sum.merge(h);
            prop_assert_eq!(both.determined(), Some(&sum));
        } else {
            prop_assert!(both.determined().is_none());
        }
    }
}

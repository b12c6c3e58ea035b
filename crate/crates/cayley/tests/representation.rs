use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;

use cayley::bbw::{bbw_cohomology, GrassmannianSpec};
use cayley::schur::{dualize, lr_tensor, twist, SchurBundle};
use cayley::weights::{gl_dimension, DominantWeight};

/// Semistandard fillings of `shape` with entries `0..n`, by brute force.
fn tableaux(shape: &[usize], n: usize) -> Vec<Vec<Vec<usize>>> {
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut t: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l]).collect();
    let mut out = Vec::new();
    fn go(i: usize, cells: &[(usize, usize)], n: usize, t: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == cells.len() {
            out.push(t.clone());
            return;
        }
        let (r, c) = cells[i];
        for v in 0..n {
            if c > 0 && t[r][c - 1] > v {
                continue;
            }
            if r > 0 && t[r - 1][c] >= v {
                continue;
            }
            t[r][c] = v;
            go(i + 1, cells, n, t, out);
        }
    }
    go(0, &cells, n, &mut t, &mut out);
    out
}

type Poly = BTreeMap<Vec<i64>, i64>;

fn schur_poly(shape: &[i64], n: usize) -> Poly {
    let sh: Vec<usize> = shape.iter().map(|&a| a as usize).collect();
    let mut p = Poly::new();
    for t in tableaux(&sh, n) {
        let mut e = vec![0i64; n];
        for row in &t {
            for &v in row {
                e[v] += 1;
            }
        }
        *p.entry(e).or_default() += 1;
    }
    p
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (x, u) in a {
        for (y, v) in b {
            let e: Vec<i64> = x.iter().zip(y).map(|(i, j)| i + j).collect();
            *out.entry(e).or_default() += u * v;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Peels off leading dominant monomials.
fn decompose(mut p: Poly, n: usize) -> BTreeMap<Vec<i64>, i64> {
    let mut out = BTreeMap::new();
    while let Some((lead, c)) = p.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
        assert!(lead.windows(2).all(|w| w[0] >= w[1]), "leading monomial {lead:?} not dominant");
        out.insert(lead.clone(), c);
        for (e, k) in schur_poly(&lead, n) {
            *p.entry(e).or_default() -= c * k;
        }
        p.retain(|_, v| *v != 0);
    }
    out
}

fn dw(v: Vec<i64>) -> DominantWeight {
    DominantWeight::new(v).unwrap()
}

fn partition(rows: usize, max: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(0..=max, rows).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

fn dominant(len: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(lo..=hi, len).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

#[test]
fn grassmannian_hilbert_function() {
    // h^0(Gr(3,7), O(t)) counts rectangular tableaux
    let g = GrassmannianSpec::gr37();
    for t in 0..4i64 {
        let s = SchurBundle::new(g, vec![t; 3], vec![0; 4]).unwrap();
        let h = bbw_cohomology(g, &s);
        let want = tableaux(&[t as usize; 3], 7).len();
        assert_eq!(h.dimension_in(0), BigUint::from(want), "t = {t}");
    }
    assert_eq!(tableaux(&[1, 1, 1], 7).len(), 35);
    assert_eq!(tableaux(&[2, 2, 2], 7).len(), 490);
}

#[test]
fn canonical_bundle_has_top_cohomology() {
    let g = GrassmannianSpec::gr37();
    let s = SchurBundle::new(g, vec![-7; 3], vec![0; 4]).unwrap();
    let h = bbw_cohomology(g, &s);
    assert!(h.modulo_det().is_trivial_in(12), "{h}");
}

#[test]
fn small_lr_products() {
    // s_1 * s_1 = s_2 + s_11
    let got = lr_tensor(&dw(vec![1]), &dw(vec![1]), 3);
    let want = BTreeMap::from([(dw(vec![2, 0, 0]), 1), (dw(vec![1, 1, 0]), 1)]);
    assert_eq!(got, want);
    // s_21 * s_21 in three variables drops shapes with four rows
    let got = lr_tensor(&dw(vec![2, 1]), &dw(vec![2, 1]), 3);
    assert_eq!(got.get(&dw(vec![2, 2, 2])), Some(&1));
    assert_eq!(got.get(&dw(vec![3, 2, 1])), Some(&2));
    assert_eq!(got.values().sum::<u64>(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_dimension_counts_tableaux(n in 1usize..=4, shape in partition(3, 3)) {
        let rows = shape.iter().filter(|&&a| a > 0).count();
        prop_assume!(rows <= n);
        let mut w = shape.clone();
        w.resize(n, 0);
        let sh: Vec<usize> = shape.iter().map(|&a| a as usize).collect();
        prop_assert_eq!(gl_dimension(&dw(w), n).unwrap(), BigUint::from(tableaux(&sh, n).len()));
    }

    #[test]
    fn lr_matches_character_product(a in partition(3, 2), b in partition(3, 2)) {
        let n = 3;
        let want = decompose(mul(&schur_poly(&a, n), &schur_poly(&b, n)), n);
        let got: BTreeMap<Vec<i64>, i64> =
            lr_tensor(&dw(a), &dw(b), n).into_iter().map(|(w, c)| (w.entries().to_vec(), c as i64)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn lr_commutes_with_det_twists(a in dominant(3, -3, 3), b in dominant(3, -3, 3), t in -3i64..=3) {
        let plain = lr_tensor(&dw(a.clone()), &dw(b.clone()), 3);
        let twisted = lr_tensor(&dw(a).shifted(t), &dw(b), 3);
        let shifted: BTreeMap<_, _> = plain.into_iter().map(|(w, c)| (w.shifted(t), c)).collect();
        prop_assert_eq!(twisted, shifted);
    }

    #[test]
    fn lr_preserves_dimension(a in dominant(3, -2, 2), b in dominant(3, -2, 2)) {
        let (a, b) = (dw(a), dw(b));
        let total: BigUint = lr_tensor(&a, &b, 3).iter().map(|(w, c)| gl_dimension(w, 3).unwrap() * *c).sum();
        prop_assert_eq!(total, gl_dimension(&a, 3).unwrap() * gl_dimension(&b, 3).unwrap());
    }

    #[test]
    fn bbw_serre_duality(b in dominant(3, -9, 3), c in dominant(4, -3, 3)) {
        let g = GrassmannianSpec::gr37();
        let s = SchurBundle::new(g, b, c).unwrap();
        let h = bbw_cohomology(g, &s);
        let d = bbw_cohomology(g, &twist(&dualize(&s), -7));
        for i in 0..=12 {
            prop_assert_eq!(h.dimension_in(i), d.dimension_in(12 - i));
        }
    }

    #[test]
    fn bbw_is_concentrated(b in dominant(3, -9, 3), c in dominant(4, -3, 3)) {
        let g = GrassmannianSpec::gr37();
        let h = bbw_cohomology(g, &SchurBundle::new(g, b, c).unwrap());
        prop_assert!(h.degrees().count() <= 1);
        prop_assert!(h.degrees().all(|(_, ws)| ws.len() == 1));
    }
}

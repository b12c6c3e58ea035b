use proptest::prelude::*;

use cayley::g2::{
    self, basis_index, perm_sign, random_group_element, root_vectors, sample_rng, G2Forms, LieType, MultiVector, Orbit,
    Subspace, Variance, DIM,
};
use cayley::linalg::{frac, q, Matrix, Q};
use cayley::Exec;

fn e(name: &str) -> Vec<Q> {
    let mut v = vec![q(0); DIM];
    v[basis_index(name).unwrap()] = q(1);
    v
}

fn unit(i: usize) -> Vec<Q> {
    let mut v = vec![q(0); DIM];
    v[i] = q(1);
    v
}

fn b(f: &G2Forms, x: &[Q], y: &[Q]) -> Q {
    let bx = f.b.apply(y);
    x.iter().zip(&bx).map(|(a, c)| a * c).sum()
}

fn axpy(a: &Q, x: &[Q], y: &[Q]) -> Vec<Q> {
    x.iter().zip(y).map(|(u, v)| a * u + v).collect()
}

fn vec7() -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec((-6i64..=6, 1i64..=4), DIM).prop_map(|v| v.into_iter().map(|(n, d)| frac(n, d)).collect())
}

#[test]
fn metric_in_the_chosen_basis() {
    let f = G2Forms::standard();
    assert!(f.b.is_symmetric());
    assert_eq!(b(&f, &e("e0"), &e("e0")), q(1));
    for s in ["a", "b", "g"] {
        let (p, m) = (e(&format!("e{s}")), e(&format!("e-{s}")));
        assert_eq!(b(&f, &p, &m), frac(-1, 2));
        assert_eq!(b(&f, &p, &p), q(0));
    }
    assert_eq!(f.b.mul(&f.b_inv), Matrix::identity(DIM));
}

#[test]
fn fourteen_dimensional_symmetry() {
    let f = G2Forms::standard();
    let roots = root_vectors(&f);
    assert_eq!(roots.len(), 12);
    // roots are nilpotent and kill the metric
    for x in &roots {
        assert!(x.mul(x).mul(x).mul(x).is_zero());
        let sym = x.transpose().mul(&f.b);
        let skew = sym.transpose();
        for i in 0..DIM {
            for j in 0..DIM {
                assert_eq!(&sym[(i, j)] + &skew[(i, j)], q(0));
            }
        }
    }
}

#[test]
fn group_elements_preserve_both_forms() {
    let f = G2Forms::standard();
    let roots = root_vectors(&f);
    let mut rng = sample_rng(7, 0);
    for _ in 0..4 {
        let g = random_group_element(&roots, &mut rng, 5);
        assert_eq!(g.transpose().mul(&f.b).mul(&g), f.b);
        let cols: Vec<Vec<Q>> = (0..DIM).map(|j| (0..DIM).map(|i| g[(i, j)].clone()).collect()).collect();
        for t in g2::increasing_tuples(3) {
            let img = [cols[t[0]].clone(), cols[t[1]].clone(), cols[t[2]].clone()];
            assert_eq!(f.nu.eval(&img), f.nu.get(&t), "triple {t:?}");
        }
    }
}

#[test]
fn calibration_and_jacobiator() {
    let f = G2Forms::standard();
    assert_eq!(f.q_of(&f.lambda_dual()).scaled(&f.calibration), f.nu);
    assert_eq!(f.jacobiator_constant(), Some(q(3)));
    assert!(f.jacobiator_identity_check());
}

#[test]
fn printed_frame_reflects_e0() {
    let f = G2Forms::standard();
    let lp = f.printed_lambda();
    assert_eq!(lp, g2::reflect_e0(&f.lambda).scaled(&q(-1)));
    assert_eq!(g2::reflect_e0(&g2::reflect_e0(&lp)), lp);
}

#[test]
fn i_lambda_agrees_with_direct_evaluation() {
    let lp = G2Forms::standard().printed_lambda();
    for (x, y) in [("ea", "eb"), ("ea", "e-g"), ("eb", "e-g")] {
        let form = g2::i_lambda_form(&lp, basis_index(x).unwrap(), basis_index(y).unwrap());
        for t in g2::increasing_tuples(2) {
            let direct = lp.eval(&[e(x), e(y), unit(t[0]), unit(t[1])]);
            assert_eq!(form.get(&t), direct);
        }
    }
    let got = g2::i_lambda_form(&lp, basis_index("ea").unwrap(), basis_index("eb").unwrap());
    let mut want = MultiVector::zero(2, Variance::Form);
    want.add(&[0, 5], q(2));
    want.add(&[2, 4], q(-1));
    assert_eq!(got, want);
}

#[test]
fn orbit_representatives() {
    let f = G2Forms::standard();
    let table = [
        (g2::p0(), Orbit::O0, LieType::Semisimple, 3),
        (g2::p1(), Orbit::O1, LieType::Solvable, 2),
        (g2::p2(), Orbit::O2, LieType::Nilpotent, 1),
    ];
    for (p, o, l, r) in table {
        assert!(f.is_cg_point(&p).unwrap());
        assert_eq!(f.orbit_type(&p).unwrap(), o);
        assert_eq!(f.lie_type(&p).unwrap(), l);
        assert_eq!(f.subalgebra_conic(&p).unwrap().rank(), r);
        assert_eq!(f.i_lambda_matrix(&p).unwrap().rank(), 3);
    }
    let not_closed = Subspace::from_names(&["e0", "ea", "eb"]).unwrap();
    assert!(!f.is_cg_point(&not_closed).unwrap());
}

#[test]
fn phi_rank_on_planes() {
    let f = G2Forms::standard();
    assert_eq!(f.phi_lambda_rank(&Subspace::from_names(&["ea", "e-a"]).unwrap()).unwrap(), 4);
    assert_eq!(f.phi_lambda_rank(&Subspace::from_names(&["e0", "ea"]).unwrap()).unwrap(), 2);
}

#[test]
fn sweeps_are_consistent_and_executor_independent() {
    let a = g2::cg_point_sweep(24, 3, Exec::Sequential);
    let b = g2::cg_point_sweep(24, 3, Exec::Parallel);
    assert_eq!(a, b);
    assert!(a.iter().all(|s| s.consistent()), "{a:?}");
    let h = g2::phi_rank_sweep(60, 3, Exec::Sequential);
    assert!(h.keys().all(|r| *r == 2 || *r == 4));
    assert_eq!(h, g2::phi_rank_sweep(60, 3, Exec::Parallel));
}

#[test]
fn quadric_correspondences() {
    assert_eq!(g2::veronese_quadric(&Matrix::identity(3)).rank(), 6);
    let s = g2::veronese_rank_two(&e("e0")[..3], &e("ea")[..3]);
    assert!(s.holds() && s.f_rank == 2, "{s:?}");
    let seg = g2::segre_example();
    let qm = seg.quadric();
    assert_eq!(qm.rank(), 10);
    for k in g2::segre_example_kernel() {
        assert!(qm.apply(&k).iter().all(|c| *c == q(0)));
    }
    let (full, two) = g2::veronese_sweep(20, 1, Exec::Sequential);
    assert!(full.iter().chain(&two).all(|s| s.holds()));
    assert!(g2::segre_sweep(10, 1, Exec::Sequential).iter().all(|r| *r == 12));
}

#[test]
fn degenerate_segre_input_is_rejected() {
    // a single decomposable term cannot give a smooth conic
    let s = g2::Segre::from_terms(&[(1, (1, 2), (1, 2))]);
    assert!(s.check_generic().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perm_sign_is_multiplicative(p in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
                                   r in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle()) {
        let comp: Vec<usize> = r.iter().map(|&i| p[i]).collect();
        prop_assert_eq!(perm_sign(&comp), perm_sign(&p) * perm_sign(&r));
    }

    #[test]
    fn bracket_is_alternating_and_invariant(x in vec7(), y in vec7(), z in vec7()) {
        let f = G2Forms::standard();
        let xy = f.bracket(&x, &y);
        let yx = f.bracket(&y, &x);
        prop_assert!(xy.iter().zip(&yx).all(|(a, c)| a + c == q(0)));
        prop_assert!(f.bracket(&x, &x).iter().all(|a| *a == q(0)));
        prop_assert_eq!(b(&f, &xy, &z), b(&f, &f.bracket(&y, &z), &x));
    }

    #[test]
    fn double_bracket_identity(x in vec7(), y in vec7()) {
        // [x,[x,y]] = 4 (B(x,x) y - B(x,y) x)
        let f = G2Forms::standard();
        let lhs = f.bracket(&x, &f.bracket(&x, &y));
        let rhs = axpy(&(q(-4) * b(&f, &x, &y)), &x, &y.iter().map(|c| q(4) * b(&f, &x, &x) * c).collect::<Vec<_>>());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(i in 0usize..DIM, j in 0usize..DIM, k in 0usize..DIM) {
        let a = MultiVector::basis(&[i], Variance::Form);
        let c = MultiVector::basis(&[j, k], Variance::Form);
        prop_assert_eq!(a.wedge(&c), c.wedge(&a));
        prop_assert_eq!(a.wedge(&a).is_zero(), true);
    }

    #[test]
    fn associative_spans_are_cayley_points(seed in 0u64..1000) {
        let f = G2Forms::standard();
        let mut rng = sample_rng(seed, 1);
        if let Some(u) = g2::random_associative(&f, &mut rng) {
            let s = g2::classify_point(&f, &u, None);
            prop_assert!(s.consistent(), "{:?}", s);
        }
    }
}

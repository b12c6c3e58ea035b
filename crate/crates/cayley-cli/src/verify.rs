//! Reference values and the nine end-to-end checks behind `verify-all`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use cayley::derived::{
    atoms, euler_matrix, integer_determinant, is_upper_unitriangular, presets, same_class, ClassCombo,
};
use cayley::g2::{self, G2Forms, LieType, MultiVector, Orbit, Subspace, Variance};
use cayley::linalg::{q, same_span, Matrix};
use cayley::table::{cohomology_table, TABLE_WEIGHTS};
use cayley::weights::{DominantWeight, GradedRep};
use cayley::{
    check_exceptional_collection, complex_ext, lefschetz_validate, mutate_left, mutate_right, residual_check, Exec,
    FormalComplex, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u8,
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Option<Duration>,
}

impl Criterion {
    fn new(id: u8, title: &str) -> Self {
        Criterion { id, title: title.to_string(), checks: Vec::new(), elapsed: Duration::ZERO, budget: None }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.within_budget()
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn timed(id: u8, title: &str, budget: Option<u64>, body: impl FnOnce(&mut Criterion)) -> Criterion {
    let mut c = Criterion::new(id, title);
    c.budget = budget.map(Duration::from_secs);
    let t = Instant::now();
    body(&mut c);
    c.elapsed = t.elapsed();
    c
}

fn dw(v: &[i64]) -> DominantWeight {
    DominantWeight::new(v.to_vec()).expect("dominant")
}

fn gl7(v: &[i64]) -> DominantWeight {
    dw(v).padded(7).expect("fits")
}

/// Nonzero entries of the reference table as `(weight, degree, GL₇ weight)`;
/// every other weight of the table has vanishing cohomology.
pub const TABLE_NONZERO: [([i64; 3], i64, &[i64]); 9] = [
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

/// Cells shaded because `CG` and `Gr(3,7)` differ.
pub const TABLE_SHADED: [[i64; 3]; 3] = [[0, 0, -3], [1, 1, -1], [2, 1, -1]];

pub fn expected_table_entry(w: [i64; 3]) -> GradedRep {
    match TABLE_NONZERO.iter().find(|(x, _, _)| *x == w) {
        Some((_, d, rep)) => GradedRep::single(*d, gl7(rep)),
        None => GradedRep::zero(),
    }
}

pub fn criterion_table(exec: Exec) -> Criterion {
    timed(1, "table reproduction", Some(10), |c| {
        let rows = cohomology_table(exec);
        let mut bad = Vec::new();
        for r in &rows {
            let want = expected_table_entry(r.weight);
            let shaded_want = TABLE_SHADED.contains(&r.weight);
            if r.cg.determined() != Some(&want) || r.shaded != shaded_want {
                bad.push(format!("{:?}", r.weight));
            }
        }
        c.check(
            format!("{} entries match", TABLE_WEIGHTS.len()),
            bad.is_empty() && rows.len() == TABLE_WEIGHTS.len(),
            if bad.is_empty() { "all match".to_string() } else { format!("mismatch at {}", bad.join(" ")) },
        );
        let shaded: Vec<[i64; 3]> = rows.iter().filter(|r| r.shaded).map(|r| r.weight).collect();
        c.check("shaded cells", shaded == TABLE_SHADED.to_vec(), format!("{shaded:?}"));
        let amb = rows.iter().find(|r| r.weight == [-1, -1, -5]).map(|r| r.ambient.clone());
        c.check(
            "S{-1,-1,-5}U* is k[-4] on the ambient Grassmannian",
            amb == Some(GradedRep::single(4, gl7(&[]))),
            format!("{}", amb.unwrap_or_default()),
        );
    })
}

pub fn criterion_exceptional(exec: Exec) -> Criterion {
    timed(2, "exceptionality of the 15-object collection", Some(60), |c| {
        let objs = presets::cg15();
        let table = check_exceptional_collection(&objs, exec);
        let v = table.verdict();
        c.check("verdict", v == Verdict::Exceptional, v.to_string());
        let mut routes: BTreeMap<String, usize> = BTreeMap::new();
        for (_, _, r) in table.fallback_cells() {
            *routes.entry(r.to_string()).or_default() += 1;
        }
        c.check("fallback routes", true, format!("{routes:?}"));
        c.check(
            "Lefschetz blocks (5,4,3,3)",
            lefschetz_validate(&objs, &presets::CG15_PARTITION),
            "block i is block 0 truncated and twisted by O(i)",
        );
    })
}

fn is_point_in(g: &GradedRep, d: i64) -> bool {
    *g == GradedRep::single(d, DominantWeight::zero(7))
}

fn ext_detail(x: &FormalComplex, y: &FormalComplex) -> (Option<GradedRep>, String) {
    match complex_ext(x, y) {
        Ok(o) => {
            let g = o.result.determined().cloned();
            let s = match &g {
                Some(g) => format!("{g} via {}", o.route),
                None => "indeterminate".to_string(),
            };
            (g, s)
        }
        Err(e) => (None, e.to_string()),
    }
}

pub fn criterion_mutations() -> Criterion {
    timed(3, "mutation identities", None, |c| {
        let w2q = FormalComplex::atom(atoms::wedge2_q(0));
        let w2u = FormalComplex::atom(atoms::wedge2_u_dual(0));
        let (g, d) = ext_detail(&w2q, &w2u);
        c.check("Ext(W2 Q, W2 U*) = k", g.as_ref().is_some_and(|g| is_point_in(g, 0)), d);

        let r = presets::r();
        match mutate_right(&w2u, &w2q) {
            Ok(m) => {
                let same = same_class(&ClassCombo::of(&m), &ClassCombo::of(&r));
                c.check("R_{W2 U*}(W2 Q) has the class of R", same, format!("{m}"));
            }
            Err(e) => c.check("R_{W2 U*}(W2 Q) has the class of R", false, e.to_string()),
        }

        let s = FormalComplex::atom(atoms::sigma21_u_dual(0));
        let (g, d) = ext_detail(&s, &s.twist(-1));
        c.check("Ext(S21 U*, S21 U*(-1)) = k[-2]", g.as_ref().is_some_and(|g| is_point_in(g, 2)), d);

        match mutate_left(&w2u, &r) {
            Ok(m) => c.check("L_{W2 U*}(R) = W2 Q", m.same_terms(&w2q), format!("{m}")),
            Err(e) => c.check("L_{W2 U*}(R) = W2 Q", false, e.to_string()),
        }
    })
}

pub fn criterion_residual(exec: Exec) -> Criterion {
    timed(4, "residual category", None, |c| match residual_check(exec) {
        Ok(rep) => {
            c.check("six Euler pairings vanish, three are 1", rep.chi_orthogonal(), format!("{:?}", rep.euler));
            let required: Vec<String> = rep
                .cells
                .iter()
                .filter(|x| x.required)
                .map(|x| format!("({},{})={}", x.row, x.col, x.holds().map_or("open", |h| if h { "ok" } else { "bad" })))
                .collect();
            c.check("Ext-level cells without L_E(R) determined", rep.minimum_met(), required.join(" "));
            c.check("tau acts on the three classes", rep.tau_holds(), format!("{} arrows", rep.tau.len()));
            let open: Vec<String> = rep
                .cells
                .iter()
                .filter(|x| x.holds().is_none())
                .map(|x| match &x.result {
                    Ok(r) => format!("Ext({}, {}): {}", rep.names[x.row], rep.names[x.col], r.to_string().replace('\n', " | ")),
                    Err(e) => format!("Ext({}, {}): {e}", rep.names[x.row], rep.names[x.col]),
                })
                .collect();
            let detail = match &rep.blocker {
                Some(b) => format!("{} open; L_E(R) kept abstract: {b}; {}", open.len(), open.join("; ")),
                None => format!("{} open", open.len()),
            };
            c.check("remaining cells reported", true, detail);
        }
        Err(e) => c.check("residual objects built", false, e.to_string()),
    })
}

pub fn criterion_euler(exec: Exec) -> Criterion {
    timed(5, "Euler matrix", Some(5), |c| {
        let m = euler_matrix(&presets::cg15(), exec);
        c.check("upper unitriangular", is_upper_unitriangular(&m), format!("{}x{}", m.len(), m.len()));
        let d = integer_determinant(&m);
        c.check("determinant 1", d == BigInt::from(1), d.to_string());
    })
}

pub fn criterion_chi() -> Criterion {
    timed(6, "chi-consistency of exact sequences", None, |c| {
        for s in cayley::sequences::chi_consistency() {
            c.check(s.name, s.holds, "");
        }
    })
}

fn e(name: &str) -> Vec<cayley::linalg::Q> {
    let mut v = vec![q(0); g2::DIM];
    v[g2::basis_index(name).expect("basis name")] = q(1);
    v
}

fn idx(name: &str) -> usize {
    g2::basis_index(name).expect("basis name")
}

fn mv(variance: Variance, terms: &[(i64, &str, &str)]) -> MultiVector {
    let mut m = MultiVector::zero(2, variance);
    for (c, a, b) in terms {
        m.add(&[idx(a), idx(b)], q(*c));
    }
    m
}

/// `[x, y] = c·z` at the three orbit points.
pub const BRACKETS: [(&str, &str, i64, &str); 9] = [
    ("e0", "eg", -2, "eg"),
    ("e0", "e-g", 2, "e-g"),
    ("eg", "e-g", 1, "e0"),
    ("e0", "eb", -2, "eb"),
    ("e0", "e-g", 2, "e-g"),
    ("eb", "e-g", 0, "e0"),
    ("ea", "eb", -2, "e-g"),
    ("ea", "e-g", 0, "e0"),
    ("eb", "e-g", 0, "e0"),
];

type Pair<'a> = (&'a str, &'a str);
type Terms<'a> = &'a [(i64, &'a str, &'a str)];

/// `i_λ` at `P₂` as 2-forms.
pub const I_LAMBDA_P2: [(Pair, Terms); 3] = [
    (("ea", "eb"), &[(2, "e0", "eg"), (1, "e-a", "e-b")]),
    (("ea", "e-g"), &[(1, "e-a", "eg")]),
    (("eb", "e-g"), &[(1, "e-b", "eg")]),
];

/// `i_λ` at `P₀` and `P₁` in `Λ²Q`.
pub const I_LAMBDA_P0: [(Pair, Terms); 3] = [
    (("e0", "eg"), &[(-2, "e-a", "e-b")]),
    (("e0", "e-g"), &[(2, "ea", "eb")]),
    (("eg", "e-g"), &[(1, "ea", "e-a"), (1, "eb", "e-b")]),
];

pub const I_LAMBDA_P1: [(Pair, Terms); 3] = [
    (("e0", "eb"), &[(-2, "e-a", "e-b")]),
    (("e0", "e-g"), &[(-2, "ea", "eg")]),
    (("eb", "e-g"), &[(1, "ea", "e-a")]),
];

pub fn criterion_g2() -> Criterion {
    timed(7, "G2 structure constants", Some(5), |c| {
        let f = G2Forms::standard();
        for (x, y, k, z) in BRACKETS {
            let got = f.bracket(&e(x), &e(y));
            let want: Vec<_> = e(z).iter().map(|a| a * q(k)).collect();
            c.check(format!("[{x},{y}]"), got == want, format!("{}", MultiVector::vector(&got)));
        }
        let lp = f.printed_lambda();
        for (pair, terms) in I_LAMBDA_P2 {
            let got = g2::i_lambda_form(&lp, idx(pair.0), idx(pair.1));
            let want = mv(Variance::Form, terms);
            c.check(format!("P2 i({}^{})", pair.0, pair.1), got == want, format!("{got}"));
        }
        for (label, u, rows) in [("P0", ["e0", "eg", "e-g"], I_LAMBDA_P0), ("P1", ["e0", "eb", "e-g"], I_LAMBDA_P1)] {
            let ui: Vec<usize> = u.iter().map(|n| idx(n)).collect();
            for (pair, terms) in rows {
                let got = g2::i_lambda_quotient(&lp, &ui, idx(pair.0), idx(pair.1));
                let want = mv(Variance::Vector, terms);
                c.check(format!("{label} i({}^{})", pair.0, pair.1), got == want, format!("{got}"));
            }
        }
        let recon = f.q_of(&f.lambda_dual()).scaled(&f.calibration);
        c.check("nu = c q(omega . lambda)", recon == f.nu, format!("c = {}", f.calibration));
        let jc = f.jacobiator_constant();
        c.check(
            "Jacobiator is a multiple of q^-1(lambda . xyz) on 35 triples",
            jc.is_some(),
            jc.map_or("no common factor".to_string(), |k| format!("factor {k}")),
        );
        for (label, p, want) in [
            ("P0", g2::p0(), LieType::Semisimple),
            ("P1", g2::p1(), LieType::Solvable),
            ("P2", g2::p2(), LieType::Nilpotent),
        ] {
            let got = f.lie_type(&p);
            c.check(format!("{label} Lie type"), got == Ok(want), format!("{got:?}"));
        }
    })
}

pub const POINT_SAMPLES: usize = 500;
pub const PHI_SAMPLES: usize = 1000;
pub const VERONESE_SAMPLES: usize = 200;
pub const SEGRE_SAMPLES: usize = 100;

pub fn criterion_ranks(seed: u64, exec: Exec) -> Criterion {
    timed(8, "rank stratification", None, |c| {
        let f = G2Forms::standard();
        let r1 = f.phi_lambda_rank(&Subspace::coordinate(&[idx("ea"), idx("e-a")]));
        c.check("phi rank at <ea,e-a>", r1 == Ok(4), format!("{r1:?}"));
        let r2 = f.phi_lambda_rank(&Subspace::coordinate(&[idx("e0"), idx("ea")]));
        c.check("phi rank at <e0,ea>", r2 == Ok(2), format!("{r2:?}"));
        let hist = g2::phi_rank_sweep(PHI_SAMPLES, seed, exec);
        let ok = hist.keys().all(|r| *r == 2 || *r == 4);
        c.check(format!("phi rank over {PHI_SAMPLES} random planes in {{2,4}}"), ok, format!("{hist:?}"));
        for (label, p, want) in [("P0", g2::p0(), 3), ("P1", g2::p1(), 2), ("P2", g2::p2(), 1)] {
            let r = f.subalgebra_conic(&p).map(|m| m.rank());
            c.check(format!("{label} conic rank"), r == Ok(want), format!("{r:?}"));
        }
        let pts = g2::cg_point_sweep(POINT_SAMPLES, seed, exec);
        let bad = pts.iter().filter(|p| !p.consistent()).count();
        let mut orbits: BTreeMap<String, usize> = BTreeMap::new();
        for p in &pts {
            let k = p.orbit.as_ref().map(Orbit::to_string).unwrap_or_else(|e| e.clone());
            *orbits.entry(k).or_default() += 1;
        }
        c.check(
            format!("{POINT_SAMPLES} random Cayley points: q|U has rank 3/1/0 matching the Lie type"),
            bad == 0,
            format!("{orbits:?}, {bad} inconsistent"),
        );
    })
}

pub fn criterion_quadrics(seed: u64, exec: Exec) -> Criterion {
    timed(9, "quadric correspondences", None, |c| {
        let id = g2::veronese_quadric(&Matrix::identity(3));
        c.check("Veronese f = id", id.rank() == 6, format!("rank {}", id.rank()));
        let ex = g2::veronese_rank_two(&[q(1), q(0), q(0)], &[q(0), q(1), q(0)]);
        c.check("Veronese f = x1 x2 + x2 x1", ex.q_rank == 4 && ex.kernel_ok, format!("{ex:?}"));
        let (full, two) = g2::veronese_sweep(VERONESE_SAMPLES, seed, exec);
        let bad3 = full.iter().filter(|s| !s.holds()).count();
        let bad2 = two.iter().filter(|s| !s.holds()).count();
        c.check(format!("Veronese rank-3 f, {VERONESE_SAMPLES} samples"), bad3 == 0, format!("{bad3} failures"));
        c.check(format!("Veronese rank-2 f, {VERONESE_SAMPLES} samples"), bad2 == 0, format!("{bad2} failures"));

        let s = g2::segre_example();
        let qd = s.quadric();
        let kernel = same_span(&qd.kernel(), &g2::segre_example_kernel());
        c.check(
            "Segre example: rank 10, kernel <u2 v4, u3 v3>",
            qd.rank() == 10 && kernel && s.check_generic().is_ok(),
            format!("rank {}, conic rank {}", qd.rank(), s.conic().rank()),
        );
        let ranks = g2::segre_sweep(SEGRE_SAMPLES, seed, exec);
        let bad = ranks.iter().filter(|r| **r != 12).count();
        c.check(format!("Segre smooth conic, {SEGRE_SAMPLES} samples"), bad == 0, format!("{bad} failures"));
        let degenerate = g2::Segre::from_terms(&[(1, (1, 2), (1, 2))]);
        c.check("decomposable input rejected", degenerate.check_generic().is_err(), "genericity violation reported");
    })
}

pub fn run_all(seed: u64, exec: Exec) -> Vec<Criterion> {
    vec![
        criterion_table(exec),
        criterion_exceptional(exec),
        criterion_mutations(),
        criterion_residual(exec),
        criterion_euler(exec),
        criterion_chi(),
        criterion_g2(),
        criterion_ranks(seed, exec),
        criterion_quadrics(seed, exec),
    ]
}

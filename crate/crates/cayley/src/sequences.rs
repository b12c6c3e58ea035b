//! Exact sequences on `CG` and the self-dualities of `ℰ₁₀`, `ℰ₁₆`, checked
//! on Euler characteristics against a battery of probes.

use serde::Serialize;

use crate::cg::{chi_sequence_check, default_probes, euler_pairing, KClass, CG};
use crate::derived::{atoms, presets};
use crate::schur::{BundleSum, SchurBundle};

/// `0 → T₀ → T₁ → … → 0`.
#[derive(Debug, Clone)]
pub struct NamedSequence {
    pub name: String,
    pub terms: Vec<KClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceCheck {
    pub name: String,
    pub holds: bool,
}

fn s(x: SchurBundle) -> BundleSum {
    x.into_sum()
}

fn k(x: BundleSum) -> KClass {
    KClass::from(x)
}

fn tensor(a: &BundleSum, b: &BundleSum) -> BundleSum {
    a.tensor(b).expect("same Grassmannian")
}

fn seq(name: impl Into<String>, terms: Vec<KClass>) -> NamedSequence {
    NamedSequence { name: name.into(), terms }
}

fn sym2_u_dual(t: i64) -> BundleSum {
    SchurBundle::new(CG.ambient, vec![2 + t, t, t], vec![]).expect("valid").into_sum()
}

fn wedge2_q(t: i64) -> BundleSum {
    s(atoms::wedge2_q(t))
}

pub fn koszul(n: i64) -> [NamedSequence; 2] {
    let o = |t| s(atoms::structure(t));
    [
        seq(
            format!("koszul n={n}"),
            vec![
                k(s(atoms::sym2_u(n))),
                k(s(atoms::wedge2_u_dual(n - 1)).scaled(7)),
                k(o(n).scaled(21)),
                k(wedge2_q(n)),
            ],
        ),
        seq(
            format!("koszul dual n={n}"),
            vec![
                k(wedge2_q(n - 1)),
                k(o(n).scaled(21)),
                k(s(atoms::u_dual(n)).scaled(7)),
                k(sym2_u_dual(n)),
            ],
        ),
    ]
}

pub fn r_sequences() -> [NamedSequence; 2] {
    let r = presets::r().k_class();
    let wedge2_u_perp = SchurBundle::new(CG.ambient, vec![], vec![1, 1]).expect("valid").into_sum();
    [
        seq("R -> W2 Q -> W2 U*", vec![r.clone(), k(wedge2_q(0)), k(s(atoms::wedge2_u_dual(0)))]),
        seq(
            "W2 U -> W2 Uperp -> R*",
            vec![k(s(atoms::wedge2_u_dual(0)).dual()), k(wedge2_u_perp), r.dual()],
        ),
    ]
}

pub fn k_sequences() -> [NamedSequence; 5] {
    let kk = presets::k().k_class();
    let w = s(atoms::wedge2_u_dual(0));
    let sigma = s(atoms::sigma21_u_dual(0));
    let u_perp = s(atoms::u_perp(0));
    let q = u_perp.dual();
    let o1 = s(atoms::structure(1));
    [
        seq("K -> V* (x) W2 U* -> S21 U*", vec![kk.clone(), k(w.scaled(7)), k(sigma.clone())]),
        seq("S21 U -> V (x) W2 U -> K*", vec![k(sigma.dual()), k(w.dual().scaled(7)), kk.dual()]),
        seq("Uperp (x) W2 U* -> K -> O(1)", vec![k(tensor(&u_perp, &w)), kk.clone(), k(o1.clone())]),
        seq("O(-1) -> K* -> Q (x) W2 U", vec![k(o1.dual()), kk.dual(), k(tensor(&q, &w.dual()))]),
        seq("O(1) -> U* (x) W2 U* -> S21 U*", vec![k(o1), k(tensor(&s(atoms::u_dual(0)), &w)), k(sigma)]),
    ]
}

pub fn extension_sequences() -> [NamedSequence; 4] {
    let e10 = presets::e10().k_class();
    let e16 = presets::e16().k_class();
    let u_perp = s(atoms::u_perp(0));
    let q = u_perp.dual();
    let w = s(atoms::wedge2_u_dual(0));
    let o1 = s(atoms::structure(1));
    let u_dual = s(atoms::u_dual(0));
    [
        seq("S2 U -> E10 -> Uperp", vec![k(s(atoms::sym2_u(0))), e10.clone(), k(u_perp.clone())]),
        seq("Q -> E10* -> S2 U*", vec![k(q.clone()), e10.dual(), k(sym2_u_dual(0))]),
        seq("Uperp (x) W2 U* -> E16 -> W2 U* + O(1)", vec![k(tensor(&u_perp, &w)), e16.clone(), k(w.plus(&o1))]),
        seq(
            "U* + O -> E16*(1) -> Q (x) U*",
            vec![k(u_dual.plus(&s(atoms::structure(0)))), e16.dual().twisted(1), k(tensor(&q, &u_dual))],
        ),
    ]
}

pub fn all_sequences() -> Vec<NamedSequence> {
    let mut out = Vec::new();
    for n in 0..3 {
        out.extend(koszul(n));
    }
    out.extend(r_sequences());
    out.extend(k_sequences());
    out.extend(extension_sequences());
    out
}

/// `(name, A, B)` with `A ≃ B` claimed.
pub fn self_dualities() -> Vec<(String, KClass, KClass)> {
    let e10 = presets::e10().k_class();
    let e16 = presets::e16().k_class();
    vec![
        ("E10(1) = E10*".to_string(), e10.twisted(1), e10.dual()),
        ("E16(-1) = E16*".to_string(), e16.twisted(-1), e16.dual()),
    ]
}

pub fn check_sequences(probes: &[BundleSum]) -> Vec<SequenceCheck> {
    all_sequences()
        .into_iter()
        .map(|q| SequenceCheck { holds: chi_sequence_check(&q.terms, probes), name: q.name })
        .collect()
}

pub fn check_self_dualities(probes: &[BundleSum]) -> Vec<SequenceCheck> {
    self_dualities()
        .into_iter()
        .map(|(name, a, b)| {
            let holds = probes.iter().all(|p| {
                let p = KClass::from(p.clone());
                euler_pairing(&p, &a) == euler_pairing(&p, &b)
            });
            SequenceCheck { name, holds }
        })
        .collect()
}

/// Everything against the default ten probes.
pub fn chi_consistency() -> Vec<SequenceCheck> {
    let probes = default_probes();
    let mut out = check_sequences(&probes);
    out.extend(check_self_dualities(&probes));
    out
}

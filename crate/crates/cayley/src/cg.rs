//! Cohomology on the Cayley Grassmannian `CG ⊂ Gr(3,7)`, the zero locus of
//! a section of `U⊥(1)`, through the Koszul resolution
//! `0 → Λ⁴Q(-4) → … → Q(-1) → O → O_CG → 0` and its hypercohomology
//! spectral sequence `E₁^{-l,t} = H^t(Gr, F ⊗ ΛˡQ(-l)) ⇒ H^{t-l}(CG, F)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bbw::{bulk_cohomology, GrassmannianSpec};
use crate::schur::{dualize, twist, BundleSum, SchurBundle};
use crate::weights::{dim, DominantWeight, GradedRep};

/// `CG` as a subvariety of `Gr(3,7)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub ambient: GrassmannianSpec,
    pub section_rank: usize,
    pub dim: usize,
    pub canonical_twist: i64,
}

impl VarietySpec {
    pub const fn cayley() -> Self {
        VarietySpec { ambient: GrassmannianSpec::gr37(), section_rank: 4, dim: 8, canonical_twist: -4 }
    }
}

pub const CG: VarietySpec = VarietySpec::cayley();

/// Multiset of irreducibles sitting at one position of a page.
pub type Slice = BTreeMap<DominantWeight, u64>;

/// A first page with positional linkage data. Columns are filtration indices
/// (`-l` for Koszul pages), rows are internal degrees, and an entry at
/// `(c, t)` contributes to total degree `c + t`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Page {
    pub entries: BTreeMap<(i64, i64), Slice>,
    /// Bundle whose ambient cohomology fills each column.
    pub provenance: BTreeMap<i64, String>,
    pub linked: Vec<((i64, i64), (i64, i64))>,
}

impl E1Page {
    pub fn insert(&mut self, pos: (i64, i64), w: DominantWeight, mult: u64) {
        if mult > 0 {
            *self.entries.entry(pos).or_default().entry(w).or_insert(0) += mult;
        }
    }

    pub fn merge(&mut self, other: &E1Page) {
        for (pos, s) in &other.entries {
            for (w, m) in s {
                self.insert(*pos, w.clone(), *m);
            }
        }
        for (c, p) in &other.provenance {
            self.provenance.entry(*c).or_insert_with(|| p.clone());
        }
        self.linked.extend(other.linked.iter().copied());
    }

    /// Pairs of nonzero entries a differential `d_r`, `r ≥ 1`, could connect:
    /// `(c, t) → (c + r, t - r + 1)`.
    pub fn compute_links(&self) -> Vec<((i64, i64), (i64, i64))> {
        let pos: Vec<(i64, i64)> = self.entries.keys().copied().collect();
        let mut out = Vec::new();
        for &p in &pos {
            for &q in &pos {
                let r = q.0 - p.0;
                if r >= 1 && q.1 == p.1 - r + 1 {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Abutment assuming degeneration.
    pub fn abutment(&self) -> GradedRep {
        let mut g = GradedRep::zero();
        for ((c, t), s) in &self.entries {
            for (w, m) in s {
                g.insert(c + t, w.clone(), *m);
            }
        }
        g
    }

    pub fn euler_characteristic(&self) -> BigInt {
        let mut chi = BigInt::zero();
        for ((c, t), s) in &self.entries {
            let d: BigInt = s.iter().map(|(w, m)| BigInt::from(dim(w)) * BigInt::from(*m)).sum();
            if (c + t).rem_euclid(2) == 0 {
                chi += d;
            } else {
                chi -= d;
            }
        }
        chi
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for E1Page {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((c, t), s) in &self.entries {
            let ws: Vec<String> =
                s.iter().map(|(w, m)| if *m == 1 { w.to_string() } else { format!("{m}x{w}") }).collect();
            writeln!(f, "  E1[{c},{t}] = {}", ws.join(" + "))?;
        }
        for (p, q) in &self.linked {
            writeln!(f, "  linked {p:?} -> {q:?}")?;
        }
        Ok(())
    }
}

/// Outcome of a spectral-sequence computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CohomologyResult {
    Determined(GradedRep),
    Indeterminate(Box<E1Page>),
}

impl CohomologyResult {
    pub fn determined(&self) -> Option<&GradedRep> {
        match self {
            CohomologyResult::Determined(g) => Some(g),
            CohomologyResult::Indeterminate(_) => None,
        }
    }

    pub fn is_determined_zero(&self) -> bool {
        matches!(self, CohomologyResult::Determined(g) if g.is_zero())
    }

    /// One copy of the trivial representation (modulo det) in degree 0.
    pub fn is_determined_point(&self) -> bool {
        matches!(self, CohomologyResult::Determined(g) if g.is_trivial_in(0))
    }
}

impl fmt::Display for CohomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyResult::Determined(g) => write!(f, "{g}"),
            CohomologyResult::Indeterminate(p) => write!(f, "indeterminate\n{p}"),
        }
    }
}

/// How a result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Route {
    Direct,
    Serre,
    Complex,
    Rewrite,
    Adjunction,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::Direct => "direct",
            Route::Serre => "serre",
            Route::Complex => "complex",
            Route::Rewrite => "rewrite",
            Route::Adjunction => "adjunction",
        };
        write!(f, "{s}")
    }
}

/// `ΛˡQ(-l)` on `Gr(3,7)`.
pub fn koszul_atom(l: usize) -> SchurBundle {
    let g = CG.ambient;
    let r = CG.section_rank;
    let mut c = vec![0i64; r - l];
    c.extend(std::iter::repeat_n(-1, l));
    SchurBundle::new(g, vec![-(l as i64); g.k], c).expect("valid weights")
}

/// `F ⊗ ΛˡQ(-l)` for `l = 0..=4`.
pub fn koszul_terms(f: &BundleSum) -> Vec<BundleSum> {
    (0..=CG.section_rank)
        .map(|l| f.tensor(&koszul_atom(l).into_sum()).expect("same Grassmannian"))
        .collect()
}

/// First page for a single atom.
pub fn atom_page(s: &SchurBundle) -> E1Page {
    let mut page = E1Page::default();
    for (l, term) in koszul_terms(&s.clone().into_sum()).iter().enumerate() {
        let col = -(l as i64);
        page.provenance.insert(col, term.to_string());
        for (t, ws) in bulk_cohomology(CG.ambient, term).degrees() {
            for (w, m) in ws {
                page.insert((col, t), w.clone(), *m);
            }
        }
    }
    page.linked = page.compute_links();
    page
}

fn page_cache() -> &'static RwLock<HashMap<SchurBundle, CohomologyResult>> {
    static CACHE: OnceLock<RwLock<HashMap<SchurBundle, CohomologyResult>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Drops memoised atom results, e.g. to time cold runs.
pub fn clear_cache() {
    page_cache().write().expect("cache lock").clear();
}

/// `H•(CG, s)` for one atom, memoised.
pub fn atom_cohomology(s: &SchurBundle) -> CohomologyResult {
    if let Some(r) = page_cache().read().expect("cache lock").get(s) {
        return r.clone();
    }
    let page = atom_page(s);
    let r = if page.linked.is_empty() {
        CohomologyResult::Determined(page.abutment())
    } else {
        CohomologyResult::Indeterminate(Box::new(page))
    };
    page_cache().write().expect("cache lock").insert(s.clone(), r.clone());
    r
}

/// `H•(CG, F)`. The spectral sequence splits over direct summands, so
/// determinacy is decided atom by atom.
pub fn cg_cohomology(f: &BundleSum) -> CohomologyResult {
    let mut total = GradedRep::zero();
    let mut failed = E1Page::default();
    let mut ok = true;
    for (s, m) in f.atoms() {
        match atom_cohomology(s) {
            CohomologyResult::Determined(g) => total.merge(&g.scaled(m)),
            CohomologyResult::Indeterminate(p) => {
                ok = false;
                failed.merge(&scaled_page(&p, m));
            }
        }
    }
    if ok {
        CohomologyResult::Determined(total)
    } else {
        CohomologyResult::Indeterminate(Box::new(failed))
    }
}

fn scaled_page(p: &E1Page, m: u64) -> E1Page {
    let mut out = E1Page { provenance: p.provenance.clone(), linked: p.linked.clone(), ..Default::default() };
    for (pos, s) in &p.entries {
        for (w, k) in s {
            out.insert(*pos, w.clone(), k * m);
        }
    }
    out
}

/// `H•(CG, s)` via Serre duality: `H^i(F) = H^{8-i}(F* ⊗ ω)*`.
pub fn atom_cohomology_serre(s: &SchurBundle) -> CohomologyResult {
    match atom_cohomology(&twist(&dualize(s), CG.canonical_twist)) {
        CohomologyResult::Determined(g) => CohomologyResult::Determined(g.serre_reflect(CG.dim as i64)),
        other => other,
    }
}

/// `H•(CG, F)` trying the direct page first and Serre duality per atom.
pub fn cg_cohomology_with_serre(f: &BundleSum) -> (CohomologyResult, Route) {
    let mut total = GradedRep::zero();
    let mut failed = E1Page::default();
    let mut ok = true;
    let mut route = Route::Direct;
    for (s, m) in f.atoms() {
        match atom_cohomology(s) {
            CohomologyResult::Determined(g) => total.merge(&g.scaled(m)),
            CohomologyResult::Indeterminate(p) => match atom_cohomology_serre(s) {
                CohomologyResult::Determined(g) => {
                    route = Route::Serre;
                    total.merge(&g.scaled(m));
                }
                CohomologyResult::Indeterminate(_) => {
                    ok = false;
                    failed.merge(&scaled_page(&p, m));
                }
            },
        }
    }
    if ok {
        (CohomologyResult::Determined(total), route)
    } else {
        (CohomologyResult::Indeterminate(Box::new(failed)), route)
    }
}

/// `Ext•_CG(A, B) = H•(CG, A* ⊗ B)`, falling back to Serre duality.
pub fn cg_ext(a: &BundleSum, b: &BundleSum) -> (CohomologyResult, Route) {
    let f = a.dual().tensor(b).expect("same Grassmannian");
    cg_cohomology_with_serre(&f)
}

/// `Ext•(A, B)` computed only through `Ext^{8-i}(B, A ⊗ ω)*`.
pub fn serre_dual(a: &BundleSum, b: &BundleSum) -> CohomologyResult {
    let f = b.dual().tensor(&a.twisted(CG.canonical_twist)).expect("same Grassmannian");
    match cg_cohomology(&f) {
        CohomologyResult::Determined(g) => CohomologyResult::Determined(g.serre_reflect(CG.dim as i64)),
        other => other,
    }
}

/// A signed combination of bundles, the class of a complex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KClass {
    pub plus: BundleSum,
    pub minus: BundleSum,
}

impl KClass {
    pub fn new(plus: BundleSum, minus: BundleSum) -> Self {
        KClass { plus, minus }
    }

    pub fn negated(&self) -> KClass {
        KClass { plus: self.minus.clone(), minus: self.plus.clone() }
    }

    pub fn plus_class(&self, other: &KClass) -> KClass {
        KClass { plus: self.plus.plus(&other.plus), minus: self.minus.plus(&other.minus) }
    }

    pub fn twisted(&self, t: i64) -> KClass {
        KClass { plus: self.plus.twisted(t), minus: self.minus.twisted(t) }
    }

    pub fn dual(&self) -> KClass {
        KClass { plus: self.plus.dual(), minus: self.minus.dual() }
    }

    pub fn tensor(&self, other: &KClass) -> KClass {
        let t = |x: &BundleSum, y: &BundleSum| x.tensor(y).expect("same Grassmannian");
        KClass {
            plus: t(&self.plus, &other.plus).plus(&t(&self.minus, &other.minus)),
            minus: t(&self.plus, &other.minus).plus(&t(&self.minus, &other.plus)),
        }
    }
}

impl From<BundleSum> for KClass {
    fn from(b: BundleSum) -> Self {
        KClass { plus: b, minus: BundleSum::zero() }
    }
}

impl From<SchurBundle> for KClass {
    fn from(s: SchurBundle) -> Self {
        KClass::from(s.into_sum())
    }
}

fn atom_euler(s: &SchurBundle) -> BigInt {
    match atom_cohomology(s) {
        CohomologyResult::Determined(g) => g.euler_characteristic(),
        CohomologyResult::Indeterminate(p) => p.euler_characteristic(),
    }
}

/// `χ(CG, F)` from the first page; never needs determinacy.
pub fn euler_of(f: &BundleSum) -> BigInt {
    f.atoms().map(|(s, m)| atom_euler(s) * BigInt::from(m)).sum()
}

/// `χ(A, B) = Σ (-1)^i dim Ext^i(A, B)`.
pub fn euler_char(a: &BundleSum, b: &BundleSum) -> BigInt {
    euler_of(&a.dual().tensor(b).expect("same Grassmannian"))
}

/// Bilinear extension of `euler_char` to classes.
pub fn euler_pairing(a: &KClass, b: &KClass) -> BigInt {
    euler_char(&a.plus, &b.plus) + euler_char(&a.minus, &b.minus)
        - euler_char(&a.plus, &b.minus)
        - euler_char(&a.minus, &b.plus)
}

/// The ten default probes: `O, U*, Λ²U*, S²U*, Σ^{2,1}U*` and their `O(1)` twists.
pub fn default_probes() -> Vec<BundleSum> {
    let g = CG.ambient;
    let base = [vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![2, 0, 0], vec![2, 1, 0]];
    let mut out = Vec::new();
    for t in 0..2 {
        for b in &base {
            out.push(SchurBundle::new(g, b.clone(), vec![]).expect("valid").into_sum().twisted(t));
        }
    }
    out
}

/// For a claimed exact sequence `0 → T₀ → T₁ → … → 0`, checks that
/// `Σ (-1)^i χ(P, T_i) = 0` for every probe `P`.
pub fn chi_sequence_check(terms: &[KClass], probes: &[BundleSum]) -> bool {
    probes.iter().all(|p| {
        let p = KClass::from(p.clone());
        let mut total = BigInt::zero();
        for (i, t) in terms.iter().enumerate() {
            let v = euler_pairing(&p, t);
            if i % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        total.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(b: Vec<i64>) -> SchurBundle {
        SchurBundle::new(CG.ambient, b, vec![]).unwrap()
    }

    #[test]
    fn shaded_minus_three() {
        let r = atom_cohomology(&atom(vec![0, 0, -3]));
        let g = r.determined().expect("determined");
        assert!(g.modulo_det().is_trivial_in(2));
    }

    #[test]
    fn top_koszul_atom_has_rank_one() {
        assert_eq!(koszul_atom(4).rank(), num_bigint::BigUint::from(1u32));
    }
}

//! Formal complexes of Schur atoms on `CG`, hyper-Ext between them,
//! mutations, and the collection checkers.
//!
//! A complex is a graded list of bundles; maps are never materialised. Some
//! structural facts about the differential are recorded as [`Arrow`]s: a
//! component between two atoms known to be nonzero, possibly known to be an
//! epimorphism or monomorphism of sheaves. These feed the `d₁` analysis in
//! [`complex_ext`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cg::{cg_ext, euler_pairing, CohomologyResult, E1Page, KClass, Route, Slice, CG};
use crate::error::DerivedError;
use crate::linalg::{q, Matrix};
use crate::par::Exec;
use crate::schur::{dualize, twist, BundleSum, SchurBundle};
use crate::weights::{dim, GradedRep};

/// A known nonzero component `from → to` of the differential leaving degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub degree: i64,
    pub from: SchurBundle,
    pub to: SchurBundle,
    /// Arrows with equal tags in the same Hom space are the same map.
    pub tag: String,
    pub epi: bool,
    pub mono: bool,
}

impl Arrow {
    fn twisted(&self, t: i64) -> Arrow {
        Arrow { from: twist(&self.from, t), to: twist(&self.to, t), ..self.clone() }
    }

    fn shifted(&self, m: i64) -> Arrow {
        Arrow { degree: self.degree - m, ..self.clone() }
    }

    fn dual(&self) -> Arrow {
        Arrow {
            degree: -self.degree - 1,
            from: dualize(&self.to),
            to: dualize(&self.from),
            tag: format!("{}*", self.tag),
            epi: self.mono,
            mono: self.epi,
        }
    }
}

/// How an object was produced by mutation; used for adjunction shortcuts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    /// `𝕃_𝔈 source`, with `𝔈` verified exceptional.
    Left { block: Vec<FormalComplex>, source: Box<FormalComplex> },
    /// `ℝ_𝔈 source`, with `𝔈` verified exceptional.
    Right { block: Vec<FormalComplex>, source: Box<FormalComplex> },
}

impl Origin {
    fn map(&self, f: &dyn Fn(&FormalComplex) -> FormalComplex, g: &dyn Fn(&FormalComplex) -> FormalComplex) -> Origin {
        match self {
            Origin::Left { block, source } => {
                Origin::Left { block: block.iter().map(f).collect(), source: Box::new(g(source)) }
            }
            Origin::Right { block, source } => {
                Origin::Right { block: block.iter().map(f).collect(), source: Box::new(g(source)) }
            }
        }
    }
}

/// Named objects with a rewrite rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresetKind {
    R,
    K,
    E10,
    E16,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PresetTag {
    kind: PresetKind,
    twist: i64,
    shift: i64,
}

/// A bounded complex of bundle sums, `terms[p]` in cohomological degree `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalComplex {
    pub name: String,
    terms: BTreeMap<i64, BundleSum>,
    arrows: Vec<Arrow>,
    /// `arrows` lists every component that may be nonzero.
    complete: bool,
    /// The terms come from an honest chain complex (not a twisted one).
    chain_level: bool,
    /// Only the K-class is modelled.
    class_only: bool,
    origin: Option<Origin>,
    preset: Option<PresetTag>,
}

impl FormalComplex {
    pub fn zero() -> Self {
        FormalComplex::from_terms("0", BTreeMap::new())
    }

    /// A complex with unknown differential.
    pub fn from_terms(name: impl Into<String>, terms: BTreeMap<i64, BundleSum>) -> Self {
        let terms: BTreeMap<i64, BundleSum> = terms.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let complete = terms.len() <= 1 && terms.values().all(multiplicity_free);
        FormalComplex {
            name: name.into(),
            terms,
            arrows: Vec::new(),
            complete,
            chain_level: true,
            class_only: false,
            origin: None,
            preset: None,
        }
    }

    pub fn from_sum(s: BundleSum) -> Self {
        let name = s.to_string();
        FormalComplex::from_terms(name, BTreeMap::from([(0, s)]))
    }

    pub fn atom(s: SchurBundle) -> Self {
        FormalComplex::from_sum(s.into_sum())
    }

    /// A two-term complex `[from → to]` in degrees `(d, d+1)` with a single nonzero map.
    pub fn two_term(name: impl Into<String>, degree: i64, from: SchurBundle, to: SchurBundle, tag: &str, epi: bool) -> Self {
        let mut c = FormalComplex::from_terms(
            name,
            BTreeMap::from([(degree, from.clone().into_sum()), (degree + 1, to.clone().into_sum())]),
        );
        c.arrows.push(Arrow { degree, from, to, tag: tag.to_string(), epi, mono: false });
        c.complete = true;
        c
    }

    /// An object known only through its K-class `plus - minus`.
    pub fn class_only(name: impl Into<String>, class: KClass) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, class.plus);
        terms.insert(1, class.minus);
        let mut c = FormalComplex::from_terms(name, terms);
        c.class_only = true;
        c.complete = false;
        c
    }

    pub fn terms(&self) -> &BTreeMap<i64, BundleSum> {
        &self.terms
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }

    pub fn is_class_only(&self) -> bool {
        self.class_only
    }

    pub fn is_chain_level(&self) -> bool {
        self.chain_level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single atom of a one-term multiplicity-one complex, with its degree.
    pub fn as_atom(&self) -> Option<(i64, &SchurBundle)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (d, s) = self.terms.iter().next()?;
        let mut atoms = s.atoms();
        match (atoms.next(), atoms.next()) {
            (Some((a, 1)), None) => Some((*d, a)),
            _ => None,
        }
    }

    /// Same graded terms; the object identity used for block membership.
    pub fn same_terms(&self, other: &FormalComplex) -> bool {
        self.terms == other.terms && self.class_only == other.class_only
    }

    /// `X[m]`: the term in degree `p` moves to `p - m`.
    pub fn shift(&self, m: i64) -> FormalComplex {
        let mut c = self.clone();
        c.terms = self.terms.iter().map(|(p, s)| (p - m, s.clone())).collect();
        c.arrows = self.arrows.iter().map(|a| a.shifted(m)).collect();
        c.origin = self.origin.as_ref().map(|o| o.map(&|e| e.clone(), &|s| s.shift(m)));
        if let Some(t) = &mut c.preset {
            t.shift += m;
        }
        c.name = relabel(&self.name, 0, m);
        c
    }

    /// `X ⊗ O(t)`.
    pub fn twist(&self, t: i64) -> FormalComplex {
        let mut c = self.clone();
        c.terms = self.terms.iter().map(|(p, s)| (*p, s.twisted(t))).collect();
        c.arrows = self.arrows.iter().map(|a| a.twisted(t)).collect();
        c.origin = self.origin.as_ref().map(|o| o.map(&|e| e.twist(t), &|s| s.twist(t)));
        if let Some(tag) = &mut c.preset {
            tag.twist += t;
        }
        c.name = relabel(&self.name, t, 0);
        c
    }

    /// Termwise dual: degree `p` goes to `-p`.
    pub fn dual(&self) -> FormalComplex {
        let mut c = self.clone();
        c.terms = self.terms.iter().map(|(p, s)| (-p, s.dual())).collect();
        c.arrows = self.arrows.iter().map(Arrow::dual).collect();
        c.origin = None;
        c.preset = None;
        c.name = format!("({})*", self.name);
        c
    }

    pub fn k_class(&self) -> KClass {
        let mut k = KClass::default();
        for (p, s) in &self.terms {
            if p.rem_euclid(2) == 0 {
                k.plus = k.plus.plus(s);
            } else {
                k.minus = k.minus.plus(s);
            }
        }
        k
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn rewrites(&self) -> Vec<FormalComplex> {
        let Some(tag) = &self.preset else { return Vec::new() };
        rewrite_table(tag.kind).into_iter().map(|c| c.twist(tag.twist).shift(tag.shift)).collect()
    }
}

impl fmt::Display for FormalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, s)| format!("[{p}] {s}")).collect();
        write!(f, "{}", parts.join("  ->  "))
    }
}

fn multiplicity_free(s: &BundleSum) -> bool {
    s.atoms().all(|(_, m)| m == 1)
}

fn relabel(name: &str, twist: i64, shift: i64) -> String {
    let mut out = name.to_string();
    if twist != 0 {
        out = format!("{out}({twist})");
    }
    if shift != 0 {
        out = format!("{out}[{shift}]");
    }
    out
}

fn gr() -> crate::bbw::GrassmannianSpec {
    CG.ambient
}

fn bundle(b: &[i64], c: &[i64]) -> SchurBundle {
    SchurBundle::new(gr(), b.to_vec(), c.to_vec()).expect("valid weights")
}

/// `O`, `U*`, `Λ²U*`, `Σ^{2,1}U*`, `Λ²Q`, twisted by `O(t)`.
pub mod atoms {
    use super::*;

    pub fn structure(t: i64) -> SchurBundle {
        bundle(&[t, t, t], &[])
    }
    pub fn u_dual(t: i64) -> SchurBundle {
        bundle(&[1 + t, t, t], &[])
    }
    pub fn wedge2_u_dual(t: i64) -> SchurBundle {
        bundle(&[1 + t, 1 + t, t], &[])
    }
    pub fn sigma21_u_dual(t: i64) -> SchurBundle {
        bundle(&[2 + t, 1 + t, t], &[])
    }
    pub fn wedge2_q(t: i64) -> SchurBundle {
        bundle(&[t, t, t], &[0, 0, -1, -1])
    }
    pub fn u(t: i64) -> SchurBundle {
        bundle(&[t, t, -1 + t], &[])
    }
    pub fn sym2_u(t: i64) -> SchurBundle {
        bundle(&[t, t, -2 + t], &[])
    }
    pub fn u_perp(t: i64) -> SchurBundle {
        bundle(&[t, t, t], &[1, 0, 0, 0])
    }
}

/// Preset objects.
pub mod presets {
    use super::*;

    /// `ℛ = [Λ²Q → Λ²U*]` in degrees `(0, 1)`, the kernel of a surjection.
    pub fn r() -> FormalComplex {
        let mut c = FormalComplex::two_term("R", 0, atoms::wedge2_q(0), atoms::wedge2_u_dual(0), "R", true);
        c.origin = Some(Origin::Right {
            block: vec![FormalComplex::atom(atoms::wedge2_u_dual(0))],
            source: Box::new(FormalComplex::atom(atoms::wedge2_q(0))),
        });
        c.preset = Some(PresetTag { kind: PresetKind::R, twist: 0, shift: 0 });
        c
    }

    /// `𝒦 = [V*⊗Λ²U* → Σ^{2,1}U*]` in degrees `(0, 1)`.
    pub fn k() -> FormalComplex {
        let mut c = FormalComplex::from_terms(
            "K",
            BTreeMap::from([
                (0, atoms::wedge2_u_dual(0).into_sum().scaled(7)),
                (1, atoms::sigma21_u_dual(0).into_sum()),
            ]),
        );
        c.preset = Some(PresetTag { kind: PresetKind::K, twist: 0, shift: 0 });
        c
    }

    /// `ℰ₁₀`, an extension of `U⊥` by `S²U`.
    pub fn e10() -> FormalComplex {
        let class = KClass::from(atoms::sym2_u(0).into_sum().plus(&atoms::u_perp(0).into_sum()));
        let mut c = FormalComplex::class_only("E10", class);
        c.preset = Some(PresetTag { kind: PresetKind::E10, twist: 0, shift: 0 });
        c
    }

    /// `ℰ₁₆`, with class `U⊥⊗Λ²U* + Λ²U* + O(1)`.
    pub fn e16() -> FormalComplex {
        let up = atoms::u_perp(0).into_sum();
        let w = atoms::wedge2_u_dual(0).into_sum();
        let class = KClass::from(up.tensor(&w).expect("same Grassmannian").plus(&w).plus(&atoms::structure(1).into_sum()));
        let mut c = FormalComplex::class_only("E16", class);
        c.preset = Some(PresetTag { kind: PresetKind::E16, twist: 0, shift: 0 });
        c
    }

    pub fn by_kind(kind: PresetKind) -> FormalComplex {
        match kind {
            PresetKind::R => r(),
            PresetKind::K => k(),
            PresetKind::E10 => e10(),
            PresetKind::E16 => e16(),
        }
    }

    /// The block `𝔈(t) = (O(t), U*(t), Λ²U*(t))`.
    pub fn block(t: i64) -> Vec<FormalComplex> {
        vec![
            FormalComplex::atom(atoms::structure(t)),
            FormalComplex::atom(atoms::u_dual(t)),
            FormalComplex::atom(atoms::wedge2_u_dual(t)),
        ]
    }

    /// The fifteen-object Lefschetz collection, in order.
    pub fn cg15() -> Vec<FormalComplex> {
        let mut out = block(0);
        out.push(r());
        out.push(FormalComplex::atom(atoms::sigma21_u_dual(0)));
        out.extend(block(1));
        out.push(r().twist(1));
        for t in 2..4 {
            out.extend(block(t));
        }
        out
    }

    pub const CG15_PARTITION: [usize; 4] = [5, 4, 3, 3];
}

/// Alternative presentations, keyed by preset.
///
/// `ℛ`: replacing `Λ²Q` by its Koszul resolution `S²U → V⊗U → Λ²V⊗O`
/// gives `ℛ ≃ [S²U → 7·U → 21·O → Λ²U*]` in degrees `-2..=1`.
pub fn rewrite_table(kind: PresetKind) -> Vec<FormalComplex> {
    match kind {
        PresetKind::R => vec![FormalComplex::from_terms(
            "R(koszul)",
            BTreeMap::from([
                (-2, atoms::sym2_u(0).into_sum()),
                (-1, atoms::u(0).into_sum().scaled(7)),
                (0, atoms::structure(0).into_sum().scaled(21)),
                (1, atoms::wedge2_u_dual(0).into_sum()),
            ]),
        )],
        _ => Vec::new(),
    }
}

/// Result of a hyper-Ext computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtOutcome {
    pub result: CohomologyResult,
    pub route: Route,
}

impl ExtOutcome {
    fn determined(g: GradedRep, route: Route) -> Self {
        ExtOutcome { result: CohomologyResult::Determined(g.modulo_det()), route }
    }
}

#[derive(Debug, Clone)]
struct Summand {
    a: i64,
    s: SchurBundle,
    b: i64,
    t: SchurBundle,
    ext: GradedRep,
}

struct Nested {
    page: E1Page,
    summands: Vec<Summand>,
    determined: bool,
    route: Route,
}

fn nested_page(x: &FormalComplex, y: &FormalComplex) -> Nested {
    let mut page = E1Page::default();
    let mut summands = Vec::new();
    let mut determined = true;
    let mut route = Route::Direct;
    for (a, xs) in &x.terms {
        for (b, ys) in &y.terms {
            let p = b - a;
            for (s, ms) in xs.atoms() {
                for (t, mt) in ys.atoms() {
                    let (r, rt) = cg_ext(&s.clone().into_sum(), &t.clone().into_sum());
                    if rt == Route::Serre {
                        route = Route::Serre;
                    }
                    let ext = match r {
                        CohomologyResult::Determined(g) => g.modulo_det(),
                        CohomologyResult::Indeterminate(sub) => {
                            determined = false;
                            page.provenance.insert(p, format!("Ext({s}, {t}) unresolved"));
                            sub.abutment().modulo_det()
                        }
                    };
                    for (qd, ws) in ext.degrees() {
                        for (w, m) in ws {
                            page.insert((p, qd), w.clone(), m * ms * mt);
                        }
                    }
                    if ms == 1 && mt == 1 {
                        summands.push(Summand { a: *a, s: s.clone(), b: *b, t: t.clone(), ext });
                    }
                }
            }
        }
    }
    page.linked = page.compute_links();
    Nested { page, summands, determined, route }
}

fn slice_dim(s: Option<&Slice>) -> BigInt {
    s.map(|s| s.iter().map(|(w, m)| BigInt::from(dim(w)) * BigInt::from(*m)).sum()).unwrap_or_default()
}

/// Lower bound for the rank of `d₁ : E₁^{p,0} → E₁^{p+1,0}` from identity
/// morphisms and known epi/mono components.
fn d1_rank_bound(x: &FormalComplex, y: &FormalComplex, n: &Nested, p: i64) -> BigInt {
    let mut best = BigInt::zero();
    let src: Vec<&Summand> = n.summands.iter().filter(|s| s.b - s.a == p && s.ext.in_degree(0).is_some()).collect();

    // one summand with an injective component
    let src_dim = slice_dim(n.page.entries.get(&(p, 0)));
    if src.len() == 1 && BigInt::from(src[0].ext.dimension_in(0)) == src_dim {
        let s = src[0];
        let pre = x.arrows.iter().any(|ar| ar.epi && ar.degree == s.a - 1 && ar.to == s.s);
        let post = y.arrows.iter().any(|ar| ar.mono && ar.degree == s.b && ar.from == s.t);
        if pre || post {
            best = src_dim.clone();
        }
    }

    // identities: d(f) = d_Y∘f - (-1)^p f∘d_X
    let ids: Vec<&Summand> = src.iter().copied().filter(|s| s.s == s.t && s.ext.is_trivial_in(0)).collect();
    if ids.is_empty() {
        return best;
    }
    let mut coords: BTreeMap<(i64, SchurBundle, i64, SchurBundle), String> = BTreeMap::new();
    let mut images: Vec<BTreeMap<(i64, SchurBundle, i64, SchurBundle), i64>> = Vec::new();
    let sign = if p.rem_euclid(2) == 0 { -1 } else { 1 };
    for s in &ids {
        let mut img = BTreeMap::new();
        for ar in y.arrows.iter().filter(|ar| ar.degree == s.b && ar.from == s.t) {
            let slot = (s.a, s.s.clone(), s.b + 1, ar.to.clone());
            if coords.get(&slot).is_some_and(|t| *t != ar.tag) {
                return best;
            }
            coords.insert(slot.clone(), ar.tag.clone());
            *img.entry(slot).or_insert(0) += 1;
        }
        for ar in x.arrows.iter().filter(|ar| ar.degree == s.a - 1 && ar.to == s.s) {
            let slot = (s.a - 1, ar.from.clone(), s.b, s.t.clone());
            if coords.get(&slot).is_some_and(|t| *t != ar.tag) {
                return best;
            }
            coords.insert(slot.clone(), ar.tag.clone());
            *img.entry(slot).or_insert(0) += sign;
        }
        images.push(img);
    }
    let keys: Vec<_> = coords.keys().cloned().collect();
    if keys.is_empty() {
        return best;
    }
    let rows: Vec<Vec<_>> = images.iter().map(|img| keys.iter().map(|k| q(*img.get(k).unwrap_or(&0))).collect()).collect();
    let r = BigInt::from(Matrix::from_rows(rows).rank());
    best.max(r)
}

/// Removes `what` from `from` as multisets; `false` if not contained.
fn slice_subtract(from: &mut Slice, what: &Slice) -> bool {
    for (w, m) in what {
        match from.get_mut(w) {
            Some(k) if *k >= *m => {
                *k -= m;
                if *k == 0 {
                    from.remove(w);
                }
            }
            _ => return false,
        }
    }
    true
}

/// Cancels `d₁` pairs in row 0 whose rank is forced; returns whether anything changed.
fn refine(x: &FormalComplex, y: &FormalComplex, n: &mut Nested) -> bool {
    if !(x.complete && y.complete) {
        return false;
    }
    let cols: BTreeSet<i64> = n.page.entries.keys().filter(|(_, qd)| *qd == 0).map(|(p, _)| *p).collect();
    let mut used = BTreeSet::new();
    let mut changed = false;
    for &p in &cols {
        if !cols.contains(&(p + 1)) || used.contains(&p) || used.contains(&(p + 1)) {
            continue;
        }
        let rank = d1_rank_bound(x, y, n, p);
        if rank.is_zero() {
            continue;
        }
        let src = n.page.entries.get(&(p, 0)).cloned().unwrap_or_default();
        let tgt = n.page.entries.get(&(p + 1, 0)).cloned().unwrap_or_default();
        let (sd, td) = (slice_dim(Some(&src)), slice_dim(Some(&tgt)));
        let (mut keep_src, mut keep_tgt) = (src.clone(), tgt.clone());
        if rank == td && slice_subtract(&mut keep_src, &tgt) {
            keep_tgt.clear();
        } else if rank == sd && slice_subtract(&mut keep_tgt, &src) {
            keep_src.clear();
        } else {
            continue;
        }
        for (pos, s) in [((p, 0), keep_src), ((p + 1, 0), keep_tgt)] {
            if s.is_empty() {
                n.page.entries.remove(&pos);
            } else {
                n.page.entries.insert(pos, s);
            }
        }
        used.insert(p);
        used.insert(p + 1);
        changed = true;
    }
    if changed {
        n.page.linked = n.page.compute_links();
    }
    changed
}

/// Flags controlling which shortcuts are still allowed in a recursive call.
#[derive(Clone, Copy)]
struct Budget {
    depth: u32,
    serre: bool,
}

/// `Ext•(X, Y)` for formal complexes.
///
/// Tries, in order: the nested page `E₁^{p,q} = ⊕ₐ Ext^q(Xᵃ, Y^{a+p})` with
/// positional linkage and forced `d₁` cancellations; adjunction shortcuts
/// for mutated objects; rewritten presentations of presets; Serre duality.
pub fn complex_ext(x: &FormalComplex, y: &FormalComplex) -> Result<ExtOutcome, DerivedError> {
    ext_inner(x, y, Budget { depth: 4, serre: true })
}

fn ext_inner(x: &FormalComplex, y: &FormalComplex, budget: Budget) -> Result<ExtOutcome, DerivedError> {
    for o in [x, y] {
        if o.class_only {
            return Err(DerivedError::ClassOnly(o.name.clone()));
        }
    }
    if x.is_zero() || y.is_zero() {
        return Ok(ExtOutcome::determined(GradedRep::zero(), Route::Direct));
    }
    let mut fallback: Option<E1Page> = None;

    if x.chain_level && y.chain_level {
        let (out, page) = via_nested(x, y);
        if let Some(o) = out {
            return Ok(o);
        }
        fallback = Some(page);
    }

    if budget.depth > 0 {
        let next = Budget { depth: budget.depth - 1, ..budget };
        if let Some(o) = via_adjunction(x, y, next)? {
            return Ok(o);
        }
        for xr in std::iter::once(x.clone()).chain(x.rewrites()) {
            for yr in std::iter::once(y.clone()).chain(y.rewrites()) {
                if xr.same_terms(x) && yr.same_terms(y) {
                    continue;
                }
                if let (Some(o), _) = via_nested(&xr, &yr) {
                    return Ok(ExtOutcome { route: Route::Rewrite, ..o });
                }
            }
        }
        if budget.serre {
            let inner = Budget { depth: next.depth, serre: false };
            let swapped = soft(ext_inner(y, &x.twist(CG.canonical_twist), inner))?;
            if let Some(ExtOutcome { result: CohomologyResult::Determined(g), .. }) = swapped {
                return Ok(ExtOutcome::determined(g.serre_reflect(CG.dim as i64), Route::Serre));
            }
        }
    }

    match fallback {
        Some(page) => Ok(ExtOutcome { result: CohomologyResult::Indeterminate(Box::new(page)), route: Route::Complex }),
        None => Err(DerivedError::GradedOnly(format!("{} / {}", x.name, y.name))),
    }
}

fn via_nested(x: &FormalComplex, y: &FormalComplex) -> (Option<ExtOutcome>, E1Page) {
    let mut n = nested_page(x, y);
    if !n.determined {
        return (None, n.page);
    }
    let single = x.terms.len() == 1 && y.terms.len() == 1;
    let refined = if n.page.linked.is_empty() { false } else { refine(x, y, &mut n) };
    if n.page.linked.is_empty() {
        let route = if refined || !single { Route::Complex } else { n.route };
        (Some(ExtOutcome::determined(n.page.abutment(), route)), n.page)
    } else {
        (None, n.page)
    }
}

fn in_block(block: &[FormalComplex], x: &FormalComplex) -> bool {
    block.iter().any(|e| e.same_terms(x))
}

fn vanishes(x: &FormalComplex, y: &FormalComplex, budget: Budget) -> Result<bool, DerivedError> {
    Ok(soft(ext_inner(x, y, budget))?.is_some_and(|o| o.result.is_determined_zero()))
}

/// Failure to find a chain-level presentation inside a shortcut is not fatal.
fn soft(r: Result<ExtOutcome, DerivedError>) -> Result<Option<ExtOutcome>, DerivedError> {
    match r {
        Ok(o) => Ok(Some(o)),
        Err(DerivedError::GradedOnly(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn via_adjunction(x: &FormalComplex, y: &FormalComplex, budget: Budget) -> Result<Option<ExtOutcome>, DerivedError> {
    let zero = || Ok(Some(ExtOutcome::determined(GradedRep::zero(), Route::Adjunction)));
    // 𝕃_𝔈 G lies in 𝔈^⊥, ℝ_𝔈 G in ^⊥𝔈
    if let Some(Origin::Left { block, .. }) = &y.origin {
        if in_block(block, x) {
            return zero();
        }
    }
    if let Some(Origin::Right { block, .. }) = &x.origin {
        if in_block(block, y) {
            return zero();
        }
    }
    // the cone part lies in ⟨𝔈⟩: it drops out once Ext against 𝔈 vanishes
    if let Some(Origin::Left { block, source } | Origin::Right { block, source }) = &x.origin {
        let mut ok = true;
        for e in block {
            if !vanishes(e, y, budget)? {
                ok = false;
                break;
            }
        }
        if ok {
            if let Some(o) = soft(ext_inner(source, y, budget))? {
                if o.result.determined().is_some() {
                    return Ok(Some(ExtOutcome { route: Route::Adjunction, ..o }));
                }
            }
        }
    }
    if let Some(Origin::Left { block, source } | Origin::Right { block, source }) = &y.origin {
        let mut ok = true;
        for e in block {
            if !vanishes(x, e, budget)? {
                ok = false;
                break;
            }
        }
        if ok {
            if let Some(o) = soft(ext_inner(x, source, budget))? {
                if o.result.determined().is_some() {
                    return Ok(Some(ExtOutcome { route: Route::Adjunction, ..o }));
                }
            }
        }
    }
    Ok(None)
}

fn ext_multiplicities(g: &GradedRep) -> BTreeMap<i64, u64> {
    g.dimensions().into_iter().map(|(d, v)| (d, v.to_u64().expect("small Ext"))).collect()
}

/// All of `Ext•(E, G)` sits in row 0 of the nested page, so the evaluation map is a chain map.
fn row_zero_only(e: &FormalComplex, g: &FormalComplex) -> bool {
    let n = nested_page(e, g);
    n.page.entries.keys().all(|(_, qd)| *qd == 0)
}

fn require(out: ExtOutcome, what: String) -> Result<GradedRep, DerivedError> {
    match out.result {
        CohomologyResult::Determined(g) => Ok(g),
        CohomologyResult::Indeterminate(p) => Err(DerivedError::Indeterminate(format!("{what}\n{p}"))),
    }
}

/// `𝕃_E G = Cone(Ext•(E,G) ⊗ E → G)`, with `Cone(f)ⁿ = Aⁿ⁺¹ ⊕ Bⁿ`.
pub fn mutate_left(e: &FormalComplex, g: &FormalComplex) -> Result<FormalComplex, DerivedError> {
    // 𝕃_E and ℝ_E are mutually inverse between ^⊥E and E^⊥
    if let Some(Origin::Right { block, source }) = &g.origin {
        if block.len() == 1 && block[0].same_terms(e) && complex_ext(e, source)?.result.is_determined_zero() {
            return Ok((**source).clone());
        }
    }
    let ext = require(complex_ext(e, g)?, format!("Ext({}, {})", e.name, g.name))?;
    let name = format!("L_{{{}}}({})", e.name, g.name);
    if ext.is_zero() {
        let mut out = g.clone();
        out.name = name;
        return Ok(out);
    }
    let mut terms = g.terms.clone();
    for (i, m) in ext_multiplicities(&ext) {
        for (d, s) in &e.terms {
            let n = d + i - 1;
            let entry = terms.entry(n).or_insert_with(BundleSum::zero);
            *entry = entry.plus(&s.scaled(m));
        }
    }
    let mut out = FormalComplex::from_terms(name, terms);
    out.chain_level = e.chain_level && g.chain_level && row_zero_only(e, g);
    if let (Some((0, ea)), Some((0, ga))) = (e.as_atom(), g.as_atom()) {
        if ext.is_trivial_in(0) {
            out.arrows.push(Arrow {
                degree: -1,
                from: ea.clone(),
                to: ga.clone(),
                tag: format!("ev:{}", out.name),
                epi: false,
                mono: false,
            });
            out.complete = true;
        }
    }
    out.origin = exceptional_block(std::slice::from_ref(e))
        .then(|| Origin::Left { block: vec![e.clone()], source: Box::new(g.clone()) });
    Ok(out)
}

/// `ℝ_E G = Cone(G → Ext•(G,E)* ⊗ E)[-1]`.
pub fn mutate_right(e: &FormalComplex, g: &FormalComplex) -> Result<FormalComplex, DerivedError> {
    if let Some(Origin::Left { block, source }) = &g.origin {
        if block.len() == 1 && block[0].same_terms(e) && complex_ext(source, e)?.result.is_determined_zero() {
            return Ok((**source).clone());
        }
    }
    let ext = require(complex_ext(g, e)?, format!("Ext({}, {})", g.name, e.name))?;
    let name = format!("R_{{{}}}({})", e.name, g.name);
    if ext.is_zero() {
        let mut out = g.clone();
        out.name = name;
        return Ok(out);
    }
    let mut terms = g.terms.clone();
    for (i, m) in ext_multiplicities(&ext) {
        for (d, s) in &e.terms {
            let n = d + 1 - i;
            let entry = terms.entry(n).or_insert_with(BundleSum::zero);
            *entry = entry.plus(&s.scaled(m));
        }
    }
    let mut out = FormalComplex::from_terms(name, terms);
    out.chain_level = e.chain_level && g.chain_level && row_zero_only(g, e);
    if let (Some((0, ea)), Some((0, ga))) = (e.as_atom(), g.as_atom()) {
        if ext.is_trivial_in(0) {
            out.arrows.push(Arrow {
                degree: 0,
                from: ga.clone(),
                to: ea.clone(),
                tag: format!("coev:{}", out.name),
                epi: false,
                mono: false,
            });
            out.complete = true;
        }
    }
    out.origin = exceptional_block(std::slice::from_ref(e))
        .then(|| Origin::Right { block: vec![e.clone()], source: Box::new(g.clone()) });
    Ok(out)
}

fn exceptional_block(block: &[FormalComplex]) -> bool {
    let table = check_exceptional_collection(block, Exec::Sequential);
    table.verdict() == Verdict::Exceptional
}

/// `𝕃_𝔈 G = 𝕃_{E₁} ∘ … ∘ 𝕃_{Eₘ}(G)`, innermost mutation through the last object.
pub fn mutate_left_block(block: &[FormalComplex], g: &FormalComplex) -> Result<FormalComplex, DerivedError> {
    let mut cur = g.clone();
    for e in block.iter().rev() {
        cur = mutate_left(e, &cur)?;
    }
    let names: Vec<&str> = block.iter().map(|e| e.name.as_str()).collect();
    cur.name = format!("L_{{{}}}({})", names.join(","), g.name);
    cur.origin =
        exceptional_block(block).then(|| Origin::Left { block: block.to_vec(), source: Box::new(g.clone()) });
    Ok(cur)
}

/// `𝕃_𝔈 G` as an abstract object: its class from K-level mutation and its
/// origin for adjunction, without terms. Returns the reason the terms could
/// not be materialised, if any.
pub fn mutate_left_block_or_abstract(block: &[FormalComplex], g: &FormalComplex) -> (FormalComplex, Option<String>) {
    let blocker = match mutate_left_block(block, g) {
        Ok(c) => return (c, None),
        Err(e) => e.to_string(),
    };
    let mut k = g.k_class();
    for e in block.iter().rev() {
        let chi = euler_pairing(&e.k_class(), &k);
        let m = chi.magnitude().to_u64().expect("small pairing");
        let ek = e.k_class();
        let (p, n) = if chi.sign() == num_bigint::Sign::Minus { (ek.plus, ek.minus) } else { (ek.minus, ek.plus) };
        k = KClass::new(k.plus.plus(&p.scaled(m)), k.minus.plus(&n.scaled(m)));
    }
    let names: Vec<&str> = block.iter().map(|e| e.name.as_str()).collect();
    let mut c = FormalComplex::from_terms(format!("L_{{{}}}({})", names.join(","), g.name), BTreeMap::from([(0, k.plus), (1, k.minus)]));
    c.chain_level = false;
    c.complete = false;
    c.origin = exceptional_block(block).then(|| Origin::Left { block: block.to_vec(), source: Box::new(g.clone()) });
    (c, Some(blocker))
}

/// `ℝ_𝔈 G = ℝ_{Eₘ} ∘ … ∘ ℝ_{E₁}(G)`.
pub fn mutate_right_block(block: &[FormalComplex], g: &FormalComplex) -> Result<FormalComplex, DerivedError> {
    let mut cur = g.clone();
    for e in block {
        cur = mutate_right(e, &cur)?;
    }
    let names: Vec<&str> = block.iter().map(|e| e.name.as_str()).collect();
    cur.name = format!("R_{{{}}}({})", names.join(","), g.name);
    cur.origin =
        exceptional_block(block).then(|| Origin::Right { block: block.to_vec(), source: Box::new(g.clone()) });
    Ok(cur)
}

/// `χ(X, Y)` from first pages; never needs determinacy.
pub fn euler(x: &FormalComplex, y: &FormalComplex) -> BigInt {
    euler_pairing(&x.k_class(), &y.k_class())
}

/// Classes as signed integer combinations of fixed complexes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassCombo(pub Vec<(BigInt, FormalComplex)>);

impl ClassCombo {
    pub fn of(x: &FormalComplex) -> Self {
        ClassCombo(vec![(BigInt::from(1), x.clone())])
    }

    pub fn scaled(&self, k: &BigInt) -> ClassCombo {
        ClassCombo(self.0.iter().map(|(c, x)| (c * k, x.clone())).collect())
    }

    pub fn plus(&self, other: &ClassCombo) -> ClassCombo {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        ClassCombo(v)
    }

    pub fn twist(&self, t: i64) -> ClassCombo {
        ClassCombo(self.0.iter().map(|(c, x)| (c.clone(), x.twist(t))).collect())
    }

    /// `χ(P, -)` extended linearly.
    pub fn pair_left(&self, p: &FormalComplex) -> BigInt {
        self.0.iter().map(|(c, x)| c * euler(p, x)).sum()
    }

    /// `χ(-, P)` extended linearly.
    pub fn pair_right(&self, p: &FormalComplex) -> BigInt {
        self.0.iter().map(|(c, x)| c * euler(x, p)).sum()
    }
}

/// K-level left mutation: `[𝕃_E G] = [G] - χ(E, G)[E]`.
pub fn mutate_left_class(e: &FormalComplex, g: &ClassCombo) -> ClassCombo {
    let chi = g.pair_left(e);
    g.plus(&ClassCombo::of(e).scaled(&-chi))
}

/// K-level right mutation: `[ℝ_E G] = [G] - χ(G, E)[E]`.
pub fn mutate_right_class(e: &FormalComplex, g: &ClassCombo) -> ClassCombo {
    let chi = g.pair_right(e);
    g.plus(&ClassCombo::of(e).scaled(&-chi))
}

pub fn mutate_left_block_class(block: &[FormalComplex], g: &ClassCombo) -> ClassCombo {
    block.iter().rev().fold(g.clone(), |acc, e| mutate_left_class(e, &acc))
}

/// `χ(Eᵢ, -)` against the fifteen collection objects. Their Gram matrix is
/// unimodular, so this vector pins down the numerical class.
pub fn class_vector(c: &ClassCombo) -> Vec<BigInt> {
    presets::cg15().iter().map(|e| c.pair_left(e)).collect()
}

pub fn same_class(a: &ClassCombo, b: &ClassCombo) -> bool {
    class_vector(a) == class_vector(b)
}

/// What a cell of an Ext table must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    Diagonal,
    RequiredZero,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtCell {
    pub row: usize,
    pub col: usize,
    pub kind: CellKind,
    pub result: Result<CohomologyResult, String>,
    pub route: Route,
}

impl ExtCell {
    pub fn satisfied(&self) -> Option<bool> {
        let r = match &self.result {
            Ok(r) => r,
            Err(_) => return None,
        };
        let g = r.determined()?;
        Some(match self.kind {
            CellKind::Diagonal => g.is_trivial_in(0),
            CellKind::RequiredZero => g.is_zero(),
            CellKind::Free => true,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Exceptional,
    NotExceptional(Vec<(usize, usize)>),
    Unresolved(Vec<(usize, usize)>),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = |v: &Vec<(usize, usize)>| v.iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ");
        match self {
            Verdict::Exceptional => write!(f, "EXCEPTIONAL"),
            Verdict::NotExceptional(v) => write!(f, "NOT EXCEPTIONAL: {}", cells(v)),
            Verdict::Unresolved(v) => write!(f, "UNRESOLVED: {}", cells(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub names: Vec<String>,
    pub cells: Vec<ExtCell>,
}

impl ExtTable {
    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn cell(&self, i: usize, j: usize) -> &ExtCell {
        &self.cells[i * self.size() + j]
    }

    pub fn verdict(&self) -> Verdict {
        let mut bad = Vec::new();
        let mut open = Vec::new();
        for c in &self.cells {
            match c.satisfied() {
                Some(true) => {}
                Some(false) => bad.push((c.row, c.col)),
                None if c.kind != CellKind::Free => open.push((c.row, c.col)),
                None => {}
            }
        }
        if !bad.is_empty() {
            Verdict::NotExceptional(bad)
        } else if !open.is_empty() {
            Verdict::Unresolved(open)
        } else {
            Verdict::Exceptional
        }
    }

    /// Required cells resolved other than directly.
    pub fn fallback_cells(&self) -> Vec<(usize, usize, Route)> {
        self.cells
            .iter()
            .filter(|c| c.kind != CellKind::Free && c.route != Route::Direct)
            .map(|c| (c.row, c.col, c.route))
            .collect()
    }
}

/// Full Ext table; cell `(i, j)` is `Ext•(Eᵢ, Eⱼ)`, required zero for `i > j`.
pub fn check_exceptional_collection(objects: &[FormalComplex], exec: Exec) -> ExtTable {
    let n = objects.len();
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let cells = exec.map(idx, |(i, j)| {
        let kind = match i.cmp(&j) {
            std::cmp::Ordering::Equal => CellKind::Diagonal,
            std::cmp::Ordering::Greater => CellKind::RequiredZero,
            std::cmp::Ordering::Less => CellKind::Free,
        };
        match complex_ext(&objects[i], &objects[j]) {
            Ok(o) => ExtCell { row: i, col: j, kind, result: Ok(o.result), route: o.route },
            Err(e) => ExtCell { row: i, col: j, kind, result: Err(e.to_string()), route: Route::Direct },
        }
    });
    ExtTable { names: objects.iter().map(|o| o.name.clone()).collect(), cells }
}

/// Block `i` must equal the first `ϑᵢ` objects of block 0 twisted by `O(i)`,
/// and `ϑ` must be non-increasing.
pub fn lefschetz_validate(objects: &[FormalComplex], partition: &[usize]) -> bool {
    if partition.iter().sum::<usize>() != objects.len() || partition.contains(&0) {
        return false;
    }
    if partition.windows(2).any(|w| w[0] < w[1]) {
        return false;
    }
    let mut start = 0;
    for (i, &len) in partition.iter().enumerate() {
        for k in 0..len {
            if !objects[start + k].same_terms(&objects[k].twist(i as i64)) {
                return false;
            }
        }
        start += len;
    }
    true
}

/// Euler pairing matrix `χ(Eᵢ, Eⱼ)`.
pub fn euler_matrix(objects: &[FormalComplex], exec: Exec) -> Vec<Vec<BigInt>> {
    let n = objects.len();
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let flat = exec.map(idx, |(i, j)| euler(&objects[i], &objects[j]));
    flat.chunks(n).map(|r| r.to_vec()).collect()
}

pub fn is_upper_unitriangular(m: &[Vec<BigInt>]) -> bool {
    m.iter().enumerate().all(|(i, r)| {
        r.iter().enumerate().all(|(j, v)| match i.cmp(&j) {
            std::cmp::Ordering::Equal => *v == BigInt::from(1),
            std::cmp::Ordering::Greater => v.is_zero(),
            std::cmp::Ordering::Less => true,
        })
    })
}

pub fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let rows = m.iter().map(|r| r.iter().map(|v| crate::linalg::Q::from_integer(v.clone())).collect()).collect();
    let d = Matrix::from_rows(rows).determinant();
    d.to_integer()
}

/// One τ arrow checked on K-classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauCheck {
    pub from: String,
    pub to: String,
    /// Matches up to a sign, i.e. up to an odd shift.
    pub up_to_sign: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualCell {
    pub row: usize,
    pub col: usize,
    /// Needed for the minimal certificate: cells avoiding `𝕃_𝔈ℛ`.
    pub required: bool,
    pub result: Result<CohomologyResult, String>,
    pub route: Route,
}

impl ResidualCell {
    pub fn holds(&self) -> Option<bool> {
        let g = self.result.as_ref().ok()?.determined()?;
        Some(if self.row == self.col { g.is_trivial_in(0) } else { g.is_zero() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Why the terms of `𝕃_𝔈ℛ` could not be computed, with the blocking page.
    /// Without terms it is known by class and origin only.
    pub blocker: Option<String>,
    pub names: Vec<String>,
    pub objects: Vec<String>,
    pub euler: Vec<Vec<BigInt>>,
    pub cells: Vec<ResidualCell>,
    pub tau: Vec<TauCheck>,
}

impl ResidualReport {
    pub fn chi_orthogonal(&self) -> bool {
        self.euler.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, v)| if i == j { *v == BigInt::from(1) } else { v.is_zero() })
        })
    }

    pub fn minimum_met(&self) -> bool {
        self.chi_orthogonal() && self.cells.iter().filter(|c| c.required).all(|c| c.holds() == Some(true))
    }

    pub fn fully_verified(&self) -> bool {
        self.chi_orthogonal() && self.cells.iter().all(|c| c.holds() == Some(true))
    }

    pub fn tau_holds(&self) -> bool {
        self.tau.iter().all(|t| t.holds)
    }
}

/// Builds `𝕃_𝔈ℛ`, `Σ^{2,1}U*(-1)`, `ℛ(-1)` and checks exceptionality,
/// orthogonality and the τ-action on classes.
pub fn residual_check(exec: Exec) -> Result<ResidualReport, DerivedError> {
    let e = presets::block(0);
    let r = presets::r();
    let (lr, blocker) = mutate_left_block_or_abstract(&e, &r);
    let s = FormalComplex::atom(atoms::sigma21_u_dual(-1));
    let rm = r.twist(-1);
    let objs = [lr.clone(), s.clone(), rm.clone()];
    let names = vec!["L_E(R)".to_string(), "S21U*(-1)".to_string(), "R(-1)".to_string()];

    let idx: Vec<(usize, usize)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
    let cells = exec.map(idx.clone(), |(i, j)| {
        let required = i != 0 && j != 0;
        match complex_ext(&objs[i], &objs[j]) {
            Ok(o) => ResidualCell { row: i, col: j, required, result: Ok(o.result), route: o.route },
            Err(err) => ResidualCell { row: i, col: j, required, result: Err(err.to_string()), route: Route::Direct },
        }
    });
    let euler = euler_matrix(&objs, exec);

    // τ = 𝕃_𝔈(- ⊗ O(1)) on classes
    let tau = |c: &ClassCombo| mutate_left_block_class(&e, &c.twist(1));
    let class_lr = mutate_left_block_class(&e, &ClassCombo::of(&r));
    let class_s = ClassCombo::of(&s);
    let class_rm = ClassCombo::of(&rm);
    let neg = |c: &ClassCombo| c.scaled(&BigInt::from(-1));
    let check = |from: &str, to: &str, img: ClassCombo, target: &ClassCombo, up_to_sign: bool| TauCheck {
        from: from.into(),
        to: to.into(),
        up_to_sign,
        holds: same_class(&img, target) || (up_to_sign && same_class(&img, &neg(target))),
    };
    let tau_checks = vec![
        check("R(-1)", "L_E(R)", tau(&class_rm), &class_lr, false),
        check("S21U*(-1)", "S21U*(-1)[2]", tau(&class_s), &class_s, false),
        check("L_E(R)", "R(-1)", tau(&class_lr), &class_rm, true),
    ];
    Ok(ResidualReport {
        blocker,
        names,
        objects: objs.iter().map(|o| o.to_string()).collect(),
        euler,
        cells,
        tau: tau_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::DominantWeight;

    #[test]
    fn shift_moves_terms_down() {
        let r = presets::r().shift(1);
        assert_eq!(r.min_degree(), Some(-1));
        assert_eq!(r.k_class(), presets::r().k_class().negated());
    }

    #[test]
    fn twist_tracks_preset() {
        let r = presets::r().twist(1);
        assert_eq!(r.rewrites().len(), 1);
        assert_eq!(r.name, "R(1)");
    }

    #[test]
    fn dominant_helper() {
        assert_eq!(atoms::u_dual(0).b, DominantWeight::new(vec![1, 0, 0]).unwrap());
    }
}

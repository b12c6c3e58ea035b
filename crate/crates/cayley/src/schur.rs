//! Schur bundles on `Gr(k,n)`, Littlewood–Richardson products and
//! splitting-principle characters.
//!
//! An atom `Σ^b U* ⊗ Σ^c U⊥` is stored as the pair `(b, c)`. Twists by
//! `O(1) = det U*` always land in `b`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bbw::GrassmannianSpec;
use crate::error::BundleError;
use crate::weights::{gl_dimension, DominantWeight};

/// `Σ^b U* ⊗ Σ^c U⊥` on `Gr(k,n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchurBundle {
    pub k: usize,
    pub n: usize,
    pub b: DominantWeight,
    pub c: DominantWeight,
}

impl SchurBundle {
    pub fn new(g: GrassmannianSpec, b: Vec<i64>, c: Vec<i64>) -> Result<Self, BundleError> {
        let b = DominantWeight::new(b)?.padded(g.k)?;
        let c = DominantWeight::new(c)?.padded(g.n - g.k)?;
        Ok(SchurBundle { k: g.k, n: g.n, b, c })
    }

    pub fn structure_sheaf(g: GrassmannianSpec) -> Self {
        SchurBundle { k: g.k, n: g.n, b: DominantWeight::zero(g.k), c: DominantWeight::zero(g.n - g.k) }
    }

    pub fn grassmannian(&self) -> GrassmannianSpec {
        GrassmannianSpec { k: self.k, n: self.n }
    }

    /// Concatenated weight `(b | c)` of length `n`.
    pub fn concat(&self) -> Vec<i64> {
        self.b.entries().iter().chain(self.c.entries()).copied().collect()
    }

    pub fn rank(&self) -> num_bigint::BigUint {
        gl_dimension(&self.b, self.k).expect("fits") * gl_dimension(&self.c, self.n - self.k).expect("fits")
    }

    pub fn into_sum(self) -> BundleSum {
        BundleSum::from_atom(self)
    }
}

impl fmt::Display for SchurBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &DominantWeight| w.entries().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "S{{{}}}U*", join(&self.b))?;
        if self.c.entries().iter().any(|&a| a != 0) {
            write!(f, " * S{{{}}}Uperp", join(&self.c))?;
        }
        Ok(())
    }
}

/// Negates and reverses both halves.
pub fn dualize(s: &SchurBundle) -> SchurBundle {
    SchurBundle { k: s.k, n: s.n, b: s.b.dual(), c: s.c.dual() }
}

/// Tensor with `O(t)`.
pub fn twist(s: &SchurBundle, t: i64) -> SchurBundle {
    SchurBundle { k: s.k, n: s.n, b: s.b.shifted(t), c: s.c.clone() }
}

/// A direct sum of atoms with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct BundleSum {
    atoms: BTreeMap<SchurBundle, u64>,
}

impl BundleSum {
    pub fn zero() -> Self {
        BundleSum::default()
    }

    pub fn from_atom(s: SchurBundle) -> Self {
        let mut out = BundleSum::zero();
        out.add(s, 1);
        out
    }

    pub fn add(&mut self, s: SchurBundle, mult: u64) {
        if mult > 0 {
            *self.atoms.entry(s).or_insert(0) += mult;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&SchurBundle, u64)> {
        self.atoms.iter().map(|(s, m)| (s, *m))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn plus(&self, other: &BundleSum) -> BundleSum {
        let mut out = self.clone();
        for (s, m) in other.atoms() {
            out.add(s.clone(), m);
        }
        out
    }

    pub fn scaled(&self, m: u64) -> BundleSum {
        let mut out = BundleSum::zero();
        for (s, k) in self.atoms() {
            out.add(s.clone(), k * m);
        }
        out
    }

    pub fn dual(&self) -> BundleSum {
        let mut out = BundleSum::zero();
        for (s, m) in self.atoms() {
            out.add(dualize(s), m);
        }
        out
    }

    pub fn twisted(&self, t: i64) -> BundleSum {
        let mut out = BundleSum::zero();
        for (s, m) in self.atoms() {
            out.add(twist(s, t), m);
        }
        out
    }

    pub fn tensor(&self, other: &BundleSum) -> Result<BundleSum, BundleError> {
        let mut out = BundleSum::zero();
        for (s, m) in self.atoms() {
            for (t, k) in other.atoms() {
                for (u, j) in tensor_atoms(s, t)?.atoms() {
                    out.add(u.clone(), m * k * j);
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> num_bigint::BigUint {
        self.atoms().map(|(s, m)| s.rank() * m).sum()
    }
}

impl fmt::Display for BundleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .atoms()
            .map(|(s, m)| if m == 1 { s.to_string() } else { format!("{m}*({s})") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Tensor product of two atoms: LR on the `U*` and `U⊥` halves separately.
pub fn tensor_atoms(s: &SchurBundle, t: &SchurBundle) -> Result<BundleSum, BundleError> {
    if (s.k, s.n) != (t.k, t.n) {
        return Err(BundleError::Mismatch(s.k, s.n, t.k, t.n));
    }
    let bs = lr_tensor(&s.b, &t.b, s.k);
    let cs = lr_tensor(&s.c, &t.c, s.n - s.k);
    let mut out = BundleSum::zero();
    for (b, m) in &bs {
        for (c, k) in &cs {
            out.add(SchurBundle { k: s.k, n: s.n, b: b.clone(), c: c.clone() }, m * k);
        }
    }
    Ok(out)
}

/// Decomposes `Σ^λ ⊗ Σ^μ` for `GL(m)`. Negative entries are handled by
/// twisting both factors to partitions and untwisting the result.
pub fn lr_tensor(lambda: &DominantWeight, mu: &DominantWeight, m: usize) -> BTreeMap<DominantWeight, u64> {
    let l = lambda.padded(m).expect("lambda fits");
    let u = mu.padded(m).expect("mu fits");
    if m == 0 {
        return BTreeMap::from([(DominantWeight::zero(0), 1)]);
    }
    let sl = l.entries()[m - 1];
    let su = u.entries()[m - 1];
    let lp: Vec<i64> = l.entries().iter().map(|a| a - sl).collect();
    let up: Vec<i64> = u.entries().iter().map(|a| a - su).collect();
    lr_partitions(&lp, &up, m)
        .into_iter()
        .map(|(nu, c)| (DominantWeight::new(nu).expect("partition").shifted(sl + su), c))
        .collect()
}

/// Littlewood–Richardson coefficients `c^ν_{λμ}` for partitions, keeping
/// only `ν` with at most `m` rows. Labels `1, 2, ...` of `μ` are added one
/// row of `μ` at a time as horizontal strips subject to the lattice condition.
pub fn lr_partitions(lambda: &[i64], mu: &[i64], m: usize) -> BTreeMap<Vec<i64>, u64> {
    let mut shape = vec![0i64; m];
    for (i, &a) in lambda.iter().enumerate() {
        if a > 0 {
            if i >= m {
                return BTreeMap::new();
            }
            shape[i] = a;
        }
    }
    let mu: Vec<i64> = mu.iter().copied().filter(|&a| a > 0).collect();
    let mut out = BTreeMap::new();
    // counts of the previous label per row; for label 0 the lattice check is vacuous
    let prev = vec![i64::MAX / 4; m];
    add_label(&shape, &mu, 0, &prev, &mut out);
    out
}

fn add_label(shape: &[i64], mu: &[i64], label: usize, prev_counts: &[i64], out: &mut BTreeMap<Vec<i64>, u64>) {
    if label == mu.len() {
        *out.entry(shape.to_vec()).or_insert(0) += 1;
        return;
    }
    let m = shape.len();
    let mut counts = vec![0i64; m];
    place_row(shape, mu, label, prev_counts, 0, mu[label], 0, 0, &mut counts, out);
}

#[allow(clippy::too_many_arguments)]
fn place_row(
    shape: &[i64],
    mu: &[i64],
    label: usize,
    prev_counts: &[i64],
    row: usize,
    remaining: i64,
    cum_this: i64,
    cum_prev_above: i64,
    counts: &mut Vec<i64>,
    out: &mut BTreeMap<Vec<i64>, u64>,
) {
    let m = shape.len();
    if remaining == 0 {
        let new_shape: Vec<i64> = shape.iter().zip(counts.iter()).map(|(a, c)| a + c).collect();
        add_label(&new_shape, mu, label + 1, counts, out);
        return;
    }
    if row == m {
        return;
    }
    let max_strip = if row == 0 { remaining } else { shape[row - 1] - shape[row] };
    // a label can only sit in rows at or below its own index
    let max_lattice = if label == 0 { remaining } else { cum_prev_above - cum_this };
    let hi = remaining.min(max_strip).min(max_lattice);
    let hi = if row < label { 0 } else { hi };
    for c in 0..=hi.max(0) {
        counts[row] = c;
        let next_prev_above = cum_prev_above.saturating_add(prev_counts[row]);
        place_row(shape, mu, label, prev_counts, row + 1, remaining - c, cum_this + c, next_prev_above, counts, out);
        counts[row] = 0;
    }
}

/// Sparse Laurent polynomial in `x_1..x_k` (Chern roots of `U*`) followed by
/// `y_1..y_{n-k}` (Chern roots of `U⊥`).
///
/// Convention: `U*` is `Σ x_i`, `U` is `Σ 1/x_i`, `U⊥` is `Σ y_j` and `Q` is
/// `Σ 1/y_j`; hence `O(1) = x_1 ⋯ x_k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Character {
    pub vars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl Character {
    pub fn zero(vars: usize) -> Self {
        Character { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        let mut c = Character::zero(vars);
        c.add_term(vec![0; vars], BigInt::one());
        c
    }

    pub fn monomial(exps: Vec<i32>) -> Self {
        let mut c = Character::zero(exps.len());
        c.add_term(exps, BigInt::one());
        c
    }

    pub fn add_term(&mut self, exps: Vec<i32>, coeff: BigInt) {
        let e = self.terms.entry(exps.clone()).or_insert_with(BigInt::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Character) -> Character {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Character {
        let mut out = Character::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn sub(&self, other: &Character) -> Character {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &Character) -> Character {
        let mut out = Character::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Substitutes every variable by its inverse.
    pub fn invert(&self) -> Character {
        let mut out = Character::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.iter().map(|a| -a).collect(), c.clone());
        }
        out
    }

    /// Value at all variables equal to one: the rank.
    pub fn rank(&self) -> BigInt {
        self.terms.values().sum()
    }
}

/// Schur Laurent polynomial `s_λ(z_1..z_m)` written into variables
/// `offset..offset+m` of a `vars`-variable ring.
pub fn schur_polynomial(lambda: &DominantWeight, m: usize, vars: usize, offset: usize) -> Character {
    let l = lambda.padded(m).expect("fits");
    if m == 0 {
        return Character::one(vars);
    }
    let shift = l.entries()[m - 1];
    let shape: Vec<usize> = l.entries().iter().map(|a| (a - shift) as usize).collect();
    let mut out = Character::zero(vars);
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&r| vec![0; r]).collect();
    fill_ssyt(&shape, m, 0, 0, &mut rows, &mut |t| {
        let mut exps = vec![0i32; vars];
        for i in 0..m {
            exps[offset + i] = shift as i32;
        }
        for row in t {
            for &v in row {
                exps[offset + v] += 1;
            }
        }
        out.add_term(exps, BigInt::one());
    });
    out
}

fn fill_ssyt(shape: &[usize], m: usize, r: usize, c: usize, rows: &mut Vec<Vec<usize>>, emit: &mut dyn FnMut(&[Vec<usize>])) {
    if r == shape.len() || shape[r] == 0 {
        emit(rows);
        return;
    }
    if c == shape[r] {
        fill_ssyt(shape, m, r + 1, 0, rows, emit);
        return;
    }
    let lo_row = if c > 0 { rows[r][c - 1] } else { 0 };
    let lo_col = if r > 0 { rows[r - 1][c] + 1 } else { 0 };
    for v in lo_row.max(lo_col)..m {
        rows[r][c] = v;
        fill_ssyt(shape, m, r, c + 1, rows, emit);
    }
}

/// Character of an atom: `s_b(x) s_c(y)`.
pub fn atom_character(s: &SchurBundle) -> Character {
    let vars = s.n;
    schur_polynomial(&s.b, s.k, vars, 0).mul(&schur_polynomial(&s.c, s.n - s.k, vars, s.k))
}

pub fn character(s: &BundleSum, g: GrassmannianSpec) -> Character {
    let mut out = Character::zero(g.n);
    for (a, m) in s.atoms() {
        out = out.add(&atom_character(a).scale(&BigInt::from(m)));
    }
    out
}

/// The four tautological bundles, the bases of Schur functors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    U,
    UDual,
    Q,
    UPerp,
}

impl Base {
    pub fn token(self) -> &'static str {
        match self {
            Base::U => "U",
            Base::UDual => "U*",
            Base::Q => "Q",
            Base::UPerp => "Uperp",
        }
    }

    pub fn rank(self, g: GrassmannianSpec) -> usize {
        match self {
            Base::U | Base::UDual => g.k,
            Base::Q | Base::UPerp => g.n - g.k,
        }
    }
}

/// Named complexes, resolved by the derived layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    R,
    E10,
    E16,
    K,
}

impl Preset {
    pub fn token(self) -> &'static str {
        match self {
            Preset::R => "R",
            Preset::E10 => "E10",
            Preset::E16 => "E16",
            Preset::K => "K",
        }
    }
}

/// Syntax tree of bundle expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BundleExpr {
    Structure,
    Base(Base),
    Schur(Vec<i64>, Box<BundleExpr>),
    Wedge(u32, Box<BundleExpr>),
    Sym(u32, Box<BundleExpr>),
    Preset(Preset),
    Sum(Vec<BundleExpr>),
    Tensor(Vec<BundleExpr>),
    Twist(Box<BundleExpr>, i64),
    Shift(Box<BundleExpr>, i64),
}

impl BundleExpr {
    fn prec(&self) -> u8 {
        match self {
            BundleExpr::Sum(_) => 0,
            BundleExpr::Tensor(_) => 1,
            _ => 2,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.prec() < min_prec {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            BundleExpr::Structure => write!(f, "O"),
            BundleExpr::Base(b) => write!(f, "{}", b.token()),
            BundleExpr::Schur(w, base) => {
                let ws: Vec<String> = w.iter().map(|a| a.to_string()).collect();
                write!(f, "S{{{}}}", ws.join(","))?;
                base.write_at(f, 2)
            }
            BundleExpr::Wedge(i, base) => {
                write!(f, "W{i} ")?;
                base.write_at(f, 2)
            }
            BundleExpr::Sym(i, base) => {
                write!(f, "Sym{i} ")?;
                base.write_at(f, 2)
            }
            BundleExpr::Preset(p) => write!(f, "{}", p.token()),
            BundleExpr::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    x.write_at(f, 1)?;
                }
                Ok(())
            }
            BundleExpr::Tensor(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    x.write_at(f, 2)?;
                }
                Ok(())
            }
            BundleExpr::Twist(x, t) => {
                x.write_at_factor(f)?;
                write!(f, "({t})")
            }
            BundleExpr::Shift(x, m) => {
                x.write_at_factor(f)?;
                write!(f, "[{m}]")
            }
        }
    }

    // A twist or shift attaches to an atom; anything else gets parentheses.
    fn write_at_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleExpr::Structure | BundleExpr::Base(_) | BundleExpr::Preset(_) | BundleExpr::Schur(..) => {
                self.write_at(f, 2)
            }
            BundleExpr::Twist(..) => self.write_at(f, 2),
            _ => {
                write!(f, "(")?;
                self.write_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Atom `Σ^w` of a tautological bundle.
pub fn schur_of_base(g: GrassmannianSpec, w: &[i64], base: Base) -> Result<SchurBundle, BundleError> {
    let r = base.rank(g);
    let w = DominantWeight::new(w.to_vec())?.padded(r)?;
    let zb = DominantWeight::zero(g.k);
    let zc = DominantWeight::zero(g.n - g.k);
    Ok(match base {
        Base::UDual => SchurBundle { k: g.k, n: g.n, b: w, c: zc },
        Base::U => SchurBundle { k: g.k, n: g.n, b: w.dual(), c: zc },
        Base::UPerp => SchurBundle { k: g.k, n: g.n, b: zb, c: w },
        Base::Q => SchurBundle { k: g.k, n: g.n, b: zb, c: w.dual() },
    })
}

fn base_of(e: &BundleExpr, what: &'static str) -> Result<Base, BundleError> {
    match e {
        BundleExpr::Base(b) => Ok(*b),
        _ => Err(BundleError::Plethysm(what)),
    }
}

/// Expands an expression without presets or shifts into a sum of atoms.
pub fn expand(e: &BundleExpr, g: GrassmannianSpec) -> Result<BundleSum, BundleError> {
    Ok(match e {
        BundleExpr::Structure => SchurBundle::structure_sheaf(g).into_sum(),
        BundleExpr::Base(b) => schur_of_base(g, &[1], *b)?.into_sum(),
        BundleExpr::Schur(w, base) => schur_of_base(g, w, base_of(base, "a Schur functor")?)?.into_sum(),
        BundleExpr::Wedge(i, base) => {
            let b = base_of(base, "an exterior power")?;
            if *i as usize > b.rank(g) {
                BundleSum::zero()
            } else {
                schur_of_base(g, &vec![1; *i as usize], b)?.into_sum()
            }
        }
        BundleExpr::Sym(i, base) => schur_of_base(g, &[*i as i64], base_of(base, "a symmetric power")?)?.into_sum(),
        BundleExpr::Preset(p) => return Err(BundleError::NotABundle(p.token().to_string())),
        BundleExpr::Sum(xs) => {
            let mut out = BundleSum::zero();
            for x in xs {
                out = out.plus(&expand(x, g)?);
            }
            out
        }
        BundleExpr::Tensor(xs) => {
            let mut out = SchurBundle::structure_sheaf(g).into_sum();
            for x in xs {
                out = out.tensor(&expand(x, g)?)?;
            }
            out
        }
        BundleExpr::Twist(x, t) => expand(x, g)?.twisted(*t),
        BundleExpr::Shift(..) => return Err(BundleError::NotABundle("a shifted object".to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dw(v: Vec<i64>) -> DominantWeight {
        DominantWeight::new(v).unwrap()
    }

    #[test]
    fn v_tensor_v() {
        let r = lr_tensor(&dw(vec![1]), &dw(vec![1]), 3);
        assert_eq!(r.len(), 2);
        assert_eq!(r[&dw(vec![2, 0, 0])], 1);
        assert_eq!(r[&dw(vec![1, 1, 0])], 1);
    }

    #[test]
    fn truncates_long_columns() {
        let r = lr_tensor(&dw(vec![1, 1]), &dw(vec![1]), 2);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&dw(vec![2, 1])], 1);
    }

    #[test]
    fn coefficient_two() {
        // c^{(3,2,1)}_{(2,1),(2,1)} = 2
        let r = lr_partitions(&[2, 1], &[2, 1], 3);
        assert_eq!(r[&vec![3, 2, 1]], 2);
    }
}

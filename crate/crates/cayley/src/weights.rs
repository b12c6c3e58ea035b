//! Integer weights of `GL(n)`: sorting with inversion counts, dominance,
//! the Weyl dimension formula and graded representations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::WeightError;

/// An arbitrary integer weight of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(entries: Vec<i64>) -> Self {
        Weight(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.len(), other.len(), "weight lengths differ");
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        assert_eq!(self.len(), other.len(), "weight lengths differ");
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// A non-increasing integer weight, the highest weight of a `GL` irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DominantWeight(Vec<i64>);

impl DominantWeight {
    pub fn new(entries: Vec<i64>) -> Result<Self, WeightError> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotDominant(entries));
        }
        Ok(DominantWeight(entries))
    }

    pub fn zero(len: usize) -> Self {
        DominantWeight(vec![0; len])
    }

    /// Weight `(t, ..., t)`, the `t`-th power of the determinant.
    pub fn constant(len: usize, t: i64) -> Self {
        DominantWeight(vec![t; len])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Adds `t` to every entry.
    pub fn shifted(&self, t: i64) -> DominantWeight {
        DominantWeight(self.0.iter().map(|a| a + t).collect())
    }

    /// Highest weight of the dual representation: negate and reverse.
    pub fn dual(&self) -> DominantWeight {
        DominantWeight(self.0.iter().rev().map(|a| -a).collect())
    }

    /// Pads with zeros on the right up to length `n`.
    pub fn padded(&self, n: usize) -> Result<DominantWeight, WeightError> {
        if self.len() > n {
            return Err(WeightError::TooLong { len: self.len(), rank: n });
        }
        let mut v = self.0.clone();
        v.resize(n, 0);
        DominantWeight::new(v)
    }

    /// Representative modulo the determinant: last entry becomes zero.
    pub fn modulo_det(&self) -> DominantWeight {
        match self.0.last() {
            Some(&t) => self.shifted(-t),
            None => self.clone(),
        }
    }

    pub fn as_weight(&self) -> Weight {
        Weight(self.0.clone())
    }
}

impl TryFrom<Vec<i64>> for DominantWeight {
    type Error = WeightError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        DominantWeight::new(v)
    }
}

impl From<DominantWeight> for Vec<i64> {
    fn from(w: DominantWeight) -> Self {
        w.0
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The half-sum of positive roots of `GL(n)` in the shifted normalisation `(n, ..., 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rho {
    pub n: usize,
}

impl Rho {
    pub fn new(n: usize) -> Self {
        Rho { n }
    }

    pub fn weight(&self) -> Weight {
        Weight((1..=self.n as i64).rev().collect())
    }
}

/// Result of sorting a weight into non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortOutcome {
    pub sorted: Weight,
    /// Length of the sorting permutation. Counted by a stable sort when
    /// `has_repeats` is set, and then carries no meaning for BBW.
    pub inversions: usize,
    pub has_repeats: bool,
}

/// Sorts `a` into non-increasing order, counting the inversions removed.
pub fn sort_to_dominant(a: &Weight) -> SortOutcome {
    let v = a.entries();
    let mut inversions = 0;
    let mut has_repeats = false;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] < v[j] {
                inversions += 1;
            } else if v[i] == v[j] {
                has_repeats = true;
            }
        }
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|x, y| y.cmp(x));
    SortOutcome { sorted: Weight(sorted), inversions, has_repeats }
}

/// Dimension of the `GL(n)` irreducible with highest weight `lambda`,
/// padded by zeros to length `n`. Weyl's product formula, exact.
pub fn gl_dimension(lambda: &DominantWeight, n: usize) -> Result<BigUint, WeightError> {
    let l = lambda.padded(n)?;
    let e = l.entries();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(e[i] - e[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    debug_assert!((&num % &den).is_zero());
    Ok((num / den).abs().to_biguint().expect("positive"))
}

/// `gl_dimension` for weights already known to fit; panics on a length error.
pub fn dim(lambda: &DominantWeight) -> BigUint {
    gl_dimension(lambda, lambda.len()).expect("weight fits its own length")
}

/// A multiset of irreducibles in each cohomological degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRep {
    degrees: BTreeMap<i64, BTreeMap<DominantWeight, u64>>,
}

impl GradedRep {
    pub fn zero() -> Self {
        GradedRep::default()
    }

    pub fn single(degree: i64, w: DominantWeight) -> Self {
        let mut g = GradedRep::zero();
        g.insert(degree, w, 1);
        g
    }

    pub fn insert(&mut self, degree: i64, w: DominantWeight, mult: u64) {
        if mult == 0 {
            return;
        }
        *self.degrees.entry(degree).or_default().entry(w).or_insert(0) += mult;
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i64, &BTreeMap<DominantWeight, u64>)> {
        self.degrees.iter().map(|(d, m)| (*d, m))
    }

    pub fn in_degree(&self, degree: i64) -> Option<&BTreeMap<DominantWeight, u64>> {
        self.degrees.get(&degree)
    }

    pub fn merge(&mut self, other: &GradedRep) {
        for (d, m) in &other.degrees {
            for (w, k) in m {
                self.insert(*d, w.clone(), *k);
            }
        }
    }

    /// Scales every multiplicity by `m`; `m = 0` gives zero.
    pub fn scaled(&self, m: u64) -> GradedRep {
        let mut out = GradedRep::zero();
        for (d, ws) in &self.degrees {
            for (w, k) in ws {
                out.insert(*d, w.clone(), k * m);
            }
        }
        out
    }

    pub fn shifted(&self, by: i64) -> GradedRep {
        GradedRep {
            degrees: self.degrees.iter().map(|(d, m)| (d + by, m.clone())).collect(),
        }
    }

    /// Degree `i` goes to `top - i` and every irreducible is dualised.
    pub fn serre_reflect(&self, top: i64) -> GradedRep {
        let mut out = GradedRep::zero();
        for (d, m) in &self.degrees {
            for (w, k) in m {
                out.insert(top - d, w.dual(), *k);
            }
        }
        out
    }

    /// Every weight replaced by its representative modulo the determinant.
    pub fn modulo_det(&self) -> GradedRep {
        let mut out = GradedRep::zero();
        for (d, m) in &self.degrees {
            for (w, k) in m {
                out.insert(*d, w.modulo_det(), *k);
            }
        }
        out
    }

    pub fn dimension_in(&self, degree: i64) -> BigUint {
        self.degrees
            .get(&degree)
            .map(|m| m.iter().map(|(w, k)| dim(w) * BigUint::from(*k)).sum())
            .unwrap_or_default()
    }

    /// Dimensions per degree, zero degrees omitted.
    pub fn dimensions(&self) -> BTreeMap<i64, BigUint> {
        self.degrees.keys().map(|d| (*d, self.dimension_in(*d))).collect()
    }

    pub fn euler_characteristic(&self) -> BigInt {
        let mut chi = BigInt::zero();
        for d in self.degrees.keys() {
            let v = BigInt::from(self.dimension_in(*d));
            if d.rem_euclid(2) == 0 {
                chi += v;
            } else {
                chi -= v;
            }
        }
        chi
    }

    /// True when this is one copy of the trivial (modulo det) representation in `degree`.
    pub fn is_trivial_in(&self, degree: i64) -> bool {
        if self.degrees.len() != 1 {
            return false;
        }
        match self.degrees.get(&degree) {
            Some(m) if m.len() == 1 => {
                let (w, k) = m.iter().next().expect("one entry");
                *k == 1 && w.entries().iter().all(|&a| a == w.entries()[0])
            }
            _ => false,
        }
    }

    /// Removes `mult` copies of `w` from `degree`; `None` if not present.
    pub fn remove(&mut self, degree: i64, w: &DominantWeight, mult: u64) -> Option<()> {
        let m = self.degrees.get_mut(&degree)?;
        let k = m.get_mut(w)?;
        if *k < mult {
            return None;
        }
        *k -= mult;
        if *k == 0 {
            m.remove(w);
        }
        if m.is_empty() {
            self.degrees.remove(&degree);
        }
        Some(())
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.keys().next().copied()
    }
}

impl fmt::Display for GradedRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, m) in &self.degrees {
            for (w, k) in m {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if *k > 1 {
                    write!(f, "{k}*")?;
                }
                if w.entries().iter().all(|&a| a == 0) {
                    write!(f, "k")?;
                } else {
                    write!(f, "S{w}")?;
                }
                match d.cmp(&0) {
                    std::cmp::Ordering::Greater => write!(f, "[-{d}]")?,
                    std::cmp::Ordering::Less => write!(f, "[{}]", -d)?,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        Ok(())
    }
}

/// Converts a dimension to `u64`, saturating; only for display.
pub fn dim_u64(d: &BigUint) -> u64 {
    d.to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sort_counts_inversions() {
        let s = sort_to_dominant(&Weight::new(vec![6, 5, 0, 4, 3, 2, 1]));
        assert_eq!(s.sorted.entries(), &[6, 5, 4, 3, 2, 1, 0]);
        assert_eq!(s.inversions, 4);
        assert!(!s.has_repeats);
        assert!(sort_to_dominant(&Weight::new(vec![4, 4, 1])).has_repeats);
    }

    #[test]
    fn small_dimensions() {
        let d = |v: Vec<i64>| gl_dimension(&DominantWeight::new(v).unwrap(), 7).unwrap();
        assert_eq!(d(vec![0]), BigUint::from(1u32));
        assert_eq!(d(vec![1, 1]), BigUint::from(21u32));
        assert_eq!(d(vec![2, 1]), BigUint::from(112u32));
    }

    #[test]
    fn rejects_increasing() {
        assert!(DominantWeight::new(vec![0, 1]).is_err());
    }
}

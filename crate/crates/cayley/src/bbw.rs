//! Borel–Bott–Weil on `Gr(k,n)`.

use serde::{Deserialize, Serialize};

use crate::error::BundleError;
use crate::schur::{BundleSum, SchurBundle};
use crate::weights::{sort_to_dominant, DominantWeight, GradedRep, Rho, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrassmannianSpec {
    pub k: usize,
    pub n: usize,
}

impl GrassmannianSpec {
    pub fn new(k: usize, n: usize) -> Result<Self, BundleError> {
        if k == 0 || k >= n {
            return Err(BundleError::BadGrassmannian { k, n });
        }
        Ok(GrassmannianSpec { k, n })
    }

    /// The ambient `Gr(3,7)` of the Cayley Grassmannian.
    pub const fn gr37() -> Self {
        GrassmannianSpec { k: 3, n: 7 }
    }

    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// `ω = O(-n)`.
    pub fn canonical_twist(&self) -> i64 {
        -(self.n as i64)
    }
}

/// Cohomology of one atom: zero, or one irreducible `Σ^{σ(a+ρ)-ρ} V*` in degree `ℓ(σ)`.
pub fn bbw_cohomology(g: GrassmannianSpec, s: &SchurBundle) -> GradedRep {
    debug_assert_eq!((g.k, g.n), (s.k, s.n));
    let rho = Rho::new(g.n).weight();
    let a = Weight::new(s.concat()).add(&rho);
    let sorted = sort_to_dominant(&a);
    if sorted.has_repeats {
        return GradedRep::zero();
    }
    let w = sorted.sorted.sub(&rho);
    GradedRep::single(sorted.inversions as i64, DominantWeight::new(w.entries().to_vec()).expect("sorted"))
}

/// Degreewise union of `bbw_cohomology` over the atoms of a sum.
pub fn bulk_cohomology(g: GrassmannianSpec, s: &BundleSum) -> GradedRep {
    let mut out = GradedRep::zero();
    for (a, m) in s.atoms() {
        out.merge(&bbw_cohomology(g, a).scaled(m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_sheaf() {
        let g = GrassmannianSpec::gr37();
        let h = bbw_cohomology(g, &SchurBundle::structure_sheaf(g));
        assert!(h.is_trivial_in(0));
    }

    #[test]
    fn minus_five_column() {
        let g = GrassmannianSpec::gr37();
        let s = SchurBundle::new(g, vec![-1, -1, -5], vec![]).unwrap();
        let h = bbw_cohomology(g, &s);
        assert_eq!(h, GradedRep::single(4, DominantWeight::constant(7, -1)));
    }
}

//! Exact multilinear algebra in the 7-dimensional representation `V` of `G₂`.
//!
//! Basis order is fixed: `e₀, e_α, e₋α, e_β, e₋β, e_γ, e₋γ` (indices `0..7`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::G2Error;
use crate::linalg::{frac, q, same_span, span_rank, Matrix, Q};
use crate::par::Exec;

pub const DIM: usize = 7;
pub const BASIS_NAMES: [&str; DIM] = ["e0", "ea", "e-a", "eb", "e-b", "eg", "e-g"];

/// Torus weights `(α-coefficient, β-coefficient)` with `γ = -α - β`.
pub const TORUS_WEIGHTS: [(i32, i32); DIM] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1), (1, 1)];

pub fn basis_index(name: &str) -> Option<usize> {
    BASIS_NAMES.iter().position(|n| *n == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variance {
    Vector,
    Form,
}

/// Sign of the permutation sorting `seq`; `0` on repeats.
pub fn perm_sign(seq: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            match seq[i].cmp(&seq[j]) {
                std::cmp::Ordering::Greater => s = -s,
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    s
}

/// An element of `ΛᵖV` or `ΛᵖV*`, stored on increasing index tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiVector {
    pub degree: usize,
    pub variance: Variance,
    comps: BTreeMap<Vec<usize>, Q>,
}

impl MultiVector {
    pub fn zero(degree: usize, variance: Variance) -> Self {
        MultiVector { degree, variance, comps: BTreeMap::new() }
    }

    pub fn basis(idx: &[usize], variance: Variance) -> Self {
        let mut m = MultiVector::zero(idx.len(), variance);
        m.add(idx, Q::one());
        m
    }

    pub fn vector(v: &[Q]) -> Self {
        let mut m = MultiVector::zero(1, Variance::Vector);
        for (i, c) in v.iter().enumerate() {
            m.add(&[i], c.clone());
        }
        m
    }

    /// Adds `c · e_{idx}` for an arbitrary index order.
    pub fn add(&mut self, idx: &[usize], c: Q) {
        assert_eq!(idx.len(), self.degree, "degree mismatch");
        let s = perm_sign(idx);
        if s == 0 || c.is_zero() {
            return;
        }
        let mut key = idx.to_vec();
        key.sort_unstable();
        let e = self.comps.entry(key.clone()).or_insert_with(Q::zero);
        *e += c * q(s as i64);
        if e.is_zero() {
            self.comps.remove(&key);
        }
    }

    pub fn get(&self, idx: &[usize]) -> Q {
        let s = perm_sign(idx);
        if s == 0 {
            return Q::zero();
        }
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.comps.get(&key).map(|c| c * q(s as i64)).unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn scaled(&self, k: &Q) -> MultiVector {
        let mut out = MultiVector::zero(self.degree, self.variance);
        for (i, c) in &self.comps {
            out.add(i, c * k);
        }
        out
    }

    pub fn plus(&self, other: &MultiVector) -> MultiVector {
        assert_eq!((self.degree, self.variance), (other.degree, other.variance));
        let mut out = self.clone();
        for (i, c) in &other.comps {
            out.add(i, c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &MultiVector) -> MultiVector {
        assert_eq!(self.variance, other.variance);
        let mut out = MultiVector::zero(self.degree + other.degree, self.variance);
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                let idx: Vec<usize> = i.iter().chain(j).copied().collect();
                out.add(&idx, a * b);
            }
        }
        out
    }

    /// Evaluates a form on vectors given in coordinates.
    pub fn eval(&self, vs: &[Vec<Q>]) -> Q {
        assert_eq!(self.variance, Variance::Form);
        assert_eq!(vs.len(), self.degree);
        let mut total = Q::zero();
        for (idx, c) in &self.comps {
            // determinant of the minor vs[k][idx[l]]
            let m = Matrix::from_rows(vs.iter().map(|v| idx.iter().map(|&i| v[i].clone()).collect()).collect());
            total += c * m.determinant();
        }
        total
    }

    /// Inserts vectors into the first slots: `f(v₁, …, v_k, -, …)`.
    pub fn insert(&self, vs: &[Vec<Q>]) -> MultiVector {
        assert_eq!(self.variance, Variance::Form);
        let k = vs.len();
        assert!(k <= self.degree);
        let rest = self.degree - k;
        let mut out = MultiVector::zero(rest, Variance::Form);
        for tail in increasing_tuples(rest) {
            let mut acc = Q::zero();
            for (idx, c) in &self.comps {
                if !tail.iter().all(|t| idx.contains(t)) {
                    continue;
                }
                let head: Vec<usize> = idx.iter().copied().filter(|i| !tail.contains(i)).collect();
                let mut order = head.clone();
                order.extend(&tail);
                let s = perm_sign(&order);
                let m = Matrix::from_rows(vs.iter().map(|v| head.iter().map(|&i| v[i].clone()).collect()).collect());
                acc += c * q(s as i64) * m.determinant();
            }
            if !acc.is_zero() {
                out.comps.insert(tail, acc);
            }
        }
        out
    }

    /// Coordinates of a degree-1 element.
    pub fn as_coords(&self) -> Vec<Q> {
        assert_eq!(self.degree, 1);
        (0..DIM).map(|i| self.get(&[i])).collect()
    }

    /// Antisymmetric matrix of a 2-form or 2-vector.
    pub fn as_matrix(&self) -> Matrix {
        assert_eq!(self.degree, 2);
        let mut m = Matrix::zeros(DIM, DIM);
        for (idx, c) in &self.comps {
            m[(idx[0], idx[1])] = c.clone();
            m[(idx[1], idx[0])] = -c.clone();
        }
        m
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let star = if self.variance == Variance::Form { "*" } else { "" };
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(idx, c)| {
                let w: Vec<String> = idx.iter().map(|&i| format!("{}{star}", BASIS_NAMES[i])).collect();
                format!("{c}*{}", w.join("^"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All increasing tuples of length `k` in `0..DIM`.
pub fn increasing_tuples(k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..DIM {
            cur.push(i);
            go(i + 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, &mut Vec::new(), &mut out);
    out
}

/// `a ⌟ b`: `b` (degree `q`, opposite variance) is contracted against the
/// first `q` slots of `a`, i.e. `e_T ⌟ e_S = sign(T, S∖T) e_{S∖T}` for `T ⊆ S`.
pub fn convolve(a: &MultiVector, b: &MultiVector) -> Result<MultiVector, G2Error> {
    if a.variance == b.variance {
        return Err(G2Error::Variance("both arguments have the same variance"));
    }
    if b.degree > a.degree {
        return Err(G2Error::Variance("contracting a higher degree into a lower one"));
    }
    let mut out = MultiVector::zero(a.degree - b.degree, a.variance);
    for (s, ca) in &a.comps {
        for (t, cb) in &b.comps {
            if !t.iter().all(|i| s.contains(i)) {
                continue;
            }
            let rest: Vec<usize> = s.iter().copied().filter(|i| !t.contains(i)).collect();
            let mut order = t.clone();
            order.extend(&rest);
            out.add(&rest, ca * cb * q(perm_sign(&order) as i64));
        }
    }
    Ok(out)
}

fn form(terms: &[(i64, [&str; 4])]) -> MultiVector {
    let mut m = MultiVector::zero(4, Variance::Form);
    for (c, idx) in terms {
        let ii: Vec<usize> = idx.iter().map(|n| basis_index(n).expect("basis name")).collect();
        m.add(&ii, q(*c));
    }
    m
}

/// `e₀ ↦ -e₀`, an isometry of `q`.
pub fn reflect_e0(m: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(m.degree, m.variance);
    for (idx, c) in &m.comps {
        let s = if idx.contains(&0) { -c.clone() } else { c.clone() };
        out.add(idx, s);
    }
    out
}

/// The invariant forms and their calibration.
#[derive(Debug, Clone)]
pub struct G2Forms {
    pub lambda: MultiVector,
    pub nu: MultiVector,
    pub b: Matrix,
    pub b_inv: Matrix,
    pub omega: MultiVector,
    /// `ν = calibration · q(ω ⌟ λ)`.
    pub calibration: Q,
}

impl G2Forms {
    pub fn standard() -> Self {
        let lambda = form(&[
            (2, ["e0", "ea", "eb", "eg"]),
            (-2, ["e0", "e-a", "e-b", "e-g"]),
            (-1, ["eb", "e-b", "eg", "e-g"]),
            (-1, ["ea", "e-a", "eg", "e-g"]),
            (-1, ["ea", "e-a", "eb", "e-b"]),
        ]);
        let mut nu = MultiVector::zero(3, Variance::Form);
        for t in [["e0", "ea", "e-a"], ["e0", "eb", "e-b"], ["e0", "eg", "e-g"], ["ea", "eb", "eg"], ["e-a", "e-b", "e-g"]] {
            let ii: Vec<usize> = t.iter().map(|n| basis_index(n).expect("basis name")).collect();
            nu.add(&ii, Q::one());
        }
        let mut b = Matrix::zeros(DIM, DIM);
        b[(0, 0)] = Q::one();
        for (p, m) in [(1, 2), (3, 4), (5, 6)] {
            b[(p, m)] = frac(-1, 2);
            b[(m, p)] = frac(-1, 2);
        }
        let b_inv = b.inverse().expect("q is non-degenerate");
        let omega = MultiVector::basis(&[0, 1, 2, 3, 4, 5, 6], Variance::Vector);
        let mut f = G2Forms { lambda, nu, b, b_inv, omega, calibration: Q::one() };
        let raw = f.q_of(&f.lambda_dual());
        let (k, c) = f.nu.terms().next().expect("nonzero");
        f.calibration = c / raw.get(k);
        f
    }

    /// The four-form in the reflected frame `e₀ ↦ -e₀`, up to sign:
    /// `-σ*λ`. Its five terms read `2T₁ - 2T₂ + T₃ + T₄ + T₅`.
    pub fn printed_lambda(&self) -> MultiVector {
        reflect_e0(&self.lambda).scaled(&q(-1))
    }

    /// `λ∨ = ω ⌟ λ`, a 3-vector.
    pub fn lambda_dual(&self) -> MultiVector {
        convolve(&self.omega, &self.lambda).expect("opposite variance")
    }

    /// Applies `q : V → V*` in every slot.
    pub fn q_of(&self, m: &MultiVector) -> MultiVector {
        assert_eq!(m.variance, Variance::Vector);
        let mut out = MultiVector::zero(m.degree, Variance::Form);
        for (idx, c) in m.terms() {
            let mut partial: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), c.clone())];
            for &i in idx {
                let mut next = Vec::new();
                for (pre, pc) in &partial {
                    for j in 0..DIM {
                        let bij = &self.b[(i, j)];
                        if !bij.is_zero() && !pre.contains(&j) {
                            let mut p = pre.clone();
                            p.push(j);
                            next.push((p, pc * bij));
                        }
                    }
                }
                partial = next;
            }
            for (p, pc) in partial {
                out.add(&p, pc);
            }
        }
        out
    }

    /// `[u, v] = q⁻¹(ν(u, v, -))`.
    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let one = self.nu.insert(&[u.to_vec(), v.to_vec()]);
        let w: Vec<Q> = (0..DIM).map(|i| one.get(&[i])).collect();
        self.b_inv.apply(&w)
    }

    pub fn jacobiator(&self, x: &[Q], y: &[Q], z: &[Q]) -> Vec<Q> {
        let a = self.bracket(x, &self.bracket(y, z));
        let b = self.bracket(y, &self.bracket(z, x));
        let c = self.bracket(z, &self.bracket(x, y));
        (0..DIM).map(|i| &a[i] + &b[i] + &c[i]).collect()
    }

    /// `q⁻¹(λ(x, y, z, -))`.
    pub fn lambda_vector(&self, x: &[Q], y: &[Q], z: &[Q]) -> Vec<Q> {
        let one = self.lambda.insert(&[x.to_vec(), y.to_vec(), z.to_vec()]);
        let w: Vec<Q> = (0..DIM).map(|i| one.get(&[i])).collect();
        self.b_inv.apply(&w)
    }

    /// Finds `c` with `J(x,y,z) = c · q⁻¹λ(x,y,z,-)` on all 35 basis triples.
    pub fn jacobiator_constant(&self) -> Option<Q> {
        let mut c: Option<Q> = None;
        for t in increasing_tuples(3) {
            let (x, y, z) = (unit(t[0]), unit(t[1]), unit(t[2]));
            let j = self.jacobiator(&x, &y, &z);
            let l = self.lambda_vector(&x, &y, &z);
            for i in 0..DIM {
                match (l[i].is_zero(), j[i].is_zero()) {
                    (true, true) => {}
                    (true, false) => return None,
                    (false, _) => {
                        let r = &j[i] / &l[i];
                        match &c {
                            None => c = Some(r),
                            Some(c0) if *c0 != r => return None,
                            _ => {}
                        }
                    }
                }
            }
        }
        c
    }

    pub fn jacobiator_identity_check(&self) -> bool {
        self.jacobiator_constant().is_some()
    }

    fn restricted_b(&self, u: &Subspace) -> Matrix {
        let n = u.dim();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            let bi = self.b.apply(&u.vectors[i]);
            for j in 0..n {
                m[(i, j)] = bi.iter().zip(&u.vectors[j]).fold(Q::zero(), |acc, (a, b)| acc + a * b);
            }
        }
        m
    }

    pub fn is_cg_point(&self, u: &Subspace) -> Result<bool, G2Error> {
        u.expect_dim(3)?;
        Ok(self.lambda.insert(&u.vectors).is_zero())
    }

    pub fn orbit_type(&self, u: &Subspace) -> Result<Orbit, G2Error> {
        if !self.is_cg_point(u)? {
            return Err(G2Error::NotOnCayley);
        }
        match self.restricted_b(u).rank() {
            3 => Ok(Orbit::O0),
            1 => Ok(Orbit::O1),
            0 => Ok(Orbit::O2),
            r => Err(G2Error::ImpossibleOrbit(r)),
        }
    }

    /// Structure constants of the bracket on `U`, columns in the basis of `U`.
    fn structure(&self, u: &Subspace) -> Result<Vec<Vec<Vec<Q>>>, G2Error> {
        let n = u.dim();
        let mut out = vec![vec![Vec::new(); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let br = self.bracket(&u.vectors[i], &u.vectors[j]);
                *cell = u.coordinates(&br).ok_or(G2Error::NotClosed)?;
            }
        }
        Ok(out)
    }

    pub fn lie_type(&self, u: &Subspace) -> Result<LieType, G2Error> {
        if !self.is_cg_point(u)? {
            return Err(G2Error::NotOnCayley);
        }
        let c = self.structure(u)?;
        let n = u.dim();
        let bracket = |x: &[Q], y: &[Q]| -> Vec<Q> {
            let mut out = vec![Q::zero(); n];
            for i in 0..n {
                for j in 0..n {
                    let k = &x[i] * &y[j];
                    if k.is_zero() {
                        continue;
                    }
                    for (o, v) in out.iter_mut().zip(&c[i][j]) {
                        *o += &k * v;
                    }
                }
            }
            out
        };
        let span_brackets = |a: &[Vec<Q>], b: &[Vec<Q>]| -> Vec<Vec<Q>> {
            let mut out = Vec::new();
            for x in a {
                for y in b {
                    out.push(bracket(x, y));
                }
            }
            basis_of(&out)
        };
        let whole: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        let derived = span_brackets(&whole, &whole);
        if derived.len() == n {
            return Ok(LieType::Semisimple);
        }
        let mut lower = derived.clone();
        for _ in 0..n {
            if lower.is_empty() {
                return Ok(LieType::Nilpotent);
            }
            lower = span_brackets(&whole, &lower);
        }
        let mut d = derived;
        for _ in 0..n {
            if d.is_empty() {
                return Ok(LieType::Solvable);
            }
            d = span_brackets(&d, &d);
        }
        Ok(LieType::Other)
    }

    /// `i_λ : Λ²U → Λ²U⊥`, rows `u₁∧u₂, u₁∧u₃, u₂∧u₃`, columns the six
    /// values on pairs of a fixed complement of `U`.
    pub fn i_lambda_matrix(&self, u: &Subspace) -> Result<Matrix, G2Error> {
        if !self.is_cg_point(u)? {
            return Err(G2Error::NotOnCayley);
        }
        let comp = u.complement();
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let mut rows = Vec::new();
        for (i, j) in pairs {
            let f = self.lambda.insert(&[u.vectors[i].clone(), u.vectors[j].clone()]);
            let mut row = Vec::new();
            for a in 0..comp.len() {
                for b in a + 1..comp.len() {
                    row.push(f.eval(&[comp[a].clone(), comp[b].clone()]));
                }
            }
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows))
    }

    /// Rank of `λ(u₁, u₂, -, -)`.
    pub fn phi_lambda_rank(&self, u: &Subspace) -> Result<usize, G2Error> {
        u.expect_dim(2)?;
        Ok(self.lambda.insert(&u.vectors).as_matrix().rank())
    }

    /// Gram matrix on `Λ²U` (basis `u₁∧u₂, u₁∧u₃, u₂∧u₃`) of `ξ ↦ ξ ∧ l(ξ)`,
    /// `l(x∧y) = [x, y]`, read on `u₁∧u₂∧u₃`. Its zeros are the 2-dimensional subalgebras.
    pub fn subalgebra_conic(&self, u: &Subspace) -> Result<Matrix, G2Error> {
        if !self.is_cg_point(u)? {
            return Err(G2Error::NotOnCayley);
        }
        let c = self.structure(u)?;
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        // ξ = u_i∧u_j, l(ξ) = Σ c_k u_k, ξ ∧ u_k = sign(i,j,k) u₁∧u₂∧u₃
        let wedge = |p: (usize, usize), l: &[Q]| -> Q {
            (0..3).fold(Q::zero(), |acc, k| acc + &l[k] * q(perm_sign(&[p.0, p.1, k]) as i64))
        };
        let mut m = Matrix::zeros(3, 3);
        for (a, &pa) in pairs.iter().enumerate() {
            for (b, &pb) in pairs.iter().enumerate() {
                let x = wedge(pa, &c[pb.0][pb.1]);
                let y = wedge(pb, &c[pa.0][pa.1]);
                m[(a, b)] = (x + y) * frac(1, 2);
            }
        }
        Ok(m)
    }
}

fn unit(i: usize) -> Vec<Q> {
    (0..DIM).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

fn basis_of(vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (r, piv) = Matrix::from_rows(vs.to_vec()).rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orbit {
    O0,
    O1,
    O2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LieType {
    Semisimple,
    Solvable,
    Nilpotent,
    Other,
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieType::Semisimple => "semisimple",
            LieType::Solvable => "solvable",
            LieType::Nilpotent => "nilpotent",
            LieType::Other => "other",
        };
        write!(f, "{s}")
    }
}

/// A subspace of `V` given by independent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub vectors: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn new(vectors: Vec<Vec<Q>>) -> Result<Self, G2Error> {
        let r = span_rank(&vectors);
        if r < vectors.len() {
            return Err(G2Error::Dependent { rank: r, expected: vectors.len() });
        }
        Ok(Subspace { vectors })
    }

    pub fn coordinate(idx: &[usize]) -> Self {
        Subspace { vectors: idx.iter().map(|&i| unit(i)).collect() }
    }

    pub fn from_names(names: &[&str]) -> Option<Self> {
        let idx: Option<Vec<usize>> = names.iter().map(|n| basis_index(n)).collect();
        Some(Subspace::coordinate(&idx?))
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    fn expect_dim(&self, d: usize) -> Result<(), G2Error> {
        if self.dim() == d {
            Ok(())
        } else {
            Err(G2Error::WrongDimension { expected: d, got: self.dim() })
        }
    }

    /// Coordinates of `v` in this basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let n = self.dim();
        let mut a = Matrix::zeros(DIM, n + 1);
        for (j, u) in self.vectors.iter().enumerate() {
            for i in 0..DIM {
                a[(i, j)] = u[i].clone();
            }
        }
        for i in 0..DIM {
            a[(i, n)] = v[i].clone();
        }
        let (r, piv) = a.rref();
        if piv.contains(&n) {
            return None;
        }
        let mut x = vec![Q::zero(); n];
        for (row, &p) in piv.iter().enumerate() {
            x[p] = r[(row, n)].clone();
        }
        Some(x)
    }

    /// Standard basis vectors completing this subspace to `V`.
    pub fn complement(&self) -> Vec<Vec<Q>> {
        let mut cur = self.vectors.clone();
        let mut out = Vec::new();
        for i in 0..DIM {
            let e = unit(i);
            cur.push(e.clone());
            if span_rank(&cur) == cur.len() {
                out.push(e);
            } else {
                cur.pop();
            }
        }
        out
    }

    pub fn transformed(&self, g: &Matrix) -> Subspace {
        Subspace { vectors: self.vectors.iter().map(|v| g.apply(v)).collect() }
    }
}

/// The three orbit representatives.
pub fn p0() -> Subspace {
    Subspace::from_names(&["e0", "eg", "e-g"]).expect("names")
}
pub fn p1() -> Subspace {
    Subspace::from_names(&["e0", "eb", "e-g"]).expect("names")
}
pub fn p2() -> Subspace {
    Subspace::from_names(&["ea", "eb", "e-g"]).expect("names")
}

/// `λ(uᵢ, uⱼ, -, -)` for coordinate vectors, as a 2-form.
pub fn i_lambda_form(lambda: &MultiVector, i: usize, j: usize) -> MultiVector {
    lambda.insert(&[unit(i), unit(j)])
}

/// `i_λ(uᵢ∧uⱼ)` pushed to `Λ²(V/U)` for a coordinate subspace `U` through
/// `ω = ±e_U ∧ ω_Q`: the 2-form is contracted into the first two slots of `ω_Q`.
pub fn i_lambda_quotient(lambda: &MultiVector, u: &[usize], i: usize, j: usize) -> MultiVector {
    let qidx: Vec<usize> = (0..DIM).filter(|x| !u.contains(x)).collect();
    let mut order = u.to_vec();
    order.extend(&qidx);
    let s = perm_sign(&order);
    let f = i_lambda_form(lambda, i, j);
    let mut out = MultiVector::zero(2, Variance::Vector);
    for a in 0..qidx.len() {
        for b in a + 1..qidx.len() {
            let c = f.get(&[qidx[a], qidx[b]]);
            if c.is_zero() {
                continue;
            }
            let rest: Vec<usize> = qidx.iter().copied().filter(|x| *x != qidx[a] && *x != qidx[b]).collect();
            let mut o = vec![qidx[a], qidx[b]];
            o.extend(&rest);
            out.add(&rest, c * q((perm_sign(&o) * s) as i64));
        }
    }
    out
}

/// `Q_f(m) = tr(adj(m) f)` on `S²U₃`, coordinates `m₁₁, m₂₂, m₃₃, m₁₂, m₁₃, m₂₃`.
pub fn veronese_quadric(f: &Matrix) -> Matrix {
    let coords = sym_coords();
    let value = |x: &[Q]| -> Q {
        let mut m = Matrix::zeros(3, 3);
        for (k, &(i, j)) in coords.iter().enumerate() {
            m[(i, j)] = x[k].clone();
            m[(j, i)] = x[k].clone();
        }
        let adj = adjugate3(&m);
        (0..3).fold(Q::zero(), |acc, i| (0..3).fold(acc, |acc, j| acc + &adj[(i, j)] * &f[(j, i)]))
    };
    polarize(6, value)
}

/// `u uᵀ` in the coordinates of [`veronese_quadric`].
pub fn sym_square(u: &[Q]) -> Vec<Q> {
    sym_coords().iter().map(|&(i, j)| &u[i] * &u[j]).collect()
}

fn sym_coords() -> [(usize, usize); 6] {
    [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
}

fn adjugate3(m: &Matrix) -> Matrix {
    let mut adj = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let r: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let minor = &m[(r[0], c[0])] * &m[(r[1], c[1])] - &m[(r[0], c[1])] * &m[(r[1], c[0])];
            adj[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    adj
}

/// Gram matrix of a quadratic form given by its values.
fn polarize(n: usize, value: impl Fn(&[Q]) -> Q) -> Matrix {
    let e = |i: usize| -> Vec<Q> { (0..n).map(|k| if k == i { Q::one() } else { Q::zero() }).collect() };
    let mut g = Matrix::zeros(n, n);
    let diag: Vec<Q> = (0..n).map(|i| value(&e(i))).collect();
    for i in 0..n {
        g[(i, i)] = diag[i].clone();
        for j in i + 1..n {
            let s: Vec<Q> = (0..n).map(|k| if k == i || k == j { Q::one() } else { Q::zero() }).collect();
            let v = (value(&s) - &diag[i] - &diag[j]) * frac(1, 2);
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    g
}

pub const WEDGE3: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
pub const WEDGE4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of `z_{mn}` (0-based) among the 12 coordinates of `U₃ ⊗ U₄`.
pub fn z_index(m: usize, n: usize) -> usize {
    4 * m + n
}

/// `c · (u_{m₁}∧u_{m₂}) ⊗ (v_{n₁}∧v_{n₂})` as `(c, (m₁, m₂), (n₁, n₂))`, 1-based.
pub type SegreTerm = (i64, (usize, usize), (usize, usize));

/// `ς ∈ Λ²U₃* ⊗ Λ²U₄*` as a 3×6 array over `WEDGE3 × WEDGE4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segre {
    pub coeffs: Matrix,
}

impl Segre {
    pub fn new(coeffs: Matrix) -> Self {
        assert_eq!((coeffs.rows(), coeffs.cols()), (3, 6));
        Segre { coeffs }
    }

    /// From terms `(c, (m₁, m₂), (n₁, n₂))`, 1-based as written by hand.
    pub fn from_terms(terms: &[SegreTerm]) -> Self {
        let mut m = Matrix::zeros(3, 6);
        for &(c, (a, b), (x, y)) in terms {
            let (sa, pa) = wedge_slot(&WEDGE3, a - 1, b - 1);
            let (sb, pb) = wedge_slot(&WEDGE4, x - 1, y - 1);
            m[(pa, pb)] += q(c * sa * sb);
        }
        Segre::new(m)
    }

    /// `Σ ς (z_{m₁n₁} z_{m₂n₂} - z_{m₁n₂} z_{m₂n₁})` on `U₃ ⊗ U₄`.
    pub fn quadric(&self) -> Matrix {
        let mut g = Matrix::zeros(12, 12);
        let half = frac(1, 2);
        for (i, &(m1, m2)) in WEDGE3.iter().enumerate() {
            for (j, &(n1, n2)) in WEDGE4.iter().enumerate() {
                let c = &self.coeffs[(i, j)];
                if c.is_zero() {
                    continue;
                }
                for (a, b, s) in [((m1, n1), (m2, n2), 1), ((m1, n2), (m2, n1), -1)] {
                    let (x, y) = (z_index(a.0, a.1), z_index(b.0, b.1));
                    let v = c * &half * q(s);
                    g[(x, y)] += v.clone();
                    g[(y, x)] += v;
                }
            }
        }
        g
    }

    /// `ς J ςᵀ`, with `J : Λ²U₄* → Λ²U₄` from the volume `v₁∧v₂∧v₃∧v₄`.
    pub fn conic(&self) -> Matrix {
        let mut j = Matrix::zeros(6, 6);
        for (a, b, s) in [(0, 5, 1), (1, 4, -1), (2, 3, 1)] {
            j[(a, b)] = q(s);
            j[(b, a)] = q(s);
        }
        self.coeffs.mul(&j).mul(&self.coeffs.transpose())
    }

    /// The image plane is a genuine plane not lying in `Gr(2, U₄)`.
    pub fn check_generic(&self) -> Result<(), G2Error> {
        if self.coeffs.rank() < 3 {
            return Err(G2Error::Degenerate("the map Λ²U₃ → Λ²U₄* is not injective"));
        }
        if self.conic().is_zero() {
            return Err(G2Error::Degenerate("the image plane lies in the Plücker quadric"));
        }
        Ok(())
    }
}

fn wedge_slot(list: &[(usize, usize)], a: usize, b: usize) -> (i64, usize) {
    let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
    let pos = list.iter().position(|p| *p == (lo, hi)).expect("valid pair");
    (s, pos)
}

/// The explicit reducible example `ς′`.
pub fn segre_example() -> Segre {
    Segre::from_terms(&[(1, (2, 3), (1, 2)), (-2, (1, 2), (2, 3)), (-2, (1, 3), (1, 4))])
}

/// Kernel of `segre_example().quadric()` as claimed: `u₂⊗v₄, u₃⊗v₃`.
pub fn segre_example_kernel() -> Vec<Vec<Q>> {
    let e = |m: usize, n: usize| -> Vec<Q> {
        (0..12).map(|k| if k == z_index(m - 1, n - 1) { Q::one() } else { Q::zero() }).collect()
    };
    vec![e(2, 4), e(3, 3)]
}

/// Seeded per-sample generator: stream `i` of the seed.
pub fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i);
    r
}

/// A rational with numerator and denominator bounded by `h`.
pub fn random_rational(rng: &mut impl Rng, h: i64) -> Q {
    frac(rng.gen_range(-h..=h), rng.gen_range(1..=h))
}

pub fn random_vector(rng: &mut impl Rng, n: usize, h: i64) -> Vec<Q> {
    (0..n).map(|_| random_rational(rng, h)).collect()
}

pub const HEIGHT: i64 = 100;

/// Root vectors of `𝔤₂ ⊂ 𝔤𝔩(V)`, the derivations killing `ν`, one per nonzero torus weight.
pub fn root_vectors(forms: &G2Forms) -> Vec<Matrix> {
    let mut weights: Vec<(i32, i32)> = Vec::new();
    for a in TORUS_WEIGHTS {
        for b in TORUS_WEIGHTS {
            let w = (a.0 - b.0, a.1 - b.1);
            if w != (0, 0) && !weights.contains(&w) {
                weights.push(w);
            }
        }
    }
    let mut out = Vec::new();
    for w in weights {
        let slots: Vec<(usize, usize)> = (0..DIM)
            .flat_map(|i| (0..DIM).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                (TORUS_WEIGHTS[i].0 - TORUS_WEIGHTS[j].0, TORUS_WEIGHTS[i].1 - TORUS_WEIGHTS[j].1) == w
            })
            .collect();
        // X·ν(a,b,c) = -ν(Xa,b,c) - ν(a,Xb,c) - ν(a,b,Xc), one equation per triple
        let triples = increasing_tuples(3);
        let mut rows = Vec::new();
        for t in &triples {
            let row: Vec<Q> = slots
                .iter()
                .map(|&(i, j)| {
                    // X = E_{ij} sends e_j to e_i
                    let mut acc = Q::zero();
                    for k in 0..3 {
                        if t[k] == j {
                            let mut s = t.clone();
                            s[k] = i;
                            acc += forms.nu.get(&s);
                        }
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
        for v in Matrix::from_rows(rows).kernel() {
            let mut x = Matrix::zeros(DIM, DIM);
            for (k, &(i, j)) in slots.iter().enumerate() {
                x[(i, j)] = v[k].clone();
            }
            out.push(x);
        }
    }
    out
}

/// `exp(tN)` for nilpotent `N`, exact.
pub fn exp_nilpotent(n: &Matrix, t: &Q) -> Matrix {
    let mut out = Matrix::identity(DIM);
    let mut term = Matrix::identity(DIM);
    for k in 1..=DIM {
        term = term.mul(n);
        if term.is_zero() {
            break;
        }
        let scale = t.clone().pow(k as i32) / q((1..=k as i64).product());
        for i in 0..DIM {
            for j in 0..DIM {
                let v = &term[(i, j)] * &scale;
                out[(i, j)] += v;
            }
        }
    }
    out
}

/// A random element of `G₂` as a product of root-group elements.
pub fn random_group_element(roots: &[Matrix], rng: &mut impl Rng, factors: usize) -> Matrix {
    let mut g = Matrix::identity(DIM);
    for _ in 0..factors {
        let n = &roots[rng.gen_range(0..roots.len())];
        let t = frac(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        g = exp_nilpotent(n, &t).mul(&g);
    }
    g
}

/// `⟨x, y, [x, y]⟩` for random `x, y`; an associative, hence Cayley, subspace.
pub fn random_associative(forms: &G2Forms, rng: &mut impl Rng) -> Option<Subspace> {
    let x = random_vector(rng, DIM, 9);
    let y = random_vector(rng, DIM, 9);
    let z = forms.bracket(&x, &y);
    Subspace::new(vec![x, y, z]).ok()
}

/// Outcome of one random Cayley point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSample {
    pub base: Option<Orbit>,
    pub on_cg: bool,
    pub orbit: Result<Orbit, String>,
    pub lie: Result<LieType, String>,
    pub i_lambda_rank: Option<usize>,
    pub conic_rank: Option<usize>,
}

impl PointSample {
    /// Orbit and Lie type agree, and the base orbit is preserved.
    pub fn consistent(&self) -> bool {
        let (Ok(o), Ok(l)) = (&self.orbit, &self.lie) else { return false };
        let pair = matches!(
            (o, l),
            (Orbit::O0, LieType::Semisimple) | (Orbit::O1, LieType::Solvable) | (Orbit::O2, LieType::Nilpotent)
        );
        let conic = matches!((o, self.conic_rank), (Orbit::O0, Some(3)) | (Orbit::O1, Some(2)) | (Orbit::O2, Some(1)));
        self.on_cg && pair && conic && self.i_lambda_rank == Some(3) && self.base.is_none_or(|b| b == *o)
    }
}

pub fn classify_point(forms: &G2Forms, u: &Subspace, base: Option<Orbit>) -> PointSample {
    let on_cg = forms.is_cg_point(u).unwrap_or(false);
    PointSample {
        base,
        on_cg,
        orbit: forms.orbit_type(u).map_err(|e| e.to_string()),
        lie: forms.lie_type(u).map_err(|e| e.to_string()),
        i_lambda_rank: forms.i_lambda_matrix(u).ok().map(|m| m.rank()),
        conic_rank: forms.subalgebra_conic(u).ok().map(|m| m.rank()),
    }
}

/// `n` Cayley points: `g·Pᵢ` for random `g ∈ G₂` cycling through the three
/// orbit representatives, every fourth one a random associative subspace.
pub fn cg_point_sweep(n: usize, seed: u64, exec: Exec) -> Vec<PointSample> {
    let forms = G2Forms::standard();
    let roots = root_vectors(&forms);
    let bases = [(p0(), Orbit::O0), (p1(), Orbit::O1), (p2(), Orbit::O2)];
    exec.map((0..n).collect(), |i| {
        let mut rng = sample_rng(seed, i as u64);
        if i % 4 == 3 {
            if let Some(u) = random_associative(&forms, &mut rng) {
                return classify_point(&forms, &u, None);
            }
        }
        let (b, o) = &bases[i % 3];
        let g = random_group_element(&roots, &mut rng, 6);
        classify_point(&forms, &b.transformed(&g), Some(*o))
    })
}

/// `φ_λ` ranks over `n` random planes.
pub fn phi_rank_sweep(n: usize, seed: u64, exec: Exec) -> BTreeMap<usize, usize> {
    let forms = G2Forms::standard();
    let ranks = exec.map((0..n).collect(), |i| {
        let mut rng = sample_rng(seed, i as u64);
        loop {
            let u = vec![random_vector(&mut rng, DIM, HEIGHT), random_vector(&mut rng, DIM, HEIGHT)];
            if let Ok(s) = Subspace::new(u) {
                return forms.phi_lambda_rank(&s).expect("dimension 2");
            }
        }
    });
    let mut hist = BTreeMap::new();
    for r in ranks {
        *hist.entry(r).or_insert(0) += 1;
    }
    hist
}

/// One Veronese instance: `(rank f, rank Q_f, kernel as claimed)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeroneseSample {
    pub f_rank: usize,
    pub q_rank: usize,
    pub kernel_ok: bool,
}

impl VeroneseSample {
    pub fn holds(&self) -> bool {
        match self.f_rank {
            3 => self.q_rank == 6,
            2 => self.q_rank == 4 && self.kernel_ok,
            _ => true,
        }
    }
}

/// `f = uvᵀ + vuᵀ` and the check that `ker Q_f = ⟨u⊗u, v⊗v⟩`.
pub fn veronese_rank_two(u: &[Q], v: &[Q]) -> VeroneseSample {
    let mut f = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            f[(i, j)] = &u[i] * &v[j] + &v[i] * &u[j];
        }
    }
    let qf = veronese_quadric(&f);
    let kernel = qf.kernel();
    VeroneseSample {
        f_rank: f.rank(),
        q_rank: qf.rank(),
        kernel_ok: same_span(&kernel, &[sym_square(u), sym_square(v)]),
    }
}

pub fn veronese_sweep(n: usize, seed: u64, exec: Exec) -> (Vec<VeroneseSample>, Vec<VeroneseSample>) {
    let full = exec.map((0..n).collect(), |i| {
        let mut rng = sample_rng(seed, 2 * i as u64);
        loop {
            let mut f = Matrix::zeros(3, 3);
            for a in 0..3 {
                for b in a..3 {
                    let x = random_rational(&mut rng, HEIGHT);
                    f[(a, b)] = x.clone();
                    f[(b, a)] = x;
                }
            }
            if f.rank() == 3 {
                let qf = veronese_quadric(&f);
                return VeroneseSample { f_rank: 3, q_rank: qf.rank(), kernel_ok: qf.kernel().is_empty() };
            }
        }
    });
    let two = exec.map((0..n).collect(), |i| {
        let mut rng = sample_rng(seed, 2 * i as u64 + 1);
        loop {
            let u = random_vector(&mut rng, 3, HEIGHT);
            let v = random_vector(&mut rng, 3, HEIGHT);
            if span_rank(&[u.clone(), v.clone()]) == 2 {
                return veronese_rank_two(&u, &v);
            }
        }
    });
    (full, two)
}

/// Random `ς` with a smooth conic; returns the quadric ranks.
pub fn segre_sweep(n: usize, seed: u64, exec: Exec) -> Vec<usize> {
    exec.map((0..n).collect(), |i| {
        let mut rng = sample_rng(seed, i as u64);
        loop {
            let rows: Vec<Vec<Q>> = (0..3).map(|_| random_vector(&mut rng, 6, HEIGHT)).collect();
            let s = Segre::new(Matrix::from_rows(rows));
            if s.check_generic().is_ok() && s.conic().rank() == 3 {
                return s.quadric().rank();
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_sign_basics() {
        assert_eq!(perm_sign(&[0, 1, 2]), 1);
        assert_eq!(perm_sign(&[1, 0, 2]), -1);
        assert_eq!(perm_sign(&[1, 1]), 0);
    }

    #[test]
    fn calibration_is_four() {
        assert_eq!(G2Forms::standard().calibration, q(4));
    }

    #[test]
    fn fourteen_dimensional_stabiliser_has_twelve_roots() {
        let f = G2Forms::standard();
        assert_eq!(root_vectors(&f).len(), 12);
    }
}

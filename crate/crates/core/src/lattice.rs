//! Integer lattices with a symmetric bilinear form.
//!
//! A [`Lattice`] is a Gram matrix over arbitrary-precision integers. Vectors are
//! plain coordinate vectors ([`MukaiVector`]) in the lattice basis. The module
//! also provides Smith and Hermite normal forms, which drive saturation and
//! orthogonal complements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_primitive, IVec};
use crate::error::{input, Error, Result};

/// Coordinates of a class in the basis of its ambient lattice.
pub type MukaiVector = IVec;

/// A finite-rank free abelian group with a symmetric integer bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<IVec>,
    labels: Option<Vec<String>>,
}

/// Inertia of a symmetric form: counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

/// A sublattice given by a basis, together with the induced Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    pub basis: Vec<MukaiVector>,
    pub restricted_gram: Vec<IVec>,
    pub saturated: bool,
}

impl Lattice {
    /// Builds a lattice from a Gram matrix. With `require_even` the diagonal must be even.
    pub fn new(gram: Vec<IVec>, labels: Option<Vec<String>>, require_even: bool) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return input("lattice: rank must be positive");
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return input(format!("lattice: gram row {i} has length {} but rank is {n}", row.len()));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return input(format!("lattice: gram is not symmetric at ({i},{j})"));
                }
            }
            if require_even && gram[i][i].is_odd() {
                return input(format!("lattice: gram diagonal entry {i} is odd (even lattice required)"));
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return input(format!("lattice: {} labels given for rank {n}", l.len()));
            }
        }
        Ok(Lattice { gram, labels })
    }

    /// The algebraic Mukai lattice `Z ⊕ NS ⊕ Z` with coordinates `(r, c_1..c_ρ, s)` and
    /// pairing `c·N·c' − r s' − s r'`.
    pub fn mukai_from_ns(ns_gram: &[IVec]) -> Result<Self> {
        let rho = ns_gram.len();
        let ns = Lattice::new(ns_gram.to_vec(), None, true).map_err(|e| match e {
            Error::Input(m) => Error::Input(format!("mukai_from_ns: {m}")),
            other => other,
        })?;
        let n = rho + 2;
        let mut gram = vec![vec![BigInt::zero(); n]; n];
        gram[0][n - 1] = -BigInt::one();
        gram[n - 1][0] = -BigInt::one();
        for i in 0..rho {
            for j in 0..rho {
                gram[i + 1][j + 1] = ns.gram[i][j].clone();
            }
        }
        let mut labels = vec!["r".to_string()];
        labels.extend((1..=rho).map(|i| format!("c{i}")));
        labels.push("s".to_string());
        Lattice::new(gram, Some(labels), true)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[IVec] {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i].is_even())
    }

    fn check_dim(&self, u: &[BigInt]) -> Result<()> {
        if u.len() != self.rank() {
            return input(format!(
                "pairing: vector of length {} in a lattice of rank {}",
                u.len(),
                self.rank()
            ));
        }
        Ok(())
    }

    /// The bilinear form `(u, w) = uᵀ G w`.
    pub fn pairing(&self, u: &[BigInt], w: &[BigInt]) -> Result<BigInt> {
        self.check_dim(u)?;
        self.check_dim(w)?;
        Ok(self.pair(u, w))
    }

    /// Unchecked pairing; panics on a dimension mismatch.
    pub fn pair(&self, u: &[BigInt], w: &[BigInt]) -> BigInt {
        assert_eq!(u.len(), self.rank());
        assert_eq!(w.len(), self.rank());
        let mut acc = BigInt::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = BigInt::zero();
            for (j, wj) in w.iter().enumerate() {
                if !wj.is_zero() && !self.gram[i][j].is_zero() {
                    row += &self.gram[i][j] * wj;
                }
            }
            acc += ui * row;
        }
        acc
    }

    pub fn square(&self, u: &[BigInt]) -> Result<BigInt> {
        self.pairing(u, u)
    }

    /// Unchecked square.
    pub fn sq(&self, u: &[BigInt]) -> BigInt {
        self.pair(u, u)
    }

    /// Pairing extended to rational vectors.
    pub fn pair_q(&self, u: &[BigRational], w: &[BigRational]) -> BigRational {
        assert_eq!(u.len(), self.rank());
        assert_eq!(w.len(), self.rank());
        let mut acc = BigRational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = BigRational::zero();
            for (j, wj) in w.iter().enumerate() {
                if !wj.is_zero() && !self.gram[i][j].is_zero() {
                    row += wj * BigRational::from_integer(self.gram[i][j].clone());
                }
            }
            acc += ui * row;
        }
        acc
    }

    /// `G·v`, the linear form `x ↦ (x, v)` as a row vector.
    pub fn dual_of(&self, v: &[BigInt]) -> IVec {
        (0..self.rank())
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc += &self.gram[i][j] * vj;
                }
                acc
            })
            .collect()
    }

    /// Inertia of the Gram matrix.
    pub fn signature(&self) -> Signature {
        signature_of(&self.gram)
    }

    /// Gram matrix of a list of vectors.
    pub fn gram_of(&self, basis: &[MukaiVector]) -> Vec<IVec> {
        basis
            .iter()
            .map(|u| basis.iter().map(|w| self.pair(u, w)).collect())
            .collect()
    }

    /// Primitive closure of the span of `vectors`.
    pub fn saturate(&self, vectors: &[MukaiVector]) -> Result<Sublattice> {
        for u in vectors {
            self.check_dim(u)?;
        }
        if vectors.is_empty() || vectors.iter().all(|u| u.iter().all(Zero::is_zero)) {
            return input("saturate: vectors span the zero subspace");
        }
        let snf = smith_normal_form(vectors);
        let r = snf.rank();
        let basis = hermite_rows(&snf.v_inv[..r]);
        let restricted_gram = self.gram_of(&basis);
        Ok(Sublattice { basis, restricted_gram, saturated: true })
    }

    /// The orthogonal complement `v⊥`, saturated, with its induced form.
    pub fn vperp_basis(&self, v: &[BigInt]) -> Result<Sublattice> {
        self.check_dim(v)?;
        if v.iter().all(Zero::is_zero) {
            return input("vperp_basis: v must be nonzero");
        }
        if !is_primitive(v) {
            return input("vperp_basis: v must be primitive (divide by the content first)");
        }
        let f = self.dual_of(v);
        let basis = hermite_rows(&integer_kernel(&[f]));
        let restricted_gram = self.gram_of(&basis);
        Ok(Sublattice { basis, restricted_gram, saturated: true })
    }

    /// Reflection `ρ_s(u) = u + (u, s) s` in a class with `s² = −2`.
    pub fn reflect(&self, s: &[BigInt], u: &[BigInt]) -> Result<MukaiVector> {
        self.check_dim(s)?;
        self.check_dim(u)?;
        let s2 = self.sq(s);
        if s2 != BigInt::from(-2) {
            return input(format!("reflect: s² = {s2}, expected −2"));
        }
        let k = self.pair(u, s);
        Ok(u.iter().zip(s).map(|(x, y)| x + &k * y).collect())
    }
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an ambient vector in this basis, if it lies in the sublattice.
    pub fn coords_of(&self, u: &[BigInt]) -> Option<IVec> {
        solve_integer_combination(&self.basis, u)
    }

    /// The ambient vector with the given coordinates.
    pub fn embed(&self, coords: &[BigInt]) -> MukaiVector {
        let n = self.basis.first().map(|b| b.len()).unwrap_or(0);
        let mut out = vec![BigInt::zero(); n];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}

/// Exact inertia of a symmetric rational matrix by congruence diagonalization.
pub fn signature_of(gram: &[IVec]) -> Signature {
    let n = gram.len();
    let mut m: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut plus, mut minus) = (0, 0);
    while !active.is_empty() {
        let piv = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                // All diagonal entries vanish; look for an off-diagonal one.
                let mut pair = None;
                'outer: for &i in &active {
                    for &j in &active {
                        if i != j && !m[i][j].is_zero() {
                            pair = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                let Some((i, j)) = pair else { break };
                // Replace e_i by e_i + e_j: diagonal becomes 2 m[i][j] ≠ 0.
                for k in 0..n {
                    let t = m[j][k].clone();
                    m[i][k] += t;
                }
                for k in 0..n {
                    let t = m[k][j].clone();
                    m[k][i] += t;
                }
                i
            }
        };
        let d = m[p][p].clone();
        if d.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            let f = &m[i][p] / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let t = &f * &m[p][j];
                m[i][j] -= t;
            }
        }
        for &i in &active {
            m[i][p] = BigRational::zero();
            m[p][i] = BigRational::zero();
        }
    }
    Signature { n_plus: plus, n_minus: minus, n_zero: n - plus - minus }
}

/// Smith normal form `U A V = D` of an integer matrix, with `V⁻¹` tracked as well.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: Vec<IVec>,
    pub v: Vec<IVec>,
    pub v_inv: Vec<IVec>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

fn identity(n: usize) -> Vec<IVec> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Computes the Smith normal form of `a` (rows × cols).
pub fn smith_normal_form(a: &[IVec]) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d: Vec<IVec> = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut v_inv = identity(n);

    // Row op: row_i -= q * row_t (on d and u).
    fn row_sub(mat: &mut [IVec], i: usize, t: usize, q: &BigInt) {
        let rt = mat[t].clone();
        for (x, y) in mat[i].iter_mut().zip(&rt) {
            *x -= q * y;
        }
    }
    // Column op: col_i -= q * col_t on d and v; v_inv gets row_t += q * row_i.
    fn col_sub(d: &mut [IVec], v: &mut [IVec], v_inv: &mut [IVec], i: usize, t: usize, q: &BigInt) {
        for row in d.iter_mut() {
            let y = row[t].clone();
            row[i] -= q * y;
        }
        for row in v.iter_mut() {
            let y = row[t].clone();
            row[i] -= q * y;
        }
        let ri = v_inv[i].clone();
        for (x, y) in v_inv[t].iter_mut().zip(&ri) {
            *x += q * y;
        }
    }
    fn col_swap(d: &mut [IVec], v: &mut [IVec], v_inv: &mut [IVec], i: usize, j: usize) {
        for row in d.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    }

    let steps = m.min(n);
    for t in 0..steps {
        loop {
            // Pivot: smallest nonzero absolute value in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut d, &mut v, &mut v_inv, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_sub(&mut d, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    if !d[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_sub(&mut d, &mut v, &mut v_inv, j, t, &q);
                    if !d[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Divisibility condition on the trailing block.
            let mut fix = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&d[i][j] % &d[t][t]).is_zero() {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_sub(&mut d, t, i, &minus_one);
                    row_sub(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if t < m && d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let diag = (0..steps).map(|i| d[i][i].clone()).collect();
    Snf { diag, u, v, v_inv }
}

/// Nonzero elementary divisors of an integer matrix.
pub fn elementary_divisors(a: &[IVec]) -> Vec<BigInt> {
    smith_normal_form(a).diag.into_iter().filter(|x| !x.is_zero()).collect()
}

/// Basis of the integer kernel `{x : A x = 0}`; the result is saturated.
pub fn integer_kernel(a: &[IVec]) -> Vec<IVec> {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    let snf = smith_normal_form(a);
    let r = snf.rank();
    (r..n).map(|j| snf.v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Row-style Hermite normal form of the row span; zero rows are dropped.
pub fn hermite_rows(rows: &[IVec]) -> Vec<IVec> {
    let mut m: Vec<IVec> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut out_row = 0;
    for col in 0..ncols {
        if out_row >= m.len() {
            break;
        }
        loop {
            let mut piv = None;
            for i in out_row..m.len() {
                if !m[i][col].is_zero() && piv.is_none_or(|p: usize| m[i][col].abs() < m[p][col].abs()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            m.swap(out_row, p);
            let mut done = true;
            for i in out_row + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[out_row][col]);
                    let pr = m[out_row].clone();
                    for (x, y) in m[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                    if !m[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if out_row < m.len() && !m[out_row][col].is_zero() {
            if m[out_row][col].is_negative() {
                for x in m[out_row].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pr = m[out_row].clone();
            for i in 0..out_row {
                let q = m[i][col].div_floor(&pr[col]);
                if !q.is_zero() {
                    for (x, y) in m[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
            out_row += 1;
        }
    }
    m.truncate(out_row);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Integer coefficients `c` with `Σ c_i basis_i = u`, if they exist.
pub fn solve_integer_combination(basis: &[IVec], u: &[BigInt]) -> Option<IVec> {
    let k = basis.len();
    let n = u.len();
    if basis.iter().any(|b| b.len() != n) {
        return None;
    }
    // Gaussian elimination on the n×(k+1) augmented system over the rationals.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> =
                (0..k).map(|j| BigRational::from_integer(basis[j][i].clone())).collect();
            r.push(BigRational::from_integer(u[i].clone()));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    if pivots.len() < k {
        return None; // dependent basis
    }
    let mut out = vec![BigInt::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        if !rows[i][k].is_integer() {
            return None;
        }
        out[c] = rows[i][k].to_integer();
    }
    Some(out)
}

/// Every integer vector `x` with `xᵀ P x ≤ bound`, for a positive definite rational `P`.
///
/// This is Fincke–Pohst enumeration carried out in exact arithmetic: `P` is split as
/// `Σ qᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²` and coordinates are fixed from the last one down.
/// The zero vector is included. Returns an input error if `P` is not positive definite.
pub fn short_vectors(p: &[Vec<BigRational>], bound: &BigRational) -> Result<Vec<IVec>> {
    let n = p.len();
    let mut q: Vec<Vec<BigRational>> = p.to_vec();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return input("short_vectors: form is not positive definite");
        }
        for j in i + 1..n {
            let qij = q[i][j].clone();
            q[j][i] = qij.clone();
            q[i][j] = qij / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &q[k][i] * &q[i][l];
                q[k][l] -= t;
            }
        }
    }
    let mut out = Vec::new();
    if bound.is_negative() {
        return Ok(out);
    }
    let mut x = vec![BigInt::zero(); n];
    fp_level(&q, n, bound.clone(), &mut x, &mut out);
    Ok(out)
}

fn fp_level(q: &[Vec<BigRational>], level: usize, remaining: BigRational, x: &mut IVec, out: &mut Vec<IVec>) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let n = q.len();
    let mut center = BigRational::zero();
    for j in i + 1..n {
        center -= &q[i][j] * BigRational::from_integer(x[j].clone());
    }
    let radius_sq = &remaining / &q[i][i];
    let r = crate::arith::rat_isqrt_floor(&radius_sq);
    let lo: BigInt = center.floor().to_integer() - &r - 1;
    let hi: BigInt = center.ceil().to_integer() + &r + 1;
    let mut xi = lo;
    while xi <= hi {
        let diff = BigRational::from_integer(xi.clone()) - &center;
        let used = &q[i][i] * &diff * &diff;
        if used <= remaining {
            x[i] = xi.clone();
            fp_level(q, i, &remaining - used, x, out);
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
}

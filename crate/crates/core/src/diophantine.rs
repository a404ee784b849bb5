//! Binary quadratic forms and the Diophantine problems built on them.
//!
//! Forms are stored in matrix convention `Q(x, y) = a x² + 2b xy + c y²`, so the
//! Gram matrix is `[[a, b], [b, c]]`. Internally the solvers switch to the
//! classical convention `A x² + B xy + C y²` with discriminant `B² − 4AC`, where
//! the reduction theory of indefinite forms is stated most cleanly.
//!
//! Representations of `n` by an indefinite form with non-square discriminant
//! are found exactly: every primitive representation determines a form
//! `(n, B', C')` equivalent to the input, and proper equivalence is decided by
//! comparing reduced cycles. The proper automorphism group is generated (up to
//! `−I`) by a matrix built from the fundamental solution of `t² − Δu² = 4`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    angle_cmp, exact_sqrt, int, isqrt, mat2_apply, mat2_identity, mat2_inv_unimodular, mat2_mul,
    primitive_part, rat_isqrt_floor, sign_normalize, Mat2,
};
use crate::error::{input, Error, Result};

/// A point of the plane with integer coordinates.
pub type Point = (BigInt, BigInt);

/// The form `a x² + 2b xy + c y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BinaryForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        BinaryForm::new(int(a), int(b), int(c))
    }

    /// Reads a symmetric 2×2 Gram matrix.
    pub fn from_gram(g: &[Vec<BigInt>]) -> Result<Self> {
        if g.len() != 2 || g.iter().any(|r| r.len() != 2) {
            return input("binary form: Gram matrix must be 2×2");
        }
        if g[0][1] != g[1][0] {
            return input("binary form: Gram matrix must be symmetric");
        }
        Ok(BinaryForm::new(g[0][0].clone(), g[0][1].clone(), g[1][1].clone()))
    }

    pub fn gram(&self) -> [[BigInt; 2]; 2] {
        [[self.a.clone(), self.b.clone()], [self.b.clone(), self.c.clone()]]
    }

    /// `4(b² − ac)`, the discriminant of the classical form `(a, 2b, c)`.
    pub fn disc(&self) -> BigInt {
        (&self.b * &self.b - &self.a * &self.c) * 4
    }

    /// `ac − b²`, the determinant of the Gram matrix.
    pub fn det(&self) -> BigInt {
        &self.a * &self.c - &self.b * &self.b
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.disc().is_positive()
    }

    pub fn eval(&self, p: &Point) -> BigInt {
        &self.a * &p.0 * &p.0 + &self.b * &p.0 * &p.1 * 2 + &self.c * &p.1 * &p.1
    }

    /// The associated bilinear form.
    pub fn pair(&self, p: &Point, q: &Point) -> BigInt {
        &self.a * &p.0 * &q.0 + &self.b * (&p.0 * &q.1 + &p.1 * &q.0) + &self.c * &p.1 * &q.1
    }

    /// The form `Q ∘ M`, i.e. `x ↦ Q(M x)`.
    pub fn transform(&self, m: &Mat2) -> BinaryForm {
        let c0 = (m[0][0].clone(), m[1][0].clone());
        let c1 = (m[0][1].clone(), m[1][1].clone());
        BinaryForm::new(self.eval(&c0), self.pair(&c0, &c1), self.eval(&c1))
    }

    fn classical(&self) -> Classical {
        Classical { a: self.a.clone(), b: &self.b * 2, c: self.c.clone() }
    }
}

/// Solution of `x² − D y² = N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub d: BigInt,
    pub n: BigInt,
    pub minimal: bool,
}

/// Fundamental solution of `x² − D y² = 1` from the continued fraction of `√D`.
pub fn pell_fundamental(d: &BigInt) -> Result<PellSolution> {
    if !d.is_positive() {
        return input(format!("pell: D = {d} must be positive"));
    }
    if exact_sqrt(d).is_some() {
        return input(format!("pell: D = {d} is a perfect square"));
    }
    let a0 = isqrt(d);
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    // convergents h/k
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        if &h * &h - d * &k * &k == BigInt::one() {
            return Ok(PellSolution { x: h, y: k, d: d.clone(), n: BigInt::one(), minimal: true });
        }
        m = &a * &q - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
}

/// How [`represent`] should report solutions of `Q(x, y) = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepresentMode {
    /// The solution with smallest `x > 0`, then smallest `y > 0`.
    MinimalPositive,
    /// Every solution with `|x|, |y| ≤ bound`.
    AllInBox(BigInt),
    /// One solution per orbit of the automorph generator (indefinite, non-square discriminant only).
    OrbitRepresentatives,
}

/// Finitely many orbit representatives together with the automorph that generates the orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    pub reps: Vec<Point>,
    pub generator: Mat2,
}

/// Solves `Q(x, y) = n` in the requested mode. Points are sorted for determinism.
pub fn represent(q: &BinaryForm, n: &BigInt, mode: &RepresentMode) -> Result<Vec<Point>> {
    match mode {
        RepresentMode::AllInBox(bound) => {
            if bound.is_negative() {
                return input("represent: box bound must be non-negative");
            }
            Ok(all_in_box(q, n, bound))
        }
        RepresentMode::OrbitRepresentatives => Ok(orbit_representatives(q, n)?.reps),
        RepresentMode::MinimalPositive => minimal_positive(q, n).map(|p| p.into_iter().collect()),
    }
}

/// All solutions of `Q = n` with `|x|, |y| ≤ bound`, sorted lexicographically.
pub fn all_in_box(q: &BinaryForm, n: &BigInt, bound: &BigInt) -> Vec<Point> {
    let mut out = Vec::new();
    let mut push = |x: BigInt, y: &BigInt| {
        if x.abs() <= *bound {
            out.push((x, y.clone()));
        }
    };
    let mut y = -bound.clone();
    while &y <= bound {
        // a x² + 2by x + (c y² − n) = 0
        let rest = &q.c * &y * &y - n;
        let by = &q.b * &y;
        if q.a.is_zero() {
            if by.is_zero() {
                if rest.is_zero() {
                    let mut x = -bound.clone();
                    while &x <= bound {
                        push(x.clone(), &y);
                        x += 1;
                    }
                }
            } else {
                let den = &by * 2;
                if (-&rest).is_multiple_of(&den) {
                    push(-&rest / &den, &y);
                }
            }
        } else {
            let quarter = &by * &by - &q.a * &rest;
            if let Some(s) = exact_sqrt(&quarter) {
                for num in [-&by + &s, -&by - &s] {
                    if num.is_multiple_of(&q.a) {
                        push(&num / &q.a, &y);
                    }
                    if s.is_zero() {
                        break;
                    }
                }
            }
        }
        y += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Half-widths of a box that contains every solution, when the solution set is finite.
fn finite_box(q: &BinaryForm, n: &BigInt) -> Option<BigInt> {
    let disc = q.disc();
    if disc.is_negative() {
        // definite: |y| ≤ sqrt(a n / det), |x| ≤ sqrt(c n / det)
        let det = q.det();
        let by = BigRational::new((&q.a * n).abs(), det.clone());
        let bx = BigRational::new((&q.c * n).abs(), det);
        return Some(rat_isqrt_floor(&by).max(rat_isqrt_floor(&bx)));
    }
    if disc.is_zero() || n.is_zero() {
        return None;
    }
    let s = exact_sqrt(&(&q.b * &q.b - &q.a * &q.c))?;
    let yb = if q.a.is_zero() { n.abs() } else { (&q.a * n).abs() / &s };
    let xb = if q.c.is_zero() { n.abs() } else { (&q.c * n).abs() / &s };
    Some(yb.max(xb))
}

// ---------------------------------------------------------------------------
// Reduction theory for indefinite forms with non-square discriminant.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Classical {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl Classical {
    fn eval(&self, p: &Point) -> BigInt {
        &self.a * &p.0 * &p.0 + &self.b * &p.0 * &p.1 + &self.c * &p.1 * &p.1
    }

    fn is_reduced(&self, q: &BigInt) -> bool {
        let two_a = self.a.abs() * 2;
        self.b.is_positive() && &self.b <= q && &two_a + &self.b > *q && &two_a - &self.b <= *q
    }

    /// One reduction step; returns the new form and the substitution matrix.
    fn rho(&self, disc: &BigInt, q: &BigInt) -> (Classical, Mat2) {
        let c_abs = self.c.abs();
        let two_c = &c_abs * 2;
        let r = if &c_abs > q {
            &c_abs - (&c_abs + &self.b).mod_floor(&two_c)
        } else {
            q - (q + &self.b).mod_floor(&two_c)
        };
        let s = (&r + &self.b) / (&self.c * 2);
        let new_c = (&r * &r - disc) / (&self.c * 4);
        let t = [[BigInt::zero(), -BigInt::one()], [BigInt::one(), s]];
        (Classical { a: self.c.clone(), b: r, c: new_c }, t)
    }
}

const REDUCE_CAP: usize = 100_000;
const CYCLE_CAP: usize = 2_000_000;

/// Returns a reduced form `g` and `M` with `g(x) = f(M x)`.
fn reduce(f: &Classical, disc: &BigInt, q: &BigInt) -> Result<(Classical, Mat2)> {
    let mut g = f.clone();
    let mut m = mat2_identity();
    for _ in 0..REDUCE_CAP {
        if g.is_reduced(q) {
            return Ok((g, m));
        }
        let (next, t) = g.rho(disc, q);
        m = mat2_mul(&m, &t);
        g = next;
    }
    Err(Error::IterationLimit(format!("form reduction did not finish for discriminant {disc}")))
}

/// Map from each form on the reduced cycle of `g` to `P` with `form(x) = g(P x)`.
fn cycle_of(g: &Classical, disc: &BigInt, q: &BigInt) -> Result<HashMap<Classical, Mat2>> {
    let mut map = HashMap::new();
    let mut cur = g.clone();
    let mut p = mat2_identity();
    for _ in 0..CYCLE_CAP {
        if map.contains_key(&cur) {
            return Ok(map);
        }
        map.insert(cur.clone(), p.clone());
        let (next, t) = cur.rho(disc, q);
        p = mat2_mul(&p, &t);
        cur = next;
    }
    Err(Error::IterationLimit(format!("reduced cycle too long for discriminant {disc}")))
}

fn check_indefinite_nonsquare(q: &BinaryForm) -> Result<BigInt> {
    let disc = q.disc();
    if !disc.is_positive() {
        return input(format!("orbit representatives need a positive discriminant, got {disc}"));
    }
    if exact_sqrt(&disc).is_some() {
        return input(format!("orbit representatives need a non-square discriminant, got {disc}"));
    }
    Ok(disc)
}

/// Generator of the proper automorphisms of `Q` modulo `−I`, with positive trace.
pub fn automorph(q: &BinaryForm) -> Result<Mat2> {
    let disc = check_indefinite_nonsquare(q)?;
    let f = q.classical();
    let g = f.a.gcd(&f.b).gcd(&f.c);
    let (a0, b0, c0) = (&f.a / &g, &f.b / &g, &f.c / &g);
    let d0 = &disc / (&g * &g);
    // fundamental solution of t² − d0 u² = 4
    let (t, u) = if d0.is_multiple_of(&int(4)) {
        let p = pell_fundamental(&(&d0 / 4))?;
        (p.x * 2, p.y)
    } else {
        let p = pell_fundamental(&d0)?;
        // If ε³ = x + y√d0 for a half-integral unit ε = (t + u√d0)/2 then t³ − 3t = 2x.
        let target: BigInt = &p.x * 2;
        let guess = target.cbrt();
        let mut found = None;
        for t in [&guess - 1, guess.clone(), &guess + 1] {
            if t > int(2) && &t * &t * &t - &t * 3 == target {
                let u2 = (&t * &t - 4) / &d0;
                if let Some(u) = exact_sqrt(&u2) {
                    if &u * &u * &d0 == &t * &t - 4 {
                        found = Some((t.clone(), u));
                    }
                }
            }
        }
        found.unwrap_or((p.x * 2, p.y * 2))
    };
    Ok([
        [(&t - &b0 * &u) / 2, -(&c0 * &u)],
        [&a0 * &u, (&t + &b0 * &u) / 2],
    ])
}

/// Primitive representations of `n ≠ 0`, one per class modulo proper automorphisms.
fn primitive_reps(f: &Classical, n: &BigInt, disc: &BigInt, q: &BigInt) -> Result<Vec<Point>> {
    let (fr, m) = reduce(f, disc, q)?;
    let cycle = cycle_of(&fr, disc, q)?;
    let modulus = n.abs() * 4;
    let mut out = Vec::new();
    let mut bp = BigInt::zero();
    let limit = n.abs() * 2;
    while bp < limit {
        if (&bp * &bp - disc).is_multiple_of(&modulus) {
            let big_f = Classical { a: n.clone(), b: bp.clone(), c: (&bp * &bp - disc) / (n * 4) };
            let (ffr, nm) = reduce(&big_f, disc, q)?;
            if let Some(p) = cycle.get(&ffr) {
                let t = mat2_mul(&mat2_mul(&m, p), &mat2_inv_unimodular(&nm));
                let rep = (t[0][0].clone(), t[1][0].clone());
                debug_assert_eq!(&f.eval(&rep), n);
                out.push(rep);
            }
        }
        bp += 1;
    }
    Ok(out)
}

/// Orbit representatives of all solutions of `Q = n` under the cyclic group generated by
/// [`automorph`]. Each point `p` and its negative lie in different orbits, so both appear.
pub fn orbit_representatives(q: &BinaryForm, n: &BigInt) -> Result<Orbits> {
    let disc = check_indefinite_nonsquare(q)?;
    let generator = automorph(q)?;
    if n.is_zero() {
        return Ok(Orbits { reps: vec![(BigInt::zero(), BigInt::zero())], generator });
    }
    let f = q.classical();
    let sq = isqrt(&disc);
    let mut reps = Vec::new();
    let mut g = BigInt::one();
    while &g * &g <= n.abs() {
        if n.is_multiple_of(&(&g * &g)) {
            for p in primitive_reps(&f, &(n / (&g * &g)), &disc, &sq)? {
                let p = (&p.0 * &g, &p.1 * &g);
                reps.push((-&p.0, -&p.1));
                reps.push(p);
            }
        }
        g += 1;
    }
    reps.sort();
    Ok(Orbits { reps, generator })
}

/// Tracks whether a coordinate sequence along an orbit has become monotone away from zero.
/// For an automorph with trace ≥ 2 each coordinate obeys `x_{k+1} = t x_k − x_{k−1}`,
/// so once `x_k > 0` and `x_{k+1} ≥ x_k` the sequence stays positive and non-decreasing.
fn settled(prev: &BigInt, cur: &BigInt) -> i8 {
    if cur.is_positive() && cur >= prev {
        1
    } else if cur.is_negative() && cur <= prev {
        -1
    } else {
        0
    }
}

const WALK_CAP: usize = 100_000;

/// Walks the orbit of `p` in one direction (`step` is the automorph or its inverse), calling
/// `visit` on every point until `stop(x_state, y_state, point)` returns true. The start point
/// is visited too.
pub fn walk_orbit<F, S>(p: &Point, step: &Mat2, mut visit: F, mut stop: S) -> Result<()>
where
    F: FnMut(&Point),
    S: FnMut(i8, i8, &Point) -> bool,
{
    let mut prev = p.clone();
    visit(&prev);
    let mut cur = mat2_apply(step, &prev);
    for _ in 0..WALK_CAP {
        visit(&cur);
        let sx = settled(&prev.0, &cur.0);
        let sy = settled(&prev.1, &cur.1);
        if stop(sx, sy, &cur) {
            return Ok(());
        }
        let next = mat2_apply(step, &cur);
        prev = std::mem::replace(&mut cur, next);
    }
    Err(Error::IterationLimit("orbit walk did not settle".into()))
}

/// The solution with smallest `x > 0`, then smallest `y > 0`.
pub fn minimal_positive(q: &BinaryForm, n: &BigInt) -> Result<Option<Point>> {
    let disc = q.disc();
    let mut candidates: Vec<Point> = Vec::new();
    if disc.is_zero() {
        return Ok(degenerate_minimal_positive(q, n));
    }
    if disc.is_positive() && exact_sqrt(&disc).is_none() {
        if n.is_zero() {
            return Ok(None);
        }
        let orbits = orbit_representatives(q, n)?;
        let inv = mat2_inv_unimodular(&orbits.generator);
        for rep in &orbits.reps {
            for step in [&orbits.generator, &inv] {
                walk_orbit(
                    rep,
                    step,
                    |p| {
                        if p.0.is_positive() && p.1.is_positive() {
                            candidates.push(p.clone());
                        }
                    },
                    |sx, sy, _| (sx == 1 && sy == 1) || sx == -1 || sy == -1,
                )?;
            }
        }
    } else if n.is_zero() {
        // square discriminant: primitive isotropic rays in the open first quadrant
        for r in isotropic_primitive(q) {
            for p in [r.clone(), (-&r.0, -&r.1)] {
                if p.0.is_positive() && p.1.is_positive() {
                    candidates.push(p);
                }
            }
        }
    } else {
        let bound = finite_box(q, n).expect("finite solution set");
        candidates = all_in_box(q, n, &bound)
            .into_iter()
            .filter(|p| p.0.is_positive() && p.1.is_positive())
            .collect();
    }
    Ok(candidates.into_iter().min())
}

/// `Q = e·L²` for a primitive linear form `L = αx + βy`; returns `(e, α, β)`.
fn degenerate_factor(q: &BinaryForm) -> Option<(BigInt, BigInt, BigInt)> {
    if q.a.is_zero() && q.b.is_zero() && q.c.is_zero() {
        return None;
    }
    if q.a.is_zero() {
        return Some((q.c.clone(), BigInt::zero(), BigInt::one()));
    }
    let g = q.a.gcd(&q.b);
    let (alpha, beta) = (&q.a / &g, &q.b / &g);
    let (alpha, beta, g) = if alpha.is_negative() { (-alpha, -beta, -g) } else { (alpha, beta, g) };
    Some((&g / &alpha, alpha, beta))
}

fn degenerate_minimal_positive(q: &BinaryForm, n: &BigInt) -> Option<Point> {
    let Some((e, alpha, beta)) = degenerate_factor(q) else {
        return if n.is_zero() { Some((BigInt::one(), BigInt::one())) } else { None };
    };
    if !n.is_multiple_of(&e) {
        return None;
    }
    let m = exact_sqrt(&(n / &e))?;
    let mut best: Option<Point> = None;
    for target in [m.clone(), -m.clone()] {
        // α x + β y = target, solutions (x0 − kβ, y0 + kα)
        let eg = alpha.extended_gcd(&beta);
        if !target.is_multiple_of(&eg.gcd) {
            continue;
        }
        let f = &target / &eg.gcd;
        let (x0, y0) = (&eg.x * &f, &eg.y * &f);
        // constraints x ≥ 1 and y ≥ 1 on k
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        let mut bound = |coef: BigInt, base: BigInt| {
            // base + k·coef ≥ 1
            if coef.is_zero() {
                if base < BigInt::one() {
                    lo = Some(int(1));
                    hi = Some(int(0));
                }
            } else if coef.is_positive() {
                let k = (BigInt::one() - &base).div_ceil(&coef);
                lo = Some(lo.take().map_or(k.clone(), |l| l.max(k)));
            } else {
                let k = (&base - BigInt::one()).div_floor(&(-&coef));
                hi = Some(hi.take().map_or(k.clone(), |h| h.min(k)));
            }
        };
        bound(-beta.clone(), x0.clone());
        bound(alpha.clone(), y0.clone());
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                continue;
            }
        }
        let pick = |k: &BigInt| (&x0 - k * &beta, &y0 + k * &alpha);
        let cand = match (beta.sign(), &lo, &hi) {
            (num_bigint::Sign::Plus, _, Some(h)) => pick(h),
            (num_bigint::Sign::Minus, Some(l), _) => pick(l),
            (num_bigint::Sign::NoSign, Some(l), _) if alpha.is_positive() => pick(l),
            (num_bigint::Sign::NoSign, _, Some(h)) => pick(h),
            _ => continue,
        };
        best = Some(match best {
            Some(b) if b <= cand => b,
            _ => cand,
        });
    }
    best
}

/// Primitive isotropic rays, one representative each (first nonzero coordinate positive).
pub fn isotropic_primitive(q: &BinaryForm) -> Vec<Point> {
    let (a, b, c) = (&q.a, &q.b, &q.c);
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return vec![(BigInt::one(), BigInt::zero()), (BigInt::zero(), BigInt::one())];
    }
    let Some(s) = exact_sqrt(&(b * b - a * c)) else { return Vec::new() };
    let raw: Vec<[BigInt; 2]> = if a.is_zero() {
        vec![[BigInt::one(), BigInt::zero()], [c.clone(), -(b * int(2))]]
    } else {
        vec![[&s - b, a.clone()], [-b - &s, a.clone()]]
    };
    let mut rays: Vec<Point> = raw
        .into_iter()
        .map(|r| {
            let p = sign_normalize(&primitive_part(&r));
            (p[0].clone(), p[1].clone())
        })
        .collect();
    rays.sort_by(angle_cmp);
    rays.dedup();
    rays
}

/// All solutions of `Q = −2` with `|x|, |y| ≤ bound`, sorted by polar angle.
///
/// For indefinite forms with non-square discriminant the solutions are generated by walking
/// the automorph orbits of finitely many representatives; otherwise a box scan is used.
pub fn spherical_enumerate(q: &BinaryForm, bound: &BigInt) -> Result<Vec<Point>> {
    let minus_two = int(-2);
    let disc = q.disc();
    let mut out: Vec<Point> = if disc.is_positive() && exact_sqrt(&disc).is_none() {
        let orbits = orbit_representatives(q, &minus_two)?;
        let inv = mat2_inv_unimodular(&orbits.generator);
        let inside = |p: &Point| p.0.abs() <= *bound && p.1.abs() <= *bound;
        let mut found = Vec::new();
        for rep in &orbits.reps {
            for step in [&orbits.generator, &inv] {
                walk_orbit(
                    rep,
                    step,
                    |p| {
                        if inside(p) {
                            found.push(p.clone());
                        }
                    },
                    |sx, sy, p| sx != 0 && sy != 0 && !inside(p),
                )?;
            }
        }
        found
    } else {
        all_in_box(q, &minus_two, bound)
    };
    out.sort_by(angle_cmp);
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mat2;

    fn pt(x: i64, y: i64) -> Point {
        (int(x), int(y))
    }

    #[test]
    fn pell_examples() {
        for (d, x, y) in [(2, 3, 2), (5, 9, 4), (6, 5, 2), (13, 649, 180), (61, 1766319049, 226153980)] {
            let s = pell_fundamental(&int(d)).unwrap();
            assert_eq!((s.x, s.y), (int(x), int(y)), "D = {d}");
        }
        assert!(pell_fundamental(&int(9)).is_err());
        assert!(pell_fundamental(&int(0)).is_err());
    }

    #[test]
    fn minimal_positive_examples() {
        let q = BinaryForm::from_i64(1, 0, -124);
        assert_eq!(minimal_positive(&q, &int(5)).unwrap(), Some(pt(657, 59)));
        // (n−1)X² − dY² = 1 with n−1 = 1, d = 0 is degenerate; use n = 3, d = 1
        let q = BinaryForm::from_i64(2, 0, -1);
        assert_eq!(minimal_positive(&q, &int(1)).unwrap(), Some(pt(1, 1)));
        let q = BinaryForm::from_i64(2, 1, 2);
        assert_eq!(minimal_positive(&q, &int(-2)).unwrap(), None);
        let q = BinaryForm::from_i64(1, 0, -6);
        assert_eq!(minimal_positive(&q, &int(1)).unwrap(), Some(pt(5, 2)));
        // square discriminant: x² − 4y² = 5
        let q = BinaryForm::from_i64(1, 0, -4);
        assert_eq!(minimal_positive(&q, &int(5)).unwrap(), Some(pt(3, 1)));
    }

    #[test]
    fn orbit_reps_solve_equation() {
        let q = BinaryForm::from_i64(12, 7, -2);
        let o = orbit_representatives(&q, &int(-2)).unwrap();
        assert!(!o.reps.is_empty());
        for p in &o.reps {
            assert_eq!(q.eval(p), int(-2));
        }
        assert_eq!(q.transform(&o.generator), q);
        assert!(BinaryForm::from_i64(1, 0, -4).is_hyperbolic());
        assert!(orbit_representatives(&BinaryForm::from_i64(1, 0, -4), &int(1)).is_err());
    }

    #[test]
    fn automorph_half_integral_unit() {
        // x² + xy − y² has discriminant 5 and fundamental unit (1 + √5)/2 of norm −1;
        // the proper generator comes from its square, trace 3.
        let q = BinaryForm::new(int(2), int(1), int(-2)); // classical (2, 2, −2), content 2
        let g = automorph(&q).unwrap();
        assert_eq!(q.transform(&g), q);
        assert_eq!(&g[0][0] + &g[1][1], int(3));
    }

    #[test]
    fn isotropic_examples() {
        assert_eq!(isotropic_primitive(&BinaryForm::from_i64(0, 1, 0)), vec![pt(1, 0), pt(0, 1)]);
        assert!(isotropic_primitive(&BinaryForm::from_i64(12, 7, -2)).is_empty());
        let n = 5;
        let rays = isotropic_primitive(&BinaryForm::from_i64(2 * n - 2, -1, 0));
        assert!(rays.contains(&pt(0, 1)));
        assert!(rays.contains(&pt(1, n - 1)));
    }

    #[test]
    fn spherical_examples() {
        let n = 4;
        let q = BinaryForm::from_i64(2 * n - 2, -1, 0);
        let s = spherical_enumerate(&q, &int(2 * n)).unwrap();
        assert_eq!(s, vec![pt(1, n), pt(-1, -n)]);

        let q = BinaryForm::from_i64(12, 7, -2);
        assert_eq!(spherical_enumerate(&q, &int(5)).unwrap(), vec![pt(0, 1), pt(0, -1)]);

        let q = BinaryForm::from_i64(-2, 3, -2);
        let s = spherical_enumerate(&q, &int(3)).unwrap();
        for p in [pt(1, 0), pt(0, 1), pt(3, 1), pt(1, 3)] {
            assert!(s.contains(&p));
        }
        assert_eq!(s, all_in_box(&q, &int(-2), &int(3)).into_iter().fold(Vec::new(), |mut v, p| {
            v.push(p);
            v.sort_by(angle_cmp);
            v
        }));
    }

    #[test]
    fn box_and_definite() {
        let q = BinaryForm::from_i64(2, 1, 2);
        assert!(represent(&q, &int(-2), &RepresentMode::AllInBox(int(10))).unwrap().is_empty());
        assert_eq!(
            represent(&q, &int(2), &RepresentMode::MinimalPositive).unwrap(),
            Vec::<Point>::new()
        );
        let sols = represent(&q, &int(2), &RepresentMode::AllInBox(int(3))).unwrap();
        assert_eq!(sols.len(), 6);
        assert!(represent(&q, &int(2), &RepresentMode::OrbitRepresentatives).is_err());
    }

    #[test]
    fn transform_composes() {
        let q = BinaryForm::from_i64(-2, 3, -2);
        let m = mat2(2, 1, 1, 1);
        let t = q.transform(&m);
        assert_eq!(t.eval(&pt(1, 0)), q.eval(&pt(2, 1)));
        assert_eq!(t.disc(), q.disc());
    }

    #[test]
    fn degenerate_forms() {
        // (x + y)²
        let q = BinaryForm::from_i64(1, 1, 1);
        assert_eq!(minimal_positive(&q, &int(4)).unwrap(), Some(pt(1, 1)));
        assert_eq!(minimal_positive(&q, &int(3)).unwrap(), None);
        // (x − y)² = 1 has positive solutions (k + 1, k) and (k, k + 1)
        let q = BinaryForm::from_i64(1, -1, 1);
        assert_eq!(minimal_positive(&q, &int(1)).unwrap(), Some(pt(1, 2)));
    }
}

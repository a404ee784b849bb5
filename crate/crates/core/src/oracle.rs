//! Brute-force reference implementations used to cross-check the fast algorithms.
//!
//! These scan explicit boxes and recurse naively. They are slow, obviously correct,
//! and only as complete as the box they are given.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{primitive_on_ray, sign_normalize, IVec, QVec};
use crate::cones::project_to_vperp;
use crate::diophantine::{BinaryForm, Point};
use crate::error::Result;
use crate::flops::PositivePartition;
use crate::lattice::Lattice;
use crate::wall::WallLattice;

/// Smallest `(x, y)` with `y ≥ 1` and `x² − D y² = 1`, scanning `y ≤ max_y`.
pub fn pell_brute(d: u64, max_y: u64) -> Option<(u64, u64)> {
    for y in 1..=max_y {
        let t = (d as u128) * (y as u128) * (y as u128) + 1;
        let x = isqrt_u128(t);
        if x * x == t {
            return Some((x as u64, y));
        }
    }
    None
}

fn isqrt_u128(n: u128) -> u128 {
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Fundamental solution of `x² − D y² = 1` by the cyclic (chakravala) method, an
/// algorithm independent of continued fractions. `D` must be positive and not a square.
pub fn pell_chakravala(d: &BigInt) -> (BigInt, BigInt) {
    let root = d.sqrt();
    assert!(&root * &root != *d, "D must not be a square");
    // a² − D b² = k
    let (mut a, mut b) = (root.clone(), BigInt::one());
    let mut k: BigInt = &a * &a - d;
    while !k.is_one() {
        let km = k.abs();
        // m ≡ −a b⁻¹ (mod |k|), m > 0, with |m² − D| as small as possible
        let mut best: Option<BigInt> = None;
        let mut m = if root > km { &root - &km } else { BigInt::one() };
        while m <= &root + &km {
            if (&a + &b * &m).is_multiple_of(&km) {
                let better = best.as_ref().is_none_or(|bm| (&m * &m - d).abs() < (bm * bm - d).abs());
                if better {
                    best = Some(m.clone());
                }
            }
            m += 1;
        }
        let m = best.expect("a residue exists because gcd(b, k) = 1");
        let na = (&a * &m + d * &b) / &km;
        let nb = (&a + &b * &m) / &km;
        let nk = (&m * &m - d) / &k;
        a = na.abs();
        b = nb.abs();
        k = nk;
    }
    (a, b)
}

/// Every `(x, y)` with `|x|, |y| ≤ bound` and `a x² + 2b x y + c y² = n`, sorted.
pub fn represent_brute(a: i64, b: i64, c: i64, n: i64, bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if a * x * x + 2 * b * x * y + c * y * y == n {
                out.push((x, y));
            }
        }
    }
    out
}

/// Integer vectors with all coordinates in `[-bound, bound]`.
pub fn box_vectors(rank: usize, bound: i64) -> Vec<IVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for v in &out {
            for x in -bound..=bound {
                let mut w = v.clone();
                w.push(BigInt::from(x));
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Primitive normals of nef walls meeting the cone spanned by `region`, from every class `a`
/// in the coordinate box: `a² ≥ −2`, `0 ≤ (v,a) ≤ v²/2`, `⟨v,a⟩` hyperbolic. Normals are
/// sign-normalized by the first nonzero coordinate.
pub fn nef_normals_brute(l: &Lattice, v: &[BigInt], region: &[QVec], bound: i64) -> Result<BTreeSet<IVec>> {
    let vv = l.sq(v);
    let mut out = BTreeSet::new();
    for a in box_vectors(l.rank(), bound) {
        let k = l.pair(v, &a);
        let sq = l.sq(&a);
        if k.is_negative() || k.clone() * 2 > vv || sq < BigInt::from(-2) || &vv * &sq >= &k * &k {
            continue;
        }
        let a0 = project_to_vperp(l, v, &a)?;
        let signs: Vec<BigRational> = region.iter().map(|d| l.pair_q(d, &a0)).collect();
        let meets = signs.iter().any(|s| !s.is_negative()) && signs.iter().any(|s| !s.is_positive());
        if meets {
            out.insert(sign_normalize(&primitive_on_ray(&a0)));
        }
    }
    Ok(out)
}

/// Partitions of `v` into positive classes, by naive recursion over a coordinate box.
pub fn partitions_brute(h: &WallLattice, bound: i64) -> BTreeSet<Vec<Point>> {
    let positive = |u: &Point| !h.form.eval(u).is_negative() && h.pair_v(u).is_positive();
    let mut pool = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let u = (BigInt::from(x), BigInt::from(y));
            if positive(&u) {
                pool.push(u);
            }
        }
    }
    pool.sort();
    let mut out = BTreeSet::new();
    fn rec(
        h: &WallLattice,
        pool: &[Point],
        rest: &Point,
        start: usize,
        cur: &mut Vec<Point>,
        out: &mut BTreeSet<Vec<Point>>,
    ) {
        if rest.0.is_zero() && rest.1.is_zero() {
            out.insert(PositivePartition::from_parts(cur.clone()).parts);
            return;
        }
        // a sum of positive classes is again positive
        if !(h.pair_v(rest).is_positive() && !h.form.eval(rest).is_negative()) {
            return;
        }
        for i in start..pool.len() {
            let u = &pool[i];
            let next = (&rest.0 - &u.0, &rest.1 - &u.1);
            cur.push(u.clone());
            rec(h, pool, &next, i, cur, out);
            cur.pop();
        }
    }
    rec(h, &pool, &h.v_coords, 0, &mut Vec::new(), &mut out);
    out
}

/// `Q = −2` solutions of a binary form inside a box, as points.
pub fn spherical_brute(q: &BinaryForm, bound: i64) -> Vec<Point> {
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let p = (BigInt::from(x), BigInt::from(y));
            if q.eval(&p) == BigInt::from(-2) {
                out.push(p);
            }
        }
    }
    out
}

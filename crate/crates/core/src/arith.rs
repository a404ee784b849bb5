//! Small exact-arithmetic helpers shared by the other modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer vector.
pub type IVec = Vec<BigInt>;
/// Rational vector.
pub type QVec = Vec<BigRational>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

/// Returns `Some(r)` with `r >= 0` and `r*r == n` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// Exact square root of a non-negative rational, if it exists.
pub fn rat_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = exact_sqrt(q.numer())?;
    let d = exact_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Floor of `sqrt(q)` for a non-negative rational.
pub fn rat_isqrt_floor(q: &BigRational) -> BigInt {
    assert!(!q.is_negative());
    // floor(sqrt(n/d)) = floor(sqrt(floor(n*d)) / d) computed as isqrt(n*d) / d rounded down
    let nd = q.numer() * q.denom();
    let mut r = isqrt(&nd).div_floor(q.denom());
    // guard against rounding in the two-step floor
    while BigRational::from_integer(&r + 1u32) * BigRational::from_integer(&r + 1u32) <= *q {
        r += 1u32;
    }
    while BigRational::from_integer(r.clone()) * BigRational::from_integer(r.clone()) > *q {
        r -= 1u32;
    }
    r
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    let mut g = BigInt::zero();
    for x in xs {
        g = g.gcd(x);
    }
    g
}

/// Divide a nonzero integer vector by the gcd of its entries.
pub fn primitive_part(v: &[BigInt]) -> IVec {
    let g = gcd_all(v.iter());
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_all(v.iter()).is_one()
}

/// Scale a rational vector to the primitive integer vector on the same ray.
pub fn primitive_on_ray(v: &[BigRational]) -> IVec {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let iv: IVec = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive_part(&iv)
}

pub fn to_qvec(v: &[BigInt]) -> QVec {
    v.iter().map(rat_int).collect()
}

/// Returns the integer vector if every entry of `v` is integral.
pub fn to_ivec(v: &[BigRational]) -> Option<IVec> {
    v.iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(k: &BigInt, a: &[BigInt]) -> IVec {
    a.iter().map(|x| k * x).collect()
}

pub fn neg(a: &[BigInt]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn max_norm(a: &[BigInt]) -> BigInt {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

pub fn qadd(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qsub(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qscale(k: &BigRational, a: &[BigRational]) -> QVec {
    a.iter().map(|x| k * x).collect()
}

/// 2x2 integer matrix stored row-major.
pub type Mat2 = [[BigInt; 2]; 2];

pub fn mat2(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
    [[int(a), int(b)], [int(c), int(d)]]
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [
            &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0],
            &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1],
        ],
        [
            &x[1][0] * &y[0][0] + &x[1][1] * &y[1][0],
            &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1],
        ],
    ]
}

pub fn mat2_apply(m: &Mat2, p: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    (&m[0][0] * &p.0 + &m[0][1] * &p.1, &m[1][0] * &p.0 + &m[1][1] * &p.1)
}

pub fn mat2_det(m: &Mat2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Inverse of a unimodular 2x2 matrix.
pub fn mat2_inv_unimodular(m: &Mat2) -> Mat2 {
    let det = mat2_det(m);
    assert!(det.abs().is_one(), "matrix is not unimodular");
    [
        [&m[1][1] * &det, -&m[0][1] * &det],
        [-&m[1][0] * &det, &m[0][0] * &det],
    ]
}

pub fn mat2_identity() -> Mat2 {
    mat2(1, 0, 0, 1)
}

/// Orientation of the pair (p, q): sign of the 2x2 determinant.
pub fn cross(p: &(BigInt, BigInt), q: &(BigInt, BigInt)) -> BigInt {
    &p.0 * &q.1 - &p.1 * &q.0
}

/// Total order of nonzero plane vectors by polar angle in [0, 2π).
pub fn angle_cmp(p: &(BigInt, BigInt), q: &(BigInt, BigInt)) -> std::cmp::Ordering {
    fn half(p: &(BigInt, BigInt)) -> u8 {
        // upper half: angle in [0, π)
        if p.1.is_positive() || (p.1.is_zero() && p.0.is_positive()) {
            0
        } else {
            1
        }
    }
    half(p).cmp(&half(q)).then_with(|| BigInt::zero().cmp(&cross(p, q)))
}

/// Normalize a nonzero vector so that its first nonzero entry is positive.
pub fn sign_normalize(v: &[BigInt]) -> IVec {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(v),
        _ => v.to_vec(),
    }
}

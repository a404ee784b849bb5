//! Picard-rank-one Hilbert schemes of points: closed forms for the movable and nef
//! boundaries and an exact wall table.
//!
//! The surface has `H² = 2d` and `v = (1, 0, 1 − n)`. Divisors on the moduli space
//! are written `H̃ − Γ B` with `H̃ = (0, −1, 0)` and `B = (−1, 0, 1 − n)`, which in Mukai
//! coordinates is the class `(Γ, −1, Γ(n − 1))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{exact_sqrt, int, ivec, max_norm, primitive_part, rat_isqrt_floor, IVec};
use crate::diophantine::{minimal_positive, pell_fundamental, BinaryForm};
use crate::error::{input, Error, Result};
use crate::lattice::Lattice;
use crate::wall::{classify, make_wall_lattice, TotallySemistable, WallKind};

#[derive(Debug, Clone)]
pub struct HilbSetup {
    pub d: BigInt,
    pub n: BigInt,
    pub lattice: Lattice,
    pub v: IVec,
    pub h_tilde: IVec,
    pub b: IVec,
}

impl HilbSetup {
    pub fn new(d: &BigInt, n: &BigInt) -> Result<Self> {
        if !d.is_positive() {
            return input(format!("hilbert scheme: d = {d} must be at least 1"));
        }
        if n < &int(2) {
            return input(format!("hilbert scheme: n = {n} must be at least 2"));
        }
        let lattice = Lattice::mukai_from_ns(&[vec![d * 2]])?;
        let one_minus_n = BigInt::one() - n;
        Ok(HilbSetup {
            d: d.clone(),
            n: n.clone(),
            lattice,
            v: vec![BigInt::one(), BigInt::zero(), one_minus_n.clone()],
            h_tilde: ivec(&[0, -1, 0]),
            b: vec![-BigInt::one(), BigInt::zero(), one_minus_n],
        })
    }

    fn n1(&self) -> BigInt {
        &self.n - 1
    }

    /// The class of `H̃ − Γ B` scaled to be integral and primitive.
    pub fn divisor(&self, gamma: &BigRational) -> IVec {
        let den = gamma.denom().clone();
        let num = gamma.numer().clone();
        primitive_part(&[num.clone(), -den, num * self.n1()])
    }

    /// The rational class `H̃ − Γ B = (Γ, −1, Γ(n − 1))`.
    pub fn ray(&self, gamma: &BigRational) -> Vec<BigRational> {
        vec![gamma.clone(), -BigRational::one(), gamma * BigRational::from_integer(self.n1())]
    }
}

/// Closed-form movable boundary. `case` follows the three-way split: square `d(n−1)`,
/// solvable `(n−1)X² − dY² = 1`, or the congruence-restricted Pell equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovableBoundary {
    pub case: u8,
    pub gamma: BigRational,
    /// Isotropic class (cases 1 and 3) or spherical class (case 2) orthogonal to the boundary.
    pub witness: IVec,
    /// The Diophantine solution behind the boundary, when there is one.
    pub solution: Option<(BigInt, BigInt)>,
    /// Divisorial wall type at the boundary; `None` when the boundary is a square-zero ray.
    pub kind: Option<WallKind>,
}

const PELL_POWER_CAP: usize = 100_000;

pub fn movable_hilb(d: &BigInt, n: &BigInt) -> Result<MovableBoundary> {
    let setup = HilbSetup::new(d, n)?;
    let n1 = setup.n1();
    let prod = d * &n1;
    if let Some(m) = exact_sqrt(&prod) {
        // d/(n−1) = (k/h)²
        let g = m.gcd(&n1);
        let (k, h) = (&m / &g, &n1 / &g);
        let witness = vec![k.clone(), -h.clone(), &k * &n1];
        return Ok(MovableBoundary {
            case: 1,
            gamma: BigRational::new(k, h),
            witness,
            solution: None,
            kind: None,
        });
    }
    let eq1 = BinaryForm::new(n1.clone(), BigInt::zero(), -d.clone());
    if let Some((x, y)) = minimal_positive(&eq1, &BigInt::one())? {
        let gamma = BigRational::new(d * &y, &x * &n1);
        let witness = vec![x.clone(), -y.clone(), &n1 * &x];
        return Ok(MovableBoundary {
            case: 2,
            gamma,
            witness,
            solution: Some((x, y)),
            kind: Some(WallKind::BrillNoether),
        });
    }
    let fund = pell_fundamental(&prod)?;
    let (x1, y1) = (fund.x.clone(), fund.y.clone());
    let (mut x, mut y) = (x1.clone(), y1.clone());
    for _ in 0..PELL_POWER_CAP {
        // X may be taken with either sign, so X ≡ ±1 mod (n − 1) both give a class.
        let w: Option<IVec> = if (&x + BigInt::one()).is_multiple_of(&n1) {
            Some(vec![(&x + 1) / &n1, -y.clone(), &x - 1])
        } else if (&x - BigInt::one()).is_multiple_of(&n1) {
            Some(vec![(BigInt::one() - &x) / &n1, y.clone(), -(&x + BigInt::one())])
        } else {
            None
        };
        if let Some(w) = w {
            let gamma = BigRational::new(d * &y, x.clone());
            let w = primitive_part(&w);
            let pairing = setup.lattice.pair(&w, &setup.v);
            let kind = Some(if pairing == BigInt::one() {
                WallKind::HilbertChow
            } else {
                WallKind::LiGiesekerUhlenbeck
            });
            return Ok(MovableBoundary { case: 3, gamma, witness: w, solution: Some((x, y)), kind });
        }
        let nx = &x * &x1 + &prod * &y * &y1;
        let ny = &x * &y1 + &y * &x1;
        x = nx;
        y = ny;
    }
    Err(Error::IterationLimit(format!("no Pell power with X ≡ −1 mod {n1}")))
}

/// Nef boundary for `n = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NefHilbN2 {
    /// `X² − 4dY² = 5` has no solution and the nef cone equals the movable cone.
    EqualsMovable,
    Gamma { gamma: BigRational, solution: (BigInt, BigInt), spherical: IVec },
}

pub fn nef_hilb_n2(d: &BigInt) -> Result<NefHilbN2> {
    HilbSetup::new(d, &int(2))?;
    let form = BinaryForm::new(BigInt::one(), BigInt::zero(), -(d * int(4)));
    match minimal_positive(&form, &int(5))? {
        None => Ok(NefHilbN2::EqualsMovable),
        Some((x, y)) => {
            let gamma = BigRational::new(d * &y * 2, x.clone());
            let spherical = vec![(&x + 1) / 2, -y.clone(), (&x - 1) / 2];
            Ok(NefHilbN2::Gamma { gamma, solution: (x, y), spherical })
        }
    }
}

/// The unique `Γ` with `(H̃ − Γ B, a) = 0`.
pub fn gamma_of_wall(setup: &HilbSetup, a: &[BigInt]) -> Result<BigRational> {
    let l = &setup.lattice;
    let vv = l.square(&setup.v)?;
    let aa = l.square(a)?;
    let va = l.pair(&setup.v, a);
    if &vv * &aa >= &va * &va {
        let det = &vv * &aa - &va * &va;
        return Err(Error::NotHyperbolic { det: det.to_string() });
    }
    // ((Γ, −1, Γ(n−1)), (r, c, s)) = −2dc − Γ (s + (n−1) r)
    let den = &a[2] + setup.n1() * &a[0];
    if den.is_zero() {
        return Err(Error::NoIntersection(format!(
            "the wall of {a:?} is parallel to the divisor family H̃ − ΓB"
        )));
    }
    Ok(BigRational::new(-(&setup.d * int(2) * &a[1]), den))
}

/// One wall of the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallRow {
    pub gamma: BigRational,
    pub a: IVec,
    pub a_square: BigInt,
    pub pairing: BigInt,
    pub kind: WallKind,
    pub totally_semistable: TotallySemistable,
    pub label: String,
}

/// Every wall `H̃ − ΓB` with `0 ≤ Γ ≤ Γ_mov`, sorted by `Γ`.
///
/// A wall comes from a class `a = (r, c, t)` with `a² = m ≥ −2` and `0 ≤ k = (v, a)`. Walls
/// with `k > v²/2 + 1` are never needed: such classes are reflections of ones with smaller
/// pairing on the same hyperplane. With `X = 2(n−1)r − k` the conditions become
/// `X² − 4d(n−1)c² = k² − 2(n−1)m =: N` and `Γ = −2dc/X`, and hyperbolicity is `N > 0`.
/// Substituting `c = −ΓX/(2d)` gives `X²(1 − (n−1)Γ²/d) = N`, which bounds `|X|` on the
/// range of `Γ` (or, for square `d(n−1)`, the factorization `(X − sc)(X + sc) = N` does).
pub fn walls_table(d: &BigInt, n: &BigInt) -> Result<Vec<WallRow>> {
    let setup = HilbSetup::new(d, n)?;
    let mov = movable_hilb(d, n)?;
    let gamma_end = mov.gamma.clone();
    let n1 = setup.n1();
    let vv = &n1 * 2;
    let kmax: BigInt = &vv / 2 + 1;
    let four_dn = d * &n1 * 4;
    let square_case = exact_sqrt(&(d * &n1)).is_some();
    let shrink = BigRational::one()
        - BigRational::from_integer(n1.clone()) * &gamma_end * &gamma_end
            / BigRational::from_integer(d.clone());

    let mut groups: BTreeMap<BigRational, Vec<IVec>> = BTreeMap::new();
    let mut k = BigInt::zero();
    while k <= kmax {
        let mut m = int(-2);
        // v² m < k²
        while &vv * &m < &k * &k {
            let big_n: BigInt = &k * &k - &n1 * 2 * &m;
            let xmax = if square_case || !shrink.is_positive() {
                (&big_n + 1) / 2
            } else {
                rat_isqrt_floor(&(BigRational::from_integer(big_n.clone()) / &shrink))
            };
            let modulus = &n1 * 2;
            // X ≡ −k (mod 2(n−1)), |X| ≤ xmax
            let mut x = -&xmax + (-&k - -&xmax).mod_floor(&modulus);
            while x <= xmax {
                let rem = &x * &x - &big_n;
                if !x.is_zero() && !rem.is_negative() && rem.is_multiple_of(&four_dn) {
                    if let Some(c_abs) = exact_sqrt(&(&rem / &four_dn)) {
                        for c in [c_abs.clone(), -c_abs.clone()] {
                            let gamma = BigRational::new(-(d * int(2) * &c), x.clone());
                            if !gamma.is_negative() && gamma <= gamma_end {
                                let r = (&x + &k) / &modulus;
                                let t = &n1 * &r - &k;
                                let a = vec![r, c.clone(), t];
                                debug_assert_eq!(setup.lattice.sq(&a), m);
                                groups.entry(gamma).or_default().push(a);
                            }
                            if c_abs.is_zero() {
                                break;
                            }
                        }
                    }
                }
                x += &modulus;
            }
            m += 2;
        }
        k += 1;
    }

    let mut rows = Vec::new();
    for (gamma, mut cands) in groups {
        // Prefer witnesses with (v, a) ≤ v²/2, then the smallest max-norm, then the
        // smallest pairing, then the lexicographically largest coordinates.
        let half = &vv / 2;
        let k_of = |a: &IVec| setup.lattice.pair(&setup.v, a);
        cands.sort_by(|a, b| {
            let (ka, kb) = (k_of(a), k_of(b));
            (ka > half)
                .cmp(&(kb > half))
                .then_with(|| max_norm(a).cmp(&max_norm(b)))
                .then_with(|| ka.cmp(&kb))
                .then_with(|| b.cmp(a))
        });
        let a = cands.swap_remove(0);
        let h = make_wall_lattice(&setup.lattice, &setup.v, &a)?;
        let c = classify(&h)?;
        let label = c.label();
        if label == "not a wall" {
            continue;
        }
        rows.push(WallRow {
            gamma,
            a_square: setup.lattice.sq(&a),
            pairing: setup.lattice.pair(&setup.v, &a),
            a,
            kind: c.kind,
            totally_semistable: c.totally_semistable,
            label: label.to_string(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn b(x: i64) -> BigInt {
        int(x)
    }

    #[test]
    fn movable_cases() {
        for n in 3..12 {
            let m = movable_hilb(&b(n - 2), &b(n)).unwrap();
            assert_eq!(m.case, 2);
            assert_eq!(m.gamma, rat(n - 2, n - 1));
        }
        let m = movable_hilb(&b(1), &b(7)).unwrap();
        assert_eq!((m.case, m.gamma.clone()), (3, rat(2, 5)));
        assert_eq!(m.witness, ivec(&[1, -2, 4]));
        assert_eq!(m.kind, Some(WallKind::LiGiesekerUhlenbeck));
        let m = movable_hilb(&b(4), &b(2)).unwrap();
        assert_eq!((m.case, m.gamma.clone()), (1, rat(2, 1)));
        let s = HilbSetup::new(&b(4), &b(2)).unwrap();
        let dvec = s.divisor(&m.gamma);
        assert_eq!(s.lattice.sq(&dvec), b(0));
        let m = movable_hilb(&b(31), &b(2)).unwrap();
        assert_eq!((m.case, m.gamma), (2, rat(8463, 1520)));
    }

    #[test]
    fn case_two_witness_is_spherical_in_vperp() {
        for (d, n) in [(2, 3), (3, 5), (5, 4), (7, 9)] {
            let m = movable_hilb(&b(d), &b(n)).unwrap();
            let s = HilbSetup::new(&b(d), &b(n)).unwrap();
            if m.case == 2 {
                assert_eq!(s.lattice.sq(&m.witness), b(-2));
                assert_eq!(s.lattice.pair(&m.witness, &s.v), b(0));
            }
            assert_eq!(s.lattice.pair(&s.divisor(&m.gamma), &m.witness), b(0));
        }
    }

    #[test]
    fn nef_n2() {
        match nef_hilb_n2(&b(31)).unwrap() {
            NefHilbN2::Gamma { gamma, solution, spherical } => {
                assert_eq!(gamma, rat(3658, 657));
                assert_eq!(solution, (b(657), b(59)));
                assert_eq!(spherical, ivec(&[329, -59, 328]));
                let s = HilbSetup::new(&b(31), &b(2)).unwrap();
                assert_eq!(s.lattice.pair(&s.divisor(&gamma), &spherical), b(0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(nef_hilb_n2(&b(2)).unwrap(), NefHilbN2::EqualsMovable);
        match nef_hilb_n2(&b(1)).unwrap() {
            NefHilbN2::Gamma { gamma, .. } => assert_eq!(gamma, rat(2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_examples() {
        let s = HilbSetup::new(&b(1), &b(7)).unwrap();
        assert_eq!(gamma_of_wall(&s, &ivec(&[1, -1, 2])).unwrap(), rat(1, 4));
        assert_eq!(gamma_of_wall(&s, &ivec(&[2, -3, 5])).unwrap(), rat(6, 17));
        assert_eq!(gamma_of_wall(&s, &ivec(&[-1, 3, -10])).unwrap(), rat(3, 8));
        assert_eq!(gamma_of_wall(&s, &ivec(&[1, 0, 6])).unwrap(), rat(0, 1));
        // a parallel wall would need a positive definite plane inside v⊥ + span(v)
        assert!(matches!(
            gamma_of_wall(&s, &ivec(&[1, 1, -6])),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn table_d1_n7() {
        let rows = walls_table(&b(1), &b(7)).unwrap();
        let expected = [
            (rat(0, 1), [0, 0, -1], 0, 1, "divisorial contraction"),
            (rat(1, 4), [1, -1, 2], -2, 4, "flop"),
            (rat(2, 7), [1, -1, 1], 0, 5, "flop"),
            (rat(1, 3), [1, -1, 0], 2, 6, "flop"),
            (rat(6, 17), [2, -3, 5], -2, 7, "fake wall"),
            (rat(4, 11), [1, -2, 5], -2, 1, "flop"),
            (rat(3, 8), [-1, 3, -10], -2, 4, "flop"),
            (rat(2, 5), [1, -2, 4], 0, 2, "divisorial contraction"),
        ];
        assert_eq!(rows.len(), expected.len(), "{rows:#?}");
        for (row, (g, a, sq, k, label)) in rows.iter().zip(expected) {
            assert_eq!(row.gamma, g);
            assert_eq!(row.a, ivec(&a));
            assert_eq!(row.a_square, b(sq));
            assert_eq!(row.pairing, b(k));
            assert_eq!(row.label, label);
        }
    }

    #[test]
    fn table_d31_n2() {
        let rows = walls_table(&b(31), &b(2)).unwrap();
        let gammas: Vec<BigRational> = rows.iter().map(|r| r.gamma.clone()).collect();
        assert_eq!(gammas, vec![rat(0, 1), rat(217, 39), rat(3658, 657), rat(8463, 1520)]);
        assert_eq!(rows[0].label, "divisorial contraction");
        assert_eq!(rows[1].label, "fake wall");
        assert_eq!(rows[2].a, ivec(&[329, -59, 328]));
        assert_eq!(rows[2].label, "flop");
        assert_eq!(rows[3].kind, WallKind::BrillNoether);
    }

    #[test]
    fn table_rows_reverify() {
        for (d, n) in [(1, 2), (1, 3), (2, 3), (1, 7), (3, 4)] {
            let s = HilbSetup::new(&b(d), &b(n)).unwrap();
            for row in walls_table(&b(d), &b(n)).unwrap() {
                assert_eq!(gamma_of_wall(&s, &row.a).unwrap(), row.gamma);
                assert_eq!(s.lattice.pair(&s.v, &row.a), row.pairing);
                assert!(row.a_square >= b(-2));
                let h = make_wall_lattice(&s.lattice, &s.v, &row.a).unwrap();
                assert_eq!(classify(&h).unwrap().label(), row.label);
            }
        }
    }
}

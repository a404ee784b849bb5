use k3walls::arith::{int, ivec, IVec};
use k3walls::lattice::{elementary_divisors, hermite_rows, signature_of, Lattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn sym_gram(rank: usize) -> impl Strategy<Value = Vec<IVec>> {
    proptest::collection::vec(-6i64..=6, rank * rank).prop_map(move |raw| {
        let mut g = vec![vec![BigInt::zero(); rank]; rank];
        for i in 0..rank {
            for j in 0..=i {
                let x = if i == j { 2 * raw[i * rank + j] } else { raw[i * rank + j] };
                g[i][j] = int(x);
                g[j][i] = int(x);
            }
        }
        g
    })
}

fn vector(rank: usize) -> impl Strategy<Value = IVec> {
    proptest::collection::vec(-9i64..=9, rank).prop_map(|v| ivec(&v))
}

/// Random unimodular matrix as a product of elementary row operations.
fn unimodular(rank: usize) -> impl Strategy<Value = Vec<IVec>> {
    proptest::collection::vec((0..rank, 0..rank, -2i64..=2), 0..8).prop_map(move |ops| {
        let mut m: Vec<IVec> =
            (0..rank).map(|i| (0..rank).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        for (i, j, t) in ops {
            if i != j {
                let row = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x += y * int(t);
                }
            } else {
                m.swap(i, (i + 1) % rank);
            }
        }
        m
    })
}

fn mat_mul(a: &[IVec], b: &[IVec]) -> Vec<IVec> {
    let n = b[0].len();
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect())
        .collect()
}

fn transpose(a: &[IVec]) -> Vec<IVec> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairing_is_symmetric_bilinear_and_even(
        (g, u, w, x) in (2usize..=5).prop_flat_map(|r| (sym_gram(r), vector(r), vector(r), vector(r))),
        k in -5i64..=5,
    ) {
        let l = Lattice::new(g, None, true).unwrap();
        prop_assert_eq!(l.pair(&u, &w), l.pair(&w, &u));
        prop_assert_eq!(l.pair(&add(&u, &w), &x), l.pair(&u, &x) + l.pair(&w, &x));
        let ku: IVec = u.iter().map(|c| c * int(k)).collect();
        prop_assert_eq!(l.pair(&ku, &x), l.pair(&u, &x) * int(k));
        prop_assert!(l.sq(&u).is_even());
    }

    #[test]
    fn signature_is_a_congruence_invariant(
        (g, m) in (2usize..=5).prop_flat_map(|r| (sym_gram(r), unimodular(r))),
    ) {
        let g2 = mat_mul(&mat_mul(&m, &g), &transpose(&m));
        prop_assert_eq!(signature_of(&g), signature_of(&g2));
    }

    #[test]
    fn saturation_is_primitive_and_idempotent(
        (g, vs) in (2usize..=5).prop_flat_map(|r| (sym_gram(r), proptest::collection::vec(vector(r), 1..4))),
    ) {
        let l = Lattice::new(g, None, true).unwrap();
        prop_assume!(vs.iter().any(|v| v.iter().any(|c| !c.is_zero())));
        let s = l.saturate(&vs).unwrap();
        // a primitive sublattice has trivial elementary divisors
        prop_assert!(elementary_divisors(&s.basis).iter().all(|d| d.is_one()));
        for v in &vs {
            prop_assert!(s.coords_of(v).is_some());
        }
        let again = l.saturate(&s.basis).unwrap();
        prop_assert_eq!(hermite_rows(&again.basis), hermite_rows(&s.basis));
        prop_assert_eq!(s.restricted_gram, l.gram_of(&s.basis));
    }

    #[test]
    fn orthogonal_complement_is_saturated(
        (g, v) in (2usize..=5).prop_flat_map(|r| (sym_gram(r), vector(r))),
    ) {
        let l = Lattice::new(g, None, true).unwrap();
        let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        prop_assume!(content.is_one());
        let perp = l.vperp_basis(&v).unwrap();
        for b in &perp.basis {
            prop_assert!(l.pair(b, &v).is_zero());
        }
        let nondegenerate = (0..l.rank()).any(|i| !l.pair(&v, &unit(l.rank(), i)).is_zero());
        prop_assert_eq!(perp.rank(), if nondegenerate { l.rank() - 1 } else { l.rank() });
        prop_assert!(elementary_divisors(&perp.basis).iter().all(|d| d.is_one()));
    }

    #[test]
    fn reflection_is_an_isometric_involution(d in 1i64..=12, c in -6i64..=6, u in vector(3), w in vector(3)) {
        let l = Lattice::mukai_from_ns(&[ivec(&[2 * d])]).unwrap();
        let s = ivec(&[1, c, d * c * c + 1]);
        prop_assert_eq!(l.sq(&s), int(-2));
        let ru = l.reflect(&s, &u).unwrap();
        let rw = l.reflect(&s, &w).unwrap();
        prop_assert_eq!(l.reflect(&s, &ru).unwrap(), u.clone());
        prop_assert_eq!(l.pair(&ru, &rw), l.pair(&u, &w));
        let rs = l.reflect(&s, &s).unwrap();
        prop_assert_eq!(rs, s.iter().map(|x| -x).collect::<IVec>());
    }
}

fn unit(n: usize, i: usize) -> IVec {
    (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

#[test]
fn reflection_rejects_non_spherical_classes() {
    let l = Lattice::mukai_from_ns(&[ivec(&[2])]).unwrap();
    assert!(l.reflect(&ivec(&[1, 0, 0]), &ivec(&[0, 1, 0])).is_err());
}

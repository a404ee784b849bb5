//! Nef, movable, Mori and effective cones of `M(v)`, computed inside `v⊥`.
//!
//! Divisor classes on the moduli space are identified with rational classes of the
//! ambient lattice orthogonal to `v`, and curve classes with the orthogonal projection
//! to `v⊥`. Walls accumulate towards the boundary of the positive cone, so wall searches
//! are complete only inside a [`SearchRegion`] that stays strictly inside it.
//!
//! Every search enumerates integer classes `a` in an ellipsoid of the positive definite
//! form `P(x) = 2(x,A)²/A² − x² + 2(x,v)²/v²`, where `A` is the reference ample class.
//! `P` is positive definite because `span{A, v}` is a positive plane and its complement
//! is negative definite. The radius comes from the reverse Cauchy–Schwarz inequality:
//! if `a₀ = a − ((v,a)/v²)·v` is orthogonal to a class `D` of the region, then
//! `(a₀, A)² ≤ −a₀² · ((A,D)²/D² − A²)`, and the last factor is at most
//! `K = maxᵢ (A,Dᵢ)²/Dᵢ² − A²` over the region's rays `Dᵢ`.
//!
//! Near the boundary of the positive cone `K` blows up, so wall searches first cut the
//! region into pieces of bounded hyperbolic diameter and use a majorant centred in each
//! piece. The union of the pieces is the original region.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    is_primitive, max_norm, primitive_on_ray, qscale, qsub, rat_int, sign_normalize, to_ivec, to_qvec,
    IVec, QVec,
};
use crate::diophantine::{isotropic_primitive, BinaryForm};
use crate::error::{input, Error, Result};
use crate::lattice::{short_vectors, Lattice, Sublattice};
use crate::wall::{classify, make_wall_lattice, TotallySemistable, WallKind};

/// Finitely many rational classes of `v⊥` spanning a closed subcone of the positive cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRegion {
    pub rays: Vec<QVec>,
}

impl SearchRegion {
    pub fn new(rays: Vec<QVec>) -> Self {
        SearchRegion { rays }
    }

    pub fn from_integer_rays(rays: &[IVec]) -> Self {
        SearchRegion { rays: rays.iter().map(|r| to_qvec(r)).collect() }
    }
}

/// A wall hyperplane `a⊥ ∩ v⊥` together with the class that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeWall {
    /// Primitive integral normal in `v⊥`, signed to pair positively with the ample class.
    pub normal: IVec,
    pub witness: IVec,
    pub witness_square: BigInt,
    pub witness_pairing: BigInt,
    pub kind: WallKind,
    pub totally_semistable: TotallySemistable,
    /// Position along a two-ray region, `0` at the first ray and `1` at the second.
    pub position: Option<BigRational>,
}

/// A generator of the effective or Mori cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeGenerator {
    /// The class itself: `θ(s)`, `θ(v²w − (v,w)v)`, or the projection of `a` for curves.
    pub class: QVec,
    /// Primitive integral vector on the same ray.
    pub ray: IVec,
    pub witness: IVec,
    pub witness_square: BigInt,
    pub witness_pairing: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDescription {
    /// `v⊥` with its restricted form.
    pub ambient: Sublattice,
    pub walls: Vec<ConeWall>,
    pub generators: Vec<ConeGenerator>,
    /// Whether the (closed) positive cone is part of the generating set.
    pub includes_positive_cone: bool,
    /// Description of the enumeration bound, for verbose output.
    pub bound_trace: String,
}

/// Pairs of a rational class with an integral one.
fn pair_qi(l: &Lattice, u: &[BigRational], w: &[BigInt]) -> BigRational {
    l.pair_q(u, &to_qvec(w))
}

/// `a − ((v,a)/v²)·v`.
pub fn project_to_vperp(l: &Lattice, v: &[BigInt], a: &[BigInt]) -> Result<QVec> {
    let vv = l.square(v)?;
    if !vv.is_positive() {
        return input("project_to_vperp: v² must be positive");
    }
    let k = l.pairing(v, a)?;
    let coeff = BigRational::new(k, vv);
    Ok(qsub(&to_qvec(a), &qscale(&coeff, &to_qvec(v))))
}

fn check_v(l: &Lattice, v: &[BigInt]) -> Result<BigInt> {
    let vv = l.square(v)?;
    if !vv.is_positive() {
        return input(format!("v² = {vv} must be positive"));
    }
    if !is_primitive(v) {
        return input("v must be primitive");
    }
    Ok(vv)
}

fn check_signature(l: &Lattice) -> Result<()> {
    let sig = l.signature();
    if sig.n_plus != 2 || sig.n_zero != 0 {
        return input(format!(
            "cone computations need a nondegenerate lattice with exactly two positive directions, got ({}, {}, {})",
            sig.n_plus, sig.n_minus, sig.n_zero
        ));
    }
    Ok(())
}

fn check_ample(l: &Lattice, v: &[BigInt], ample: &[BigRational]) -> Result<BigRational> {
    if ample.len() != l.rank() {
        return input("ample class has the wrong length");
    }
    if !l.pair_q(ample, &to_qvec(v)).is_zero() {
        return input("ample class must lie in v⊥");
    }
    let aa = l.pair_q(ample, ample);
    if !aa.is_positive() {
        return input("ample class must have positive square");
    }
    Ok(aa)
}

fn check_region(l: &Lattice, v: &[BigInt], region: &SearchRegion, ample: &[BigRational]) -> Result<()> {
    if region.rays.is_empty() {
        return input("search region has no rays");
    }
    let vq = to_qvec(v);
    for r in &region.rays {
        if r.len() != l.rank() {
            return input("search region ray has the wrong length");
        }
        if !l.pair_q(r, &vq).is_zero() {
            return input("search region rays must lie in v⊥");
        }
        if !l.pair_q(r, r).is_positive() || !l.pair_q(r, ample).is_positive() {
            return input("search region is not strictly inside the positive cone");
        }
    }
    Ok(())
}

/// The majorant `P` as a rational Gram matrix.
fn majorant(l: &Lattice, v: &[BigInt], ample: &[BigRational], aa: &BigRational, vv: &BigInt) -> Vec<Vec<BigRational>> {
    let r = l.rank();
    let ga: QVec = (0..r)
        .map(|i| {
            let mut acc = BigRational::zero();
            for (j, aj) in ample.iter().enumerate() {
                acc += aj * rat_int(&l.gram()[i][j]);
            }
            acc
        })
        .collect();
    let gv: QVec = to_qvec(&l.dual_of(v));
    let two = BigRational::from_integer(BigInt::from(2));
    let vvq = rat_int(vv);
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    &two * &ga[i] * &ga[j] / aa - rat_int(&l.gram()[i][j]) + &two * &gv[i] * &gv[j] / &vvq
                })
                .collect()
        })
        .collect()
}

fn region_spread(l: &Lattice, rays: &[QVec], center: &[BigRational], cc: &BigRational) -> BigRational {
    let mut k = BigRational::zero();
    for d in rays {
        let ad = l.pair_q(center, d);
        let val = &ad * &ad / l.pair_q(d, d);
        if val > k {
            k = val;
        }
    }
    let k = k - cc;
    if k.is_negative() {
        BigRational::zero()
    } else {
        k
    }
}

const MAX_PIECES: usize = 1 << 16;

/// Splits the region into cones whose rays are pairwise within hyperbolic distance
/// `arccosh 2`, bisecting the longest edge. Rays are first scaled so `(A, D) = 1`.
fn subdivide(l: &Lattice, region: &SearchRegion, ample: &[BigRational]) -> Result<Vec<Vec<QVec>>> {
    let normalized: Vec<QVec> = region
        .rays
        .iter()
        .map(|d| qscale(&(BigRational::one() / l.pair_q(ample, d)), d))
        .collect();
    let four = BigRational::from_integer(BigInt::from(4));
    let mut todo = vec![normalized];
    let mut done = Vec::new();
    while let Some(piece) = todo.pop() {
        if done.len() + todo.len() > MAX_PIECES {
            return Err(Error::IterationLimit("search region subdivision is too fine".into()));
        }
        let mut worst: Option<(BigRational, usize, usize)> = None;
        for i in 0..piece.len() {
            for j in i + 1..piece.len() {
                let dij = l.pair_q(&piece[i], &piece[j]);
                let ratio = &dij * &dij / (l.pair_q(&piece[i], &piece[i]) * l.pair_q(&piece[j], &piece[j]));
                if ratio > four && worst.as_ref().is_none_or(|w| ratio > w.0) {
                    worst = Some((ratio, i, j));
                }
            }
        }
        match worst {
            None => done.push(piece),
            Some((_, i, j)) => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let mid: QVec = piece[i].iter().zip(&piece[j]).map(|(x, y)| (x + y) * &half).collect();
                let mut left = piece.clone();
                left[j] = mid.clone();
                let mut right = piece;
                right[i] = mid;
                todo.push(left);
                todo.push(right);
            }
        }
    }
    Ok(done)
}

/// Classes `a` with `a² ≥ −2`, `0 ≤ (v,a) ≤ k_max`, hyperbolic with `v`, whose
/// hyperplane meets the region.
struct Candidate {
    a: IVec,
    a0: QVec,
    k: BigInt,
}

fn wall_candidates(
    l: &Lattice,
    v: &[BigInt],
    region: &SearchRegion,
    ample: &[BigRational],
    k_max: &BigInt,
    keep: impl Fn(&BigInt, &BigInt) -> bool,
) -> Result<(Vec<Candidate>, String)> {
    let vv = check_v(l, v)?;
    check_signature(l)?;
    check_ample(l, v, ample)?;
    check_region(l, v, region, ample)?;
    let vvq = rat_int(&vv);
    let kq = rat_int(k_max);
    let two = BigRational::from_integer(BigInt::from(2));
    // −a₀² ≤ 2 + k²/v²
    let c = &two + &kq * &kq / &vvq;
    let pieces = subdivide(l, region, ample)?;
    let mut seen: BTreeMap<IVec, ()> = BTreeMap::new();
    let mut scanned = 0usize;
    let mut max_bound = BigRational::zero();
    let mut out = Vec::new();
    for piece in &pieces {
        let mut center: QVec = vec![BigRational::zero(); l.rank()];
        for d in piece {
            center = center.iter().zip(d).map(|(x, y)| x + y).collect();
        }
        let cc = l.pair_q(&center, &center);
        let spread = region_spread(l, piece, &center, &cc);
        let bound = &two * &c * &spread / &cc + &two + &two * &kq * &kq / &vvq;
        if bound > max_bound {
            max_bound = bound.clone();
        }
        let p = majorant(l, v, &center, &cc, &vv);
        let pts = short_vectors(&p, &bound)?;
        scanned += pts.len();
        for a in pts {
            if seen.contains_key(&a) {
                continue;
            }
            let k = l.pair(v, &a);
            let sq = l.sq(&a);
            if k.is_negative() || &k > k_max || sq < BigInt::from(-2) || !keep(&sq, &k) {
                continue;
            }
            // hyperbolic: v² a² < (v,a)²
            if &vv * &sq >= &k * &k {
                continue;
            }
            let a0 = project_to_vperp(l, v, &a)?;
            let mut pos = false;
            let mut negs = false;
            for d in &region.rays {
                let s = l.pair_q(d, &a0);
                if !s.is_negative() {
                    pos = true;
                }
                if !s.is_positive() {
                    negs = true;
                }
            }
            if pos && negs {
                seen.insert(a.clone(), ());
                out.push(Candidate { a, a0, k });
            }
        }
    }
    let trace = format!(
        "P(x) = 2(x,A')²/A'² − x² + 2(x,v)²/v² per piece, {} region pieces, −a₀² ≤ {c}, largest radius P(a) ≤ {max_bound}, {scanned} lattice points scanned",
        pieces.len()
    );
    Ok((out, trace))
}

fn oriented_normal(l: &Lattice, a0: &[BigRational], ample: &[BigRational]) -> IVec {
    let n = primitive_on_ray(a0);
    let s = pair_qi(l, ample, &n);
    if s.is_positive() {
        n
    } else if s.is_negative() {
        n.iter().map(|x| -x).collect()
    } else {
        sign_normalize(&n)
    }
}

fn witness_order(a: &Candidate, b: &Candidate) -> std::cmp::Ordering {
    max_norm(&a.a)
        .cmp(&max_norm(&b.a))
        .then_with(|| a.k.cmp(&b.k))
        .then_with(|| b.a.cmp(&a.a))
}

fn position_on_region(l: &Lattice, region: &SearchRegion, normal: &[BigInt]) -> Option<BigRational> {
    if region.rays.len() != 2 {
        return None;
    }
    let (d1, d2) = (&region.rays[0], &region.rays[1]);
    let mut alpha = pair_qi(l, d2, normal);
    let mut beta = -pair_qi(l, d1, normal);
    let total = &alpha + &beta;
    if total.is_zero() {
        return None;
    }
    if total.is_negative() {
        alpha = -alpha;
        beta = -beta;
    }
    Some(&beta / (&alpha + &beta))
}

fn group_walls(
    l: &Lattice,
    v: &[BigInt],
    region: &SearchRegion,
    ample: &[BigRational],
    cands: Vec<Candidate>,
) -> Result<Vec<ConeWall>> {
    let mut groups: BTreeMap<IVec, Vec<Candidate>> = BTreeMap::new();
    for c in cands {
        let n = oriented_normal(l, &c.a0, ample);
        groups.entry(n).or_default().push(c);
    }
    let mut walls = Vec::new();
    for (normal, mut cs) in groups {
        cs.sort_by(witness_order);
        let w = &cs[0];
        let h = make_wall_lattice(l, v, &w.a)?;
        let cl = classify(&h)?;
        walls.push(ConeWall {
            position: position_on_region(l, region, &normal),
            normal,
            witness: w.a.clone(),
            witness_square: l.sq(&w.a),
            witness_pairing: w.k.clone(),
            kind: cl.kind,
            totally_semistable: cl.totally_semistable,
        });
    }
    walls.sort_by(|a, b| a.position.cmp(&b.position).then_with(|| a.normal.cmp(&b.normal)));
    Ok(walls)
}

/// All walls of the nef cone meeting `region`: hyperplanes `a⊥ ∩ v⊥` for integral `a`
/// with `a² ≥ −2` and `0 ≤ (v,a) ≤ v²/2`.
pub fn nef_walls(l: &Lattice, v: &[BigInt], region: &SearchRegion, ample: &[BigRational]) -> Result<ConeDescription> {
    let vv = check_v(l, v)?;
    let half = &vv / 2;
    let (cands, trace) = wall_candidates(l, v, region, ample, &half, |_, _| true)?;
    let walls = group_walls(l, v, region, ample, cands)?;
    Ok(ConeDescription {
        ambient: l.vperp_basis(v)?,
        walls,
        generators: Vec::new(),
        includes_positive_cone: false,
        bound_trace: trace,
    })
}

/// Walls of the movable cone meeting `region`: spherical classes in `v⊥` and isotropic
/// classes `w` with `(w,v) ∈ {1, 2}`.
pub fn movable_walls(l: &Lattice, v: &[BigInt], region: &SearchRegion, ample: &[BigRational]) -> Result<ConeDescription> {
    let two = BigInt::from(2);
    let keep = |sq: &BigInt, k: &BigInt| {
        (sq == &BigInt::from(-2) && k.is_zero()) || (sq.is_zero() && (k.is_one() || k == &BigInt::from(2)))
    };
    let (cands, trace) = wall_candidates(l, v, region, ample, &two, keep)?;
    let walls = group_walls(l, v, region, ample, cands)?;
    Ok(ConeDescription {
        ambient: l.vperp_basis(v)?,
        walls,
        generators: Vec::new(),
        includes_positive_cone: false,
        bound_trace: trace,
    })
}

/// Curve classes generating the Mori cone together with the positive curves: the
/// projections of the classes `a` defining nef walls that meet `region`, signed to be
/// positive on the ample class.
pub fn mori_generators(
    l: &Lattice,
    v: &[BigInt],
    region: &SearchRegion,
    ample: &[BigRational],
) -> Result<ConeDescription> {
    let vv = check_v(l, v)?;
    let half = &vv / 2;
    let (cands, trace) = wall_candidates(l, v, region, ample, &half, |_, _| true)?;
    let mut groups: BTreeMap<IVec, Vec<Candidate>> = BTreeMap::new();
    for c in cands {
        groups.entry(oriented_normal(l, &c.a0, ample)).or_default().push(c);
    }
    let mut generators = Vec::new();
    for (ray, mut cs) in groups {
        cs.sort_by(witness_order);
        let c = &cs[0];
        let flip = l.pair_q(&c.a0, ample).is_negative();
        let class = if flip { c.a0.iter().map(|x| -x).collect() } else { c.a0.clone() };
        let witness: IVec = if flip { c.a.iter().map(|x| -x).collect() } else { c.a.clone() };
        generators.push(ConeGenerator {
            class,
            ray,
            witness_square: l.sq(&witness),
            witness_pairing: l.pair(v, &witness),
            witness,
        });
    }
    Ok(ConeDescription {
        ambient: l.vperp_basis(v)?,
        walls: Vec::new(),
        generators,
        includes_positive_cone: true,
        bound_trace: trace,
    })
}

/// Every class `a` behind an exceptional divisor of ample degree in `(0, max_degree]`:
/// spherical `a ∈ v⊥` with `D = a`, and isotropic `a` with `(a,v) ∈ {1, 2}` and
/// `D = v²a − (v,a)v`. Each entry carries `D` as `class`. Sorted by ray, then witness.
pub fn divisorial_witnesses(
    l: &Lattice,
    v: &[BigInt],
    ample: &[BigRational],
    max_degree: &BigRational,
) -> Result<(Vec<ConeGenerator>, String)> {
    let vv = check_v(l, v)?;
    check_signature(l)?;
    let aa = check_ample(l, v, ample)?;
    let vvq = rat_int(&vv);
    let two = BigRational::from_integer(BigInt::from(2));
    // spherical: P(s) = 2(s,A)²/A² + 2; isotropic: (w₀,A) ≤ T/v², P(w) ≤ 2T²/(v⁴A²) + 8/v²
    let t = max_degree;
    let b_sph = &two * t * t / &aa + &two;
    let b_iso = &two * t * t / (&vvq * &vvq * &aa) + BigRational::from_integer(BigInt::from(8)) / &vvq;
    let bound = if b_sph > b_iso { b_sph } else { b_iso };
    let p = majorant(l, v, ample, &aa, &vv);
    let pts = short_vectors(&p, &bound)?;
    let trace = format!("P(x) ≤ {bound} for ample degree ≤ {t}, {} lattice points scanned", pts.len());
    let mut out = Vec::new();
    for a in pts {
        let k = l.pair(v, &a);
        let sq = l.sq(&a);
        let class: IVec = if sq == BigInt::from(-2) && k.is_zero() {
            a.clone()
        } else if sq.is_zero() && (k.is_one() || k == BigInt::from(2)) {
            a.iter().zip(v).map(|(ai, vi)| &vv * ai - &k * vi).collect()
        } else {
            continue;
        };
        let deg = pair_qi(l, ample, &class);
        if !deg.is_positive() || &deg > max_degree {
            continue;
        }
        out.push(ConeGenerator {
            ray: primitive_on_ray(&to_qvec(&class)),
            class: to_qvec(&class),
            witness_square: sq,
            witness_pairing: k,
            witness: a,
        });
    }
    out.sort_by(|x, y| x.ray.cmp(&y.ray).then_with(|| x.witness.cmp(&y.witness)));
    Ok((out, trace))
}

/// Exceptional generators of the effective cone with `0 < (D, A) ≤ max_degree`, one per
/// ray, each with the witness of smallest coordinates. Every exceptional divisor of ample
/// degree at most `max_degree` is listed.
pub fn effective_generators(
    l: &Lattice,
    v: &[BigInt],
    ample: &[BigRational],
    max_degree: &BigRational,
) -> Result<ConeDescription> {
    let (all, trace) = divisorial_witnesses(l, v, ample, max_degree)?;
    let mut by_ray: BTreeMap<IVec, ConeGenerator> = BTreeMap::new();
    for candidate in all {
        match by_ray.get(&candidate.ray) {
            Some(old) if max_norm(&old.witness) <= max_norm(&candidate.witness) => {}
            _ => {
                by_ray.insert(candidate.ray.clone(), candidate);
            }
        }
    }
    Ok(ConeDescription {
        ambient: l.vperp_basis(v)?,
        walls: Vec::new(),
        generators: by_ray.into_values().collect(),
        includes_positive_cone: true,
        bound_trace: trace,
    })
}

/// Outcome of the curve-class bound check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtCheck {
    /// Square of the projected curve class.
    pub q_value: BigRational,
    /// `−(n+3)/2` with `2n = v² + 2`.
    pub threshold: BigRational,
    pub passes: bool,
}

/// Square of `a₀ = θ∨(a)` compared with `−(n+3)/2`, where `2n = v² + 2`.
pub fn ht_bound_check(l: &Lattice, v: &[BigInt], a: &[BigInt]) -> Result<HtCheck> {
    let vv = check_v(l, v)?;
    let sq = l.square(a)?;
    let k = l.pair(v, a);
    if sq < BigInt::from(-2) {
        return input(format!("a² = {sq} is below −2"));
    }
    if BigInt::from(2) * k.abs() > vv {
        return input(format!("|(v,a)| = {} exceeds v²/2", k.abs()));
    }
    let a0 = project_to_vperp(l, v, a)?;
    let q_value = l.pair_q(&a0, &a0);
    // n = (v² + 2)/2, so (n + 3)/2 = (v² + 8)/4
    let threshold = -BigRational::new(&vv + 8, BigInt::from(4));
    let passes = q_value >= threshold;
    Ok(HtCheck { q_value, threshold, passes })
}

/// An integral class `a = a₀ + (k/v²)·v` with `|k| ≤ v²/2` and `a² ≥ −2`, if there is one.
pub fn ht_witness(l: &Lattice, v: &[BigInt], a0: &[BigRational]) -> Result<Option<IVec>> {
    let vv = check_v(l, v)?;
    if !l.pair_q(a0, &to_qvec(v)).is_zero() {
        return input("ht_witness: a₀ must lie in v⊥");
    }
    let q0 = l.pair_q(a0, a0);
    let vvq = rat_int(&vv);
    let half = &vv / 2;
    let mut k = BigInt::zero();
    while k <= half {
        for kk in [k.clone(), -k.clone()] {
            // a² = a₀² + k²/v² ≥ −2
            let sq = &q0 + rat_int(&(&kk * &kk)) / &vvq;
            if sq < BigRational::from_integer(BigInt::from(-2)) {
                continue;
            }
            let shift = qscale(&(rat_int(&kk) / &vvq), &to_qvec(v));
            let cand: QVec = a0.iter().zip(&shift).map(|(x, y)| x + y).collect();
            if let Some(a) = to_ivec(&cand) {
                return Ok(Some(a));
            }
            if kk.is_zero() {
                break;
            }
        }
        k += 1;
    }
    Ok(None)
}

const WEYL_STEP_CAP: usize = 100_000;

/// Reflects `d` into the chamber `{(D, E) ≥ 0 for every E}` using `ρ_E(D) = D − 2((D,E)/E²)·E`.
///
/// Returns the image and the list of reflecting classes in the order applied.
pub fn weyl_map_to_movable(
    l: &Lattice,
    v: &[BigInt],
    d: &[BigRational],
    exceptional: &[QVec],
) -> Result<(QVec, Vec<QVec>)> {
    check_v(l, v)?;
    let vq = to_qvec(v);
    if d.len() != l.rank() || !l.pair_q(d, &vq).is_zero() {
        return input("weyl_map_to_movable: D must lie in v⊥");
    }
    if !l.pair_q(d, d).is_positive() {
        return input("weyl_map_to_movable: D must have positive square");
    }
    for e in exceptional {
        if !l.pair_q(e, e).is_negative() {
            return input("weyl_map_to_movable: exceptional classes must have negative square");
        }
    }
    let mut cur = d.to_vec();
    let mut word = Vec::new();
    for _ in 0..WEYL_STEP_CAP {
        let hit = exceptional.iter().find(|e| l.pair_q(&cur, e).is_negative());
        let Some(e) = hit else {
            return Ok((cur, word));
        };
        let coeff = BigRational::from_integer(BigInt::from(2)) * l.pair_q(&cur, e) / l.pair_q(e, e);
        cur = qsub(&cur, &qscale(&coeff, e));
        word.push(e.clone());
    }
    Err(Error::IterationLimit("Weyl chamber descent did not terminate".into()))
}

/// Primitive isotropic classes of `v⊥`, up to sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationClasses {
    pub classes: Vec<IVec>,
    /// True when the answer is provably complete (rank of `v⊥` at most two).
    pub complete: bool,
}

/// Square-zero classes in `v⊥`. Exact when `v⊥` has rank two; otherwise every primitive
/// solution with `v⊥`-basis coordinates bounded by `bound` in absolute value.
pub fn fibration_classes(l: &Lattice, v: &[BigInt], bound: &BigInt) -> Result<FibrationClasses> {
    check_v(l, v)?;
    let perp = l.vperp_basis(v)?;
    let r = perp.rank();
    let mut found: Vec<IVec> = Vec::new();
    if r == 1 {
        if l.sq(&perp.basis[0]).is_zero() {
            found.push(sign_normalize(&perp.basis[0]));
        }
        return Ok(FibrationClasses { classes: found, complete: true });
    }
    if r == 2 {
        let form = BinaryForm::from_gram(&perp.restricted_gram)?;
        for (x, y) in isotropic_primitive(&form) {
            let w = perp.embed(&[x, y]);
            found.push(sign_normalize(&crate::arith::primitive_part(&w)));
        }
        found.sort();
        found.dedup();
        return Ok(FibrationClasses { classes: found, complete: true });
    }
    let mut coords = vec![-bound.clone(); r];
    loop {
        if coords.iter().any(|c| !c.is_zero()) && is_primitive(&coords) {
            let w = perp.embed(&coords);
            if l.sq(&w).is_zero() {
                found.push(sign_normalize(&w));
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                found.sort();
                found.dedup();
                return Ok(FibrationClasses { classes: found, complete: false });
            }
            if &coords[i] < bound {
                coords[i] += 1;
                break;
            }
            coords[i] = -bound.clone();
            i += 1;
        }
    }
}

/// A central charge vector `Ω = re + i·im` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralChargeVector {
    pub re: QVec,
    pub im: QVec,
}

/// `Im(Ω / −(Ω, v))`, a rational class in `v⊥`.
pub fn central_charge_to_divisor(l: &Lattice, v: &[BigInt], omega: &CentralChargeVector) -> Result<QVec> {
    if omega.re.len() != l.rank() || omega.im.len() != l.rank() {
        return input("central charge vector has the wrong length");
    }
    let vq = to_qvec(v);
    let p = l.pair_q(&omega.re, &vq);
    let q = l.pair_q(&omega.im, &vq);
    let norm = &p * &p + &q * &q;
    if norm.is_zero() {
        return Err(Error::Singular("(Ω, v) = 0".into()));
    }
    // Ω/−(p + iq) = −(re + i·im)(p − iq)/(p² + q²); imaginary part is (q·re − p·im)/(p² + q²)
    Ok(omega
        .re
        .iter()
        .zip(&omega.im)
        .map(|(r, i)| (&q * r - &p * i) / &norm)
        .collect())
}

//! Rank-two hyperbolic wall lattices containing the Mukai vector, their effective
//! cones, minimal classes and the wall-type decision.
//!
//! All algorithms first move to coordinates in which `v = (1, 0)`. In those
//! coordinates a class `(x, y)` pairs with `v` as `v² x + b y`, and the
//! orthogonal complement of `v` is spanned by the primitive part of `(−b, v²)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    cross, exact_sqrt, int, mat2_apply, mat2_inv_unimodular, primitive_part, Mat2,
};
use crate::diophantine::{
    all_in_box, isotropic_primitive, orbit_representatives, BinaryForm, Point,
};
use crate::error::{input, Error, Result};
use crate::lattice::{Lattice, MukaiVector, Sublattice};

/// A rank-two hyperbolic lattice with a distinguished positive primitive class `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallLattice {
    pub form: BinaryForm,
    pub v_coords: Point,
    /// The embedding into an ambient lattice, when the wall lattice came from one.
    pub sublattice: Option<Sublattice>,
}

/// Which of the two lattice-compatible effective cones to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    /// Extremal sphericals are the two closest to `v⊥`, both pairing non-negatively with `v`.
    PlusSide,
    /// The neighbouring chamber across the nearer of those two spherical lines.
    MinusSide,
}

/// One boundary ray of an effective cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeRay {
    Spherical(Point),
    Isotropic(Point),
    /// The null direction is irrational; the cone is closed off by the positive cone there.
    Irrational,
}

impl ConeRay {
    pub fn point(&self) -> Option<&Point> {
        match self {
            ConeRay::Spherical(p) | ConeRay::Isotropic(p) => Some(p),
            ConeRay::Irrational => None,
        }
    }

    pub fn spherical(&self) -> Option<&Point> {
        match self {
            ConeRay::Spherical(p) => Some(p),
            _ => None,
        }
    }
}

/// Effective cone of a wall lattice. `cw` lies clockwise of `v`, `ccw` counter-clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveCone {
    pub cw: ConeRay,
    pub ccw: ConeRay,
    pub orientation: Orientation,
}

impl EffectiveCone {
    pub fn rays(&self) -> [&ConeRay; 2] {
        [&self.cw, &self.ccw]
    }

    pub fn irrational_boundary(&self) -> bool {
        self.cw == ConeRay::Irrational || self.ccw == ConeRay::Irrational
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WallKind {
    BrillNoether,
    HilbertChow,
    LiGiesekerUhlenbeck,
    Flopping,
    NoContraction,
}

impl WallKind {
    pub fn name(&self) -> &'static str {
        match self {
            WallKind::BrillNoether => "Brill-Noether",
            WallKind::HilbertChow => "Hilbert-Chow",
            WallKind::LiGiesekerUhlenbeck => "Li-Gieseker-Uhlenbeck",
            WallKind::Flopping => "flopping",
            WallKind::NoContraction => "no contraction",
        }
    }

    pub fn is_divisorial(&self) -> bool {
        matches!(
            self,
            WallKind::BrillNoether | WallKind::HilbertChow | WallKind::LiGiesekerUhlenbeck
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TotallySemistable {
    No,
    ForSomeOrientation,
    ForAllOrientations,
}

impl TotallySemistable {
    pub fn name(&self) -> &'static str {
        match self {
            TotallySemistable::No => "no",
            TotallySemistable::ForSomeOrientation => "for some orientation",
            TotallySemistable::ForAllOrientations => "for all orientations",
        }
    }
}

/// Outcome of [`classify`]. Witness classes are in the coordinates of the wall lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallClassification {
    pub kind: WallKind,
    pub totally_semistable: TotallySemistable,
    pub witnesses: BTreeMap<String, Vec<Point>>,
}

impl WallClassification {
    /// Table label: divisorial kinds, flops, and the two non-contracting cases.
    pub fn label(&self) -> &'static str {
        match (self.kind, self.totally_semistable) {
            (k, _) if k.is_divisorial() => "divisorial contraction",
            (WallKind::Flopping, _) => "flop",
            (_, TotallySemistable::No) => "not a wall",
            _ => "fake wall",
        }
    }
}

fn pt(x: BigInt, y: BigInt) -> Point {
    (x, y)
}

fn neg(p: &Point) -> Point {
    (-&p.0, -&p.1)
}

impl WallLattice {
    /// Wraps an abstract rank-two form. `v` must be primitive with `Q(v) > 0`, and the
    /// form must be hyperbolic.
    pub fn new(form: BinaryForm, v_coords: Point) -> Result<Self> {
        let det = form.det();
        if !det.is_negative() {
            return Err(Error::NotHyperbolic { det: det.to_string() });
        }
        if !v_coords.0.gcd(&v_coords.1).is_one() {
            return input("wall lattice: v must be primitive in H");
        }
        if !form.eval(&v_coords).is_positive() {
            return input("wall lattice: v must satisfy v² > 0");
        }
        Ok(WallLattice { form, v_coords, sublattice: None })
    }

    pub fn v_square(&self) -> BigInt {
        self.form.eval(&self.v_coords)
    }

    pub fn pair_v(&self, p: &Point) -> BigInt {
        self.form.pair(p, &self.v_coords)
    }

    /// The ambient class of an H-coordinate point, when an embedding is known.
    pub fn to_ambient(&self, p: &Point) -> Option<MukaiVector> {
        self.sublattice.as_ref().map(|s| s.embed(&[p.0.clone(), p.1.clone()]))
    }

    /// A unimodular `M` with `M e₁ = v` and the form in the new coordinates.
    fn normalized(&self) -> Normal {
        let (p, q) = (&self.v_coords.0, &self.v_coords.1);
        let eg = p.extended_gcd(q);
        // p x + q y = 1
        let m: Mat2 = [[p.clone(), -&eg.y], [q.clone(), eg.x.clone()]];
        debug_assert!(crate::arith::mat2_det(&m).is_one());
        let form = self.form.transform(&m);
        Normal { form, m }
    }
}

/// Wall-lattice data in coordinates where `v = (1, 0)`.
struct Normal {
    form: BinaryForm,
    m: Mat2,
}

impl Normal {
    fn vv(&self) -> &BigInt {
        &self.form.a
    }
    fn pair_v(&self, p: &Point) -> BigInt {
        &self.form.a * &p.0 + &self.form.b * &p.1
    }
    fn back(&self, p: &Point) -> Point {
        mat2_apply(&self.m, p)
    }
    /// Primitive generator of `v⊥`, counter-clockwise of `v`.
    fn perp(&self) -> Point {
        let p = primitive_part(&[-self.form.b.clone(), self.form.a.clone()]);
        pt(p[0].clone(), p[1].clone())
    }
    /// Negative classes on the branch containing `perp`.
    fn on_perp_branch(&self, s: &Point) -> bool {
        self.form.pair(s, &self.perp()).is_negative()
    }
    /// Primitive isotropic rays oriented to pair positively with `v`.
    fn isotropic_rays(&self) -> Vec<Point> {
        isotropic_primitive(&self.form)
            .into_iter()
            .map(|w| if self.pair_v(&w).is_negative() { neg(&w) } else { w })
            .collect()
    }
}

/// Builds the saturated wall lattice of `span{v, a}` with basis `(v, u)`.
pub fn make_wall_lattice(l: &Lattice, v: &[BigInt], a: &[BigInt]) -> Result<WallLattice> {
    let vv = l.square(v)?;
    l.pairing(v, a)?;
    if !crate::arith::is_primitive(v) {
        return input("make_wall_lattice: v must be primitive");
    }
    if !vv.is_positive() {
        return input(format!("make_wall_lattice: v² = {vv} must be positive"));
    }
    let sat = l.saturate(&[v.to_vec(), a.to_vec()])?;
    if sat.rank() != 2 {
        return input("make_wall_lattice: a is proportional to v");
    }
    let cv = sat.coords_of(v).expect("v lies in its saturation");
    let ca = sat.coords_of(a).expect("a lies in its saturation");
    let (h1, h2) = (&sat.basis[0], &sat.basis[1]);
    // complete v = (p, q) to a basis (v, u0) of H
    let eg = cv[0].extended_gcd(&cv[1]);
    let u0c = (-&eg.y, eg.x.clone());
    let combo = |c: &(BigInt, BigInt)| -> MukaiVector {
        h1.iter().zip(h2).map(|(x, y)| &c.0 * x + &c.1 * y).collect()
    };
    let mut u0 = combo(&u0c);
    // a = α v + β u0 with β = det(v, a) in H-coordinates
    let mut beta = &cv[0] * &ca[1] - &cv[1] * &ca[0];
    let alpha_num = &ca[0] - &beta * &u0c.0;
    let alpha = if cv[0].is_zero() {
        (&ca[1] - &beta * &u0c.1) / &cv[1]
    } else {
        alpha_num / &cv[0]
    };
    if beta.is_negative() {
        beta = -beta;
        u0 = u0.iter().map(|x| -x).collect();
    }
    let k = alpha.div_floor(&beta);
    let u: MukaiVector = u0.iter().zip(v).map(|(x, y)| x + &k * y).collect();
    let basis = vec![v.to_vec(), u.clone()];
    let restricted_gram = l.gram_of(&basis);
    let form = BinaryForm::new(vv.clone(), l.pair(v, &u), l.sq(&u));
    let det = form.det();
    if !det.is_negative() {
        return Err(Error::NotHyperbolic { det: det.to_string() });
    }
    Ok(WallLattice {
        form,
        v_coords: pt(BigInt::one(), BigInt::zero()),
        sublattice: Some(Sublattice { basis, restricted_gram, saturated: true }),
    })
}

/// Sphericals on the `v⊥`-side branch nearest to `v⊥`: up to two with positive pairing
/// (ascending) and up to two with non-positive pairing (descending).
struct NearPerp {
    above: Vec<Point>,
    below: Vec<Point>,
}

const ORBIT_STEP_CAP: usize = 10_000;

fn near_perp(n: &Normal) -> Result<NearPerp> {
    let disc = n.form.disc();
    let mut pool: Vec<Point> = Vec::new();
    if exact_sqrt(&disc).is_none() {
        let orbits = orbit_representatives(&n.form, &int(-2))?;
        let g = orbits.generator.clone();
        let gi = mat2_inv_unimodular(&g);
        for rep in orbits.reps.iter().filter(|r| n.on_perp_branch(r)) {
            // orient the step so that the pairing with v increases
            let (up, down) = if n.pair_v(&mat2_apply(&g, rep)) > n.pair_v(rep) {
                (&g, &gi)
            } else {
                (&gi, &g)
            };
            let mut cur = rep.clone();
            let mut steps = 0;
            let (lo, hi) = loop {
                steps += 1;
                if steps > ORBIT_STEP_CAP {
                    return Err(Error::IterationLimit("spherical orbit walk".into()));
                }
                if n.pair_v(&cur).is_positive() {
                    let prev = mat2_apply(down, &cur);
                    if !n.pair_v(&prev).is_positive() {
                        break (prev, cur);
                    }
                    cur = prev;
                } else {
                    let next = mat2_apply(up, &cur);
                    if n.pair_v(&next).is_positive() {
                        break (cur, next);
                    }
                    cur = next;
                }
            };
            pool.push(mat2_apply(down, &lo));
            pool.push(mat2_apply(up, &hi));
            pool.push(lo);
            pool.push(hi);
        }
    } else {
        // square discriminant: finitely many sphericals, all inside an explicit box
        let s = exact_sqrt(&(&n.form.b * &n.form.b - &n.form.a * &n.form.c)).unwrap();
        let two = int(2);
        let yb = (&n.form.a * &two).abs() / &s;
        let xb = if n.form.c.is_zero() { two.clone() } else { (&n.form.c * &two).abs() / &s };
        pool = all_in_box(&n.form, &int(-2), &yb.max(xb))
            .into_iter()
            .filter(|p| n.on_perp_branch(p))
            .collect();
    }
    pool.sort_by(|p, q| n.pair_v(p).cmp(&n.pair_v(q)).then_with(|| p.cmp(q)));
    pool.dedup();
    let above: Vec<Point> =
        pool.iter().filter(|p| n.pair_v(p).is_positive()).take(2).cloned().collect();
    let below: Vec<Point> =
        pool.iter().rev().filter(|p| !n.pair_v(p).is_positive()).take(2).cloned().collect();
    Ok(NearPerp { above, below })
}

fn effective_cone_normal(n: &Normal, orientation: Orientation) -> Result<EffectiveCone> {
    let near = near_perp(n)?;
    let iso = n.isotropic_rays();
    let ccw_null = iso.iter().find(|w| cross(&(BigInt::one(), BigInt::zero()), w).is_positive());
    let cw_null = iso.iter().find(|w| cross(&(BigInt::one(), BigInt::zero()), w).is_negative());
    let null_ray = |w: Option<&Point>| match w {
        Some(w) => ConeRay::Isotropic(w.clone()),
        None => ConeRay::Irrational,
    };
    // A gap between consecutive branch sphericals hi (larger pairing) and lo gives the cone
    // spanned by hi (counter-clockwise side) and −lo (clockwise side).
    let gap = |hi: Option<&Point>, lo: Option<&Point>| EffectiveCone {
        ccw: hi.map_or_else(|| null_ray(ccw_null), |p| ConeRay::Spherical(p.clone())),
        cw: lo.map_or_else(|| null_ray(cw_null), |p| ConeRay::Spherical(neg(p))),
        orientation,
    };
    let p1 = near.above.first();
    let p2 = near.below.first();
    let cone = match orientation {
        Orientation::PlusSide => gap(p1, p2),
        Orientation::MinusSide => {
            let cross_p1 = match (p1, p2) {
                (None, None) => None,
                (Some(_), None) => Some(true),
                (None, Some(_)) => Some(false),
                (Some(a), Some(b)) => Some(n.pair_v(a).abs() <= n.pair_v(b).abs()),
            };
            match cross_p1 {
                None => gap(None, None),
                Some(true) => gap(near.above.get(1), p1),
                Some(false) => gap(p2, near.below.get(1)),
            }
        }
    };
    Ok(cone)
}

/// Boundary rays of the effective cone for the given orientation.
pub fn effective_cone(h: &WallLattice, orientation: Orientation) -> Result<EffectiveCone> {
    let n = h.normalized();
    let cone = effective_cone_normal(&n, orientation)?;
    let back = |r: ConeRay| match r {
        ConeRay::Spherical(p) => ConeRay::Spherical(n.back(&p)),
        ConeRay::Isotropic(p) => ConeRay::Isotropic(n.back(&p)),
        ConeRay::Irrational => ConeRay::Irrational,
    };
    Ok(EffectiveCone { cw: back(cone.cw), ccw: back(cone.ccw), orientation })
}

fn reflect_h(h: &WallLattice, s: &Point, u: &Point) -> Point {
    let k = h.form.pair(u, s);
    pt(&u.0 + &k * &s.0, &u.1 + &k * &s.1)
}

const DESCENT_CAP: usize = 100_000;

/// Reflects `v` into the chamber where it pairs non-negatively with both extremal sphericals
/// of `cone`. Returns `v₀` and the word of reflections that carries `v₀` back to `v`.
pub fn minimal_class(h: &WallLattice, v: &Point, cone: &EffectiveCone) -> Result<(Point, Vec<Point>)> {
    if !h.form.eval(v).is_positive() {
        return input("minimal_class: v must satisfy v² > 0");
    }
    let sph: Vec<&Point> = cone.rays().iter().filter_map(|r| r.spherical()).collect();
    let mut cur = v.clone();
    let mut applied = Vec::new();
    for _ in 0..DESCENT_CAP {
        let Some(s) = sph.iter().find(|s| h.form.pair(&cur, s).is_negative()) else {
            applied.reverse();
            return Ok((cur, applied));
        };
        cur = reflect_h(h, s, &cur);
        applied.push((*s).clone());
    }
    Err(Error::IterationLimit("minimal_class reflection descent".into()))
}

/// The slope-ordered orbit `v_{−count}, …, v_count` of a minimal class.
pub fn orbit_list(h: &WallLattice, v0: &Point, count: usize, cone: &EffectiveCone) -> Vec<Point> {
    let s = cone.cw.spherical().cloned();
    let t = cone.ccw.spherical().cloned();
    let apply = |r: &Option<Point>, u: &Point| match r {
        Some(r) => reflect_h(h, r, u),
        None => u.clone(),
    };
    // s_1 = t, s_0 = s, s_{k−1} = ρ_{s_k}(s_{k+1});  t_0 = s, t_1 = t, t_{k+1} = ρ_{t_k}(t_{k−1})
    let mut s_seq: Vec<Option<Point>> = vec![t.clone(), s.clone()]; // s_1, s_0, s_{-1}, ...
    let mut t_seq: Vec<Option<Point>> = vec![s.clone(), t.clone()]; // t_0, t_1, t_2, ...
    for _ in 0..count {
        let k = s_seq.len();
        let next = match (&s_seq[k - 1], &s_seq[k - 2]) {
            (Some(a), Some(b)) => Some(reflect_h(h, a, b)),
            _ => None,
        };
        s_seq.push(next);
        let k = t_seq.len();
        let next = match (&t_seq[k - 1], &t_seq[k - 2]) {
            (Some(a), Some(b)) => Some(reflect_h(h, a, b)),
            _ => None,
        };
        t_seq.push(next);
    }
    let mut forward = vec![v0.clone()];
    for i in 1..=count {
        let prev = forward.last().unwrap().clone();
        forward.push(apply(&t_seq[i], &prev));
    }
    let mut backward = Vec::new();
    let mut cur = v0.clone();
    for i in 1..=count {
        // v_{−i} = ρ_{s_{−i+1}}(v_{−i+1}); s_{−i+1} sits at index i in s_seq
        cur = apply(&s_seq[i], &cur);
        backward.push(cur.clone());
    }
    backward.reverse();
    backward.extend(forward);
    backward
}

/// A decomposition `v = a + b` into classes with `a², b² ≥ 0` and `(v,a), (v,b) > 0`.
///
/// In coordinates with `v = (1, 0)`, `v² a² = (v,a)² − D y²` with `D = −det`, so a positive
/// part forces `D y² ≤ (v,a)² < v⁴`. For each such `y` at most one `x` puts `(v,a)` strictly
/// between 0 and `v²`, which makes the scan complete.
pub fn has_positive_sum_decomposition(h: &WallLattice) -> Option<(Point, Point)> {
    let n = h.normalized();
    positive_decomposition_normal(&n).map(|(a, b)| (n.back(&a), n.back(&b)))
}

fn positive_decomposition_normal(n: &Normal) -> Option<(Point, Point)> {
    let vv = n.vv().clone();
    let d = -n.form.det();
    let v4 = &vv * &vv;
    let ymax: BigInt = crate::arith::isqrt(&(&v4 / &d)) + 1;
    let mut y = -ymax.clone();
    while y <= ymax {
        if &y * &y * &d < v4 {
            // 0 < vv x + b y < vv
            let by = &n.form.b * &y;
            let x: BigInt = (-&by).div_floor(&vv) + 1;
            let a = pt(x.clone(), y.clone());
            let pv = n.pair_v(&a);
            if pv.is_positive() && pv < vv {
                let b = pt(BigInt::one() - &x, -&y);
                if !n.form.eval(&a).is_negative() && !n.form.eval(&b).is_negative() {
                    return Some((a, b));
                }
            }
        }
        y += 1;
    }
    None
}

/// Sphericals `s` with `1 ≤ (s, v) ≤ v²/2`, found by intersecting each line `(s, v) = k`
/// with the conic `Q = −2`. One representative per value of `k` in the given range.
fn flopping_sphericals(n: &Normal) -> Vec<Point> {
    let vv = n.vv().clone();
    let (a, b) = (n.form.a.clone(), n.form.b.clone());
    let g = a.gcd(&b);
    let perp = n.perp();
    let eg = (&a / &g).extended_gcd(&(&b / &g));
    let mut out = Vec::new();
    let half: BigInt = &vv / 2;
    let mut k = BigInt::one();
    while k <= half {
        if k.is_multiple_of(&g) {
            let f = &k / &g;
            let s0 = pt(&eg.x * &f, &eg.y * &f);
            // Q(s0 + t·perp) = Q(s0) + 2t(s0, perp) + t² Q(perp) = −2
            let qa = n.form.eval(&perp);
            let qb = n.form.pair(&s0, &perp);
            let qc = n.form.eval(&s0) + 2;
            let disc = &qb * &qb - &qa * &qc;
            if let Some(r) = exact_sqrt(&disc) {
                for num in [-&qb + &r, -&qb - &r] {
                    if num.is_multiple_of(&qa) {
                        let t = &num / &qa;
                        out.push(pt(&s0.0 + &t * &perp.0, &s0.1 + &t * &perp.1));
                        break;
                    }
                }
            }
        }
        k += 1;
    }
    out
}

/// Decides the wall type. The first matching condition in the order Brill–Noether,
/// Hilbert–Chow, Li–Gieseker–Uhlenbeck, flop determines `kind`; every condition that holds
/// contributes witnesses.
pub fn classify(h: &WallLattice) -> Result<WallClassification> {
    let n = h.normalized();
    let mut witnesses: BTreeMap<String, Vec<Point>> = BTreeMap::new();
    let mut add = |key: &str, p: Point| witnesses.entry(key.to_string()).or_default().push(n.back(&p));

    let perp = n.perp();
    let bn = n.form.eval(&perp) == int(-2);
    if bn {
        add("brill_noether", perp.clone());
    }
    let iso = n.isotropic_rays();
    let mut hc = false;
    let mut lgu = false;
    for w in &iso {
        let k = n.pair_v(w);
        if k == int(1) {
            hc = true;
            add("hilbert_chow", w.clone());
            lgu = true;
            add("li_gieseker_uhlenbeck", pt(&w.0 * 2, &w.1 * 2));
        } else if k == int(2) {
            lgu = true;
            add("li_gieseker_uhlenbeck", w.clone());
        }
    }
    let decomposition = positive_decomposition_normal(&n);
    if let Some((a, b)) = &decomposition {
        add("positive_decomposition", a.clone());
        add("positive_decomposition", b.clone());
    }
    let flop_sph = flopping_sphericals(&n);
    if let Some(s) = flop_sph.first() {
        add("flopping_spherical", s.clone());
    }
    let flop = decomposition.is_some() || !flop_sph.is_empty();

    let tss_iso = iso.iter().find(|w| n.pair_v(w) == int(1));
    let mut negative_in = 0;
    for o in [Orientation::PlusSide, Orientation::MinusSide] {
        let c = effective_cone_normal(&n, o)?;
        let neg_ray = c.rays().into_iter().filter_map(|r| r.spherical()).find(|s| n.pair_v(s).is_negative()).cloned();
        if let Some(s) = neg_ray {
            negative_in += 1;
            add("totally_semistable_spherical", s);
        }
    }
    if let Some(w) = tss_iso {
        add("totally_semistable_isotropic", w.clone());
    }
    let totally_semistable = if tss_iso.is_some() || negative_in == 2 {
        TotallySemistable::ForAllOrientations
    } else if negative_in == 1 {
        TotallySemistable::ForSomeOrientation
    } else {
        TotallySemistable::No
    };
    let kind = if bn {
        WallKind::BrillNoether
    } else if hc {
        WallKind::HilbertChow
    } else if lgu {
        WallKind::LiGiesekerUhlenbeck
    } else if flop {
        WallKind::Flopping
    } else {
        WallKind::NoContraction
    };
    Ok(WallClassification { kind, totally_semistable, witnesses })
}

//! Partitions of `v` into positive classes of a wall lattice and the refinement
//! poset they form.
//!
//! A class `u` of the wall lattice is *positive* when `u² ≥ 0` and `(v, u) > 0`. Each
//! unordered partition of `v` into positive classes labels a stratum of the
//! exceptional locus of the wall contraction. A two-part stratum `[a₁, a₂]` has
//! codimension `(a₁, a₂) − 1`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::angle_cmp;
use crate::diophantine::{isotropic_primitive, orbit_representatives, Point};
use crate::error::{input, Result};
use crate::lattice::short_vectors;
use crate::wall::WallLattice;

/// An unordered partition of `v`, stored with its parts in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositivePartition {
    pub parts: Vec<Point>,
}

impl PositivePartition {
    /// Sorts the parts into canonical order.
    pub fn from_parts(mut parts: Vec<Point>) -> Self {
        parts.sort_by(part_order);
        PositivePartition { parts }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.len() == 1
    }
}

/// Parts ordered by slope, then lexicographically.
fn part_order(a: &Point, b: &Point) -> Ordering {
    angle_cmp(a, b).then_with(|| a.cmp(b))
}

/// Result of an enumeration, with a note when the simplifying hypothesis fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub partitions: Vec<PositivePartition>,
    /// Set when the wall lattice has spherical or isotropic classes.
    pub warning: Option<String>,
}

fn is_positive_class(h: &WallLattice, u: &Point) -> bool {
    !h.form.eval(u).is_negative() && h.pair_v(u).is_positive()
}

/// Returns a description of why `H` violates the no-spherical, no-isotropic hypothesis.
pub fn hypothesis_violation(h: &WallLattice) -> Result<Option<String>> {
    if let Some(w) = isotropic_primitive(&h.form).first() {
        return Ok(Some(format!("the wall lattice has an isotropic class ({}, {})", w.0, w.1)));
    }
    let orbits = orbit_representatives(&h.form, &BigInt::from(-2))?;
    if let Some(s) = orbits.reps.first() {
        return Ok(Some(format!("the wall lattice has a spherical class ({}, {})", s.0, s.1)));
    }
    Ok(None)
}

fn check(h: &WallLattice, strict: bool) -> Result<Option<String>> {
    if !h.v_square().is_positive() {
        return input("v is not a positive class of the wall lattice");
    }
    let violation = hypothesis_violation(h)?;
    match violation {
        Some(msg) if strict => input(format!("strict mode: {msg}")),
        other => Ok(other),
    }
}

/// Positive classes `u` with `v − u` positive or zero.
///
/// Both conditions give `0 < (u,v) ≤ v²` and `u² ≥ 0`, so `2(u,v)²/v² − u² ≤ 2v²`.
/// That form is positive definite on a hyperbolic plane, which bounds the search.
fn part_pool(h: &WallLattice) -> Result<Vec<Point>> {
    let g = h.form.gram();
    let vv = h.v_square();
    let gv = [
        &g[0][0] * &h.v_coords.0 + &g[0][1] * &h.v_coords.1,
        &g[1][0] * &h.v_coords.0 + &g[1][1] * &h.v_coords.1,
    ];
    let two = BigRational::from_integer(BigInt::from(2));
    let vvq = BigRational::from_integer(vv.clone());
    let p: Vec<Vec<BigRational>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| {
                    &two * BigRational::from_integer(&gv[i] * &gv[j]) / &vvq
                        - BigRational::from_integer(g[i][j].clone())
                })
                .collect()
        })
        .collect();
    let bound = BigRational::from_integer(vv * 2);
    let mut pool: Vec<Point> = short_vectors(&p, &bound)?
        .into_iter()
        .map(|x| (x[0].clone(), x[1].clone()))
        .filter(|u| {
            let rest = (&h.v_coords.0 - &u.0, &h.v_coords.1 - &u.1);
            is_positive_class(h, u) && (rest.0.is_zero() && rest.1.is_zero() || is_positive_class(h, &rest))
        })
        .collect();
    pool.sort_by(part_order);
    Ok(pool)
}

/// All partitions of `v` into at most `max_parts` positive classes (all sizes when `None`),
/// including the trivial partition `[v]`.
pub fn positive_partitions(h: &WallLattice, max_parts: Option<usize>, strict: bool) -> Result<PartitionReport> {
    let warning = check(h, strict)?;
    let pool = part_pool(h)?;
    let mut out = Vec::new();
    let mut current = Vec::new();
    let limit = max_parts.unwrap_or(usize::MAX);
    extend(h, &pool, 0, h.v_coords.clone(), &mut current, limit, &mut out);
    let mut partitions: Vec<PositivePartition> = out.into_iter().map(PositivePartition::from_parts).collect();
    partitions.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    partitions.dedup();
    Ok(PartitionReport { partitions, warning })
}

fn extend(
    h: &WallLattice,
    pool: &[Point],
    start: usize,
    rest: Point,
    current: &mut Vec<Point>,
    limit: usize,
    out: &mut Vec<Vec<Point>>,
) {
    if current.len() >= limit {
        return;
    }
    for (i, u) in pool.iter().enumerate().skip(start) {
        let next = (&rest.0 - &u.0, &rest.1 - &u.1);
        if next.0.is_zero() && next.1.is_zero() {
            current.push(u.clone());
            out.push(current.clone());
            current.pop();
        } else if is_positive_class(h, &next) {
            current.push(u.clone());
            extend(h, pool, i, next, current, limit, out);
            current.pop();
        }
    }
}

/// A two-part stratum and its codimension `(a₁, a₂) − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPartStratum {
    pub partition: PositivePartition,
    pub codim: BigInt,
}

pub fn two_part_strata(h: &WallLattice, strict: bool) -> Result<Vec<TwoPartStratum>> {
    let report = positive_partitions(h, Some(2), strict)?;
    Ok(report
        .partitions
        .into_iter()
        .filter(|p| p.len() == 2)
        .map(|p| {
            let codim = h.form.pair(&p.parts[0], &p.parts[1]) - BigInt::one();
            TwoPartStratum { partition: p, codim }
        })
        .collect())
}

/// `fine` refines `coarse` when the parts of `fine` can be grouped so that the groups sum
/// to the parts of `coarse`.
pub fn refines(fine: &PositivePartition, coarse: &PositivePartition) -> bool {
    if fine.len() < coarse.len() {
        return false;
    }
    let mut used = vec![false; fine.len()];
    assign(&fine.parts, &coarse.parts, 0, &mut used)
}

fn assign(fine: &[Point], coarse: &[Point], idx: usize, used: &mut Vec<bool>) -> bool {
    if idx == coarse.len() {
        return used.iter().all(|&u| u);
    }
    let target = &coarse[idx];
    subset_sum(fine, coarse, idx, used, 0, (BigInt::zero(), BigInt::zero()), target)
}

fn subset_sum(
    fine: &[Point],
    coarse: &[Point],
    idx: usize,
    used: &mut Vec<bool>,
    from: usize,
    acc: Point,
    target: &Point,
) -> bool {
    let nonempty = !acc.0.is_zero() || !acc.1.is_zero();
    if nonempty && &acc == target && assign(fine, coarse, idx + 1, used) {
        return true;
    }
    for i in from..fine.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let next = (&acc.0 + &fine[i].0, &acc.1 + &fine[i].1);
        if subset_sum(fine, coarse, idx, used, i + 1, next, target) {
            used[i] = false;
            return true;
        }
        used[i] = false;
    }
    false
}

/// Refinement poset of all positive partitions. Edge `(i, j)` means node `i` strictly
/// refines node `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataPoset {
    pub nodes: Vec<PositivePartition>,
    pub edges: Vec<(usize, usize)>,
}

impl StrataPoset {
    pub fn build(partitions: Vec<PositivePartition>) -> Self {
        let mut edges = Vec::new();
        for (i, p) in partitions.iter().enumerate() {
            for (j, q) in partitions.iter().enumerate() {
                if i != j && p.len() > q.len() && refines(p, q) {
                    edges.push((i, j));
                }
            }
        }
        StrataPoset { nodes: partitions, edges }
    }

    pub fn refines(&self, i: usize, j: usize) -> bool {
        i == j || self.edges.contains(&(i, j))
    }
}

/// One connected component of the nontrivial strata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataComponent {
    /// Maximal nontrivial partitions in the component.
    pub maximal: Vec<PositivePartition>,
    /// Partitions in the component that refine every maximal one.
    pub common_refinements: Vec<PositivePartition>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataSummary {
    pub irreducible: usize,
    pub connected: usize,
    pub components: Vec<StrataComponent>,
    pub poset: StrataPoset,
    pub warning: Option<String>,
}

/// Irreducible components are the maximal nontrivial partitions, connected components
/// are those of the refinement graph on nontrivial partitions.
pub fn strata_components(h: &WallLattice, strict: bool) -> Result<StrataSummary> {
    let report = positive_partitions(h, None, strict)?;
    let poset = StrataPoset::build(report.partitions);
    let nontrivial: Vec<usize> = (0..poset.nodes.len()).filter(|&i| !poset.nodes[i].is_trivial()).collect();
    let maximal: Vec<usize> = nontrivial
        .iter()
        .copied()
        .filter(|&i| !nontrivial.iter().any(|&j| j != i && poset.edges.contains(&(i, j))))
        .collect();
    // union-find over nontrivial nodes
    let mut parent: Vec<usize> = (0..poset.nodes.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(i, j) in &poset.edges {
        if poset.nodes[i].is_trivial() || poset.nodes[j].is_trivial() {
            continue;
        }
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut roots: Vec<usize> = nontrivial.iter().map(|&i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    let mut components = Vec::new();
    for r in roots {
        let members: Vec<usize> = nontrivial.iter().copied().filter(|&i| find(&mut parent, i) == r).collect();
        let maxes: Vec<usize> = members.iter().copied().filter(|i| maximal.contains(i)).collect();
        let common: Vec<PositivePartition> = members
            .iter()
            .copied()
            .filter(|&i| maxes.iter().all(|&m| poset.refines(i, m)) && !maxes.contains(&i))
            .map(|i| poset.nodes[i].clone())
            .collect();
        components.push(StrataComponent {
            maximal: maxes.iter().map(|&i| poset.nodes[i].clone()).collect(),
            common_refinements: common,
            size: members.len(),
        });
    }
    Ok(StrataSummary {
        irreducible: maximal.len(),
        connected: components.len(),
        components,
        poset,
        warning: report.warning,
    })
}

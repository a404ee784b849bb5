//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line with its
//! runtime; the process exits nonzero if any criterion fails or overruns its budget.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use k3walls::arith::{int, is_primitive, ivec, mat2, mat2_apply, mat2_inv_unimodular, mat2_mul, max_norm, sign_normalize, to_qvec, IVec, Mat2, QVec};
use k3walls::cones::{divisorial_witnesses, fibration_classes, nef_walls, weyl_map_to_movable, SearchRegion};
use k3walls::diophantine::{all_in_box, pell_fundamental, BinaryForm, Point};
use k3walls::flops::{refines, strata_components, two_part_strata, PositivePartition};
use k3walls::hilbert::{movable_hilb, walls_table, HilbSetup};
use k3walls::lattice::{elementary_divisors, Lattice};
use k3walls::oracle::{nef_normals_brute, partitions_brute, pell_brute, pell_chakravala, represent_brute};
use k3walls::wall::{classify, make_wall_lattice, WallKind, WallLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Check = Result<(), String>;

/// Number, description, time budget in seconds, and the check itself.
type Criterion = (u8, &'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 7] = [
        (1, "wall table for d = 1, n = 7", 1, hilbert_table),
        (2, "nef boundary of the Hilbert square for d = 31", 1, nef_square_31),
        (3, "movable boundary grid", 5, movable_grid),
        (4, "rank-two example with form diag(28, -4)", 5, rank_two_example),
        (5, "flop strata components", 2, flop_strata),
        (6, "Lagrangian fibration criterion", 2, fibration_grid),
        (7, "property suites", 60, property_suites),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= Duration::from_secs(budget) {
                Ok(())
            } else {
                Err(format!("took longer than the {budget} s budget"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {n}: PASS  {name} ({} ms)", elapsed.as_millis()),
            Err(e) => {
                failed += 1;
                println!("criterion {n}: FAIL  {name} ({} ms): {e}", elapsed.as_millis());
            }
        }
    }
    let elapsed = total.elapsed();
    println!("acceptance: {} of 7 criteria passed in {} ms", 7 - failed, elapsed.as_millis());
    if failed > 0 || elapsed > Duration::from_secs(60) {
        std::process::exit(1);
    }
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_k3walls")).args(args).output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "k3walls {:?} failed: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().map(|x| x.as_str().unwrap_or("?").to_string()).collect()).unwrap_or_default()
}

fn fraction(v: &Value) -> String {
    format!("{}/{}", v["num"].as_str().unwrap_or("?"), v["den"].as_str().unwrap_or("?"))
}

fn hilbert_table() -> Check {
    let v = cli(&["hilb", "table", "--d", "1", "--n", "7"])?;
    let rows = v["rows"].as_array().ok_or("no rows")?;
    let expected: [(&str, [i64; 3], i64, i64, &str); 8] = [
        ("0/1", [0, 0, -1], 0, 1, "divisorial contraction"),
        ("1/4", [1, -1, 2], -2, 4, "flop"),
        ("2/7", [1, -1, 1], 0, 5, "flop"),
        ("1/3", [1, -1, 0], 2, 6, "flop"),
        ("6/17", [2, -3, 5], -2, 7, "fake wall"),
        ("4/11", [1, -2, 5], -2, 1, "flop"),
        ("3/8", [-1, 3, -10], -2, 4, "flop"),
        ("2/5", [1, -2, 4], 0, 2, "divisorial contraction"),
    ];
    ensure!(rows.len() == expected.len(), "expected 8 rows, found {}", rows.len());
    for (i, (row, (gamma, a, sq, k, label))) in rows.iter().zip(expected).enumerate() {
        let a: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        ensure!(fraction(&row["gamma"]) == gamma, "row {i}: gamma {}", fraction(&row["gamma"]));
        ensure!(strings(&row["a"]) == a, "row {i}: class {:?}", strings(&row["a"]));
        ensure!(row["a_square"].as_str() == Some(sq.to_string().as_str()), "row {i}: square {}", row["a_square"]);
        ensure!(row["pairing"].as_str() == Some(k.to_string().as_str()), "row {i}: pairing {}", row["pairing"]);
        ensure!(row["label"] == label, "row {i}: type {}", row["label"]);
    }
    Ok(())
}

fn nef_square_31() -> Check {
    let v = cli(&["hilb", "nef2", "--d", "31"])?;
    ensure!(fraction(&v["gamma"]) == "3658/657", "gamma {}", fraction(&v["gamma"]));
    ensure!(strings(&v["spherical"]) == ["329", "-59", "328"], "spherical {:?}", strings(&v["spherical"]));
    ensure!(strings(&v["pell"]) == ["657", "59"], "pell {:?}", strings(&v["pell"]));
    Ok(())
}

fn movable_grid() -> Check {
    for n in 3..=50i64 {
        let m = movable_hilb(&int(n - 2), &int(n)).map_err(|e| e.to_string())?;
        ensure!(m.gamma == BigRational::new(int(n - 2), int(n - 1)), "n = {n}: gamma {}", m.gamma);
    }
    let mut squares = 0;
    for d in 1..=20i64 {
        for n in 2..=10i64 {
            let p = d * (n - 1);
            let r = (p as f64).sqrt().round() as i64;
            if r * r != p {
                continue;
            }
            squares += 1;
            let s = HilbSetup::new(&int(d), &int(n)).map_err(|e| e.to_string())?;
            let m = movable_hilb(&s.d, &s.n).map_err(|e| e.to_string())?;
            ensure!(m.case == 1, "d = {d}, n = {n}: case {}", m.case);
            let (k, h) = (m.gamma.numer().clone(), m.gamma.denom().clone());
            let w: IVec = s.h_tilde.iter().zip(&s.b).map(|(t, b)| &h * t - &k * b).collect();
            ensure!(s.lattice.sq(&w).is_zero(), "d = {d}, n = {n}: hH - kB has square {}", s.lattice.sq(&w));
            ensure!(w == m.witness, "d = {d}, n = {n}: witness {:?}", m.witness);
            ensure!(s.lattice.pair_q(&to_qvec(&w), &s.ray(&m.gamma)).is_zero(), "d = {d}, n = {n}: not on the ray");
        }
    }
    ensure!(squares > 0, "no square cases");
    let m = movable_hilb(&int(1), &int(7)).map_err(|e| e.to_string())?;
    ensure!(m.case == 3, "d = 1, n = 7: case {}", m.case);
    ensure!(m.gamma == BigRational::new(int(2), int(5)), "d = 1, n = 7: gamma {}", m.gamma);
    Ok(())
}

fn rank_two_example() -> Check {
    let l = Lattice::mukai_from_ns(&[ivec(&[28, 0]), ivec(&[0, -4])]).map_err(|e| e.to_string())?;
    let v = ivec(&[1, 0, 0, -1]);
    // (v, a) = r − s, so (v, a) = 1 fixes s = r − 1
    let mut flops = 0;
    for r in -50i64..=50 {
        let s = r - 1;
        if s.abs() > 50 {
            continue;
        }
        for x in -50i64..=50 {
            for y in -50i64..=50 {
                if 28 * x * x - 4 * y * y - 2 * r * s != -2 {
                    continue;
                }
                let a = ivec(&[r, x, y, s]);
                let h = make_wall_lattice(&l, &v, &a).map_err(|e| e.to_string())?;
                if classify(&h).map_err(|e| e.to_string())?.kind == WallKind::Flopping {
                    flops += 1;
                }
            }
        }
    }
    ensure!(flops == 0, "{flops} flop witnesses in the box");
    for r in 0..4i64 {
        for x in 0..4i64 {
            for y in 0..4i64 {
                let sq = l.sq(&ivec(&[r, x, y, r - 1]));
                ensure!((sq + 2i64) % 4i64 != BigInt::zero(), "residue ({r}, {x}, {y}) has square -2 mod 4");
            }
        }
    }
    let ample: QVec = to_qvec(&ivec(&[1, 1, 0, 1]));
    let (wits, _) = divisorial_witnesses(&l, &v, &ample, &BigRational::from_integer(int(82))).map_err(|e| e.to_string())?;
    let found: BTreeSet<IVec> = wits
        .iter()
        .filter(|g| g.witness_square == int(-2))
        .map(|g| sign_normalize(&[g.witness[0].clone(), g.witness[1].clone(), g.witness[2].clone()]))
        .collect();
    for (xx, aa, bb) in [(1i64, 0i64, 0i64), (15, 4, 0), (7, 2, 2)] {
        ensure!(xx * xx - 2 * (7 * aa * aa - bb * bb) == 1, "({xx}, {aa}, {bb}) is not a solution");
        ensure!(found.contains(&ivec(&[xx, aa, bb])), "({xx}, {aa}, {bb}) not among {found:?}");
    }
    Ok(())
}

/// Coordinate bound for parts, from the ellipse `2(u,v)²/v² − u² ≤ 2v²`.
fn part_box(h: &WallLattice) -> i64 {
    let g = h.form.gram();
    let g: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    let (vx, vy) = (h.v_coords.0.to_f64().unwrap(), h.v_coords.1.to_f64().unwrap());
    let gv = [g[0][0] * vx + g[0][1] * vy, g[1][0] * vx + g[1][1] * vy];
    let vv = h.v_square().to_f64().unwrap();
    let p = |i: usize, j: usize| 2.0 * gv[i] * gv[j] / vv - g[i][j];
    let det = p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0);
    let bx = (2.0 * vv * p(1, 1) / det).sqrt();
    let by = (2.0 * vv * p(0, 0) / det).sqrt();
    bx.max(by).ceil() as i64 + 1
}

fn two_part_count_matches_oracle(h: &WallLattice) -> Check {
    let brute = partitions_brute(h, part_box(h)).into_iter().filter(|p| p.len() == 2).count();
    let fast = two_part_strata(h, true).map_err(|e| e.to_string())?.len();
    ensure!(fast == brute, "{fast} two-part strata, oracle finds {brute}");
    Ok(())
}

fn flop_strata() -> Check {
    for m in [3i64, 5, 7] {
        // Gram matrix [[-4, 2M], [2M, 4]] with M = 10m
        let h = WallLattice::new(BinaryForm::from_i64(-4, 20 * m, 4), (int(m), int(2))).map_err(|e| e.to_string())?;
        let s = strata_components(&h, true).map_err(|e| e.to_string())?;
        let want = (m as usize).div_ceil(2);
        ensure!(s.connected == want, "m = {m}: {} connected components, want {want}", s.connected);
        for c in &s.components {
            let top = &c.maximal[0];
            let refinable = s.poset.nodes.iter().any(|p| p != top && !p.is_trivial() && refines(p, top));
            ensure!(c.size == 1 && c.maximal.len() == 1 && !refinable, "m = {m}: component {c:?} is not isolated");
        }
        two_part_count_matches_oracle(&h).map_err(|e| format!("m = {m}: {e}"))?;
        if m == 3 {
            let strata = two_part_strata(&h, true).map_err(|e| e.to_string())?;
            let found: Vec<(Vec<Point>, BigInt)> = strata.into_iter().map(|t| (t.partition.parts, t.codim)).collect();
            let want = vec![
                (vec![(int(2), int(1)), (int(1), int(1))], int(175)),
                (vec![(int(3), int(1)), (int(0), int(1))], int(183)),
            ];
            ensure!(found == want, "m = 3: strata {found:?}");
        }
    }
    let h = WallLattice::new(BinaryForm::from_i64(2, 10, 2), (int(1), int(2))).map_err(|e| e.to_string())?;
    let s = strata_components(&h, true).map_err(|e| e.to_string())?;
    ensure!(s.connected == 1, "{} connected components", s.connected);
    let q = PositivePartition::from_parts(vec![(int(1), int(0)), (int(0), int(1)), (int(0), int(1))]);
    for top in &s.components[0].maximal {
        ensure!(refines(&q, top), "{q:?} does not refine {top:?}");
    }
    ensure!(s.components[0].common_refinements.contains(&q), "missing common refinement");
    two_part_count_matches_oracle(&h)
}

fn fibration_grid() -> Check {
    for d in 1..=12i64 {
        for n in 2..=12i64 {
            let s = HilbSetup::new(&int(d), &int(n)).map_err(|e| e.to_string())?;
            let f = fibration_classes(&s.lattice, &s.v, &int(4)).map_err(|e| e.to_string())?;
            let p = d * (n - 1);
            let r = (p as f64).sqrt().round() as i64;
            ensure!(f.complete, "d = {d}, n = {n}: incomplete answer");
            ensure!(f.classes.is_empty() != (r * r == p), "d = {d}, n = {n}: {} classes", f.classes.len());
        }
    }
    Ok(())
}

fn property_suites() -> Check {
    let mut rng = StdRng::seed_from_u64(7_761_616);
    pell_suite().map_err(|e| format!("(a) {e}"))?;
    represent_suite(&mut rng).map_err(|e| format!("(b) {e}"))?;
    reflection_and_saturation_suite(&mut rng).map_err(|e| format!("(c) {e}"))?;
    classification_suite(&mut rng).map_err(|e| format!("(d) {e}"))?;
    weyl_suite(&mut rng).map_err(|e| format!("(e) {e}"))?;
    nef_suite().map_err(|e| format!("(f) {e}"))
}

fn pell_suite() -> Check {
    // the scan is capped; beyond the cap the cyclic method is the reference
    let cap = 20_000u64;
    for d in 2..=500u64 {
        let r = (d as f64).sqrt().round() as u64;
        if r * r == d {
            continue;
        }
        let sol = pell_fundamental(&BigInt::from(d)).map_err(|e| e.to_string())?;
        ensure!(pell_chakravala(&BigInt::from(d)) == (sol.x.clone(), sol.y.clone()), "D = {d}: cyclic method disagrees");
        let expect = sol.y.to_u64().filter(|&y| y <= cap).map(|y| (sol.x.to_u64().unwrap(), y));
        ensure!(pell_brute(d, cap) == expect, "D = {d}: brute force disagrees");
    }
    Ok(())
}

fn represent_suite(rng: &mut StdRng) -> Check {
    let mut cases = 0;
    while cases < 100 {
        let (a, b, c) = (rng.gen_range(-9i64..=9), rng.gen_range(-9i64..=9), rng.gen_range(-9i64..=9));
        if b * b - a * c <= 0 {
            continue;
        }
        cases += 1;
        let n = rng.gen_range(-30i64..=30);
        let q = BinaryForm::from_i64(a, b, c);
        let mut fast: Vec<(i64, i64)> = all_in_box(&q, &int(n), &int(200))
            .iter()
            .map(|p| (p.0.to_i64().unwrap(), p.1.to_i64().unwrap()))
            .collect();
        fast.sort();
        let mut slow = represent_brute(a, b, c, n, 200);
        slow.sort();
        ensure!(fast == slow, "form ({a}, {b}, {c}), n = {n}");
    }
    Ok(())
}

fn random_vec(rng: &mut StdRng, len: usize, r: i64) -> IVec {
    (0..len).map(|_| int(rng.gen_range(-r..=r))).collect()
}

fn reflection_and_saturation_suite(rng: &mut StdRng) -> Check {
    for _ in 0..500 {
        let d = rng.gen_range(1i64..=12);
        let l = Lattice::mukai_from_ns(&[ivec(&[2 * d])]).map_err(|e| e.to_string())?;
        // s = (r, c, t) is spherical exactly when r t = d c² + 1
        let c = rng.gen_range(-6i64..=6);
        let m = d * c * c + 1;
        let divisors: Vec<i64> = (1..=m).filter(|k| m % k == 0).collect();
        let r = divisors[rng.gen_range(0..divisors.len())] * if rng.gen_bool(0.5) { 1 } else { -1 };
        let s = ivec(&[r, c, m / r]);
        ensure!(l.sq(&s) == int(-2), "{s:?} is not spherical");
        let (u, w) = (random_vec(rng, 3, 9), random_vec(rng, 3, 9));
        let ru = l.reflect(&s, &u).map_err(|e| e.to_string())?;
        let rw = l.reflect(&s, &w).map_err(|e| e.to_string())?;
        ensure!(l.reflect(&s, &ru).map_err(|e| e.to_string())? == u, "not an involution at {u:?}");
        ensure!(l.pair(&ru, &rw) == l.pair(&u, &w), "not an isometry for {s:?}");
        ensure!(l.reflect(&s, &s).map_err(|e| e.to_string())? == s.iter().map(|x| -x).collect::<IVec>(), "s is not negated");

        let big = Lattice::mukai_from_ns(&[ivec(&[2 * d, 1]), ivec(&[1, -2])]).map_err(|e| e.to_string())?;
        let gens: Vec<IVec> = (0..2)
            .map(|_| {
                let k = int(rng.gen_range(1i64..=4));
                random_vec(rng, 4, 5).iter().map(|x| x * &k).collect()
            })
            .collect();
        let sat = big.saturate(&gens).map_err(|e| e.to_string())?;
        ensure!(elementary_divisors(&sat.basis).iter().all(|e| e.is_one()), "saturation of {gens:?} is not primitive");
        for g in &gens {
            ensure!(sat.coords_of(g).is_some(), "{g:?} left the saturation");
        }
    }
    Ok(())
}

fn random_unimodular(rng: &mut StdRng) -> Mat2 {
    let mut m = mat2(1, 0, 0, 1);
    for _ in 0..rng.gen_range(1..6) {
        let t = rng.gen_range(-3i64..=3);
        let e = match rng.gen_range(0..4) {
            0 => mat2(1, t, 0, 1),
            1 => mat2(1, 0, t, 1),
            2 => mat2(0, 1, 1, 0),
            _ => mat2(-1, 0, 0, 1),
        };
        m = mat2_mul(&m, &e);
    }
    m
}

fn classification_suite(rng: &mut StdRng) -> Check {
    let mut cases: Vec<WallLattice> = Vec::new();
    let s = HilbSetup::new(&int(1), &int(7)).map_err(|e| e.to_string())?;
    for row in walls_table(&s.d, &s.n).map_err(|e| e.to_string())? {
        cases.push(make_wall_lattice(&s.lattice, &s.v, &row.a).map_err(|e| e.to_string())?);
    }
    while cases.len() < 40 {
        let form = BinaryForm::from_i64(rng.gen_range(-8..=8), rng.gen_range(-8..=8), rng.gen_range(-8..=8));
        let v: Point = (int(rng.gen_range(-4..=4)), int(rng.gen_range(-4..=4)));
        if let Ok(h) = WallLattice::new(form, v) {
            cases.push(h);
        }
    }
    for h in &cases {
        let base = classify(h).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let m = random_unimodular(rng);
            let moved = WallLattice::new(h.form.transform(&m), mat2_apply(&mat2_inv_unimodular(&m), &h.v_coords))
                .map_err(|e| e.to_string())?;
            let c = classify(&moved).map_err(|e| e.to_string())?;
            ensure!(
                c.kind == base.kind && c.totally_semistable == base.totally_semistable,
                "form {:?} with v = {:?} changes class under {m:?}",
                h.form,
                h.v_coords
            );
        }
    }
    Ok(())
}

/// Exceptional classes bounding the movable cone of the Hilbert scheme, positive on `ample`.
fn hilb_exceptional(s: &HilbSetup, ample: &[BigRational]) -> Result<Vec<QVec>, String> {
    let l = &s.lattice;
    let mut out = vec![to_qvec(&s.b)];
    let m = movable_hilb(&s.d, &s.n).map_err(|e| e.to_string())?;
    let vv = l.sq(&s.v);
    match m.case {
        2 => out.push(to_qvec(&m.witness)),
        3 => {
            let k = l.pair(&s.v, &m.witness);
            out.push(to_qvec(&m.witness.iter().zip(&s.v).map(|(w, v)| &vv * w - &k * v).collect::<IVec>()));
        }
        _ => {}
    }
    Ok(out
        .into_iter()
        .map(|e| if l.pair_q(&e, ample).is_negative() { e.iter().map(|x| -x).collect() } else { e })
        .collect())
}

fn weyl_suite(rng: &mut StdRng) -> Check {
    let mut done = 0;
    while done < 100 {
        let (d, n) = (rng.gen_range(1i64..=6), rng.gen_range(2i64..=8));
        let (x, y) = (rng.gen_range(-12i64..=12), rng.gen_range(-12i64..=12));
        let s = HilbSetup::new(&int(d), &int(n)).map_err(|e| e.to_string())?;
        let l = &s.lattice;
        let mut dv = to_qvec(&ivec(&[y, x, y * (n - 1)]));
        if !l.pair_q(&dv, &dv).is_positive() {
            continue;
        }
        done += 1;
        let m = movable_hilb(&s.d, &s.n).map_err(|e| e.to_string())?;
        let ample = s.ray(&(&m.gamma / BigRational::from_integer(int(2))));
        let exc = hilb_exceptional(&s, &ample)?;
        if l.pair_q(&dv, &ample).is_negative() {
            dv = dv.iter().map(|c| -c).collect();
        }
        let (img, _) = weyl_map_to_movable(l, &s.v, &dv, &exc).map_err(|e| e.to_string())?;
        let ctx = format!("d = {d}, n = {n}, class ({y}, {x})");
        ensure!(l.pair_q(&img, &img) == l.pair_q(&dv, &dv), "{ctx}: square changed");
        ensure!(exc.iter().all(|e| !l.pair_q(&img, e).is_negative()), "{ctx}: image outside the chamber");
        let (again, word) = weyl_map_to_movable(l, &s.v, &img, &exc).map_err(|e| e.to_string())?;
        ensure!(again == img && word.is_empty(), "{ctx}: not idempotent");
    }
    Ok(())
}

fn nef_suite() -> Check {
    let mut regions = 0;
    for d in 1..=4i64 {
        let l = Lattice::mukai_from_ns(&[ivec(&[2 * d])]).map_err(|e| e.to_string())?;
        for v in [[1, 0, -1], [1, 0, -2], [1, 0, -3], [1, 1, -1], [2, 1, -1], [1, 0, -6], [2, 1, -2], [1, 1, 0]] {
            let v = ivec(&v);
            let vv = l.sq(&v);
            if !vv.is_positive() || vv > int(12) {
                continue;
            }
            let rays = positive_rays(&l, &v)?;
            for (i, j) in [(0usize, 1usize), (0, 2), (1, 3)] {
                if j >= rays.len() {
                    continue;
                }
                let region = SearchRegion::from_integer_rays(&[rays[i].clone(), rays[j].clone()]);
                let ample: QVec = to_qvec(&rays[i]).iter().zip(&to_qvec(&rays[j])).map(|(a, b)| a + b).collect();
                let got = nef_walls(&l, &v, &region, &ample).map_err(|e| e.to_string())?;
                let bound = got.walls.iter().map(|w| max_norm(&w.witness)).max().unwrap_or_else(BigInt::zero).max(int(6));
                let bound = bound.to_i64().filter(|&b| b <= 14).ok_or(format!("witness box {bound} too large"))?;
                let fast: BTreeSet<IVec> = got.walls.iter().map(|w| sign_normalize(&w.normal)).collect();
                let slow = nef_normals_brute(&l, &v, &region.rays, bound).map_err(|e| e.to_string())?;
                ensure!(fast == slow, "d = {d}, v = {v:?}: {fast:?} against {slow:?}");
                regions += 1;
            }
        }
    }
    ensure!(regions >= 20, "only {regions} regions checked");
    Ok(())
}

/// Positive classes of `v⊥` with small coordinates, oriented into one component.
fn positive_rays(l: &Lattice, v: &[BigInt]) -> Result<Vec<IVec>, String> {
    let perp = l.vperp_basis(v).map_err(|e| e.to_string())?;
    let mut out: Vec<IVec> = Vec::new();
    for x in -3i64..=3 {
        for y in -3i64..=3 {
            let w = perp.embed(&ivec(&[x, y]));
            if !l.sq(&w).is_positive() || !is_primitive(&w) {
                continue;
            }
            let w = match out.first() {
                Some(f) if l.pair(f, &w).is_negative() => w.iter().map(|c| -c).collect(),
                _ => w,
            };
            let parallel = |o: &IVec| (0..o.len()).all(|i| (0..o.len()).all(|j| &o[i] * &w[j] == &o[j] * &w[i]));
            if !out.iter().any(parallel) {
                out.push(w);
            }
        }
    }
    Ok(out)
}

//! Golden files: regenerated JSON compared byte for byte with the copies in `tests/golden`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use k3walls::arith::{int, ivec, rat, IVec, QVec};
use k3walls::cones::{divisorial_witnesses, fibration_classes, movable_walls, nef_walls, SearchRegion};
use k3walls::diophantine::BinaryForm;
use k3walls::hilbert::walls_table;
use k3walls::wall::WallLattice;
use k3walls::Lattice;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::commands::{flops_json, hilb_movable_json, hilb_nef2_json, hilb_rows_json};
use crate::input::{InputError, Parsed};
use crate::render;

pub const NAMES: [&str; 6] = ["ex13_2", "ex13_4", "prop13_1_grid", "rank2_examples", "ex14_3", "ex14_4"];

pub fn default_dir() -> PathBuf {
    match std::env::var_os("K3WALLS_GOLDEN_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden"),
    }
}

fn table_json(d: i64, n: i64) -> Parsed<Value> {
    let rows = walls_table(&int(d), &int(n)).map_err(|e| InputError(format!("hilbert scheme: {e}")))?;
    Ok(json!({"d": d.to_string(), "n": n.to_string(), "rows": hilb_rows_json(&rows)}))
}

fn is_square(n: i64) -> bool {
    let r = (n as f64).sqrt().round() as i64;
    r * r == n
}

fn prop13_1_grid() -> Parsed<Value> {
    let mut grid = Vec::new();
    for d in 1..=20 {
        for n in 2..=10 {
            grid.push(hilb_movable_json(&int(d), &int(n))?);
        }
    }
    let mut near = Vec::new();
    for n in 3..=50 {
        near.push(hilb_movable_json(&int(n - 2), &int(n))?);
    }
    let squares: Vec<Value> = grid
        .iter()
        .filter(|g| {
            let d: i64 = g["d"].as_str().unwrap().parse().unwrap();
            let n: i64 = g["n"].as_str().unwrap().parse().unwrap();
            is_square(d * (n - 1))
        })
        .cloned()
        .collect();
    Ok(json!({"grid": grid, "d_equals_n_minus_2": near, "square_cases": squares}))
}

fn lib<T>(what: &str, r: k3walls::Result<T>) -> Parsed<T> {
    r.map_err(|e| InputError(format!("{what}: {e}")))
}

fn gram(rows: &[&[i64]]) -> Vec<IVec> {
    rows.iter().map(|r| ivec(r)).collect()
}

fn qv(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| rat(x, 1)).collect()
}

/// Classes `a` in a coordinate box with `(v, a) = k` and `a² = m`, counted with `i64`
/// arithmetic. One coordinate is solved from the pairing condition. Returns `None` if an
/// entry does not fit or `v` pairs trivially with the lattice.
pub fn count_in_box(l: &Lattice, v: &[BigInt], k: i64, m: i64, bound: i64) -> Option<usize> {
    let g: Vec<Vec<i64>> = l.gram().iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect::<Option<_>>()?;
    let v: Vec<i64> = v.iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
    let n = g.len();
    let gv: Vec<i64> = (0..n).map(|i| (0..n).map(|j| g[i][j] * v[j]).sum()).collect();
    let solve = (0..n).find(|&j| gv[j] != 0)?;
    let free: Vec<usize> = (0..n).filter(|&j| j != solve).collect();
    let mut a = vec![0i64; n];
    for &i in &free {
        a[i] = -bound;
    }
    let mut count = 0;
    loop {
        let rest: i64 = free.iter().map(|&i| gv[i] * a[i]).sum();
        if (k - rest) % gv[solve] == 0 {
            a[solve] = (k - rest) / gv[solve];
            if a[solve].abs() <= bound {
                let sq: i64 = (0..n).map(|i| (0..n).map(|j| a[i] * g[i][j] * a[j]).sum::<i64>()).sum();
                if sq == m {
                    count += 1;
                }
            }
        }
        let mut idx = 0;
        loop {
            if idx == free.len() {
                return Some(count);
            }
            let i = free[idx];
            if a[i] < bound {
                a[i] += 1;
                break;
            }
            a[i] = -bound;
            idx += 1;
        }
    }
}

/// Residues of `(r, x, y)` mod 4 for which `a = (r, x, y, r − 1)` could have `a² = −2`.
pub fn mod4_residues(l: &Lattice) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for r in 0..4 {
        for x in 0..4 {
            for y in 0..4 {
                let a = ivec(&[r, x, y, r - 1]);
                let sq = l.sq(&a) + 2;
                if (sq % BigInt::from(4)) == BigInt::from(0) {
                    out.push([r, x, y]);
                }
            }
        }
    }
    out
}

fn rank2_examples() -> Parsed<Value> {
    // Hilbert square of a K3 with Néron-Severi form diag(28, −4)
    let l = lib("lattice", Lattice::mukai_from_ns(&gram(&[&[28, 0], &[0, -4]])))?;
    let v = ivec(&[1, 0, 0, -1]);
    let flops_in_box = count_in_box(&l, &v, 1, -2, 50).expect("small entries");
    let ample = qv(&[1, 1, 0, 1]);
    let (wits, _) = lib("effective", divisorial_witnesses(&l, &v, &ample, &rat(82, 1)))?;
    let mut spherical: Vec<[BigInt; 3]> = wits
        .iter()
        .filter(|w| w.witness_square == int(-2))
        .map(|w| {
            let s = &w.witness;
            let s: IVec = if s[0].is_negative() { s.iter().map(|x| -x).collect() } else { s.clone() };
            [s[0].clone(), s[1].clone(), s[2].clone()]
        })
        .collect();
    spherical.sort_by(|a, b| a[0].cmp(&b[0]).then_with(|| a.cmp(b)));
    spherical.dedup();
    let fib = lib("fibration", fibration_classes(&l, &v, &int(6)))?;
    let first = json!({
        "ns_gram": [[28, 0], [0, -4]],
        "v": render::ivec(&v),
        "flop_witnesses_in_box_50": flops_in_box,
        "mod4_residues_with_square_minus_2": mod4_residues(&l),
        "ample": render::qvec(&ample),
        "max_degree": "82",
        "spherical_solutions_x_a_b": spherical.iter().map(|s| render::ivec(s)).collect::<Vec<_>>(),
        "square_zero_classes_within_6": fib.classes.iter().map(|c| render::ivec(c)).collect::<Vec<_>>(),
    });

    // twisted lattice with every pairing against v divisible by 4
    let l = lib("lattice", Lattice::new(gram(&[&[4, 0, 0, 0], &[0, -4, 0, 0], &[0, 0, 0, 2], &[0, 0, 2, 0]]), None, true))?;
    let v = ivec(&[1, 0, 0, 0]);
    let region = SearchRegion::new(vec![qv(&[0, 0, 1, 1]), qv(&[0, 1, 3, 1])]);
    let ample = qv(&[0, 1, 4, 2]);
    let nef = lib("nef", nef_walls(&l, &v, &region, &ample))?;
    let mov = lib("movable", movable_walls(&l, &v, &region, &ample))?;
    let fib = lib("fibration", fibration_classes(&l, &v, &int(2)))?;
    let second = json!({
        "gram": [[4, 0, 0, 0], [0, -4, 0, 0], [0, 0, 0, 2], [0, 0, 2, 0]],
        "v": render::ivec(&v),
        "nef_walls": nef.walls.len(),
        "movable_walls": mov.walls.len(),
        "square_zero_classes_within_2": fib.classes.iter().map(|c| render::ivec(c)).collect::<Vec<_>>(),
    });

    // twisted lattice with every pairing against v divisible by 3
    let l = lib("lattice", Lattice::new(gram(&[&[6, 0, 0, 0], &[0, -6, 0, 0], &[0, 0, 0, 3], &[0, 0, 3, 0]]), None, true))?;
    let v = ivec(&[1, 0, 0, -1]);
    let region = SearchRegion::new(vec![qv(&[1, 0, 2, 0]), qv(&[1, 1, 2, 1])]);
    let ample = qv(&[2, 1, 4, 1]);
    let nef = lib("nef", nef_walls(&l, &v, &region, &ample))?;
    let mov = lib("movable", movable_walls(&l, &v, &region, &ample))?;
    let third = json!({
        "gram": [[6, 0, 0, 0], [0, -6, 0, 0], [0, 0, 0, 3], [0, 0, 3, 0]],
        "v": render::ivec(&v),
        "movable_walls": mov.walls.len(),
        "nef_walls": nef
            .walls
            .iter()
            .map(|w| json!({
                "normal": render::ivec(&w.normal),
                "witness": render::ivec(&w.witness),
                "kind": w.kind.name(),
                "position": w.position.as_ref().map(render::rat),
            }))
            .collect::<Vec<_>>(),
    });
    Ok(json!({"diag_28_minus_4": first, "circular_4": second, "polyhedral_3": third}))
}

fn flops_form(a: i64, b: i64, c: i64, x: i64, y: i64) -> Parsed<Value> {
    let h = WallLattice::new(BinaryForm::from_i64(a, b, c), (int(x), int(y)))
        .map_err(|e| InputError(format!("wall lattice: {e}")))?;
    Ok(flops_json(&h, true)?.0)
}

pub fn generate(name: &str) -> Parsed<Value> {
    match name {
        "ex13_2" => Ok(json!({"nef2": hilb_nef2_json(&int(31))?, "table": table_json(31, 2)?})),
        "ex13_4" => Ok(json!({"movable": hilb_movable_json(&int(1), &int(7))?, "table": table_json(1, 7)?})),
        "prop13_1_grid" => prop13_1_grid(),
        "rank2_examples" => rank2_examples(),
        "ex14_3" => Ok(json!({"m": 3, "M": 10, "flops": flops_form(2, 10, 2, 1, 2)?})),
        "ex14_4" => {
            let mut out = Vec::new();
            for m in [3i64, 5, 7] {
                out.push(json!({"m": m, "M": 10 * m, "flops": flops_form(-4, 20 * m, 4, m, 2)?}));
            }
            Ok(Value::Array(out))
        }
        other => Err(InputError(format!("golden: unknown name {other:?}; known names: {}", NAMES.join(", ")))),
    }
}

pub fn render_golden(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn selected(names: &[String]) -> Vec<String> {
    if names.is_empty() {
        NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    }
}

/// Paths where two JSON documents differ, with the stored and regenerated values.
pub fn diff(path: &str, expected: &Value, found: &Value, out: &mut Vec<Value>) {
    match (expected, found) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for k in keys {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match (a.get(k), b.get(k)) {
                    (Some(x), Some(y)) => diff(&p, x, y, out),
                    (x, y) => out.push(json!({"path": p, "expected": x, "found": y})),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            for i in 0..a.len().max(b.len()) {
                let p = format!("{path}[{i}]");
                match (a.get(i), b.get(i)) {
                    (Some(x), Some(y)) => diff(&p, x, y, out),
                    (x, y) => out.push(json!({"path": p, "expected": x, "found": y})),
                }
            }
        }
        (a, b) if a != b => out.push(json!({"path": path, "expected": a, "found": b})),
        _ => {}
    }
}

pub fn check(dir: &Path, names: &[String]) -> ExitCode {
    let mut failed = false;
    let mut report = Vec::new();
    for name in selected(names) {
        let fresh = match generate(&name) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
        let path = dir.join(format!("{name}.json"));
        let stored = match fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) => {
                failed = true;
                report.push(json!({"name": name, "status": "missing", "error": e.to_string()}));
                continue;
            }
        };
        if stored == render_golden(&fresh) {
            report.push(json!({"name": name, "status": "ok"}));
            continue;
        }
        failed = true;
        let mut differences = Vec::new();
        match serde_json::from_str::<Value>(&stored) {
            Ok(old) => diff("", &old, &fresh, &mut differences),
            Err(e) => differences.push(json!({"path": "", "error": format!("stored file is not JSON: {e}")})),
        }
        if differences.is_empty() {
            differences.push(json!({"path": "", "error": "formatting differs"}));
        }
        report.push(json!({"name": name, "status": "mismatch", "differences": differences}));
    }
    println!("{}", serde_json::to_string_pretty(&Value::Array(report)).expect("JSON values serialize"));
    if failed {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

pub fn write(dir: &Path, names: &[String]) -> ExitCode {
    if let Err(e) = fs::create_dir_all(dir) {
        eprintln!("error: golden: cannot create {}: {e}", dir.display());
        return ExitCode::from(2);
    }
    for name in selected(names) {
        let v = match generate(&name) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
        let path = dir.join(format!("{name}.json"));
        if let Err(e) = fs::write(&path, render_golden(&v)) {
            eprintln!("error: golden: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
        println!("wrote {}", path.display());
    }
    ExitCode::SUCCESS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_reports_paths() {
        let a = json!({"rows": [{"g": "1"}, {"g": "2"}], "x": 1});
        let b = json!({"rows": [{"g": "1"}, {"g": "3"}], "y": 1});
        let mut out = Vec::new();
        diff("", &a, &b, &mut out);
        let paths: Vec<&str> = out.iter().map(|d| d["path"].as_str().unwrap()).collect();
        assert_eq!(paths, ["rows[1].g", "x", "y"]);
        out.clear();
        diff("", &a, &a, &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn box_count_agrees_with_a_full_scan() {
        let l = Lattice::mukai_from_ns(&gram(&[&[2]])).unwrap();
        let v = ivec(&[1, 0, -2]);
        let mut slow = 0;
        for r in -6i64..=6 {
            for c in -6i64..=6 {
                for s in -6i64..=6 {
                    let a = ivec(&[r, c, s]);
                    if l.pair(&v, &a) == int(1) && l.sq(&a) == int(-2) {
                        slow += 1;
                    }
                }
            }
        }
        assert!(slow > 0);
        assert_eq!(count_in_box(&l, &v, 1, -2, 6), Some(slow));
    }

    #[test]
    fn every_name_generates() {
        for name in NAMES.iter().filter(|n| **n != "rank2_examples") {
            assert!(generate(name).is_ok(), "{name}");
        }
        assert!(generate("nope").is_err());
    }
}

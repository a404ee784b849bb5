//! One function per subcommand. Each produces a JSON value and a table rendering.

use k3walls::arith::{IVec, QVec};
use k3walls::cones::{
    effective_generators, fibration_classes, mori_generators, movable_walls, nef_walls, weyl_map_to_movable,
    ConeDescription, SearchRegion,
};
use k3walls::diophantine::{pell_fundamental, represent, BinaryForm, Point, RepresentMode};
use k3walls::flops::{strata_components, two_part_strata, PositivePartition};
use k3walls::hilbert::{movable_hilb, nef_hilb_n2, walls_table, NefHilbN2, WallRow};
use k3walls::wall::{
    classify as classify_wall, effective_cone, make_wall_lattice, minimal_class, orbit_list, ConeRay, EffectiveCone,
    Orientation, WallLattice,
};
use k3walls::Lattice;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::input::{check_rank, InputError, Parsed};
use crate::render::{self, fmt_point, fmt_qvec, fmt_rat, fmt_vec};

/// Rendered result of a subcommand.
pub struct Output {
    pub json: Value,
    pub table: String,
    /// Description of enumeration bounds, printed in verbose mode.
    pub trace: Option<String>,
}

impl Output {
    fn new(json: Value, table: String) -> Self {
        Output { json, table, trace: None }
    }
}

/// Prefixes library errors with the module whose precondition failed.
fn ctx<T>(module: &str, r: k3walls::Result<T>) -> Parsed<T> {
    r.map_err(|e| InputError(format!("{module}: {e}")))
}

pub fn pair(l: &Lattice, u: &IVec, w: &IVec) -> Parsed<Output> {
    check_rank(l, u, "--u")?;
    check_rank(l, w, "--w")?;
    let p = l.pair(u, w);
    let json = json!({
        "pairing": render::int(&p),
        "u_square": render::int(&l.sq(u)),
        "w_square": render::int(&l.sq(w)),
    });
    let table = render::fields(&[
        ("(u, w)", p.to_string()),
        ("u²", l.sq(u).to_string()),
        ("w²", l.sq(w).to_string()),
    ]);
    Ok(Output::new(json, table))
}

fn wall_lattice(l: &Lattice, v: &IVec, a: &IVec) -> Parsed<WallLattice> {
    check_rank(l, v, "--v")?;
    check_rank(l, a, "--a")?;
    ctx("wall lattice", make_wall_lattice(l, v, a))
}

fn point_json(h: &WallLattice, p: &Point) -> Value {
    let mut m = Map::new();
    m.insert("h".into(), render::point(p));
    if let Some(amb) = h.to_ambient(p) {
        m.insert("ambient".into(), render::ivec(&amb));
    }
    Value::Object(m)
}

fn point_text(h: &WallLattice, p: &Point) -> String {
    match h.to_ambient(p) {
        Some(a) => fmt_vec(&a),
        None => fmt_point(p),
    }
}

fn form_json(f: &BinaryForm) -> Value {
    json!([[f.a.to_string(), f.b.to_string()], [f.b.to_string(), f.c.to_string()]])
}

fn wall_header(h: &WallLattice) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("gram2".into(), form_json(&h.form));
    m.insert("v_coords".into(), render::point(&h.v_coords));
    if let Some(s) = &h.sublattice {
        m.insert("basis".into(), Value::Array(s.basis.iter().map(|b| render::ivec(b)).collect()));
    }
    m
}

pub fn classify(l: &Lattice, v: &IVec, a: &IVec) -> Parsed<Output> {
    let h = wall_lattice(l, v, a)?;
    let c = ctx("classify", classify_wall(&h))?;
    let mut m = wall_header(&h);
    m.insert("kind".into(), json!(c.kind.name()));
    m.insert("label".into(), json!(c.label()));
    m.insert("totally_semistable".into(), json!(c.totally_semistable.name()));
    let witnesses: Map<String, Value> = c
        .witnesses
        .iter()
        .map(|(k, pts)| (k.clone(), Value::Array(pts.iter().map(|p| point_json(&h, p)).collect())))
        .collect();
    m.insert("witnesses".into(), Value::Object(witnesses));
    let mut items = vec![
        ("kind", c.kind.name().to_string()),
        ("label", c.label().to_string()),
        ("totally semistable", c.totally_semistable.name().to_string()),
        ("wall lattice", format!("[[{}, {}], [{}, {}]]", h.form.a, h.form.b, h.form.b, h.form.c)),
        ("v in wall lattice", fmt_point(&h.v_coords)),
    ];
    let wit: Vec<(String, String)> = c
        .witnesses
        .iter()
        .map(|(k, pts)| (k.clone(), pts.iter().map(|p| point_text(&h, p)).collect::<Vec<_>>().join(" ")))
        .collect();
    for (k, v) in &wit {
        items.push((k.as_str(), v.clone()));
    }
    Ok(Output::new(Value::Object(m), render::fields(&items)))
}

fn ray_json(h: &WallLattice, r: &ConeRay) -> Value {
    match r {
        ConeRay::Spherical(p) => json!({"type": "spherical", "class": point_json(h, p)}),
        ConeRay::Isotropic(p) => json!({"type": "isotropic", "class": point_json(h, p)}),
        ConeRay::Irrational => json!({"type": "irrational"}),
    }
}

fn ray_text(h: &WallLattice, r: &ConeRay) -> String {
    match r {
        ConeRay::Spherical(p) => format!("spherical {}", point_text(h, p)),
        ConeRay::Isotropic(p) => format!("isotropic {}", point_text(h, p)),
        ConeRay::Irrational => "irrational".to_string(),
    }
}

fn cone_json(h: &WallLattice, c: &EffectiveCone) -> Value {
    json!({"cw": ray_json(h, &c.cw), "ccw": ray_json(h, &c.ccw)})
}

pub fn minimal(l: &Lattice, v: &IVec, a: &IVec, orientation: Orientation) -> Parsed<Output> {
    let h = wall_lattice(l, v, a)?;
    let cone = ctx("effective cone", effective_cone(&h, orientation))?;
    let (v0, word) = ctx("minimal class", minimal_class(&h, &h.v_coords, &cone))?;
    let mut m = wall_header(&h);
    m.insert("effective_cone".into(), cone_json(&h, &cone));
    m.insert("minimal".into(), point_json(&h, &v0));
    m.insert("reflections".into(), Value::Array(word.iter().map(|s| point_json(&h, s)).collect()));
    let table = render::fields(&[
        ("clockwise ray", ray_text(&h, &cone.cw)),
        ("counter-clockwise ray", ray_text(&h, &cone.ccw)),
        ("minimal class", point_text(&h, &v0)),
        ("reflections", word.iter().map(|s| point_text(&h, s)).collect::<Vec<_>>().join(" ")),
    ]);
    Ok(Output::new(Value::Object(m), table))
}

pub fn orbit(l: &Lattice, v: &IVec, a: &IVec, orientation: Orientation, count: usize) -> Parsed<Output> {
    let h = wall_lattice(l, v, a)?;
    let cone = ctx("effective cone", effective_cone(&h, orientation))?;
    let (v0, _) = ctx("minimal class", minimal_class(&h, &h.v_coords, &cone))?;
    let orbit = orbit_list(&h, &v0, count, &cone);
    let c = count as i64;
    let rows: Vec<Vec<String>> =
        orbit.iter().enumerate().map(|(i, p)| vec![(i as i64 - c).to_string(), point_text(&h, p)]).collect();
    let mut m = wall_header(&h);
    m.insert("effective_cone".into(), cone_json(&h, &cone));
    m.insert(
        "orbit".into(),
        Value::Array(
            orbit
                .iter()
                .enumerate()
                .map(|(i, p)| json!({"index": i as i64 - c, "class": point_json(&h, p)}))
                .collect(),
        ),
    );
    Ok(Output::new(Value::Object(m), render::table(&["index", "class"], &rows)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    Nef,
    Movable,
    Mori,
}

fn cone_output(d: &ConeDescription) -> Output {
    let walls: Vec<Value> = d
        .walls
        .iter()
        .map(|w| {
            json!({
                "normal": render::ivec(&w.normal),
                "witness": render::ivec(&w.witness),
                "witness_square": render::int(&w.witness_square),
                "witness_pairing": render::int(&w.witness_pairing),
                "kind": w.kind.name(),
                "totally_semistable": w.totally_semistable.name(),
                "position": w.position.as_ref().map(render::rat).unwrap_or(Value::Null),
            })
        })
        .collect();
    let gens: Vec<Value> = d
        .generators
        .iter()
        .map(|g| {
            json!({
                "class": render::qvec(&g.class),
                "ray": render::ivec(&g.ray),
                "witness": render::ivec(&g.witness),
                "witness_square": render::int(&g.witness_square),
                "witness_pairing": render::int(&g.witness_pairing),
            })
        })
        .collect();
    let json = json!({
        "ambient_basis": Value::Array(d.ambient.basis.iter().map(|b| render::ivec(b)).collect()),
        "walls": walls,
        "generators": gens,
        "includes_positive_cone": d.includes_positive_cone,
    });
    let mut table = String::new();
    if !d.walls.is_empty() || d.generators.is_empty() {
        let rows: Vec<Vec<String>> = d
            .walls
            .iter()
            .map(|w| {
                vec![
                    w.position.as_ref().map(fmt_rat).unwrap_or_default(),
                    fmt_vec(&w.normal),
                    fmt_vec(&w.witness),
                    w.witness_square.to_string(),
                    w.witness_pairing.to_string(),
                    w.kind.name().to_string(),
                    w.totally_semistable.name().to_string(),
                ]
            })
            .collect();
        table += &render::table(&["position", "normal", "witness", "a²", "(v,a)", "kind", "totally semistable"], &rows);
    }
    if !d.generators.is_empty() {
        let rows: Vec<Vec<String>> = d
            .generators
            .iter()
            .map(|g| {
                vec![
                    fmt_vec(&g.ray),
                    fmt_vec(&g.witness),
                    g.witness_square.to_string(),
                    g.witness_pairing.to_string(),
                ]
            })
            .collect();
        table += &render::table(&["ray", "witness", "a²", "(v,a)"], &rows);
    }
    if d.includes_positive_cone {
        table += "together with the positive cone\n";
    }
    Output { json, table, trace: Some(d.bound_trace.clone()) }
}

pub fn cone(kind: ConeKind, l: &Lattice, v: &IVec, region: Vec<QVec>, ample: &QVec) -> Parsed<Output> {
    check_rank(l, v, "--v")?;
    check_rank(l, ample, "--ample")?;
    for r in &region {
        check_rank(l, r, "--region")?;
    }
    let region = SearchRegion::new(region);
    let d = match kind {
        ConeKind::Nef => ctx("nef", nef_walls(l, v, &region, ample))?,
        ConeKind::Movable => ctx("movable", movable_walls(l, v, &region, ample))?,
        ConeKind::Mori => ctx("mori", mori_generators(l, v, &region, ample))?,
    };
    Ok(cone_output(&d))
}

pub fn effective(l: &Lattice, v: &IVec, ample: &QVec, max_degree: &BigRational) -> Parsed<Output> {
    check_rank(l, v, "--v")?;
    check_rank(l, ample, "--ample")?;
    let d = ctx("effective", effective_generators(l, v, ample, max_degree))?;
    Ok(cone_output(&d))
}

pub fn fibration(l: &Lattice, v: &IVec, bound: &BigInt) -> Parsed<Output> {
    check_rank(l, v, "--v")?;
    let f = ctx("fibration", fibration_classes(l, v, bound))?;
    let json = json!({
        "classes": Value::Array(f.classes.iter().map(|c| render::ivec(c)).collect()),
        "complete": f.complete,
        "exists": !f.classes.is_empty(),
    });
    let rows: Vec<Vec<String>> = f.classes.iter().map(|c| vec![fmt_vec(c)]).collect();
    let mut table = render::table(&["square-zero class in v⊥"], &rows);
    table += if f.complete { "complete\n" } else { "within the coordinate bound\n" };
    Ok(Output::new(json, table))
}

pub fn weyl(l: &Lattice, v: &IVec, d: &QVec, exceptional: &[QVec]) -> Parsed<Output> {
    check_rank(l, v, "--v")?;
    check_rank(l, d, "--d")?;
    for e in exceptional {
        check_rank(l, e, "--exceptional")?;
    }
    let (img, word) = ctx("weyl", weyl_map_to_movable(l, v, d, exceptional))?;
    let json = json!({
        "image": render::qvec(&img),
        "reflections": Value::Array(word.iter().map(|e| render::qvec(e)).collect()),
    });
    let table = render::fields(&[
        ("image", fmt_qvec(&img)),
        ("reflections", word.iter().map(|e| fmt_qvec(e)).collect::<Vec<_>>().join(" ")),
    ]);
    Ok(Output::new(json, table))
}

/// `(r, c, s)` written as `(r, cH, s)`.
pub fn hilb_class(a: &[BigInt]) -> String {
    let c = &a[1];
    let h = if c == &BigInt::from(0) {
        "0".to_string()
    } else if c == &BigInt::from(1) {
        "H".to_string()
    } else if c == &BigInt::from(-1) {
        "-H".to_string()
    } else {
        format!("{c}H")
    };
    format!("({}, {}, {})", a[0], h, a[2])
}

/// `hilb_class`, but a class of negative rank is written as the negation of one of positive rank.
pub fn hilb_class_printed(a: &[BigInt]) -> String {
    if a[0] < BigInt::from(0) {
        let neg: Vec<BigInt> = a.iter().map(|x| -x).collect();
        format!("-{}", hilb_class(&neg))
    } else {
        hilb_class(a)
    }
}

pub fn hilb_rows_json(rows: &[WallRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "gamma": render::rat(&r.gamma),
                    "a": render::ivec(&r.a),
                    "printed": hilb_class_printed(&r.a),
                    "a_square": render::int(&r.a_square),
                    "pairing": render::int(&r.pairing),
                    "kind": r.kind.name(),
                    "totally_semistable": r.totally_semistable.name(),
                    "label": r.label,
                })
            })
            .collect(),
    )
}

pub fn hilb_table(d: &BigInt, n: &BigInt) -> Parsed<Output> {
    let rows = ctx("hilbert scheme", walls_table(d, n))?;
    let text_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_rat(&r.gamma),
                hilb_class(&r.a),
                r.a_square.to_string(),
                r.pairing.to_string(),
                r.label.clone(),
            ]
        })
        .collect();
    let json = json!({"d": d.to_string(), "n": n.to_string(), "rows": hilb_rows_json(&rows)});
    Ok(Output::new(json, render::table(&["Γ", "a", "a²", "(v,a)", "type"], &text_rows)))
}

pub fn hilb_movable_json(d: &BigInt, n: &BigInt) -> Parsed<Value> {
    let m = ctx("hilbert scheme", movable_hilb(d, n))?;
    Ok(json!({
        "d": d.to_string(),
        "n": n.to_string(),
        "case": m.case,
        "gamma": render::rat(&m.gamma),
        "witness": render::ivec(&m.witness),
        "solution": m.solution.as_ref().map(render::point).unwrap_or(Value::Null),
        "kind": m.kind.map(|k| Value::from(k.name())).unwrap_or(Value::Null),
    }))
}

pub fn hilb_movable(d: &BigInt, n: &BigInt) -> Parsed<Output> {
    let m = ctx("hilbert scheme", movable_hilb(d, n))?;
    let json = hilb_movable_json(d, n)?;
    let table = render::fields(&[
        ("case", m.case.to_string()),
        ("Γ", fmt_rat(&m.gamma)),
        ("witness", hilb_class(&m.witness)),
        ("solution", m.solution.as_ref().map(fmt_point).unwrap_or_else(|| "-".into())),
        ("kind", m.kind.map(|k| k.name().to_string()).unwrap_or_else(|| "square-zero boundary".into())),
    ]);
    Ok(Output::new(json, table))
}

pub fn hilb_nef2_json(d: &BigInt) -> Parsed<Value> {
    Ok(match ctx("hilbert scheme", nef_hilb_n2(d))? {
        NefHilbN2::EqualsMovable => json!({"d": d.to_string(), "equals_movable": true}),
        NefHilbN2::Gamma { gamma, solution, spherical } => json!({
            "d": d.to_string(),
            "equals_movable": false,
            "gamma": render::rat(&gamma),
            "pell": render::point(&solution),
            "spherical": render::ivec(&spherical),
        }),
    })
}

pub fn hilb_nef2(d: &BigInt) -> Parsed<Output> {
    let json = hilb_nef2_json(d)?;
    let table = match ctx("hilbert scheme", nef_hilb_n2(d))? {
        NefHilbN2::EqualsMovable => "nef cone equals movable cone\n".to_string(),
        NefHilbN2::Gamma { gamma, solution, spherical } => render::fields(&[
            ("Γ", fmt_rat(&gamma)),
            ("spherical", hilb_class(&spherical)),
            ("Pell solution", fmt_point(&solution)),
        ]),
    };
    Ok(Output::new(json, table))
}

pub fn pell(d: &BigInt) -> Parsed<Output> {
    let s = ctx("pell", pell_fundamental(d))?;
    let json = json!({"x": s.x.to_string(), "y": s.y.to_string()});
    Ok(Output::new(json, render::fields(&[("x", s.x.to_string()), ("y", s.y.to_string())])))
}

pub fn represent_cmd(q: &BinaryForm, n: &BigInt, mode: &RepresentMode) -> Parsed<Output> {
    let pts = ctx("represent", represent(q, n, mode))?;
    let json = Value::Array(pts.iter().map(render::point).collect());
    let rows: Vec<Vec<String>> = pts.iter().map(|p| vec![p.0.to_string(), p.1.to_string()]).collect();
    Ok(Output::new(json, render::table(&["x", "y"], &rows)))
}

fn partition_json(h: &WallLattice, p: &PositivePartition) -> Value {
    Value::Array(p.parts.iter().map(|u| point_json(h, u)).collect())
}

fn partition_text(p: &PositivePartition) -> String {
    format!("[{}]", p.parts.iter().map(fmt_point).collect::<Vec<_>>().join(", "))
}

pub fn flops_json(h: &WallLattice, strict: bool) -> Parsed<(Value, String)> {
    let summary = ctx("flops", strata_components(h, strict))?;
    let strata = ctx("flops", two_part_strata(h, strict))?;
    let mut m = wall_header(h);
    m.insert(
        "partitions".into(),
        Value::Array(summary.poset.nodes.iter().map(|p| partition_json(h, p)).collect()),
    );
    m.insert(
        "two_part_strata".into(),
        Value::Array(
            strata
                .iter()
                .map(|s| json!({"partition": partition_json(h, &s.partition), "codim": render::int(&s.codim)}))
                .collect(),
        ),
    );
    m.insert("irreducible_components".into(), json!(summary.irreducible));
    m.insert("connected_components".into(), json!(summary.connected));
    m.insert(
        "components".into(),
        Value::Array(
            summary
                .components
                .iter()
                .map(|c| {
                    json!({
                        "maximal": Value::Array(c.maximal.iter().map(|p| partition_json(h, p)).collect()),
                        "common_refinements":
                            Value::Array(c.common_refinements.iter().map(|p| partition_json(h, p)).collect()),
                        "size": c.size,
                    })
                })
                .collect(),
        ),
    );
    m.insert("warning".into(), summary.warning.clone().map(Value::from).unwrap_or(Value::Null));
    let mut table = String::new();
    let rows: Vec<Vec<String>> = strata.iter().map(|s| vec![partition_text(&s.partition), s.codim.to_string()]).collect();
    table += &render::table(&["two-part stratum", "codim"], &rows);
    table += &render::fields(&[
        ("partitions", summary.poset.nodes.len().to_string()),
        ("irreducible components", summary.irreducible.to_string()),
        ("connected components", summary.connected.to_string()),
    ]);
    for (i, c) in summary.components.iter().enumerate() {
        let refs = c.common_refinements.iter().map(partition_text).collect::<Vec<_>>().join(" ");
        table += &format!(
            "component {i}: maximal {} common refinements {}\n",
            c.maximal.iter().map(partition_text).collect::<Vec<_>>().join(" "),
            if refs.is_empty() { "none".to_string() } else { refs }
        );
    }
    if let Some(w) = &summary.warning {
        table += &format!("warning: {w}\n");
    }
    Ok((Value::Object(m), table))
}

pub fn flops(h: &WallLattice, strict: bool) -> Parsed<Output> {
    let (json, table) = flops_json(h, strict)?;
    Ok(Output::new(json, table))
}

pub fn flops_lattice(l: &Lattice, v: &IVec, a: &IVec, strict: bool) -> Parsed<Output> {
    let h = wall_lattice(l, v, a)?;
    flops(&h, strict)
}

use k3walls::arith::{int, ivec, mat2, mat2_apply, mat2_inv_unimodular, mat2_mul, Mat2};
use k3walls::diophantine::{BinaryForm, Point};
use k3walls::lattice::Lattice;
use k3walls::wall::{
    classify, effective_cone, make_wall_lattice, minimal_class, orbit_list, Orientation, WallKind, WallLattice,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn wall_lattice() -> impl Strategy<Value = WallLattice> {
    (-8i64..=8, -8i64..=8, -8i64..=8, -4i64..=4, -4i64..=4).prop_filter_map("hyperbolic with v² > 0", |(a, b, c, x, y)| {
        WallLattice::new(BinaryForm::from_i64(a, b, c), (int(x), int(y))).ok()
    })
}

fn unimodular() -> impl Strategy<Value = Mat2> {
    proptest::collection::vec((0usize..4, -3i64..=3), 1..6).prop_map(|steps| {
        let mut m = mat2(1, 0, 0, 1);
        for (kind, t) in steps {
            let e = match kind {
                0 => mat2(1, t, 0, 1),
                1 => mat2(1, 0, t, 1),
                2 => mat2(0, 1, 1, 0),
                _ => mat2(-1, 0, 0, 1),
            };
            m = mat2_mul(&m, &e);
        }
        m
    })
}

fn add(p: &Point, q: &Point) -> Point {
    (&p.0 + &q.0, &p.1 + &q.1)
}

fn reflect(h: &WallLattice, s: &Point, u: &Point) -> Point {
    let k = h.form.pair(u, s);
    (&u.0 + &k * &s.0, &u.1 + &k * &s.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn classification_ignores_coordinates(h in wall_lattice(), ms in proptest::collection::vec(unimodular(), 4)) {
        let base = classify(&h).unwrap();
        for m in ms {
            let inv = mat2_inv_unimodular(&m);
            let moved = WallLattice::new(h.form.transform(&m), mat2_apply(&inv, &h.v_coords)).unwrap();
            let c = classify(&moved).unwrap();
            prop_assert_eq!(c.kind, base.kind);
            prop_assert_eq!(c.totally_semistable, base.totally_semistable);
        }
    }

    #[test]
    fn witnesses_have_their_defining_numerics(h in wall_lattice()) {
        let c = classify(&h).unwrap();
        let vv = h.v_square();
        for (key, pts) in &c.witnesses {
            for p in pts {
                let sq = h.form.eval(p);
                let k = h.pair_v(p);
                match key.as_str() {
                    "brill_noether" => prop_assert!(sq == int(-2) && k.is_zero()),
                    "hilbert_chow" | "totally_semistable_isotropic" => prop_assert!(sq.is_zero() && k.is_one()),
                    "li_gieseker_uhlenbeck" => prop_assert!(sq.is_zero() && k == int(2)),
                    "flopping_spherical" => prop_assert!(sq == int(-2) && k.is_positive() && &k * 2 <= vv),
                    "positive_decomposition" => prop_assert!(!sq.is_negative() && k.is_positive()),
                    "totally_semistable_spherical" => prop_assert!(sq == int(-2) && k.is_negative()),
                    other => prop_assert!(false, "unexpected witness key {}", other),
                }
            }
        }
        if let Some(parts) = c.witnesses.get("positive_decomposition") {
            prop_assert_eq!(add(&parts[0], &parts[1]), h.v_coords.clone());
        }
        let expect_kind = if c.witnesses.contains_key("brill_noether") {
            WallKind::BrillNoether
        } else if c.witnesses.contains_key("hilbert_chow") {
            WallKind::HilbertChow
        } else if c.witnesses.contains_key("li_gieseker_uhlenbeck") {
            WallKind::LiGiesekerUhlenbeck
        } else if c.witnesses.contains_key("flopping_spherical") || c.witnesses.contains_key("positive_decomposition") {
            WallKind::Flopping
        } else {
            WallKind::NoContraction
        };
        prop_assert_eq!(c.kind, expect_kind);
    }

    #[test]
    fn minimal_class_descends_and_orbit_preserves_square(h in wall_lattice()) {
        for o in [Orientation::PlusSide, Orientation::MinusSide] {
            let cone = effective_cone(&h, o).unwrap();
            let (v0, word) = minimal_class(&h, &h.v_coords, &cone).unwrap();
            prop_assert_eq!(h.form.eval(&v0), h.v_square());
            for r in cone.rays() {
                if let Some(s) = r.spherical() {
                    prop_assert_eq!(h.form.eval(s), int(-2));
                    prop_assert!(!h.form.pair(&v0, s).is_negative());
                }
            }
            let mut back = v0.clone();
            for s in &word {
                back = reflect(&h, s, &back);
            }
            prop_assert_eq!(back, h.v_coords.clone());
            let orbit = orbit_list(&h, &v0, 3, &cone);
            prop_assert_eq!(orbit.len(), 7);
            prop_assert_eq!(&orbit[3], &v0);
            for u in &orbit {
                prop_assert_eq!(h.form.eval(u), h.v_square());
            }
        }
    }
}

#[test]
fn ambient_wall_lattices_contain_v_and_a() {
    for d in 1..=4 {
        let l = Lattice::mukai_from_ns(&[ivec(&[2 * d])]).unwrap();
        for n in 2..=6 {
            let v = ivec(&[1, 0, 1 - n]);
            for a in [ivec(&[0, 0, -1]), ivec(&[1, -1, 1]), ivec(&[2, -3, 5]), ivec(&[1, -2, 4])] {
                let Ok(h) = make_wall_lattice(&l, &v, &a) else { continue };
                let sub = h.sublattice.as_ref().unwrap();
                assert_eq!(h.to_ambient(&h.v_coords).unwrap(), v);
                let coords = sub.coords_of(&a).expect("a lies in its wall lattice");
                assert_eq!(sub.embed(&coords), a);
                assert!(h.form.det().is_negative());
                let g = l.gram_of(&sub.basis);
                assert_eq!(BinaryForm::from_gram(&g).unwrap(), h.form);
            }
        }
    }
}

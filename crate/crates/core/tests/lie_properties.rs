mod common;

use proptest::prelude::*;
use weylgrowth::cone::{avoids_facet, conv_hull_member, dual_cone, in_cone_exact, interior_dual_member, PolyCone};
use weylgrowth::rational::{primitive, q, qvec, QVec};
use weylgrowth::RootSystem;

use common::{dominant_from, hull_member_by_enumeration, orbit_by_reflections};

const PRESETS: [&str; 8] = ["a1", "a2", "a3", "b2", "b3", "c3", "g2", "so(2,5)"];

fn preset(i: usize) -> RootSystem {
    RootSystem::preset(PRESETS[i % PRESETS.len()]).unwrap()
}

fn vector(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, rank)
}

fn pad(v: &[i64], rank: usize) -> QVec {
    qvec(&v[..rank])
}

/// Primitive extremal rays: drop generators in the cone of the others.
fn extremal(gens: &[QVec]) -> Vec<QVec> {
    let mut rays: Vec<QVec> = gens.iter().map(|g| primitive(g)).collect();
    rays.sort();
    rays.dedup();
    let mut k = 0;
    while k < rays.len() {
        let others: Vec<QVec> = rays.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, r)| r.clone()).collect();
        if !others.is_empty() && in_cone_exact(&others, &rays[k]) {
            rays.remove(k);
        } else {
            k += 1;
        }
    }
    rays
}

#[test]
fn opposition_and_rho() {
    for name in PRESETS.iter().chain(&["d4", "e6", "su(2,5)", "sl(4,c)", "so(3,6)"]) {
        let rs = RootSystem::preset(name).unwrap();
        assert_eq!(&rs.iota(rs.rho()), rs.rho(), "{name}");
        for (i, w) in rs.fundamental_weights().iter().enumerate() {
            assert_eq!(rs.iota(&rs.iota(w)), *w, "{name}");
            assert_eq!(rs.iota(w), rs.fundamental_weights()[rs.iota_perm()[i]], "{name}");
        }
    }
}

#[test]
fn theta_roots_are_strongly_orthogonal() {
    for name in PRESETS.iter().chain(&["d4", "e6", "so(3,6)", "su(2,5)"]) {
        let rs = RootSystem::preset(name).unwrap();
        let roots: Vec<QVec> =
            rs.positive_roots().iter().flat_map(|p| [p.vector.clone(), weylgrowth::rational::neg(&p.vector)]).collect();
        let th = rs.theta_roots();
        for (i, b) in th.iter().enumerate() {
            for c in &th[i + 1..] {
                let sum = weylgrowth::rational::add(b, c);
                let diff = weylgrowth::rational::sub(b, c);
                assert!(!roots.contains(&sum) && !roots.contains(&diff), "{name}");
            }
        }
    }
}

#[test]
fn conv_hull_w_invariance() {
    let rs = RootSystem::preset("b3").unwrap();
    let w = rs.weyl_group().unwrap();
    let mu = dominant_from(&rs, &[1, 2, 1], 1);
    for lambda in [qvec(&[1, 1, 0]), qvec(&[3, 1, 1]), qvec(&[2, -2, 1])] {
        let inside = conv_hull_member(&rs, &lambda, &mu).unwrap();
        for e in w.elements() {
            assert_eq!(conv_hull_member(&rs, &e.act(&rs, &lambda), &mu).unwrap(), inside);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn weyl_group_preserves_the_form(p in 0usize..8, x in vector(3), y in vector(3), k in 0usize..10_000) {
        let rs = preset(p);
        let n = rs.rank();
        let (x, y) = (pad(&x, n), pad(&y, n));
        let w = rs.weyl_group().unwrap();
        let e = &w.elements()[k % w.len()];
        prop_assert_eq!(rs.pair(&e.act(&rs, &x), &e.act(&rs, &y)), rs.pair(&x, &y));
    }

    #[test]
    fn dominant_representative_is_in_orbit(p in 0usize..8, x in vector(3)) {
        let rs = preset(p);
        let x = pad(&x, rs.rank());
        let d = rs.dominant(&x);
        prop_assert!(rs.is_dominant(&d));
        prop_assert!(orbit_by_reflections(&rs, &x).contains(&d));
    }

    #[test]
    fn dominant_vectors_make_acute_angles(p in 0usize..8, a in prop::collection::vec(0i64..5, 3), b in prop::collection::vec(0i64..5, 3)) {
        let rs = preset(p);
        let n = rs.rank();
        prop_assume!(a[..n].iter().any(|&c| c > 0) && b[..n].iter().any(|&c| c > 0));
        let (v, w) = (dominant_from(&rs, &a[..n], 1), dominant_from(&rs, &b[..n], 1));
        prop_assert!(rs.pair(&v, &w) > q(0));
    }

    #[test]
    fn conv_hull_member_matches_enumeration(
        p in prop::sample::select(vec!["a2", "a3", "b2", "b3", "g2"]),
        mu in prop::collection::vec(0i64..4, 3),
        lambda in vector(3),
        den in 1i64..3,
    ) {
        let rs = RootSystem::preset(p).unwrap();
        let n = rs.rank();
        prop_assume!(mu[..n].iter().any(|&c| c > 0));
        let mu = dominant_from(&rs, &mu[..n], 1);
        let lambda: QVec = pad(&lambda, n).iter().map(|x| x / q(den)).collect();
        prop_assert_eq!(conv_hull_member(&rs, &lambda, &mu).unwrap(), hull_member_by_enumeration(&rs, &lambda, &mu));
    }

    #[test]
    fn dual_cone_is_an_involution(p in 0usize..8, coeffs in prop::collection::vec(prop::collection::vec(0i64..4, 3), 2..5)) {
        let rs = preset(p);
        let n = rs.rank();
        let gens: Vec<QVec> = coeffs.iter().map(|c| dominant_from(&rs, &c[..n], 1)).filter(|v| v.iter().any(|x| *x != q(0))).collect();
        prop_assume!(!gens.is_empty());
        let c = PolyCone::from_generators(rs.gram(), gens).unwrap();
        let (d, e) = dual_cone(&c, 4);
        prop_assert!(e.is_none());
        let (dd, e) = dual_cone(&d, 4);
        prop_assert!(e.is_none());
        prop_assert_eq!(extremal(c.generators().unwrap()), extremal(dd.generators().unwrap()));
    }

    #[test]
    fn larger_cones_have_smaller_duals(p in 0usize..8, coeffs in prop::collection::vec(prop::collection::vec(0i64..4, 3), 3..5)) {
        let rs = preset(p);
        let n = rs.rank();
        let gens: Vec<QVec> = coeffs.iter().map(|c| dominant_from(&rs, &c[..n], 1)).filter(|v| v.iter().any(|x| *x != q(0))).collect();
        prop_assume!(gens.len() >= 2);
        let small = PolyCone::from_generators(rs.gram(), gens[..1].to_vec()).unwrap();
        let big = PolyCone::from_generators(rs.gram(), gens).unwrap();
        prop_assert!(small.is_subcone_of(&big).unwrap());
        let (ds, _) = dual_cone(&small, 4);
        let (db, _) = dual_cone(&big, 4);
        prop_assert!(db.is_subcone_of(&ds).unwrap());
    }

    #[test]
    fn avoiding_a_facet_puts_omega_in_the_dual_interior(p in 0usize..8, coeffs in prop::collection::vec(prop::collection::vec(0i64..4, 3), 1..5)) {
        let rs = preset(p);
        let n = rs.rank();
        let gens: Vec<QVec> = coeffs.iter().map(|c| dominant_from(&rs, &c[..n], 1)).filter(|v| v.iter().any(|x| *x != q(0))).collect();
        prop_assume!(!gens.is_empty());
        let c = PolyCone::from_generators(rs.gram(), gens).unwrap();
        for a in 0..n {
            if avoids_facet(&rs, &c, a).unwrap() {
                prop_assert!(interior_dual_member(&c, &rs.fundamental_weights()[a]).unwrap());
            }
        }
    }
}

use weylgrowth::orbit::*;
use weylgrowth::par::ExecMode;

fn diag_hyperbolic(t: f64) -> Vec<Vec<f64>> {
    vec![vec![t.exp(), 0.0], vec![0.0, (-t).exp()]]
}

/// `R diag(e^t, e^-t) R⁻¹` with `R` the rotation by `angle`.
fn rotated_hyperbolic(t: f64, angle: f64) -> Vec<Vec<f64>> {
    let (c, s) = (angle.cos(), angle.sin());
    let (a, b) = (t.exp(), (-t).exp());
    vec![vec![a * c * c + b * s * s, (a - b) * c * s], vec![(a - b) * c * s, a * s * s + b * c * c]]
}

fn block(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len() + b.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..a.len() {
        for j in 0..a.len() {
            m[i][j] = a[i][j];
        }
    }
    for i in 0..b.len() {
        for j in 0..b.len() {
            m[a.len() + i][a.len() + j] = b[i][j];
        }
    }
    m
}

fn cyclic(len: usize) -> MatrixGroup {
    let e = 1f64.exp();
    MatrixGroup::new(&MatrixGroupSpec {
        ambient: "sl3r".into(),
        generators: vec![vec![vec![e, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0 / e]]],
        max_word_length: len,
        dedupe_tolerance: 1e-6,
    })
    .unwrap()
}

fn schottky(len: usize) -> MatrixGroup {
    MatrixGroup::new(&MatrixGroupSpec {
        ambient: "sl2r".into(),
        generators: vec![diag_hyperbolic(2.0), rotated_hyperbolic(2.0, std::f64::consts::FRAC_PI_4)],
        max_word_length: len,
        dedupe_tolerance: 1e-6,
    })
    .unwrap()
}

#[test]
fn cyclic_exponent_is_zero() {
    let g = cyclic(600);
    let s = enumerate_orbit(&g, 10_000, ExecMode::Parallel).unwrap();
    assert_eq!(s.points.len(), 1201);
    let est = estimate_exponent(&s, &[0.5, 0.0, -0.5]).unwrap();
    assert!(est.estimate.abs() <= 0.05, "{est:?}");
    assert_eq!(est.label, ESTIMATE_LABEL);
    // Too few points for an estimate.
    let small = enumerate_orbit(&cyclic(10), 100, ExecMode::Parallel).unwrap();
    assert!(estimate_exponent(&small, &[0.5, 0.0, -0.5]).is_err());
}

#[test]
fn inverse_symmetry_and_subadditivity() {
    for g in [cyclic(10), schottky(8)] {
        let s = enumerate_orbit(&g, 100_000, ExecMode::Parallel).unwrap();
        let rep = check_iota_symmetry(&g, &s, 1e-6, ExecMode::Parallel);
        assert!(rep.holds, "{rep:?}");
        assert_eq!(rep.pairs_checked, s.points.len());
        assert!(check_subadditivity(&g, &s, 500, 3).holds);
        assert_eq!(s.dominance_violations(1e-6), 0);
    }
}

#[test]
fn block_embedded_sample_matches_exact_products() {
    // Two hyperbolic elements of SL(2) × SL(2) inside SL(4).
    let a = block(&diag_hyperbolic(0.7), &rotated_hyperbolic(0.4, 0.3));
    let b = block(&rotated_hyperbolic(0.5, 1.1), &diag_hyperbolic(0.9));
    let spec =
        MatrixGroupSpec { ambient: "sl4r".into(), generators: vec![a, b], max_word_length: 8, dedupe_tolerance: 1e-6 };
    let g = MatrixGroup::new(&spec).unwrap();
    let s = enumerate_orbit(&g, 100_000, ExecMode::Parallel).unwrap();
    assert_eq!(s.points.len(), 1 + 4 * (3usize.pow(8) - 1) / 2);
    let rep = validate_with_oracle(&g, &s, 100, 5, ExecMode::Parallel);
    assert_eq!(rep.words_checked, 100);
    assert!(rep.max_error < 1e-9, "{rep:?}");
}

#[test]
fn schottky_estimate_is_stable_in_depth() {
    let mu = [0.5, -0.5];
    let deep = estimate_exponent(&enumerate_orbit(&schottky(11), 1_000_000, ExecMode::Parallel).unwrap(), &mu).unwrap();
    let shallow =
        estimate_exponent(&enumerate_orbit(&schottky(9), 1_000_000, ExecMode::Parallel).unwrap(), &mu).unwrap();
    assert!((deep.estimate - shallow.estimate).abs() <= 0.05, "{deep:?} {shallow:?}");
    assert!(deep.estimate > 0.0 && deep.estimate < 1.0);
}

#[test]
fn product_cone_widens_with_length() {
    // (a, c) and (b, d) with a, d strongly and b, c weakly hyperbolic.
    let x = block(&diag_hyperbolic(2.0), &rotated_hyperbolic(0.05, 0.7));
    let y = block(&rotated_hyperbolic(0.05, 1.3), &diag_hyperbolic(2.0));
    let spec = |len| MatrixGroupSpec {
        ambient: "sl2r*sl2r".into(),
        generators: vec![x.clone(), y.clone()],
        max_word_length: len,
        dedupe_tolerance: 1e-6,
    };
    let mut last = 0.0;
    for len in [4, 8, 12] {
        let g = MatrixGroup::new(&spec(len)).unwrap();
        let s = enumerate_orbit(&g, 2_000_000, ExecMode::Parallel).unwrap();
        let c = empirical_limit_cone(&g, &s, 1.0).unwrap();
        assert!((c.chamber_width.unwrap() - 90.0).abs() < 1e-9);
        let w = c.angular_width.unwrap();
        assert!(w + 1e-9 >= last, "width shrank: {w} < {last}");
        last = w;
    }
    assert!(last >= 80.0, "width {last}");
}

mod random_generators {
    use super::*;
    use proptest::prelude::*;

    /// Entries of a random matrix with determinant bounded away from zero.
    fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-2.0f64..2.0, n), n).prop_map(move |mut m| {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += 3.0;
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

        #[test]
        fn samples_are_dominant_symmetric_and_subadditive(
            n in 2usize..=3,
            a in matrix(3),
            b in matrix(3),
            seed: u64,
        ) {
            let cut = |m: &[Vec<f64>]| m[..n].iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>();
            let spec = MatrixGroupSpec {
                ambient: format!("sl{n}r"),
                generators: vec![cut(&a), cut(&b)],
                max_word_length: 4,
                dedupe_tolerance: 1e-6,
            };
            let g = match MatrixGroup::new(&spec) {
                Ok(g) => g,
                // Even dimension with negative determinant has no real root.
                Err(_) => return Ok(()),
            };
            let s = enumerate_orbit(&g, 100_000, ExecMode::Sequential).unwrap();
            prop_assert_eq!(s.dominance_violations(1e-6), 0);
            for p in &s.points {
                prop_assert!(p.coords.iter().sum::<f64>().abs() <= 1e-6);
            }
            prop_assert!(check_iota_symmetry(&g, &s, 1e-6, ExecMode::Sequential).holds);
            prop_assert!(check_subadditivity(&g, &s, 200, seed).holds);
            let oracle = validate_with_oracle(&g, &s, 20, seed, ExecMode::Sequential);
            prop_assert!(oracle.max_error < 1e-9, "{:?}", oracle);
        }
    }

    #[test]
    fn sequential_and_parallel_samples_agree() {
        let g = schottky(7);
        let a = enumerate_orbit(&g, 100_000, ExecMode::Sequential).unwrap();
        let b = enumerate_orbit(&g, 100_000, ExecMode::Parallel).unwrap();
        assert_eq!(a.points.len(), b.points.len());
        for (p, q) in a.points.iter().zip(&b.points) {
            assert_eq!(p.coords, q.coords);
        }
    }
}

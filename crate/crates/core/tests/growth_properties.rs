mod common;

use proptest::prelude::*;
use weylgrowth::critical::{critical_data, theta_mu, theta_mu_exact};
use weylgrowth::growth::{GrowthIndicator, Status};
use weylgrowth::rational::{qvec, vec_to_f64, ExtQ};
use weylgrowth::sampling::{random_dual_functionals, random_models, RANK2_PRESETS, RANK3_PRESETS};
use weylgrowth::{Config, RootSystem};

use common::delta_prime_grid;

const TOL: f64 = 1e-9;

fn model(seed: u64, rank3: bool, positive: bool) -> GrowthIndicator {
    let presets = if rank3 { &RANK3_PRESETS[..] } else { &RANK2_PRESETS[..] };
    random_models(presets, 1, seed, positive).unwrap().remove(0)
}

fn iota_f(rs: &RootSystem, mu: &[f64]) -> Vec<f64> {
    rs.iota_matrix().to_f64().iter().map(|row| row.iter().zip(mu).map(|(a, b)| a * b).sum()).collect()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn delta_prime_scales_inversely(seed in 0u64..1_000_000, rank3: bool, c in 0.1f64..20.0) {
        let g = model(seed, rank3, false);
        for mu in random_dual_functionals(&g, 4, seed) {
            let d = g.delta_prime(&mu, TOL).unwrap();
            let scaled: Vec<f64> = mu.iter().map(|x| c * x).collect();
            let ds = g.delta_prime(&scaled, TOL).unwrap();
            prop_assert_eq!(d.status, ds.status);
            if d.status == Status::Finite {
                prop_assert!(close(ds.delta_prime, d.delta_prime / c, 1e-9), "{} vs {}", ds.delta_prime, d.delta_prime / c);
            }
        }
    }

    #[test]
    fn delta_prime_is_iota_symmetric(seed in 0u64..1_000_000, rank3: bool) {
        let g = model(seed, rank3, false);
        let rs = g.root_system();
        for mu in random_dual_functionals(&g, 4, seed ^ 7) {
            let imu = iota_f(rs, &mu);
            let d = g.delta_prime(&mu, TOL).unwrap();
            let di = g.delta_prime(&imu, TOL).unwrap();
            prop_assert_eq!(d.status, di.status);
            if d.status != Status::Finite {
                continue;
            }
            prop_assert!(close(d.delta_prime, di.delta_prime, 1e-8));
            let avg: Vec<f64> = mu.iter().zip(&imu).map(|(a, b)| (a + b) / 2.0).collect();
            let da = g.delta_prime(&avg, TOL).unwrap();
            prop_assert!(da.delta_prime <= d.delta_prime + 1e-8 * d.delta_prime.abs().max(1.0));
        }
    }

    #[test]
    fn witnesses_attain_the_supremum(seed in 0u64..1_000_000, rank3: bool) {
        let g = model(seed, rank3, false);
        let gram = g.root_system().gram();
        for mu in random_dual_functionals(&g, 4, seed ^ 11) {
            let d = g.delta_prime(&mu, TOL).unwrap();
            if d.status != Status::Finite {
                continue;
            }
            let v = d.witness.expect("finite values carry a witness");
            prop_assert!(g.cone().contains_f(&v, 1e-9));
            let ratio = g.psi_prime_on_cone(&v) / gram.pair_f(&mu, &v);
            prop_assert!((ratio - d.delta_prime).abs() <= 1e-8, "{ratio} vs {}", d.delta_prime);
            if d.delta_prime > 0.0 {
                prop_assert!(g.psi_prime_on_cone(&v) >= -1e-9, "witness outside closure(L')");
            }
        }
    }

    #[test]
    fn rank_two_delta_prime_matches_ray_grid(seed in 0u64..1_000_000) {
        let g = model(seed, false, false);
        let gram = g.root_system().gram();
        for mu in random_dual_functionals(&g, 3, seed ^ 13) {
            // Functionals vanishing on a generator may give +∞.
            if g.generators_f().iter().any(|v| gram.pair_f(&mu, v) < 1e-3) {
                continue;
            }
            let d = g.delta_prime(&mu, TOL).unwrap();
            let grid = delta_prime_grid(&g, &mu, 10_000);
            prop_assert!((d.delta_prime - grid).abs() <= 1e-6, "{} vs grid {grid}", d.delta_prime);
        }
    }

    #[test]
    fn critical_data_is_the_tangent_functional(seed in 0u64..1_000_000, rank3: bool) {
        let g = model(seed, rank3, true);
        let rs = g.root_system();
        let gram = rs.gram();
        let c = critical_data(&g, &Config::default()).unwrap();
        prop_assert_eq!(c.status, Status::Finite);
        let v = c.v_gamma.clone().unwrap();
        // ψ′ ≤ μ_Γ on the cone, with equality at v′_Γ.
        prop_assert!((g.psi_prime_on_cone(&v) - c.delta_prime).abs() <= 1e-8);
        prop_assert!((gram.pair_f(&c.mu_gamma, &v) - c.delta_prime).abs() <= 1e-8);
        for p in g.sample_cone_points(50, seed) {
            let p = vec_to_f64(&p);
            prop_assert!(g.psi_prime_on_cone(&p) <= gram.pair_f(&c.mu_gamma, &p) + 1e-8 * gram.norm_f(&p));
        }
        prop_assert!(c.invariant_violations(&g, 1e-8).is_empty());
        // μ_Γ(v) ≤ θ_μ μ(v) on extremal rays of the chamber.
        for mu in rs.extremal_rays() {
            let mu = vec_to_f64(mu);
            let t = theta_mu(rs, &c.mu_gamma, &mu);
            for v in rs.extremal_rays() {
                let v = vec_to_f64(v);
                prop_assert!(gram.pair_f(&c.mu_gamma, &v) <= t * gram.pair_f(&mu, &v) + 1e-9);
            }
        }
    }

    #[test]
    fn b3_theta_sees_only_mu2_plus_mu3(a in 0i64..12, b in 0i64..12, shift in 0i64..12) {
        // μ = (a + s, s, 0) + shifted mass between the last two coordinates.
        let rs = RootSystem::preset("b3").unwrap();
        let s = b + shift;
        let m1 = qvec(&[a + s, s, 0]);
        let m2 = qvec(&[a + s, s - shift.min(s / 2), shift.min(s / 2)]);
        prop_assume!(rs.is_dominant(&m2));
        for w in rs.extremal_rays() {
            let (x, y) = (theta_mu_exact(&rs, &m1, w), theta_mu_exact(&rs, &m2, w));
            prop_assert!(matches!(x, ExtQ::Finite(_)));
            prop_assert_eq!(x, y);
        }
    }
}

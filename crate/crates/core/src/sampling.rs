//! Seeded random growth models and random exact weights.
//!
//! Pieces are `ρ + u` with `u` drawn in the fundamental-weight basis between
//! `−ρ` and `ρ` coordinatewise, and the piece set is closed under ι. On
//! a₊ this gives `0 ≤ ψ ≤ 2ρ` and ι-invariance by construction; the model
//! is still validated before it is returned.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::dominant_cone;
use crate::error::{Error, Result};
use crate::growth::GrowthIndicator;
use crate::lie::RootSystem;
use crate::rational::{self as r, q, qf, QVec, Q};
use crate::PolyCone;

pub const RANK2_PRESETS: [&str; 5] = ["a2", "b2", "g2", "so(2,5)", "su(2,5)"];
pub const RANK3_PRESETS: [&str; 5] = ["a3", "b3", "c3", "so(3,6)", "sl(4,c)"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `ω`-coordinates of `ρ`: `2⟨ρ, α⟩/⟨α, α⟩`.
fn rho_omega_coords(rs: &RootSystem) -> Vec<Q> {
    rs.simple_roots().iter().map(|a| q(2) * rs.pair(rs.rho(), a) / rs.pair(a, a)).collect()
}

/// Dominant exact weight with `ω`-coordinates in `0..=max`.
pub fn random_dominant(rs: &RootSystem, rng: &mut impl Rng, max: i64) -> QVec {
    let mut v = r::zeros(rs.rank());
    for w in rs.fundamental_weights() {
        let c: i64 = rng.random_range(0..=max);
        v = r::add(&v, &r::scale(&q(c), w));
    }
    v
}

/// Dominant ι-invariant exact weight: a nonnegative combination of the
/// `ω_α + ιω_α`.
pub fn random_her(rs: &RootSystem, rng: &mut impl Rng, max: i64) -> QVec {
    let mut v = r::zeros(rs.rank());
    for i in rs.iota_orbit_reps() {
        let c: i64 = rng.random_range(0..=max);
        v = r::add(&v, &r::scale(&q(c), &rs.her_weight(i)));
    }
    v
}

fn random_cone(rs: &RootSystem, rng: &mut impl Rng) -> Result<PolyCone> {
    if rng.random_bool(0.5) {
        return Ok(dominant_cone(rs));
    }
    let rays = rs.extremal_rays();
    let count = rng.random_range(rs.rank()..=rs.rank() + 2);
    let mut gens: Vec<QVec> = Vec::new();
    while gens.len() < count {
        let mut v = r::zeros(rs.rank());
        for ray in rays {
            let c: i64 = rng.random_range(0..=3);
            v = r::add(&v, &r::scale(&q(c), ray));
        }
        if !r::is_zero_vec(&v) {
            gens.push(rs.iota(&v));
            gens.push(v);
        }
    }
    PolyCone::from_generators(rs.gram(), gens)
}

const VALIDATION_SAMPLES: usize = 32;

/// One valid random model. With `positive` set, retries until `ψ′ > 0`
/// somewhere on the cone.
pub fn random_model(rs: &RootSystem, rng: &mut impl Rng, positive: bool) -> Result<GrowthIndicator> {
    let rho_w = rho_omega_coords(rs);
    for _ in 0..1000 {
        let cone = random_cone(rs, rng)?;
        let count = rng.random_range(1..=3);
        let mut pieces: Vec<QVec> = Vec::new();
        for _ in 0..count {
            let mut u = r::zeros(rs.rank());
            for (w, l) in rs.fundamental_weights().iter().zip(&rho_w) {
                let x = qf(rng.random_range(-4..=4), 4);
                u = r::add(&u, &r::scale(&(x * l), w));
            }
            let p = r::add(rs.rho(), &u);
            let ip = rs.iota(&p);
            if ip != p {
                pieces.push(ip);
            }
            pieces.push(p);
        }
        if rng.random_bool(0.25) {
            pieces.push(r::scale(&q(2), rs.rho()));
        }
        // ι-pairs of pieces on an ι-stable cone are ι-invariant by
        // construction, so a light sample suffices for that check.
        let Ok(g) = GrowthIndicator::new(rs, cone, pieces) else {
            continue;
        };
        if !g.invariant_violations(VALIDATION_SAMPLES, 0)?.is_empty() {
            continue;
        }
        if positive && g.modified_limit_cone()?.1 {
            continue;
        }
        return Ok(g);
    }
    Err(Error::Solver("no valid random model after 1000 draws".into()))
}

/// `count` models over `presets`, chosen round-robin with a random draw.
pub fn random_models(presets: &[&str], count: usize, seed: u64, positive: bool) -> Result<Vec<GrowthIndicator>> {
    let systems: Vec<RootSystem> = presets.iter().map(|p| RootSystem::preset(p)).collect::<Result<_>>()?;
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let rs = systems.choose(&mut rng).expect("preset list is nonempty");
            random_model(rs, &mut rng, positive)
        })
        .collect()
}

/// Random float covectors in the dual of the model cone, scaled so their
/// pairings with unit generators lie in `[0, 1]`.
pub fn random_dual_functionals(g: &GrowthIndicator, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let rs = g.root_system();
    let mut rng = rng(seed);
    let basis: Vec<Vec<f64>> = rs.simple_roots().iter().map(|a| r::vec_to_f64(a)).collect();
    let gens = g.generators_f();
    let gram = rs.gram();
    (0..count)
        .map(|_| loop {
            // Dominant covectors pair nonnegatively with a₊ ⊇ L; add a
            // small multiple of a simple root to leave the chamber's dual
            // interior now and then.
            let her = r::vec_to_f64(&random_her(rs, &mut rng, 4));
            let i = rng.random_range(0..basis.len());
            let eps: f64 = rng.random_range(0.0..0.5);
            let mu: Vec<f64> = her.iter().zip(&basis[i]).map(|(h, a)| h + eps * a).collect();
            if gens.iter().all(|v| gram.pair_f(&mu, v) >= 0.0) && mu.iter().any(|x| *x != 0.0) {
                break mu;
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn models_are_valid_and_reproducible() {
        let a = random_models(&RANK2_PRESETS, 12, 5, true).unwrap();
        let b = random_models(&RANK2_PRESETS, 12, 5, true).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.pieces(), y.pieces());
            assert!(x.invariant_violations(1000, 1).unwrap().is_empty());
            assert!(!x.modified_limit_cone().unwrap().1);
        }
    }

    #[test]
    fn rank_three_models_pass_full_validation() {
        for g in random_models(&RANK3_PRESETS, 10, 9, false).unwrap() {
            assert!(g.invariant_violations(1000, 2).unwrap().is_empty(), "{}", g.root_system().label());
        }
    }

    #[test]
    fn her_weights_are_iota_invariant() {
        let rs = RootSystem::preset("a3").unwrap();
        let mut g = rng(3);
        for _ in 0..50 {
            let v = random_her(&rs, &mut g, 5);
            assert!(rs.is_dominant(&v) && rs.is_iota_invariant(&v));
        }
    }
}

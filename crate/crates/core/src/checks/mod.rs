//! Lemma verifiers, deduction replays and growth bounds, plus batch suites
//! over presets and seeds.

pub mod bounds;
pub mod lemmas;
pub mod replays;

use std::collections::BTreeMap;

use num_traits::Signed;
use rand::Rng;
use serde::Serialize;

use crate::cone::conv_hull_member;
use crate::config::Config;
use crate::critical::critical_data;
use crate::critical::theta_mu_exact;
use crate::error::Result;
use crate::growth::GrowthIndicator;
use crate::lie::RootSystem;
use crate::par::{self, ExecMode};
use crate::rational::{self as r, ExtQ, QVec, Q};
use crate::sampling::{random_dominant, random_her, rng};

pub use bounds::{bound_wall_avoided, WallBound};
pub use lemmas::{
    argmax_face, check_keylemma, check_positivity, check_posofweight, check_rightangles, check_setmaximum,
    twowalls_certificate,
};
pub use replays::{check_psilinear, check_tent_equality, deduce_onewall, deduce_twowalls, ReplayStatus};

pub const SUITE_PRESETS: [&str; 6] = ["a2", "a3", "b2", "b3", "g2", "so(2,5)"];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub lemma: String,
    pub preset: String,
    pub samples: usize,
    /// Samples where a conditional hypothesis held, when relevant.
    pub hypothesis_hits: usize,
    pub failures: Vec<String>,
    pub mode: &'static str,
    /// Replay status tallies; empty for lemma suites.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outcomes: BTreeMap<String, usize>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const CHUNK: usize = 250;

fn fmt_vec(v: &[Q]) -> String {
    let xs: Vec<String> = v.iter().map(r::fmt_q).collect();
    format!("({})", xs.join(", "))
}

/// Runs `samples` draws of `f` split into seeded chunks; the chunk seeds
/// depend only on `seed`, so output does not depend on the thread count.
fn run_chunks<F>(exec: ExecMode, samples: usize, seed: u64, f: F) -> (usize, Vec<String>)
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, usize) -> Result<(bool, Option<String>)> + Sync + Send,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts = par::map_range(exec, chunks, |c| {
        let mut g = rng(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(c as u64));
        let mut hits = 0;
        let mut fails = Vec::new();
        for k in 0..CHUNK.min(samples - c * CHUNK) {
            match f(&mut g, c * CHUNK + k) {
                Ok((hit, fail)) => {
                    hits += usize::from(hit);
                    fails.extend(fail);
                }
                Err(e) => fails.push(format!("sample {}: {e}", c * CHUNK + k)),
            }
        }
        (hits, fails)
    });
    parts.into_iter().fold((0, Vec::new()), |(h, mut f), (h2, f2)| {
        f.extend(f2);
        (h + h2, f)
    })
}

/// Keylemma draws: a quarter are exact multiples of `ω_α + ιω_α`, the
/// rest random ι-invariant dominant weights near such multiples.
fn keylemma_sample(rs: &RootSystem, g: &mut impl Rng, alpha: usize) -> QVec {
    let lambda = rs.her_weight(alpha);
    let c = r::q(g.random_range(0..=6));
    let base = r::scale(&c, &lambda);
    if g.random_bool(0.25) {
        return base;
    }
    let noise = random_her(rs, g, 2);
    let eps = r::qf(1, g.random_range(1..=50));
    r::add(&base, &r::scale(&eps, &noise))
}

pub fn suite_keylemma(rs: &RootSystem, samples: usize, seed: u64, exec: ExecMode) -> SuiteReport {
    let n = rs.rank();
    let (hits, failures) = run_chunks(exec, samples, seed, |g, k| {
        let alpha = k % n;
        let mu = keylemma_sample(rs, g, alpha);
        let v = check_keylemma(rs, &mu, alpha)?;
        let fail = (!v.implication_holds()).then(|| format!("μ = {} α = {}", fmt_vec(&mu), alpha + 1));
        Ok((v.hypothesis_holds, fail))
    });
    report("keylemma", rs, samples, hits, failures, "unconditional")
}

pub fn suite_posofweight(rs: &RootSystem, samples: usize, seed: u64, exec: ExecMode) -> SuiteReport {
    let n = rs.rank();
    let (hits, failures) = run_chunks(exec, samples, seed, |g, k| {
        let alpha = k % n;
        let mu = random_her(rs, g, 8);
        let v = check_posofweight(rs, &mu, alpha)?;
        Ok((true, (!v.holds).then(|| format!("μ = {} α = {}", fmt_vec(&mu), alpha + 1))))
    });
    report("posofweight", rs, samples, hits, failures, "unconditional")
}

pub fn suite_positivity(rs: &RootSystem, samples: usize, seed: u64, exec: ExecMode) -> SuiteReport {
    let (hits, failures) = run_chunks(exec, samples, seed, |g, _| {
        let u = random_dominant(rs, g, 8);
        let v = check_positivity(rs, &u)?;
        Ok((true, (!v.all_nonnegative).then(|| format!("u = {}", fmt_vec(&u)))))
    });
    report("positivity", rs, samples, hits, failures, "unconditional")
}

pub fn suite_rightangles(rs: &RootSystem, samples: usize, seed: u64, exec: ExecMode) -> SuiteReport {
    let (hits, failures) = run_chunks(exec, samples, seed, |g, _| {
        let v = nonzero_dominant(rs, g);
        let w = nonzero_dominant(rs, g);
        let ok = check_rightangles(rs, &v, &w)?;
        Ok((true, (!ok).then(|| format!("v = {} w = {}", fmt_vec(&v), fmt_vec(&w)))))
    });
    report("rightangles", rs, samples, hits, failures, "unconditional")
}

/// Vectors in `a₊` itself: nonnegative combinations of the extremal rays.
fn nonzero_dominant(rs: &RootSystem, g: &mut impl Rng) -> QVec {
    loop {
        let v = random_dominant(rs, g, 5);
        if !r::is_zero_vec(&v) {
            return v;
        }
    }
}

/// The non-collinearity certificate on every admissible pair, repeated
/// `samples` times over the pair list.
pub fn suite_twowalls(rs: &RootSystem, samples: usize) -> SuiteReport {
    let pairs = lemmas::admissible_pairs(rs);
    let mut failures = Vec::new();
    let mut done = 0;
    if !pairs.is_empty() {
        for k in 0..samples {
            let (a, b) = pairs[k % pairs.len()];
            done += 1;
            if let Err(e) = twowalls_certificate(rs, a, b) {
                failures.push(format!("({}, {}): {e}", a + 1, b + 1));
            }
        }
    }
    report("twowalls", rs, done, pairs.len(), failures, "unconditional")
}

/// `μ/λ_t` is maximised exactly on `R≥0 ω_α + R≥0 ιω_α` for random
/// ι-invariant `μ` with `⟨μ, α⟩ > 0`.
pub fn suite_setmaximum(rs: &RootSystem, samples: usize, seed: u64, exec: ExecMode) -> SuiteReport {
    let n = rs.rank();
    let (hits, failures) = run_chunks(exec, samples, seed, |g, k| {
        let alpha = k % n;
        let mu = random_her(rs, g, 6);
        if !rs.pair(&mu, &rs.simple_roots()[alpha]).is_positive() {
            return Ok((false, None));
        }
        let ok = check_setmaximum(rs, &mu, alpha)?;
        Ok((true, (!ok).then(|| format!("μ = {} α = {}", fmt_vec(&mu), alpha + 1))))
    });
    report("setmaximum", rs, samples, hits, failures, "unconditional")
}

fn report(
    lemma: &str,
    rs: &RootSystem,
    samples: usize,
    hits: usize,
    failures: Vec<String>,
    mode: &'static str,
) -> SuiteReport {
    SuiteReport {
        lemma: lemma.into(),
        preset: rs.label().into(),
        samples,
        hypothesis_hits: hits,
        failures,
        mode,
        outcomes: BTreeMap::new(),
    }
}

/// Every unconditional lemma suite on one preset.
pub fn lemma_suite(rs: &RootSystem, samples: usize, seed: u64, exec: ExecMode) -> Vec<SuiteReport> {
    vec![
        suite_keylemma(rs, samples, seed, exec),
        suite_posofweight(rs, samples, seed.wrapping_add(1), exec),
        suite_positivity(rs, samples, seed.wrapping_add(2), exec),
        suite_rightangles(rs, samples, seed.wrapping_add(3), exec),
        suite_twowalls(rs, samples),
        suite_setmaximum(rs, samples, seed.wrapping_add(4), exec),
    ]
}

pub(crate) fn status_name(s: ReplayStatus) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

/// Replays on `models` random models of one preset. Unconditional parts
/// (the implication, `ψ′ ≤ μ_Γ` on `a_I`, the tent inequality) count as
/// failures; in consistency mode so do unrealisable models.
pub fn replay_suite(rs: &RootSystem, models: usize, seed: u64, cfg: &Config) -> Result<Vec<SuiteReport>> {
    let mut g = rng(seed);
    let list: Vec<GrowthIndicator> =
        (0..models).map(|_| crate::sampling::random_model(rs, &mut g, false)).collect::<Result<_>>()?;
    let mode = if cfg.consistency { "consistency" } else { "unconditional" };
    let per_model = par::map(cfg.exec, &list, |m| replay_model(m, cfg));
    let names = ["onewall", "twowalls", "psilinear", "tent"];
    let mut out: Vec<SuiteReport> = names.iter().map(|n| report(n, rs, 0, 0, Vec::new(), mode)).collect();
    for (k, res) in per_model.into_iter().enumerate() {
        match res {
            Ok(parts) => {
                for (rep, part) in out.iter_mut().zip(parts) {
                    rep.samples += part.instances;
                    rep.hypothesis_hits += part.hits;
                    rep.failures.extend(part.failures.into_iter().map(|f| format!("model {k}: {f}")));
                    for o in part.outcomes {
                        *rep.outcomes.entry(o).or_default() += 1;
                    }
                }
            }
            Err(e) => out[0].failures.push(format!("model {k}: {e}")),
        }
    }
    Ok(out)
}

#[derive(Default)]
struct Part {
    instances: usize,
    hits: usize,
    failures: Vec<String>,
    outcomes: Vec<String>,
}

fn replay_model(m: &GrowthIndicator, cfg: &Config) -> Result<[Part; 4]> {
    let rs = m.root_system();
    let strict = cfg.consistency;
    let data = critical_data(m, cfg)?;
    let (closure, empty) = m.modified_limit_cone()?;
    let mut parts: [Part; 4] = Default::default();

    let mut avoided = Vec::new();
    if !empty {
        for a in 0..rs.rank() {
            if crate::cone::avoids_facet(rs, &closure, a)? {
                avoided.push(a);
            }
        }
    }
    for &a in &avoided {
        let rep = replays::deduce_onewall_with(m, &closure, a, &data, cfg)?;
        let p = &mut parts[0];
        p.instances += 1;
        p.hits += usize::from(rep.premise_holds);
        p.outcomes.push(status_name(rep.status));
        if !rep.implication_certified() || (strict && rep.status == ReplayStatus::NotRealizable) {
            p.failures.push(format!("α = {}: {}", a + 1, status_name(rep.status)));
        }
    }
    for (a, b) in lemmas::admissible_pairs(rs) {
        if !(avoided.contains(&a) && avoided.contains(&b)) {
            continue;
        }
        let rep = deduce_twowalls(m, &closure, a, b, cfg)?;
        let p = &mut parts[1];
        p.instances += 1;
        p.hits += usize::from(rep.contradiction);
        p.outcomes.push(status_name(rep.status));
        if rep.status == ReplayStatus::ImplicationViolated || (strict && rep.status == ReplayStatus::NotRealizable) {
            p.failures.push(format!("({}, {}): {}", a + 1, b + 1, status_name(rep.status)));
        }
    }
    let lin = check_psilinear(m, cfg, 20)?;
    let p = &mut parts[2];
    p.instances += lin.samples;
    p.hits += lin.equality_count;
    p.outcomes.push(
        if lin.vacuous {
            "vacuous"
        } else if lin.equality_holds {
            "equality"
        } else {
            "strict"
        }
        .into(),
    );
    if lin.upper_bound_failures > 0 {
        p.failures.push(format!("ψ′ > μ_Γ at {} points", lin.upper_bound_failures));
    }
    if strict && !lin.equality_holds {
        p.failures.push("ψ ≠ μ_Γ + ρ on a_I".into());
    }

    let mus = crate::sampling::random_dual_functionals(m, 10, cfg.seed);
    let tent = m.tent_check(&mus, 20, cfg.seed, 1e-8, cfg.tolerance)?;
    let p = &mut parts[3];
    p.instances += tent.functionals;
    p.hits += tent.points_checked;
    if !tent.passed() {
        p.failures.push(format!("tent inequality fails at {} points", tent.failures.len()));
    }
    if strict {
        let eq = check_tent_equality(m, cfg, 5)?;
        p.outcomes.push(if eq.holds { "equality" } else { "strict" }.into());
        if !eq.holds {
            p.failures.push(format!("θ_μ exceeds max(0, δ′_μ) by {:.3e}", eq.worst_excess));
        }
    }
    Ok(parts)
}

/// Dominance-order membership against membership in the convex hull of the
/// enumerated orbit `Wμ`, decided by an exact LP.
pub fn convhull_oracle(rs: &RootSystem, samples: usize, seed: u64, exec: ExecMode) -> Result<SuiteReport> {
    let w = rs.weyl_group()?;
    let (hits, failures) = run_chunks(exec, samples, seed, |g, _| {
        let mu = random_dominant(rs, g, 3);
        let mut lambda = r::zeros(rs.rank());
        for a in rs.fundamental_weights() {
            let c = r::qf(g.random_range(-6..=6), 2);
            lambda = r::add(&lambda, &r::scale(&c, a));
        }
        let fast = conv_hull_member(rs, &lambda, &mu)?;
        let orbit = w.orbit(rs, &mu);
        let slow = crate::cone::in_convex_hull(&orbit, &lambda);
        let fail = (fast != slow)
            .then(|| format!("λ = {} μ = {}: dominance {fast}, hull {slow}", fmt_vec(&lambda), fmt_vec(&mu)));
        Ok((fast, fail))
    });
    Ok(report("convhull", rs, samples, hits, failures, "unconditional"))
}

/// One row of the B₃ table of `θ` at the primitive fundamental weights.
#[derive(Clone, Debug, Serialize)]
pub struct B3Row {
    pub mu_gamma: Vec<String>,
    pub theta: [String; 3],
    pub expected: [String; 3],
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct B3Table {
    pub omega: Vec<Vec<String>>,
    pub rows: Vec<B3Row>,
    /// Rows with `μ₁ = μ₂ + μ₃`, where the `ω₂` formula switches branch.
    pub boundary_rows: usize,
    /// Pairs with equal `μ₁` and `μ₂ + μ₃` but different `μ₂`, whose θ
    /// triples coincide.
    pub nonidentifiable_pairs: usize,
    pub all_ok: bool,
}

/// Closed forms on B₃ for `μ_Γ = (μ₁, μ₂, μ₃)` dominant, with `ω₃` taken
/// as the primitive vector `(1, 1, 1)`.
pub fn b3_closed_forms(m: &[Q]) -> [Q; 3] {
    let s = &m[0] + &m[1] + &m[2];
    let half = &s / r::q(2);
    let t2 = if m[0] >= half { m[0].clone() } else { half };
    [s, t2, m[0].clone()]
}

pub fn reproduce_b3_remark(samples: usize, seed: u64) -> Result<B3Table> {
    let rs = RootSystem::preset("b3")?;
    let omega = rs.extremal_rays().to_vec();
    let mut g = rng(seed);
    let mut mus: Vec<QVec> = vec![r::qvec(&[3, 2, 1]), r::qvec(&[1, 0, 0]), r::qvec(&[1, 1, 1])];
    while mus.len() < samples.max(3) {
        // Sorted nonnegative coordinates are the dominant weights here.
        let mut xs: Vec<i64> = (0..3).map(|_| g.random_range(0..=12)).collect();
        if g.random_bool(0.2) {
            // Force the branch boundary μ₁ = μ₂ + μ₃.
            let a = g.random_range(0..=6);
            let b = g.random_range(0..=a);
            xs = vec![a + b, a, b];
        }
        xs.sort_unstable_by(|a, b| b.cmp(a));
        mus.push(xs.iter().map(|&x| r::qf(x, g.random_range(1..=3))).collect());
    }
    let mut rows = Vec::new();
    let mut boundary = 0;
    for m in mus.iter_mut() {
        m.sort_by(|a, b| b.cmp(a));
        let theta: Vec<Q> = omega
            .iter()
            .map(|w| match theta_mu_exact(&rs, m, w) {
                ExtQ::Finite(x) => x,
                ExtQ::PosInf => unreachable!("primitive weights are positive on a₊∖0"),
            })
            .collect();
        let expected = b3_closed_forms(m);
        if m[0] == &m[1] + &m[2] {
            boundary += 1;
        }
        rows.push(B3Row {
            mu_gamma: m.iter().map(|x| x.to_string()).collect(),
            ok: theta.iter().zip(&expected).all(|(a, b)| a == b),
            theta: [theta[0].to_string(), theta[1].to_string(), theta[2].to_string()],
            expected: expected.map(|x| x.to_string()),
        });
    }
    // Non-identifiability: shift mass between μ₂ and μ₃.
    let mut pairs = 0;
    for m in &mus {
        let d = (&m[1] - &m[2]) / r::q(2);
        if d.is_positive() {
            let other = vec![m[0].clone(), &m[1] - &d / r::q(2), &m[2] + &d / r::q(2)];
            let a: Vec<ExtQ> = omega.iter().map(|w| theta_mu_exact(&rs, m, w)).collect();
            let b: Vec<ExtQ> = omega.iter().map(|w| theta_mu_exact(&rs, &other, w)).collect();
            if a == b {
                pairs += 1;
            } else {
                rows.push(B3Row {
                    mu_gamma: other.iter().map(|x| x.to_string()).collect(),
                    theta: ["?".into(), "?".into(), "?".into()],
                    expected: ["?".into(), "?".into(), "?".into()],
                    ok: false,
                });
            }
        }
    }
    let all_ok = rows.iter().all(|r| r.ok);
    Ok(B3Table {
        omega: omega.iter().map(|w| w.iter().map(|x| x.to_string()).collect()).collect(),
        rows,
        boundary_rows: boundary,
        nonidentifiable_pairs: pairs,
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn lemma_suites_small() {
        for p in SUITE_PRESETS {
            let rs = RootSystem::preset(p).unwrap();
            for rep in lemma_suite(&rs, 300, 7, ExecMode::Parallel) {
                assert!(rep.passed(), "{p} {}: {:?}", rep.lemma, &rep.failures[..rep.failures.len().min(3)]);
            }
        }
    }

    #[test]
    fn keylemma_suite_hits_hypothesis() {
        let rs = RootSystem::preset("b3").unwrap();
        let rep = suite_keylemma(&rs, 400, 1, ExecMode::Sequential);
        assert!(rep.hypothesis_hits > 50 && rep.passed());
    }

    #[test]
    fn suites_are_deterministic_across_modes() {
        let rs = RootSystem::preset("a3").unwrap();
        let a = suite_setmaximum(&rs, 600, 3, ExecMode::Parallel);
        let b = suite_setmaximum(&rs, 600, 3, ExecMode::Sequential);
        assert_eq!(a.hypothesis_hits, b.hypothesis_hits);
    }

    #[test]
    fn replay_suite_small() {
        let cfg = Config::default();
        for p in ["b2", "a2", "so(2,5)"] {
            let rs = RootSystem::preset(p).unwrap();
            let reps = replay_suite(&rs, 6, 5, &cfg).unwrap();
            for rep in &reps {
                assert!(rep.passed(), "{p} {}: {:?}", rep.lemma, rep.failures);
            }
            assert!(reps[2].samples > 0);
        }
    }

    #[test]
    fn b3_table() {
        let t = reproduce_b3_remark(200, 4).unwrap();
        assert!(t.all_ok);
        assert!(t.boundary_rows > 0 && t.nonidentifiable_pairs > 0);
        assert_eq!(t.rows[0].theta, ["6".to_string(), "3".into(), "3".into()]);
        assert_eq!(t.rows[1].theta, ["1".to_string(), "1".into(), "1".into()]);
        assert_eq!(t.rows[2].theta, ["3".to_string(), "3/2".into(), "1".into()]);
        assert_eq!(b3_closed_forms(&[q(2), q(1), q(1)]), [q(4), q(2), q(2)]);
        assert_eq!(b3_closed_forms(&[q(1), qf(1, 2), qf(1, 2)])[1], q(1));
    }

    #[test]
    fn convhull_small() {
        for p in ["b2", "a2", "g2"] {
            let rs = RootSystem::preset(p).unwrap();
            let rep = convhull_oracle(&rs, 200, 9, ExecMode::Parallel).unwrap();
            assert!(rep.passed(), "{p}: {:?}", rep.failures);
            assert!(rep.hypothesis_hits > 0 && rep.hypothesis_hits < 200);
        }
    }
}

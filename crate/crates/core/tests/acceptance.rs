//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs under `cargo test` with `harness = false`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use weylgrowth::checks::bounds::bound_wall_avoided;
use weylgrowth::checks::{convhull_oracle, lemma_suite, reproduce_b3_remark, SUITE_PRESETS};
use weylgrowth::critical::{critical_data, theta_mu};
use weylgrowth::figure::{check_figure, figure_geometry};
use weylgrowth::growth::Status;
use weylgrowth::orbit::{check_iota_symmetry, enumerate_orbit, estimate_exponent, MatrixGroup, MatrixGroupSpec};
use weylgrowth::par::{self, ExecMode};
use weylgrowth::rational::{fmt_q, q, qf, qvec, sub};
use weylgrowth::sampling::{random_dual_functionals, random_models, RANK2_PRESETS, RANK3_PRESETS};
use weylgrowth::{Config, RootSystem};

type Verdict = Result<String, String>;
type Check = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn so2n(n: u32) -> Result<RootSystem, String> {
    RootSystem::preset(&format!("so(2,{n})")).map_err(err)
}

fn constants() -> Verdict {
    let start = Instant::now();
    for n in 3..=10i64 {
        let rs = so2n(n as u32)?;
        let rho = vec![qf(n, 2), qf(n - 2, 2)];
        ensure(rs.rho() == &rho, || format!("so(2,{n}): rho = {:?}", rs.rho()))?;
        ensure(rs.theta() == &qvec(&[1, 0]), || format!("so(2,{n}): Theta = {:?}", rs.theta()))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("n = 3..10 exact in {t:.2?}"))
}

fn b3_remark() -> Verdict {
    let rs = RootSystem::preset("b3").map_err(err)?;
    let want = [qvec(&[1, 0, 0]), qvec(&[1, 1, 0]), vec![qf(1, 2), qf(1, 2), qf(1, 2)]];
    ensure(rs.fundamental_weights() == want, || format!("weights {:?}", rs.fundamental_weights()))?;
    let table = reproduce_b3_remark(1000, 2024).map_err(err)?;
    let bad = table.rows.iter().filter(|r| !r.ok).count();
    ensure(table.all_ok && bad == 0, || format!("{bad} rows disagree"))?;
    ensure(table.boundary_rows > 0, || "no row on mu1 = mu2 + mu3".into())?;
    Ok(format!("{} rows exact, {} on the branch boundary", table.rows.len(), table.boundary_rows))
}

fn bounds() -> Verdict {
    for n in 3..=10i64 {
        let rs = so2n(n as u32)?;
        let c = qf(n - 2, 2);
        let b1 = bound_wall_avoided(&rs, 0).map_err(err)?;
        let b2 = bound_wall_avoided(&rs, 1).map_err(err)?;
        ensure(b1.c == c && b2.c == c, || format!("n = {n}: c = {}, {}", fmt_q(&b1.c), fmt_q(&b2.c)))?;
        ensure(b1.bound == vec![q(n - 1), c.clone()], || format!("n = {n}: alpha1 bound {:?}", b1.bound))?;
        let two_rho_minus_theta = sub(&rs.rho().iter().map(|x| x * q(2)).collect::<Vec<_>>(), rs.theta());
        ensure(b2.bound == two_rho_minus_theta, || format!("n = {n}: alpha2 bound {:?}", b2.bound))?;
    }
    Ok("c = (n-2)/2, alpha1 bound (n-1, (n-2)/2), alpha2 bound 2rho - Theta for n = 3..10".into())
}

fn routes() -> Verdict {
    let start = Instant::now();
    let cfg = Config::default();
    let mut worst_gap: f64 = 0.0;
    let mut worst_theta: f64 = 0.0;
    let mut total = 0;
    for (presets, seed) in [(&RANK2_PRESETS[..], 41), (&RANK3_PRESETS[..], 42)] {
        let models = random_models(presets, 100, seed, true).map_err(err)?;
        let rows = par::map(cfg.exec, &models, |g| -> Result<(f64, f64), String> {
            let c = critical_data(g, &cfg).map_err(err)?;
            ensure(c.status == Status::Finite, || format!("{}: status {:?}", g.root_system().label(), c.status))?;
            let gap = c.route_gap.ok_or("no route B result")?;
            let theta = theta_mu(g.root_system(), &c.mu_gamma, &c.mu_gamma);
            Ok((gap, (theta - 1.0).abs()))
        });
        for r in rows {
            let (gap, theta) = r?;
            worst_gap = worst_gap.max(gap);
            worst_theta = worst_theta.max(theta);
            total += 1;
        }
    }
    let t = start.elapsed();
    ensure(worst_gap <= 1e-5, || format!("route gap {worst_gap:e}"))?;
    ensure(worst_theta <= 1e-8, || format!("|theta - 1| = {worst_theta:e}"))?;
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{total} models, worst gap {worst_gap:.1e}, worst |theta - 1| {worst_theta:.1e}, {t:.1?}"))
}

fn lemmas() -> Verdict {
    let mut hits = 0;
    for p in SUITE_PRESETS {
        let rs = RootSystem::preset(p).map_err(err)?;
        for r in lemma_suite(&rs, 10_000, 7, ExecMode::Parallel) {
            ensure(r.passed(), || format!("{} on {}: {:?}", r.lemma, r.preset, r.failures.first()))?;
            hits += r.hypothesis_hits;
        }
    }
    Ok(format!("6 presets x 10^4 samples, {hits} hypothesis hits, no failures"))
}

fn convhull() -> Verdict {
    let mut hits = 0;
    for p in ["b2", "b3"] {
        let rs = RootSystem::preset(p).map_err(err)?;
        let r = convhull_oracle(&rs, 1000, 13, ExecMode::Parallel).map_err(err)?;
        ensure(r.passed(), || format!("{p}: {:?}", r.failures.first()))?;
        hits += r.hypothesis_hits;
    }
    Ok(format!("2 x 10^3 pairs agree, {hits} members"))
}

fn tent() -> Verdict {
    let cfg = Config::default();
    let mut functionals = 0;
    let mut models = 0;
    for (presets, seed) in [(&RANK2_PRESETS[..], 51), (&RANK3_PRESETS[..], 52)] {
        for (k, g) in random_models(presets, 25, seed, false).map_err(err)?.iter().enumerate() {
            let mus = random_dual_functionals(g, 100, seed * 1000 + k as u64);
            let rep = g.tent_check(&mus, 0, 0, 1e-8, cfg.tolerance).map_err(err)?;
            ensure(rep.passed(), || format!("{}: {:?}", g.root_system().label(), rep.failures.first()))?;
            functionals += rep.functionals;
            models += 1;
        }
    }
    Ok(format!("{models} models, {functionals} functionals, every generator within 1e-8"))
}

fn orbit() -> Verdict {
    let e = 1f64.exp();
    let spec = |len| MatrixGroupSpec {
        ambient: "sl3r".into(),
        generators: vec![vec![vec![e, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0 / e]]],
        max_word_length: len,
        dedupe_tolerance: 1e-6,
    };
    let g = MatrixGroup::new(&spec(600)).map_err(err)?;
    let s = enumerate_orbit(&g, 10_000, ExecMode::Parallel).map_err(err)?;
    // Distance from the line through (1, 0, -1).
    let off = s.points.iter().map(|p| (p.coords[1].abs()).max((p.coords[0] + p.coords[2]).abs())).fold(0.0, f64::max);
    ensure(off <= 1e-9, || format!("off the ray by {off:e}"))?;
    ensure(s.points.iter().all(|p| p.coords[0] >= 0.0), || "point outside the chamber".into())?;
    let est = estimate_exponent(&s, &[0.5, 0.0, -0.5]).map_err(err)?;
    ensure(est.estimate.abs() <= 0.05, || format!("estimate {}", est.estimate))?;
    let shallow = MatrixGroup::new(&spec(10)).map_err(err)?;
    let s10 = enumerate_orbit(&shallow, 10_000, ExecMode::Parallel).map_err(err)?;
    let sym = check_iota_symmetry(&shallow, &s10, 1e-9, ExecMode::Parallel);
    ensure(sym.holds && sym.pairs_checked == s10.points.len(), || format!("{sym:?}"))?;
    Ok(format!(
        "{} points on the ray within {off:.1e}, estimate {:.3}, {} inverse pairs at depth 10",
        s.points.len(),
        est.estimate,
        sym.pairs_checked
    ))
}

fn figure() -> Verdict {
    let rs = so2n(5)?;
    let g = figure_geometry(&rs).map_err(err)?;
    let c = check_figure(&g);
    ensure(c.coincides[1], || "alpha2 hull differs from conv W(rho - Theta)".into())?;
    ensure(c.inside[0], || "alpha1 hull leaves conv W(rho - Theta)".into())?;
    Ok(format!("alpha2 hull coincides, alpha1 hull inside (strictly smaller: {})", c.smaller[0]))
}

fn main() -> ExitCode {
    let criteria: [Check; 9] = [
        ("so(2,n) constants", constants),
        ("B3 weights and theta closed forms", b3_remark),
        ("wall bounds on so(2,n)", bounds),
        ("route agreement", routes),
        ("lemma suites", lemmas),
        ("convex hull oracle", convhull),
        ("tent property", tent),
        ("cyclic orbit sampler", orbit),
        ("figure fidelity", figure),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail} [{t:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{t:.2?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

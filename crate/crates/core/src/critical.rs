//! The direction of maximal growth and the critical functional `μ_Γ`.
//!
//! Route A projects the origin onto `P = {v ∈ L : (ℓ_i − ρ)(v) ≥ 1}`; the
//! minimum-norm point `v*` gives `δ′ = 1/‖v*‖` and `v′_Γ = v*/‖v*‖`.
//! Route B minimises `‖μ‖ δ′_μ` over the ι-invariant dominant covectors and
//! serves as an independent check.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::growth::{max_min_on_simplex, GrowthIndicator, Status};
use crate::lie::RootSystem;
use crate::par;
use crate::qp::{self, QpOutcome};
use crate::rational::{self as r, ext_f64, vec_to_f64, ExtQ, Q};

/// Result of the min-norm route.
#[derive(Clone, Debug, Serialize)]
pub struct MaxGrowth {
    #[serde(with = "ext_f64")]
    pub delta_prime: f64,
    /// Unit vector; absent for an empty cone.
    pub v_gamma: Option<Vec<f64>>,
    pub status: Status,
    pub qp_iterations: usize,
    /// Angular resolution of the sphere search, set only when `δ′ < 0`.
    pub sphere_resolution: Option<f64>,
}

impl MaxGrowth {
    /// `μ_Γ = max(0, δ′) ⟨v′_Γ, ·⟩`.
    pub fn mu_gamma(&self, rank: usize) -> Vec<f64> {
        match (&self.v_gamma, self.status) {
            (Some(v), Status::Finite) => v.iter().map(|x| x * self.delta_prime).collect(),
            _ => vec![0.0; rank],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteB {
    pub mu_gamma: Vec<f64>,
    /// Minimum of `‖μ‖ δ′_μ`.
    pub value: f64,
    pub method: &'static str,
    pub starts: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Final bracket width or step size in simplex coordinates.
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaEntry {
    /// Primitive integral vector on the ray of `ω_α`.
    pub omega: Vec<f64>,
    #[serde(with = "ext_f64")]
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalData {
    #[serde(with = "ext_f64")]
    pub delta_prime: f64,
    pub status: Status,
    pub v_gamma: Option<Vec<f64>>,
    pub mu_gamma: Vec<f64>,
    /// Relative distance between the two routes' `μ_Γ`.
    pub route_gap: Option<f64>,
    pub route_b: Option<RouteB>,
    pub theta: Vec<ThetaEntry>,
    pub qp_iterations: usize,
    pub sphere_resolution: Option<f64>,
}

impl CriticalData {
    /// Dominance, ι-invariance, unit `v′_Γ` and `ψ′ ≤ μ_Γ` on generators.
    pub fn invariant_violations(&self, g: &GrowthIndicator, slack: f64) -> Vec<String> {
        let rs = g.root_system();
        let gram = rs.gram();
        let mut out = Vec::new();
        let mu = &self.mu_gamma;
        for (i, a) in rs.simple_roots().iter().enumerate() {
            if gram.pair_f(mu, &vec_to_f64(a)) < -slack {
                out.push(format!("mu_gamma is not dominant at simple root {i}"));
            }
        }
        let iota: Vec<Vec<f64>> = rs.iota_matrix().to_f64();
        let imu: Vec<f64> = iota.iter().map(|row| row.iter().zip(mu).map(|(a, b)| a * b).sum()).collect();
        if imu.iter().zip(mu).any(|(a, b)| (a - b).abs() > slack) {
            out.push("mu_gamma is not iota-invariant".into());
        }
        if let Some(v) = &self.v_gamma {
            if (gram.norm_f(v) - 1.0).abs() > 1e-10 {
                out.push("v_gamma is not a unit vector".into());
            }
        }
        for v in g.generators_f() {
            if g.psi_prime_on_cone(v) > gram.pair_f(mu, v) + slack {
                out.push("psi' exceeds mu_gamma at a generator".into());
                break;
            }
        }
        out
    }
}

/// Route A: `δ′ = max_{‖v‖=1} ψ′(v)` and its unique maximiser.
pub fn solve_delta_prime_max(g: &GrowthIndicator, cfg: &Config) -> Result<MaxGrowth> {
    let rs = g.root_system();
    let n = rs.rank();
    let gram = rs.gram();
    if g.generators().is_empty() {
        return Ok(MaxGrowth {
            delta_prime: f64::NEG_INFINITY,
            v_gamma: None,
            status: Status::Nonpositive,
            qp_iterations: 0,
            sphere_resolution: None,
        });
    }

    // Exact sign of max_L ψ′ decides whether P is empty.
    let modified = g.modified_pieces();
    let vals: Vec<Vec<Q>> = modified.iter().map(|p| g.generators().iter().map(|v| rs.pair(p, v)).collect()).collect();
    let (t, weights) =
        max_min_on_simplex::<Q>(&vals, cfg.max_iter).ok_or_else(|| Error::Solver("sign LP for psi' failed".into()))?;

    if t.is_positive() {
        let gm = DMatrix::from_fn(n, n, |i, j| gram.float_matrix()[i][j]);
        let zero = DVector::zeros(n);
        let mut cons: Vec<(Vec<f64>, f64)> =
            g.cone().halfspaces().iter().map(|h| (gram.lower_f(&vec_to_f64(h)), 0.0)).collect();
        for p in g.modified_pieces_f() {
            cons.push((gram.lower_f(&p), 1.0));
        }
        let sol = match qp::solve(&gm, &zero, &cons, cfg.tolerance * 1e-3, cfg.max_iter)? {
            QpOutcome::Optimal(s) => s,
            QpOutcome::Infeasible => {
                return Err(Error::Solver("min-norm QP reported an infeasible nonempty polyhedron".into()))
            }
        };
        let norm = gram.norm_f(&sol.x);
        let v: Vec<f64> = sol.x.iter().map(|x| x / norm).collect();
        return Ok(MaxGrowth {
            delta_prime: 1.0 / norm,
            v_gamma: Some(v),
            status: Status::Finite,
            qp_iterations: sol.iterations,
            sphere_resolution: None,
        });
    }

    if t.is_zero() {
        // ψ′ ≤ 0 on L with equality somewhere: δ′ = 0 exactly.
        let mut v = r::zeros(n);
        for (w, gen) in weights.iter().zip(g.generators()) {
            v = r::add(&v, &r::scale(w, gen));
        }
        let vf = vec_to_f64(&v);
        let norm = gram.norm_f(&vf);
        return Ok(MaxGrowth {
            delta_prime: 0.0,
            v_gamma: Some(vf.iter().map(|x| x / norm).collect()),
            status: Status::Nonpositive,
            qp_iterations: 0,
            sphere_resolution: None,
        });
    }

    let (value, v, res) = sphere_search(g, cfg);
    Ok(MaxGrowth {
        delta_prime: value,
        v_gamma: Some(v),
        status: Status::Nonpositive,
        qp_iterations: 0,
        sphere_resolution: Some(res),
    })
}

/// Maximises `ψ′` on the unit sphere of `L` by random rays followed by a
/// shrinking pattern search in generator weights.
fn sphere_search(g: &GrowthIndicator, cfg: &Config) -> (f64, Vec<f64>, f64) {
    let gram = g.root_system().gram();
    let gens = g.generators_f();
    let k = gens.len();
    let unit_value = |w: &[f64]| -> (f64, Vec<f64>) {
        let n = gens[0].len();
        let mut v = vec![0.0; n];
        for (wi, gi) in w.iter().zip(gens) {
            for j in 0..n {
                v[j] += wi * gi[j];
            }
        }
        let norm = gram.norm_f(&v);
        if norm == 0.0 {
            return (f64::NEG_INFINITY, v);
        }
        let v: Vec<f64> = v.iter().map(|x| x / norm).collect();
        (g.psi_prime_on_cone(&v), v)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best_w: Vec<f64> = (0..k).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    let mut best = unit_value(&best_w).0;
    let mut candidates: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _ in 0..cfg.sphere_grid {
        candidates.push((0..k).map(|_| Exp1.sample(&mut rng)).collect());
    }
    for w in candidates {
        let (val, _) = unit_value(&w);
        if val > best {
            best = val;
            best_w = w;
        }
    }
    let s: f64 = best_w.iter().sum();
    best_w.iter_mut().for_each(|x| *x /= s);
    let mut step = 0.25;
    let mut iters = 0;
    while step > 1e-6 && iters < cfg.max_iter {
        iters += 1;
        let mut improved = false;
        for i in 0..k {
            for sign in [1.0, -1.0] {
                let mut w = best_w.clone();
                w[i] += sign * step;
                if w[i] < 0.0 {
                    continue;
                }
                let (val, _) = unit_value(&w);
                if val > best {
                    best = val;
                    best_w = w;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    let (val, v) = unit_value(&best_w);
    (val, v, step.max(1e-4))
}

/// Route B: minimises `F(μ) = ‖μ‖ δ′_μ` on `a*,Her₊` and returns `F_min μ̂`.
pub fn solve_mu_gamma_minimization(g: &GrowthIndicator, cfg: &Config) -> Result<RouteB> {
    let rs = g.root_system();
    let gram = rs.gram();
    let n = rs.rank();
    let basis: Vec<Vec<f64>> = rs
        .iota_orbit_reps()
        .into_iter()
        .map(|i| {
            let h = vec_to_f64(&rs.her_weight(i));
            let norm = gram.norm_f(&h);
            h.iter().map(|x| x / norm).collect()
        })
        .collect();
    let d = basis.len();
    let combine = |w: &[f64]| -> Vec<f64> {
        let mut mu = vec![0.0; n];
        for (wi, b) in w.iter().zip(&basis) {
            for j in 0..n {
                mu[j] += wi * b[j];
            }
        }
        mu
    };
    let objective = |w: &[f64]| -> f64 {
        let mu = combine(w);
        let norm = gram.norm_f(&mu);
        if norm == 0.0 {
            return f64::INFINITY;
        }
        match g.delta_prime(&mu, cfg.tolerance) {
            Ok(rep) if rep.status == Status::Infinite => f64::INFINITY,
            Ok(rep) => norm * rep.delta_prime,
            Err(_) => f64::INFINITY,
        }
    };

    let counter = std::sync::atomic::AtomicUsize::new(0);
    let f = |w: &[f64]| {
        counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        objective(w)
    };

    let (w, value, method, starts, converged, gap) = if d == 1 {
        let w = vec![1.0];
        let v = f(&w);
        (w, v, "single", 1, true, 0.0)
    } else if d <= 3 {
        let mut budget = cfg.max_iter;
        let (w, v, gap) = nested_golden(&f, d, 1.0, &mut budget);
        (w, v, "golden-section", 1, budget > 0, gap)
    } else {
        let starts = dominance_grid(d, cfg.multistarts);
        let runs = par::map(cfg.exec, &starts, |w0| pattern_search(&f, w0.clone(), cfg.max_iter));
        let mut best = runs[0].clone();
        for run in runs.into_iter().skip(1) {
            let better = run.1 < best.1 || (run.1 == best.1 && lex_less(&run.0, &best.0));
            if better {
                best = run;
            }
        }
        let (w, v, step, ok) = best;
        (w, v, "pattern-search", starts.len(), ok, step)
    };

    let mu = combine(&w);
    let norm = gram.norm_f(&mu);
    let mu_gamma =
        if value.is_finite() && value > 0.0 { mu.iter().map(|x| x / norm * value).collect() } else { vec![0.0; n] };
    Ok(RouteB { mu_gamma, value, method, starts, evaluations: counter.into_inner(), converged, gap })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimises a quasiconvex `f` over `{w ≥ 0, Σw = mass}` in `R^d` by golden
/// section on the first coordinate, recursing on the rest.
fn nested_golden(f: &dyn Fn(&[f64]) -> f64, d: usize, mass: f64, budget: &mut usize) -> (Vec<f64>, f64, f64) {
    if d == 1 {
        let w = vec![mass];
        let v = f(&w);
        return (w, v, 0.0);
    }
    let inner = |s: f64, budget: &mut usize| -> (Vec<f64>, f64) {
        let sub = |rest: &[f64]| {
            let mut w = Vec::with_capacity(d);
            w.push(s);
            w.extend_from_slice(rest);
            f(&w)
        };
        let (rest, v, _) = nested_golden(&sub, d - 1, mass - s, budget);
        let mut w = vec![s];
        w.extend(rest);
        (w, v)
    };
    let (mut a, mut b) = (0.0, mass);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut w1, mut f1) = inner(x1, budget);
    let (mut w2, mut f2) = inner(x2, budget);
    let tol = 1e-10 * mass.max(1e-300);
    while b - a > tol && *budget > 0 {
        *budget -= 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            (w2, f2) = (w1.clone(), f1);
            x1 = b - INV_PHI * (b - a);
            (w1, f1) = inner(x1, budget);
        } else {
            a = x1;
            x1 = x2;
            (w1, f1) = (w2.clone(), f2);
            x2 = a + INV_PHI * (b - a);
            (w2, f2) = inner(x2, budget);
        }
    }
    if f1 <= f2 {
        (w1, f1, b - a)
    } else {
        (w2, f2, b - a)
    }
}

/// Simplex points with denominators `m` for the smallest `m` giving at
/// least `count`, ordered from the barycentre outwards and truncated.
fn dominance_grid(d: usize, count: usize) -> Vec<Vec<f64>> {
    let mut m = 1;
    loop {
        let pts = simplex_points(d, m);
        if pts.len() >= count || m > 64 {
            let centre = vec![1.0 / d as f64; d];
            let mut pts: Vec<Vec<f64>> =
                pts.into_iter().map(|p| p.iter().map(|&x| x as f64 / m as f64).collect()).collect();
            pts.sort_by(|a: &Vec<f64>, b: &Vec<f64>| {
                let da: f64 = a.iter().zip(&centre).map(|(x, c)| (x - c).powi(2)).sum();
                let db: f64 = b.iter().zip(&centre).map(|(x, c)| (x - c).powi(2)).sum();
                da.total_cmp(&db).then_with(|| a.partial_cmp(b).unwrap())
            });
            pts.insert(0, centre);
            pts.truncate(count.max(1));
            return pts;
        }
        m += 1;
    }
}

fn simplex_points(d: usize, m: usize) -> Vec<Vec<usize>> {
    if d == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in simplex_points(d - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Compass search on the simplex along the directions `e_i − e_j`.
fn pattern_search<F: Fn(&[f64]) -> f64>(f: &F, mut w: Vec<f64>, max_iter: usize) -> (Vec<f64>, f64, f64, bool) {
    let d = w.len();
    let mut best = f(&w);
    let mut step = 0.25;
    let mut iters = 0;
    while step > 1e-11 {
        if iters >= max_iter {
            return (w, best, step, false);
        }
        iters += 1;
        let mut improved = false;
        for i in 0..d {
            for j in 0..d {
                if i == j || w[j] < step {
                    continue;
                }
                let mut c = w.clone();
                c[i] += step;
                c[j] -= step;
                let v = f(&c);
                if v < best {
                    best = v;
                    w = c;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (w, best, step, true)
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.partial_cmp(b) == Some(std::cmp::Ordering::Less)
}

/// `θ_μ = max_{v ∈ a₊} μ_Γ(v)/μ(v)`, attained on extremal rays; `+∞` when
/// `μ` fails to be positive on some ray.
pub fn theta_mu(rs: &RootSystem, mu_gamma: &[f64], mu: &[f64]) -> f64 {
    let gram = rs.gram();
    let mut best = f64::NEG_INFINITY;
    for ray in rs.extremal_rays() {
        let v = vec_to_f64(ray);
        let den = gram.pair_f(mu, &v);
        if den <= 0.0 {
            return f64::INFINITY;
        }
        best = best.max(gram.pair_f(mu_gamma, &v) / den);
    }
    best
}

pub fn theta_mu_exact(rs: &RootSystem, mu_gamma: &[Q], mu: &[Q]) -> ExtQ {
    let mut best: Option<Q> = None;
    for ray in rs.extremal_rays() {
        let den = rs.pair(mu, ray);
        if !den.is_positive() {
            return ExtQ::PosInf;
        }
        let ratio = rs.pair(mu_gamma, ray) / den;
        if best.as_ref().is_none_or(|b| ratio > *b) {
            best = Some(ratio);
        }
    }
    ExtQ::Finite(best.unwrap_or_default())
}

/// `θ` at each primitive fundamental-weight direction.
pub fn theta_table(rs: &RootSystem, mu_gamma: &[f64]) -> Vec<ThetaEntry> {
    rs.extremal_rays()
        .iter()
        .map(|w| {
            let omega = vec_to_f64(w);
            let value = theta_mu(rs, mu_gamma, &omega);
            ThetaEntry { omega, value }
        })
        .collect()
}

/// Route A, Route B when `δ′ > 0`, and the θ table.
pub fn critical_data(g: &GrowthIndicator, cfg: &Config) -> Result<CriticalData> {
    let rs = g.root_system();
    let a = solve_delta_prime_max(g, cfg)?;
    let mu_gamma = a.mu_gamma(rs.rank());
    let (route_b, route_gap) = if a.status == Status::Finite {
        let b = solve_mu_gamma_minimization(g, cfg)?;
        let diff: Vec<f64> = mu_gamma.iter().zip(&b.mu_gamma).map(|(x, y)| x - y).collect();
        let gap = rs.gram().norm_f(&diff) / rs.gram().norm_f(&mu_gamma);
        (Some(b), Some(gap))
    } else {
        (None, None)
    };
    Ok(CriticalData {
        delta_prime: a.delta_prime,
        status: a.status,
        v_gamma: a.v_gamma,
        theta: theta_table(rs, &mu_gamma),
        mu_gamma,
        route_gap,
        route_b,
        qp_iterations: a.qp_iterations,
        sphere_resolution: a.sphere_resolution,
    })
}

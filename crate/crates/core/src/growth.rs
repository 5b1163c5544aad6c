//! Piecewise-linear concave growth models and their critical exponents.
//!
//! A model is `ψ(v) = min_i ℓ_i(v)` on a polyhedral cone `L ⊆ a₊` and `−∞`
//! outside. Critical exponents are linear-fractional programs over `L`,
//! solved as LPs in the generator weights.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{dominant_cone, ConeSpec, PolyCone};
use crate::error::{check_dim, Error, Result};
use crate::lie::{RootSystem, RootSystemSpec};
use crate::lp::{Field, Lp, LpOutcome, Rel};
use crate::rational::{self as r, from_ratstr, to_ratstr, vec_to_f64, ExtQ, QVec, RatStr, Q};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSpec {
    pub root_system: RootSystemSpec,
    /// Defaults to the Weyl chamber.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeSpec>,
    pub pieces: Vec<Vec<RatStr>>,
}

#[derive(Clone, Debug)]
pub struct GrowthIndicator {
    rs: RootSystem,
    cone: PolyCone,
    pieces: Vec<QVec>,
    gens_f: Vec<Vec<f64>>,
    pieces_f: Vec<Vec<f64>>,
    rho_f: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Finite,
    Nonpositive,
    Infinite,
}

/// Float-layer critical exponent with its witness.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    /// `+∞`, a finite value, or `−∞` when `μ ≤ 0` on all of `L` and `ψ′ ≤ 0`.
    #[serde(with = "crate::rational::ext_f64")]
    pub delta_prime: f64,
    /// Maximiser `v₀` with `μ(v₀) = 1`, or the certificate vector for `+∞`.
    pub witness: Option<Vec<f64>>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeltaExact {
    Finite {
        value: Q,
        witness: QVec,
    },
    Infinite {
        certificate: QVec,
    },
    /// `μ ≤ 0` on the whole cone and no positive values: the sup is empty.
    NegInfinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sandwich {
    #[serde(with = "crate::rational::ext_f64")]
    pub delta_prime: f64,
    #[serde(with = "crate::rational::ext_f64")]
    pub delta: f64,
    pub inf_rho: f64,
    pub sup_rho: f64,
    /// `δ′ − inf ρ`.
    #[serde(with = "crate::rational::ext_f64")]
    pub lower: f64,
    /// `δ′ + inf ρ`.
    #[serde(with = "crate::rational::ext_f64")]
    pub tight_lower: f64,
    /// `δ′ + sup ρ`.
    #[serde(with = "crate::rational::ext_f64")]
    pub upper: f64,
    pub contains: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TentFailure {
    pub mu: Vec<f64>,
    pub v: Vec<f64>,
    pub psi_prime: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TentReport {
    pub functionals: usize,
    pub vacuous: usize,
    pub points_checked: usize,
    pub failures: Vec<TentFailure>,
}

impl TentReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl GrowthIndicator {
    /// Structural checks only; see [`GrowthIndicator::invariant_violations`].
    pub fn new(rs: &RootSystem, cone: PolyCone, pieces: Vec<QVec>) -> Result<Self> {
        let n = rs.rank();
        check_dim(n, cone.rank())?;
        if pieces.is_empty() {
            return Err(Error::Input("a growth model needs at least one piece".into()));
        }
        for p in &pieces {
            check_dim(n, p.len())?;
        }
        let gram = rs.gram();
        let gens_f = cone
            .generators()?
            .iter()
            .map(|g| {
                let f = vec_to_f64(g);
                let norm = gram.norm_f(&f);
                f.iter().map(|x| x / norm).collect()
            })
            .collect();
        let pieces_f = pieces.iter().map(|p| vec_to_f64(p)).collect();
        Ok(GrowthIndicator { rs: rs.clone(), cone, pieces, gens_f, pieces_f, rho_f: vec_to_f64(rs.rho()) })
    }

    /// Constructs and rejects models violating the growth-indicator
    /// invariants.
    pub fn new_validated(rs: &RootSystem, cone: PolyCone, pieces: Vec<QVec>) -> Result<Self> {
        let g = Self::new(rs, cone, pieces)?;
        let v = g.invariant_violations(1000, 0)?;
        if v.is_empty() {
            Ok(g)
        } else {
            Err(Error::ModelInvariant(v.join("; ")))
        }
    }

    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        let rs = RootSystem::from_spec(&spec.root_system)?;
        let cone = match &spec.cone {
            Some(c) => PolyCone::from_spec(rs.gram(), c)?,
            None => dominant_cone(&rs),
        };
        let pieces = spec.pieces.iter().cloned().map(from_ratstr).collect();
        Self::new(&rs, cone, pieces)
    }

    pub fn to_spec(&self) -> ModelSpec {
        ModelSpec {
            root_system: self.rs.to_spec(),
            cone: Some(self.cone.to_spec()),
            pieces: self.pieces.iter().map(|p| to_ratstr(p)).collect(),
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn pieces(&self) -> &[QVec] {
        &self.pieces
    }

    pub fn generators(&self) -> &[QVec] {
        self.cone.generators().expect("model cones carry generators")
    }

    /// Generators scaled to unit norm, float layer.
    pub fn generators_f(&self) -> &[Vec<f64>] {
        &self.gens_f
    }

    pub fn modified_pieces(&self) -> Vec<QVec> {
        self.pieces.iter().map(|p| r::sub(p, self.rs.rho())).collect()
    }

    pub fn modified_pieces_f(&self) -> Vec<Vec<f64>> {
        self.pieces_f.iter().map(|p| p.iter().zip(&self.rho_f).map(|(a, b)| a - b).collect()).collect()
    }

    /// `ψ(v)`, `None` standing for `−∞`.
    pub fn evaluate(&self, v: &[Q]) -> Option<Q> {
        if !self.cone.contains_closed(v) {
            return None;
        }
        self.pieces.iter().map(|p| self.rs.pair(p, v)).min()
    }

    pub fn evaluate_prime(&self, v: &[Q]) -> Option<Q> {
        self.evaluate(v).map(|x| x - self.rs.pair(self.rs.rho(), v))
    }

    pub fn evaluate_f(&self, v: &[f64], tol: f64) -> f64 {
        if !self.cone.contains_f(v, tol) {
            return f64::NEG_INFINITY;
        }
        self.pieces_f.iter().map(|p| self.rs.gram().pair_f(p, v)).fold(f64::INFINITY, f64::min)
    }

    pub fn evaluate_prime_f(&self, v: &[f64], tol: f64) -> f64 {
        self.evaluate_f(v, tol) - self.rs.gram().pair_f(&self.rho_f, v)
    }

    /// `ψ′` without the cone test; callers guarantee `v ∈ L`.
    pub fn psi_prime_on_cone(&self, v: &[f64]) -> f64 {
        let g = self.rs.gram();
        let rho = g.pair_f(&self.rho_f, v);
        self.pieces_f.iter().map(|p| g.pair_f(p, v)).fold(f64::INFINITY, f64::min) - rho
    }

    /// Lists violated invariants: `L ⊆ a₊`, `ψ ≥ 0` and `ψ ≤ 2ρ` on `L`,
    /// ι-stability of `L` and ι-invariance of `ψ` on generators and on
    /// `samples` random points.
    pub fn invariant_violations(&self, samples: usize, seed: u64) -> Result<Vec<String>> {
        let rs = &self.rs;
        let mut out = Vec::new();
        let gens = self.generators();
        if gens.iter().any(|g| !rs.is_dominant(g)) {
            out.push("cone is not contained in the Weyl chamber".to_string());
        }
        for g in gens {
            let v = self.evaluate(g).expect("generator lies in its cone");
            if v.is_negative() {
                out.push(format!("psi < 0 at generator {}", crate::lie::fmt_vec(g)));
            }
        }
        // ψ − 2ρ is concave, so its max over L needs an LP, not just generators.
        let two_rho = r::scale(&crate::rational::q(2), rs.rho());
        let excess: Vec<QVec> = self.pieces.iter().map(|p| r::sub(p, &two_rho)).collect();
        if let Some((t, _)) = max_min_on_simplex::<Q>(&self.exact_values(&excess), 10_000) {
            if t.is_positive() {
                out.push("psi exceeds 2 rho somewhere on the cone".to_string());
            }
        }
        if !self.cone.is_iota_stable(rs)? {
            out.push("cone is not iota-stable".to_string());
        }
        let mut points: Vec<QVec> = gens.to_vec();
        points.extend(self.sample_cone_points(samples, seed));
        for v in &points {
            let a = self.evaluate(v);
            let b = self.evaluate(&rs.iota(v));
            if a != b {
                out.push(format!("psi is not iota-invariant at {}", crate::lie::fmt_vec(v)));
                break;
            }
        }
        Ok(out)
    }

    /// Random nonnegative integer combinations of generators.
    pub fn sample_cone_points(&self, count: usize, seed: u64) -> Vec<QVec> {
        let gens = self.generators();
        if gens.is_empty() {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.rs.rank();
        (0..count)
            .map(|_| loop {
                let mut v = r::zeros(n);
                for g in gens {
                    let c: i64 = rng.random_range(0..=6);
                    if c > 0 {
                        v = r::add(&v, &r::scale(&crate::rational::q(c), g));
                    }
                }
                if !r::is_zero_vec(&v) {
                    break v;
                }
            })
            .collect()
    }

    fn exact_values(&self, functionals: &[QVec]) -> Vec<Vec<Q>> {
        functionals.iter().map(|f| self.generators().iter().map(|g| self.rs.pair(f, g)).collect()).collect()
    }

    fn float_values(&self, functionals: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let g = self.rs.gram();
        functionals.iter().map(|f| self.gens_f.iter().map(|v| g.pair_f(f, v)).collect()).collect()
    }

    fn combine_f(&self, weights: &[f64]) -> Vec<f64> {
        let n = self.rs.rank();
        let mut v = vec![0.0; n];
        for (w, g) in weights.iter().zip(&self.gens_f) {
            for k in 0..n {
                v[k] += w * g[k];
            }
        }
        v
    }

    fn combine_q(&self, weights: &[Q]) -> QVec {
        let mut v = r::zeros(self.rs.rank());
        for (w, g) in weights.iter().zip(self.generators()) {
            if !w.is_zero() {
                v = r::add(&v, &r::scale(w, g));
            }
        }
        v
    }

    /// Closure of `L′ = {ψ′ > 0}` with the piece halfspaces marked strict,
    /// and whether `L′` itself is empty.
    pub fn modified_limit_cone(&self) -> Result<(PolyCone, bool)> {
        let modified = self.modified_pieces();
        let closure = self.cone.intersect(&modified, true)?;
        let empty = match max_min_on_simplex::<Q>(&self.exact_values(&modified), 10_000) {
            Some((t, _)) => !t.is_positive(),
            None => true,
        };
        Ok((closure, empty))
    }

    /// `δ′_μ = sup_{v ∈ L} ψ′(v)/μ(v)`.
    pub fn delta_prime(&self, mu: &[f64], tol: f64) -> Result<DeltaReport> {
        self.delta_f(mu, true, tol)
    }

    /// `δ_μ = sup_{v ∈ L} ψ(v)/μ(v)`.
    pub fn delta(&self, mu: &[f64], tol: f64) -> Result<DeltaReport> {
        self.delta_f(mu, false, tol)
    }

    fn delta_f(&self, mu: &[f64], modified: bool, tol: f64) -> Result<DeltaReport> {
        check_dim(self.rs.rank(), mu.len())?;
        if mu.iter().all(|x| *x == 0.0) {
            return Err(Error::Input("delta' is undefined for mu = 0".into()));
        }
        if self.gens_f.is_empty() {
            return Ok(DeltaReport { delta_prime: f64::NEG_INFINITY, witness: None, status: Status::Nonpositive });
        }
        let g = self.rs.gram();
        let mu_vals: Vec<f64> = self.gens_f.iter().map(|v| g.pair_f(mu, v)).collect();
        let funcs = if modified { self.modified_pieces_f() } else { self.pieces_f.clone() };
        let vals = self.float_values(&funcs);
        let out = delta_lp::<f64>(&mu_vals, &vals, 10_000);
        Ok(match out {
            DeltaLp::Sign { t, weights } if t > tol => DeltaReport {
                delta_prime: f64::INFINITY,
                witness: Some(self.combine_f(&weights)),
                status: Status::Infinite,
            },
            DeltaLp::Sign { .. } | DeltaLp::Main(LpOutcome::Infeasible) => {
                DeltaReport { delta_prime: f64::NEG_INFINITY, witness: None, status: Status::Nonpositive }
            }
            DeltaLp::Main(LpOutcome::Unbounded { ray, .. }) => DeltaReport {
                delta_prime: f64::INFINITY,
                witness: Some(self.combine_f(&ray[..ray.len() - 1])),
                status: Status::Infinite,
            },
            DeltaLp::Main(LpOutcome::Optimal { x, value }) => {
                let w = self.combine_f(&x[..x.len() - 1]);
                let status = if value > tol { Status::Finite } else { Status::Nonpositive };
                DeltaReport { delta_prime: value, witness: Some(w), status }
            }
            DeltaLp::Main(LpOutcome::IterationLimit) => {
                return Err(Error::Solver("delta' LP hit the iteration limit".into()))
            }
        })
    }

    /// Exact `δ′_μ` (or `δ_μ` with `modified = false`) over the rationals.
    pub fn delta_exact(&self, mu: &[Q], modified: bool) -> Result<DeltaExact> {
        check_dim(self.rs.rank(), mu.len())?;
        if r::is_zero_vec(mu) {
            return Err(Error::Input("delta' is undefined for mu = 0".into()));
        }
        if self.generators().is_empty() {
            return Ok(DeltaExact::NegInfinite);
        }
        let mu_vals: Vec<Q> = self.generators().iter().map(|g| self.rs.pair(mu, g)).collect();
        let funcs = if modified { self.modified_pieces() } else { self.pieces.clone() };
        let vals = self.exact_values(&funcs);
        Ok(match delta_lp::<Q>(&mu_vals, &vals, 10_000) {
            DeltaLp::Sign { t, weights } if t.is_positive() => {
                DeltaExact::Infinite { certificate: self.combine_q(&weights) }
            }
            DeltaLp::Sign { .. } | DeltaLp::Main(LpOutcome::Infeasible) => DeltaExact::NegInfinite,
            DeltaLp::Main(LpOutcome::Unbounded { ray, .. }) => {
                DeltaExact::Infinite { certificate: self.combine_q(&ray[..ray.len() - 1]) }
            }
            DeltaLp::Main(LpOutcome::Optimal { x, value }) => {
                DeltaExact::Finite { value, witness: self.combine_q(&x[..x.len() - 1]) }
            }
            DeltaLp::Main(LpOutcome::IterationLimit) => {
                return Err(Error::Solver("exact LP hit the iteration limit".into()))
            }
        })
    }

    pub fn delta_prime_exact(&self, mu: &[Q]) -> Result<DeltaExact> {
        self.delta_exact(mu, true)
    }

    /// `δ′ − inf ρ ≤ δ ≤ δ′ + sup ρ` over `{v ∈ L : μ(v) = 1}`.
    pub fn exponent_sandwich(&self, mu: &[f64], tol: f64) -> Result<Sandwich> {
        let g = self.rs.gram();
        let mu_vals: Vec<f64> = self.gens_f.iter().map(|v| g.pair_f(mu, v)).collect();
        if mu_vals.is_empty() || mu_vals.iter().any(|x| *x <= tol) {
            return Err(Error::Precondition("mu must be positive on the cone".into()));
        }
        let dp = self.delta_prime(mu, tol)?.delta_prime;
        let d = self.delta(mu, tol)?.delta_prime;
        // Linear-fractional extremes are attained at generators.
        let ratios: Vec<f64> = self.gens_f.iter().zip(&mu_vals).map(|(v, m)| g.pair_f(&self.rho_f, v) / m).collect();
        let inf_rho = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let sup_rho = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let slack = tol * (1.0 + d.abs());
        let contains = dp + inf_rho - slack <= d && d <= dp + sup_rho + slack;
        Ok(Sandwich {
            delta_prime: dp,
            delta: d,
            inf_rho,
            sup_rho,
            lower: dp - inf_rho,
            tight_lower: dp + inf_rho,
            upper: dp + sup_rho,
            contains,
        })
    }

    /// Checks `ψ′(v) ≤ δ′_μ μ(v) + slack` on the generators and on random
    /// cone points for each `μ`. Functionals outside the dual cone are
    /// rejected.
    pub fn tent_check(&self, mus: &[Vec<f64>], samples: usize, seed: u64, slack: f64, tol: f64) -> Result<TentReport> {
        let g = self.rs.gram();
        let mut points: Vec<Vec<f64>> = self.gens_f.clone();
        for p in self.sample_cone_points(samples, seed) {
            let f = vec_to_f64(&p);
            let norm = g.norm_f(&f);
            points.push(f.iter().map(|x| x / norm).collect());
        }
        let mut report = TentReport { functionals: mus.len(), vacuous: 0, points_checked: 0, failures: Vec::new() };
        for mu in mus {
            if self.gens_f.iter().any(|v| g.pair_f(mu, v) < -tol) {
                return Err(Error::Precondition("tent check needs mu in the dual cone".into()));
            }
            let d = self.delta_prime(mu, tol)?;
            if d.status == Status::Infinite || d.delta_prime == f64::NEG_INFINITY {
                report.vacuous += 1;
                continue;
            }
            for v in &points {
                let lhs = self.psi_prime_on_cone(v);
                let rhs = d.delta_prime * g.pair_f(mu, v);
                report.points_checked += 1;
                if lhs > rhs + slack {
                    report.failures.push(TentFailure { mu: mu.clone(), v: v.clone(), psi_prime: lhs, bound: rhs });
                }
            }
        }
        Ok(report)
    }

    /// `max_{α ∈ I} sup_{v ∈ L} ρ(v)/α(v)`, attained at generators; `+∞`
    /// when `L` touches `ker α`.
    pub fn limit_set_dim_bound(&self, subset: &[usize]) -> Result<ExtQ> {
        let mut best = <Q as Zero>::zero();
        for &a in subset {
            let alpha = crate::cone::simple(&self.rs, a)?;
            for g in self.generators() {
                let den = self.rs.pair(alpha, g);
                if !den.is_positive() {
                    return Ok(ExtQ::PosInf);
                }
                let ratio = self.rs.pair(self.rs.rho(), g) / den;
                if ratio > best {
                    best = ratio;
                }
            }
        }
        Ok(ExtQ::Finite(best))
    }
}

enum DeltaLp<F> {
    Sign { t: F, weights: Vec<F> },
    Main(LpOutcome<F>),
}

/// Sign LP first (`Σλ = 1`, `μ ≤ 0`, maximise the minimum piece value),
/// then the Charnes–Cooper LP (`μ = 1`, maximise the minimum piece value).
/// `vals[i][j]` is piece `i` at generator `j`.
fn delta_lp<F: Field>(mu_vals: &[F], vals: &[Vec<F>], max_iter: usize) -> DeltaLp<F> {
    let k = mu_vals.len();
    let mut sign = Lp::new(k + 1).maximize(objective_t::<F>(k));
    sign.set_free(k);
    let mut ones = vec![F::one(); k];
    ones.push(F::zero());
    sign.row(ones, Rel::Eq, F::one());
    let mut mu_row = mu_vals.to_vec();
    mu_row.push(F::zero());
    sign.row(mu_row, Rel::Le, F::zero());
    for row in vals {
        sign.row(piece_row(row), Rel::Ge, F::zero());
    }
    if let LpOutcome::Optimal { x, value } = sign.solve(max_iter) {
        if value.sign() == std::cmp::Ordering::Greater {
            return DeltaLp::Sign { t: value, weights: x[..k].to_vec() };
        }
    }

    let mut main = Lp::new(k + 1).maximize(objective_t::<F>(k));
    main.set_free(k);
    let mut mu_row = mu_vals.to_vec();
    mu_row.push(F::zero());
    main.row(mu_row, Rel::Eq, F::one());
    for row in vals {
        main.row(piece_row(row), Rel::Ge, F::zero());
    }
    DeltaLp::Main(main.solve(max_iter))
}

fn objective_t<F: Field>(k: usize) -> Vec<F> {
    let mut c = vec![F::zero(); k + 1];
    c[k] = F::one();
    c
}

fn piece_row<F: Field>(row: &[F]) -> Vec<F> {
    let mut a = row.to_vec();
    a.push(F::one().neg());
    a
}

/// `max_{Σλ = 1, λ ≥ 0} min_i Σ_j λ_j vals[i][j]` with its weights.
pub(crate) fn max_min_on_simplex<F: Field>(vals: &[Vec<F>], max_iter: usize) -> Option<(F, Vec<F>)> {
    let k = vals.first().map_or(0, |r| r.len());
    if k == 0 {
        return None;
    }
    let mut lp = Lp::new(k + 1).maximize(objective_t::<F>(k));
    lp.set_free(k);
    let mut ones = vec![F::one(); k];
    ones.push(F::zero());
    lp.row(ones, Rel::Eq, F::one());
    for row in vals {
        lp.row(piece_row(row), Rel::Ge, F::zero());
    }
    match lp.solve(max_iter) {
        LpOutcome::Optimal { x, value } => Some((value, x[..k].to_vec())),
        _ => None,
    }
}

//! The `growth solve` report: critical data, a δ′ table and, in consistency
//! mode, the identities an actual discrete group would satisfy.

use serde::Serialize;

use crate::checks::replays::{check_psilinear, check_tent_equality, deduce_onewall_with, ReplayStatus};
use crate::cone::avoids_facet;
use crate::config::Config;
use crate::critical::{critical_data, CriticalData};
use crate::error::Result;
use crate::growth::{GrowthIndicator, Status};
use crate::rational::ext_f64;

#[derive(Clone, Debug, Serialize)]
pub struct MuRow {
    pub mu: Vec<f64>,
    #[serde(with = "ext_f64")]
    pub delta_prime: f64,
    pub witness: Option<Vec<f64>>,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub root_system: String,
    pub rank: usize,
    #[serde(flatten)]
    pub critical: CriticalData,
    pub mu_table: Vec<MuRow>,
    /// Unconditional properties of the solution; nonempty means a defect.
    pub solution_violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<Vec<ConsistencyCheck>>,
}

impl SolveReport {
    pub fn passed(&self) -> bool {
        self.solution_violations.is_empty() && self.consistency.iter().flatten().all(|c| c.passed)
    }
}

pub fn solve_report(g: &GrowthIndicator, cfg: &Config, mus: &[Vec<f64>]) -> Result<SolveReport> {
    let rs = g.root_system();
    let critical = critical_data(g, cfg)?;
    let mut mu_table = Vec::new();
    for mu in mus {
        let d = g.delta_prime(mu, cfg.tolerance)?;
        mu_table.push(MuRow { mu: mu.clone(), delta_prime: d.delta_prime, witness: d.witness, status: d.status });
    }
    let solution_violations = critical.invariant_violations(g, 1e-7);
    let consistency = if cfg.consistency { Some(consistency_checks(g, cfg, &critical)?) } else { None };
    Ok(SolveReport {
        root_system: rs.label().to_string(),
        rank: rs.rank(),
        critical,
        mu_table,
        solution_violations,
        consistency,
    })
}

fn consistency_checks(g: &GrowthIndicator, cfg: &Config, data: &CriticalData) -> Result<Vec<ConsistencyCheck>> {
    let rs = g.root_system();
    let mut out = Vec::new();
    let tent = check_tent_equality(g, cfg, 20)?;
    out.push(ConsistencyCheck {
        name: "tent-equality".into(),
        passed: tent.holds,
        detail: format!("{} functionals, worst θ_μ − max(0, δ′_μ) = {:.3e}", tent.functionals, tent.worst_excess),
    });
    let (closure, empty) = g.modified_limit_cone()?;
    if !empty {
        for a in 0..rs.rank() {
            if !avoids_facet(rs, &closure, a)? {
                continue;
            }
            let rep = deduce_onewall_with(g, &closure, a, data, cfg)?;
            out.push(ConsistencyCheck {
                name: format!("attainment-alpha{}", a + 1),
                passed: rep.premise_holds,
                detail: format!("θ_λ = {:.9}, δ′_λ = {:.9}", rep.theta_lambda, rep.delta_prime_lambda),
            });
            out.push(ConsistencyCheck {
                name: format!("onewall-alpha{}", a + 1),
                passed: rep.conclusion_holds,
                detail: crate::checks::status_name(rep.status),
            });
            debug_assert!(rep.status != ReplayStatus::ImplicationViolated);
        }
    }
    let lin = check_psilinear(g, cfg, 50)?;
    out.push(ConsistencyCheck {
        name: "psilinear-equality".into(),
        passed: lin.equality_holds,
        detail: format!("{}/{} samples with ψ = μ_Γ + ρ", lin.equality_count, lin.samples),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::PolyCone;
    use crate::lie::RootSystem;
    use crate::rational::qvec;

    fn rho_plus(rs: &RootSystem, extra: &[i64]) -> Vec<crate::rational::Q> {
        crate::rational::add(rs.rho(), &qvec(extra))
    }

    #[test]
    fn report_fields() {
        let rs = RootSystem::preset("b2").unwrap();
        let g = GrowthIndicator::new(&rs, crate::cone::dominant_cone(&rs), vec![rho_plus(&rs, &[1, 1])]).unwrap();
        let cfg = Config::default();
        let rep = solve_report(&g, &cfg, &[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(rep.passed());
        assert!(rep.consistency.is_none());
        assert_eq!(rep.mu_table.len(), 2);
        assert!((rep.mu_table[0].delta_prime - 1.0).abs() < 1e-9);
        let json = serde_json::to_value(&rep).unwrap();
        assert!(json.get("delta_prime").is_some() && json.get("mu_gamma").is_some());
    }

    #[test]
    fn consistency_flags_unrealisable_model() {
        let rs = RootSystem::preset("b2").unwrap();
        let cone = PolyCone::from_generators(rs.gram(), vec![qvec(&[5, 2]), qvec(&[7, 3])]).unwrap();
        let piece = crate::rational::add(rs.rho(), &[crate::rational::qf(3, 4), crate::rational::qf(1, 4)]);
        let g = GrowthIndicator::new(&rs, cone, vec![piece]).unwrap();
        let cfg = Config { consistency: true, ..Config::default() };
        let rep = solve_report(&g, &cfg, &[]).unwrap();
        assert!(rep.solution_violations.is_empty());
        assert!(!rep.passed());
    }
}

//! Growth bounds when the modified limit cone avoids one wall, for groups
//! with Property (T), where `ψ′ ≤ ρ − Θ`.

use num_traits::Signed;
use serde::Serialize;

use crate::cone::simple;
use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::rational::{self as r, primitive, to_ratstr, QVec, RatStr, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct WallBound {
    /// Primitive integral covector on the ray `R≥0(ω_α + ιω_α)`.
    pub lambda: QVec,
    /// `min_{v ∈ a₊} (ρ − Θ)(v)/λ(v)`, bounding `δ′_λ`.
    pub c: Q,
    /// `ρ + c λ`.
    pub bound: QVec,
}

#[derive(Clone, Debug, Serialize)]
pub struct WallBoundReport {
    pub preset: String,
    pub alpha: usize,
    pub lambda: Vec<RatStr>,
    pub c: RatStr,
    pub bound: Vec<RatStr>,
    pub rho: Vec<RatStr>,
    pub theta: Vec<RatStr>,
    pub two_rho_minus_theta: Vec<RatStr>,
    pub improves: bool,
}

/// The bound for simple root index `alpha`, with the given `ρ − Θ`.
pub fn bound_from(rs: &RootSystem, alpha: usize, rho_minus_theta: &[Q]) -> Result<WallBound> {
    simple(rs, alpha)?;
    let lambda = primitive(&rs.her_weight(alpha));
    let mut c: Option<Q> = None;
    for v in rs.extremal_rays() {
        let num = rs.pair(rho_minus_theta, v);
        if num.is_negative() {
            return Err(Error::Precondition("ρ − Θ must be nonnegative on a₊".into()));
        }
        let ratio = num / rs.pair(&lambda, v);
        if c.as_ref().is_none_or(|x| ratio < *x) {
            c = Some(ratio);
        }
    }
    let c = c.unwrap_or_default();
    let bound = r::add(rs.rho(), &r::scale(&c, &lambda));
    Ok(WallBound { lambda, c, bound })
}

/// `ψ ≤ ρ + c λ` when `L′ ∩ ker α = ∅`.
pub fn bound_wall_avoided(rs: &RootSystem, alpha: usize) -> Result<WallBound> {
    bound_from(rs, alpha, &r::sub(rs.rho(), rs.theta()))
}

pub fn wall_bound_report(rs: &RootSystem, alpha: usize) -> Result<WallBoundReport> {
    let b = bound_wall_avoided(rs, alpha)?;
    let generic = r::sub(&r::scale(&r::q(2), rs.rho()), rs.theta());
    // Strictly better than 2ρ − Θ somewhere on a₊.
    let improves = rs.extremal_rays().iter().any(|v| rs.pair(&b.bound, v) < rs.pair(&generic, v));
    Ok(WallBoundReport {
        preset: rs.label().to_string(),
        alpha: alpha + 1,
        lambda: to_ratstr(&b.lambda),
        c: RatStr(b.c.clone()),
        bound: to_ratstr(&b.bound),
        rho: to_ratstr(rs.rho()),
        theta: to_ratstr(rs.theta()),
        two_rho_minus_theta: to_ratstr(&generic),
        improves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn so2n_bounds() {
        for n in 3..=10i64 {
            let rs = RootSystem::preset(&format!("so(2,{n})")).unwrap();
            let c = qf(n - 2, 2);
            let b1 = bound_wall_avoided(&rs, 0).unwrap();
            assert_eq!(b1.c, c);
            assert_eq!(b1.bound, vec![q(n - 1), qf(n - 2, 2)]);
            let b2 = bound_wall_avoided(&rs, 1).unwrap();
            assert_eq!(b2.c, c);
            let generic = r::sub(&r::scale(&q(2), rs.rho()), rs.theta());
            assert_eq!(b2.bound, generic);
            assert!(wall_bound_report(&rs, 0).unwrap().improves);
            assert!(!wall_bound_report(&rs, 1).unwrap().improves);
        }
    }

    #[test]
    fn degenerate_theta() {
        let rs = RootSystem::preset("so(2,5)").unwrap();
        let b = bound_from(&rs, 0, &r::zeros(2)).unwrap();
        assert_eq!(b.c, q(0));
        assert_eq!(&b.bound, rs.rho());
        assert!(bound_from(&rs, 0, &[q(-1), q(0)]).is_err());
    }
}

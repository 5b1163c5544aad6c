//! Exact verifiers for the linear-algebra lemmas about the Weyl chamber.
//! These are theorems; a failed verdict is a defect.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cone::{lemma_positivity, simple, PositivityVerdict};
use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::rational::{self as r, ratio_if_collinear, QVec, Q};
use crate::PolyCone;

fn require_her(rs: &RootSystem, mu: &[Q]) -> Result<()> {
    crate::error::check_dim(rs.rank(), mu.len())?;
    if !rs.is_dominant(mu) {
        return Err(Error::Precondition("μ is not dominant".into()));
    }
    if !rs.is_iota_invariant(mu) {
        return Err(Error::Precondition("μ is not ι-invariant".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeyLemmaVerdict {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    /// `c` with `μ = c (ω_α + ιω_α)` when collinear.
    pub multiple: Option<String>,
}

impl KeyLemmaVerdict {
    pub fn implication_holds(&self) -> bool {
        !self.hypothesis_holds || self.conclusion_holds
    }
}

/// If `⟨μ,ω_β⟩/⟨λ,ω_β⟩ ≤ ⟨μ,ω_α⟩/⟨λ,ω_α⟩` for every `β`, with
/// `λ = ω_α + ιω_α`, then `μ ∈ R≥0 λ`.
pub fn check_keylemma(rs: &RootSystem, mu: &[Q], alpha: usize) -> Result<KeyLemmaVerdict> {
    require_her(rs, mu)?;
    simple(rs, alpha)?;
    let lambda = rs.her_weight(alpha);
    let w = rs.fundamental_weights();
    let mu_a = rs.pair(mu, &w[alpha]);
    let la_a = rs.pair(&lambda, &w[alpha]);
    let mut hypothesis = true;
    for wb in w {
        let la_b = rs.pair(&lambda, wb);
        if !la_b.is_positive() {
            return Err(Error::Precondition("⟨ω_α + ιω_α, ω_β⟩ must be positive (irreducible systems)".into()));
        }
        // Cross-multiplied; both denominators are positive.
        if rs.pair(mu, wb) * &la_a > &mu_a * la_b {
            hypothesis = false;
        }
    }
    let multiple = if r::is_zero_vec(mu) { Some(Q::zero()) } else { ratio_if_collinear(mu, &lambda) };
    let conclusion = multiple.as_ref().is_some_and(|c| !c.is_negative());
    Ok(KeyLemmaVerdict {
        hypothesis_holds: hypothesis,
        conclusion_holds: conclusion,
        multiple: multiple.map(|c| c.to_string()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PosOfWeightVerdict {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `⟨μ,α⟩ ≤ ⟨μ,ω_α⟩ / ⟨ω_α, α+ια⟩ · ⟨α, α+ια⟩`.
pub fn check_posofweight(rs: &RootSystem, mu: &[Q], alpha: usize) -> Result<PosOfWeightVerdict> {
    require_her(rs, mu)?;
    let a = simple(rs, alpha)?;
    let ia = &rs.simple_roots()[rs.iota_perm()[alpha]];
    let sum = r::add(a, ia);
    let w = &rs.fundamental_weights()[alpha];
    let lhs = rs.pair(mu, a);
    let rhs = rs.pair(mu, w) / rs.pair(w, &sum) * rs.pair(a, &sum);
    Ok(PosOfWeightVerdict { holds: lhs <= rhs, lhs: lhs.to_string(), rhs: rhs.to_string() })
}

/// `⟨v, w⟩ > 0` for nonzero `v, w ∈ a₊` of an irreducible system.
pub fn check_rightangles(rs: &RootSystem, v: &[Q], w: &[Q]) -> Result<bool> {
    if !rs.is_irreducible() {
        return Err(Error::Precondition("the right-angle lemma needs an irreducible system".into()));
    }
    if !rs.is_dominant(v) || !rs.is_dominant(w) || r::is_zero_vec(v) || r::is_zero_vec(w) {
        return Err(Error::Precondition("v and w must be nonzero and dominant".into()));
    }
    Ok(rs.pair(v, w).is_positive())
}

/// The positivity lemma applied to the simple roots: a dominant `u` has
/// nonnegative simple-root coefficients.
pub fn check_positivity(rs: &RootSystem, u: &[Q]) -> Result<PositivityVerdict> {
    lemma_positivity(rs.gram(), rs.simple_roots(), u)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonCollinearity {
    pub alpha: usize,
    pub beta: usize,
    /// Coordinates `(i, j)` of a nonzero 2×2 minor and its value.
    pub minor: (usize, usize, String),
}

/// `ω_α + ιω_α` and `ω_β + ιω_β` are not collinear when `β ≠ α ≠ ιβ`.
pub fn twowalls_certificate(rs: &RootSystem, alpha: usize, beta: usize) -> Result<NonCollinearity> {
    simple(rs, alpha)?;
    simple(rs, beta)?;
    if alpha == beta || alpha == rs.iota_perm()[beta] {
        return Err(Error::Precondition(format!(
            "roots {} and {} are identified by ι; the pair is inadmissible",
            alpha + 1,
            beta + 1
        )));
    }
    let a = rs.her_weight(alpha);
    let b = rs.her_weight(beta);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let m = &a[i] * &b[j] - &a[j] * &b[i];
            if !m.is_zero() {
                return Ok(NonCollinearity { alpha, beta, minor: (i, j, m.to_string()) });
            }
        }
    }
    Err(Error::Precondition("her weights are collinear".into()))
}

/// Admissible pairs `(α, β)`, `α < β`, with `β ≠ ια`.
pub fn admissible_pairs(rs: &RootSystem) -> Vec<(usize, usize)> {
    let n = rs.rank();
    let perm = rs.iota_perm();
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| perm[b] != a).collect()
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Indices of the extremal rays attaining the maximum.
    pub rays: Vec<usize>,
    pub max: Q,
    pub cone: PolyCone,
}

/// Rays of `a₊` attaining `max μ(v)/λ(v)` and the face they span. Since
/// the ratio on `Σ c_β ω_β` is a weighted mean of the ray ratios, the set
/// of maximisers is exactly that face.
pub fn argmax_face(rs: &RootSystem, mu: &[Q], lambda: &[Q]) -> Result<Face> {
    crate::error::check_dim(rs.rank(), mu.len())?;
    crate::error::check_dim(rs.rank(), lambda.len())?;
    let rays = rs.extremal_rays();
    let mut ratios = Vec::with_capacity(rays.len());
    for v in rays {
        let den = rs.pair(lambda, v);
        if !den.is_positive() {
            return Err(Error::Precondition("λ must be positive on every extremal ray".into()));
        }
        ratios.push(rs.pair(mu, v) / den);
    }
    let max = ratios.iter().max().cloned().unwrap_or_default();
    let idx: Vec<usize> = (0..rays.len()).filter(|&i| ratios[i] == max).collect();
    let cone = PolyCone::from_generators(rs.gram(), idx.iter().map(|&i| rays[i].clone()).collect())?;
    Ok(Face { rays: idx, max, cone })
}

/// `t = ⟨μ,α⟩/⟨α,α+ια⟩`, capped at `99/100 · ⟨μ,ω_α⟩/⟨ω_α,α+ια⟩`.
pub fn replay_t(rs: &RootSystem, mu: &[Q], alpha: usize) -> Result<Q> {
    let a = simple(rs, alpha)?;
    let sum = r::add(a, &rs.simple_roots()[rs.iota_perm()[alpha]]);
    let w = &rs.fundamental_weights()[alpha];
    let t = rs.pair(mu, a) / rs.pair(a, &sum);
    let cap = r::qf(99, 100) * rs.pair(mu, w) / rs.pair(w, &sum);
    Ok(if t < cap { t } else { cap })
}

/// `λ_t = μ − t(α + ια)`.
pub fn lambda_t(rs: &RootSystem, mu: &[Q], alpha: usize, t: &Q) -> Result<QVec> {
    let a = simple(rs, alpha)?;
    let sum = r::add(a, &rs.simple_roots()[rs.iota_perm()[alpha]]);
    Ok(r::sub(mu, &r::scale(t, &sum)))
}

/// For `μ ∈ a*,Her₊` with `⟨μ,α⟩ > 0`: `λ_t` is dominant and the maximisers
/// of `μ/λ_t` on `a₊` form exactly `R≥0 ω_α + R≥0 ιω_α`.
pub fn check_setmaximum(rs: &RootSystem, mu: &[Q], alpha: usize) -> Result<bool> {
    require_her(rs, mu)?;
    let a = simple(rs, alpha)?;
    if !rs.pair(mu, a).is_positive() {
        return Err(Error::Precondition("needs ⟨μ, α⟩ > 0".into()));
    }
    let t = replay_t(rs, mu, alpha)?;
    let lt = lambda_t(rs, mu, alpha, &t)?;
    if !rs.is_dominant(&lt) {
        return Ok(false);
    }
    let face = argmax_face(rs, mu, &lt)?;
    let mut expect = vec![alpha, rs.iota_perm()[alpha]];
    expect.sort_unstable();
    expect.dedup();
    Ok(face.rays == expect)
}

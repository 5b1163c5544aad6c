//! Polyhedral cones in `a` and `a*`.
//!
//! A covector `h` acts on a vector `v` through the inner product,
//! `h(v) = <h, v>`. A [`PolyCone`] carries both a generator list and a
//! halfspace list; whichever one the caller omits is recovered exactly by
//! double description.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lie::RootSystem;
use crate::linalg::{nullspace_of, rank_of, Gram, QMatrix};
use crate::lp::{Lp, LpOutcome, Rel};
use crate::rational::{self as r, from_ratstr, primitive, to_ratstr, QVec, RatStr, Q};

#[derive(Clone, Debug)]
pub struct PolyCone {
    rank: usize,
    gram: Gram,
    generators: Vec<QVec>,
    generators_known: bool,
    halfspaces: Vec<QVec>,
    /// Per halfspace: membership requires strict positivity.
    strict: Vec<bool>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ConeSpec {
    #[serde(default)]
    pub generators: Vec<Vec<RatStr>>,
    #[serde(default)]
    pub halfspaces: Vec<Vec<RatStr>>,
    #[serde(default)]
    pub open: bool,
}

impl PolyCone {
    pub fn from_generators(gram: &Gram, generators: Vec<QVec>) -> Result<Self> {
        Self::new(gram, Some(generators), None, false)
    }

    pub fn from_halfspaces(gram: &Gram, halfspaces: Vec<QVec>) -> Result<Self> {
        Self::new(gram, None, Some(halfspaces), false)
    }

    /// Builds a cone from one or both representations. When both are
    /// given they must describe the same set.
    pub fn new(gram: &Gram, generators: Option<Vec<QVec>>, halfspaces: Option<Vec<QVec>>, open: bool) -> Result<Self> {
        let n = gram.rank();
        if generators.is_none() && halfspaces.is_none() {
            return Err(Error::Input("a cone needs generators or halfspaces".into()));
        }
        for v in generators.iter().flatten().chain(halfspaces.iter().flatten()) {
            check_dim(n, v.len())?;
        }
        if generators.iter().flatten().any(|g| r::is_zero_vec(g)) {
            return Err(Error::Input("cone generators must be nonzero".into()));
        }
        let gens = generators.map(|g| dedupe(g.iter().map(|v| primitive(v)).collect()));
        let hs = halfspaces.map(|h| dedupe(h.iter().filter(|v| !r::is_zero_vec(v)).map(|v| primitive(v)).collect()));

        let (generators, halfspaces) = match (gens, hs) {
            (Some(g), Some(h)) => {
                for gv in &g {
                    if h.iter().any(|hv| gram.pair(hv, gv).is_negative()) {
                        return Err(Error::Input(format!(
                            "generator {} violates a halfspace",
                            crate::lie::fmt_vec(gv)
                        )));
                    }
                }
                let rays = generators_of(gram, &h);
                for ray in &rays {
                    if !in_cone_exact(&g, ray) {
                        return Err(Error::Input(format!(
                            "halfspace cone has ray {} outside the generated cone",
                            crate::lie::fmt_vec(ray)
                        )));
                    }
                }
                (g, h)
            }
            (Some(g), None) => {
                let h = generators_of_dual(gram, &g);
                (g, h)
            }
            (None, Some(h)) => {
                let g = generators_of(gram, &h);
                (g, h)
            }
            (None, None) => unreachable!(),
        };
        let strict = vec![open; halfspaces.len()];
        Ok(PolyCone { rank: n, gram: gram.clone(), generators, generators_known: true, halfspaces, strict })
    }

    pub fn from_spec(gram: &Gram, spec: &ConeSpec) -> Result<Self> {
        let gens: Vec<QVec> = spec.generators.iter().cloned().map(from_ratstr).collect();
        let hs: Vec<QVec> = spec.halfspaces.iter().cloned().map(from_ratstr).collect();
        let g = (!gens.is_empty()).then_some(gens);
        let h = (!hs.is_empty()).then_some(hs);
        if g.is_none() && h.is_none() {
            return Err(Error::Input("cone needs generators or halfspaces".into()));
        }
        Self::new(gram, g, h, spec.open)
    }

    pub fn to_spec(&self) -> ConeSpec {
        ConeSpec {
            generators: if self.generators_known {
                self.generators.iter().map(|v| to_ratstr(v)).collect()
            } else {
                Vec::new()
            },
            halfspaces: self.halfspaces.iter().map(|v| to_ratstr(v)).collect(),
            open: self.is_open(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &Gram {
        &self.gram
    }

    /// Generators, including `±` pairs for any lineality space.
    pub fn generators(&self) -> Result<&[QVec]> {
        if self.generators_known {
            Ok(&self.generators)
        } else {
            Err(Error::Precondition("cone has no generator representation".into()))
        }
    }

    pub fn halfspaces(&self) -> &[QVec] {
        &self.halfspaces
    }

    pub fn is_open(&self) -> bool {
        self.strict.iter().any(|&s| s)
    }

    pub fn strict_mask(&self) -> &[bool] {
        &self.strict
    }

    /// `{0}` or empty generator set.
    pub fn is_trivial(&self) -> bool {
        self.generators_known && self.generators.is_empty()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.halfspaces.iter().zip(&self.strict).all(|(h, &s)| {
            let x = self.gram.pair(h, v);
            if s {
                x.is_positive()
            } else {
                !x.is_negative()
            }
        })
    }

    pub fn contains_closed(&self, v: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| !self.gram.pair(h, v).is_negative())
    }

    pub fn contains_f(&self, v: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| {
            let hf = r::vec_to_f64(h);
            let scale = self.gram.norm_f(&hf).max(1e-300);
            self.gram.pair_f(&hf, v) / scale >= -tol
        })
    }

    /// Intersection with additional halfspaces; `strict` marks each new row.
    pub fn intersect(&self, extra: &[QVec], strict: bool) -> Result<Self> {
        let mut hs = self.halfspaces.clone();
        let mut mask = self.strict.clone();
        for h in extra {
            check_dim(self.rank, h.len())?;
            if r::is_zero_vec(h) {
                continue;
            }
            hs.push(primitive(h));
            mask.push(strict);
        }
        let generators = generators_of(&self.gram, &hs);
        Ok(PolyCone {
            rank: self.rank,
            gram: self.gram.clone(),
            generators,
            generators_known: true,
            halfspaces: hs,
            strict: mask,
        })
    }

    pub fn with_open(mut self, open: bool) -> Self {
        self.strict = vec![open; self.halfspaces.len()];
        self
    }

    /// Dual cone `{μ : μ(g) ≥ 0 ∀ g}`. Generators are recovered only up to
    /// `rank_cap`; above it the dual is returned in halfspace form together
    /// with the refusal.
    pub fn dual(&self, rank_cap: usize) -> (PolyCone, Option<Error>) {
        let gens =
            if self.generators_known { self.generators.clone() } else { generators_of(&self.gram, &self.halfspaces) };
        let halfspaces = dedupe(gens);
        let strict = vec![false; halfspaces.len()];
        if self.rank > rank_cap {
            let cone = PolyCone {
                rank: self.rank,
                gram: self.gram.clone(),
                generators: Vec::new(),
                generators_known: false,
                halfspaces,
                strict,
            };
            return (cone, Some(Error::RankCapExceeded { rank: self.rank, cap: rank_cap }));
        }
        let generators = generators_of(&self.gram, &halfspaces);
        let cone = PolyCone {
            rank: self.rank,
            gram: self.gram.clone(),
            generators,
            generators_known: true,
            halfspaces,
            strict,
        };
        (cone, None)
    }

    /// True when `self ⊆ other`, tested on generators.
    pub fn is_subcone_of(&self, other: &PolyCone) -> Result<bool> {
        Ok(self.generators()?.iter().all(|g| other.contains_closed(g)))
    }

    /// Generator-wise ι-stability: ι maps the ray set onto itself.
    pub fn is_iota_stable(&self, rs: &RootSystem) -> Result<bool> {
        let gens = self.generators()?;
        Ok(gens.iter().all(|g| self.contains_closed(&rs.iota(g)))
            && self.halfspaces.iter().all(|h| {
                let img = rs.iota(h);
                gens.iter().all(|g| !self.gram.pair(&img, g).is_negative())
            }))
    }
}

fn dedupe(mut v: Vec<QVec>) -> Vec<QVec> {
    v.sort_by(|a, b| b.cmp(a));
    v.dedup();
    v
}

/// Generators of `{v : <h, v> ≥ 0 ∀ h}`.
pub fn generators_of(gram: &Gram, halfspaces: &[QVec]) -> Vec<QVec> {
    let rows: Vec<QVec> = halfspaces.iter().map(|h| gram.lower(h)).collect();
    let (rays, lineality) = extreme_rays(&rows, gram.rank());
    let mut out = rays;
    for l in lineality {
        out.push(primitive(&l));
        out.push(primitive(&r::neg(&l)));
    }
    dedupe(out)
}

/// Generators of the dual of `cone(generators)`.
pub fn generators_of_dual(gram: &Gram, generators: &[QVec]) -> Vec<QVec> {
    // {μ : <μ, g> ≥ 0} as a halfspace cone has normals g.
    generators_of(gram, generators)
}

/// Motzkin double description for `{x : a_i · x ≥ 0}` (Euclidean dot).
/// Returns the primitive extreme rays of the pointed part and a basis of the
/// lineality space.
pub fn extreme_rays(rows: &[QVec], n: usize) -> (Vec<QVec>, Vec<QVec>) {
    let rows: Vec<QVec> = rows.iter().filter(|a| !r::is_zero_vec(a)).cloned().collect();
    if rows.is_empty() {
        return (Vec::new(), (0..n).map(|i| r::unit(n, i)).collect());
    }
    let lineality = nullspace_of(&rows, n);
    // Parametrise the row space: x = Mᵀ y with M a basis of independent rows.
    let mut basis: Vec<QVec> = Vec::new();
    for a in &rows {
        let mut trial = basis.clone();
        trial.push(a.clone());
        if rank_of(&trial) == trial.len() {
            basis = trial;
        }
    }
    let d = basis.len();
    let reduced: Vec<QVec> = rows.iter().map(|a| basis.iter().map(|m| r::dot(a, m)).collect()).collect();
    let rays_y = motzkin(&reduced, d);
    let mut rays: Vec<QVec> = rays_y
        .iter()
        .map(|y| {
            let mut x = r::zeros(n);
            for (yk, m) in y.iter().zip(&basis) {
                x = r::add(&x, &r::scale(yk, m));
            }
            primitive(&x)
        })
        .collect();
    rays = dedupe(rays);
    (rays, lineality)
}

/// Pointed case: `reduced` has full column rank `d`.
fn motzkin(rows: &[QVec], d: usize) -> Vec<QVec> {
    // Initial simplex cone from d independent rows.
    let mut init: Vec<usize> = Vec::new();
    for (i, a) in rows.iter().enumerate() {
        let mut trial: Vec<QVec> = init.iter().map(|&k| rows[k].clone()).collect();
        trial.push(a.clone());
        if rank_of(&trial) == trial.len() {
            init.push(i);
            if init.len() == d {
                break;
            }
        }
    }
    let s = QMatrix::from_rows(&init.iter().map(|&k| rows[k].clone()).collect::<Vec<_>>());
    let inv = s.inverse().expect("independent rows");
    let mut rays: Vec<QVec> = (0..d).map(|j| primitive(&inv.col(j))).collect();
    let mut processed: Vec<usize> = init.clone();

    for (i, a) in rows.iter().enumerate() {
        if init.contains(&i) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|x| r::dot(a, x)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<QVec> =
            (0..rays.len()).filter(|&k| !vals[k].is_negative()).map(|k| rays[k].clone()).collect();
        let tight =
            |x: &QVec| -> Vec<usize> { processed.iter().copied().filter(|&k| r::dot(&rows[k], x).is_zero()).collect() };
        let tight_sets: Vec<Vec<usize>> = rays.iter().map(tight).collect();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<usize> = tight_sets[p].iter().copied().filter(|k| tight_sets[q].contains(k)).collect();
                if d >= 2 {
                    let common_rows: Vec<QVec> = common.iter().map(|&k| rows[k].clone()).collect();
                    if rank_of(&common_rows) != d - 2 {
                        continue;
                    }
                    // Combinatorial check: no third ray shares the common tight set.
                    let blocked =
                        (0..rays.len()).any(|k| k != p && k != q && common.iter().all(|c| tight_sets[k].contains(c)));
                    if blocked {
                        continue;
                    }
                } else {
                    continue;
                }
                let new = r::sub(&r::scale(&vals[p], &rays[q]), &r::scale(&vals[q], &rays[p]));
                if !r::is_zero_vec(&new) {
                    next.push(primitive(&new));
                }
            }
        }
        processed.push(i);
        rays = dedupe(next);
    }
    rays
}

/// Exact LP test `v ∈ cone(gens)`.
pub fn in_cone_exact(gens: &[QVec], v: &[Q]) -> bool {
    if r::is_zero_vec(v) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let n = v.len();
    let mut lp: Lp<Q> = Lp::new(gens.len());
    for i in 0..n {
        lp.row(gens.iter().map(|g| g[i].clone()).collect(), Rel::Eq, v[i].clone());
    }
    matches!(lp.solve(10_000), LpOutcome::Optimal { .. })
}

/// The closed Weyl chamber `a₊`.
pub fn dominant_cone(rs: &RootSystem) -> PolyCone {
    let gram = rs.gram().clone();
    let halfspaces = dedupe(rs.simple_roots().iter().map(|a| primitive(a)).collect());
    let generators = dedupe(rs.extremal_rays().to_vec());
    let strict = vec![false; halfspaces.len()];
    PolyCone { rank: rs.rank(), gram, generators, generators_known: true, halfspaces, strict }
}

/// The spec-level dual: halfspace form always, generators up to `rank_cap`.
pub fn dual_cone(c: &PolyCone, rank_cap: usize) -> (PolyCone, Option<Error>) {
    c.dual(rank_cap)
}

fn check_in_chamber(rs: &RootSystem, c: &PolyCone) -> Result<()> {
    check_dim(rs.rank(), c.rank())?;
    if c.generators()?.iter().all(|g| rs.is_dominant(g)) {
        Ok(())
    } else {
        Err(Error::Precondition("cone is not contained in the Weyl chamber".into()))
    }
}

/// `C ∩ ker α = {0}` for the simple root with index `alpha`.
pub fn avoids_facet(rs: &RootSystem, c: &PolyCone, alpha: usize) -> Result<bool> {
    check_in_chamber(rs, c)?;
    let a = simple(rs, alpha)?;
    Ok(c.generators()?.iter().all(|g| rs.pair(a, g).is_positive()))
}

/// `μ` is strictly positive on every generator (and nonzero).
pub fn interior_dual_member(c: &PolyCone, mu: &[Q]) -> Result<bool> {
    check_dim(c.rank(), mu.len())?;
    if r::is_zero_vec(mu) {
        return Ok(false);
    }
    Ok(c.generators()?.iter().all(|g| c.gram().pair(mu, g).is_positive()))
}

/// `λ ∈ conv(W μ)` for dominant `μ`, by the dominance order:
/// `μ − λ⁺` is a nonnegative combination of simple roots.
pub fn conv_hull_member(rs: &RootSystem, lambda: &[Q], mu: &[Q]) -> Result<bool> {
    check_dim(rs.rank(), lambda.len())?;
    check_dim(rs.rank(), mu.len())?;
    if !rs.is_dominant(mu) {
        return Err(Error::Precondition("μ must be dominant".into()));
    }
    let plus = rs.dominant(lambda);
    let coeffs = rs.simple_coords(&r::sub(mu, &plus));
    Ok(coeffs.iter().all(|c| !c.is_negative()))
}

/// `x ∈ conv(points)` by an exact feasibility LP on the weights.
pub fn in_convex_hull(points: &[QVec], x: &[Q]) -> bool {
    if points.is_empty() {
        return false;
    }
    let mut lp = Lp::<Q>::new(points.len());
    lp.row(vec![r::q(1); points.len()], Rel::Eq, r::q(1));
    for (k, xk) in x.iter().enumerate() {
        lp.row(points.iter().map(|p| p[k].clone()).collect(), Rel::Eq, xk.clone());
    }
    matches!(lp.solve(100_000), LpOutcome::Optimal { .. })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityVerdict {
    pub coefficients: QVec,
    pub all_nonnegative: bool,
}

/// Expands `u = Σ c_i v_i` for independent `v_i` with pairwise
/// `<v_i, v_j> ≤ 0` and `<u, v_i> ≥ 0`; the lemma says every `c_i ≥ 0`.
pub fn lemma_positivity(gram: &Gram, vs: &[QVec], u: &[Q]) -> Result<PositivityVerdict> {
    let n = gram.rank();
    check_dim(n, u.len())?;
    for v in vs {
        check_dim(n, v.len())?;
    }
    if rank_of(vs) != vs.len() {
        return Err(Error::Precondition("vectors are linearly dependent".into()));
    }
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if gram.pair(&vs[i], &vs[j]).is_positive() {
                return Err(Error::Precondition(format!("<v_{i}, v_{j}> > 0")));
            }
        }
        if gram.pair(u, &vs[i]).is_negative() {
            return Err(Error::Precondition(format!("<u, v_{i}> < 0")));
        }
    }
    // Least-squares in the Gram sense: G c = (<u, v_i>)_i, then check u = Σ c v.
    let g = QMatrix::from_rows(&vs.iter().map(|a| vs.iter().map(|b| gram.pair(a, b)).collect()).collect::<Vec<QVec>>());
    let rhs: QVec = vs.iter().map(|v| gram.pair(u, v)).collect();
    let coefficients = if vs.is_empty() { Vec::new() } else { g.solve(&rhs)? };
    let mut back = r::zeros(n);
    for (c, v) in coefficients.iter().zip(vs) {
        back = r::add(&back, &r::scale(c, v));
    }
    if back != u {
        return Err(Error::Precondition("u is not in the span of the vectors".into()));
    }
    let all_nonnegative = coefficients.iter().all(|c| !c.is_negative());
    Ok(PositivityVerdict { coefficients, all_nonnegative })
}

pub(crate) fn simple(rs: &RootSystem, alpha: usize) -> Result<&QVec> {
    rs.simple_roots()
        .get(alpha)
        .ok_or_else(|| Error::Input(format!("simple root index {} out of range 1..={}", alpha + 1, rs.rank())))
}

/// Angle-free ordering of rays for deterministic output.
pub fn cmp_rays(a: &[Q], b: &[Q]) -> Ordering {
    b.cmp(a)
}

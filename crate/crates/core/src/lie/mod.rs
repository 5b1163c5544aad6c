//! Restricted root systems with multiplicities.
//!
//! Vectors in `a` and covectors in `a*` share coordinates in `Q^rank` and are
//! identified through the inner product. Construction is exact; every
//! derived datum (ρ, ω, ι, Θ) is computed once and cached.

mod presets;
mod weyl;

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{rank_of, Gram, QMatrix};
use crate::rational::{self as r, from_ratstr, primitive, q, to_ratstr, QVec, RatStr, Q};

pub use presets::{lookup as lookup_preset, MultRule, PresetData};
pub use weyl::{predicted_order, WeylElement, WeylGroup, DEFAULT_WEYL_CAP};

/// A positive root, or a doubled root `2α` of a non-reduced system.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveRoot {
    pub vector: QVec,
    /// Coefficients in the simple-root basis.
    pub coeffs: Vec<i64>,
    pub mult: u32,
    pub doubled: bool,
}

impl PositiveRoot {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub root: Vec<RatStr>,
    pub m: u32,
}

/// JSON description of a root system.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RootSystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_roots: Option<Vec<Vec<RatStr>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub multiplicities: Vec<MultiplicityEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_product: Option<Vec<Vec<RatStr>>>,
}

impl RootSystemSpec {
    pub fn preset(name: &str) -> Self {
        RootSystemSpec { preset: Some(name.to_string()), ..Default::default() }
    }
}

#[derive(Debug)]
struct Derived {
    rho: QVec,
    fundamental_weights: Vec<QVec>,
    extremal_rays: Vec<QVec>,
    iota_perm: Vec<usize>,
    iota: QMatrix,
    theta_roots: Vec<QVec>,
    theta: QVec,
}

/// An immutable restricted root system. Cheap to clone.
#[derive(Clone, Debug)]
pub struct RootSystem {
    label: String,
    rank: usize,
    simple: Vec<QVec>,
    pos: Vec<PositiveRoot>,
    gram: Gram,
    /// `cartan[j][i] = 2<α_j, α_i> / <α_i, α_i>`.
    cartan: Vec<Vec<i64>>,
    derived: Arc<Derived>,
    weyl: Arc<OnceLock<Arc<WeylGroup>>>,
}

const MAX_ROOTS: usize = 10_000;

impl RootSystem {
    pub fn preset(name: &str) -> Result<Self> {
        let data = presets::lookup(name)?;
        let rank = data.simple_roots.len();
        let gram = match data.gram {
            Some(m) => Gram::new(m)?,
            None => Gram::identity(rank),
        };
        let rule = data.mult.clone();
        Self::build(data.label, data.simple_roots, gram, |root, len2, max_len2| match &rule {
            MultRule::Uniform(m) => matches!(root, RootKind::Reduced).then_some(*m),
            MultRule::ByLength { long, short, doubled } => match root {
                RootKind::Reduced => Some(if len2 == max_len2 { *long } else { *short }),
                RootKind::Doubled { base_is_short: true } => *doubled,
                RootKind::Doubled { .. } => None,
            },
        })
    }

    /// Builds from simple roots, an optional inner product, and explicit
    /// multiplicities. Unlisted reduced roots get `m = 1`; doubled roots
    /// exist only when listed.
    pub fn custom(
        simple_roots: Vec<QVec>,
        inner_product: Option<QMatrix>,
        multiplicities: &[(QVec, u32)],
    ) -> Result<Self> {
        let rank = simple_roots.len();
        if rank == 0 {
            return Err(Error::Input("at least one simple root is required".into()));
        }
        for s in &simple_roots {
            check_dim(rank, s.len())?;
        }
        let gram = match inner_product {
            Some(m) => {
                check_dim(rank, m.rows())?;
                check_dim(rank, m.cols())?;
                Gram::new(m)?
            }
            None => Gram::identity(rank),
        };
        let mut table: HashMap<QVec, u32> = HashMap::new();
        for (root, m) in multiplicities {
            check_dim(rank, root.len())?;
            if *m == 0 {
                return Err(Error::Input("multiplicities must be positive".into()));
            }
            let key = if root.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                r::neg(root)
            } else {
                root.clone()
            };
            if table.insert(key.clone(), *m).is_some_and(|old| old != *m) {
                return Err(Error::MultiplicityNotInvariant(format!("conflicting entries for {}", fmt_vec(&key))));
            }
        }
        let lookup = table.clone();
        let mut seen = HashSet::new();
        let sys = Self::build_with_table("custom".into(), simple_roots, gram, &lookup, &mut seen)?;
        for key in table.keys() {
            if !seen.contains(key) {
                return Err(Error::Input(format!("{} is not a root", fmt_vec(key))));
            }
        }
        Ok(sys)
    }

    fn build_with_table(
        label: String,
        simple: Vec<QVec>,
        gram: Gram,
        table: &HashMap<QVec, u32>,
        seen: &mut HashSet<QVec>,
    ) -> Result<Self> {
        let mut touched = Vec::new();
        let out = Self::build_vec(label, simple, gram, |v, kind, _, _| {
            let hit = table.get(v).copied();
            if hit.is_some() {
                touched.push(v.clone());
            }
            match kind {
                RootKind::Reduced => Some(hit.unwrap_or(1)),
                RootKind::Doubled { .. } => hit,
            }
        });
        seen.extend(touched);
        out
    }

    fn build(
        label: String,
        simple: Vec<QVec>,
        gram: Gram,
        mult: impl FnMut(RootKind, &Q, &Q) -> Option<u32>,
    ) -> Result<Self> {
        let mut mult = mult;
        Self::build_vec(label, simple, gram, |_, kind, l, m| mult(kind, l, m))
    }

    fn build_vec(
        label: String,
        simple: Vec<QVec>,
        gram: Gram,
        mut mult: impl FnMut(&QVec, RootKind, &Q, &Q) -> Option<u32>,
    ) -> Result<Self> {
        let rank = simple.len();
        if rank_of(&simple) != rank {
            return Err(Error::DependentSimpleRoots);
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        for j in 0..rank {
            for i in 0..rank {
                let c = q(2) * gram.pair(&simple[j], &simple[i]) / gram.norm2(&simple[i]);
                if !c.is_integer() || (i != j && c.is_positive()) {
                    return Err(Error::BadInnerProduct(format!(
                        "simple roots {j} and {i} do not form a root basis (Cartan entry {c})"
                    )));
                }
                cartan[j][i] = i64::try_from(c.to_integer())
                    .map_err(|_| Error::BadInnerProduct("Cartan entry out of range".into()))?;
            }
        }

        let coeffs = closure(&cartan)?;
        let to_vec = |c: &[i64]| -> QVec {
            let mut v = r::zeros(rank);
            for (k, &ck) in c.iter().enumerate() {
                if ck != 0 {
                    v = r::add(&v, &r::scale(&q(ck), &simple[k]));
                }
            }
            v
        };
        let reduced: Vec<(Vec<i64>, QVec, Q)> = coeffs
            .into_iter()
            .map(|c| {
                let v = to_vec(&c);
                let l = gram.norm2(&v);
                (c, v, l)
            })
            .collect();
        let max_len2 = reduced.iter().map(|x| x.2.clone()).max().unwrap_or_else(Q::zero);
        let min_len2 = reduced.iter().map(|x| x.2.clone()).min().unwrap_or_else(Q::zero);

        let mut pos = Vec::with_capacity(reduced.len());
        for (c, v, l) in &reduced {
            let m = mult(v, RootKind::Reduced, l, &max_len2)
                .ok_or_else(|| Error::Input(format!("missing multiplicity for {}", fmt_vec(v))))?;
            if m == 0 {
                return Err(Error::Input("multiplicities must be positive".into()));
            }
            pos.push(PositiveRoot { vector: v.clone(), coeffs: c.clone(), mult: m, doubled: false });
        }
        for (c, v, l) in &reduced {
            let dv = r::scale(&q(2), v);
            let kind = RootKind::Doubled { base_is_short: *l == min_len2 };
            if let Some(m) = mult(&dv, kind, l, &max_len2) {
                if m > 0 {
                    let dc = c.iter().map(|x| 2 * x).collect();
                    pos.push(PositiveRoot { vector: dv, coeffs: dc, mult: m, doubled: true });
                }
            }
        }

        check_invariance(&pos, &cartan)?;

        let base = RootSystem {
            label,
            rank,
            simple,
            pos,
            gram,
            cartan,
            derived: Arc::new(Derived {
                rho: Vec::new(),
                fundamental_weights: Vec::new(),
                extremal_rays: Vec::new(),
                iota_perm: Vec::new(),
                iota: QMatrix::zeros(0, 0),
                theta_roots: Vec::new(),
                theta: Vec::new(),
            }),
            weyl: Arc::new(OnceLock::new()),
        };
        let derived = base.compute_derived()?;
        Ok(RootSystem { derived: Arc::new(derived), ..base })
    }

    pub fn from_spec(spec: &RootSystemSpec) -> Result<Self> {
        match (&spec.preset, &spec.simple_roots) {
            (Some(name), None) => {
                if !spec.multiplicities.is_empty() || spec.inner_product.is_some() {
                    return Err(Error::Input("a preset cannot be combined with custom data".into()));
                }
                Self::preset(name)
            }
            (None, Some(roots)) => {
                let simple: Vec<QVec> = roots.iter().cloned().map(from_ratstr).collect();
                let ip = spec.inner_product.as_ref().map(|rows| {
                    let rows: Vec<QVec> = rows.iter().cloned().map(from_ratstr).collect();
                    QMatrix::from_rows(&rows)
                });
                if let Some(m) = &ip {
                    if rows_ragged(m, spec.inner_product.as_ref().unwrap()) {
                        return Err(Error::Input("inner_product must be square".into()));
                    }
                }
                let mults: Vec<(QVec, u32)> =
                    spec.multiplicities.iter().map(|e| (from_ratstr(e.root.clone()), e.m)).collect();
                Self::custom(simple, ip, &mults)
            }
            _ => Err(Error::Input("root system needs exactly one of \"preset\" or \"simple_roots\"".into())),
        }
    }

    /// Round-trippable description of this system.
    pub fn to_spec(&self) -> RootSystemSpec {
        if self.label != "custom" {
            return RootSystemSpec::preset(&self.label);
        }
        RootSystemSpec {
            preset: None,
            simple_roots: Some(self.simple.iter().map(|v| to_ratstr(v)).collect()),
            multiplicities: self
                .pos
                .iter()
                .map(|p| MultiplicityEntry { root: to_ratstr(&p.vector), m: p.mult })
                .collect(),
            inner_product: (!self.gram.is_identity())
                .then(|| (0..self.rank).map(|i| to_ratstr(&self.gram.matrix().row(i))).collect()),
        }
    }

    fn compute_derived(&self) -> Result<Derived> {
        let n = self.rank;
        let mut rho = r::zeros(n);
        for p in &self.pos {
            rho = r::add(&rho, &r::scale(&q(p.mult as i64), &p.vector));
        }
        let rho = r::scale(&crate::rational::qf(1, 2), &rho);

        // <ω_i, α_j> = δ_ij |α_j|^2 / 2, i.e. B-rows of the simple roots.
        let lowered: Vec<QVec> = self.simple.iter().map(|a| self.gram.lower(a)).collect();
        let a = QMatrix::from_rows(&lowered);
        let mut fundamental_weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut rhs = r::zeros(n);
            rhs[i] = self.gram.norm2(&self.simple[i]) / q(2);
            fundamental_weights.push(a.solve(&rhs)?);
        }
        let extremal_rays = fundamental_weights.iter().map(|w| primitive(w)).collect();

        // w0 maps the antidominant -ρ_reg to the dominant ρ_reg.
        let reg: QVec = fundamental_weights.iter().fold(r::zeros(n), |acc, w| r::add(&acc, w));
        let (_, w0) = self.dominant_representative(&r::neg(&reg));
        let mut iota = w0;
        for i in 0..n {
            for j in 0..n {
                iota[(i, j)] = -iota[(i, j)].clone();
            }
        }
        let mut iota_perm = Vec::with_capacity(n);
        for s in &self.simple {
            let img = iota.mul_vec(s);
            let k = self
                .simple
                .iter()
                .position(|t| *t == img)
                .ok_or_else(|| Error::Solver("opposition involution does not permute Π".into()))?;
            iota_perm.push(k);
        }

        let theta_roots = self.cascade();
        let theta =
            r::scale(&crate::rational::qf(1, 2), &theta_roots.iter().fold(r::zeros(n), |acc, v| r::add(&acc, v)));

        Ok(Derived { rho, fundamental_weights, extremal_rays, iota_perm, iota, theta_roots, theta })
    }

    /// Kostant cascade: highest root of each component, then recurse on the
    /// roots strongly orthogonal to everything selected so far.
    fn cascade(&self) -> Vec<QVec> {
        let all: HashSet<Vec<i64>> = self.pos.iter().map(|p| p.coeffs.clone()).collect();
        let is_root = |c: &[i64]| -> bool {
            let negc: Vec<i64> = c.iter().map(|x| -x).collect();
            all.contains(c) || all.contains(&negc)
        };
        let strongly_orth = |a: &PositiveRoot, b: &PositiveRoot| -> bool {
            let s: Vec<i64> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
            let d: Vec<i64> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
            let zero = d.iter().all(|&x| x == 0);
            !zero && !is_root(&s) && !is_root(&d) && self.gram.pair(&a.vector, &b.vector).is_zero()
        };
        let mut remaining: Vec<&PositiveRoot> = self.pos.iter().collect();
        let mut selected: Vec<&PositiveRoot> = Vec::new();
        while !remaining.is_empty() {
            let comps = components(&remaining, |a, b| !self.gram.pair(&a.vector, &b.vector).is_zero());
            let mut fresh = Vec::new();
            for comp in comps {
                let top = comp
                    .iter()
                    .copied()
                    .max_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.coeffs.cmp(&a.coeffs)))
                    .expect("nonempty component");
                fresh.push(top);
            }
            selected.extend(fresh.iter().copied());
            remaining.retain(|p| fresh.iter().all(|s| strongly_orth(p, s)));
        }
        let mut out: Vec<QVec> = selected.iter().map(|p| p.vector.clone()).collect();
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn simple_roots(&self) -> &[QVec] {
        &self.simple
    }

    pub fn positive_roots(&self) -> &[PositiveRoot] {
        &self.pos
    }

    pub fn gram(&self) -> &Gram {
        &self.gram
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn is_reduced(&self) -> bool {
        self.pos.iter().all(|p| !p.doubled)
    }

    pub fn pair(&self, x: &[Q], y: &[Q]) -> Q {
        self.gram.pair(x, y)
    }

    pub fn rho(&self) -> &QVec {
        &self.derived.rho
    }

    /// `ω_α` for each simple root, in the order of `simple_roots`.
    pub fn fundamental_weights(&self) -> &[QVec] {
        &self.derived.fundamental_weights
    }

    /// Primitive integer vector on each extremal ray of `a₊` (`R≥0 ω_α`).
    pub fn extremal_rays(&self) -> &[QVec] {
        &self.derived.extremal_rays
    }

    /// `ι(α_i) = α_{perm[i]}`.
    pub fn iota_perm(&self) -> &[usize] {
        &self.derived.iota_perm
    }

    pub fn iota_matrix(&self) -> &QMatrix {
        &self.derived.iota
    }

    pub fn iota(&self, v: &[Q]) -> QVec {
        self.derived.iota.mul_vec(v)
    }

    pub fn iota_is_trivial(&self) -> bool {
        self.derived.iota_perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn theta_roots(&self) -> &[QVec] {
        &self.derived.theta_roots
    }

    pub fn theta(&self) -> &QVec {
        &self.derived.theta
    }

    /// `ω_α + ι ω_α` for simple root index `i`.
    pub fn her_weight(&self, i: usize) -> QVec {
        let w = &self.derived.fundamental_weights;
        r::add(&w[i], &w[self.derived.iota_perm[i]])
    }

    /// One representative per ι-orbit of Π (the smaller index).
    pub fn iota_orbit_reps(&self) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.derived.iota_perm[i] >= i).collect()
    }

    /// Simple-root coefficients of `v`.
    pub fn simple_coords(&self, v: &[Q]) -> QVec {
        let basis = QMatrix::from_cols(&self.simple);
        basis.solve(v).expect("simple roots form a basis")
    }

    pub fn is_dominant(&self, v: &[Q]) -> bool {
        self.simple.iter().all(|a| !self.gram.pair(v, a).is_negative())
    }

    pub fn is_iota_invariant(&self, v: &[Q]) -> bool {
        self.iota(v) == v
    }

    pub fn reflect(&self, i: usize, v: &[Q]) -> QVec {
        let a = &self.simple[i];
        let c = q(2) * self.gram.pair(v, a) / self.gram.norm2(a);
        r::sub(v, &r::scale(&c, a))
    }

    /// Matrix of the simple reflection `s_i` in ambient coordinates.
    pub fn reflection_matrix(&self, i: usize) -> QMatrix {
        let n = self.rank;
        let a = &self.simple[i];
        let ba = self.gram.lower(a);
        let f = q(2) / self.gram.norm2(a);
        let mut m = QMatrix::identity(n);
        for row in 0..n {
            for col in 0..n {
                m[(row, col)] = &m[(row, col)] - &f * &a[row] * &ba[col];
            }
        }
        m
    }

    /// Returns `(λ⁺, w)` with `w λ = λ⁺` dominant.
    pub fn dominant_representative(&self, lambda: &[Q]) -> (QVec, QMatrix) {
        let mut x = lambda.to_vec();
        let mut w = QMatrix::identity(self.rank);
        loop {
            let neg = (0..self.rank).find(|&i| self.gram.pair(&x, &self.simple[i]).is_negative());
            match neg {
                Some(i) => {
                    x = self.reflect(i, &x);
                    w = self.reflection_matrix(i).mul(&w);
                }
                None => return (x, w),
            }
        }
    }

    /// Dominant representative only, without tracking `w`.
    pub fn dominant(&self, lambda: &[Q]) -> QVec {
        let mut x = lambda.to_vec();
        while let Some(i) = (0..self.rank).find(|&i| self.gram.pair(&x, &self.simple[i]).is_negative()) {
            x = self.reflect(i, &x);
        }
        x
    }

    /// Index sets of the irreducible components of Π.
    pub fn irreducible_components(&self) -> Vec<Vec<usize>> {
        let idx: Vec<usize> = (0..self.rank).collect();
        let refs: Vec<&usize> = idx.iter().collect();
        components(&refs, |&&a, &&b| self.cartan[a][b] != 0)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().copied().collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible_components().len() == 1
    }

    pub fn weyl_order(&self) -> u128 {
        predicted_order(self)
    }

    /// Full Weyl group, enumerated once and cached. Refuses when the
    /// predicted order exceeds `cap`.
    pub fn weyl_group_with_cap(&self, cap: u128) -> Result<Arc<WeylGroup>> {
        if let Some(g) = self.weyl.get() {
            return Ok(g.clone());
        }
        let order = predicted_order(self);
        if order > cap {
            return Err(Error::WeylCapExceeded { order, cap });
        }
        let g = Arc::new(WeylGroup::enumerate(self));
        Ok(self.weyl.get_or_init(|| g).clone())
    }

    pub fn weyl_group(&self) -> Result<Arc<WeylGroup>> {
        self.weyl_group_with_cap(DEFAULT_WEYL_CAP)
    }

    /// `w₀` found by enumeration as the element sending Σ⁺ to −Σ⁺.
    pub fn longest_element_by_enumeration(&self) -> Result<QMatrix> {
        let g = self.weyl_group()?;
        g.elements()
            .iter()
            .find(|w| w.length() == g.max_length())
            .map(|w| w.ambient(self))
            .ok_or_else(|| Error::Solver("empty Weyl group".into()))
    }
}

#[derive(Clone, Copy, Debug)]
enum RootKind {
    Reduced,
    Doubled { base_is_short: bool },
}

fn rows_ragged(m: &QMatrix, raw: &[Vec<RatStr>]) -> bool {
    raw.iter().any(|row| row.len() != m.rows()) || raw.len() != m.cols()
}

pub(crate) fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Positive roots (simple-root coefficients) by root strings:
/// `β + α_i` is a root iff `p − <β, α_i^∨> > 0`, where `p` is the length of
/// the string below `β`.
fn closure(cartan: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            c
        })
        .collect();
    let mut set: HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut k = 0;
    while k < roots.len() {
        let beta = roots[k].clone();
        for i in 0..n {
            let simple = beta.iter().enumerate().all(|(j, &c)| c == if j == i { 1 } else { 0 });
            if simple {
                continue;
            }
            let mut p = 0;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if set.contains(&down) {
                    p += 1;
                } else {
                    break;
                }
            }
            let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
            if p - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if set.insert(up.clone()) {
                    roots.push(up);
                    if roots.len() > MAX_ROOTS {
                        return Err(Error::BadInnerProduct("root system is not finite".into()));
                    }
                }
            }
        }
        k += 1;
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    Ok(roots)
}

/// Each simple reflection must permute `Σ⁺ ∖ {α_i, 2α_i}` preserving `m`.
fn check_invariance(pos: &[PositiveRoot], cartan: &[Vec<i64>]) -> Result<()> {
    let n = cartan.len();
    let table: HashMap<&[i64], u32> = pos.iter().map(|p| (p.coeffs.as_slice(), p.mult)).collect();
    for i in 0..n {
        for p in pos {
            let on_axis = p.coeffs.iter().enumerate().all(|(j, &c)| j == i || c == 0);
            if on_axis {
                continue;
            }
            let pairing: i64 = (0..n).map(|j| p.coeffs[j] * cartan[j][i]).sum();
            let mut img = p.coeffs.clone();
            img[i] -= pairing;
            match table.get(img.as_slice()) {
                Some(&m) if m == p.mult => {}
                Some(&m) => {
                    return Err(Error::MultiplicityNotInvariant(format!(
                        "s_{} maps a root of multiplicity {} to one of multiplicity {m}",
                        i + 1,
                        p.mult
                    )))
                }
                None => {
                    return Err(Error::MultiplicityNotInvariant(format!(
                        "s_{} image of a {} root is missing",
                        i + 1,
                        if p.doubled { "doubled" } else { "reduced" }
                    )))
                }
            }
        }
    }
    Ok(())
}

/// Connected components under `linked`, preserving input order.
fn components<'a, T>(items: &[&'a T], linked: impl Fn(&&'a T, &&'a T) -> bool) -> Vec<Vec<&'a T>> {
    let n = items.len();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<&T>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[start] = id;
        let mut stack = vec![start];
        let mut members = vec![];
        while let Some(u) = stack.pop() {
            members.push(u);
            for v in 0..n {
                if comp[v] == usize::MAX && linked(&items[u], &items[v]) {
                    comp[v] = id;
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members.into_iter().map(|k| items[k]).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, qvec};

    #[test]
    fn so2n_rho_and_theta() {
        for n in 3..=10i64 {
            let rs = RootSystem::preset(&format!("so(2,{n})")).unwrap();
            assert_eq!(rs.rho(), &vec![qf(n, 2), qf(n - 2, 2)]);
            assert_eq!(rs.theta(), &qvec(&[1, 0]));
        }
    }

    #[test]
    fn so25_multiplicities() {
        let rs = RootSystem::preset("so(2,5)").unwrap();
        assert_eq!(rs.simple_roots(), &[qvec(&[1, -1]), qvec(&[0, 1])]);
        for p in rs.positive_roots() {
            let long = rs.gram().norm2(&p.vector) == q(2);
            assert_eq!(p.mult, if long { 1 } else { 3 }, "{:?}", p.vector);
        }
        assert_eq!(rs.positive_roots().len(), 4);
    }

    #[test]
    fn a1_custom() {
        let rs = RootSystem::custom(vec![qvec(&[1])], None, &[(qvec(&[1]), 1)]).unwrap();
        assert_eq!(rs.positive_roots().len(), 1);
        assert_eq!(rs.rho(), &vec![qf(1, 2)]);
        assert_eq!(rs.fundamental_weights(), &[vec![qf(1, 2)]]);
        assert_eq!(rs.theta(), &vec![qf(1, 2)]);
        assert!(rs.iota_is_trivial());
    }

    #[test]
    fn b3_weights() {
        let rs = RootSystem::preset("b3").unwrap();
        assert_eq!(rs.simple_roots(), &[qvec(&[1, -1, 0]), qvec(&[0, 1, -1]), qvec(&[0, 0, 1])]);
        let h = qf(1, 2);
        assert_eq!(rs.fundamental_weights(), &[qvec(&[1, 0, 0]), qvec(&[1, 1, 0]), vec![h.clone(), h.clone(), h]]);
        assert_eq!(rs.theta(), &vec![q(1), q(0), qf(1, 2)]);
        assert_eq!(rs.theta_roots(), &[qvec(&[1, 1, 0]), qvec(&[1, -1, 0]), qvec(&[0, 0, 1])]);
    }

    #[test]
    fn b2_weights_and_theta() {
        let rs = RootSystem::preset("b2").unwrap();
        assert_eq!(rs.fundamental_weights(), &[qvec(&[1, 0]), vec![qf(1, 2), qf(1, 2)]]);
        assert_eq!(rs.theta_roots(), &[qvec(&[1, 1]), qvec(&[1, -1])]);
        assert_eq!(rs.extremal_rays(), &[qvec(&[1, 0]), qvec(&[1, 1])]);
    }

    #[test]
    fn root_counts() {
        for (name, n) in [
            ("a1", 1),
            ("a2", 3),
            ("a3", 6),
            ("b2", 4),
            ("b3", 9),
            ("c3", 9),
            ("d4", 12),
            ("g2", 6),
            ("f4", 24),
            ("e6", 36),
            ("e7", 63),
            ("e8", 120),
        ] {
            let rs = RootSystem::preset(name).unwrap();
            assert_eq!(rs.positive_roots().len(), n, "{name}");
        }
    }

    #[test]
    fn iota_by_type() {
        let a2 = RootSystem::preset("a2").unwrap();
        assert_eq!(a2.iota_perm(), &[1, 0]);
        for name in ["a1", "b2", "b3", "c3", "g2", "f4", "e7", "e8", "d4"] {
            assert!(RootSystem::preset(name).unwrap().iota_is_trivial(), "{name}");
        }
        assert_eq!(RootSystem::preset("d5").unwrap().iota_perm(), &[0, 1, 2, 4, 3]);
        assert_eq!(RootSystem::preset("e6").unwrap().iota_perm(), &[5, 1, 4, 3, 2, 0]);
    }

    #[test]
    fn dominant_rep_examples() {
        let rs = RootSystem::preset("b2").unwrap();
        let (x, w) = rs.dominant_representative(&qvec(&[-1, 0]));
        assert_eq!(x, qvec(&[1, 0]));
        assert_eq!(w.mul_vec(&qvec(&[-1, 0])), x);
        assert_eq!(rs.dominant(&qvec(&[0, 1])), qvec(&[1, 0]));
        let (y, id) = rs.dominant_representative(&qvec(&[2, 1]));
        assert_eq!(y, qvec(&[2, 1]));
        assert_eq!(id, QMatrix::identity(2));
    }

    #[test]
    fn real_forms() {
        let rs = RootSystem::preset("su(1,3)").unwrap();
        assert!(!rs.is_reduced());
        assert_eq!(rs.rho(), &vec![q(3)]);
        let rs = RootSystem::preset("su(2,3)").unwrap();
        // m(e_i ± e_j) = 2, m(e_i) = 2, m(2e_i) = 1.
        assert_eq!(rs.rho(), &vec![q(4), q(2)]);
        let rs = RootSystem::preset("sl(3,C)").unwrap();
        assert_eq!(rs.rho(), &vec![q(2), q(2)]);
        let rs = RootSystem::preset("so(3,3)").unwrap();
        assert_eq!(rs.rank(), 3);
    }

    #[test]
    fn custom_validation() {
        // Dependent roots.
        assert!(matches!(
            RootSystem::custom(vec![qvec(&[1, 0]), qvec(&[2, 0])], None, &[]),
            Err(Error::DependentSimpleRoots)
        ));
        // B2 with m(e1) != m(e2) is not invariant.
        let b2 = vec![qvec(&[1, -1]), qvec(&[0, 1])];
        let err = RootSystem::custom(b2.clone(), None, &[(qvec(&[1, 0]), 2), (qvec(&[0, 1]), 3)]);
        assert!(matches!(err, Err(Error::MultiplicityNotInvariant(_))));
        // Consistent short multiplicity.
        let ok = RootSystem::custom(b2.clone(), None, &[(qvec(&[1, 0]), 3), (qvec(&[0, 1]), 3)]).unwrap();
        assert_eq!(ok.rho(), &vec![qf(5, 2), qf(3, 2)]);
        // Not a root.
        assert!(RootSystem::custom(b2, None, &[(qvec(&[2, 1]), 1)]).is_err());
    }

    #[test]
    fn spec_roundtrip() {
        let spec: RootSystemSpec = serde_json::from_str(r#"{"preset": "so(2,5)"}"#).unwrap();
        let rs = RootSystem::from_spec(&spec).unwrap();
        assert_eq!(rs.label(), "so(2,5)");
        let custom: RootSystemSpec = serde_json::from_str(
            r#"{"simple_roots": [["1","-1"],["0","1"]],
                "multiplicities": [{"root": ["1","0"], "m": 3}, {"root": ["0","1"], "m": 3}]}"#,
        )
        .unwrap();
        let rs = RootSystem::from_spec(&custom).unwrap();
        let again = RootSystem::from_spec(&rs.to_spec()).unwrap();
        assert_eq!(again.rho(), rs.rho());
    }
}

//! Cartan projections of finitely generated matrix groups: word-ball
//! enumeration, empirical limit cones and counting estimates of exponents.
//!
//! Discreteness of the generated group is never checked, and exponent
//! estimates are heuristics from finite data, not certified abscissas.

use std::collections::HashSet;
use std::io::Write;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{fdot, QMatrix};
use crate::lp::{Lp, LpOutcome, Rel};
use crate::par::{self, ExecMode};
use crate::rational::{from_f64, Q};
use crate::sampling::rng;

pub const MAX_DIM: usize = 6;
pub const ESTIMATE_LABEL: &str = "estimate, not a certified abscissa";

fn default_dedupe() -> f64 {
    1e-6
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixGroupSpec {
    /// `sl3r`, or a product of such factors written `sl2r*sl2r`, in which
    /// case generators are block diagonal.
    pub ambient: String,
    #[serde(default)]
    pub generators: Vec<Vec<Vec<f64>>>,
    pub max_word_length: usize,
    #[serde(default = "default_dedupe")]
    pub dedupe_tolerance: f64,
}

/// Block sizes of the ambient product of `SL(n, R)` factors.
pub fn parse_ambient(s: &str) -> Result<Vec<usize>> {
    let blocks: Vec<usize> = s
        .split(['*', '×'])
        .map(|f| {
            let f = f.trim().to_ascii_lowercase();
            f.strip_prefix("sl")
                .and_then(|r| r.strip_suffix('r'))
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 2)
                .ok_or_else(|| Error::Input(format!("unknown ambient factor {f:?}; expected sl<n>r")))
        })
        .collect::<Result<_>>()?;
    let dim: usize = blocks.iter().sum();
    if dim > MAX_DIM {
        return Err(Error::Input(format!("ambient dimension {dim} exceeds {MAX_DIM}")));
    }
    Ok(blocks)
}

/// Generators normalised to determinant one per block, with inverses.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    blocks: Vec<usize>,
    dim: usize,
    /// Generators followed by their inverses.
    exact: Vec<QMatrix>,
    slots: Vec<Slot>,
    /// Per letter and slot, the exterior power of the letter's block.
    powers: Vec<Vec<DMatrix<f64>>>,
    max_word_length: usize,
    tol: f64,
}

/// Exterior power `k` of the block at `off` of size `n`, for
/// `1 ≤ k ≤ n/2`.
#[derive(Clone, Copy, Debug)]
struct Slot {
    off: usize,
    n: usize,
    k: usize,
}

/// Word products tracked as exterior powers of every block, for the word
/// and for its inverse. The top singular value of `Λ^k M` is
/// `σ₁⋯σ_k`, which a float SVD resolves even when `σ_k/σ₁` is far below
/// machine precision.
#[derive(Clone, Debug)]
pub struct Products {
    m: Vec<DMatrix<f64>>,
    minv: Vec<DMatrix<f64>>,
}

impl Products {
    fn is_finite(&self) -> bool {
        self.m.iter().chain(&self.minv).all(|x| x.iter().all(|v| v.is_finite()))
    }
}

impl MatrixGroup {
    pub fn new(spec: &MatrixGroupSpec) -> Result<Self> {
        let blocks = parse_ambient(&spec.ambient)?;
        let dim: usize = blocks.iter().sum();
        if !(spec.dedupe_tolerance > 0.0 && spec.dedupe_tolerance < 1e-2) {
            return Err(Error::Input("dedupe_tolerance must lie in (0, 1e-2)".into()));
        }
        let mut gens = Vec::new();
        for (k, rows) in spec.generators.iter().enumerate() {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::Input(format!("generator {k} is not {dim}×{dim}")));
            }
            if rows.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Input(format!("generator {k} has non-finite entries")));
            }
            let m = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
            gens.push(normalise(&m, &blocks).map_err(|e| Error::Input(format!("generator {k}: {e}")))?);
        }
        let mut exact: Vec<QMatrix> = gens.iter().map(to_exact).collect::<Result<_>>()?;
        let inv: Vec<QMatrix> = exact
            .iter()
            .map(|m| m.inverse().map_err(|_| Error::Input("generator is singular".into())))
            .collect::<Result<_>>()?;
        exact.extend(inv);
        let mut slots = Vec::new();
        let mut off = 0;
        for &n in &blocks {
            for k in 1..=n / 2 {
                slots.push(Slot { off, n, k });
            }
            off += n;
        }
        let powers = exact.iter().map(|m| slots.iter().map(|sl| from_exact(&exterior(m, *sl))).collect()).collect();
        Ok(MatrixGroup {
            blocks,
            dim,
            exact,
            slots,
            powers,
            max_word_length: spec.max_word_length,
            tol: spec.dedupe_tolerance,
        })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Real rank of the ambient group.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|n| n - 1).sum()
    }

    pub fn num_letters(&self) -> usize {
        self.exact.len()
    }

    fn inverse_letter(&self, l: usize) -> usize {
        let k = self.exact.len() / 2;
        (l + k) % (2 * k)
    }

    pub fn inverse_word(&self, w: &[u16]) -> Vec<u16> {
        w.iter().rev().map(|&l| self.inverse_letter(l as usize) as u16).collect()
    }

    fn identity_products(&self) -> Products {
        let m: Vec<DMatrix<f64>> =
            self.slots.iter().map(|sl| DMatrix::identity(binom(sl.n, sl.k), binom(sl.n, sl.k))).collect();
        Products { minv: m.clone(), m }
    }

    fn extend(&self, p: &Products, l: usize) -> Products {
        let li = self.inverse_letter(l);
        Products {
            m: p.m.iter().zip(&self.powers[l]).map(|(a, b)| a * b).collect(),
            minv: p.minv.iter().zip(&self.powers[li]).map(|(a, b)| b * a).collect(),
        }
    }

    /// Float products of a word and its inverse.
    pub fn word_product(&self, w: &[u16]) -> Products {
        w.iter().fold(self.identity_products(), |p, &l| self.extend(&p, l as usize))
    }

    /// `μ₊` of a word from its product in float arithmetic.
    pub fn cartan_of_word(&self, w: &[u16]) -> Option<Vec<f64>> {
        self.cartan(&self.word_product(w))
    }

    /// `μ₊` of a word from the exact rational product; exterior powers are
    /// taken exactly and rounded once.
    pub fn cartan_of_word_exact(&self, w: &[u16]) -> Option<Vec<f64>> {
        let mut p = QMatrix::identity(self.dim);
        let mut pinv = p.clone();
        for &l in w {
            p = p.mul(&self.exact[l as usize]);
            pinv = self.exact[self.inverse_letter(l as usize)].mul(&pinv);
        }
        let prods = Products {
            m: self.slots.iter().map(|sl| from_exact(&exterior(&p, *sl))).collect(),
            minv: self.slots.iter().map(|sl| from_exact(&exterior(&pinv, *sl))).collect(),
        };
        self.cartan(&prods)
    }

    /// Sorted `log σ_i` per block from the partial sums
    /// `S_k = log σ₁ + ⋯ + log σ_k`: `S_k` from `Λ^k M` for `k ≤ n/2` and
    /// `S_{n−k} = log σ_max(Λ^k M⁻¹)` since `S_n = 0`.
    pub fn cartan(&self, p: &Products) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(self.dim);
        let mut slot = 0;
        for &n in &self.blocks {
            let mut sums: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
            sums[0].push(0.0);
            sums[n].push(0.0);
            for k in 1..=n / 2 {
                sums[k].push(log_top_singular_value(&p.m[slot])?);
                sums[n - k].push(log_top_singular_value(&p.minv[slot])?);
                slot += 1;
            }
            let s: Vec<f64> = sums.iter().map(|v| v.iter().sum::<f64>() / v.len() as f64).collect();
            let mut x: Vec<f64> = (1..=n).map(|i| s[i] - s[i - 1]).collect();
            let mean = x.iter().sum::<f64>() / n as f64;
            x.iter_mut().for_each(|v| *v -= mean);
            x.sort_by(|a, b| b.total_cmp(a));
            out.extend(x);
        }
        Some(out)
    }

    /// `ι` on `a`: per block, reverse the coordinates and negate.
    pub fn iota(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len());
        let mut off = 0;
        for &n in &self.blocks {
            out.extend(x[off..off + n].iter().rev().map(|v| -v));
            off += n;
        }
        out
    }

    /// Simple roots `e_i − e_{i+1}` of every block, in ambient coordinates.
    pub fn simple_roots(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        let mut off = 0;
        for &n in &self.blocks {
            for i in 0..n - 1 {
                let mut a = vec![0.0; self.dim];
                a[off + i] = 1.0;
                a[off + i + 1] = -1.0;
                out.push(a);
            }
            off += n;
        }
        out
    }

    /// Extremal rays of `a₊`: the fundamental coweights of every block.
    pub fn chamber_rays(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        let mut off = 0;
        for &n in &self.blocks {
            for k in 1..n {
                let mut w = vec![0.0; self.dim];
                for i in 0..n {
                    w[off + i] = if i < k { 1.0 } else { 0.0 } - k as f64 / n as f64;
                }
                out.push(w);
            }
            off += n;
        }
        out
    }

    fn rho(&self) -> Vec<f64> {
        let mut rho = vec![0.0; self.dim];
        let mut off = 0;
        for &n in &self.blocks {
            for i in 0..n {
                rho[off + i] = (n as f64 - 1.0) / 2.0 - i as f64;
            }
            off += n;
        }
        rho
    }

    /// Rounded block entries of the element. The grid is relative to the
    /// largest entry, whose log separates elements of very different size.
    fn key(&self, p: &Products) -> Vec<i64> {
        let blocks: Vec<&DMatrix<f64>> =
            self.slots.iter().zip(&p.m).filter(|(sl, _)| sl.k == 1).map(|(_, m)| m).collect();
        let scale = blocks.iter().map(|m| m.amax()).fold(1.0, f64::max);
        let mut k: Vec<i64> =
            blocks.iter().flat_map(|m| m.iter()).map(|x| (x / (self.tol * scale)).round() as i64).collect();
        k.push((scale.ln() / self.tol).round() as i64);
        k
    }
}

fn normalise(m: &DMatrix<f64>, blocks: &[usize]) -> std::result::Result<DMatrix<f64>, String> {
    let mut out = m.clone();
    let mut off = 0;
    for &n in blocks {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let inside_i = (off..off + n).contains(&i);
                let inside_j = (off..off + n).contains(&j);
                if inside_i != inside_j && m[(i, j)].abs() > 1e-12 {
                    return Err("entries outside the diagonal blocks must vanish".into());
                }
            }
        }
        let block = m.view((off, off), (n, n)).into_owned();
        let det = block.determinant();
        if det.abs() < 1e-300 || (det < 0.0 && n % 2 == 0) {
            return Err(format!("block determinant {det} cannot be normalised to 1"));
        }
        let s = det.signum() * det.abs().powf(1.0 / n as f64);
        let mut view = out.view_mut((off, off), (n, n));
        view /= s;
        off += n;
    }
    Ok(out)
}

fn to_exact(m: &DMatrix<f64>) -> Result<QMatrix> {
    let rows: Vec<Vec<_>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| from_f64(m[(i, j)])).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    Ok(QMatrix::from_rows(&rows))
}

fn from_exact(m: &QMatrix) -> DMatrix<f64> {
    let f = m.to_f64();
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| f[i][j])
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in (k - 1)..n {
        for mut s in subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

fn det_exact(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest {
            let f = &row[c] / &pivot[c];
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// `Λ^k` of the block in `slot`, by exact minors in lexicographic order.
fn exterior(m: &QMatrix, slot: Slot) -> QMatrix {
    let sets = subsets(slot.n, slot.k);
    let rows: Vec<Vec<Q>> = sets
        .iter()
        .map(|i| {
            sets.iter()
                .map(|j| {
                    let minor = i
                        .iter()
                        .map(|&a| j.iter().map(|&b| m.row(slot.off + a)[slot.off + b].clone()).collect())
                        .collect();
                    det_exact(minor)
                })
                .collect()
        })
        .collect();
    QMatrix::from_rows(&rows)
}

/// `log σ_max`, with the matrix rescaled first so the SVD never squares
/// huge entries.
fn log_top_singular_value(m: &DMatrix<f64>) -> Option<f64> {
    if m.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let scale = m.amax();
    if scale == 0.0 {
        return None;
    }
    let top = (m / scale).svd(false, false).singular_values.iter().copied().fold(0.0, f64::max);
    let v = top.ln() + scale.ln();
    v.is_finite().then_some(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanPoint {
    pub word_length: usize,
    pub coords: Vec<f64>,
    #[serde(skip)]
    pub word: Vec<u16>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanSample {
    pub blocks: Vec<usize>,
    pub rank: usize,
    pub points: Vec<CartanPoint>,
    /// Elements whose product overflowed.
    pub dropped: usize,
    /// Longest word length reached.
    pub max_word_length: usize,
    /// The ball stopped growing before the length limit: the group is finite.
    pub exhausted: bool,
}

impl CartanSample {
    /// Coordinates sorted decreasing and summing to zero in every block.
    pub fn dominance_violations(&self, tol: f64) -> usize {
        self.points
            .iter()
            .filter(|p| {
                let mut off = 0;
                let mut bad = false;
                for &n in &self.blocks {
                    let b = &p.coords[off..off + n];
                    bad |= b.windows(2).any(|w| w[0] < w[1] - tol) || b.iter().sum::<f64>().abs() > tol;
                    off += n;
                }
                bad
            })
            .count()
    }

    /// `word_length,c1,…,cN` rows in enumeration order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Orbit(format!("csv: {e}"));
        let mut header = vec!["word_length".to_string()];
        header.extend((1..=self.blocks.iter().sum::<usize>()).map(|i| format!("c{i}")));
        w.write_record(&header).map_err(csv_err)?;
        for p in &self.points {
            let mut rec = vec![p.word_length.to_string()];
            rec.extend(p.coords.iter().map(|x| format!("{x:.12e}")));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Orbit(format!("csv: {e}")))?;
        Ok(())
    }
}

struct Node {
    p: Products,
    word: Vec<u16>,
}

/// Every element of word length at most the configured maximum, each once.
/// Levels are expanded in parallel and merged in a fixed order.
pub fn enumerate_orbit(group: &MatrixGroup, cap: usize, exec: ExecMode) -> Result<CartanSample> {
    let id = group.identity_products();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(group.key(&id));
    let mut points = vec![CartanPoint { word_length: 0, coords: vec![0.0; group.dim], word: Vec::new() }];
    let mut frontier = vec![Node { p: id, word: Vec::new() }];
    let mut dropped = 0;
    let mut reached = 0;
    let mut exhausted = group.exact.is_empty();
    for len in 1..=group.max_word_length {
        if frontier.is_empty() {
            exhausted = true;
            break;
        }
        let children = par::map(exec, &frontier, |node| {
            let last = node.word.last().map(|&l| group.inverse_letter(l as usize));
            (0..group.exact.len())
                .filter(|&l| Some(l) != last)
                .map(|l| {
                    let mut word = node.word.clone();
                    word.push(l as u16);
                    Node { p: group.extend(&node.p, l), word }
                })
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for c in children.into_iter().flatten() {
            if !c.p.is_finite() {
                dropped += 1;
                continue;
            }
            if !seen.insert(group.key(&c.p)) {
                continue;
            }
            if seen.len() > cap {
                return Err(Error::Orbit(format!(
                    "more than {cap} elements by word length {len}; lower max_word_length or raise the cap"
                )));
            }
            next.push(c);
        }
        let coords = par::map(exec, &next, |c| group.cartan(&c.p));
        for (c, x) in next.iter().zip(coords) {
            match x {
                Some(coords) => points.push(CartanPoint { word_length: len, coords, word: c.word.clone() }),
                None => dropped += 1,
            }
        }
        if !next.is_empty() {
            reached = len;
        }
        frontier = next;
    }
    if frontier.is_empty() && !group.exact.is_empty() {
        exhausted = true;
    }
    Ok(CartanSample {
        blocks: group.blocks.clone(),
        rank: group.rank(),
        points,
        dropped,
        max_word_length: reached,
        exhausted,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub pairs_checked: usize,
    pub max_error: f64,
    pub holds: bool,
}

/// `μ₊(γ⁻¹) = ι μ₊(γ)`, with `γ⁻¹` recomputed from the inverse word.
pub fn check_iota_symmetry(group: &MatrixGroup, sample: &CartanSample, tol: f64, exec: ExecMode) -> SymmetryReport {
    let errs = par::map(exec, &sample.points, |p| match group.cartan_of_word(&group.inverse_word(&p.word)) {
        Some(q) => max_diff(&q, &group.iota(&p.coords)),
        None => f64::INFINITY,
    });
    let max_error = errs.iter().copied().fold(0.0, f64::max);
    SymmetryReport { pairs_checked: errs.len(), max_error, holds: max_error <= tol }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubadditivityReport {
    pub pairs_checked: usize,
    /// Largest `‖μ₊(γδ)‖ − ‖μ₊(γ)‖ − ‖μ₊(δ)‖`.
    pub worst_excess: f64,
    pub holds: bool,
}

pub fn check_subadditivity(group: &MatrixGroup, sample: &CartanSample, pairs: usize, seed: u64) -> SubadditivityReport {
    let mut g = rng(seed);
    let n = sample.points.len();
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0;
    for _ in 0..pairs {
        let a = &sample.points[g.random_range(0..n)];
        let b = &sample.points[g.random_range(0..n)];
        let word: Vec<u16> = a.word.iter().chain(&b.word).copied().collect();
        if let Some(c) = group.cartan_of_word(&word) {
            worst = worst.max(norm(&c) - norm(&a.coords) - norm(&b.coords));
            checked += 1;
        }
    }
    SubadditivityReport { pairs_checked: checked, worst_excess: worst, holds: worst <= 1e-6 }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub words_checked: usize,
    pub max_error: f64,
}

/// Recomputes `count` random sample points from exact rational products.
pub fn validate_with_oracle(
    group: &MatrixGroup,
    sample: &CartanSample,
    count: usize,
    seed: u64,
    exec: ExecMode,
) -> OracleReport {
    let mut g = rng(seed);
    let picks: Vec<usize> = (0..count).map(|_| g.random_range(0..sample.points.len())).collect();
    let errs = par::map(exec, &picks, |&i| {
        let p = &sample.points[i];
        match group.cartan_of_word_exact(&p.word) {
            Some(q) => max_diff(&q, &p.coords),
            None => f64::INFINITY,
        }
    });
    OracleReport { words_checked: errs.len(), max_error: errs.iter().copied().fold(0.0, f64::max) }
}

fn norm(x: &[f64]) -> f64 {
    fdot(x, x).sqrt()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalCone {
    pub rank: usize,
    /// Unit generators in ambient coordinates.
    pub generators: Vec<Vec<f64>>,
    pub points_used: usize,
    pub radius_cut: f64,
    /// Largest distance of a used unit direction from their mean direction.
    pub spread: f64,
    /// Rank two: angles in degrees from the first chamber wall.
    pub angular_interval: Option<[f64; 2]>,
    pub angular_width: Option<f64>,
    pub chamber_width: Option<f64>,
}

/// The cone spanned by directions of points with `‖μ₊‖ ≥ radius_cut`.
pub fn empirical_limit_cone(group: &MatrixGroup, sample: &CartanSample, radius_cut: f64) -> Result<EmpiricalCone> {
    let dirs: Vec<Vec<f64>> = sample
        .points
        .iter()
        .filter_map(|p| {
            let n = norm(&p.coords);
            (n >= radius_cut && n > 0.0).then(|| p.coords.iter().map(|x| x / n).collect())
        })
        .collect();
    if dirs.is_empty() {
        return Err(Error::Orbit(format!("no point has norm ≥ {radius_cut}; increase max_word_length")));
    }
    let mut mean = vec![0.0; group.dim];
    for d in &dirs {
        mean.iter_mut().zip(d).for_each(|(m, x)| *m += x);
    }
    let mn = norm(&mean);
    let spread = if mn > 0.0 {
        mean.iter_mut().for_each(|m| *m /= mn);
        dirs.iter().map(|d| norm(&sub(d, &mean))).fold(0.0, f64::max)
    } else {
        2.0
    };
    let mut cone = EmpiricalCone {
        rank: group.rank(),
        generators: Vec::new(),
        points_used: dirs.len(),
        radius_cut,
        spread,
        angular_interval: None,
        angular_width: None,
        chamber_width: None,
    };
    match group.rank() {
        0 => {}
        1 => cone.generators.push(dirs[0].clone()),
        2 => {
            let rays = group.chamber_rays();
            let u0 = unit(&rays[0]);
            let u1 = unit(&sub(&rays[1], &scale(fdot(&rays[1], &u0), &u0)));
            let angle = |d: &[f64]| fdot(d, &u1).atan2(fdot(d, &u0)).to_degrees();
            let (mut lo, mut hi) = (0, 0);
            let angles: Vec<f64> = dirs.iter().map(|d| angle(d)).collect();
            for (i, a) in angles.iter().enumerate() {
                if *a < angles[lo] {
                    lo = i;
                }
                if *a > angles[hi] {
                    hi = i;
                }
            }
            cone.generators.push(dirs[lo].clone());
            if angles[hi] - angles[lo] > 1e-12 {
                cone.generators.push(dirs[hi].clone());
            }
            cone.angular_interval = Some([angles[lo], angles[hi]]);
            cone.angular_width = Some(angles[hi] - angles[lo]);
            cone.chamber_width = Some(angle(&unit(&rays[1])));
        }
        _ => cone.generators = hull_directions(group, &dirs),
    }
    Ok(cone)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(c: f64, a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| c * x).collect()
}

fn unit(a: &[f64]) -> Vec<f64> {
    scale(1.0 / norm(a), a)
}

/// Extreme directions, found on the slice `⟨ρ, ·⟩ = 1`. Maximisers of random
/// linear functionals are vertices for sure; the rest are kept only if they
/// fall outside the hull of those, then pruned by exact extremality LPs.
fn hull_directions(group: &MatrixGroup, dirs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rho = group.rho();
    let mut slice: Vec<Vec<f64>> = Vec::new();
    let mut seen = HashSet::new();
    for d in dirs {
        let p = scale(1.0 / fdot(d, &rho), d);
        let key: Vec<i64> = p.iter().map(|x| (x * 1e6).round() as i64).collect();
        if seen.insert(key) {
            slice.push(p);
        }
    }
    let mut g = rng(0);
    let mut sure: Vec<usize> = Vec::new();
    for _ in 0..(50 * group.rank()) {
        let c: Vec<f64> = (0..group.dim).map(|_| g.random_range(-1.0..1.0)).collect();
        let best = (0..slice.len()).max_by(|&i, &j| fdot(&c, &slice[i]).total_cmp(&fdot(&c, &slice[j]))).unwrap_or(0);
        if !sure.contains(&best) {
            sure.push(best);
        }
    }
    let sure_pts: Vec<Vec<f64>> = sure.iter().map(|&i| slice[i].clone()).collect();
    let mut cand: Vec<Vec<f64>> = sure_pts.clone();
    for (i, p) in slice.iter().enumerate() {
        if !sure.contains(&i) && !in_hull_f(&sure_pts, p) {
            cand.push(p.clone());
        }
    }
    let verts: Vec<Vec<f64>> = (0..cand.len())
        .filter(|&i| {
            let others: Vec<Vec<f64>> =
                cand.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
            !in_hull_f(&others, &cand[i])
        })
        .map(|i| unit(&cand[i]))
        .collect();
    verts
}

fn in_hull_f(points: &[Vec<f64>], x: &[f64]) -> bool {
    if points.is_empty() {
        return false;
    }
    let mut lp = Lp::<f64>::new(points.len());
    lp.row(vec![1.0; points.len()], Rel::Eq, 1.0);
    for k in 0..x.len() {
        lp.row(points.iter().map(|p| p[k]).collect(), Rel::Eq, x[k]);
    }
    matches!(lp.solve(10_000), LpOutcome::Optimal { .. })
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetDiagnostic {
    /// 1-based index into the simple roots, block by block.
    pub root: usize,
    pub min_value: f64,
    pub in_kernel: bool,
}

/// For each simple root, whether some generator of the cone lies in its
/// kernel, i.e. whether the cone meets that wall.
pub fn facet_diagnostic(group: &MatrixGroup, cone: &EmpiricalCone, tol: f64) -> Vec<FacetDiagnostic> {
    group
        .simple_roots()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let min_value = cone.generators.iter().map(|g| fdot(a, g)).fold(f64::INFINITY, f64::min);
            FacetDiagnostic { root: i + 1, min_value, in_kernel: min_value <= tol }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentEstimate {
    pub estimate: f64,
    /// Two standard errors of the fitted slope.
    pub band: f64,
    /// Fitted range of `T`.
    pub t_range: [f64; 2],
    pub points_fit: usize,
    pub regime: String,
    pub label: &'static str,
}

/// Slope of `log #{γ : μ(μ₊(γ)) ≤ T}` against `T`, by least squares on the
/// top half of `[0, T*]`. `T*` is the smallest `μ`-value at the longest
/// enumerated word length; above it the word ball undercounts.
pub fn estimate_exponent(sample: &CartanSample, mu: &[f64]) -> Result<ExponentEstimate> {
    let dim: usize = sample.blocks.iter().sum();
    if mu.len() != dim {
        return Err(Error::Dimension { expected: dim, got: mu.len() });
    }
    if sample.points.len() < 1000 {
        return Err(Error::Orbit(format!("{} points; at least 1000 are needed", sample.points.len())));
    }
    let mut vals: Vec<f64> = sample.points.iter().map(|p| fdot(mu, &p.coords)).collect();
    let t_star = if sample.exhausted {
        vals.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        sample
            .points
            .iter()
            .zip(&vals)
            .filter(|(p, _)| p.word_length == sample.max_word_length)
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min)
    };
    let t0 = t_star / 2.0;
    if t_star.is_nan() || t_star < 3.0 {
        return Err(Error::Orbit(format!("μ-values spread over {t_star:.3} units; at least 3 are needed")));
    }
    vals.sort_by(f64::total_cmp);
    let grid = 200;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..=grid {
        let t = t0 + (t_star - t0) * k as f64 / grid as f64;
        let count = vals.partition_point(|v| *v <= t + 1e-9);
        if count > 0 {
            xs.push(t);
            ys.push((count as f64).ln());
        }
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    let se = (resid / (n - 2.0).max(1.0) / sxx).sqrt();
    Ok(ExponentEstimate {
        estimate: slope,
        band: 2.0 * se,
        t_range: [t0, t_star],
        points_fit: xs.len(),
        regime: format!("least squares on T in [T*/2, T*], T* = {t_star:.6}, {grid} grid points"),
        label: ESTIMATE_LABEL,
    })
}

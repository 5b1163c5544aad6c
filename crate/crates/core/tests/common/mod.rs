//! Brute-force oracles shared by the integration tests. They avoid the
//! library's LP, dominance-order and solver code paths.
#![allow(dead_code)]

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use weylgrowth::growth::GrowthIndicator;
use weylgrowth::rational::{QVec, Q};
use weylgrowth::RootSystem;

/// `W μ` by closing `{μ}` under simple reflections.
pub fn orbit_by_reflections(rs: &RootSystem, mu: &[Q]) -> Vec<QVec> {
    let mut seen: Vec<QVec> = vec![mu.to_vec()];
    let mut frontier = seen.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..rs.rank() {
                let w = rs.reflect(i, v);
                if !seen.contains(&w) {
                    seen.push(w.clone());
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Clears denominators across all points at once.
fn to_integer(points: &[QVec]) -> Vec<Vec<i128>> {
    let mut l = num_bigint::BigInt::from(1);
    for p in points {
        for x in p {
            l = l.lcm(x.denom());
        }
    }
    points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| (x * Q::from_integer(l.clone())).to_integer().to_i128().expect("small coordinates"))
                .collect()
        })
        .collect()
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normals of hyperplanes through `rank` points of the set, rank ≤ 3.
fn candidate_normals(pts: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = pts[0].len();
    let diff = |a: &[i128], b: &[i128]| -> Vec<i128> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let mut out = Vec::new();
    match n {
        1 => out.push(vec![1]),
        2 => {
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let d = diff(&pts[i], &pts[j]);
                    out.push(vec![-d[1], d[0]]);
                }
            }
        }
        3 => {
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    for k in j + 1..pts.len() {
                        let (a, b) = (diff(&pts[j], &pts[i]), diff(&pts[k], &pts[i]));
                        out.push(vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]);
                    }
                }
            }
        }
        _ => panic!("oracle supports rank ≤ 3"),
    }
    out.retain(|v| v.iter().any(|x| *x != 0));
    out
}

/// `λ ∈ conv(W μ)`: every hyperplane through orbit points that has the
/// orbit on one side also has `λ` on that side. The candidate normals
/// include every facet normal, and the affine hull is covered by taking
/// both orientations. Needs an orbit spanning the space, which holds for
/// `μ ≠ 0` in an irreducible system.
pub fn hull_member_by_enumeration(rs: &RootSystem, lambda: &[Q], mu: &[Q]) -> bool {
    let mut all = orbit_by_reflections(rs, mu);
    all.push(lambda.to_vec());
    let ints = to_integer(&all);
    let (x, pts) = ints.split_last().expect("nonempty");
    if pts.len() == 1 {
        return x == &pts[0];
    }
    for nrm in candidate_normals(pts) {
        for s in [1i128, -1] {
            let m: Vec<i128> = nrm.iter().map(|v| s * v).collect();
            let top = pts.iter().map(|p| dot(&m, p)).max().expect("nonempty");
            if dot(&m, x) > top {
                return false;
            }
        }
    }
    true
}

/// `δ′_μ` on a rank-two model by brute force: `ψ′/μ` on a grid of rays
/// between the two extremal rays of the cone, refined by ternary search (`ψ′/μ` is
/// the minimum of monotone functions along the segment, hence unimodal).
pub fn delta_prime_grid(g: &GrowthIndicator, mu: &[f64], rays: usize) -> f64 {
    let gram = g.root_system().gram();
    // The extremal rays are the generators of least and greatest angle in
    // an orthonormal frame.
    let u = gram.euclidean_factor();
    let angle = |v: &[f64]| (u[1][0] * v[0] + u[1][1] * v[1]).atan2(u[0][0] * v[0] + u[0][1] * v[1]);
    let mut sorted: Vec<&Vec<f64>> = g.generators_f().iter().collect();
    sorted.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    let gens = [sorted[0], sorted[sorted.len() - 1]];
    let point = |t: f64| -> Vec<f64> { gens[0].iter().zip(gens[1]).map(|(a, b)| (1.0 - t) * a + t * b).collect() };
    let ratio = |t: f64| {
        let v = point(t);
        g.psi_prime_on_cone(&v) / gram.pair_f(mu, &v)
    };
    let h = 1.0 / rays as f64;
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..=rays {
        let t = k as f64 * h;
        let r = ratio(t);
        if r > best {
            best = r;
            best_t = t;
        }
    }
    let (mut lo, mut hi) = ((best_t - h).max(0.0), (best_t + h).min(1.0));
    for _ in 0..200 {
        let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if ratio(a) < ratio(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    best.max(ratio((lo + hi) / 2.0))
}

/// Dominant rational vector from small integer fundamental-weight
/// coordinates over a denominator.
pub fn dominant_from(rs: &RootSystem, coeffs: &[i64], den: i64) -> QVec {
    let mut v = vec![Q::zero(); rs.rank()];
    for (c, w) in coeffs.iter().zip(rs.fundamental_weights()) {
        for (x, y) in v.iter_mut().zip(w) {
            *x += Q::new((*c).into(), den.into()) * y;
        }
    }
    v
}

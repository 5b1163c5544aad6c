//! Weyl group enumeration.
//!
//! Elements are stored as integer matrices acting on simple-root
//! coefficients, which keeps breadth-first generation cheap and exact.

use std::collections::HashSet;

use super::RootSystem;
use crate::linalg::QMatrix;
use crate::rational::{q, QVec, Q};

pub const DEFAULT_WEYL_CAP: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n: usize,
    /// Row-major: column `j` holds the coefficients of `w(α_j)`.
    m: Vec<i64>,
    length: u32,
}

impl WeylElement {
    fn identity(n: usize) -> Self {
        let mut m = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        WeylElement { n, m, length: 0 }
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn coeff_matrix(&self) -> &[i64] {
        &self.m
    }

    /// `s_i ∘ self`: only row `i` changes.
    fn left_reflect(&self, i: usize, cartan: &[Vec<i64>]) -> Self {
        let n = self.n;
        let mut m = self.m.clone();
        for col in 0..n {
            let pairing: i64 = (0..n).map(|j| self.m[j * n + col] * cartan[j][i]).sum();
            m[i * n + col] -= pairing;
        }
        WeylElement { n, m, length: self.length + 1 }
    }

    pub fn act_coeffs(&self, c: &[Q]) -> QVec {
        let n = self.n;
        (0..n).map(|i| (0..n).fold(q(0), |acc, j| acc + q(self.m[i * n + j]) * &c[j])).collect()
    }

    /// Matrix in ambient coordinates, `R M R⁻¹` with `R` the simple roots
    /// as columns.
    pub fn ambient(&self, rs: &RootSystem) -> QMatrix {
        let n = self.n;
        let basis = QMatrix::from_cols(rs.simple_roots());
        let inv = basis.inverse().expect("simple roots form a basis");
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = q(self.m[i * n + j]);
            }
        }
        basis.mul(&m).mul(&inv)
    }

    pub fn act(&self, rs: &RootSystem, v: &[Q]) -> QVec {
        let c = rs.simple_coords(v);
        let img = self.act_coeffs(&c);
        let basis = QMatrix::from_cols(rs.simple_roots());
        basis.mul_vec(&img)
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    max_length: u32,
}

impl WeylGroup {
    pub(super) fn enumerate(rs: &RootSystem) -> Self {
        let n = rs.rank();
        let cartan = rs.cartan_matrix();
        let id = WeylElement::identity(n);
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        seen.insert(id.m.clone());
        let mut elements = vec![id];
        let mut frontier = 0;
        while frontier < elements.len() {
            let end = elements.len();
            for k in frontier..end {
                for i in 0..n {
                    let next = elements[k].left_reflect(i, cartan);
                    if seen.insert(next.m.clone()) {
                        elements.push(next);
                    }
                }
            }
            frontier = end;
        }
        let max_length = elements.last().map_or(0, |e| e.length);
        WeylGroup { elements, max_length }
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max_length(&self) -> u32 {
        self.max_length
    }

    pub fn ambient_matrices(&self, rs: &RootSystem) -> Vec<QMatrix> {
        let basis = QMatrix::from_cols(rs.simple_roots());
        let inv = basis.inverse().expect("simple roots form a basis");
        let n = rs.rank();
        self.elements
            .iter()
            .map(|w| {
                let mut m = QMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = q(w.m[i * n + j]);
                    }
                }
                basis.mul(&m).mul(&inv)
            })
            .collect()
    }

    /// The orbit `W v`, deduplicated.
    pub fn orbit(&self, rs: &RootSystem, v: &[Q]) -> Vec<QVec> {
        let basis = QMatrix::from_cols(rs.simple_roots());
        let c = rs.simple_coords(v);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in &self.elements {
            let img = basis.mul_vec(&w.act_coeffs(&c));
            if seen.insert(img.clone()) {
                out.push(img);
            }
        }
        out
    }
}

fn factorial(k: u128) -> u128 {
    (1..=k).product()
}

/// Order of W from the type of each irreducible component, identified by
/// rank, number of positive roots and whether all roots have one length.
pub fn predicted_order(rs: &RootSystem) -> u128 {
    let mut total: u128 = 1;
    for comp in rs.irreducible_components() {
        let k = comp.len() as u128;
        let roots: Vec<_> = rs
            .positive_roots()
            .iter()
            .filter(|p| !p.doubled)
            .filter(|p| p.coeffs.iter().enumerate().all(|(j, &c)| c == 0 || comp.contains(&j)))
            .collect();
        let count = roots.len() as u128;
        let first = rs.gram().norm2(&roots[0].vector);
        let laced = roots.iter().all(|p| rs.gram().norm2(&p.vector) == first);
        let order = match (k, count, laced) {
            (k, c, true) if c == k * (k + 1) / 2 => factorial(k + 1),
            (k, c, true) if k >= 4 && c == k * (k - 1) => (1u128 << (k - 1)) * factorial(k),
            (6, 36, true) => 51_840,
            (7, 63, true) => 2_903_040,
            (8, 120, true) => 696_729_600,
            (2, 6, false) => 12,
            (4, 24, false) => 1152,
            (k, c, false) if c == k * k => (1u128 << k) * factorial(k),
            _ => u128::MAX,
        };
        total = total.saturating_mul(order);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    #[test]
    fn small_orders() {
        for (name, n) in [
            ("a1", 2),
            ("a2", 6),
            ("a3", 24),
            ("b2", 8),
            ("b3", 48),
            ("g2", 12),
            ("c3", 48),
            ("d4", 192),
            ("so(3,3)", 24),
        ] {
            let rs = RootSystem::preset(name).unwrap();
            assert_eq!(predicted_order(&rs), n, "{name}");
            assert_eq!(rs.weyl_group().unwrap().len() as u128, n, "{name}");
        }
    }

    #[test]
    fn large_orders_predicted() {
        for (name, n) in
            [("f4", 1152u128), ("e6", 51_840), ("e7", 2_903_040), ("e8", 696_729_600), ("b6", 46_080), ("d6", 23_040)]
        {
            assert_eq!(predicted_order(&RootSystem::preset(name).unwrap()), n, "{name}");
        }
    }

    #[test]
    fn cap_refusal() {
        let rs = RootSystem::preset("e8").unwrap();
        match rs.weyl_group() {
            Err(crate::Error::WeylCapExceeded { cap, .. }) => assert_eq!(cap, DEFAULT_WEYL_CAP),
            other => panic!("expected refusal, got {other:?}"),
        }
        let b3 = RootSystem::preset("b3").unwrap();
        assert!(b3.weyl_group_with_cap(10).is_err());
    }

    #[test]
    fn longest_element_matches_iota() {
        for name in ["a2", "a3", "b3", "d5", "g2"] {
            let rs = RootSystem::preset(name).unwrap();
            let w0 = rs.longest_element_by_enumeration().unwrap();
            for (i, a) in rs.simple_roots().iter().enumerate() {
                let img = w0.mul_vec(a);
                let j = rs.iota_perm()[i];
                assert_eq!(crate::rational::neg(&img), rs.simple_roots()[j], "{name}");
            }
        }
    }

    #[test]
    fn a1_group() {
        let rs = RootSystem::preset("a1").unwrap();
        let g = rs.weyl_group().unwrap();
        let mats = g.ambient_matrices(&rs);
        assert_eq!(mats[0], QMatrix::identity(1));
        assert_eq!(mats[1].mul_vec(&qvec(&[1])), qvec(&[-1]));
    }

    #[test]
    fn b2_orbit() {
        let rs = RootSystem::preset("b2").unwrap();
        let g = rs.weyl_group().unwrap();
        assert_eq!(g.orbit(&rs, &qvec(&[1, 0])).len(), 4);
        assert_eq!(g.orbit(&rs, &qvec(&[2, 1])).len(), 8);
    }
}

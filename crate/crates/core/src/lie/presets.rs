//! Preset tables: abstract Cartan types and real simple Lie algebras.
//!
//! B, C, D, F4 and E8 use the usual Euclidean coordinates. A, G2, E6 and E7
//! live in simple-root coordinates with the symmetrised Cartan matrix as
//! inner product.

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{q, qf, QVec};

/// Multiplicity rule attached to a preset.
#[derive(Clone, Debug, PartialEq)]
pub enum MultRule {
    /// Every reduced root has the same multiplicity, no doubled roots.
    Uniform(u32),
    /// Reduced roots by squared length (long, short), plus an optional
    /// multiplicity for the doubled roots `2 * short`.
    ByLength { long: u32, short: u32, doubled: Option<u32> },
}

#[derive(Clone, Debug)]
pub struct PresetData {
    pub label: String,
    pub simple_roots: Vec<QVec>,
    pub gram: Option<QMatrix>,
    pub mult: MultRule,
}

fn e(n: usize, i: usize) -> QVec {
    let mut v = vec![q(0); n];
    v[i] = q(1);
    v
}

fn e_diff(n: usize, i: usize, j: usize) -> QVec {
    let mut v = e(n, i);
    v[j] = q(-1);
    v
}

fn chain_simple(n: usize) -> Vec<QVec> {
    (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect()
}

fn type_b(n: usize) -> Vec<QVec> {
    let mut s = chain_simple(n);
    s.push(e(n, n - 1));
    s
}

fn type_c(n: usize) -> Vec<QVec> {
    let mut s = chain_simple(n);
    let mut last = e(n, n - 1);
    last[n - 1] = q(2);
    s.push(last);
    s
}

fn type_d(n: usize) -> Vec<QVec> {
    let mut s = chain_simple(n);
    let mut last = e(n, n - 2);
    last[n - 1] = q(1);
    s.push(last);
    s
}

fn basis(n: usize) -> Vec<QVec> {
    (0..n).map(|i| e(n, i)).collect()
}

fn cartan_gram(n: usize, edges: &[(usize, usize)]) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = q(2);
    }
    for &(a, b) in edges {
        m[(a, b)] = q(-1);
        m[(b, a)] = q(-1);
    }
    m
}

fn type_a(n: usize) -> (Vec<QVec>, QMatrix) {
    let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    (basis(n), cartan_gram(n, &edges))
}

fn type_e(n: usize) -> Result<(Vec<QVec>, Option<QMatrix>)> {
    match n {
        // Bourbaki labels 1..n, zero based: 1-3-4-5-..., 2 attached to 4.
        6 | 7 => {
            let mut edges = vec![(0, 2), (1, 3), (2, 3)];
            edges.extend((3..n - 1).map(|i| (i, i + 1)));
            Ok((basis(n), Some(cartan_gram(n, &edges))))
        }
        8 => {
            let h = qf(1, 2);
            let mut a1 = vec![-h.clone(); 8];
            a1[0] = h.clone();
            a1[7] = h;
            let mut a2 = vec![q(0); 8];
            a2[0] = q(1);
            a2[1] = q(1);
            let mut s = vec![a1, a2];
            for i in 0..6 {
                s.push(e_diff(8, i + 1, i));
            }
            Ok((s, None))
        }
        _ => Err(Error::UnknownPreset(format!("e{n}"))),
    }
}

fn type_f4() -> Vec<QVec> {
    let h = qf(1, 2);
    vec![e_diff(4, 1, 2), e_diff(4, 2, 3), e(4, 3), vec![h.clone(), -h.clone(), -h.clone(), -h]]
}

fn type_g2() -> (Vec<QVec>, QMatrix) {
    let m = QMatrix::from_rows(&[vec![q(2), q(-3)], vec![q(-3), q(6)]]);
    (basis(2), m)
}

fn parse_pair(inner: &str) -> Option<(usize, usize)> {
    let (a, b) = inner.split_once(',')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

fn normalize(name: &str) -> String {
    name.chars().filter(|c| !c.is_whitespace() && *c != '_').flat_map(char::to_lowercase).collect()
}

fn abstract_type(kind: char, n: usize) -> Result<PresetData> {
    let label = format!("{}{}", kind.to_ascii_uppercase(), n);
    let unit = MultRule::Uniform(1);
    let bad = || Error::UnknownPreset(label.clone());
    let (simple_roots, gram) = match kind {
        'a' if n >= 1 => {
            let (s, g) = type_a(n);
            (s, Some(g))
        }
        'b' if n >= 2 => (type_b(n), None),
        'c' if n >= 2 => (type_c(n), None),
        'd' if n >= 2 => (type_d(n), None),
        'g' if n == 2 => {
            let (s, g) = type_g2();
            (s, Some(g))
        }
        'f' if n == 4 => (type_f4(), None),
        'e' if (6..=8).contains(&n) => type_e(n)?,
        _ => return Err(bad()),
    };
    Ok(PresetData { label, simple_roots, gram, mult: unit })
}

/// Looks up a preset by name, e.g. `"b3"`, `"A_2"`, `"so(2,5)"`, `"sl(3,C)"`,
/// `"su(1,3)"`.
pub fn lookup(name: &str) -> Result<PresetData> {
    let n = normalize(name);
    let unknown = || Error::UnknownPreset(name.to_string());

    if let Some(inner) = n.strip_prefix("so(").and_then(|s| s.strip_suffix(')')) {
        let (p, qq) = parse_pair(inner).ok_or_else(unknown)?;
        if p == 0 || p > qq || p + qq < 3 {
            return Err(unknown());
        }
        let label = format!("so({p},{qq})");
        return Ok(if p == qq {
            if p < 2 {
                return Err(unknown());
            }
            PresetData { label, simple_roots: type_d(p), gram: None, mult: MultRule::Uniform(1) }
        } else if p == 1 {
            PresetData { label, simple_roots: vec![vec![q(1)]], gram: None, mult: MultRule::Uniform((qq - 1) as u32) }
        } else {
            PresetData {
                label,
                simple_roots: type_b(p),
                gram: None,
                mult: MultRule::ByLength { long: 1, short: (qq - p) as u32, doubled: None },
            }
        });
    }
    if let Some(inner) = n.strip_prefix("su(").and_then(|s| s.strip_suffix(')')) {
        let (p, qq) = parse_pair(inner).ok_or_else(unknown)?;
        if p == 0 || p > qq {
            return Err(unknown());
        }
        let label = format!("su({p},{qq})");
        return Ok(if p == qq {
            // C_p: long roots 2e_i (m = 1), short roots e_i +- e_j (m = 2).
            let simple_roots = if p == 1 { vec![vec![q(2)]] } else { type_c(p) };
            PresetData {
                label,
                simple_roots,
                gram: None,
                mult: MultRule::ByLength { long: 1, short: 2, doubled: None },
            }
        } else {
            // BC_p: e_i +- e_j (m = 2), e_i (m = 2(q-p)), 2e_i (m = 1).
            let simple_roots = if p == 1 { vec![vec![q(1)]] } else { type_b(p) };
            let short = 2 * (qq - p) as u32;
            let long = if p == 1 { short } else { 2 };
            PresetData { label, simple_roots, gram: None, mult: MultRule::ByLength { long, short, doubled: Some(1) } }
        });
    }
    let sl = n
        .strip_prefix("sl(")
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.split_once(','))
        .and_then(|(a, f)| Some((a.parse::<usize>().ok()?, f.to_string())))
        .or_else(|| {
            let rest = n.strip_prefix("sl")?;
            let (digits, field) = rest.split_at(rest.find(|c: char| !c.is_ascii_digit())?);
            Some((digits.parse().ok()?, field.to_string()))
        });
    if let Some((dim, field)) = sl {
        let m = match field.as_str() {
            "r" => 1,
            "c" => 2,
            "h" => 4,
            _ => return Err(unknown()),
        };
        if dim < 2 {
            return Err(unknown());
        }
        let (simple_roots, gram) = type_a(dim - 1);
        let field_name = field.to_uppercase();
        return Ok(PresetData {
            label: format!("sl({dim},{field_name})"),
            simple_roots,
            gram: Some(gram),
            mult: MultRule::Uniform(m),
        });
    }
    let mut chars = n.chars();
    let kind = chars.next().ok_or_else(unknown)?;
    let rank: usize = chars.as_str().parse().map_err(|_| unknown())?;
    abstract_type(kind, rank).map_err(|_| unknown())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for name in [
            "a1", "A_2", "b3", "C3", "d4", "g2", "f4", "e6", "e7", "e8", "so(2,5)", "so(3,3)", "sl(3,R)", "sl3c",
            "su(1,3)", "su(2,2)",
        ] {
            assert!(lookup(name).is_ok(), "{name}");
        }
        for name in ["x3", "b1", "g3", "so(5,2)", "sl(1,R)", "e9", ""] {
            assert!(lookup(name).is_err(), "{name}");
        }
    }

    #[test]
    fn so2n_is_b2() {
        let p = lookup("so(2,7)").unwrap();
        assert_eq!(p.simple_roots, vec![vec![q(1), q(-1)], vec![q(0), q(1)]]);
        assert_eq!(p.mult, MultRule::ByLength { long: 1, short: 5, doubled: None });
    }
}

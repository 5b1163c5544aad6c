//! Dense two-phase simplex with Bland's rule, generic over the scalar field.
//!
//! Problems are small (tens of variables), so a dense tableau is fine. The
//! same code runs on `f64` with an absolute pivot tolerance and on
//! `BigRational` exactly.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

pub trait Field: Clone + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(x: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Sign with the field's zero tolerance.
    fn sign(&self) -> Ordering;
    fn cmp_val(&self, o: &Self) -> Ordering {
        self.sub(o).sign()
    }
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

/// Pivot tolerance for the float instance.
pub const F64_EPS: f64 = 1e-11;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(x: i64) -> Self {
        x as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if *self > F64_EPS {
            Ordering::Greater
        } else if *self < -F64_EPS {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(x: i64) -> Self {
        crate::rational::q(x)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// `maximize c·x` subject to linear rows; variables are `≥ 0` unless marked
/// free.
#[derive(Clone, Debug)]
pub struct Lp<F: Field> {
    n: usize,
    objective: Vec<F>,
    rows: Vec<(Vec<F>, Rel, F)>,
    free: Vec<bool>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome<F> {
    Optimal {
        x: Vec<F>,
        value: F,
    },
    Infeasible,
    /// `x` is feasible and `x + s·ray` stays feasible with objective
    /// increasing in `s`.
    Unbounded {
        x: Vec<F>,
        ray: Vec<F>,
    },
    IterationLimit,
}

impl<F: Field> LpOutcome<F> {
    pub fn optimal(&self) -> Option<(&[F], &F)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl<F: Field> Lp<F> {
    pub fn new(n: usize) -> Self {
        Lp { n, objective: vec![F::zero(); n], rows: Vec::new(), free: vec![false; n] }
    }

    pub fn maximize(mut self, c: Vec<F>) -> Self {
        assert_eq!(c.len(), self.n);
        self.objective = c;
        self
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn row(&mut self, a: Vec<F>, rel: Rel, b: F) {
        assert_eq!(a.len(), self.n);
        self.rows.push((a, rel, b));
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn solve(&self, max_iter: usize) -> LpOutcome<F> {
        // Column layout: split originals (x⁺ then x⁻ for free vars), slacks,
        // artificials.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.n);
        let mut ncols = 0;
        for _ in 0..self.n {
            col_of.push((ncols, None));
            ncols += 1;
        }
        for (col, &free) in col_of.iter_mut().zip(&self.free) {
            if free {
                col.1 = Some(ncols);
                ncols += 1;
            }
        }
        let m = self.rows.len();
        let mut slack_col = vec![None; m];
        for (i, (_, rel, _)) in self.rows.iter().enumerate() {
            if *rel != Rel::Eq {
                slack_col[i] = Some(ncols);
                ncols += 1;
            }
        }
        let n_before_art = ncols;

        let mut t: Vec<Vec<F>> = Vec::with_capacity(m);
        let mut basis = vec![usize::MAX; m];
        let mut art_cols = Vec::new();
        let mut needs_art = vec![false; m];
        for (i, (a, rel, b)) in self.rows.iter().enumerate() {
            let mut row = vec![F::zero(); ncols];
            for j in 0..self.n {
                row[col_of[j].0] = a[j].clone();
                if let Some(c) = col_of[j].1 {
                    row[c] = a[j].neg();
                }
            }
            match rel {
                Rel::Le => row[slack_col[i].unwrap()] = F::one(),
                Rel::Ge => row[slack_col[i].unwrap()] = F::one().neg(),
                Rel::Eq => {}
            }
            let mut rhs = b.clone();
            if rhs.sign() == Ordering::Less {
                for x in row.iter_mut() {
                    *x = x.neg();
                }
                rhs = rhs.neg();
            }
            // A slack with +1 after normalisation can start in the basis.
            match slack_col[i] {
                Some(s) if row[s].sign() == Ordering::Greater => basis[i] = s,
                _ => needs_art[i] = true,
            }
            row.push(rhs);
            t.push(row);
        }
        for i in 0..m {
            if needs_art[i] {
                let c = ncols;
                ncols += 1;
                art_cols.push(c);
                for (k, row) in t.iter_mut().enumerate() {
                    let rhs = row.pop().unwrap();
                    row.push(if k == i { F::one() } else { F::zero() });
                    row.push(rhs);
                }
                basis[i] = c;
            }
        }
        let mut tab = Tableau { t, basis, ncols, iters: 0, max_iter };

        if !art_cols.is_empty() {
            let mut c1 = vec![F::zero(); ncols];
            for &c in &art_cols {
                c1[c] = F::one().neg();
            }
            match tab.run(&c1, ncols) {
                Step::Optimal => {}
                Step::Unbounded(_) | Step::IterLimit => return LpOutcome::Infeasible,
            }
            if tab.objective_value(&c1).sign() == Ordering::Less {
                return LpOutcome::Infeasible;
            }
            // Drive remaining artificials out of the basis.
            let mut i = 0;
            while i < tab.t.len() {
                if tab.basis[i] >= n_before_art {
                    let pivot = (0..n_before_art).find(|&j| tab.t[i][j].sign() != Ordering::Equal);
                    match pivot {
                        Some(j) => tab.pivot(i, j),
                        None => {
                            tab.t.remove(i);
                            tab.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }

        let mut c2 = vec![F::zero(); ncols];
        for j in 0..self.n {
            c2[col_of[j].0] = self.objective[j].clone();
            if let Some(c) = col_of[j].1 {
                c2[c] = self.objective[j].neg();
            }
        }
        let step = tab.run(&c2, n_before_art);
        let extract = |vals: &dyn Fn(usize) -> F| -> Vec<F> {
            (0..self.n)
                .map(|j| {
                    let (p, mneg) = col_of[j];
                    match mneg {
                        Some(c) => vals(p).sub(&vals(c)),
                        None => vals(p),
                    }
                })
                .collect()
        };
        let primal = |tab: &Tableau<F>| -> Vec<F> {
            let mut v = vec![F::zero(); tab.ncols];
            for (i, &b) in tab.basis.iter().enumerate() {
                v[b] = tab.t[i][tab.ncols].clone();
            }
            v
        };
        match step {
            Step::IterLimit => LpOutcome::IterationLimit,
            Step::Optimal => {
                let v = primal(&tab);
                let x = extract(&|c| v[c].clone());
                let value = x.iter().zip(&self.objective).fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
                LpOutcome::Optimal { x, value }
            }
            Step::Unbounded(col) => {
                let v = primal(&tab);
                let mut d = vec![F::zero(); tab.ncols];
                d[col] = F::one();
                for (i, &b) in tab.basis.iter().enumerate() {
                    d[b] = tab.t[i][col].neg();
                }
                LpOutcome::Unbounded { x: extract(&|c| v[c].clone()), ray: extract(&|c| d[c].clone()) }
            }
        }
    }
}

enum Step {
    Optimal,
    Unbounded(usize),
    IterLimit,
}

struct Tableau<F> {
    t: Vec<Vec<F>>,
    basis: Vec<usize>,
    ncols: usize,
    iters: usize,
    max_iter: usize,
}

impl<F: Field> Tableau<F> {
    fn objective_value(&self, c: &[F]) -> F {
        self.basis.iter().enumerate().fold(F::zero(), |acc, (i, &b)| acc.add(&c[b].mul(&self.t[i][self.ncols])))
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for x in self.t[r].iter_mut() {
            *x = x.div(&p);
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.sign() == Ordering::Equal {
                row[c] = F::zero();
                continue;
            }
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = x.sub(&f.mul(y));
            }
            row[c] = F::zero();
        }
        self.basis[r] = c;
    }

    /// Maximises `c·x` over columns `< limit` with Bland's rule.
    fn run(&mut self, c: &[F], limit: usize) -> Step {
        loop {
            if self.iters >= self.max_iter {
                return Step::IterLimit;
            }
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let z = self.basis.iter().enumerate().fold(F::zero(), |acc, (i, &b)| acc.add(&c[b].mul(&self.t[i][j])));
                if c[j].sub(&z).sign() == Ordering::Greater {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return Step::Optimal };
            let mut leave: Option<(usize, F)> = None;
            for i in 0..self.t.len() {
                if self.t[i][j].sign() != Ordering::Greater {
                    continue;
                }
                let ratio = self.t[i][self.ncols].div(&self.t[i][j]);
                let better = match &leave {
                    None => true,
                    Some((k, best)) => match ratio.cmp_val(best) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*k],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else { return Step::Unbounded(j) };
            self.pivot(i, j);
            self.iters += 1;
        }
    }
}

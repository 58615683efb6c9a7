//! Dense row reduction over a `Field`: rank, null spaces, subspaces.

use crate::scalar::{Field, Scalar};

pub type Matrix<K> = Vec<Vec<K>>;

/// Pivot statistics of a reduction. On the exact backend `max_rejected` is always 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankDiagnostic {
    /// Smallest pivot magnitude that was accepted as nonzero.
    pub min_accepted: f64,
    /// Largest residual magnitude that was treated as zero.
    pub max_rejected: f64,
}

impl Default for RankDiagnostic {
    fn default() -> Self {
        RankDiagnostic { min_accepted: f64::INFINITY, max_rejected: 0.0 }
    }
}

impl RankDiagnostic {
    fn merge(&mut self, other: RankDiagnostic) {
        self.min_accepted = self.min_accepted.min(other.min_accepted);
        self.max_rejected = self.max_rejected.max(other.max_rejected);
    }

    /// Ratio between the weakest accepted pivot and the strongest rejected one.
    pub fn gap(&self) -> f64 {
        if self.max_rejected == 0.0 {
            f64::INFINITY
        } else {
            self.min_accepted / self.max_rejected
        }
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref<K> {
    pub rows: Matrix<K>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
    pub diagnostic: RankDiagnostic,
}

/// Row-reduce `m` (with `ncols` columns) using partial pivoting by magnitude.
pub fn rref<K: Field>(mut m: Matrix<K>, ncols: usize) -> Rref<K> {
    let mut pivots = Vec::new();
    let mut diag = RankDiagnostic::default();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            let x = &row[c];
            if x.is_zero() {
                diag.max_rejected = diag.max_rejected.max(x.magnitude());
                continue;
            }
            let w = x.magnitude();
            if best.map_or(true, |(_, bw)| w > bw) {
                best = Some((i, w));
            }
        }
        let Some((p, w)) = best else { continue };
        diag.min_accepted = diag.min_accepted.min(w);
        m.swap(r, p);
        let inv = K::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        m[r][c] = K::one();
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                if i != r {
                    row[c] = K::zero();
                }
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            row[c] = K::zero();
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Rref { rows: m, pivots, ncols, diagnostic: diag }
}

pub fn rank<K: Field>(m: &Matrix<K>, ncols: usize) -> usize {
    rref(m.clone(), ncols).pivots.len()
}

/// Basis of {x : m x = 0}.
pub fn nullspace<K: Field>(m: &Matrix<K>, ncols: usize) -> Vec<Vec<K>> {
    let red = rref(m.clone(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); ncols];
            v[f] = K::one();
            for (row, &pc) in red.rows.iter().zip(&red.pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some x with a x = b, if one exists.
pub fn solve<K: Field>(a: &Matrix<K>, b: &[K]) -> Option<Vec<K>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Matrix<K> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(aug, ncols + 1);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![K::zero(); ncols];
    for (row, &pc) in red.rows.iter().zip(&red.pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

pub fn identity<K: Field>(n: usize) -> Matrix<K> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { K::one() } else { K::zero() }).collect())
        .collect()
}

pub fn mat_mul<K: Field>(a: &Matrix<K>, b: &Matrix<K>) -> Matrix<K> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(K::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn mat_sub<K: Field>(a: &Matrix<K>, b: &Matrix<K>) -> Matrix<K> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.clone() - q.clone()).collect())
        .collect()
}

pub fn transpose<K: Field>(a: &Matrix<K>) -> Matrix<K> {
    let n = a.first().map_or(0, |r| r.len());
    (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_zero_matrix<K: Field>(a: &Matrix<K>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn inverse<K: Field>(a: &Matrix<K>) -> Option<Matrix<K>> {
    let n = a.len();
    let aug: Matrix<K> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { K::one() } else { K::zero() }));
            r
        })
        .collect();
    let red = rref(aug, 2 * n);
    if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Sylvester-style test via symmetric Gaussian elimination: all pivots positive.
/// Returns the index of the first non-positive leading pivot on failure.
pub fn positive_definite<S: Scalar>(a: &Matrix<S>) -> Result<(), usize> {
    let n = a.len();
    let mut m = a.clone();
    for k in 0..n {
        let p = m[k][k].clone();
        if !p.is_positive() {
            return Err(k);
        }
        for i in k + 1..n {
            let f = m[i][k].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = m[k][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    Ok(())
}

/// A subspace of K^n stored as a reduced row echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace<K> {
    ambient: usize,
    red: Rref<K>,
}

impl<K: Field> Subspace<K> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, red: rref(Vec::new(), ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, identity(ambient))
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<K>>) -> Self {
        Subspace { ambient, red: rref(vectors, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.red.pivots.len()
    }

    pub fn basis(&self) -> &[Vec<K>] {
        &self.red.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.red.pivots
    }

    pub fn diagnostic(&self) -> RankDiagnostic {
        self.red.diagnostic
    }

    /// Coordinates with respect to `basis()`, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        let coords: Vec<K> = self.red.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut res = v.to_vec();
        for (c, row) in coords.iter().zip(&self.red.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in res.iter_mut().zip(row) {
                *x = x.clone() - c.clone() * y.clone();
            }
        }
        res.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[K]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace<K>) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }

    pub fn same_as(&self, other: &Subspace<K>) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn join(&self, more: Vec<Vec<K>>) -> Self {
        let mut vs = self.red.rows.clone();
        vs.extend(more);
        let mut s = Subspace::span(self.ambient, vs);
        s.red.diagnostic.merge(self.red.diagnostic);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row.iter().zip(&ns[0]).fold(q(0), |a, (x, y)| a + x * y);
            assert_eq!(dot, q(0));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let x = solve(&a, &[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
        assert!(solve(&vec![vec![q(1), q(1)], vec![q(1), q(1)]], &[q(1), q(2)]).is_none());
    }

    #[test]
    fn subspace_membership() {
        let s = Subspace::span(3, vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[q(1), q(2), q(1)]));
        assert!(!s.contains(&[q(1), q(0), q(0)]));
        let c = s.coordinates(&[q(2), q(3), q(1)]).unwrap();
        assert_eq!(c.len(), 2);
        assert!(Subspace::zero(3).is_subspace_of(&s));
        assert!(s.is_subspace_of(&Subspace::full(3)));
    }

    #[test]
    fn definiteness() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(2)]];
        assert!(positive_definite(&a).is_ok());
        let b = vec![vec![q(1), q(2)], vec![q(2), q(1)]];
        assert_eq!(positive_definite(&b), Err(1));
    }
}

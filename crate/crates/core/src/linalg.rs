//! Row reduction, rank, null spaces and linear solves over an exact field.

use crate::expr::{Scalar, ScalarExpr};

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse of a nonzero element.
    fn inv(&self) -> Self;
    /// Pivot preference; lower is simpler.
    fn complexity(&self) -> usize;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
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
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Scalar::inv(self).expect("pivot is nonzero")
    }
    fn complexity(&self) -> usize {
        if self.is_one() {
            0
        } else {
            self.weight()
        }
    }
}

impl Field for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }
    fn one() -> Self {
        ScalarExpr::one()
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
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
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        ScalarExpr::inv(self).expect("pivot is nonzero")
    }
    fn complexity(&self) -> usize {
        ScalarExpr::complexity(self)
    }
}

/// Fully reduced row form: each pivot row has 1 at its pivot column and the pivot
/// columns are zero in every other row.
#[derive(Clone, Debug)]
pub struct Reduced<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

/// Gauss–Jordan elimination. Pivots are chosen by simplicity (constants first),
/// ties broken by lowest column then lowest row, so output is deterministic.
pub fn reduce<F: Field>(m: Vec<Vec<F>>, ncols: usize) -> Reduced<F> {
    let red = reduce_cols(m, ncols, ncols);
    // Present rows sorted by pivot column.
    let mut idx: Vec<usize> = (0..red.pivots.len()).collect();
    idx.sort_by_key(|&i| red.pivots[i]);
    Reduced {
        rows: idx.iter().map(|&i| red.rows[i].clone()).collect(),
        pivots: idx.iter().map(|&i| red.pivots[i]).collect(),
        ncols,
    }
}

impl<F: Field> Reduced<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Null-space basis, one vector per free column in increasing order, free entry 1.
    pub fn null_space(&self) -> Vec<Vec<F>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains(&f) {
                continue;
            }
            let mut v = vec![F::zero(); self.ncols];
            v[f] = F::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[f].is_zero() {
                    v[p] = row[f].neg();
                }
            }
            out.push(v);
        }
        out
    }

    /// Residual of `v` after reduction against the row space; zero iff `v` is in it.
    pub fn residual(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !row[j].is_zero() {
                    v[j] = v[j].sub(&f.mul(&row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.residual(v).iter().all(|x| x.is_zero())
    }
}

pub fn rank<F: Field>(m: Vec<Vec<F>>, ncols: usize) -> usize {
    reduce(m, ncols).rank()
}

pub fn null_space<F: Field>(m: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    reduce(m, ncols).null_space()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    /// Consistent with free unknowns; the particular solution sets them to 0.
    Underdetermined(Vec<F>, usize),
    Inconsistent,
}

/// Solves `a·x = b` for `ncols` unknowns.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], ncols: usize) -> Solution<F> {
    let aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // The augmented column never pivots unless a row reduces to 0 = c.
    let red = reduce_cols(aug, ncols + 1, ncols);
    if red.pivots.iter().any(|&p| p == ncols) {
        return Solution::Inconsistent;
    }
    let mut x = vec![F::zero(); ncols];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[ncols].clone();
    }
    if red.rank() == ncols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined(x, ncols - red.rank())
    }
}

/// Reduces on the first `pivotable` columns; a leftover nonzero row is reported with
/// pivot `pivotable`.
fn reduce_cols<F: Field>(m: Vec<Vec<F>>, total: usize, pivotable: usize) -> Reduced<F> {
    let mut m: Vec<Vec<F>> = m
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut done: Vec<Vec<F>> = Vec::new();
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for c in 0..pivotable {
            for (r, row) in m.iter().enumerate() {
                if row[c].is_zero() {
                    continue;
                }
                let cx = row[c].complexity();
                if best.is_none_or(|(bc, _, _)| cx < bc) {
                    best = Some((cx, c, r));
                }
            }
            if best.is_some_and(|(bc, _, _)| bc == 0) {
                break;
            }
        }
        let Some((_, c, r)) = best else { break };
        let mut prow = m.swap_remove(r);
        if prow[c] != F::one() {
            let inv = prow[c].inv();
            for x in prow.iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
        let nz: Vec<usize> = (0..total).filter(|&j| !prow[j].is_zero()).collect();
        for row in m.iter_mut().chain(done.iter_mut()) {
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                row[j] = row[j].sub(&f.mul(&prow[j]));
            }
        }
        m.retain(|row| row.iter().any(|x| !x.is_zero()));
        done.push(prow);
        pivots.push(c);
    }
    if let Some(row) = m.into_iter().find(|row| row.iter().any(|x| !x.is_zero())) {
        done.push(row);
        pivots.push(pivotable);
    }
    Reduced {
        rows: done,
        pivots,
        ncols: total,
    }
}

/// Numerical rank with partial pivoting and a relative tolerance.
pub fn float_rank(mut m: Vec<Vec<f64>>, ncols: usize) -> usize {
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(1.0);
    let tol = 1e-9 * scale;
    let mut rank = 0;
    for c in 0..ncols {
        let Some((r, _)) = m
            .iter()
            .enumerate()
            .skip(rank)
            .map(|(i, row)| (i, row[c].abs()))
            .filter(|(_, a)| *a > tol)
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            continue;
        };
        m.swap(rank, r);
        let p = m[rank][c];
        for i in rank + 1..m.len() {
            let f = m[i][c] / p;
            if f != 0.0 {
                for j in c..ncols {
                    m[i][j] -= f * m[rank][j];
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)], vec![s(0), s(1), s(1)]];
        let red = reduce(m.clone(), 3);
        assert_eq!(red.rank(), 2);
        let ns = red.null_space();
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(s(0), |a, (x, y)| &a + &(x * y));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solves() {
        let a = vec![vec![s(1), s(1)], vec![s(1), s(-1)]];
        assert_eq!(solve(&a, &[s(3), s(1)], 2), Solution::Unique(vec![s(2), s(1)]));
        let a = vec![vec![s(1), s(1)], vec![s(2), s(2)]];
        assert_eq!(solve(&a, &[s(1), s(3)], 2), Solution::Inconsistent);
    }

    #[test]
    fn symbolic_kernel() {
        // rows of dz − p dx and dt − q dy on (x, y, p, q, z, t)
        let p = ScalarExpr::coord(2);
        let q = ScalarExpr::coord(3);
        let (o, z) = (ScalarExpr::one(), ScalarExpr::zero());
        let m = vec![
            vec![-&p, z.clone(), z.clone(), z.clone(), o.clone(), z.clone()],
            vec![z.clone(), -&q, z.clone(), z.clone(), z.clone(), o.clone()],
        ];
        let ns = null_space(m, 6);
        assert_eq!(ns.len(), 4);
        assert_eq!(ns[0][4], p);
        assert_eq!(ns[1][5], q);
    }

    #[test]
    fn float_rank_tolerance() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-14]];
        assert_eq!(float_rank(m, 2), 1);
    }
}

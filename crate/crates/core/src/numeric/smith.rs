use num_integer::Integer;
use num_traits::Signed;

use super::matrix::Matrix;

/// `diagonal = left * input * right` with `left`, `right` unimodular and the diagonal
/// entries nonnegative with `d_1 | d_2 | ...` (zeros last).
#[derive(Debug, Clone)]
pub struct SmithForm<T> {
    pub left: Matrix<T>,
    pub right: Matrix<T>,
    pub diagonal: Matrix<T>,
}

impl<T: Clone + Integer + Signed> SmithForm<T> {
    /// Diagonal entries `d_1, ..., d_min(rows, cols)`.
    pub fn invariants(&self) -> Vec<T> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal[(i, i)].clone()).collect()
    }
}

/// Position of the smallest nonzero |entry| in the block `[t.., t..]`, ties broken by row then column.
fn pivot<T: Clone + Integer + Signed>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(T, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a[(i, j)].abs();
            if num_traits::Zero::is_zero(&v) {
                continue;
            }
            if best.as_ref().map_or(true, |(b, _, _)| v < *b) {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form<T: Clone + Integer + Signed>(m: &Matrix<T>) -> SmithForm<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = Matrix::identity(rows);
    let mut right = Matrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = pivot(&a, t) else {
                return SmithForm { left, right, diagonal: a };
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    let neg = -q;
                    a.add_row_multiple(i, t, &neg);
                    left.add_row_multiple(i, t, &neg);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    let neg = -q;
                    a.add_col_multiple(j, t, &neg);
                    right.add_col_multiple(j, t, &neg);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Enforce divisibility of the remaining block by the pivot.
            let p = a[(t, t)].clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    let one = T::one();
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    SmithForm { left, right, diagonal: a }
}

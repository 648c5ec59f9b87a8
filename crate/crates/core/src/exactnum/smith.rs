use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, its diagonal
/// forming a divisibility chain of nonnegative invariant factors.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub invariant_factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// Invariant factors `d1 | d2 | ...` (length `min(rows, cols)`, zeros last).
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    Smith::run(m, false).factors()
}

/// Smith normal form together with the unimodular transforms.
pub fn smith_decomposition(m: &IntMatrix) -> SmithDecomposition {
    let s = Smith::run(m, true);
    let invariant_factors = s.factors();
    let d = IntMatrix::diagonal(m.rows(), m.cols(), &invariant_factors);
    let u = IntMatrix::new(s.rows, s.rows, s.u.into_iter().flatten().collect()).expect("square");
    let v = IntMatrix::new(s.cols, s.cols, s.v.into_iter().flatten().collect()).expect("square");
    SmithDecomposition { invariant_factors, u, d, v }
}

struct Smith {
    rows: usize,
    cols: usize,
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    track: bool,
}

impl Smith {
    fn run(m: &IntMatrix, track: bool) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let ident = |n: usize| IntMatrix::identity(n).into_rows();
        let mut s = Smith {
            rows,
            cols,
            a: m.to_rows(),
            u: if track { ident(rows) } else { Vec::new() },
            v: if track { ident(cols) } else { Vec::new() },
            track,
        };
        for t in 0..rows.min(cols) {
            if !s.reduce_at(t) {
                break;
            }
        }
        s
    }

    fn factors(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.a[i][i].clone()).collect()
    }

    // Clears row and column `t` around a pivot that divides the remaining
    // block. Returns false when the remaining block is zero.
    fn reduce_at(&mut self, t: usize) -> bool {
        loop {
            let Some((pi, pj)) = self.least_entry(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..self.rows {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let q = self.a[i][t].div_floor(&self.a[t][t]);
                self.add_row_multiple(i, t, &-q);
                if !self.a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..self.cols {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let q = self.a[t][j].div_floor(&self.a[t][t]);
                self.add_col_multiple(j, t, &-q);
                if !self.a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = self.a[t][t].clone();
            let offender = (t + 1..self.rows)
                .find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => self.add_row_multiple(t, i, &BigInt::from(1)),
                None => {
                    if pivot.is_negative() {
                        self.negate_row(t);
                    }
                    return true;
                }
            }
        }
    }

    fn least_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = &self.a[i][j];
                if v.is_zero() {
                    continue;
                }
                let abs = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| &abs < b) {
                    best = Some((i, j, abs));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            self.a.swap(i, k);
            if self.track {
                self.u.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in &mut self.a {
            row.swap(j, k);
        }
        if self.track {
            for row in &mut self.v {
                row.swap(j, k);
            }
        }
    }

    // row_i += q * row_k
    fn add_row_multiple(&mut self, i: usize, k: usize, q: &BigInt) {
        let (src, dst) = borrow_two(&mut self.a, k, i);
        axpy(dst, src, q);
        if self.track {
            let (src, dst) = borrow_two(&mut self.u, k, i);
            axpy(dst, src, q);
        }
    }

    // col_j += q * col_k
    fn add_col_multiple(&mut self, j: usize, k: usize, q: &BigInt) {
        for row in &mut self.a {
            let add = &row[k] * q;
            row[j] += add;
        }
        if self.track {
            for row in &mut self.v {
                let add = &row[k] * q;
                row[j] += add;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if self.track {
            for x in &mut self.u[i] {
                *x = -&*x;
            }
        }
    }
}

fn borrow_two<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = v.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn axpy(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += s * q;
        }
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal entries `d_1, d_2, …` (nonnegative).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

pub(crate) fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

#[cfg(test)]
pub(crate) fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut c = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    c[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    c
}

// Row op on M and U: row_i += f·row_j.
fn add_row(m: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize, f: &BigInt) {
    for c in 0..m[0].len() {
        let x = &m[j][c] * f;
        m[i][c] += x;
    }
    for c in 0..u[0].len() {
        let x = &u[j][c] * f;
        u[i][c] += x;
    }
}

fn add_col(m: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize, f: &BigInt) {
    for r in 0..m.len() {
        let x = &m[r][j] * f;
        m[r][i] += x;
    }
    for r in 0..v.len() {
        let x = &v[r][j] * f;
        v[r][i] += x;
    }
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith_normal_form(mat: &IntMatrix) -> SmithDecomposition {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut m = mat.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    if rows == 0 || cols == 0 {
        return SmithDecomposition { u, d: m, v };
    }
    let mut k = 0;
    while k < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(k, pi);
        u.swap(k, pi);
        for r in m.iter_mut() {
            r.swap(k, pj);
        }
        for r in v.iter_mut() {
            r.swap(k, pj);
        }
        let mut done = false;
        while !done {
            done = true;
            for i in k + 1..rows {
                if !m[i][k].is_zero() {
                    let f = -m[i][k].div_floor(&m[k][k]);
                    add_row(&mut m, &mut u, i, k, &f);
                    if !m[i][k].is_zero() {
                        // Remainder is smaller than the pivot: swap it in.
                        m.swap(k, i);
                        u.swap(k, i);
                        done = false;
                    }
                }
            }
            for j in k + 1..cols {
                if !m[k][j].is_zero() {
                    let f = -m[k][j].div_floor(&m[k][k]);
                    add_col(&mut m, &mut v, j, k, &f);
                    if !m[k][j].is_zero() {
                        for r in m.iter_mut() {
                            r.swap(k, j);
                        }
                        for r in v.iter_mut() {
                            r.swap(k, j);
                        }
                        done = false;
                    }
                }
            }
            if done {
                // Divisibility: pull in any entry the pivot does not divide.
                'outer: for i in k + 1..rows {
                    for j in k + 1..cols {
                        if !m[i][j].is_multiple_of(&m[k][k]) {
                            let one = BigInt::one();
                            add_row(&mut m, &mut u, k, i, &one);
                            done = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if m[k][k].is_negative() {
            for c in 0..cols {
                m[k][c] = -m[k][c].clone();
            }
            for c in 0..rows {
                u[k][c] = -u[k][c].clone();
            }
        }
        k += 1;
    }
    SmithDecomposition { u, d: m, v }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub(crate) fn determinant(mat: &IntMatrix) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = mat.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = x / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

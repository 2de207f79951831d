//! Dense exact linear algebra over Z and Q used by the lattice layer.

use num::{Integer, One, Signed, Zero};

use crate::arith::{Int, Rat};

pub(crate) fn to_rat_matrix(m: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

/// Rank over Q of the row vectors.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    row_echelon(rows.to_vec()).len()
}

fn row_echelon(mut rows: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for col in 0..ncols {
        let Some(p) = rows.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let pivot_row = rows.swap_remove(p);
        for r in rows.iter_mut() {
            if !r[col].is_zero() {
                let f = &r[col] / &pivot_row[col];
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        out.push(pivot_row);
    }
    out
}

/// Coefficients `c` with `sum c_i basis_i = target`, if `target` lies in the
/// rational span. `basis` must be linearly independent.
pub fn solve_in_span(basis: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let k = basis.len();
    let n = target.len();
    // Augmented system: columns are basis vectors, last column the target.
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..n).find(|&i| !m[i][col].is_zero()) else {
            return None;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| m[r][k].clone()).collect())
}

/// Inertia `(positive, negative, null)` of a symmetric rational matrix by
/// congruence elimination.
pub fn inertia(gram: &[Vec<Rat>]) -> (usize, usize, usize) {
    let n = gram.len();
    let mut a = gram.to_vec();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, i, k);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // Row/column i += row/column j makes the (i,i) entry 2 a_ij.
            for c in 0..n {
                let t = a[j][c].clone();
                a[i][c] += t;
            }
            for r in 0..n {
                let t = a[r][j].clone();
                a[r][i] += t;
            }
            swap_sym(&mut a, i, k);
        } else {
            break;
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        for i in k + 1..n {
            a[i][k] = Rat::zero();
            a[k][i] = Rat::zero();
        }
    }
    (pos, neg, n - pos - neg)
}

fn swap_sym(a: &mut [Vec<Rat>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// `Q = L D L^T` for a positive definite `Q`, with `L` unit lower triangular.
/// Returns `None` if some pivot is not positive.
pub fn ldl_positive(q: &[Vec<Rat>]) -> Option<(Vec<Vec<Rat>>, Vec<Rat>)> {
    let n = q.len();
    let mut l = vec![vec![Rat::zero(); n]; n];
    let mut d = vec![Rat::zero(); n];
    for j in 0..n {
        let mut dj = q[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return None;
        }
        l[j][j] = Rat::one();
        for i in j + 1..n {
            let mut s = q[i][j].clone();
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = s / &dj;
        }
        d[j] = dj;
    }
    Some((l, d))
}

/// Basis of `{x in Z^ncols : A x = 0}` in row Hermite normal form. The basis
/// comes from a unimodular column transform, so the kernel is saturated.
pub fn integer_kernel(a: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let mut a = a.to_vec();
    // Columns of `u` are tracked; u[row][col].
    let mut u: Vec<Vec<Int>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == ncols {
            break;
        }
        loop {
            let Some(cmin) = (pivot..ncols)
                .filter(|&c| !a[r][c].is_zero())
                .min_by(|&x, &y| a[r][x].abs().cmp(&a[r][y].abs()))
            else {
                break;
            };
            swap_cols(&mut a, cmin, pivot);
            swap_cols(&mut u, cmin, pivot);
            let mut clean = true;
            for c in pivot + 1..ncols {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[r][pivot]);
                sub_col_multiple(&mut a, c, pivot, &q);
                sub_col_multiple(&mut u, c, pivot, &q);
                if !a[r][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                pivot += 1;
                break;
            }
        }
    }
    let kernel: Vec<Vec<Int>> = (pivot..ncols)
        .map(|c| u.iter().map(|row| row[c].clone()).collect())
        .collect();
    hermite_rows(kernel)
}

fn swap_cols(m: &mut [Vec<Int>], i: usize, j: usize) {
    if i != j {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn sub_col_multiple(m: &mut [Vec<Int>], target: usize, source: usize, q: &Int) {
    for row in m.iter_mut() {
        let t = &row[source] * q;
        row[target] -= t;
    }
}

/// Row Hermite normal form of the Z-span of `rows`; zero rows are dropped.
/// Pivots are positive and entries above each pivot lie in `[0, pivot)`.
pub fn hermite_rows(mut rows: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut p = 0;
    for col in 0..ncols {
        if p == rows.len() {
            break;
        }
        loop {
            let Some(rmin) = (p..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&x, &y| rows[x][col].abs().cmp(&rows[y][col].abs()))
            else {
                break;
            };
            rows.swap(rmin, p);
            let mut clean = true;
            for r in p + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[p][col]);
                let pivot_row = rows[p].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[r][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if rows[p][col].is_negative() {
                    for x in rows[p].iter_mut() {
                        *x = -&*x;
                    }
                }
                let pivot_row = rows[p].clone();
                for r in 0..p {
                    let q = rows[r][col].div_floor(&pivot_row[col]);
                    if !q.is_zero() {
                        for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                            *x -= &q * y;
                        }
                    }
                }
                p += 1;
                break;
            }
        }
    }
    rows.truncate(p);
    rows
}

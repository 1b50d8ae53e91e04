//! Exact integer and rational linear algebra: Hermite normal forms, integer
//! kernels, fraction-free ranks and small dense solves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the canonical basis: row echelon with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hnf_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        if pivot_row >= m.len() {
            break;
        }
        // Euclidean elimination in this column below pivot_row.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m.len() {
                if !m[r][col].is_zero() {
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if m[r][col].abs() < m[b][col].abs() {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            if m[pivot_row][col].is_negative() {
                for v in m[pivot_row].iter_mut() {
                    *v = -&*v;
                }
            }
            let mut done = true;
            let piv = m[pivot_row][col].clone();
            for r in pivot_row + 1..m.len() {
                if !m[r][col].is_zero() {
                    let q = quotient_floor(&m[r][col], &piv);
                    if !q.is_zero() {
                        for c in 0..ncols {
                            let sub = &q * &m[pivot_row][c];
                            m[r][c] -= sub;
                        }
                    }
                    if !m[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !m[pivot_row][col].is_zero() {
            // Reduce entries above the pivot.
            let piv = m[pivot_row][col].clone();
            for r in 0..pivot_row {
                let q = quotient_floor(&m[r][col], &piv);
                if !q.is_zero() {
                    for c in 0..ncols {
                        let sub = &q * &m[pivot_row][c];
                        m[r][c] -= sub;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    m
}

fn quotient_floor(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

/// Whether `v` lies in the integer span of `basis` (vectors over Z).
pub fn in_integer_span(v: &[BigInt], basis: &[Vec<BigInt>]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let h = hnf_rows(basis);
    let mut extended: Vec<Vec<BigInt>> = h.clone();
    extended.push(v.to_vec());
    let h2 = hnf_rows(&extended);
    h == h2
}

/// A basis of the integer kernel `{ u : M u = 0 }` of a `d x e` matrix,
/// given as `d` rows of length `e`.
pub fn integer_kernel(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = rows.len();
    let e = if d == 0 { 0 } else { rows[0].len() };
    // Column HNF with transformation: M * U, kernel = columns of U mapping to 0.
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..e)
        .map(|i| {
            (0..e)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect(); // u[i] = row i of U; columns act as coordinates
    let col = |m: &Vec<Vec<BigInt>>, j: usize| -> Vec<BigInt> { m.iter().map(|r| r[j].clone()).collect() };
    let _ = col;
    let mut pivot_col = 0usize;
    for row in 0..d {
        if pivot_col >= e {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in pivot_col..e {
                if !m[row][c].is_zero() {
                    match best {
                        None => best = Some(c),
                        Some(b) => {
                            if m[row][c].abs() < m[row][b].abs() {
                                best = Some(c);
                            }
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            swap_cols(&mut m, pivot_col, b);
            swap_cols(&mut u, pivot_col, b);
            if m[row][pivot_col].is_negative() {
                negate_col(&mut m, pivot_col);
                negate_col(&mut u, pivot_col);
            }
            let piv = m[row][pivot_col].clone();
            let mut done = true;
            for c in pivot_col + 1..e {
                if !m[row][c].is_zero() {
                    let q = quotient_floor(&m[row][c], &piv);
                    if !q.is_zero() {
                        sub_col(&mut m, c, pivot_col, &q);
                        sub_col(&mut u, c, pivot_col, &q);
                    }
                    if !m[row][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !m[row][pivot_col].is_zero() {
            pivot_col += 1;
        }
    }
    // Columns pivot_col..e of M are zero; corresponding columns of U form the kernel.
    let mut kernel = Vec::new();
    for c in pivot_col..e {
        debug_assert!(m.iter().all(|r| r[c].is_zero()));
        kernel.push(u.iter().map(|r| r[c].clone()).collect());
    }
    kernel
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for r in m.iter_mut() {
        r.swap(a, b);
    }
}

fn negate_col(m: &mut [Vec<BigInt>], c: usize) {
    for r in m.iter_mut() {
        r[c] = -&r[c];
    }
}

fn sub_col(m: &mut [Vec<BigInt>], c: usize, from: usize, q: &BigInt) {
    for r in m.iter_mut() {
        let sub = q * &r[from];
        r[c] -= sub;
    }
}

/// Rank of an integer matrix via fraction-free (Bareiss) elimination.
pub fn rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank >= nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank][col].clone();
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = &piv * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Rank of a matrix over the prime field F_p (entries already reduced).
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0usize;
    for col in 0..ncols {
        if rank >= nrows {
            break;
        }
        let Some(pr) = (rank..nrows).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = mod_inv(m[rank][col] % p, p);
        for c in col..ncols {
            m[rank][c] = (m[rank][c] as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..nrows {
            if r != rank && m[r][col] % p != 0 {
                let f = m[r][col] % p;
                for c in col..ncols {
                    let sub = (f as u128 * m[rank][c] as u128) % p as u128;
                    m[r][c] = ((m[r][c] as u128 + p as u128 - sub) % p as u128) as u64;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

pub fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b: u128 = (base % p) as u128;
    base = 0;
    let _ = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Solve the square rational system `A x = b` by Gaussian elimination.
/// Returns `None` if `A` is singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let sub = &f * &m[col][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Whether `target` lies in the column span of `cols` over the rationals.
pub fn in_rational_colspace(cols: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    if target.iter().all(|x| x.is_zero()) {
        return true;
    }
    let nrows = target.len();
    let ncols = cols.len();
    // Augmented elimination: rank(cols) == rank(cols | target).
    let mut m: Vec<Vec<BigRational>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..ncols).map(|c| cols[c][r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut rank_a = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank_a..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank_a, p);
        let piv = m[rank_a][col].clone();
        for r in 0..nrows {
            if r != rank_a && !m[r][col].is_zero() {
                let f = &m[r][col] / &piv;
                for c in col..=ncols {
                    let sub = &f * &m[rank_a][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        rank_a += 1;
    }
    // Consistent iff no row reduces to (0 .. 0 | nonzero).
    m.iter()
        .all(|row| !row[..ncols].iter().all(|x| x.is_zero()) || row[ncols].is_zero())
}

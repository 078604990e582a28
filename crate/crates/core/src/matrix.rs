//! Exact integer and rational linear algebra: row Hermite normal form with
//! transform, lattice membership solves, kernel bases, and unimodular
//! completions. Everything is over `BigInt`/`BigRational`; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IMat = Vec<Vec<BigInt>>;

pub fn to_bigint_matrix(rows: &[Vec<i64>]) -> IMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Result of a row Hermite reduction `U * M = H` with `U` unimodular.
///
/// `h` is in row echelon form: the first `rank` rows are nonzero, each pivot
/// is positive, entries above a pivot are reduced into `[0, pivot)`, and
/// `pivots[r]` is the pivot column of row `r`.
pub struct Hnf {
    pub h: IMat,
    pub transform: IMat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn row_hnf(m: &IMat) -> Hnf {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut pivots = Vec::new();
    let mut pr = 0usize;

    for pc in 0..cols {
        // find a row at or below pr with a nonzero entry in column pc
        let mut found = None;
        for r in pr..rows {
            if !h[r][pc].is_zero() {
                found = Some(r);
                break;
            }
        }
        let Some(r0) = found else { continue };
        h.swap(pr, r0);
        u.swap(pr, r0);

        for r in pr + 1..rows {
            if h[r][pc].is_zero() {
                continue;
            }
            let a = h[pr][pc].clone();
            let b = h[r][pc].clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let a_g = &a / &g;
            let b_g = &b / &g;
            // rows (pr, r) <- (x*pr + y*r, -b/g*pr + a/g*r); det = 1
            for mat in [&mut h, &mut u] {
                for c in 0..mat[pr].len() {
                    let top = &x * &mat[pr][c] + &y * &mat[r][c];
                    let bot = -&b_g * &mat[pr][c] + &a_g * &mat[r][c];
                    mat[pr][c] = top;
                    mat[r][c] = bot;
                }
            }
        }
        if h[pr][pc].is_negative() {
            for c in 0..cols {
                h[pr][c] = -h[pr][c].clone();
            }
            for c in 0..rows {
                u[pr][c] = -u[pr][c].clone();
            }
        }
        // reduce entries above the pivot into [0, pivot)
        let piv = h[pr][pc].clone();
        for r in 0..pr {
            if h[r][pc].is_zero() {
                continue;
            }
            let q = h[r][pc].div_floor(&piv);
            if q.is_zero() {
                continue;
            }
            for c in 0..cols {
                let s = &h[pr][c] * &q;
                h[r][c] -= s;
            }
            for c in 0..rows {
                let s = &u[pr][c] * &q;
                u[r][c] -= s;
            }
        }
        pivots.push(pc);
        pr += 1;
        if pr == rows {
            break;
        }
    }

    Hnf {
        h,
        transform: u,
        rank: pr,
        pivots,
    }
}

/// Express `v` as an integer combination of the first `rank` rows of the
/// echelon basis `h`. Returns the coefficients, or `None` if `v` is outside
/// the row lattice.
pub fn solve_in_row_lattice(hnf: &Hnf, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem: Vec<BigInt> = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); hnf.rank];
    for r in 0..hnf.rank {
        let pc = hnf.pivots[r];
        if rem[pc].is_zero() {
            continue;
        }
        let piv = &hnf.h[r][pc];
        let (q, rq) = rem[pc].div_rem(piv);
        if !rq.is_zero() {
            return None;
        }
        for c in 0..rem.len() {
            let s = &hnf.h[r][c] * &q;
            rem[c] -= s;
        }
        coeffs[r] = q;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

/// Basis of the left kernel `{ x : x * m = 0 }`, canonicalized by a second
/// Hermite reduction (pivots positive, rows lex-reduced).
pub fn left_kernel_basis(m: &IMat) -> IMat {
    let hnf = row_hnf(m);
    let rows = m.len();
    let raw: IMat = (hnf.rank..rows).map(|r| hnf.transform[r].clone()).collect();
    if raw.is_empty() {
        return raw;
    }
    let canon = row_hnf(&raw);
    (0..canon.rank).map(|r| canon.h[r].clone()).collect()
}

pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    g
}

/// Divide by the content and orient so the first nonzero entry is positive.
pub fn primitive_normalize(v: &mut [BigInt]) {
    let g = content(v);
    if g.is_zero() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve `m * x = b` over the integers via a column-style Hermite form.
/// Complete: returns a solution whenever one exists.
pub fn solve_integer_columns(m: &IMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    // transpose, row-reduce, and read the result as column operations on m
    let mt: IMat = (0..cols)
        .map(|c| (0..rows).map(|r| m[r][c].clone()).collect())
        .collect();
    let hnf = row_hnf(&mt);
    // m * U^T = H^T, columns of H^T are rows of hnf.h
    // solve H^T y = b by going through pivots
    let mut rem = b.to_vec();
    let mut y = vec![BigInt::zero(); cols];
    for r in 0..hnf.rank {
        let pr = hnf.pivots[r]; // pivot row index inside H^T
        if rem[pr].is_zero() {
            continue;
        }
        let piv = &hnf.h[r][pr];
        let (q, rq) = rem[pr].div_rem(piv);
        if !rq.is_zero() {
            return None;
        }
        for i in 0..rows {
            let s = &hnf.h[r][i] * &q;
            rem[i] -= s;
        }
        y[r] = q;
    }
    if !rem.iter().all(|x| x.is_zero()) {
        return None;
    }
    // x = U^T y
    let mut x = vec![BigInt::zero(); cols];
    for c in 0..cols {
        for r in 0..cols {
            let s = &hnf.transform[r][c] * &y[r];
            x[c] += s;
        }
    }
    Some(x)
}

/// Exact inverse of a rational matrix by Gauss-Jordan elimination.
pub fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= p.clone();
            inv[col][c] /= p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let s = a[col][c].clone() * f.clone();
                a[r][c] -= s;
                let s = inv[col][c].clone() * f.clone();
                inv[r][c] -= s;
            }
        }
    }
    Some(inv)
}

/// Complete a primitive covector `c` to a unimodular matrix whose **last row
/// is `c`**. Fails when `gcd(c) != 1`.
pub fn unimodular_with_last_row(c: &[BigInt]) -> Result<IMat> {
    let n = c.len();
    let g = content(c);
    if g != BigInt::one() {
        return Err(Error::InvalidConfig(format!(
            "covector has content {g}, cannot complete to a unimodular matrix"
        )));
    }
    // Row-reduce the n x 1 matrix c^T: U c^T = (1, 0, ..)^T, so c * U^T = e_1.
    let col: IMat = c.iter().map(|x| vec![x.clone()]).collect();
    let hnf = row_hnf(&col);
    let u = hnf.transform;
    // W = U^T satisfies c W = e_1, hence the first row of W^{-1} is c.
    let w: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(u[j][i].clone()))
                .collect()
        })
        .collect();
    let winv = rational_inverse(&w).ok_or_else(|| {
        Error::InvalidConfig("unimodular completion produced a singular matrix".into())
    })?;
    let mut t: IMat = Vec::with_capacity(n);
    for i in 1..n {
        t.push(
            winv[i]
                .iter()
                .map(|q| {
                    debug_assert!(q.is_integer());
                    q.to_integer()
                })
                .collect(),
        );
    }
    t.push(
        winv[0]
            .iter()
            .map(|q| {
                debug_assert!(q.is_integer());
                q.to_integer()
            })
            .collect(),
    );
    debug_assert_eq!(&t[n - 1], &c.to_vec());
    Ok(t)
}

pub fn mat_vec(m: &IMat, v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| dot(row, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_of_simple_lattice() {
        let m = to_bigint_matrix(&[vec![2, 0], vec![0, 3], vec![1, 1]]);
        let hnf = row_hnf(&m);
        assert_eq!(hnf.rank, 2);
        // lattice generated is all of Z^2: gcd structure (2,0),(0,3),(1,1)
        assert_eq!(hnf.h[0], bi(&[1, 0]));
        assert_eq!(hnf.h[1], bi(&[0, 1]));
        // transform really maps m to h
        for r in 0..hnf.rank {
            let mut acc = vec![BigInt::zero(); 2];
            for k in 0..3 {
                for c in 0..2 {
                    let s = &hnf.transform[r][k] * &m[k][c];
                    acc[c] += s;
                }
            }
            assert_eq!(acc, hnf.h[r]);
        }
    }

    #[test]
    fn solve_row_lattice_membership() {
        let m = to_bigint_matrix(&[vec![2, 0, 0], vec![0, 2, 0]]);
        let hnf = row_hnf(&m);
        assert!(solve_in_row_lattice(&hnf, &bi(&[4, 6, 0])).is_some());
        assert!(solve_in_row_lattice(&hnf, &bi(&[1, 0, 0])).is_none());
        assert!(solve_in_row_lattice(&hnf, &bi(&[0, 0, 1])).is_none());
    }

    #[test]
    fn kernel_basis_of_rank_deficient_matrix() {
        // rows r1, r2, r3 with r3 = r1 + r2
        let m = to_bigint_matrix(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let ker = left_kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        let mut acc = vec![BigInt::zero(); 2];
        for (i, row) in m.iter().enumerate() {
            for c in 0..2 {
                let s = &k[i] * &row[c];
                acc[c] += s;
            }
        }
        assert!(acc.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn integer_column_solve() {
        // find c with a_j . c = 1 for the points on u1 + 2 u2 = 1
        let m = to_bigint_matrix(&[vec![1, 0], vec![3, -1], vec![-1, 1]]);
        let b = bi(&[1, 1, 1]);
        let c = solve_integer_columns(&m, &b).unwrap();
        assert_eq!(c, bi(&[1, 2]));
        // infeasible right-hand side
        let m2 = to_bigint_matrix(&[vec![2]]);
        assert!(solve_integer_columns(&m2, &bi(&[1])).is_none());
    }

    #[test]
    fn unimodular_completion_has_last_row_c() {
        let c = bi(&[1, 2]);
        let t = unimodular_with_last_row(&c).unwrap();
        assert_eq!(t[1], c);
        // determinant +-1 via rational inverse round-trip
        let tq: Vec<Vec<BigRational>> = t
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let inv = rational_inverse(&tq).unwrap();
        assert!(inv.iter().flatten().all(|q| q.is_integer()));
    }
}

//! Exact rational vectors and matrices, plus integer Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type QVec = Vec<Q>;
/// Row-major matrix.
pub type QMat = Vec<QVec>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qv(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Q::zero(); n]
}

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[Q]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn sum(vs: &[QVec], n: usize) -> QVec {
    vs.iter().fold(zeros(n), |acc, v| add(&acc, v))
}

pub fn is_integral(a: &[Q]) -> bool {
    a.iter().all(|x| x.is_integer())
}

pub fn mat_vec(m: &QMat, v: &[Q]) -> QVec {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose(m: &QMat, ncols: usize) -> QMat {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// `a * b` where `b` has `bcols` columns.
pub fn mat_mul(a: &QMat, b: &QMat, bcols: usize) -> QMat {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| row.iter().zip(b).fold(Q::zero(), |acc, (x, br)| acc + x * &br[j]))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(m: &QMat, ncols: usize) -> (QMat, Vec<usize>) {
    let mut a: QMat = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &QMat, ncols: usize) -> usize {
    rref(m, ncols).1.len()
}

pub fn rank_of(vs: &[QVec]) -> usize {
    match vs.first() {
        None => 0,
        Some(v) => rank(&vs.to_vec(), v.len()),
    }
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &QMat, ncols: usize) -> Vec<QVec> {
    let (r, piv) = rref(m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zeros(ncols);
            x[f] = Q::one();
            for (i, &p) in piv.iter().enumerate() {
                x[p] = -r[i][f].clone();
            }
            x
        })
        .collect()
}

/// Some solution of `m x = b`, if one exists.
pub fn solve(m: &QMat, b: &[Q], ncols: usize) -> Option<QVec> {
    let aug: QMat = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug, ncols + 1);
    if piv.contains(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (i, &p) in piv.iter().enumerate() {
        x[p] = r[i][ncols].clone();
    }
    Some(x)
}

/// Coefficients expressing `v` in terms of `vs`, if `v` lies in their span.
pub fn span_coefficients(vs: &[QVec], v: &[Q]) -> Option<QVec> {
    if vs.is_empty() {
        return if is_zero(v) { Some(vec![]) } else { None };
    }
    let cols = transpose(&vs.to_vec(), v.len());
    solve(&cols, v, vs.len())
}

pub fn in_span(vs: &[QVec], v: &[Q]) -> bool {
    span_coefficients(vs, v).is_some()
}

pub fn det(m: &QMat) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    if n == 0 {
        return Some(vec![]);
    }
    let aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit(n, i));
            r
        })
        .collect();
    let (r, piv) = rref(&aug, 2 * n);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of the row space, in echelon form.
pub fn row_basis(vs: &[QVec], ncols: usize) -> Vec<QVec> {
    rref(&vs.to_vec(), ncols).0
}

/// Scale to a primitive integral vector pointing the same way. Zero stays zero.
pub fn primitive(v: &[Q]) -> QVec {
    if is_zero(v) {
        return v.to_vec();
    }
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// The positive rational `c` with `v = c * primitive(v)`.
pub fn lattice_length(v: &[Q]) -> Q {
    let p = primitive(v);
    let i = p.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    &v[i] / &p[i]
}

pub fn to_int(x: &Q) -> BigInt {
    assert!(x.is_integer(), "expected integer, got {x}");
    x.to_integer()
}

pub fn to_i64(x: &Q) -> i64 {
    to_int(x).to_i64().expect("integer fits in i64")
}

pub fn lex_cmp(a: &[Q], b: &[Q]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// Integer Smith normal form: returns `(d, u, uinv)` with `u * m * v = diag(d)` and
/// `uinv = u^{-1}`. Entries of `d` are nonnegative, nonzero ones first, each dividing the next.
pub fn smith(m: &[Vec<BigInt>], ncols: usize) -> (Vec<BigInt>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let nrows = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let ident = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    };
    let mut u = ident(nrows);
    let mut uinv = ident(nrows);
    // row op: row_i += k * row_j   (u same, uinv: col_j -= k * col_i)
    fn row_add(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], uinv: &mut [Vec<BigInt>], i: usize, j: usize, k: &BigInt) {
        for c in 0..a[0].len() {
            let t = &a[j][c] * k;
            a[i][c] += t;
        }
        for c in 0..u[0].len() {
            let t = &u[j][c] * k;
            u[i][c] += t;
        }
        for row in uinv.iter_mut() {
            let t = &row[i] * k;
            row[j] -= t;
        }
    }
    fn row_swap(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], uinv: &mut [Vec<BigInt>], i: usize, j: usize) {
        a.swap(i, j);
        u.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn row_neg(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], uinv: &mut [Vec<BigInt>], i: usize) {
        for x in a[i].iter_mut() {
            *x = -x.clone();
        }
        for x in u[i].iter_mut() {
            *x = -x.clone();
        }
        for row in uinv.iter_mut() {
            row[i] = -row[i].clone();
        }
    }
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap(&mut a, &mut u, &mut uinv, t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            if !a[i][t].is_zero() {
                let k = -(a[i][t].div_floor(&a[t][t]));
                row_add(&mut a, &mut u, &mut uinv, i, t, &k);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..ncols {
            if !a[t][j].is_zero() {
                let k = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let s = &row[t] * &k;
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility of the rest of the block
        let mut bad = None;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    bad = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad {
            row_add(&mut a, &mut u, &mut uinv, t, i, &BigInt::one());
            continue;
        }
        if a[t][t].is_negative() {
            row_neg(&mut a, &mut u, &mut uinv, t);
        }
        t += 1;
    }
    let d = (0..nrows.min(ncols)).map(|i| a[i][i].clone()).collect();
    (d, u, uinv)
}

pub fn to_int_mat(m: &QMat) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(to_int).collect()).collect()
}

/// Columns of `cols` (given as vectors) generate a sublattice of `Z^n`; returns a basis of
/// its saturation `span_Q ∩ Z^n`.
pub fn saturation_basis(cols: &[QVec], n: usize) -> Vec<QVec> {
    if cols.is_empty() {
        return vec![];
    }
    let m: QMat = transpose(&cols.to_vec(), n);
    let (d, _u, uinv) = smith(&to_int_mat(&m), cols.len());
    let r = d.iter().filter(|x| !x.is_zero()).count();
    (0..r)
        .map(|j| (0..n).map(|i| Q::from_integer(uinv[i][j].clone())).collect())
        .collect()
}

/// Index of the lattice generated by integral `cols` inside its saturation in `Z^n`.
pub fn index_in_saturation(cols: &[QVec], n: usize) -> BigInt {
    if cols.is_empty() {
        return BigInt::one();
    }
    let m: QMat = transpose(&cols.to_vec(), n);
    let (d, _, _) = smith(&to_int_mat(&m), cols.len());
    d.iter().filter(|x| !x.is_zero()).fold(BigInt::one(), |acc, x| acc * x)
}

/// Basis (as columns) of the full-rank lattice in `Q^n` generated by rational vectors `gens`.
pub fn lattice_basis(gens: &[QVec], n: usize) -> Vec<QVec> {
    let d = gens.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let dq = Q::from_integer(d);
    let scaled: Vec<QVec> = gens.iter().map(|g| scale(&dq, g)).collect();
    let m: QMat = transpose(&scaled, n);
    let (diag, _u, uinv) = smith(&to_int_mat(&m), gens.len());
    diag.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (0..n).map(|i| Q::from_integer(&uinv[i][j] * x) / &dq).collect())
        .collect()
}

/// Dual basis: columns of `B^{-T}` for a basis given as columns.
pub fn dual_basis(basis: &[QVec], n: usize) -> Vec<QVec> {
    let b = transpose(&basis.to_vec(), n); // rows i, cols j: b[i][j] = basis[j][i]
    let inv = inverse(&b).expect("full-rank lattice");
    // columns of inv^T are rows of inv
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_empty_and_singular() {
        assert_eq!(inverse(&vec![]), Some(vec![]));
        assert_eq!(inverse(&vec![qv(&[1, 2]), qv(&[2, 4])]), None);
        assert_eq!(inverse(&vec![qv(&[2, 0]), qv(&[0, 4])]), Some(vec![vec![qr(1, 2), q(0)], vec![q(0), qr(1, 4)]]));
    }

    #[test]
    fn smith_of_diag() {
        let m = to_int_mat(&vec![qv(&[2, 0]), qv(&[0, 3])]);
        let (d, _, _) = smith(&m, 2);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn smith_transform_is_consistent() {
        let m = vec![qv(&[2, 4, 4]), qv(&[-6, 6, 12]), qv(&[10, -4, -16])];
        let (d, u, uinv) = smith(&to_int_mat(&m), 3);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let uq: QMat = u.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
        let uiq: QMat = uinv.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
        assert_eq!(mat_mul(&uq, &uiq, 3), identity(3));
    }

    #[test]
    fn saturation_of_doubled_vector() {
        let b = saturation_basis(&[qv(&[2, 2])], 2);
        assert_eq!(b.len(), 1);
        assert!(b[0] == qv(&[1, 1]) || b[0] == qv(&[-1, -1]));
        assert_eq!(index_in_saturation(&[qv(&[2, 2])], 2), BigInt::from(2));
    }

    #[test]
    fn primitive_scales() {
        assert_eq!(primitive(&[qr(1, 2), qr(3, 4)]), qv(&[2, 3]));
        assert_eq!(primitive(&qv(&[-4, 6])), qv(&[-2, 3]));
        assert_eq!(lattice_length(&qv(&[3, 0])), q(3));
    }

    #[test]
    fn nullspace_and_solve() {
        let m = vec![qv(&[1, 1, 0])];
        assert_eq!(nullspace(&m, 3).len(), 2);
        assert_eq!(solve(&m, &[q(2)], 3).unwrap(), qv(&[2, 0, 0]));
        assert!(solve(&vec![qv(&[0, 0])], &[q(1)], 2).is_none());
    }
}

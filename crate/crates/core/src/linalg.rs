//! Exact linear algebra: fraction-free elimination over the integers and
//! Gauss–Jordan elimination over ℚ(√m).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::scalars::{DiffPoly, ExactScalar, Monomial};

/// Row echelon form by fraction-free (Bareiss) elimination. Returns the
/// reduced rows and the pivot columns.
pub fn bareiss_echelon(matrix: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                // Bareiss: the division is exact
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn integer_rank(matrix: &[Vec<BigInt>]) -> usize {
    bareiss_echelon(matrix).1.len()
}

/// Integer basis of the right kernel `{x : M x = 0}`, one primitive vector per
/// free column.
pub fn integer_kernel(matrix: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let (ech, pivots) = bareiss_echelon(matrix);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        // back-substitute with rationals held as (numerator, common denominator)
        let mut x: Vec<(BigInt, BigInt)> = vec![(BigInt::zero(), BigInt::one()); cols];
        x[f] = (BigInt::one(), BigInt::one());
        for (row, &pc) in ech.iter().zip(&pivots).rev() {
            // row[pc] * x_pc + Σ_{j > pc} row[j] x_j = 0
            let mut num = BigInt::zero();
            let mut den = BigInt::one();
            for j in pc + 1..cols {
                if row[j].is_zero() || x[j].0.is_zero() {
                    continue;
                }
                let (xn, xd) = &x[j];
                num = &num * xd + &row[j] * xn * &den;
                den = &den * xd;
                let g = num.gcd(&den);
                if !g.is_zero() && !g.is_one() {
                    num /= &g;
                    den /= &g;
                }
            }
            let mut n = -num;
            let mut d = den * &row[pc];
            if d.is_negative() {
                n = -n;
                d = -d;
            }
            let g = n.gcd(&d);
            if !g.is_zero() && !g.is_one() {
                n /= &g;
                d /= &g;
            }
            x[pc] = (n, d);
        }
        let lcm = x.iter().fold(BigInt::one(), |acc, (_, d)| acc.lcm(d));
        let mut v: Vec<BigInt> = x.iter().map(|(n, d)| n * (&lcm / d)).collect();
        let g = v.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if !g.is_zero() && !g.is_one() {
            for e in &mut v {
                *e /= &g;
            }
        }
        basis.push(v);
    }
    basis
}

/// Reduced row echelon form over ℚ(√m).
pub fn rref(rows: &[Vec<ExactScalar>]) -> Result<(Vec<Vec<ExactScalar>>, Vec<usize>)> {
    let mut a: Vec<Vec<ExactScalar>> = rows.to_vec();
    let n = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv()?;
        for x in &mut a[r][c..cols] {
            *x = x.checked_mul(&inv)?;
        }
        for i in 0..n {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let pivot_row = a[r].clone();
            for (x, p) in a[i][c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                *x = x.checked_sub(&f.checked_mul(p)?)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Ok((a, pivots))
}

pub fn rank(rows: &[Vec<ExactScalar>]) -> Result<usize> {
    Ok(rref(rows)?.1.len())
}

/// Basis of the right kernel `{x : M x = 0}` over ℚ(√m), one vector per free
/// column, with a unit entry in that column.
pub fn kernel(rows: &[Vec<ExactScalar>], cols: usize) -> Result<Vec<Vec<ExactScalar>>> {
    let (red, pivots) = rref(rows)?;
    let mut basis = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![ExactScalar::zero(); cols];
        x[f] = ExactScalar::one();
        for (row, &pc) in red.iter().zip(&pivots) {
            x[pc] = -row[f].clone();
        }
        basis.push(x);
    }
    Ok(basis)
}

/// Coefficient vectors of polynomials over a shared monomial basis.
pub fn coefficient_rows(polys: &[DiffPoly]) -> (Vec<Monomial>, Vec<Vec<ExactScalar>>) {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let mut rows = vec![vec![ExactScalar::zero(); index.len()]; polys.len()];
    for (row, p) in rows.iter_mut().zip(polys) {
        for (m, c) in p.terms() {
            row[index[m]] = c.clone();
        }
    }
    let mut monos: Vec<(Monomial, usize)> = index.into_iter().collect();
    monos.sort_by_key(|(_, i)| *i);
    (monos.into_iter().map(|(m, _)| m).collect(), rows)
}

/// Whether `target` is a constant-coefficient combination of `basis`.
pub fn in_linear_span(basis: &[DiffPoly], target: &DiffPoly) -> Result<bool> {
    if target.is_zero() {
        return Ok(true);
    }
    let mut all = basis.to_vec();
    all.push(target.clone());
    let (_, rows) = coefficient_rows(&all);
    let r0 = rank(&rows[..basis.len()])?;
    let r1 = rank(&rows)?;
    Ok(r0 == r1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn bareiss_rank_and_kernel() {
        let m = ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(integer_rank(&m), 2);
        let k = integer_kernel(&m, 3);
        assert_eq!(k.len(), 1);
        // kernel vector is ±(1, 1, -1)
        let v = &k[0];
        for row in &m {
            let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(v.iter().map(|x| x.abs()).collect::<Vec<_>>(), ints(&[&[1, 1, 1]])[0]);
    }

    #[test]
    fn exact_kernel() {
        let q = ExactScalar::integer;
        let m = vec![vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]];
        let k = kernel(&m, 3).unwrap();
        assert_eq!(k, vec![vec![q(-1), q(-1), q(1)]]);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let m = ints(&[&[0, 0, 0, 0]]);
        assert_eq!(integer_kernel(&m, 4).len(), 4);
    }

    #[test]
    fn span_membership() {
        let p = |s: &str| crate::scalars::Expr::parse(s).unwrap().to_diffpoly().unwrap();
        let basis = vec![p("h2' - h1/2"), p("h3' + h1/2")];
        assert!(in_linear_span(&basis, &p("h2' + h3'")).unwrap());
        assert!(!in_linear_span(&basis, &p("h2'")).unwrap());
        let s3 = vec![p("p6' - 2*sqrt(3)*p2")];
        assert!(in_linear_span(&s3, &p("sqrt(3)*p6' - 6*p2")).unwrap());
    }
}

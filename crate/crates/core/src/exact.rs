//! Arbitrary-precision integer/rational arithmetic and exact linear algebra.
//!
//! Rationals are GMP-backed ([`rug::Rational`]) and therefore always in
//! canonical form: positive denominator, numerator and denominator coprime.
//! Determinants run fraction-free: denominators are cleared with a single
//! per-matrix LCM and elimination proceeds over integers in Bareiss form, so
//! intermediate values stay subdeterminant-sized instead of blowing up the
//! way naive rational Gaussian elimination does on Hankel matrices.

use crate::error::{Error, Result};
use rug::ops::Pow;

pub use rug::{Integer, Rational};

/// Dense square matrix of exact rationals, indexed `0..order` in both
/// dimensions. A 0x0 matrix is allowed; its determinant is 1 (empty
/// product).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    order: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    /// Zero matrix of the given order.
    pub fn new(order: usize) -> Self {
        ExactMatrix {
            order,
            entries: vec![Rational::new(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = ExactMatrix::new(order);
        for i in 0..order {
            m.set(i, i, Rational::from(1));
        }
        m
    }

    /// Build from rows; every row must have the same length as the row count.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(Error::domain(format!(
                    "matrix row has {} entries, expected {}",
                    row.len(),
                    order
                )));
            }
            entries.extend(row);
        }
        Ok(ExactMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.order + j] = v;
    }

    /// Leading principal submatrix of the given size.
    pub fn leading_submatrix(&self, size: usize) -> ExactMatrix {
        assert!(size <= self.order);
        let mut m = ExactMatrix::new(size);
        for i in 0..size {
            for j in 0..size {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }
}

/// Binomial coefficient `n choose k`, exact.
pub fn binomial(n: u64, k: u64) -> Result<Integer> {
    if k > n {
        return Err(Error::domain(format!("binomial({n}, {k}): k > n")));
    }
    let n32 = u32::try_from(n).map_err(|_| Error::domain("binomial: n too large"))?;
    let k32 = k as u32;
    Ok(Integer::from(Integer::binomial_u(n32, k32)))
}

/// Factorial `n!`, exact.
pub fn factorial(n: u64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// Double factorial of an odd argument: `m!! = m(m-2)(m-4)...3*1`.
///
/// `double_factorial(-1)` is 1 by the empty-product convention, so the
/// double-factorial sequence starts `D_0 = (-1)!! = 1`.
pub fn double_factorial(m: i64) -> Result<Integer> {
    if m == -1 {
        return Ok(Integer::from(1));
    }
    if m < 1 || m % 2 == 0 {
        return Err(Error::domain(format!(
            "double_factorial({m}): argument must be odd and >= -1"
        )));
    }
    Ok(Integer::from(Integer::factorial_2(m as u32)))
}

/// Clear denominators with one LCM and return the scaled integer matrix.
fn cleared_integer_matrix(m: &ExactMatrix) -> (Vec<Vec<Integer>>, Integer) {
    let n = m.order();
    let mut lcm = Integer::from(1);
    for e in &m.entries {
        lcm.lcm_mut(e.denom());
    }
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = m.get(i, j);
                    // e * lcm is an integer because lcm is a multiple of denom(e)
                    Integer::from(e.numer() * &lcm) / e.denom()
                })
                .collect()
        })
        .collect();
    (a, lcm)
}

/// Bareiss fraction-free determinant of an integer matrix (consumes it).
/// Row swaps are tracked by sign so zero pivots are handled.
fn bareiss_integer_det(mut a: Vec<Vec<Integer>>) -> Integer {
    let n = a.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if a[k][k].cmp0() == std::cmp::Ordering::Equal {
            match (k + 1..n).find(|&r| a[r][k].cmp0() != std::cmp::Ordering::Equal) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                // exact by the Bareiss identity: prev divides t
                a[i][j] = t / &prev;
            }
            a[i][k] = Integer::new();
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign < 0 {
        det = -det;
    }
    det
}

/// Exact determinant. Denominators are cleared with a per-matrix LCM, the
/// elimination runs fraction-free over integers, and the result is divided
/// by `lcm^order`.
pub fn exact_determinant(m: &ExactMatrix) -> Rational {
    let n = m.order();
    if n == 0 {
        return Rational::from(1);
    }
    let (a, lcm) = cleared_integer_matrix(m);
    let det_int = bareiss_integer_det(a);
    Rational::from((det_int, Integer::from((&lcm).pow(n as u32))))
}

/// Determinants of the leading principal submatrices of orders `1..=order`.
/// The last entry equals [`exact_determinant`] of the whole matrix.
pub fn leading_principal_minors(m: &ExactMatrix) -> Vec<Rational> {
    (1..=m.order())
        .map(|size| exact_determinant(&m.leading_submatrix(size)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent binomial oracle: multiplicative evaluation
    /// `prod_{i=1..k} (n-k+i)/i` with exact division at each step.
    fn binomial_oracle(n: u64, k: u64) -> Integer {
        let mut acc = Integer::from(1);
        for i in 1..=k {
            acc *= Integer::from(n - k + i);
            acc /= Integer::from(i);
        }
        acc
    }

    /// Independent determinant oracle: cofactor expansion along row 0.
    fn cofactor_det(m: &ExactMatrix) -> Rational {
        let n = m.order();
        if n == 0 {
            return Rational::from(1);
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut det = Rational::new();
        for j in 0..n {
            let mut sub = ExactMatrix::new(n - 1);
            for i in 1..n {
                let mut jj = 0;
                for col in 0..n {
                    if col == j {
                        continue;
                    }
                    sub.set(i - 1, jj, m.get(i, col).clone());
                    jj += 1;
                }
            }
            let term = Rational::from(m.get(0, j) * &cofactor_det(&sub));
            if j % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(6, 2).unwrap(), binomial_oracle(6, 2));
        assert_eq!(binomial(6, 2).unwrap(), 15);
        assert_eq!(binomial(12, 4).unwrap(), binomial_oracle(12, 4));
        assert_eq!(binomial(12, 4).unwrap(), 495);
    }

    #[test]
    fn binomial_rejects_k_above_n() {
        assert!(binomial(3, 4).is_err());
    }

    #[test]
    fn pascal_recurrence_holds_to_60() {
        for n in 1..=60u64 {
            for k in 1..=n {
                let lhs = binomial(n, k).unwrap();
                let rhs = binomial(n - 1, k - 1).unwrap()
                    + if k < n {
                        binomial(n - 1, k).unwrap()
                    } else {
                        Integer::new()
                    };
                assert_eq!(lhs, rhs, "Pascal fails at ({n}, {k})");
            }
        }
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
    }

    #[test]
    fn double_factorial_examples() {
        // direct-product oracle
        let mut oracle = Integer::from(1);
        for f in [7i32, 5, 3, 1] {
            oracle *= Integer::from(f);
        }
        assert_eq!(double_factorial(7).unwrap(), oracle);
        assert_eq!(double_factorial(7).unwrap(), 105);
        assert_eq!(double_factorial(-1).unwrap(), 1);
        assert_eq!(double_factorial(1).unwrap(), 1);
    }

    #[test]
    fn double_factorial_rejects_even_and_negative() {
        assert!(double_factorial(4).is_err());
        assert!(double_factorial(0).is_err());
        assert!(double_factorial(-3).is_err());
    }

    #[test]
    fn determinant_identity_is_one() {
        assert_eq!(exact_determinant(&ExactMatrix::identity(3)), 1);
    }

    #[test]
    fn determinant_empty_matrix_is_one() {
        assert_eq!(exact_determinant(&ExactMatrix::new(0)), 1);
    }

    #[test]
    fn determinant_catalan_hankel_order_2() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(1, 1), rat(1, 1), rat(2, 1)],
            vec![rat(1, 1), rat(2, 1), rat(5, 1)],
            vec![rat(2, 1), rat(5, 1), rat(14, 1)],
        ])
        .unwrap();
        assert_eq!(exact_determinant(&m), 1);
        assert_eq!(cofactor_det(&m), 1);
    }

    #[test]
    fn determinant_central_binomial_hankel() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(6, 1)],
            vec![rat(2, 1), rat(6, 1), rat(20, 1)],
            vec![rat(6, 1), rat(20, 1), rat(70, 1)],
        ])
        .unwrap();
        assert_eq!(cofactor_det(&m), 4);
        assert_eq!(exact_determinant(&m), 4);
    }

    #[test]
    fn determinant_handles_zero_pivot() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(0, 1)],
        ])
        .unwrap();
        assert_eq!(exact_determinant(&m), -1);
    }

    #[test]
    fn determinant_rational_entries() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat(1, 5)],
        ])
        .unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(exact_determinant(&m), rat(1, 60));
    }

    #[test]
    fn determinant_singular_matrix_is_zero() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
        ])
        .unwrap();
        assert_eq!(exact_determinant(&m), 0);
    }

    #[test]
    fn minors_examples() {
        assert_eq!(
            leading_principal_minors(&ExactMatrix::identity(2)),
            vec![rat(1, 1), rat(1, 1)]
        );

        let catalan = ExactMatrix::from_rows(vec![
            vec![rat(1, 1), rat(1, 1), rat(2, 1)],
            vec![rat(1, 1), rat(2, 1), rat(5, 1)],
            vec![rat(2, 1), rat(5, 1), rat(14, 1)],
        ])
        .unwrap();
        assert_eq!(
            leading_principal_minors(&catalan),
            vec![rat(1, 1), rat(1, 1), rat(1, 1)]
        );

        let m = ExactMatrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(6, 1)],
        ])
        .unwrap();
        assert_eq!(leading_principal_minors(&m), vec![rat(1, 1), rat(2, 1)]);
    }

    #[test]
    fn last_minor_equals_determinant() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(3, 7), rat(-2, 5), rat(1, 1)],
            vec![rat(0, 1), rat(4, 3), rat(-1, 2)],
            vec![rat(5, 1), rat(1, 6), rat(2, 9)],
        ])
        .unwrap();
        let minors = leading_principal_minors(&m);
        assert_eq!(minors.last().unwrap(), &exact_determinant(&m));
        assert_eq!(exact_determinant(&m), cofactor_det(&m));
    }

    #[test]
    fn rationals_stay_canonical() {
        let r = rat(4, 6) * rat(3, 2);
        assert_eq!(r.numer(), &1);
        assert_eq!(r.denom(), &1);
        let r = rat(-2, 4);
        assert_eq!(r.numer(), &-1);
        assert_eq!(r.denom(), &2);
    }
}

//! Property tests: the fraction-free determinant against a cofactor
//! oracle on random rational matrices, minor/determinant consistency, and
//! the algebraic sequence laws under random parameters.

use proptest::prelude::*;
use rug::Rational;
use stieltjes_core::exact::{exact_determinant, leading_principal_minors, ExactMatrix};
use stieltjes_core::sequences::{self, FamilyId};

/// Cofactor-expansion determinant, the independent oracle.
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

fn rational_entry() -> impl Strategy<Value = (i32, u32)> {
    (-20i32..=20, 1u32..=10)
}

fn random_matrix(max_order: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_order).prop_flat_map(move |order| {
        proptest::collection::vec(rational_entry(), order * order).prop_map(move |cells| {
            let mut m = ExactMatrix::new(order);
            for (idx, (num, den)) in cells.into_iter().enumerate() {
                m.set(idx / order, idx % order, Rational::from((num, den)));
            }
            m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bareiss_matches_cofactor_oracle(m in random_matrix(8)) {
        prop_assert_eq!(exact_determinant(&m), cofactor_det(&m));
    }

    #[test]
    fn last_minor_is_the_determinant(m in random_matrix(8)) {
        let minors = leading_principal_minors(&m);
        prop_assert_eq!(minors.last().unwrap(), &exact_determinant(&m));
    }

    #[test]
    fn scale_roundtrip_is_identity(num in 1i64..=50, den in 1i64..=50, n in 1usize..=12) {
        let seq = sequences::generate(&FamilyId::CentralBinomial, n).unwrap();
        let a = Rational::from((num, den));
        let inv = Rational::from(a.recip_ref());
        let back = sequences::scale(&sequences::scale(&seq, &a).unwrap(), &inv).unwrap();
        prop_assert_eq!(back.exact_terms().unwrap(), seq.exact_terms().unwrap());
    }

    #[test]
    fn fuss_catalan_collapses_at_k1(n in 0usize..=20) {
        let a = sequences::generate(&FamilyId::FussCatalan { k: 1 }, n).unwrap();
        let b = sequences::generate(&FamilyId::Catalan, n).unwrap();
        prop_assert_eq!(a.exact_terms().unwrap(), b.exact_terms().unwrap());
    }

    #[test]
    fn integer_powers_agree_with_products(e in 2u32..=4, n in 1usize..=10) {
        let seq = sequences::generate(&FamilyId::Catalan, n).unwrap();
        let powed = sequences::power(&seq, e as f64, 128).unwrap();
        // termwise repeated product as the oracle
        let mut acc = seq.clone();
        for _ in 1..e {
            acc = sequences::product(&acc, &seq).unwrap();
        }
        prop_assert_eq!(powed.exact_terms().unwrap(), acc.exact_terms().unwrap());
    }
}

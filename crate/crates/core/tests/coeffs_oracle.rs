//! The coefficient matrix against a naive evaluation of its definition.

#![allow(clippy::needless_range_loop)]

use cayley::coeffs::{
    check_row_identities, check_sum_identity, closed_form, simplified_recurrence_violation,
};
use cayley::CoeffMatrix;
use num_bigint::BigInt;

const N: usize = 40;

/// Direct transcription of the base rows and recursion, 1-based, no reuse of
/// partial sums.
fn naive(n: usize) -> Vec<Vec<BigInt>> {
    let mut a = vec![vec![BigInt::from(0); n + 1]; n + 1];
    a[1][1] = BigInt::from(-1);
    if n >= 2 {
        a[2][1] = BigInt::from(1);
    }
    for i in 2..=n {
        for j in 2..=n {
            let mut v = a[i - 1][j - 1].clone();
            for l in 1..i {
                v += &a[l][j - 1];
                v -= &a[l][j];
            }
            a[i][j] = v;
        }
    }
    a
}

#[test]
fn recursion_matches_naive_oracle() {
    let oracle = naive(N);
    let m = CoeffMatrix::build_recursive(N).unwrap();
    for i in 1..=N {
        for j in 1..=N {
            assert_eq!(*m.get(i, j), oracle[i][j], "a({i},{j})");
            assert_eq!(closed_form(i, j), oracle[i][j], "closed form at ({i},{j})");
        }
    }
}

#[test]
fn row_identities_hold_in_oracle() {
    let a = naive(N);
    for n in 1..=N {
        let sum: BigInt = a[n][1..].iter().sum();
        assert_eq!(sum, BigInt::from(-1), "row {n}");
        assert_eq!(a[n][n], -(BigInt::from(1) << (n - 1)), "diagonal {n}");
        assert!(a[n][n + 1..].iter().all(|v| *v == BigInt::from(0)));
        let odd: Vec<usize> = (1..=N).filter(|&j| a[n][j].bit(0)).collect();
        assert_eq!(odd, vec![n.div_ceil(2)], "odd entries of row {n}");
    }
    assert!(check_row_identities(&CoeffMatrix::build_recursive(N).unwrap()).all_pass());
}

#[test]
fn summation_identity_matches_oracle() {
    let a = naive(N);
    let m = CoeffMatrix::build_recursive(N).unwrap();
    for n in 1..N {
        for mm in 1..=n {
            let lhs: BigInt = (mm..=n).map(|j| &a[n][j] + &a[j][mm]).sum();
            let rhs: BigInt = (mm + 1..=n + 1).map(|j| a[n + 1][j].clone()).sum();
            assert_eq!(lhs, rhs, "m={mm} n={n}");
            assert!(check_sum_identity(&m, mm, n).unwrap());
        }
    }
}

#[test]
fn simplified_recurrence_holds() {
    let m = CoeffMatrix::build_recursive(N).unwrap();
    assert_eq!(simplified_recurrence_violation(&m), None);
}

#[test]
fn large_entries_exceed_machine_words() {
    let m = CoeffMatrix::build_recursive(70).unwrap();
    assert_eq!(*m.get(70, 70), -(BigInt::from(1) << 69usize));
    assert_eq!(closed_form(70, 70), *m.get(70, 70));
}

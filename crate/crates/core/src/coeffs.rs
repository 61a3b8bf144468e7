//! The exponent matrix `a(i, j)` that appears in the commutator relations.
//!
//! Entries are indexed from 1. The matrix is lower triangular and its entries
//! grow like `2^(n-1)`, so everything is kept as [`BigInt`].

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("indices m={m}, n={n} need 1 <= m <= n <= {limit}")]
    IndexOutOfRange { m: usize, n: usize, limit: usize },
    #[error("matrix size {0} must be at least 1")]
    EmptyMatrix(usize),
    #[error("{entries} entries do not fill a {n_max}x{n_max} matrix")]
    Shape { n_max: usize, entries: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    n_max: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffMatrix")
            .field("n_max", &self.n_max)
            .finish()
    }
}

impl CoeffMatrix {
    /// Fills the matrix from the base rows and the defining recursion
    /// `a(i,j) = sum_{l<i} a(l,j-1) - sum_{l<i} a(l,j) + a(i-1,j-1)`.
    pub fn build_recursive(n_max: usize) -> Result<Self, CoeffError> {
        if n_max == 0 {
            return Err(CoeffError::EmptyMatrix(n_max));
        }
        let mut m = CoeffMatrix {
            n_max,
            entries: vec![BigInt::zero(); n_max * n_max],
        };
        // col_sum[j] = sum of a(l, j) over the rows filled so far.
        let mut col_sum = vec![BigInt::zero(); n_max + 1];
        for i in 1..=n_max {
            let mut row = Vec::with_capacity(n_max);
            for j in 1..=n_max {
                let v = match (i, j) {
                    (1, 1) => BigInt::from(-1),
                    (2, 1) => BigInt::one(),
                    (1, _) | (_, 1) => BigInt::zero(),
                    _ => &col_sum[j - 1] - &col_sum[j] + m.get(i - 1, j - 1),
                };
                row.push(v);
            }
            for (j, v) in row.into_iter().enumerate() {
                col_sum[j + 1] += &v;
                m.entries[(i - 1) * n_max + j] = v;
            }
        }
        Ok(m)
    }

    /// Wraps arbitrary row-major entries, e.g. to feed a deliberately broken
    /// matrix to the identity checks.
    pub fn from_entries(n_max: usize, entries: Vec<BigInt>) -> Result<Self, CoeffError> {
        if n_max == 0 {
            return Err(CoeffError::EmptyMatrix(n_max));
        }
        if entries.len() != n_max * n_max {
            return Err(CoeffError::Shape {
                n_max,
                entries: entries.len(),
            });
        }
        Ok(CoeffMatrix { n_max, entries })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Entry `a(i, j)`, 1-based. Panics outside `1..=n_max`.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        assert!(
            (1..=self.n_max).contains(&i) && (1..=self.n_max).contains(&j),
            "a({i},{j}) outside 1..={}",
            self.n_max
        );
        &self.entries[(i - 1) * self.n_max + (j - 1)]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[(i - 1) * self.n_max..i * self.n_max]
    }

    pub fn with_entry(mut self, i: usize, j: usize, value: BigInt) -> Self {
        self.entries[(i - 1) * self.n_max + (j - 1)] = value;
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.n_max {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Grid with `|` separators; zeros are left blank.
    pub fn to_table(&self) -> String {
        let width = self
            .entries
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        for i in 1..=self.n_max {
            out.push('|');
            for v in self.row(i) {
                let cell = if v.is_zero() {
                    String::new()
                } else {
                    v.to_string()
                };
                out.push_str(&format!(" {cell:>width$} |"));
            }
            out.push('\n');
        }
        out
    }
}

fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        BigUint::zero()
    } else {
        num_integer::binomial(BigUint::from(n as u64), BigUint::from(k as u64))
    }
}

/// `sign * 2^exp * C(n, k)`, zero when the binomial is out of range. The
/// power of two is only evaluated for a nonzero binomial.
fn signed_term(sign_exp: i64, exp: i64, n: i64, k: i64) -> BigInt {
    let c = binomial(n, k);
    if c.is_zero() {
        return BigInt::zero();
    }
    assert!(exp >= 0, "negative power of two with nonzero binomial");
    let mag = BigInt::from(c) << (exp as usize);
    if sign_exp.rem_euclid(2) == 1 {
        -mag
    } else {
        mag
    }
}

/// `a(i, j) = (-1)^(i-j-1) 2^(2j-i) C(j-1, i-j-1) - (-1)^(i-j) 2^(2j-i-1) C(j-1, i-j)`.
pub fn closed_form(i: usize, j: usize) -> BigInt {
    let (i, j) = (i as i64, j as i64);
    signed_term(i - j - 1, 2 * j - i, j - 1, i - j - 1)
        - signed_term(i - j, 2 * j - i - 1, j - 1, i - j)
}

/// Which of the row identities failed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowFailure {
    RowSum { got: BigInt },
    Diagonal { got: BigInt, want: BigInt },
    UpperTriangle { col: usize, got: BigInt },
    OddEntries { cols: Vec<usize>, want: usize },
}

impl fmt::Display for RowFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowFailure::RowSum { got } => write!(f, "row sum is {got}, expected -1"),
            RowFailure::Diagonal { got, want } => write!(f, "diagonal is {got}, expected {want}"),
            RowFailure::UpperTriangle { col, got } => {
                write!(f, "entry above diagonal at column {col} is {got}")
            }
            RowFailure::OddEntries { cols, want } => {
                write!(
                    f,
                    "odd entries at columns {cols:?}, expected exactly column {want}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowVerdict {
    pub n: usize,
    pub failure: Option<RowFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReport {
    pub rows: Vec<RowVerdict>,
}

impl RowReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&RowVerdict> {
        self.rows.iter().find(|r| r.failure.is_some())
    }
}

fn check_row(m: &CoeffMatrix, n: usize) -> Option<RowFailure> {
    let row = m.row(n);
    let sum: BigInt = row.iter().sum();
    if sum != BigInt::from(-1) {
        return Some(RowFailure::RowSum { got: sum });
    }
    let want = -(BigInt::one() << (n - 1));
    if *m.get(n, n) != want {
        return Some(RowFailure::Diagonal {
            got: m.get(n, n).clone(),
            want,
        });
    }
    if let Some(col) = (n + 1..=m.n_max()).find(|&l| !m.get(n, l).is_zero()) {
        return Some(RowFailure::UpperTriangle {
            col,
            got: m.get(n, col).clone(),
        });
    }
    let odd: Vec<usize> = (1..=m.n_max()).filter(|&j| m.get(n, j).is_odd()).collect();
    let want = n.div_ceil(2);
    if odd != [want] {
        return Some(RowFailure::OddEntries { cols: odd, want });
    }
    None
}

/// Per-row check of: row sum `-1`, diagonal `-2^(n-1)`, zeros right of the
/// diagonal, and a single odd entry at column `ceil(n/2)`.
pub fn check_row_identities(m: &CoeffMatrix) -> RowReport {
    RowReport {
        rows: (1..=m.n_max())
            .map(|n| RowVerdict {
                n,
                failure: check_row(m, n),
            })
            .collect(),
    }
}

/// `sum_{j=m}^{n} a(n,j) + sum_{j=m}^{n} a(j,m) == sum_{j=m+1}^{n+1} a(n+1,j)`.
pub fn check_sum_identity(mat: &CoeffMatrix, m: usize, n: usize) -> Result<bool, CoeffError> {
    let limit = mat.n_max().saturating_sub(1);
    if m < 1 || m > n || n > limit {
        return Err(CoeffError::IndexOutOfRange { m, n, limit });
    }
    let lhs: BigInt = (m..=n).map(|j| mat.get(n, j) + mat.get(j, m)).sum();
    let rhs: BigInt = (m + 1..=n + 1).map(|j| mat.get(n + 1, j)).sum();
    Ok(lhs == rhs)
}

/// First `(i, j)` with `i > 2, j > 1` where `a(i,j) != 2 a(i-1,j-1) - a(i-2,j-1)`.
pub fn simplified_recurrence_violation(m: &CoeffMatrix) -> Option<(usize, usize)> {
    (3..=m.n_max())
        .flat_map(|i| (2..=m.n_max()).map(move |j| (i, j)))
        .find(|&(i, j)| *m.get(i, j) != 2 * m.get(i - 1, j - 1) - m.get(i - 2, j - 1))
}

/// Row `n` of the matrix reduced into `0..modulus`; enough for exponentiation
/// in a group whose exponent divides `modulus`.
pub fn reduced_row(m: &CoeffMatrix, n: usize, modulus: u64) -> Vec<u64> {
    let md = BigInt::from(modulus);
    (1..=n)
        .map(|j| m.get(n, j).mod_floor(&md).to_u64().expect("residue fits"))
        .collect()
}

/// Absolute value of the largest entry, handy for sizing output.
pub fn max_magnitude(m: &CoeffMatrix) -> BigInt {
    m.entries.iter().map(|v| v.abs()).max().unwrap_or_default()
}

//! Finite groups stored as validated multiplication tables.
//!
//! Elements are addressed by their index in `0..order`; index 0 is always the
//! identity. The hot paths elsewhere in the crate work on raw indices through
//! [`FiniteGroup::mul`] and friends. [`GroupElement`] is the checked handle
//! that remembers which group it belongs to.

mod catalog;
mod file;

pub use catalog::{builtin, BUILTIN_NAMES};
pub use file::{parse_group_file, render_group_file, GroupFileError};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Label reserved for the generator `x` of the automata group.
pub const RESERVED_LABEL: &str = "x";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("table is empty")]
    Empty,
    #[error(
        "table has {rows} rows and row {row} has {cols} entries, expected a {order}x{order} table"
    )]
    NotSquare {
        order: usize,
        rows: usize,
        row: usize,
        cols: usize,
    },
    #[error("entry ({row}, {col}) = {value} is not an element index below {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("not a Latin square: {line} {index} repeats element {value} at positions {first} and {second}")]
    NotLatinSquare {
        line: &'static str,
        index: usize,
        value: usize,
        first: usize,
        second: usize,
    },
    #[error("element 0 is not the identity: {side} product with element {index} gives {got}")]
    NoIdentityAtIndexZero {
        side: &'static str,
        index: usize,
        got: usize,
    },
    #[error("not associative: ({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}")]
    NotAssociative {
        a: usize,
        b: usize,
        c: usize,
        left: usize,
        right: usize,
    },
    #[error("label {label:?} used for elements {first} and {second}")]
    DuplicateLabel {
        label: String,
        first: usize,
        second: usize,
    },
    #[error("element {index} uses the reserved label \"x\"")]
    ReservedLabelX { index: usize },
    #[error("element {index} has label {label:?}; labels must be non-empty and contain no whitespace, '^', '(', ')' or '#'")]
    InvalidLabel { index: usize, label: String },
    #[error("{labels} labels given for a table of order {order}")]
    LabelCount { labels: usize, order: usize },
    #[error("unknown builtin group {0:?}")]
    UnknownName(String),
    #[error("elements belong to different groups")]
    GroupMismatch,
}

/// A finite group given extensionally by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<usize>,
    inv: Vec<usize>,
    elt_order: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .field("labels", &self.labels)
            .finish()
    }
}

fn label_is_valid(label: &str) -> bool {
    !label.is_empty()
        && !label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '^' | '(' | ')' | '#'))
}

impl FiniteGroup {
    /// Validates `table` (row `r`, column `c` holds the index of `r*c`) and
    /// builds the group. Every group law is checked exhaustively.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if labels.len() != order {
            return Err(GroupError::LabelCount {
                labels: labels.len(),
                order,
            });
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(GroupError::NotSquare {
                    order,
                    rows: order,
                    row,
                    cols: entries.len(),
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order,
                    });
                }
            }
        }
        for (index, label) in labels.iter().enumerate() {
            if label == RESERVED_LABEL {
                return Err(GroupError::ReservedLabelX { index });
            }
            if !label_is_valid(label) {
                return Err(GroupError::InvalidLabel {
                    index,
                    label: label.clone(),
                });
            }
            if let Some(first) = labels[..index].iter().position(|l| l == label) {
                return Err(GroupError::DuplicateLabel {
                    label: label.clone(),
                    first,
                    second: index,
                });
            }
        }

        check_latin(&table)?;
        for (i, row) in table.iter().enumerate() {
            if table[0][i] != i {
                return Err(GroupError::NoIdentityAtIndexZero {
                    side: "left",
                    index: i,
                    got: table[0][i],
                });
            }
            if row[0] != i {
                return Err(GroupError::NoIdentityAtIndexZero {
                    side: "right",
                    index: i,
                    got: row[0],
                });
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    let left = table[ab][c];
                    let right = table[a][table[b][c]];
                    if left != right {
                        return Err(GroupError::NotAssociative {
                            a,
                            b,
                            c,
                            left,
                            right,
                        });
                    }
                }
            }
        }

        // Latin rows guarantee exactly one right inverse; with associativity
        // and a two-sided identity it is also the left inverse.
        let inv: Vec<usize> = (0..order)
            .map(|r| table[r].iter().position(|&v| v == 0).expect("latin row"))
            .collect();
        let elt_order = (0..order)
            .map(|g| {
                let mut acc = g;
                let mut n = 1;
                while acc != 0 {
                    acc = table[acc][g];
                    n += 1;
                }
                n
            })
            .collect();

        Ok(FiniteGroup {
            name: String::new(),
            labels,
            table: table.into_iter().flatten().collect(),
            inv,
            elt_order,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn element(&self, index: usize) -> Option<GroupElement<'_>> {
        (index < self.order()).then_some(GroupElement { group: self, index })
    }

    pub fn element_by_label(&self, label: &str) -> Option<GroupElement<'_>> {
        self.index_of(label).and_then(|i| self.element(i))
    }

    pub fn identity(&self) -> GroupElement<'_> {
        GroupElement {
            group: self,
            index: 0,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement<'_>> {
        (0..self.order()).map(move |index| GroupElement { group: self, index })
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elt_order(&self, a: usize) -> usize {
        self.elt_order[a]
    }

    pub fn elt_orders(&self) -> &[usize] {
        &self.elt_order
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elt_order.iter().fold(1, |acc, &o| acc.lcm(&o))
    }

    /// `a^e` for any machine integer exponent, reduced modulo the order of `a`.
    pub fn pow(&self, a: usize, e: i64) -> usize {
        let ord = self.elt_order[a] as i64;
        let mut r = e.rem_euclid(ord);
        let mut acc = 0;
        while r > 0 {
            acc = self.mul(acc, a);
            r -= 1;
        }
        acc
    }

    /// `a^e` for an arbitrary-precision exponent.
    pub fn pow_big(&self, a: usize, e: &BigInt) -> usize {
        let ord = BigInt::from(self.elt_order[a]);
        let r = e
            .mod_floor(&ord)
            .to_i64()
            .expect("residue below element order");
        self.pow(a, r)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    #[inline]
    pub fn comm(&self, a: usize, b: usize) -> usize {
        let left = self.mul(self.inv[a], self.inv[b]);
        self.mul(left, self.mul(a, b))
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order()).all(|z| self.commutes(a, z))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order()).filter(|&a| self.is_central(a)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (a..self.order()).all(|b| self.commutes(a, b)))
    }

    /// Brute-force class check: every commutator must be central. On failure
    /// returns `(g, h, z)` with `[[g, h], z] != 1`.
    pub fn class_two_witness(&self) -> Option<(usize, usize, usize)> {
        let k = self.order();
        for g in 0..k {
            for h in 0..k {
                let c = self.comm(g, h);
                if let Some(z) = (0..k).find(|&z| !self.commutes(c, z)) {
                    return Some((g, h, z));
                }
            }
        }
        None
    }

    pub fn is_class_at_most_two(&self) -> bool {
        self.class_two_witness().is_none()
    }

    /// Rows of the multiplication table as element indices.
    pub fn table_rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.order())
    }

    /// Builds an isomorphic copy in which element `i` is renamed to
    /// `perm[i]`. `perm` must fix 0.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, GroupError> {
        let k = self.order();
        let mut labels = vec![String::new(); k];
        let mut table = vec![vec![0; k]; k];
        for a in 0..k {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..k {
                table[perm[a]][perm[b]] = perm[self.mul(a, b)];
            }
        }
        Ok(FiniteGroup::from_table(labels, table)?.with_name(self.name.clone()))
    }
}

fn check_latin(table: &[Vec<usize>]) -> Result<(), GroupError> {
    let order = table.len();
    let mut seen = vec![usize::MAX; order];
    for (r, row) in table.iter().enumerate() {
        seen.fill(usize::MAX);
        for (c, &v) in row.iter().enumerate() {
            if seen[v] != usize::MAX {
                return Err(GroupError::NotLatinSquare {
                    line: "row",
                    index: r,
                    value: v,
                    first: seen[v],
                    second: c,
                });
            }
            seen[v] = c;
        }
    }
    for c in 0..order {
        seen.fill(usize::MAX);
        for (r, row) in table.iter().enumerate() {
            let v = row[c];
            if seen[v] != usize::MAX {
                return Err(GroupError::NotLatinSquare {
                    line: "column",
                    index: c,
                    value: v,
                    first: seen[v],
                    second: r,
                });
            }
            seen[v] = r;
        }
    }
    Ok(())
}

/// An element handle tied to the group it came from.
#[derive(Clone, Copy)]
pub struct GroupElement<'g> {
    group: &'g FiniteGroup,
    index: usize,
}

impl fmt::Debug for GroupElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for GroupElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl PartialEq for GroupElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && self.index == other.index
    }
}

impl Eq for GroupElement<'_> {}

impl<'g> GroupElement<'g> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn label(&self) -> &'g str {
        self.group.label(self.index)
    }

    pub fn is_identity(&self) -> bool {
        self.index == 0
    }

    pub fn order(&self) -> usize {
        self.group.elt_order(self.index)
    }

    fn same_group(&self, other: &Self) -> Result<(), GroupError> {
        if std::ptr::eq(self.group, other.group) {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch)
        }
    }

    fn with(&self, index: usize) -> Self {
        GroupElement {
            group: self.group,
            index,
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_group(other)?;
        Ok(self.with(self.group.mul(self.index, other.index)))
    }

    pub fn inverse(&self) -> Self {
        self.with(self.group.inv(self.index))
    }

    pub fn power(&self, e: &BigInt) -> Self {
        self.with(self.group.pow_big(self.index, e))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_group(other)?;
        Ok(self.with(self.group.comm(self.index, other.index)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn z2_from_table() {
        let g = FiniteGroup::from_table(labels(&["e", "t"]), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.elt_orders(), &[1, 2]);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn rejects_repeated_row_entry() {
        let err =
            FiniteGroup::from_table(labels(&["e", "t"]), vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(
            err,
            GroupError::NotLatinSquare {
                line: "row",
                index: 1,
                ..
            }
        ));
    }

    #[test]
    fn rejects_misplaced_identity() {
        // Valid Z/2 law, but index 0 plays the role of the non-identity.
        let err =
            FiniteGroup::from_table(labels(&["t", "e"]), vec![vec![1, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NoIdentityAtIndexZero { .. }));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // A Latin square with identity 0 that is not a group (order-5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(labels(&["e", "a", "b", "c", "d"]), t).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. }), "{err}");
    }

    #[test]
    fn rejects_bad_labels() {
        let t = vec![vec![0, 1], vec![1, 0]];
        assert!(matches!(
            FiniteGroup::from_table(labels(&["e", "e"]), t.clone()),
            Err(GroupError::DuplicateLabel {
                first: 0,
                second: 1,
                ..
            })
        ));
        assert!(matches!(
            FiniteGroup::from_table(labels(&["e", "x"]), t.clone()),
            Err(GroupError::ReservedLabelX { index: 1 })
        ));
        assert!(matches!(
            FiniteGroup::from_table(labels(&["e", "t^2"]), t),
            Err(GroupError::InvalidLabel { index: 1, .. })
        ));
    }

    #[test]
    fn q8_arithmetic() {
        let q8 = builtin("q8").unwrap();
        let e = |l: &str| q8.element_by_label(l).unwrap();
        assert_eq!(q8.elt_orders(), &[1, 2, 4, 4, 4, 4, 4, 4]);
        assert_eq!(e("i").multiply(&e("j")).unwrap(), e("k"));
        assert_eq!(e("i").inverse(), e("-i"));
        assert_eq!(e("i").power(&BigInt::from(4)), e("1"));
        assert_eq!(e("i").power(&BigInt::from(-1)), e("-i"));
        assert_eq!(e("i").commutator(&e("j")).unwrap(), e("-1"));
        for g in q8.elements() {
            assert_eq!(q8.identity().multiply(&g).unwrap(), g);
            assert!(g.commutator(&g).unwrap().is_identity());
        }
    }

    #[test]
    fn d4_arithmetic() {
        let d4 = builtin("d4").unwrap();
        let e = |l: &str| d4.element_by_label(l).unwrap();
        assert!(e("r").power(&BigInt::from(-56)).is_identity());
        assert_eq!(e("r").commutator(&e("s")).unwrap(), e("r2"));
    }

    #[test]
    fn mismatched_groups() {
        let a = builtin("q8").unwrap();
        let b = builtin("q8").unwrap();
        let err = a
            .element(2)
            .unwrap()
            .multiply(&b.element(2).unwrap())
            .unwrap_err();
        assert_eq!(err, GroupError::GroupMismatch);
    }

    #[test]
    fn huge_exponents_reduce() {
        let q8 = builtin("q8").unwrap();
        let big = BigInt::from(2).pow(200) + 1;
        assert_eq!(q8.pow_big(2, &big), 2);
        assert_eq!(q8.pow_big(2, &-big), q8.inv(2));
    }

    #[test]
    fn class_two_catalog() {
        for name in ["z2", "z4", "z2xz2", "d4", "q8", "heis3"] {
            assert!(builtin(name).unwrap().is_class_at_most_two(), "{name}");
        }
        let d16 = builtin("d8_16").unwrap();
        let (g, h, z) = d16.class_two_witness().expect("class 3");
        let c = d16.comm(g, h);
        assert_ne!(d16.comm(c, z), 0);
        assert!(!builtin("s3").unwrap().is_class_at_most_two());
    }

    #[test]
    fn q8_center() {
        let q8 = builtin("q8").unwrap();
        let c: Vec<&str> = q8.center().into_iter().map(|i| q8.label(i)).collect();
        assert_eq!(c, ["1", "-1"]);
    }
}

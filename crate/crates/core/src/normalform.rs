//! Unique normal forms `x^{i1} f1 x^{-i1} ... x^{ij} fj x^{-ij} * x^t` with
//! strictly increasing levels and non-identity `f`s, for groups of
//! nilpotency class at most two.
//!
//! Factors are sorted by level with an insertion sort. Moving `x^b h x^-b`
//! past `x^i g x^-i` (with `b > i`) leaves behind the commutator
//! `x^i [x^(b-i) h x^-(b-i), g] x^-i`, which the commutator relations expand
//! into `prod_l x^(i+l) [h^-1, g^a(b-i,l)] x^-(i+l)`. Those pieces are central
//! in the subgroup generated by the conjugates, so they are accumulated
//! per level and multiplied in at the end.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::RwLock;

use crate::coeffs::{reduced_row, CoeffMatrix};
use crate::fingroup::FiniteGroup;
use crate::words::{to_conjugates, GenWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NfError {
    #[error("group has nilpotency class above two: [[{g}, {h}], {z}] != 1")]
    ClassTooHigh { g: String, h: String, z: String },
    #[error("level gap {n} exceeds the coefficient matrix size {n_max}")]
    CoeffRangeExceeded { n: usize, n_max: usize },
}

fn class_check(group: &FiniteGroup) -> Result<(), NfError> {
    match group.class_two_witness() {
        None => Ok(()),
        Some((g, h, z)) => Err(NfError::ClassTooHigh {
            g: group.label(g).into(),
            h: group.label(h).into(),
            z: group.label(z).into(),
        }),
    }
}

/// `[(l, [g^-1, h^a(n,l)]) for l in 1..=n]` with identity entries omitted:
/// the central factors of `[x^n g x^-n, h]`.
pub fn correction(
    n: usize,
    g: usize,
    h: usize,
    group: &FiniteGroup,
    coeffs: &CoeffMatrix,
) -> Result<Vec<(usize, usize)>, NfError> {
    class_check(group)?;
    if n > coeffs.n_max() {
        return Err(NfError::CoeffRangeExceeded {
            n,
            n_max: coeffs.n_max(),
        });
    }
    let gi = group.inv(g);
    Ok((1..=n)
        .map(|l| (l, group.comm(gi, group.pow_big(h, coeffs.get(n, l)))))
        .filter(|&(_, c)| c != 0)
        .collect())
}

/// A normalized element: level map plus the exponent of `x`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NormalForm {
    levels: BTreeMap<i64, usize>,
    t: i64,
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm::default()
    }

    pub fn levels(&self) -> &BTreeMap<i64, usize> {
        &self.levels
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn is_identity(&self) -> bool {
        self.levels.is_empty() && self.t == 0
    }

    /// Emits `x^i f x^-i ... x^t`.
    pub fn to_word(&self) -> GenWord {
        let mut w = GenWord::new();
        for (&level, &f) in &self.levels {
            w.push(Letter::X, level);
            w.push(Letter::Embedded(f), 1);
            w.push(Letter::X, -level);
        }
        w.push(Letter::X, self.t);
        w
    }

    /// `[i:label][j:label]... x^t`, or `1` for the identity.
    pub fn display<'a>(&'a self, group: &'a FiniteGroup) -> NfDisplay<'a> {
        NfDisplay { nf: self, group }
    }
}

pub struct NfDisplay<'a> {
    nf: &'a NormalForm,
    group: &'a FiniteGroup,
}

impl fmt::Display for NfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nf.is_identity() {
            return f.write_str("1");
        }
        for (level, &g) in &self.nf.levels {
            write!(f, "[{level}:{}]", self.group.label(g))?;
        }
        if self.nf.t != 0 {
            if !self.nf.levels.is_empty() {
                f.write_str(" ")?;
            }
            write!(f, "x^{}", self.nf.t)?;
        }
        Ok(())
    }
}

/// Normal-form arithmetic over one class-two group. Coefficient rows are
/// reduced modulo the group exponent and grown on demand.
pub struct Normalizer<'g> {
    group: &'g FiniteGroup,
    modulus: u64,
    rows: RwLock<Vec<Vec<u64>>>,
}

impl<'g> Normalizer<'g> {
    pub fn new(group: &'g FiniteGroup) -> Result<Self, NfError> {
        class_check(group)?;
        Ok(Normalizer {
            group,
            modulus: group.exponent() as u64,
            rows: RwLock::new(vec![Vec::new()]),
        })
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    fn ensure_rows(&self, n: usize) {
        if self.rows.read().unwrap().len() > n {
            return;
        }
        let mut rows = self.rows.write().unwrap();
        if rows.len() > n {
            return;
        }
        let m = CoeffMatrix::build_recursive(n.max(2 * rows.len())).expect("n >= 1");
        *rows = (0..=m.n_max())
            .map(|i| {
                if i == 0 {
                    Vec::new()
                } else {
                    reduced_row(&m, i, self.modulus)
                }
            })
            .collect();
    }

    /// Records the central factors of `[x^n g x^-n, h]`, shifted up by `base`.
    fn add_correction(
        &self,
        central: &mut BTreeMap<i64, usize>,
        base: i64,
        n: usize,
        g: usize,
        h: usize,
    ) {
        self.ensure_rows(n);
        let rows = self.rows.read().unwrap();
        let gi = self.group.inv(g);
        for (l, &a) in rows[n].iter().enumerate() {
            let c = self.group.comm(gi, self.group.pow(h, a as i64));
            if c != 0 {
                let slot = central.entry(base + l as i64 + 1).or_insert(0);
                *slot = self.group.mul(*slot, c);
            }
        }
    }

    /// Sorts factors `(level, g)` given in product order.
    pub fn from_factors(
        &self,
        factors: impl IntoIterator<Item = (i64, usize)>,
        t: i64,
    ) -> NormalForm {
        let grp = self.group;
        let mut sorted: Vec<(i64, usize)> = Vec::new();
        let mut central: BTreeMap<i64, usize> = BTreeMap::new();
        for (level, g) in factors {
            if g == 0 {
                continue;
            }
            let pos = sorted.partition_point(|&(l, _)| l <= level);
            for &(b, h) in &sorted[pos..] {
                self.add_correction(&mut central, level, (b - level) as usize, h, g);
            }
            match pos.checked_sub(1).map(|p| (p, sorted[p])) {
                Some((p, (l, f))) if l == level => {
                    let prod = grp.mul(f, g);
                    if prod == 0 {
                        sorted.remove(p);
                    } else {
                        sorted[p].1 = prod;
                    }
                }
                _ => sorted.insert(pos, (level, g)),
            }
        }
        let mut levels: BTreeMap<i64, usize> = sorted.into_iter().collect();
        for (level, z) in central {
            let f = levels.get(&level).copied().unwrap_or(0);
            let prod = grp.mul(f, z);
            if prod == 0 {
                levels.remove(&level);
            } else {
                levels.insert(level, prod);
            }
        }
        NormalForm { levels, t }
    }

    pub fn normalize(&self, w: &GenWord) -> NormalForm {
        let seq = to_conjugates(w, self.group);
        self.from_factors(seq.factors, seq.t)
    }

    /// `(nA x^tA)(nB x^tB) = nA (x^tA nB x^-tA) x^(tA+tB)`.
    pub fn multiply(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let shifted = b.levels.iter().map(|(&l, &g)| (l + a.t, g));
        let factors = a.levels.iter().map(|(&l, &g)| (l, g)).chain(shifted);
        self.from_factors(factors, a.t + b.t)
    }

    pub fn inverse(&self, a: &NormalForm) -> NormalForm {
        let factors = a
            .levels
            .iter()
            .rev()
            .map(|(&l, &g)| (l - a.t, self.group.inv(g)));
        self.from_factors(factors, -a.t)
    }

    pub fn pow(&self, a: &NormalForm, e: u32) -> NormalForm {
        (0..e).fold(NormalForm::identity(), |acc, _| self.multiply(&acc, a))
    }

    /// Builds a normal form from explicit levels, dropping identity entries.
    pub fn from_levels(
        &self,
        levels: impl IntoIterator<Item = (i64, usize)>,
        t: i64,
    ) -> NormalForm {
        NormalForm {
            levels: levels.into_iter().filter(|&(_, g)| g != 0).collect(),
            t,
        }
    }
}

/// Structural comparison; sound because the representation is unique.
pub fn nf_equal(a: &NormalForm, b: &NormalForm) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;
    use crate::words::parse;

    fn setup(name: &str) -> FiniteGroup {
        builtin(name).unwrap()
    }

    #[test]
    fn corrections() {
        let q8 = setup("q8");
        let m = CoeffMatrix::build_recursive(7).unwrap();
        let (i, j) = (q8.index_of("i").unwrap(), q8.index_of("j").unwrap());
        let minus = q8.index_of("-1").unwrap();
        assert_eq!(
            correction(1, i, j, &q8, &m).unwrap(),
            vec![(1, q8.comm(q8.inv(i), q8.inv(j)))]
        );
        assert_eq!(correction(1, i, j, &q8, &m).unwrap(), vec![(1, minus)]);
        // Exponents 7, -56, 112, -64 at levels 4..7: only the odd one survives in Q8.
        assert_eq!(correction(7, i, j, &q8, &m).unwrap(), vec![(4, minus)]);
        assert_eq!(
            correction(8, i, j, &q8, &m),
            Err(NfError::CoeffRangeExceeded { n: 8, n_max: 7 })
        );
        let z4 = setup("z4");
        for n in 1..=7 {
            for g in 0..4 {
                for h in 0..4 {
                    assert!(correction(n, g, h, &z4, &m).unwrap().is_empty());
                }
            }
        }
        assert!(matches!(
            correction(1, 1, 2, &setup("d8_16"), &m),
            Err(NfError::ClassTooHigh { .. })
        ));
    }

    #[test]
    fn refuses_class_three() {
        assert!(Normalizer::new(&setup("d8_16")).is_err());
        assert!(Normalizer::new(&setup("s3")).is_err());
    }

    #[test]
    fn normalize_examples() {
        let q8 = setup("q8");
        let nz = Normalizer::new(&q8).unwrap();
        let l = |s: &str| q8.index_of(s).unwrap();
        let nf = nz.normalize(&parse("x i x^-1 j", &q8).unwrap());
        assert_eq!(nf, nz.from_levels([(0, l("j")), (1, l("-i"))], 0));
        assert_eq!(nf.display(&q8).to_string(), "[0:j][1:-i]");
        let cancel = nz.normalize(&parse("x^2 i x^-2 x^2 -i x^-2", &q8).unwrap());
        assert!(cancel.is_identity());
        assert_eq!(cancel.display(&q8).to_string(), "1");

        let d4 = setup("d4");
        let nz = Normalizer::new(&d4).unwrap();
        let nf = nz.normalize(&parse("r s", &d4).unwrap());
        assert_eq!(nf, nz.from_levels([(0, d4.index_of("rs").unwrap())], 0));
    }

    #[test]
    fn multiply_and_inverse_examples() {
        let q8 = setup("q8");
        let nz = Normalizer::new(&q8).unwrap();
        let l = |s: &str| q8.index_of(s).unwrap();
        let i0 = nz.from_levels([(0, l("i"))], 0);
        assert_eq!(nz.multiply(&i0, &i0), nz.from_levels([(0, l("-1"))], 0));
        let x = nz.from_levels([], 1);
        assert_eq!(nz.multiply(&x, &i0), nz.from_levels([(1, l("i"))], 1));
        let a = nz.from_levels([(1, l("i"))], 0);
        let b = nz.from_levels([(0, l("j"))], 0);
        let ab = nz.multiply(&a, &b);
        assert_eq!(ab, nz.from_levels([(0, l("j")), (1, l("-i"))], 0));

        let i_t2 = nz.from_levels([(0, l("i"))], 2);
        assert_eq!(nz.inverse(&i_t2), nz.from_levels([(-2, l("-i"))], -2));
        assert!(nz.inverse(&NormalForm::identity()).is_identity());
        let inv = nz.inverse(&ab);
        assert_eq!(inv, nz.from_levels([(0, l("-j")), (1, l("-i"))], 0));
        assert!(nz.multiply(&ab, &inv).is_identity());
    }

    #[test]
    fn display_and_words() {
        let q8 = setup("q8");
        let nz = Normalizer::new(&q8).unwrap();
        let i = q8.index_of("i").unwrap();
        let a = nz.from_levels([(1, i)], -2);
        assert_eq!(crate::words::format(&a.to_word(), &q8), "x i x^-1 x^-2");
        assert_eq!(a.display(&q8).to_string(), "[1:i] x^-2");
        assert_eq!(nz.from_levels([], 3).display(&q8).to_string(), "x^3");
        assert!(NormalForm::identity().to_word().is_empty());
        assert_eq!(nz.normalize(&a.to_word()), a);
    }

    #[test]
    fn t_only_differences() {
        let q8 = setup("q8");
        let nz = Normalizer::new(&q8).unwrap();
        assert!(!nf_equal(&nz.from_levels([], 1), &nz.from_levels([], 2)));
        assert!(nf_equal(
            &nz.normalize(&GenWord::new()),
            &NormalForm::identity()
        ));
    }
}

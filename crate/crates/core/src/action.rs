//! Direct simulation of generator words on finite input words.
//!
//! Every generator is run as its own small transducer (Cayley machine or its
//! reset-automaton inverse); nothing is composed or minimized. This is the
//! independent check against the machine algebra in [`crate::mealy`].

use crate::fingroup::FiniteGroup;
use crate::words::{GenWord, Letter};

/// One elementary transducer with its starting state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    /// Cayley machine: output and next state are `q * a`.
    Cayley(usize),
    /// Inverse Cayley machine: output `q^-1 * a`, next state `a`.
    Reset(usize),
}

/// A word compiled to the list of transducers in the order they act.
#[derive(Debug, Clone)]
pub struct CompiledWord<'g> {
    group: &'g FiniteGroup,
    steps: Vec<Step>,
}

impl<'g> CompiledWord<'g> {
    pub fn new(w: &GenWord, group: &'g FiniteGroup) -> Self {
        // x = Reset(1), x^-1 = Cayley(1), g = x C(g), g^-1 = C(g)^-1 x^-1.
        let mut written = Vec::new();
        for t in w.tokens() {
            let one: &[Step] = match (t.letter, t.exponent > 0) {
                (Letter::X, true) => &[Step::Reset(0)],
                (Letter::X, false) => &[Step::Cayley(0)],
                (Letter::StateGen(g), true) => &[Step::Cayley(g)],
                (Letter::StateGen(g), false) => &[Step::Reset(g)],
                (Letter::Embedded(g), true) => &[Step::Reset(0), Step::Cayley(g)],
                (Letter::Embedded(g), false) => &[Step::Reset(g), Step::Cayley(0)],
            };
            for _ in 0..t.exponent.unsigned_abs() {
                written.extend_from_slice(one);
            }
        }
        written.reverse();
        CompiledWord {
            group,
            steps: written,
        }
    }

    fn initial_states(&self) -> Vec<usize> {
        self.steps
            .iter()
            .map(|s| match *s {
                Step::Cayley(q) | Step::Reset(q) => q,
            })
            .collect()
    }

    /// Pushes one letter through every transducer, updating `states`.
    #[inline]
    fn feed(&self, states: &mut [usize], mut a: usize) -> usize {
        let g = self.group;
        for (s, q) in self.steps.iter().zip(states.iter_mut()) {
            match s {
                Step::Cayley(_) => {
                    a = g.mul(*q, a);
                    *q = a;
                }
                Step::Reset(_) => {
                    let out = g.mul(g.inv(*q), a);
                    *q = a;
                    a = out;
                }
            }
        }
        a
    }

    pub fn apply(&self, input: &[usize]) -> Vec<usize> {
        let mut states = self.initial_states();
        input.iter().map(|&a| self.feed(&mut states, a)).collect()
    }
}

/// Compares two compiled words on every input word of length `depth`,
/// sharing work across common prefixes. Returns the first input on which
/// the outputs differ.
pub fn first_difference(
    left: &CompiledWord<'_>,
    right: &CompiledWord<'_>,
    depth: usize,
) -> Option<Vec<usize>> {
    let k = left.group.order();
    let mut stack_l = vec![left.initial_states()];
    let mut stack_r = vec![right.initial_states()];
    for _ in 0..depth {
        stack_l.push(stack_l[0].clone());
        stack_r.push(stack_r[0].clone());
    }
    let mut prefix: Vec<usize> = Vec::with_capacity(depth);
    // next[d] = next letter to try at depth d.
    let mut next = vec![0usize; depth + 1];
    let mut d = 0;
    loop {
        if d == depth || next[d] == k {
            if d == 0 {
                return None;
            }
            d -= 1;
            prefix.pop();
            continue;
        }
        let a = next[d];
        next[d] += 1;
        let (lo, hi) = stack_l.split_at_mut(d + 1);
        hi[0].copy_from_slice(&lo[d]);
        let out_l = left.feed(&mut hi[0], a);
        let (lo, hi) = stack_r.split_at_mut(d + 1);
        hi[0].copy_from_slice(&lo[d]);
        let out_r = right.feed(&mut hi[0], a);
        prefix.push(a);
        if out_l != out_r {
            return Some(prefix);
        }
        d += 1;
        if d < depth {
            next[d] = 0;
        } else {
            d -= 1;
            prefix.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;
    use crate::mealy::act;
    use crate::words::{parse, to_machine};

    #[test]
    fn matches_machine_semantics() {
        let q8 = builtin("q8").unwrap();
        for text in [
            "x",
            "x^-1",
            "C(i)",
            "C(j)^-2",
            "i",
            "k^-1",
            "x i x^-1 j",
            "C(i) x^2 -j^3 C(k)^-1",
        ] {
            let w = parse(text, &q8).unwrap();
            let c = CompiledWord::new(&w, &q8);
            let m = to_machine(&w, &q8).unwrap();
            for a in 0..8 {
                for b in 0..8 {
                    for e in [0, 5] {
                        let input = [a, b, e];
                        assert_eq!(
                            c.apply(&input),
                            act(&m, &input).unwrap(),
                            "{text} on {input:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn finds_differences() {
        let q8 = builtin("q8").unwrap();
        let a = CompiledWord::new(&parse("x i x^-1", &q8).unwrap(), &q8);
        let b = CompiledWord::new(&parse("x -i x^-1", &q8).unwrap(), &q8);
        assert_eq!(first_difference(&a, &a, 3), None);
        let w = first_difference(&a, &b, 3).unwrap();
        // x g x^-1 acts on the root by g, so the first letter already differs.
        assert_eq!(w.len(), 1);
        assert_ne!(a.apply(&w), b.apply(&w));
        assert_eq!(first_difference(&a, &b, 0), None);
    }

    #[test]
    fn embedded_acts_on_first_letter() {
        let q8 = builtin("q8").unwrap();
        let i = q8.index_of("i").unwrap();
        let c = CompiledWord::new(&parse("i", &q8).unwrap(), &q8);
        for a in 0..8 {
            assert_eq!(c.apply(&[a, a, a]), vec![q8.mul(i, a), a, a]);
        }
    }
}

//! Letter-to-letter Mealy transducers and the tree automorphisms they define.
//!
//! Composition convention: [`compose(a, b)`](compose) applies `b` to the input
//! word first and feeds its output to `a`. A written product `s1 s2 ... sm`
//! is therefore `compose(s1, compose(s2, ... sm))`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::fingroup::FiniteGroup;

/// Default cap on reachable product states.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MealyError {
    #[error("state {state} does not permute the alphabet")]
    NotInvertible { state: usize },
    #[error("alphabet sizes differ: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("more than {budget} reachable states")]
    StateBudgetExceeded { budget: usize },
    #[error("letter {letter} at position {position} is outside an alphabet of size {alphabet}")]
    LetterOutOfRange {
        letter: usize,
        position: usize,
        alphabet: usize,
    },
    #[error("transition table entry ({state}, {letter}) is out of range")]
    EntryOutOfRange { state: usize, letter: usize },
    #[error("initial state {initial} but only {states} states")]
    BadInitial { initial: usize, states: usize },
    #[error("machine needs at least one state and one letter")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    alphabet: usize,
    labels: Option<Vec<String>>,
    delta: Vec<u32>,
    lambda: Vec<u32>,
}

impl MealyMachine {
    /// `delta` and `lambda` are row-major `states x alphabet` tables.
    pub fn new(
        alphabet: usize,
        labels: Option<Vec<String>>,
        delta: Vec<u32>,
        lambda: Vec<u32>,
    ) -> Result<Self, MealyError> {
        if alphabet == 0 || delta.is_empty() {
            return Err(MealyError::Empty);
        }
        let states = delta.len() / alphabet;
        if delta.len() != states * alphabet || lambda.len() != delta.len() {
            return Err(MealyError::EntryOutOfRange {
                state: states,
                letter: 0,
            });
        }
        for (idx, (&d, &l)) in delta.iter().zip(&lambda).enumerate() {
            if d as usize >= states || l as usize >= alphabet {
                return Err(MealyError::EntryOutOfRange {
                    state: idx / alphabet,
                    letter: idx % alphabet,
                });
            }
        }
        if labels.as_ref().is_some_and(|l| l.len() != states) {
            return Err(MealyError::EntryOutOfRange {
                state: states,
                letter: 0,
            });
        }
        Ok(MealyMachine {
            alphabet,
            labels,
            delta,
            lambda,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len() / self.alphabet
    }

    pub fn state_label(&self, q: usize) -> String {
        match &self.labels {
            Some(l) => l[q].clone(),
            None => format!("q{q}"),
        }
    }

    #[inline]
    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet + a] as usize
    }

    #[inline]
    pub fn output(&self, q: usize, a: usize) -> usize {
        self.lambda[q * self.alphabet + a] as usize
    }

    pub fn output_row(&self, q: usize) -> &[u32] {
        &self.lambda[q * self.alphabet..(q + 1) * self.alphabet]
    }

    pub fn is_identity_state(&self, q: usize) -> bool {
        self.output_row(q)
            .iter()
            .enumerate()
            .all(|(a, &b)| a == b as usize)
    }

    fn non_permuting_state(&self) -> Option<usize> {
        let mut seen = vec![false; self.alphabet];
        (0..self.state_count()).find(|&q| {
            seen.fill(false);
            self.output_row(q)
                .iter()
                .any(|&b| std::mem::replace(&mut seen[b as usize], true))
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.non_permuting_state().is_none()
    }
}

/// The Cayley machine of `group`: states and letters are the elements, and
/// both transition and output are `q * a`.
pub fn cayley_machine(group: &FiniteGroup) -> MealyMachine {
    let k = group.order();
    let table: Vec<u32> = (0..k)
        .flat_map(|q| (0..k).map(move |a| group.mul(q, a) as u32))
        .collect();
    MealyMachine {
        alphabet: k,
        labels: Some(group.labels().to_vec()),
        delta: table.clone(),
        lambda: table,
    }
}

/// Inverse transducer on the same state set: output `lambda(q,.)^-1(a)` and
/// move where the original moves on that preimage.
pub fn invert(m: &MealyMachine) -> Result<MealyMachine, MealyError> {
    if let Some(state) = m.non_permuting_state() {
        return Err(MealyError::NotInvertible { state });
    }
    let k = m.alphabet;
    let mut delta = vec![0; m.delta.len()];
    let mut lambda = vec![0; m.lambda.len()];
    for q in 0..m.state_count() {
        for a in 0..k {
            let b = m.output(q, a);
            lambda[q * k + b] = a as u32;
            delta[q * k + b] = m.delta[q * k + a];
        }
    }
    Ok(MealyMachine {
        alphabet: k,
        labels: m.labels.clone(),
        delta,
        lambda,
    })
}

/// A machine with a distinguished initial state: one automorphism of the
/// rooted `k`-ary tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedMachine {
    machine: MealyMachine,
    initial: usize,
}

impl PointedMachine {
    pub fn new(machine: MealyMachine, initial: usize) -> Result<Self, MealyError> {
        if initial >= machine.state_count() {
            return Err(MealyError::BadInitial {
                initial,
                states: machine.state_count(),
            });
        }
        Ok(PointedMachine { machine, initial })
    }

    pub fn identity(alphabet: usize) -> Self {
        PointedMachine {
            machine: MealyMachine {
                alphabet,
                labels: None,
                delta: vec![0; alphabet],
                lambda: (0..alphabet as u32).collect(),
            },
            initial: 0,
        }
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn alphabet_size(&self) -> usize {
        self.machine.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.machine.state_count()
    }

    /// The same machine pointed at another state.
    pub fn at(&self, state: usize) -> Result<Self, MealyError> {
        PointedMachine::new(self.machine.clone(), state)
    }

    pub fn inverse(&self) -> Result<Self, MealyError> {
        Ok(PointedMachine {
            machine: invert(&self.machine)?,
            initial: self.initial,
        })
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable(&self) -> Vec<usize> {
        let n = self.state_count();
        let mut seen = vec![false; n];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..self.machine.alphabet {
                let r = self.machine.next(q, a);
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
            i += 1;
        }
        order
    }

    /// Runs the machine from its initial state; returns the output and the
    /// state reached.
    pub fn run(&self, word: &[usize]) -> Result<(Vec<usize>, usize), MealyError> {
        let k = self.machine.alphabet;
        let mut q = self.initial;
        let mut out = Vec::with_capacity(word.len());
        for (position, &a) in word.iter().enumerate() {
            if a >= k {
                return Err(MealyError::LetterOutOfRange {
                    letter: a,
                    position,
                    alphabet: k,
                });
            }
            out.push(self.machine.output(q, a));
            q = self.machine.next(q, a);
        }
        Ok((out, q))
    }

    /// Plain-text dump, one line per `(state, letter)`:
    /// `state | input -> output / next-state`.
    pub fn dump(&self, letters: &[String]) -> String {
        let m = &self.machine;
        let mut out = String::new();
        writeln!(
            out,
            "# states {} alphabet {} initial {}",
            m.state_count(),
            m.alphabet,
            m.state_label(self.initial)
        )
        .unwrap();
        for q in 0..m.state_count() {
            let ql = m.state_label(q);
            for a in 0..m.alphabet {
                writeln!(
                    out,
                    "{ql} | {} -> {} / {}",
                    letters[a],
                    letters[m.output(q, a)],
                    m.state_label(m.next(q, a))
                )
                .unwrap();
            }
        }
        out
    }
}

/// Applies `p` to a finite word.
pub fn act(p: &PointedMachine, word: &[usize]) -> Result<Vec<usize>, MealyError> {
    p.run(word).map(|(out, _)| out)
}

pub fn compose(a: &PointedMachine, b: &PointedMachine) -> Result<PointedMachine, MealyError> {
    compose_with_budget(a, b, DEFAULT_STATE_BUDGET)
}

/// Pointed product over the pairs reachable from `(a.initial, b.initial)`;
/// `b` acts first.
pub fn compose_with_budget(
    a: &PointedMachine,
    b: &PointedMachine,
    budget: usize,
) -> Result<PointedMachine, MealyError> {
    let (ma, mb) = (&a.machine, &b.machine);
    if ma.alphabet != mb.alphabet {
        return Err(MealyError::AlphabetMismatch {
            left: ma.alphabet,
            right: mb.alphabet,
        });
    }
    let k = ma.alphabet;
    let key = |p: usize, q: usize| ((p as u64) << 32) | q as u64;
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut pairs = vec![(a.initial, b.initial)];
    ids.insert(key(a.initial, b.initial), 0);
    let mut delta = Vec::new();
    let mut lambda = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for x in 0..k {
            let y = mb.output(q, x);
            let nq = mb.next(q, x);
            let np = ma.next(p, y);
            lambda.push(ma.output(p, y) as u32);
            let next_id = ids.len() as u32;
            let id = *ids.entry(key(np, nq)).or_insert_with(|| {
                pairs.push((np, nq));
                next_id
            });
            if pairs.len() > budget {
                return Err(MealyError::StateBudgetExceeded { budget });
            }
            delta.push(id);
        }
        i += 1;
    }
    Ok(PointedMachine {
        machine: MealyMachine {
            alphabet: k,
            labels: None,
            delta,
            lambda,
        },
        initial: 0,
    })
}

/// Moore-style refinement of `states` (closed under transitions). Returns the
/// class of every listed state, indexed like `machine` states; unlisted
/// states get `u32::MAX`.
fn refine(m: &MealyMachine, states: &[usize]) -> Vec<u32> {
    let mut class = vec![u32::MAX; m.state_count()];
    let mut rows: HashMap<&[u32], u32> = HashMap::new();
    for &q in states {
        let next = rows.len() as u32;
        class[q] = *rows.entry(m.output_row(q)).or_insert(next);
    }
    let mut count = rows.len();
    loop {
        let before = count;
        for a in 0..m.alphabet {
            let mut split: HashMap<(u32, u32), u32> = HashMap::with_capacity(count);
            let mut fresh = vec![0u32; states.len()];
            for (i, &q) in states.iter().enumerate() {
                let sig = (class[q], class[m.next(q, a)]);
                let next = split.len() as u32;
                fresh[i] = *split.entry(sig).or_insert(next);
            }
            for (i, &q) in states.iter().enumerate() {
                class[q] = fresh[i];
            }
            count = split.len();
        }
        if count == before {
            return class;
        }
    }
}

/// Quotient of the reachable part by behavioural equivalence, with classes
/// numbered in BFS order from the initial class. Equivalent inputs therefore
/// minimize to identical machines.
pub fn minimize(p: &PointedMachine) -> PointedMachine {
    let m = &p.machine;
    let k = m.alphabet;
    let reach = p.reachable();
    let class = refine(m, &reach);

    // Representative per class, then renumber classes by BFS over the quotient.
    let mut rep: HashMap<u32, usize> = HashMap::new();
    for &q in &reach {
        rep.entry(class[q]).or_insert(q);
    }
    let mut number: HashMap<u32, u32> = HashMap::new();
    let mut queue = VecDeque::from([class[p.initial]]);
    number.insert(class[p.initial], 0);
    let mut order = Vec::new();
    while let Some(c) = queue.pop_front() {
        order.push(c);
        let q = rep[&c];
        for a in 0..k {
            let d = class[m.next(q, a)];
            if !number.contains_key(&d) {
                number.insert(d, number.len() as u32);
                queue.push_back(d);
            }
        }
    }
    let mut delta = Vec::with_capacity(order.len() * k);
    let mut lambda = Vec::with_capacity(order.len() * k);
    for c in &order {
        let q = rep[c];
        for a in 0..k {
            delta.push(number[&class[m.next(q, a)]]);
            lambda.push(m.output(q, a) as u32);
        }
    }
    let labels = m
        .labels
        .as_ref()
        .map(|l| order.iter().map(|c| l[rep[c]].clone()).collect());
    PointedMachine {
        machine: MealyMachine {
            alphabet: k,
            labels,
            delta,
            lambda,
        },
        initial: 0,
    }
}

/// True iff every reachable state outputs its input unchanged.
pub fn is_identity(p: &PointedMachine) -> bool {
    p.reachable()
        .into_iter()
        .all(|q| p.machine.is_identity_state(q))
}

/// Exact equality of the two tree automorphisms, decided by refining the
/// disjoint union of both machines.
pub fn equal(p: &PointedMachine, q: &PointedMachine) -> Result<bool, MealyError> {
    equal_with_budget(p, q, DEFAULT_STATE_BUDGET)
}

pub fn equal_with_budget(
    p: &PointedMachine,
    q: &PointedMachine,
    budget: usize,
) -> Result<bool, MealyError> {
    let k = p.alphabet_size();
    if k != q.alphabet_size() {
        return Err(MealyError::AlphabetMismatch {
            left: k,
            right: q.alphabet_size(),
        });
    }
    let (rp, rq) = (p.reachable(), q.reachable());
    if rp.len() + rq.len() > budget {
        return Err(MealyError::StateBudgetExceeded { budget });
    }
    let mut index_p = vec![u32::MAX; p.state_count()];
    let mut index_q = vec![u32::MAX; q.state_count()];
    for (i, &s) in rp.iter().enumerate() {
        index_p[s] = i as u32;
    }
    for (i, &s) in rq.iter().enumerate() {
        index_q[s] = (rp.len() + i) as u32;
    }
    let mut delta = Vec::with_capacity((rp.len() + rq.len()) * k);
    let mut lambda = Vec::with_capacity(delta.capacity());
    for &s in &rp {
        for a in 0..k {
            delta.push(index_p[p.machine.next(s, a)]);
            lambda.push(p.machine.output(s, a) as u32);
        }
    }
    for &s in &rq {
        for a in 0..k {
            delta.push(index_q[q.machine.next(s, a)]);
            lambda.push(q.machine.output(s, a) as u32);
        }
    }
    let union = MealyMachine {
        alphabet: k,
        labels: None,
        delta,
        lambda,
    };
    let all: Vec<usize> = (0..rp.len() + rq.len()).collect();
    let class = refine(&union, &all);
    Ok(class[0] == class[rp.len()])
}

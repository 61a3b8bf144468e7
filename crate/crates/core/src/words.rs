//! Generator words over `x`, the embedded copy of the group, and the machine
//! generators `C(g)`.
//!
//! Grammar (tokens separated by whitespace, missing exponent means 1):
//!
//! ```text
//! word  := empty | token (SPACE+ token)*
//! token := base ("^" int)?
//! base  := "x" | "C(" label ")" | label
//! int   := "-"? [0-9]+        (zero rejected)
//! ```

use std::collections::HashMap;
use std::fmt;

use crate::fingroup::{FiniteGroup, RESERVED_LABEL};
use crate::mealy::{
    cayley_machine, compose_with_budget, invert, minimize, MealyError, PointedMachine,
    DEFAULT_STATE_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown label {label:?} at byte {position}")]
    UnknownLabel { label: String, position: usize },
    #[error("zero exponent at byte {position}")]
    ZeroExponent { position: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    /// An element of the group, identified with `x C(g)`.
    Embedded(usize),
    /// The Cayley machine pointed at state `g`.
    StateGen(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Token {
    pub letter: Letter,
    pub exponent: i64,
}

impl Token {
    pub fn new(letter: Letter, exponent: i64) -> Self {
        Token { letter, exponent }
    }

    pub fn inverse(self) -> Self {
        Token {
            letter: self.letter,
            exponent: -self.exponent,
        }
    }
}

/// A literal, unreduced word; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GenWord {
    tokens: Vec<Token>,
}

impl GenWord {
    pub fn new() -> Self {
        GenWord::default()
    }

    /// Builds a word from tokens, dropping zero exponents.
    pub fn from_tokens(tokens: impl IntoIterator<Item = Token>) -> Self {
        GenWord {
            tokens: tokens.into_iter().filter(|t| t.exponent != 0).collect(),
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push(&mut self, letter: Letter, exponent: i64) {
        if exponent != 0 {
            self.tokens.push(Token { letter, exponent });
        }
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        GenWord { tokens }
    }

    pub fn inverse(&self) -> GenWord {
        GenWord {
            tokens: self.tokens.iter().rev().map(|t| t.inverse()).collect(),
        }
    }

    /// Merges adjacent tokens over the same letter and drops the ones whose
    /// exponents cancel.
    pub fn free_reduce(&self) -> GenWord {
        let mut out: Vec<Token> = Vec::with_capacity(self.tokens.len());
        for &t in &self.tokens {
            match out.last_mut() {
                Some(last) if last.letter == t.letter => {
                    last.exponent += t.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        GenWord { tokens: out }
    }

    /// Sum of the `x`-exponents after expanding `C(g) = x^-1 g`.
    pub fn x_exponent(&self) -> i64 {
        self.tokens
            .iter()
            .map(|t| match t.letter {
                Letter::X => t.exponent,
                Letter::StateGen(_) => -t.exponent,
                Letter::Embedded(_) => 0,
            })
            .sum()
    }
}

fn syntax(position: usize, message: impl Into<String>) -> WordError {
    WordError::SyntaxError {
        position,
        message: message.into(),
    }
}

fn parse_exponent(text: &str, position: usize) -> Result<i64, WordError> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(position, format!("bad exponent {text:?}")));
    }
    let e: i64 = text
        .parse()
        .map_err(|_| syntax(position, format!("exponent {text:?} out of range")))?;
    if e == 0 {
        return Err(WordError::ZeroExponent { position });
    }
    Ok(e)
}

fn parse_token(text: &str, start: usize, group: &FiniteGroup) -> Result<Token, WordError> {
    let lookup = |label: &str, position: usize| {
        group
            .index_of(label)
            .ok_or_else(|| WordError::UnknownLabel {
                label: label.to_string(),
                position,
            })
    };
    let (letter, rest, rest_at) = if let Some(inner) = text.strip_prefix("C(") {
        let close = inner
            .find(')')
            .ok_or_else(|| syntax(start + text.len(), "missing ')'"))?;
        let label = &inner[..close];
        if label.is_empty() {
            return Err(syntax(start + 2, "empty label in C(...)"));
        }
        let g = lookup(label, start + 2)?;
        (Letter::StateGen(g), &inner[close + 1..], start + 3 + close)
    } else {
        let split = text.find('^').unwrap_or(text.len());
        let base = &text[..split];
        if base.is_empty() {
            return Err(syntax(start, "missing generator before '^'"));
        }
        if let Some(bad) = base.find(['(', ')']) {
            return Err(syntax(
                start + bad,
                format!("unexpected {:?}", &base[bad..bad + 1]),
            ));
        }
        let letter = if base == RESERVED_LABEL {
            Letter::X
        } else {
            Letter::Embedded(lookup(base, start)?)
        };
        (letter, &text[split..], start + split)
    };
    let exponent = match rest.strip_prefix('^') {
        Some(e) => parse_exponent(e, rest_at + 1)?,
        None if rest.is_empty() => 1,
        None => return Err(syntax(rest_at, format!("unexpected {rest:?}"))),
    };
    Ok(Token { letter, exponent })
}

/// Parses a word; error positions are byte offsets into `text`.
pub fn parse(text: &str, group: &FiniteGroup) -> Result<GenWord, WordError> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices().chain([(text.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(parse_token(&text[s..i], s, group)?);
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    Ok(GenWord { tokens })
}

/// Canonical spelling: single spaces, exponent 1 omitted.
pub fn format(w: &GenWord, group: &FiniteGroup) -> String {
    let parts: Vec<String> = w
        .tokens
        .iter()
        .map(|t| {
            let base = match t.letter {
                Letter::X => RESERVED_LABEL.to_string(),
                Letter::Embedded(g) => group.label(g).to_string(),
                Letter::StateGen(g) => format!("C({})", group.label(g)),
            };
            if t.exponent == 1 {
                base
            } else {
                format!("{base}^{}", t.exponent)
            }
        })
        .collect();
    parts.join(" ")
}

/// `(prod x^level f x^-level) * x^t`, in written order and not normalized.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConjugateSequence {
    pub factors: Vec<(i64, usize)>,
    pub t: i64,
}

impl ConjugateSequence {
    pub fn level_range(&self) -> Option<(i64, i64)> {
        let min = self.factors.iter().map(|f| f.0).min()?;
        let max = self.factors.iter().map(|f| f.0).max()?;
        Some((min, max))
    }

    /// Re-expands into `x^l f x^-l ... x^t`.
    pub fn to_word(&self) -> GenWord {
        let mut w = GenWord::new();
        for &(level, f) in &self.factors {
            w.push(Letter::X, level);
            w.push(Letter::Embedded(f), 1);
            w.push(Letter::X, -level);
        }
        w.push(Letter::X, self.t);
        w
    }
}

/// Expands `C(g) = x^-1 g` and moves every power of `x` to the right end.
pub fn to_conjugates(w: &GenWord, group: &FiniteGroup) -> ConjugateSequence {
    let mut factors = Vec::new();
    let mut s = 0i64;
    let mut emit = |level: i64, g: usize| {
        if g != 0 {
            factors.push((level, g));
        }
    };
    for t in &w.tokens {
        match t.letter {
            Letter::X => s += t.exponent,
            Letter::Embedded(g) => emit(s, group.pow(g, t.exponent)),
            Letter::StateGen(g) => {
                let gi = group.inv(g);
                for _ in 0..t.exponent.unsigned_abs() {
                    if t.exponent > 0 {
                        s -= 1;
                        emit(s, g);
                    } else {
                        emit(s, gi);
                        s += 1;
                    }
                }
            }
        }
    }
    ConjugateSequence { factors, t: s }
}

/// Builds pointed machines for words over one group, caching the generator
/// and conjugate machines.
pub struct WordMachines<'g> {
    group: &'g FiniteGroup,
    budget: usize,
    cayley: PointedMachine,
    x: PointedMachine,
    x_inv: PointedMachine,
    conjugates: HashMap<(i64, usize), PointedMachine>,
}

impl<'g> WordMachines<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        Self::with_budget(group, DEFAULT_STATE_BUDGET)
    }

    pub fn with_budget(group: &'g FiniteGroup, budget: usize) -> Self {
        let c = cayley_machine(group);
        let inv = invert(&c).expect("Cayley machines are invertible");
        let cayley = PointedMachine::new(c, 0).expect("identity state");
        let x = PointedMachine::new(inv, 0).expect("identity state");
        WordMachines {
            group,
            budget,
            x_inv: cayley.clone(),
            cayley,
            x,
            conjugates: HashMap::new(),
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// `x`, the inverse Cayley machine pointed at the identity.
    pub fn x(&self) -> &PointedMachine {
        &self.x
    }

    /// `C(g)`.
    pub fn state_gen(&self, g: usize) -> PointedMachine {
        self.cayley.at(g).expect("state in range")
    }

    pub fn identity(&self) -> PointedMachine {
        PointedMachine::identity(self.group.order())
    }

    /// `left * right` (right acts first), minimized.
    pub fn product(
        &self,
        left: &PointedMachine,
        right: &PointedMachine,
    ) -> Result<PointedMachine, MealyError> {
        Ok(minimize(&compose_with_budget(left, right, self.budget)?))
    }

    fn letter(&self, letter: Letter, positive: bool) -> Result<PointedMachine, MealyError> {
        Ok(match (letter, positive) {
            (Letter::X, true) => self.x.clone(),
            (Letter::X, false) => self.x_inv.clone(),
            (Letter::StateGen(g), true) => self.state_gen(g),
            (Letter::StateGen(g), false) => self.state_gen(g).inverse()?,
            (Letter::Embedded(g), true) => self.product(&self.x, &self.state_gen(g))?,
            (Letter::Embedded(g), false) => {
                self.product(&self.state_gen(g).inverse()?, &self.x_inv)?
            }
        })
    }

    /// Literal pointed product of the letters, rightmost acting first,
    /// minimized after every factor.
    pub fn to_machine(&self, w: &GenWord) -> Result<PointedMachine, MealyError> {
        let mut acc = self.identity();
        for t in w.tokens.iter().rev() {
            let m = self.letter(t.letter, t.exponent > 0)?;
            for _ in 0..t.exponent.unsigned_abs() {
                acc = self.product(&m, &acc)?;
            }
        }
        Ok(acc)
    }

    /// Machine of `x^level g x^-level`, built by repeated conjugation.
    pub fn conjugate(&mut self, level: i64, g: usize) -> Result<PointedMachine, MealyError> {
        if let Some(m) = self.conjugates.get(&(level, g)) {
            return Ok(m.clone());
        }
        let m = match level {
            0 => self.letter(Letter::Embedded(g), true)?,
            l if l > 0 => {
                let inner = self.conjugate(l - 1, g)?;
                let right = self.product(&inner, &self.x_inv)?;
                self.product(&self.x, &right)?
            }
            l => {
                let inner = self.conjugate(l + 1, g)?;
                let right = self.product(&inner, &self.x)?;
                self.product(&self.x_inv, &right)?
            }
        };
        self.conjugates.insert((level, g), m.clone());
        Ok(m)
    }

    /// Machine of the product of the conjugate factors only (the trailing
    /// `x^t` is not included).
    pub fn factors_machine(
        &mut self,
        factors: &[(i64, usize)],
    ) -> Result<PointedMachine, MealyError> {
        let mut acc = self.identity();
        for &(level, g) in factors.iter().rev() {
            let m = self.conjugate(level, g)?;
            acc = self.product(&m, &acc)?;
        }
        Ok(acc)
    }

    pub fn x_power(&self, t: i64) -> Result<PointedMachine, MealyError> {
        let step = if t >= 0 { &self.x } else { &self.x_inv };
        let mut acc = self.identity();
        for _ in 0..t.unsigned_abs() {
            acc = self.product(step, &acc)?;
        }
        Ok(acc)
    }

    /// Machine of a conjugate sequence including its `x^t` factor.
    pub fn sequence_machine(
        &mut self,
        seq: &ConjugateSequence,
    ) -> Result<PointedMachine, MealyError> {
        let n = self.factors_machine(&seq.factors)?;
        let xt = self.x_power(seq.t)?;
        self.product(&n, &xt)
    }
}

/// Literal machine of `w`, rightmost letter acting first.
pub fn to_machine(w: &GenWord, group: &FiniteGroup) -> Result<PointedMachine, MealyError> {
    WordMachines::new(group).to_machine(w)
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X => f.write_str("x"),
            Letter::Embedded(g) => write!(f, "g{g}"),
            Letter::StateGen(g) => write!(f, "C(g{g})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;
    use crate::mealy::{act, equal};

    fn q8() -> FiniteGroup {
        builtin("q8").unwrap()
    }

    #[test]
    fn parses_examples() {
        let g = q8();
        let i = g.index_of("i").unwrap();
        let j = g.index_of("j").unwrap();
        assert_eq!(
            parse("x^2 i x^-2", &g).unwrap().tokens(),
            &[
                Token::new(Letter::X, 2),
                Token::new(Letter::Embedded(i), 1),
                Token::new(Letter::X, -2)
            ]
        );
        assert_eq!(
            parse("C(i)^-1 C(j)", &g).unwrap().tokens(),
            &[
                Token::new(Letter::StateGen(i), -1),
                Token::new(Letter::StateGen(j), 1)
            ]
        );
        assert!(parse("", &g).unwrap().is_empty());
        assert!(parse("   ", &g).unwrap().is_empty());
        let neg = parse("-1^-1  -i", &g).unwrap();
        assert_eq!(format(&neg, &g), "-1^-1 -i");
    }

    #[test]
    fn parse_errors() {
        let g = q8();
        assert_eq!(
            parse("x i q", &g),
            Err(WordError::UnknownLabel {
                label: "q".into(),
                position: 4
            })
        );
        assert_eq!(
            parse("x^0", &g),
            Err(WordError::ZeroExponent { position: 2 })
        );
        assert!(matches!(
            parse("x^", &g),
            Err(WordError::SyntaxError { position: 2, .. })
        ));
        assert!(matches!(
            parse("i C(j", &g),
            Err(WordError::SyntaxError { position: 5, .. })
        ));
        assert!(matches!(
            parse("x [?]", &g),
            Err(WordError::UnknownLabel { position: 2, .. })
        ));
        assert!(matches!(
            parse("j (i)", &g),
            Err(WordError::SyntaxError { position: 2, .. })
        ));
        assert!(matches!(
            parse("C(i)x", &g),
            Err(WordError::SyntaxError { position: 4, .. })
        ));
        assert!(matches!(
            parse("x^1a", &g),
            Err(WordError::SyntaxError { .. })
        ));
        assert!(matches!(
            parse("C()", &g),
            Err(WordError::SyntaxError { .. })
        ));
    }

    #[test]
    fn conjugate_rewriting() {
        let g = q8();
        let (i, j) = (g.index_of("i").unwrap(), g.index_of("j").unwrap());
        let s = to_conjugates(&parse("x i x^-1 j", &g).unwrap(), &g);
        assert_eq!(
            s,
            ConjugateSequence {
                factors: vec![(1, i), (0, j)],
                t: 0
            }
        );
        let s = to_conjugates(&parse("C(i)", &g).unwrap(), &g);
        assert_eq!(
            s,
            ConjugateSequence {
                factors: vec![(-1, i)],
                t: -1
            }
        );
        let s = to_conjugates(&parse("x^3", &g).unwrap(), &g);
        assert_eq!(
            s,
            ConjugateSequence {
                factors: vec![],
                t: 3
            }
        );
        let s = to_conjugates(&parse("C(i)^-2 1 i^4", &g).unwrap(), &g);
        assert_eq!(
            s,
            ConjugateSequence {
                factors: vec![(0, g.inv(i)), (1, g.inv(i))],
                t: 2
            }
        );
    }

    #[test]
    fn free_reduction() {
        let g = q8();
        let w = parse("x x^-1 i i^-1 x^2 C(j) C(j)^-1 x^-1", &g).unwrap();
        assert_eq!(format(&w.free_reduce(), &g), "x");
    }

    #[test]
    fn machine_examples() {
        let g = q8();
        let wm = WordMachines::new(&g);
        for h in 0..8 {
            let label = g.label(h);
            let lhs = wm
                .to_machine(&parse(&format!("x C({label})"), &g).unwrap())
                .unwrap();
            let rhs = wm.to_machine(&parse(label, &g).unwrap()).unwrap();
            assert!(equal(&lhs, &rhs).unwrap());
        }
        assert!(equal(&wm.to_machine(&GenWord::new()).unwrap(), &wm.identity()).unwrap());
        let c_e_inv = wm.to_machine(&parse("C(1)^-1", &g).unwrap()).unwrap();
        assert!(equal(&c_e_inv, wm.x()).unwrap());
        let emb = to_machine(&parse("x C(i)", &g).unwrap(), &g).unwrap();
        let (j, k) = (g.index_of("j").unwrap(), g.index_of("k").unwrap());
        assert_eq!(act(&emb, &[j, k]).unwrap(), vec![k, k]);
    }

    #[test]
    fn conjugate_machines_match_literal_words() {
        let g = q8();
        let mut wm = WordMachines::new(&g);
        let i = g.index_of("i").unwrap();
        for level in -2..=3 {
            let lit = wm
                .to_machine(&GenWord::from_tokens([
                    Token::new(Letter::X, level),
                    Token::new(Letter::Embedded(i), 1),
                    Token::new(Letter::X, -level),
                ]))
                .unwrap();
            assert_eq!(wm.conjugate(level, i).unwrap(), lit, "level {level}");
        }
    }

    #[test]
    fn sequence_machine_matches_literal() {
        let g = q8();
        let mut wm = WordMachines::new(&g);
        for text in [
            "x i x^-1 j",
            "C(i)^2 x j^-1 C(k)",
            "x^-2 k x C(-1) i^3",
            "C(j)^-1 x^2 i",
        ] {
            let w = parse(text, &g).unwrap();
            let seq = to_conjugates(&w, &g);
            assert_eq!(seq.t, w.x_exponent());
            let lit = wm.to_machine(&w).unwrap();
            assert_eq!(wm.sequence_machine(&seq).unwrap(), lit, "{text}");
            assert_eq!(wm.to_machine(&seq.to_word()).unwrap(), lit, "{text}");
        }
    }
}

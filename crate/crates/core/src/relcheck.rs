//! Verification harness for the commutator relations, the wreath recursion
//! of the conjugates `x^n g x^-n`, their depth, and agreement between the
//! normal-form and machine equality tests.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{first_difference, CompiledWord};
use crate::coeffs::CoeffMatrix;
use crate::fingroup::FiniteGroup;
use crate::mealy::{self, MealyError, MealyMachine, PointedMachine};
use crate::normalform::{nf_equal, NfError, NormalForm, Normalizer};
use crate::words::{format, to_conjugates, GenWord, Letter, Token, WordMachines};

/// Default cap on the number of input words the action method enumerates.
pub const DEFAULT_ACTION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("relation for n={n} needs coefficients beyond n_max={n_max}")]
    CoeffRangeExceeded { n: usize, n_max: usize },
    #[error(transparent)]
    Machine(#[from] MealyError),
    #[error("action check needs {words} input words, above the budget of {budget}")]
    ActionCostExceeded { words: u128, budget: u64 },
    #[error(transparent)]
    NormalForm(#[from] NfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Machine,
    Action,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Machine => "machine",
            Method::Action => "action",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Relation,
    Wreath,
    Depth,
    CrossValidate,
    RoundTrip,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Relation => "relation",
            CheckKind::Wreath => "wreath",
            CheckKind::Depth => "depth",
            CheckKind::CrossValidate => "xval",
            CheckKind::RoundTrip => "roundtrip",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    Vacuous,
    Error(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Vacuous)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail { .. } => "FAIL",
            Verdict::Vacuous => "VACUOUS",
            Verdict::Error(_) => "ERROR",
        }
    }
}

impl From<Result<Verdict, CheckError>> for Verdict {
    fn from(r: Result<Verdict, CheckError>) -> Self {
        r.unwrap_or_else(|e| Verdict::Error(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub n: usize,
    pub g: Option<usize>,
    pub h: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub group: String,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(group: &FiniteGroup) -> Self {
        VerificationReport {
            group: group.name().to_string(),
            checks: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn total(&self) -> usize {
        self.checks.len()
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.verdict.is_pass()).count()
    }

    pub fn failed(&self) -> usize {
        self.total() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.verdict.is_pass())
    }

    fn sort(&mut self) {
        self.checks.sort_by_key(|c| (c.kind, c.n, c.g, c.h));
    }

    /// `CHECK <id> n=<n> g=<label> h=<label> <PASS|FAIL>`; `-` marks an
    /// absent element.
    pub fn check_line(check: &Check, group: &FiniteGroup) -> String {
        let label = |e: Option<usize>| e.map_or("-", |i| group.label(i)).to_string();
        format!(
            "CHECK {} n={} g={} h={} {}",
            check.kind,
            check.n,
            label(check.g),
            label(check.h),
            check.verdict.tag()
        )
    }

    pub fn summary(&self) -> String {
        format!("{} checks, {} pass", self.total(), self.passed())
    }
}

/// Runs checks against one group, caching machines between checks.
pub struct Verifier<'g> {
    group: &'g FiniteGroup,
    machines: WordMachines<'g>,
    coeffs: CoeffMatrix,
    action_budget: u64,
}

impl<'g> Verifier<'g> {
    /// `n_max` sizes the coefficient matrix and bounds the relations that can
    /// be checked.
    pub fn new(group: &'g FiniteGroup, n_max: usize) -> Self {
        Self::with_budgets(
            group,
            n_max,
            mealy::DEFAULT_STATE_BUDGET,
            DEFAULT_ACTION_BUDGET,
        )
    }

    pub fn with_budgets(
        group: &'g FiniteGroup,
        n_max: usize,
        state_budget: usize,
        action_budget: u64,
    ) -> Self {
        Verifier {
            group,
            machines: WordMachines::with_budget(group, state_budget),
            coeffs: CoeffMatrix::build_recursive(n_max.max(1)).expect("n_max >= 1"),
            action_budget,
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn machines(&mut self) -> &mut WordMachines<'g> {
        &mut self.machines
    }

    /// `[x^n g x^-n, h]` spelled out as `x^n g^-1 x^-n h^-1 x^n g x^-n h`.
    pub fn relation_lhs(&self, n: usize, g: usize, h: usize) -> GenWord {
        let n = n as i64;
        let grp = self.group;
        GenWord::from_tokens([
            Token::new(Letter::X, n),
            Token::new(Letter::Embedded(grp.inv(g)), 1),
            Token::new(Letter::X, -n),
            Token::new(Letter::Embedded(grp.inv(h)), 1),
            Token::new(Letter::X, n),
            Token::new(Letter::Embedded(g), 1),
            Token::new(Letter::X, -n),
            Token::new(Letter::Embedded(h), 1),
        ])
    }

    /// `prod_{j=1}^n x^j [g^-1, h^a(n,j)] x^-j` with commutators evaluated in
    /// the group and trivial factors left out.
    pub fn relation_rhs(&self, n: usize, g: usize, h: usize) -> Result<GenWord, CheckError> {
        if n > self.coeffs.n_max() {
            return Err(CheckError::CoeffRangeExceeded {
                n,
                n_max: self.coeffs.n_max(),
            });
        }
        let grp = self.group;
        let gi = grp.inv(g);
        let mut w = GenWord::new();
        for j in 1..=n {
            let c = grp.comm(gi, grp.pow_big(h, self.coeffs.get(n, j)));
            if c != 0 {
                w.push(Letter::X, j as i64);
                w.push(Letter::Embedded(c), 1);
                w.push(Letter::X, -(j as i64));
            }
        }
        Ok(w)
    }

    fn witness_pair(&self, lhs: &GenWord, rhs: &GenWord) -> String {
        format!(
            "lhs=\"{}\" rhs=\"{}\"",
            format(lhs, self.group),
            format(rhs, self.group)
        )
    }

    /// Checks `[x^n g x^-n, h] = prod_j x^j [g^-1, h^a(n,j)] x^-j`.
    pub fn verify_relation(
        &mut self,
        n: usize,
        g: usize,
        h: usize,
        method: Method,
    ) -> Result<Verdict, CheckError> {
        let lhs = self.relation_lhs(n, g, h);
        let rhs = self.relation_rhs(n, g, h)?;
        let equal = match method {
            Method::Machine => self.machine_equal(&lhs, &rhs)?,
            Method::Action => match self.action_difference(&lhs, &rhs)? {
                None => true,
                Some(input) => {
                    let labels: Vec<&str> = input.iter().map(|&a| self.group.label(a)).collect();
                    return Ok(Verdict::Fail {
                        witness: format!(
                            "{} input=\"{}\"",
                            self.witness_pair(&lhs, &rhs),
                            labels.join(" ")
                        ),
                    });
                }
            },
        };
        Ok(if equal {
            Verdict::Pass
        } else {
            Verdict::Fail {
                witness: self.witness_pair(&lhs, &rhs),
            }
        })
    }

    /// Runs every relation with `1 <= n <= n_max` over all ordered pairs.
    pub fn verify_all(&mut self, n_max: usize, method: Method) -> VerificationReport {
        let start = Instant::now();
        let mut report = VerificationReport::new(self.group);
        let k = self.group.order();
        for n in 1..=n_max {
            for g in 0..k {
                for h in 0..k {
                    report.checks.push(Check {
                        kind: CheckKind::Relation,
                        n,
                        g: Some(g),
                        h: Some(h),
                        verdict: self.verify_relation(n, g, h, method).into(),
                    });
                }
            }
        }
        report.sort();
        report.elapsed = start.elapsed();
        report
    }

    /// Machine equality of two words. Words with different `x`-exponents
    /// are unequal; otherwise the parts in the conjugate subgroup are
    /// compared after a common shift to non-negative levels.
    pub fn machine_equal(&mut self, u: &GenWord, v: &GenWord) -> Result<bool, CheckError> {
        let su = to_conjugates(u, self.group);
        let sv = to_conjugates(v, self.group);
        if su.t != sv.t {
            return Ok(false);
        }
        let shift = su
            .factors
            .iter()
            .chain(&sv.factors)
            .map(|f| f.0)
            .min()
            .unwrap_or(0)
            .min(0);
        let shifted =
            |f: &[(i64, usize)]| f.iter().map(|&(l, g)| (l - shift, g)).collect::<Vec<_>>();
        let mu = self.machines.factors_machine(&shifted(&su.factors))?;
        let mv = self.machines.factors_machine(&shifted(&sv.factors))?;
        Ok(mealy::equal_with_budget(&mu, &mv, self.machines.budget())?)
    }

    /// Action comparison of two words: an input word on which they differ,
    /// or `None` if they are equal. Both are conjugated by `x^-min level` so
    /// their quotient has depth at most `span + 1`, and then compared on all
    /// input words of that length.
    pub fn action_difference(
        &self,
        u: &GenWord,
        v: &GenWord,
    ) -> Result<Option<Vec<usize>>, CheckError> {
        let su = to_conjugates(u, self.group);
        let sv = to_conjugates(v, self.group);
        if su.t != sv.t {
            // Some word is moved differently once x^t acts; find one by
            // brute force on short inputs.
            for depth in 1..=4 {
                let l = CompiledWord::new(u, self.group);
                let r = CompiledWord::new(v, self.group);
                if let Some(w) = first_difference(&l, &r, depth) {
                    return Ok(Some(w));
                }
            }
            return Ok(Some(Vec::new()));
        }
        let levels = || su.factors.iter().chain(&sv.factors).map(|f| f.0);
        let (lo, hi) = match (levels().min(), levels().max()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Ok(None),
        };
        let depth = (hi - lo + 1) as u32;
        let words = (self.group.order() as u128).pow(depth);
        if words > self.action_budget as u128 {
            return Err(CheckError::ActionCostExceeded {
                words,
                budget: self.action_budget,
            });
        }
        let shift = GenWord::from_tokens([Token::new(Letter::X, -lo)]);
        let l = CompiledWord::new(&shift.concat(u), self.group);
        let r = CompiledWord::new(&shift.concat(v), self.group);
        Ok(first_difference(&l, &r, depth as usize))
    }

    /// The machine of `x^n g x^-n` sends a first letter `a` to `g a` and then
    /// continues as `C(ga)^-n C(a)^n`.
    pub fn verify_wreath_coords(&mut self, g: usize, n: usize) -> Result<Verdict, CheckError> {
        let grp = self.group;
        let p = self.machines.conjugate(n as i64, g)?;
        for a in 0..grp.order() {
            let (out, state) = p.run(&[a])?;
            let ga = grp.mul(g, a);
            if out[0] != ga {
                return Ok(Verdict::Fail {
                    witness: format!("letter {} maps to {}", grp.label(a), grp.label(out[0])),
                });
            }
            let residual = p.at(state)?;
            let expect = GenWord::from_tokens([
                Token::new(Letter::StateGen(ga), -(n as i64)),
                Token::new(Letter::StateGen(a), n as i64),
            ]);
            let m = self.machines.to_machine(&expect)?;
            if !mealy::equal_with_budget(&residual, &m, self.machines.budget())? {
                return Ok(Verdict::Fail {
                    witness: format!(
                        "residual at {} differs from \"{}\"",
                        grp.label(a),
                        format(&expect, grp)
                    ),
                });
            }
        }
        Ok(Verdict::Pass)
    }

    /// `x^n g x^-n` has depth exactly `n + 1`: every state reached after
    /// `n + 1` letters is the identity, some state reached after `n` letters
    /// is not, and sampled long words are only changed in their first
    /// `n + 1` letters.
    pub fn verify_depth(&mut self, g: usize, n: usize, seed: u64) -> Result<Verdict, CheckError> {
        if g == 0 {
            return Ok(Verdict::Vacuous);
        }
        let grp = self.group;
        let p = self.machines.conjugate(n as i64, g)?;
        let m = p.machine();
        let k = grp.order();

        // Breadth-first layers with one witness input per state.
        let mut layer: Vec<(usize, Vec<usize>)> = vec![(p.initial(), Vec::new())];
        for _ in 0..n {
            let mut seen = std::collections::HashSet::new();
            let mut next = Vec::new();
            for (q, w) in &layer {
                for a in 0..k {
                    let r = m.next(*q, a);
                    if seen.insert(r) {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((r, w2));
                    }
                }
            }
            layer = next;
        }
        let moving = layer.iter().find(|(q, _)| !m.is_identity_state(*q));
        let Some((q, prefix)) = moving else {
            return Ok(Verdict::Fail {
                witness: format!("no word is changed at position {}", n + 1),
            });
        };
        let a = (0..k)
            .find(|&a| m.output(*q, a) != a)
            .expect("non-identity state");
        let mut witness = prefix.clone();
        witness.push(a);
        let out = mealy::act(&p, &witness)?;
        if out[n] == witness[n] {
            return Ok(Verdict::Fail {
                witness: "witness search inconsistent".into(),
            });
        }

        for (q, _) in &layer {
            for a in 0..k {
                let r = m.next(*q, a);
                if !mealy::is_identity(&p.at(r)?) {
                    return Ok(Verdict::Fail {
                        witness: format!("state after {} letters is not the identity", n + 1),
                    });
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let len = n + 1 + rng.gen_range(1..=3 * n + 8);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..k)).collect();
            let out = mealy::act(&p, &w)?;
            if out[n + 1..] != w[n + 1..] {
                return Ok(Verdict::Fail {
                    witness: "a letter beyond the depth moved".into(),
                });
            }
        }
        Ok(Verdict::Pass)
    }

    /// Wreath-coordinate checks for every `g` and `0 <= n <= n_max`.
    pub fn verify_all_wreath(&mut self, n_max: usize) -> VerificationReport {
        let start = Instant::now();
        let mut report = VerificationReport::new(self.group);
        for n in 0..=n_max {
            for g in 0..self.group.order() {
                report.checks.push(Check {
                    kind: CheckKind::Wreath,
                    n,
                    g: Some(g),
                    h: None,
                    verdict: self.verify_wreath_coords(g, n).into(),
                });
            }
        }
        report.sort();
        report.elapsed = start.elapsed();
        report
    }

    /// Depth checks for every non-identity `g` and `0 <= n <= n_max`.
    pub fn verify_all_depth(&mut self, n_max: usize, seed: u64) -> VerificationReport {
        let start = Instant::now();
        let mut report = VerificationReport::new(self.group);
        for n in 0..=n_max {
            for g in 1..self.group.order() {
                report.checks.push(Check {
                    kind: CheckKind::Depth,
                    n,
                    g: Some(g),
                    h: None,
                    verdict: self
                        .verify_depth(g, n, seed ^ (n as u64) << 16 ^ g as u64)
                        .into(),
                });
            }
        }
        report.sort();
        report.elapsed = start.elapsed();
        report
    }
}

/// Outcome counts of a cross-validation run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct XvalStats {
    pub pairs: usize,
    pub agree: usize,
    pub equal: usize,
    pub unequal: usize,
    pub roundtrips: usize,
    pub roundtrips_ok: usize,
}

/// Seeded random words and normal forms for one group.
pub struct WordSampler<'g> {
    group: &'g FiniteGroup,
    rng: ChaCha8Rng,
    center: Vec<usize>,
}

impl<'g> WordSampler<'g> {
    pub fn new(group: &'g FiniteGroup, seed: u64) -> Self {
        WordSampler {
            group,
            rng: ChaCha8Rng::seed_from_u64(seed),
            center: group.center().into_iter().filter(|&z| z != 0).collect(),
        }
    }

    fn element(&mut self) -> usize {
        let k = self.group.order();
        if k == 1 {
            0
        } else {
            self.rng.gen_range(1..k)
        }
    }

    fn token(&mut self) -> Token {
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        match self.rng.gen_range(0..3) {
            0 => Token::new(Letter::X, sign * self.rng.gen_range(1..=2)),
            1 => Token::new(Letter::Embedded(self.element()), sign),
            _ => Token::new(Letter::StateGen(self.element()), sign),
        }
    }

    pub fn word(&mut self, max_len: usize) -> GenWord {
        let len = self.rng.gen_range(0..=max_len);
        GenWord::from_tokens((0..len).map(|_| self.token()))
    }

    /// A word equal to `w` by free cancellation, `C(g) = x^-1 g`, and
    /// splitting powers of `x`.
    pub fn trivially_equal(&mut self, w: &GenWord) -> GenWord {
        let mut tokens: Vec<Token> = Vec::new();
        for &t in w.tokens() {
            match t.letter {
                Letter::StateGen(g) if self.rng.gen_bool(0.5) => {
                    for _ in 0..t.exponent.unsigned_abs() {
                        if t.exponent > 0 {
                            tokens.push(Token::new(Letter::X, -1));
                            tokens.push(Token::new(Letter::Embedded(g), 1));
                        } else {
                            tokens.push(Token::new(Letter::Embedded(g), -1));
                            tokens.push(Token::new(Letter::X, 1));
                        }
                    }
                }
                Letter::X if t.exponent.abs() > 1 && self.rng.gen_bool(0.5) => {
                    let s = t.exponent.signum();
                    tokens.push(Token::new(Letter::X, s));
                    tokens.push(Token::new(Letter::X, t.exponent - s));
                }
                _ => tokens.push(t),
            }
        }
        let pos = self.rng.gen_range(0..=tokens.len());
        let t = self.token();
        tokens.splice(pos..pos, [t, t.inverse()]);
        GenWord::from_tokens(tokens)
    }

    /// Inserts `lhs * rhs^-1` of a commutator relation into `w`.
    pub fn with_relation(&mut self, w: &GenWord, lhs: &GenWord, rhs: &GenWord) -> GenWord {
        let rel = lhs.concat(&rhs.inverse());
        let pos = self.rng.gen_range(0..=w.len());
        let mut tokens = w.tokens().to_vec();
        tokens.splice(pos..pos, rel.tokens().iter().copied());
        GenWord::from_tokens(tokens)
    }

    /// Inserts `x^l z x^-l` for a non-trivial central `z`; the result is a
    /// different element. Falls back to inserting `x` for centerless groups.
    pub fn perturbed(&mut self, w: &GenWord) -> GenWord {
        let insert = match self.center.choose(&mut self.rng) {
            Some(&z) => {
                let l = self.rng.gen_range(-3..=3);
                GenWord::from_tokens([
                    Token::new(Letter::X, l),
                    Token::new(Letter::Embedded(z), 1),
                    Token::new(Letter::X, -l),
                ])
            }
            None => GenWord::from_tokens([Token::new(Letter::X, 1)]),
        };
        let pos = self.rng.gen_range(0..=w.len());
        let mut tokens = w.tokens().to_vec();
        tokens.splice(pos..pos, insert.tokens().iter().copied());
        GenWord::from_tokens(tokens)
    }

    pub fn normal_form(&mut self, nz: &Normalizer<'_>) -> NormalForm {
        let count = self.rng.gen_range(0..=6);
        let mut levels = Vec::new();
        for _ in 0..count {
            levels.push((self.rng.gen_range(-6..=6), self.element()));
        }
        let t = self.rng.gen_range(-4..=4);
        nz.from_levels(levels, t)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Compares normal-form equality with machine equality on `count` seeded word
/// pairs, and checks `normalize(to_word(A)) == A` on `count` random normal
/// forms.
pub fn cross_validate(
    group: &FiniteGroup,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<(VerificationReport, XvalStats), CheckError> {
    cross_validate_with_budget(group, count, max_len, seed, mealy::DEFAULT_STATE_BUDGET)
}

pub fn cross_validate_with_budget(
    group: &FiniteGroup,
    count: usize,
    max_len: usize,
    seed: u64,
    state_budget: usize,
) -> Result<(VerificationReport, XvalStats), CheckError> {
    let start = Instant::now();
    let nz = Normalizer::new(group)?;
    let mut verifier = Verifier::with_budgets(group, 4, state_budget, DEFAULT_ACTION_BUDGET);
    let mut sampler = WordSampler::new(group, seed);
    let mut report = VerificationReport::new(group);
    let mut stats = XvalStats::default();
    let k = group.order();

    for i in 0..count {
        let u = sampler.word(max_len);
        let v = match i % 4 {
            0 => sampler.word(max_len),
            1 => sampler.trivially_equal(&u),
            2 => {
                let n = sampler.rng().gen_range(1..=3);
                let (g, h) = (sampler.rng().gen_range(0..k), sampler.rng().gen_range(0..k));
                let lhs = verifier.relation_lhs(n, g, h);
                let rhs = verifier.relation_rhs(n, g, h)?;
                sampler.with_relation(&u, &lhs, &rhs)
            }
            _ => sampler.perturbed(&u),
        };
        let by_nf = nf_equal(&nz.normalize(&u), &nz.normalize(&v));
        let verdict = match verifier.machine_equal(&u, &v) {
            Ok(by_machine) if by_machine == by_nf => {
                stats.agree += 1;
                if by_nf {
                    stats.equal += 1;
                } else {
                    stats.unequal += 1;
                }
                Verdict::Pass
            }
            Ok(by_machine) => Verdict::Fail {
                witness: format!(
                    "u=\"{}\" v=\"{}\" normal-form={} machine={}",
                    format(&u, group),
                    format(&v, group),
                    by_nf,
                    by_machine
                ),
            },
            Err(e) => Verdict::Error(e.to_string()),
        };
        stats.pairs += 1;
        report.checks.push(Check {
            kind: CheckKind::CrossValidate,
            n: i,
            g: None,
            h: None,
            verdict,
        });
    }

    for i in 0..count {
        let a = sampler.normal_form(&nz);
        let back = nz.normalize(&a.to_word());
        stats.roundtrips += 1;
        let verdict = if back == a {
            stats.roundtrips_ok += 1;
            Verdict::Pass
        } else {
            Verdict::Fail {
                witness: format!("{} -> {}", a.display(group), back.display(group)),
            }
        };
        report.checks.push(Check {
            kind: CheckKind::RoundTrip,
            n: i,
            g: None,
            h: None,
            verdict,
        });
    }
    report.sort();
    report.elapsed = start.elapsed();
    Ok((report, stats))
}

/// `g(1, ..., 1)`: `g` on the first letter, identity below.
pub fn rooted_permutation(group: &FiniteGroup, g: usize) -> PointedMachine {
    let k = group.order();
    let delta = vec![1u32; 2 * k];
    let lambda = (0..k)
        .map(|a| group.mul(g, a) as u32)
        .chain((0..k).map(|a| a as u32))
        .collect();
    PointedMachine::new(
        MealyMachine::new(k, None, delta, lambda).expect("well-formed"),
        0,
    )
    .expect("state 0 exists")
}

/// Checks the composition convention: `x C(g)` must be `g(1, ..., 1)` for
/// every `g`. Returns the first element for which it is not.
pub fn embedding_violation(group: &FiniteGroup) -> Result<Option<usize>, CheckError> {
    let wm = WordMachines::new(group);
    for g in 0..group.order() {
        let lhs = wm.product(wm.x(), &wm.state_gen(g))?;
        if !mealy::equal(&lhs, &rooted_permutation(group, g))? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// An input word moved by `x^m`, searched among `(g, 1, ..., 1)` of length
/// `m + 1` by direct simulation. On such inputs `x^m` writes `g^(+-1)` at the
/// last position, so a witness exists whenever `G` is non-trivial.
pub fn x_power_witness(group: &FiniteGroup, m: u32) -> Option<Vec<usize>> {
    let power = CompiledWord::new(
        &GenWord::from_tokens([Token::new(Letter::X, m as i64)]),
        group,
    );
    (1..group.order())
        .map(|g| {
            let mut input = vec![0; m as usize + 1];
            input[0] = g;
            input
        })
        .find(|input| power.apply(input) != *input)
}

/// First `1 <= m <= max` for which no input moved by `x^m` was found.
pub fn x_power_identity(group: &FiniteGroup, max: u32) -> Option<u32> {
    (1..=max).find(|&m| x_power_witness(group, m).is_none())
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use cayley::coeffs::{check_row_identities, check_sum_identity, closed_form};
use cayley::fingroup::BUILTIN_NAMES;
use cayley::mealy::{self, MealyMachine, PointedMachine};
use cayley::relcheck::{cross_validate, x_power_identity, Method, Verdict};
use cayley::words::{to_machine, GenWord, Letter};
use cayley::{builtin, parse, CoeffMatrix, FiniteGroup, Verifier};

const TABLE_1: [[i64; 11]; 11] = [
    [-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 3, -4, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, -1, 8, -8, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, -5, 20, -16, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, -18, 48, -32, 0, 0, 0, 0, 0],
    [0, 0, 0, 7, -56, 112, -64, 0, 0, 0, 0],
    [0, 0, 0, -1, 32, -160, 256, -128, 0, 0, 0],
    [0, 0, 0, 0, -9, 120, -432, 576, -256, 0, 0],
    [0, 0, 0, 0, 1, -50, 400, -1120, 1280, -512, 0],
    [0, 0, 0, 0, 0, 11, -220, 1232, -2816, 2816, -1024],
];

/// The `d8_16` relation failure found by the first sweep.
const D8_16_FIXTURE: (usize, &str, &str) = (1, "r", "s");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog() -> Vec<FiniteGroup> {
    BUILTIN_NAMES.iter().map(|n| builtin(n).unwrap()).collect()
}

fn coefficient_table() -> Outcome {
    let m = CoeffMatrix::build_recursive(11).map_err(|e| e.to_string())?;
    for (i, row) in TABLE_1.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = m.get(i + 1, j + 1).to_string();
            ensure(got == want.to_string(), || {
                format!("a({},{}) = {got}, table has {want}", i + 1, j + 1)
            })?;
        }
    }
    let out = Command::new(env!("CARGO_BIN_EXE_cayley"))
        .args(["coeffs", "--n-max", "11"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("coeffs exited with {}", out.status)
    })?;
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<i64>> = text
        .lines()
        .map(|l| {
            l.trim_matches('|')
                .split('|')
                .map(|c| c.trim().parse().unwrap_or(0))
                .collect()
        })
        .collect();
    ensure(rows.len() == 11, || {
        format!("CLI printed {} rows", rows.len())
    })?;
    for (i, row) in rows.iter().enumerate() {
        ensure(row.as_slice() == TABLE_1[i], || {
            format!("CLI row {} is {row:?}", i + 1)
        })?;
    }
    Ok("121 entries match, CLI output matches".into())
}

fn closed_form_vs_recursion() -> Outcome {
    let m = CoeffMatrix::build_recursive(40).map_err(|e| e.to_string())?;
    let mut count = 0;
    for i in 1..=40 {
        for j in 1..=40 {
            ensure(closed_form(i, j) == *m.get(i, j), || {
                format!("mismatch at ({i},{j})")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} entries equal"))
}

fn row_and_sum_identities() -> Outcome {
    let m = CoeffMatrix::build_recursive(40).map_err(|e| e.to_string())?;
    let report = check_row_identities(&m);
    if let Some(bad) = report.first_failure() {
        return Err(format!("row {}: {:?}", bad.n, bad.failure));
    }
    let mut pairs = 0;
    for n in 1..=39 {
        for mm in 1..=n {
            let ok = check_sum_identity(&m, mm, n).map_err(|e| e.to_string())?;
            ensure(ok, || format!("sum identity fails at m={mm} n={n}"))?;
            pairs += 1;
        }
    }
    Ok(format!("40 rows, {pairs} sum pairs"))
}

/// `g(1, ..., 1)`: permutes the first letter by `g` and is the identity below.
fn rooted_permutation(group: &FiniteGroup, g: usize) -> PointedMachine {
    let k = group.order();
    let mut delta = vec![1u32; 2 * k];
    let mut lambda = Vec::with_capacity(2 * k);
    lambda.extend((0..k).map(|a| group.mul(g, a) as u32));
    lambda.extend((0..k).map(|a| a as u32));
    PointedMachine::new(
        MealyMachine::new(k, None, std::mem::take(&mut delta), lambda).unwrap(),
        0,
    )
    .unwrap()
}

fn embedding() -> Outcome {
    let mut count = 0;
    for group in catalog() {
        for g in 0..group.order() {
            let text = format!("x C({})", group.label(g));
            let lhs = to_machine(&parse(&text, &group).map_err(|e| e.to_string())?, &group)
                .map_err(|e| e.to_string())?;
            let ok =
                mealy::equal(&lhs, &rooted_permutation(&group, g)).map_err(|e| e.to_string())?;
            ensure(ok, || {
                format!(
                    "{}: {text} differs from {}(1,...,1)",
                    group.name(),
                    group.label(g)
                )
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} elements"))
}

fn relations_pass(name: &str, n_max: usize, method: Method) -> Result<usize, String> {
    let group = builtin(name).unwrap();
    let report = Verifier::new(&group, n_max).verify_all(n_max, method);
    if let Some(c) = report.failures().next() {
        return Err(format!("{name} {method}: {c:?}"));
    }
    Ok(report.total())
}

fn commutator_relations() -> Outcome {
    let mut total = 0;
    for method in [Method::Machine, Method::Action] {
        total += relations_pass("q8", 5, method)?;
        total += relations_pass("d4", 5, method)?;
        total += relations_pass("heis3", 3, method)?;
    }
    // [x^7 g x^-7, h] = x^4[g^-1,h^7]x^-4 x^5[g^-1,h^-56]x^-5 x^6[g^-1,h^112]x^-6 x^7[g^-1,h^-64]x^-7
    let q8 = builtin("q8").unwrap();
    let mut v = Verifier::new(&q8, 7);
    for g in 0..8 {
        for h in 0..8 {
            let mut rhs = GenWord::new();
            for (level, e) in [(4, 7), (5, -56), (6, 112), (7, -64)] {
                rhs.push(Letter::X, level);
                rhs.push(Letter::Embedded(q8.comm(q8.inv(g), q8.pow(h, e))), 1);
                rhs.push(Letter::X, -level);
            }
            let lhs = v.relation_lhs(7, g, h);
            let ok = v.machine_equal(&lhs, &rhs).map_err(|e| e.to_string())?;
            ensure(ok, || {
                format!(
                    "explicit n=7 relation fails for g={} h={}",
                    q8.label(g),
                    q8.label(h)
                )
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} checks"))
}

fn abelian_degeneration() -> Outcome {
    let mut total = 0;
    for name in ["z2", "z4", "z2xz2"] {
        let group = builtin(name).unwrap();
        let v = Verifier::new(&group, 6);
        for n in 1..=6 {
            for g in 0..group.order() {
                for h in 0..group.order() {
                    let rhs = v.relation_rhs(n, g, h).map_err(|e| e.to_string())?;
                    ensure(rhs.is_empty(), || {
                        format!("{name}: non-empty corrections at n={n}")
                    })?;
                }
            }
        }
        total += relations_pass(name, 6, Method::Machine)?;
        total += relations_pass(name, 6, Method::Action)?;
    }
    Ok(format!("{total} checks, all corrections empty"))
}

fn falsification_control() -> Outcome {
    let group = builtin("d8_16").unwrap();
    let mut v = Verifier::new(&group, 4);
    let report = v.verify_all(4, Method::Machine);
    let first = report
        .failures()
        .next()
        .ok_or("no failure found for d8_16")?;
    let (n, g, h) = D8_16_FIXTURE;
    let (g, h) = (group.index_of(g).unwrap(), group.index_of(h).unwrap());
    ensure((first.n, first.g, first.h) == (n, Some(g), Some(h)), || {
        format!("first failure moved: {first:?}")
    })?;
    for method in [Method::Machine, Method::Action] {
        let verdict = v
            .verify_relation(n, g, h, method)
            .map_err(|e| e.to_string())?;
        ensure(matches!(verdict, Verdict::Fail { .. }), || {
            format!("fixture passes under {method}")
        })?;
    }
    Ok(format!(
        "{} of {} checks fail, fixture n={} g={} h={}",
        report.failed(),
        report.total(),
        D8_16_FIXTURE.0,
        D8_16_FIXTURE.1,
        D8_16_FIXTURE.2
    ))
}

fn wreath_coordinates() -> Outcome {
    let mut total = 0;
    for name in ["q8", "d4"] {
        let group = builtin(name).unwrap();
        let report = Verifier::new(&group, 3).verify_all_wreath(3);
        if let Some(c) = report.failures().next() {
            return Err(format!("{name}: {c:?}"));
        }
        ensure(report.total() == 4 * group.order(), || {
            format!("{name}: {} checks", report.total())
        })?;
        total += report.total();
    }
    Ok(format!("{total} checks"))
}

fn depth() -> Outcome {
    let group = builtin("q8").unwrap();
    let report = Verifier::new(&group, 5).verify_all_depth(5, 7);
    if let Some(c) = report.failures().next() {
        return Err(format!("{c:?}"));
    }
    ensure(report.total() == 6 * 7, || {
        format!("{} checks", report.total())
    })?;
    Ok(format!("{} checks", report.total()))
}

fn oracle_agreement() -> Outcome {
    let group = builtin("q8").unwrap();
    let (report, stats) = cross_validate(&group, 1000, 12, 42).map_err(|e| e.to_string())?;
    if let Some(c) = report.failures().next() {
        return Err(format!("{c:?}"));
    }
    ensure(stats.pairs == 1000 && stats.agree == 1000, || {
        format!("{stats:?}")
    })?;
    ensure(
        stats.roundtrips == 1000 && stats.roundtrips_ok == 1000,
        || format!("{stats:?}"),
    )?;
    ensure(stats.equal > 0 && stats.unequal > 0, || {
        format!("one-sided sample {stats:?}")
    })?;
    Ok(format!(
        "1000/1000 agree ({} equal, {} unequal), 1000/1000 round trips",
        stats.equal, stats.unequal
    ))
}

fn x_infinite_order() -> Outcome {
    for group in catalog() {
        let hit = x_power_identity(&group, 16);
        ensure(hit.is_none(), || {
            format!("{}: x^{} = 1", group.name(), hit.unwrap())
        })?;
    }
    Ok(format!("{} groups, m <= 16", BUILTIN_NAMES.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("coefficient table", coefficient_table),
        ("closed form equals recursion", closed_form_vs_recursion),
        ("row and summation identities", row_and_sum_identities),
        ("embedding of G", embedding),
        ("commutator relations", commutator_relations),
        ("abelian degeneration", abelian_degeneration),
        ("falsification control", falsification_control),
        ("wreath coordinates", wreath_coordinates),
        ("depth", depth),
        ("oracle agreement", oracle_agreement),
        ("x has infinite order", x_infinite_order),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

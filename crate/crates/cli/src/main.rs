use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use cayley::coeffs::{check_row_identities, check_sum_identity, closed_form};
use cayley::fingroup::{builtin, parse_group_file, render_group_file, FiniteGroup};
use cayley::mealy::{self, cayley_machine, PointedMachine};
use cayley::relcheck::{
    cross_validate_with_budget, embedding_violation, Check, Method, VerificationReport, Verifier,
    DEFAULT_ACTION_BUDGET,
};
use cayley::words::{format as format_word, parse, WordMachines};
use cayley::{CoeffMatrix, Normalizer};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cayley", version, about = "Automata groups of Cayley machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupSource {
    /// Builtin group: z2, z4, z2xz2, s3, d4, q8, heis3, d8_16
    #[arg(long, visible_alias = "builtin")]
    group: Option<String>,
    /// Group file (order / elements / table lines)
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Machine,
    Action,
    Nf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Relation,
    Wreath,
    Depth,
}

#[derive(Subcommand)]
enum Command {
    /// Load a group; print its table or a summary.
    Group {
        #[command(flatten)]
        source: GroupSource,
        /// Print order, element orders, class and center instead of the table
        #[arg(long)]
        info: bool,
    },
    /// Print the exponent matrix of the commutator relations.
    Coeffs {
        #[arg(long, default_value_t = 11)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also check the closed form and the row and sum identities
        #[arg(long)]
        check: bool,
    },
    /// Dump the Cayley machine, or the minimized machine of a word.
    Machine {
        #[command(flatten)]
        source: GroupSource,
        word: Option<String>,
        #[arg(long, default_value_t = mealy::DEFAULT_STATE_BUDGET)]
        state_budget: usize,
    },
    /// Apply a word to an input word (whitespace-separated labels).
    Act {
        #[command(flatten)]
        source: GroupSource,
        word: String,
        input: String,
        #[arg(long, default_value_t = mealy::DEFAULT_STATE_BUDGET)]
        state_budget: usize,
    },
    /// Decide whether two words are the same element.
    Eq {
        #[command(flatten)]
        source: GroupSource,
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Machine)]
        method: MethodArg,
        #[arg(long, default_value_t = mealy::DEFAULT_STATE_BUDGET)]
        state_budget: usize,
    },
    /// Print the normal form of a word.
    Nf {
        #[command(flatten)]
        source: GroupSource,
        word: String,
    },
    /// Check relations, wreath coordinates or depth over all elements.
    Verify {
        #[command(flatten)]
        source: GroupSource,
        /// Check a single n instead of 1..=n-max
        #[arg(long, conflicts_with = "n_max")]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Machine)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = CheckArg::Relation)]
        check: CheckArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = mealy::DEFAULT_STATE_BUDGET)]
        state_budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        timing: bool,
    },
    /// Compare normal-form equality with machine equality on random words.
    Xval {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = mealy::DEFAULT_STATE_BUDGET)]
        state_budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        timing: bool,
    },
}

/// Usage or input problem; reported on stderr with exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn load_group(source: &GroupSource) -> Result<FiniteGroup, InputError> {
    let group = read_group(source)?;
    if let Some(g) = embedding_violation(&group)? {
        return Err(InputError(format!(
            "composition convention broken: x C({0}) is not {0}(1, ..., 1)",
            group.label(g)
        )));
    }
    Ok(group)
}

fn read_group(source: &GroupSource) -> Result<FiniteGroup, InputError> {
    match (&source.group, &source.file) {
        (Some(name), _) => Ok(builtin(name)?),
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            let group = parse_group_file(&text)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            Ok(group.with_name(name.unwrap_or_default()))
        }
        _ => Err(InputError("one of --group or --file is required".into())),
    }
}

fn group_info(group: &FiniteGroup) -> String {
    let mut out = String::new();
    let orders: Vec<String> = group.elt_orders().iter().map(|o| o.to_string()).collect();
    writeln!(out, "group {}", group.name()).unwrap();
    writeln!(out, "order {}", group.order()).unwrap();
    writeln!(out, "elements {}", group.labels().join(" ")).unwrap();
    writeln!(out, "element orders {}", orders.join(" ")).unwrap();
    writeln!(
        out,
        "abelian: {}",
        if group.is_abelian() { "yes" } else { "no" }
    )
    .unwrap();
    match group.class_two_witness() {
        None => writeln!(out, "class <= 2: yes").unwrap(),
        Some((g, h, z)) => writeln!(
            out,
            "class <= 2: no ([[{}, {}], {}] != 1)",
            group.label(g),
            group.label(h),
            group.label(z)
        )
        .unwrap(),
    }
    let center: Vec<&str> = group.center().into_iter().map(|c| group.label(c)).collect();
    writeln!(out, "center {{{}}}", center.join(", ")).unwrap();
    out
}

fn run_coeffs(n_max: usize, format: Format, check: bool) -> Result<Outcome, InputError> {
    let m = CoeffMatrix::build_recursive(n_max)?;
    let mut text = match format {
        Format::Table => m.to_table(),
        Format::Csv => m.to_csv(),
    };
    if !check {
        return Ok(Outcome::ok(text));
    }
    let mut ok = true;
    let cells = n_max * n_max;
    let matching = (1..=n_max)
        .flat_map(|i| (1..=n_max).map(move |j| (i, j)))
        .filter(|&(i, j)| closed_form(i, j) == *m.get(i, j))
        .count();
    ok &= matching == cells;
    writeln!(text, "closed form matches recursion: {matching}/{cells}").unwrap();

    let rows = check_row_identities(&m);
    let passing = rows.rows.iter().filter(|r| r.failure.is_none()).count();
    ok &= rows.all_pass();
    writeln!(text, "row identities: {passing}/{n_max} rows pass").unwrap();
    if let Some(bad) = rows.first_failure() {
        writeln!(text, "  row {}: {}", bad.n, bad.failure.as_ref().unwrap()).unwrap();
    }

    let mut pairs = 0;
    let mut sum_ok = 0;
    for n in 1..n_max {
        for mm in 1..=n {
            pairs += 1;
            if check_sum_identity(&m, mm, n)? {
                sum_ok += 1;
            }
        }
    }
    ok &= sum_ok == pairs;
    writeln!(text, "sum identity: {sum_ok}/{pairs} pairs pass").unwrap();
    Ok(Outcome { text, ok })
}

fn parse_input(text: &str, group: &FiniteGroup) -> Result<Vec<usize>, InputError> {
    text.split_whitespace()
        .map(|l| {
            group
                .index_of(l)
                .ok_or_else(|| InputError(format!("unknown letter {l:?} in input word")))
        })
        .collect()
}

fn run_eq(
    group: &FiniteGroup,
    left: &str,
    right: &str,
    method: MethodArg,
    state_budget: usize,
) -> Result<Outcome, InputError> {
    let u = parse(left, group)?;
    let v = parse(right, group)?;
    let mut verifier = Verifier::with_budgets(group, 1, state_budget, DEFAULT_ACTION_BUDGET);
    let (equal, detail) = match method {
        MethodArg::Machine => (verifier.machine_equal(&u, &v)?, None),
        MethodArg::Action => match verifier.action_difference(&u, &v)? {
            None => (true, None),
            Some(w) if w.is_empty() => (false, Some("x-exponents differ".to_string())),
            Some(w) => {
                let labels: Vec<&str> = w.iter().map(|&a| group.label(a)).collect();
                (
                    false,
                    Some(format!("inputs \"{}\" map differently", labels.join(" "))),
                )
            }
        },
        MethodArg::Nf => {
            let nz = Normalizer::new(group)?;
            let (a, b) = (nz.normalize(&u), nz.normalize(&v));
            let detail = format!("{} vs {}", a.display(group), b.display(group));
            (a == b, Some(detail))
        }
    };
    let mut text = String::from(if equal { "equal\n" } else { "not equal\n" });
    if let Some(d) = detail {
        writeln!(text, "{d}").unwrap();
    }
    Ok(Outcome::ok(text))
}

fn render_report(
    report: &VerificationReport,
    group: &FiniteGroup,
    title: &str,
    format: Format,
    timing: bool,
) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("id,n,g,h,verdict\n");
            let label = |e: Option<usize>| e.map_or("", |i| group.label(i));
            for c in &report.checks {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.kind,
                    c.n,
                    label(c.g),
                    label(c.h),
                    c.verdict.tag()
                )
                .unwrap();
            }
        }
        Format::Table => {
            writeln!(out, "{title}").unwrap();
            writeln!(
                out,
                "{:>4} {:>8} {:>8} {:>8}",
                "n", "checks", "pass", "fail"
            )
            .unwrap();
            let mut by_n: Vec<(usize, usize, usize)> = Vec::new();
            for c in &report.checks {
                match by_n.last_mut() {
                    Some(row) if row.0 == c.n => {
                        row.1 += 1;
                        row.2 += usize::from(c.verdict.is_pass());
                    }
                    _ => by_n.push((c.n, 1, usize::from(c.verdict.is_pass()))),
                }
            }
            for (n, total, pass) in by_n {
                writeln!(out, "{n:>4} {total:>8} {pass:>8} {:>8}", total - pass).unwrap();
            }
            for c in report.failures() {
                writeln!(out, "{}", VerificationReport::check_line(c, group)).unwrap();
                writeln!(out, "  {}", witness(c)).unwrap();
            }
            writeln!(out, "{}", report.summary()).unwrap();
        }
    }
    if timing {
        writeln!(out, "time {:.3}s", report.elapsed.as_secs_f64()).unwrap();
    }
    out
}

fn witness(c: &Check) -> String {
    match &c.verdict {
        cayley::relcheck::Verdict::Fail { witness } => witness.clone(),
        cayley::relcheck::Verdict::Error(e) => format!("error: {e}"),
        _ => String::new(),
    }
}

fn run(cli: Cli) -> Result<Outcome, InputError> {
    match cli.command {
        Command::Group { source, info } => {
            let group = load_group(&source)?;
            Ok(Outcome::ok(if info {
                group_info(&group)
            } else {
                render_group_file(&group)
            }))
        }
        Command::Coeffs {
            n_max,
            format,
            check,
        } => run_coeffs(n_max, format, check),
        Command::Machine {
            source,
            word,
            state_budget,
        } => {
            let group = load_group(&source)?;
            let p = match word {
                None => PointedMachine::new(cayley_machine(&group), 0)?,
                Some(w) => WordMachines::with_budget(&group, state_budget)
                    .to_machine(&parse(&w, &group)?)?,
            };
            Ok(Outcome::ok(p.dump(group.labels())))
        }
        Command::Act {
            source,
            word,
            input,
            state_budget,
        } => {
            let group = load_group(&source)?;
            let w = parse(&word, &group)?;
            let p = WordMachines::with_budget(&group, state_budget).to_machine(&w)?;
            let out = mealy::act(&p, &parse_input(&input, &group)?)?;
            let labels: Vec<&str> = out.iter().map(|&a| group.label(a)).collect();
            Ok(Outcome::ok(format!("{}\n", labels.join(" "))))
        }
        Command::Eq {
            source,
            left,
            right,
            method,
            state_budget,
        } => {
            let group = load_group(&source)?;
            run_eq(&group, &left, &right, method, state_budget)
        }
        Command::Nf { source, word } => {
            let group = load_group(&source)?;
            let nz = Normalizer::new(&group)?;
            let nf = nz.normalize(&parse(&word, &group)?);
            let w = nf.to_word();
            let text = if w.is_empty() {
                "1".to_string()
            } else {
                format_word(&w, &group)
            };
            Ok(Outcome::ok(format!("{}\n{text}\n", nf.display(&group))))
        }
        Command::Verify {
            source,
            n,
            n_max,
            method,
            check,
            seed,
            state_budget,
            format,
            timing,
        } => {
            let group = load_group(&source)?;
            let method = match method {
                MethodArg::Machine => Method::Machine,
                MethodArg::Action => Method::Action,
                MethodArg::Nf => {
                    return Err(InputError("verify supports --method machine|action".into()))
                }
            };
            let top = n.unwrap_or(n_max);
            let mut verifier =
                Verifier::with_budgets(&group, top.max(1), state_budget, DEFAULT_ACTION_BUDGET);
            let (mut report, title) = match check {
                CheckArg::Relation => (
                    verifier.verify_all(top, method),
                    format!("group {}, relation checks, method {method}", group.name()),
                ),
                CheckArg::Wreath => (
                    verifier.verify_all_wreath(top),
                    format!("group {}, wreath coordinate checks", group.name()),
                ),
                CheckArg::Depth => (
                    verifier.verify_all_depth(top, seed),
                    format!("group {}, depth checks", group.name()),
                ),
            };
            if let Some(n) = n {
                report.checks.retain(|c| c.n == n);
            }
            let ok = report.all_pass();
            Ok(Outcome {
                text: render_report(&report, &group, &title, format, timing),
                ok,
            })
        }
        Command::Xval {
            source,
            count,
            max_len,
            seed,
            state_budget,
            format,
            timing,
        } => {
            let group = load_group(&source)?;
            let (report, stats) =
                cross_validate_with_budget(&group, count, max_len, seed, state_budget)?;
            let mut text = match format {
                Format::Csv => render_report(&report, &group, "", Format::Csv, false),
                Format::Table => {
                    let mut t = format!(
                        "group {}, cross-validation, seed {seed}, max length {max_len}\n",
                        group.name()
                    );
                    writeln!(
                        t,
                        "{} pairs, {} agree ({} equal, {} unequal)",
                        stats.pairs, stats.agree, stats.equal, stats.unequal
                    )
                    .unwrap();
                    writeln!(
                        t,
                        "{} round trips, {} ok",
                        stats.roundtrips, stats.roundtrips_ok
                    )
                    .unwrap();
                    for c in report.failures() {
                        writeln!(t, "{} #{}: {}", c.kind, c.n, witness(c)).unwrap();
                    }
                    t
                }
            };
            if timing {
                writeln!(text, "time {:.3}s", report.elapsed.as_secs_f64()).unwrap();
            }
            Ok(Outcome {
                text,
                ok: report.all_pass(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

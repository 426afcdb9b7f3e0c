use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quon::algebra::{BoxFraction, Poly};
use quon::apps::{
    check_contravariant_det, check_varchenko_det, check_varchenko_det_modular, contravariant_det, contravariant_matrix,
    varchenko_det, varchenko_matches_gram, varchenko_matrix, BilinearData,
};
use quon::det::{brute_det, det_formula};
use quon::fock::{word_string, IndexSet, Weight};
use quon::gram::{build, GramMatrix, OpExpansion};
use quon::inverse::{
    candidate_denominator, expansion_json, inv_degenerate, inv_full, one_param_obstructions, zagier_check,
    zagier_check_coefficient, DenominatorMode, DenominatorReport, InverseMethod,
};
use quon::lattice::{c_nk, enumerate_bracketings, enumerate_chains, schroeder_counts};
use quon::perm::{is_tree_like, Perm};
use quon::verify::{run_suite_with, Check, Suite};

#[derive(Parser)]
#[command(name = "quon", version, about = "Gram matrices of multiparametric quon algebras")]
struct Cli {
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print timings and details.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    /// `invert` only: `g → {word: entry}` listing.
    Expansion,
    /// `invert` only: dense matrix as text.
    Matrix,
}

#[derive(Args, Clone, Debug)]
struct WeightArgs {
    /// Multiplicities aligned to the index set, e.g. `2,0,1`.
    #[arg(long, value_delimiter = ',', conflicts_with = "n")]
    weight: Option<Vec<usize>>,
    /// Generic weight of size k.
    #[arg(long = "n")]
    n: Option<usize>,
    /// Index set (default `1..`), e.g. `1,3,7`.
    #[arg(long, value_delimiter = ',')]
    index: Option<Vec<u8>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gram matrix of a weight.
    Build {
        #[command(flatten)]
        weight: WeightArgs,
        /// All parameters equal to q.
        #[arg(long)]
        one_param: bool,
        /// Real symmetric parameters, q_ij = q_ji.
        #[arg(long, conflicts_with = "one_param")]
        symmetric: bool,
    },
    /// Determinant, factored for generic weights.
    Det {
        #[command(flatten)]
        weight: WeightArgs,
        /// Specialize every factor to q.
        #[arg(long)]
        one_param: bool,
    },
    /// Inverse Gram matrix.
    Invert {
        #[command(flatten)]
        weight: WeightArgs,
        /// fast, long, short, zagier, chains or brute (brute: n ≤ 3).
        #[arg(long, default_value = "fast")]
        method: String,
        /// Specialize every entry to q.
        #[arg(long)]
        one_param: bool,
    },
    /// Run self-checks.
    Verify {
        /// `all` or one of matrices, factorization, det, inverse, zagier, counting, oracle, apps, positivity.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Combinatorial counts.
    Count {
        #[arg(value_enum)]
        kind: CountKind,
        #[arg(long = "n")]
        n: usize,
    },
    /// Varchenko matrix of the discriminant arrangement.
    Varchenko {
        #[arg(long = "n")]
        n: usize,
        /// Factored determinant instead of the matrix.
        #[arg(long)]
        det: bool,
        /// Check against the Gram matrix and the determinant formula.
        #[arg(long)]
        check: bool,
    },
    /// Contravariant form on the weight (1,…,1) space.
    Contravariant {
        #[arg(long = "n")]
        n: Option<usize>,
        /// JSON file `{"b": [[…], …]}` with a symmetric integer matrix.
        #[arg(long)]
        b_matrix: Option<PathBuf>,
        #[arg(long)]
        det: bool,
    },
    /// Common-denominator checks for inverse coefficients.
    ZagierCheck {
        #[arg(long = "n")]
        n: Option<usize>,
        /// Shorthand for `--mode one-param`.
        #[arg(long)]
        one_param: bool,
        /// multi, extended-multi, one-param or original-conjecture.
        #[arg(long)]
        mode: Option<String>,
        /// Check a single coefficient, e.g. 43218765.
        #[arg(long)]
        coeff: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountKind {
    /// Maximal chains of the subdivision lattice.
    Chains,
    /// Bracketings with outer brackets.
    Bracketings,
    /// Bracketings by number of pairs, c(n,k).
    Cnk,
    /// Interval subdivisions.
    Subdivisions,
    /// Permutations with nonzero inverse coefficient.
    TreeLike,
}

enum CliError {
    Usage(String),
    Failed(String),
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

type Out = Result<String, CliError>;

/// Writes to stdout; a reader that went away (`| head`) is not an error.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(s) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(s)) => {
            emit(&s);
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Out {
    match &cli.cmd {
        Cmd::Build { weight, one_param, symmetric } => cmd_build(cli, weight, *one_param, *symmetric),
        Cmd::Det { weight, one_param } => cmd_det(cli, weight, *one_param),
        Cmd::Invert { weight, method, one_param } => cmd_invert(cli, weight, method, *one_param),
        Cmd::Verify { suite, max_n } => cmd_verify(cli, suite, *max_n),
        Cmd::Count { kind, n } => cmd_count(cli, *kind, *n),
        Cmd::Varchenko { n, det, check } => cmd_varchenko(cli, *n, *det, *check),
        Cmd::Contravariant { n, b_matrix, det } => cmd_contravariant(cli, *n, b_matrix.as_ref(), *det),
        Cmd::ZagierCheck { n, one_param, mode, coeff } => cmd_zagier(cli, *n, *one_param, mode.as_deref(), coeff.as_deref()),
    }
}

fn parse_weight(w: &WeightArgs) -> Result<Weight, CliError> {
    let mult = match (&w.weight, w.n) {
        (Some(m), None) => m.clone(),
        (None, Some(n)) => vec![1; n],
        _ => return Err(usage("give exactly one of --weight and --n")),
    };
    if mult.iter().sum::<usize>() == 0 {
        return Err(usage("the weight is empty"));
    }
    let index = match &w.index {
        Some(labels) => IndexSet::new(labels.clone()).map_err(usage)?,
        None => {
            if mult.len() > 9 {
                return Err(usage("more than 9 labels need an explicit --index"));
            }
            IndexSet::first(mult.len())
        }
    };
    let nu = Weight::aligned(&index, &mult).map_err(usage)?;
    if nu.size() > 8 {
        return Err(usage(format!("|ν| = {} is beyond reach for whole matrices", nu.size())));
    }
    Ok(nu)
}

fn matrix_text<T: std::fmt::Display + Clone>(m: &GramMatrix<T>) -> String {
    let mut s = format!("weight {}\n", m.basis().weight());
    for (w, row) in m.basis().words().iter().zip(m.rows()) {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "{}: [{}]", word_string(w), cells.join(", "));
    }
    s
}

fn render_matrix<T: std::fmt::Display + Clone>(cli: &Cli, m: &GramMatrix<T>) -> String {
    match cli.format {
        Format::Json => format!("{}\n", m.to_json()),
        Format::Csv => m.to_csv(),
        _ => matrix_text(m),
    }
}

fn cmd_build(cli: &Cli, w: &WeightArgs, one_param: bool, symmetric: bool) -> Out {
    let nu = parse_weight(w)?;
    let mut a = build(&nu).map_err(usage)?;
    if one_param {
        a = a.one_param();
    } else if symmetric {
        a = a.map(quon::apps::symmetrize);
    }
    Ok(render_matrix(cli, &a))
}

fn cmd_det(cli: &Cli, w: &WeightArgs, one_param: bool) -> Out {
    let nu = parse_weight(w)?;
    let (text, factors) = if nu.is_generic() {
        let f = det_formula(&nu).map_err(usage)?;
        let f = if one_param { f.one_param() } else { f };
        let factors: Vec<Value> =
            f.factors().iter().map(|(b, e)| json!({"factor": b.poly().to_string(), "exponent": e})).collect();
        (f.to_string(), Some(factors))
    } else {
        let a = build(&nu).map_err(usage)?;
        if a.size() > 14 {
            return Err(usage("degenerate determinants are expanded only up to 14×14"));
        }
        let d = brute_det(&a);
        let d = if one_param { d.one_param() } else { d };
        (d.to_string(), None)
    };
    Ok(match cli.format {
        Format::Json => {
            let mut v = json!({"weight": nu.to_string(), "one_param": one_param, "determinant": text});
            if let Some(f) = factors {
                v["factors"] = Value::Array(f);
            }
            format!("{v}\n")
        }
        _ => format!("{text}\n"),
    })
}

fn expansion_text(e: &OpExpansion<BoxFraction>) -> String {
    let mut s = String::new();
    let words: Vec<String> = e.basis().words().iter().map(|w| word_string(w)).collect();
    for (g, d) in e.terms() {
        let cells: Vec<String> = words.iter().zip(d.entries()).map(|(w, x)| format!("{w}: {x}")).collect();
        let _ = writeln!(s, "{g} -> {{{}}}", cells.join(", "));
    }
    s
}

fn cmd_invert(cli: &Cli, w: &WeightArgs, method: &str, one_param: bool) -> Out {
    let nu = parse_weight(w)?;
    let method: InverseMethod = method.parse().map_err(usage)?;
    let param = |f: &BoxFraction| if one_param { f.one_param() } else { f.clone() };
    if nu.is_generic() {
        if nu.size() > 5 {
            return Err(usage("whole inverses are built for |ν| ≤ 5"));
        }
        let e = inv_full(&nu, method).map_err(usage)?.map(param);
        Ok(match cli.format {
            Format::Json => format!("{}\n", expansion_json(&e)),
            Format::Csv => e.to_dense().to_csv(),
            Format::Matrix => matrix_text(&e.to_dense()),
            Format::Text | Format::Expansion => expansion_text(&e),
        })
    } else {
        if cli.format == Format::Expansion {
            return Err(usage("the expansion format needs a generic weight"));
        }
        let m = inv_degenerate(&nu, method).map_err(usage)?.map(param);
        Ok(render_matrix(cli, &m))
    }
}

fn cmd_verify(cli: &Cli, suite: &str, max_n: usize) -> Out {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse().map_err(usage)?] };
    let text = cli.format != Format::Json;
    let verbose = cli.verbose;
    let mut checks: Vec<Check> = Vec::new();
    for s in suites {
        checks.extend(run_suite_with(s, max_n, cli.seed, &mut |c| {
            if text && verbose {
                eprintln!("{} {} / {} ({} ms) {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.millis, c.detail);
            }
        }));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let out = if text {
        let mut s = String::new();
        for c in &checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(s, "{status} {} / {}", c.suite, c.name);
            if !c.detail.is_empty() {
                let _ = write!(s, ": {}", c.detail);
            }
            s.push('\n');
        }
        let _ = writeln!(s, "{} checks, {} failed", checks.len(), failed);
        s
    } else {
        let list: Vec<Value> = checks
            .iter()
            .map(|c| json!({"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect();
        format!("{}\n", json!({"max_n": max_n, "seed": cli.seed, "checks": list, "failed": failed}))
    };
    if failed == 0 {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

fn cmd_count(cli: &Cli, kind: CountKind, n: usize) -> Out {
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let name = kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    if kind == CountKind::Cnk {
        let row: Vec<String> = (0..n.max(1)).map(|k| c_nk(n, k).to_string()).collect();
        return Ok(match cli.format {
            Format::Json => format!("{}\n", json!({"kind": name, "n": n, "counts": row})),
            Format::Csv => format!("k,count\n{}", row.iter().enumerate().map(|(k, c)| format!("{k},{c}\n")).collect::<String>()),
            _ => row.iter().enumerate().map(|(k, c)| format!("{k} {c}\n")).collect(),
        });
    }
    let exhaustive_limit = 9;
    let count = match kind {
        CountKind::Chains => schroeder_counts(n)[n - 1].clone(),
        CountKind::Bracketings => {
            if n > exhaustive_limit {
                return Err(usage(format!("bracketings are enumerated for n ≤ {exhaustive_limit}")));
            }
            enumerate_bracketings(n).len().into()
        }
        CountKind::Subdivisions => num_bigint::BigInt::from(1) << (n - 1),
        CountKind::TreeLike => {
            if n > exhaustive_limit {
                return Err(usage(format!("permutations are enumerated for n ≤ {exhaustive_limit}")));
            }
            Perm::all(n).iter().filter(|g| is_tree_like(g)).count().into()
        }
        CountKind::Cnk => unreachable!(),
    };
    if kind == CountKind::Chains && n <= exhaustive_limit && cli.verbose {
        eprintln!("enumerated {} chains", enumerate_chains(n).len());
    }
    Ok(match cli.format {
        Format::Json => format!("{}\n", json!({"kind": name, "n": n, "count": count.to_string()})),
        Format::Csv => format!("kind,n,count\n{name},{n},{count}\n"),
        _ => format!("{count}\n"),
    })
}

fn cmd_varchenko(cli: &Cli, n: usize, det: bool, check: bool) -> Out {
    if !(1..=5).contains(&n) {
        return Err(usage("--n must be in 1..=5"));
    }
    let mut out = if det {
        let f = varchenko_det(n);
        match cli.format {
            Format::Json => format!(
                "{}\n",
                json!({"n": n, "determinant": f.to_string(), "factors": f.factors().iter().map(|(b, e)| json!({"factor": b.poly().to_string(), "exponent": e})).collect::<Vec<_>>()})
            ),
            _ => format!("{f}\n"),
        }
    } else {
        render_matrix(cli, &varchenko_matrix(n).map_err(usage)?)
    };
    if check {
        let gram = varchenko_matches_gram(n).map_err(usage)?;
        let d = if n <= 3 { check_varchenko_det(n) } else { check_varchenko_det_modular(n, 3, cli.seed) }.map_err(usage)?;
        let _ = writeln!(out, "matches symmetric Gram matrix: {gram}\ndeterminant formula: {d}");
        if !(gram && d) {
            return Err(CliError::Failed(out));
        }
    }
    Ok(out)
}

fn cmd_contravariant(cli: &Cli, n: Option<usize>, b_matrix: Option<&PathBuf>, det: bool) -> Out {
    let b = match b_matrix {
        Some(p) => {
            let s = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            let b = BilinearData::from_json(&s).map_err(usage)?;
            if n.is_some_and(|n| n != b.n()) {
                return Err(usage(format!("--n disagrees with the {}×{} b matrix", b.n(), b.n())));
            }
            Some(b)
        }
        None => None,
    };
    let n = n.or(b.as_ref().map(BilinearData::n)).ok_or_else(|| usage("give --n or --b-matrix"))?;
    if !(1..=5).contains(&n) {
        return Err(usage("n must be in 1..=5"));
    }
    if det {
        let b = b.unwrap_or_else(|| BilinearData::constant(n, 2));
        let d = contravariant_det(&b).map_err(usage)?;
        let ok = check_contravariant_det(&b).map_err(usage)?;
        let out = match cli.format {
            Format::Json => format!(
                "{}\n",
                json!({"n": n, "b": b.b, "determinant": d.factored(), "expanded_t": d.symmetric_form.to_string(), "matches_matrix": ok})
            ),
            _ => format!("{}\nmatches matrix determinant: {ok}\n", d.factored()),
        };
        return if ok { Ok(out) } else { Err(CliError::Failed(out)) };
    }
    if n > 4 {
        return Err(usage("the matrix is printed for n ≤ 4"));
    }
    let m = contravariant_matrix(n).map_err(usage)?;
    let words: Vec<String> = quon::gram::Basis::generic(n).words().iter().map(|w| word_string(w)).collect();
    let cell = |x: &quon::apps::LaurentMono| match &b {
        Some(b) => q_quarter(x.specialize(b)),
        None => x.to_string(),
    };
    Ok(match cli.format {
        Format::Json => {
            let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(cell).collect()).collect();
            format!("{}\n", json!({"n": n, "basis": words, "entries": rows}))
        }
        Format::Csv => {
            let mut s = format!("word,{}\n", words.join(","));
            for (w, r) in words.iter().zip(&m) {
                let _ = writeln!(s, "{w},{}", r.iter().map(|x| format!("\"{}\"", cell(x))).collect::<Vec<_>>().join(","));
            }
            s
        }
        _ => words
            .iter()
            .zip(&m)
            .map(|(w, r)| format!("{w}: [{}]\n", r.iter().map(cell).collect::<Vec<_>>().join(", ")))
            .collect(),
    })
}

/// `q^(e/4)` with the exponent in lowest terms.
fn q_quarter(e: i64) -> String {
    let g = num_integer::Integer::gcd(&e, &4);
    match (e / g, 4 / g) {
        (0, _) => "1".into(),
        (1, 1) => "q".into(),
        (k, 1) => format!("q^{k}"),
        (k, d) => format!("q^({k}/{d})"),
    }
}

fn candidate_text(n: usize, mode: DenominatorMode) -> String {
    let one = |k: usize, e: usize| {
        let f = format!("(1-q^{})", k * (k - 1));
        if e == 1 { f } else { format!("{f}^{e}") }
    };
    match mode {
        DenominatorMode::Multi => "prod_{a<b} Box[a..b]".into(),
        DenominatorMode::ExtendedMulti => "prod_{|T|>=2} Box_T".into(),
        DenominatorMode::OneParam => (2..=n).map(|k| one(k, n - k + 1)).collect::<Vec<_>>().join(" * "),
        DenominatorMode::OriginalConjecture => (2..=n).map(|k| one(k, 1)).collect::<Vec<_>>().join(" * "),
    }
}

fn report_text(r: &DenominatorReport, verbose: bool) -> String {
    let mut s = format!("n={} mode={} candidate={}\n", r.n, r.mode, candidate_text(r.n, r.mode));
    for c in &r.checks {
        if verbose || r.checks.len() == 1 || !c.polynomial {
            let tag = if c.polynomial { "polynomial" } else { "NOT polynomial" };
            let _ = writeln!(s, "{} {tag}: {}", c.perm, c.lambda);
        }
    }
    let _ = writeln!(s, "{} coefficients, {} failures", r.checks.len(), r.failures().len());
    s
}

fn cmd_zagier(cli: &Cli, n: Option<usize>, one_param: bool, mode: Option<&str>, coeff: Option<&str>) -> Out {
    let mode = match (mode, one_param) {
        (Some(_), true) => return Err(usage("--one-param and --mode are exclusive")),
        (Some(m), false) => m.parse().map_err(usage)?,
        (None, true) => DenominatorMode::OneParam,
        (None, false) => DenominatorMode::Multi,
    };
    let report = match coeff {
        Some(c) => {
            let g: Perm = c.parse().map_err(|_| usage(format!("{c:?} is not a permutation")))?;
            if n.is_some_and(|n| n != g.n()) {
                return Err(usage(format!("--n disagrees with the coefficient {g}")));
            }
            if g.n() > 10 {
                return Err(usage("coefficients are computed for n ≤ 10"));
            }
            zagier_check_coefficient(&g, mode)
        }
        None => {
            let n = n.ok_or_else(|| usage("give --n or --coeff"))?;
            if !(1..=7).contains(&n) {
                return Err(usage("full tables are computed for n ≤ 7; use --coeff"));
            }
            zagier_check(n, mode)
        }
    };
    // a one-parameter single coefficient also reports the original conjecture
    let original = (mode == DenominatorMode::OneParam && report.checks.len() == 1).then(|| {
        let g = &report.checks[0].perm;
        zagier_check_coefficient(g, DenominatorMode::OriginalConjecture)
    });
    let obstructions = |r: &DenominatorReport| -> Vec<quon::inverse::Obstruction> {
        if !matches!(r.mode, DenominatorMode::OneParam | DenominatorMode::OriginalConjecture) {
            return Vec::new();
        }
        let cand: Poly = candidate_denominator(r.n, r.mode).to_poly();
        r.failures().iter().flat_map(|c| one_param_obstructions(&c.lambda, &cand)).collect()
    };
    let out = match cli.format {
        Format::Json => {
            let mut v = report.to_json();
            v["candidate"] = json!(candidate_text(report.n, report.mode));
            v["obstructions"] = obstructions(&report).iter().map(|o| o.to_json()).collect();
            if let Some(o) = &original {
                let mut w = o.to_json();
                w["candidate"] = json!(candidate_text(o.n, o.mode));
                w["obstructions"] = obstructions(o).iter().map(|x| x.to_json()).collect();
                v["original_conjecture"] = w;
            }
            format!("{v}\n")
        }
        _ => {
            let mut s = report_text(&report, cli.verbose);
            let obs_text = |s: &mut String, r: &DenominatorReport| {
                for o in obstructions(r) {
                    let _ = writeln!(
                        s,
                        "obstruction: Phi_{} = {} occurs {} times in the denominator, {} in the numerator, {} in the candidate",
                        o.d,
                        quon::det::cyclotomic(o.d),
                        o.in_denominator,
                        o.in_numerator,
                        o.in_candidate
                    );
                }
            };
            obs_text(&mut s, &report);
            if let Some(o) = &original {
                s.push('\n');
                s.push_str(&report_text(o, cli.verbose));
                obs_text(&mut s, o);
            }
            s
        }
    };
    if report.passed() {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

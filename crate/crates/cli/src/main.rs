mod format;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Value};

use coinflip::closed_form::dispatch_rule;
use coinflip::conjectures::{scan, ScanReport};
use coinflip::counting::{count_first_occurrence, verify_propositions};
use coinflip::exact::{correlation_set, expected_wait_conway, expected_wait_markov};
use coinflip::identities::{
    default_truncation, partial_expectation, pattern_tail_bound, verify_corollary, Corollary,
};
use coinflip::pattern::{parse, render_symbols, Pattern};
use coinflip::sequences::{eval_range, SeqFamily};
use coinflip::simulate::simulate_wait;
use coinflip::{with_threads, PrefixAutomaton, Rat};

use format::{approx, exact};

const SCHEMA: u32 = 1;

// stdout writes that tolerate a closed pipe (e.g. `| head`)
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outp {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "coinflip",
    version,
    about = "Waiting times for patterns in fair coin flips and die rolls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected number of draws until the pattern first appears.
    Expect(ExpectArgs),
    /// First-occurrence counts E_n for n = 0..=N.
    Count(CountArgs),
    /// Values of a sequence family.
    Seq(SeqArgs),
    /// Truncated series sum with target, gap and certified tail bound.
    Sum(SumArgs),
    /// Monte Carlo estimate of the expected wait.
    Simulate(SimulateArgs),
    /// Check the power-form and reversal statements on all coin patterns.
    Scan(ScanArgs),
    /// Runs, reversal, complement, correlation set and automaton of a pattern.
    Inspect(InspectArgs),
    /// Compare counting-DP values with the predicted sequence families.
    Props(PropsArgs),
}

#[derive(Args)]
struct PatternArgs {
    /// Pattern: H/T letters for a coin, comma-separated faces otherwise.
    pattern: String,
    /// Number of equally likely symbols.
    #[arg(long, short = 'c', default_value_t = 2)]
    alphabet: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Markov,
    Conway,
    Closed,
    All,
}

#[derive(Args)]
struct ExpectArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, value_enum, default_value_t = Method::Markov)]
    method: Method,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long)]
    upto: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SeqArgs {
    /// fib:K, fib-bar:K, fib-two:K,M, fib-tilde:K,M or alt-g:S.
    family: String,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    from: i64,
    #[arg(long, allow_negative_numbers = true)]
    upto: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SumArgs {
    /// Corollary (id1, id1-bar, id2, id3, alt, optionally with ":params")
    /// or a pattern.
    target: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Truncation point. Defaults to 400 for identities and
    /// max(200, 50 * length) for patterns.
    #[arg(long = "N", visible_alias = "n")]
    n: Option<usize>,
    #[arg(long, short = 'c', default_value_t = 2)]
    alphabet: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long, short = 'c', default_value_t = 2)]
    alphabet: u32,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "COINFLIP_THREADS")]
    threads: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    max_len: usize,
    /// Write the full JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one CSV row per pattern here.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, env = "COINFLIP_THREADS")]
    threads: Option<usize>,
    /// Print the full JSON report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PropsArgs {
    /// Largest run length (and quarter of the largest alternating length).
    #[arg(long, default_value_t = 4)]
    max: usize,
    #[arg(long, default_value_t = 60)]
    upto: usize,
    #[arg(long, env = "COINFLIP_THREADS")]
    threads: Option<usize>,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Internal(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Internal(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Internal(m) | Failure::Io(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<u8, Failure>;

fn emit_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn read_pattern(args: &PatternArgs) -> Result<Pattern, Failure> {
    parse(&args.pattern, args.alphabet).map_err(usage)
}

fn threads(n: Option<usize>) -> Result<Option<usize>, Failure> {
    match n {
        Some(0) => Err(usage("thread count must be at least 1")),
        other => Ok(other),
    }
}

fn expect(a: ExpectArgs) -> Outcome {
    let p = read_pattern(&a.pattern)?;
    let want = |m: Method| a.method == m || a.method == Method::All;
    let markov = want(Method::Markov).then(|| expected_wait_markov(&p));
    let conway = want(Method::Conway).then(|| Rat::from_integer(expected_wait_conway(&p).into()));
    let closed = if want(Method::Closed) {
        Some(dispatch_rule(&p).map(|(rule, v)| (rule, Rat::from_integer(v.into()))))
    } else {
        None
    };
    let mut values: Vec<&Rat> = Vec::new();
    values.extend(markov.iter());
    values.extend(conway.iter());
    if let Some(Some((_, v))) = &closed {
        values.push(v);
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    if a.json {
        let mut out = json!({
            "schema": SCHEMA,
            "pattern": p.render(),
            "alphabet": p.alphabet_size(),
        });
        let obj = out.as_object_mut().expect("object");
        if let Some(v) = &markov {
            obj.insert("markov".into(), json!(exact(v)));
        }
        if let Some(v) = &conway {
            obj.insert("conway".into(), json!(exact(v)));
        }
        if let Some(c) = &closed {
            let value = match c {
                Some((rule, v)) => json!({ "rule": rule.name(), "value": exact(v) }),
                None => Value::Null,
            };
            obj.insert("closed".into(), value);
        }
        if a.method == Method::All {
            obj.insert("agree".into(), json!(agree));
        }
        emit_json(&out);
    } else {
        let single = a.method != Method::All;
        let line = |name: &str, text: String| {
            if single {
                out!("{text}");
            } else {
                out!("{name:<7}{text}");
            }
        };
        if let Some(v) = &markov {
            line("markov", exact(v));
        }
        if let Some(v) = &conway {
            line("conway", exact(v));
        }
        match &closed {
            Some(Some((rule, v))) => line("closed", format!("{} ({})", exact(v), rule.name())),
            Some(None) => line(
                "closed",
                "none (no closed form for this pattern; use --method markov or conway)".into(),
            ),
            None => {}
        }
        if a.method == Method::All && agree {
            out!("all methods agree");
        }
    }
    if agree {
        Ok(0)
    } else {
        Err(Failure::Internal(format!(
            "methods disagree on {}",
            p.render()
        )))
    }
}

fn count(a: CountArgs) -> Outcome {
    let p = read_pattern(&a.pattern)?;
    let counts = count_first_occurrence(&p, a.upto).counts;
    if a.json {
        let values: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        emit_json(&json!({
            "schema": SCHEMA,
            "pattern": p.render(),
            "alphabet": p.alphabet_size(),
            "upto": a.upto,
            "counts": values,
        }));
    } else {
        let w = a.upto.to_string().len();
        out!("{:>w$}  E_n", "n");
        for (n, c) in counts.iter().enumerate() {
            out!("{n:>w$}  {c}");
        }
    }
    Ok(0)
}

fn seq(a: SeqArgs) -> Outcome {
    let family: SeqFamily = a.family.parse().map_err(usage)?;
    if a.upto < a.from {
        return Err(usage("--upto must not be below --from"));
    }
    let values = eval_range(family, a.from, a.upto).map_err(usage)?;
    if a.json {
        let values: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        emit_json(&json!({
            "schema": SCHEMA,
            "family": family.to_string(),
            "from": a.from,
            "upto": a.upto,
            "values": values,
        }));
    } else {
        let w = a.upto.to_string().len().max(a.from.to_string().len());
        for (i, v) in values.iter().enumerate() {
            out!("{:>w$}  {v}", a.from + i as i64);
        }
    }
    Ok(0)
}

fn corollary_from(a: &SumArgs) -> Result<Option<Corollary>, Failure> {
    let name = a.target.trim().to_ascii_lowercase();
    if name.contains(':') {
        return name.parse().map(Some).map_err(usage);
    }
    let need =
        |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("{name} needs --{flag}")));
    let c = match name.as_str() {
        "id1" => Corollary::Id1 { k: need(a.k, "k")? },
        "id1-bar" => Corollary::Id1Bar { k: need(a.k, "k")? },
        "id2" => Corollary::Id2 {
            k: need(a.k, "k")?,
            m: need(a.m, "m")?,
        },
        "id3" => Corollary::Id3 {
            k: need(a.k, "k")?,
            m: need(a.m, "m")?,
        },
        "alt" => Corollary::Alt { s: need(a.s, "s")? },
        _ => return Ok(None),
    };
    c.validate().map_err(usage)?;
    Ok(Some(c))
}

fn sum(a: SumArgs) -> Outcome {
    let (label, upto, partial, target, bound) = match corollary_from(&a)? {
        Some(c) => {
            let upto = a.n.unwrap_or(400);
            let r = verify_corollary(c, upto).map_err(usage)?;
            (
                c.to_string(),
                upto,
                r.partial,
                Rat::from_integer(r.target.into()),
                r.tail_bound,
            )
        }
        None => {
            let p = parse(&a.target, a.alphabet).map_err(usage)?;
            let upto = a.n.unwrap_or_else(|| default_truncation(p.len()));
            let partial = partial_expectation(&p, upto);
            let bound = pattern_tail_bound(&p, upto).map_err(usage)?;
            (p.render(), upto, partial, expected_wait_markov(&p), bound)
        }
    };
    let gap = &target - &partial;
    let within = gap.abs() <= bound;
    if a.json {
        emit_json(&json!({
            "schema": SCHEMA,
            "series": label,
            "N": upto,
            "partial": exact(&partial),
            "target": exact(&target),
            "gap": exact(&gap),
            "tail_bound": exact(&bound),
            "partial_approx": approx(&partial),
            "gap_approx": approx(&gap),
            "tail_bound_approx": approx(&bound),
            "within_bound": within,
        }));
    } else {
        out!("series   {label}");
        out!("N        {upto}");
        out!("partial  {}", approx(&partial));
        out!("target   {}", exact(&target));
        out!("gap      {}", approx(&gap));
        out!("bound    {}", approx(&bound));
    }
    if within {
        Ok(0)
    } else {
        Err(Failure::Internal(format!(
            "gap exceeds the tail bound for {label}"
        )))
    }
}

fn simulate(a: SimulateArgs) -> Outcome {
    let p = parse(&a.pattern, a.alphabet).map_err(usage)?;
    let t = threads(a.threads)?;
    let report = with_threads(t, || simulate_wait(&p, a.trials, a.seed))
        .map_err(|e| Failure::Io(e.to_string()))?
        .map_err(usage)?;
    if a.json {
        let mut v = serde_json::to_value(&report).expect("serializable");
        v.as_object_mut()
            .expect("object")
            .insert("schema".into(), json!(SCHEMA));
        emit_json(&v);
    } else {
        out!("pattern    {}", report.pattern);
        out!("trials     {}", report.trials);
        out!("seed       {}", report.seed);
        out!("mean       {:.6}", report.mean);
        out!("std error  {:.6}", report.std_error);
        out!("min        {}", report.min);
        out!("max        {}", report.max);
    }
    Ok(0)
}

fn write_csv(report: &ScanReport, path: &PathBuf) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record([
        "pattern",
        "s",
        "wait",
        "exponents",
        "power_form",
        "reversed",
        "reversed_wait",
        "reversal",
        "markov_checked",
    ])
    .map_err(io)?;
    let verdict = |v| {
        serde_json::to_value(v)
            .expect("serializable")
            .as_str()
            .unwrap_or_default()
            .to_string()
    };
    for r in &report.records {
        let exps = r.exponents.as_ref().map_or(String::new(), |e| {
            e.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        });
        w.write_record([
            r.pattern.clone(),
            r.s.to_string(),
            r.wait.to_string(),
            exps,
            verdict(r.power_form),
            r.reversed.clone(),
            r.reversed_wait.to_string(),
            verdict(r.reversal),
            r.markov_checked.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn scan_cmd(a: ScanArgs) -> Outcome {
    let t = threads(a.threads)?;
    let report = with_threads(t, || scan(a.max_len))
        .map_err(|e| Failure::Io(e.to_string()))?
        .map_err(usage)?;
    if let Some(path) = &a.out {
        let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
        let mut f = File::create(path).map_err(io)?;
        serde_json::to_writer_pretty(&mut f, &report).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(f).map_err(io)?;
    }
    if let Some(path) = &a.csv {
        write_csv(&report, path)?;
    }
    let s = &report.summary;
    if a.json {
        emit_json(&serde_json::to_value(&report).expect("serializable"));
    } else {
        let sizes: Vec<String> = s
            .exponent_set_sizes
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        out!("interpretation         {}", report.interpretation);
        out!("patterns scanned       {}", s.patterns_scanned);
        out!("power form checked     {}", s.power_form_checked);
        out!("power form violations  {}", s.power_form_violations);
        out!("reversal violations    {}", s.reversal_violations);
        out!(
            "markov spot checks     {} ({} mismatches)",
            s.markov_spot_checks,
            s.markov_mismatches
        );
        out!("exponent set sizes     {}", sizes.join(" "));
        for v in &report.violations {
            out!("violation              {} {}", v.check, v.pattern);
        }
    }
    if s.markov_mismatches > 0 {
        return Err(Failure::Internal(
            "Markov spot check disagrees with the correlation sum".into(),
        ));
    }
    Ok(if report.violation_count() > 0 { 3 } else { 0 })
}

fn inspect(a: InspectArgs) -> Outcome {
    let p = read_pattern(&a.pattern)?;
    let c = p.alphabet_size();
    let runs: Vec<(String, usize)> = p
        .runs()
        .runs
        .iter()
        .map(|r| (render_symbols(&[r.symbol], c), r.len))
        .collect();
    let complement = p.complement().ok().map(|q| q.render());
    let overlaps: Vec<usize> = correlation_set(&p).iter().collect();
    let wait = expected_wait_conway(&p);
    let rule = dispatch_rule(&p).map(|(r, _)| r.name());
    let automaton = PrefixAutomaton::build(&p);
    if a.json {
        let table: Vec<Vec<usize>> = (0..automaton.num_states())
            .map(|q| automaton.row(q).to_vec())
            .collect();
        let runs: Vec<Value> = runs
            .iter()
            .map(|(s, l)| json!({ "symbol": s, "len": l }))
            .collect();
        emit_json(&json!({
            "schema": SCHEMA,
            "pattern": p.render(),
            "alphabet": c,
            "length": p.len(),
            "runs": runs,
            "reversal": p.reverse().render(),
            "complement": complement,
            "correlation": overlaps,
            "wait": wait.to_string(),
            "closed_form": rule,
            "automaton": table,
        }));
    } else {
        let runs: Vec<String> = runs.iter().map(|(s, l)| format!("{s}^{l}")).collect();
        let overlaps: Vec<String> = overlaps.iter().map(|k| k.to_string()).collect();
        out!("pattern      {}", p.render());
        out!("alphabet     {c}");
        out!("length       {}", p.len());
        out!("runs         {}", runs.join(" "));
        out!("reversal     {}", p.reverse().render());
        out!("complement   {}", complement.as_deref().unwrap_or("n/a"));
        out!("correlation  {{{}}}", overlaps.join(", "));
        out!("wait         {wait}");
        out!("closed form  {}", rule.unwrap_or("none"));
        out!("automaton");
        outp!("{}", automaton.render_table());
    }
    Ok(0)
}

fn props(a: PropsArgs) -> Outcome {
    if a.max == 0 {
        return Err(usage("--max must be at least 1"));
    }
    let t = threads(a.threads)?;
    let report = with_threads(t, || verify_propositions(a.max, a.upto))
        .map_err(|e| Failure::Io(e.to_string()))?;
    if a.json {
        let mut v = serde_json::to_value(&report).expect("serializable");
        v.as_object_mut()
            .expect("object")
            .insert("schema".into(), json!(SCHEMA));
        emit_json(&v);
    } else {
        out!("patterns     {}", report.patterns);
        out!("comparisons  {}", report.comparisons);
        out!("mismatches   {}", report.mismatches.len());
        for m in &report.mismatches {
            out!(
                "mismatch     {} n={} dp={} {}={}",
                m.pattern,
                m.n,
                m.dp,
                m.family,
                m.sequence
            );
        }
    }
    if report.passed() {
        Ok(0)
    } else {
        Err(Failure::Internal(
            "counting DP disagrees with a sequence family".into(),
        ))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Expect(a) => expect(a),
        Command::Count(a) => count(a),
        Command::Seq(a) => seq(a),
        Command::Sum(a) => sum(a),
        Command::Simulate(a) => simulate(a),
        Command::Scan(a) => scan_cmd(a),
        Command::Inspect(a) => inspect(a),
        Command::Props(a) => props(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

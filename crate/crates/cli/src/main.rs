//! `hurwitz`: classify Hurwitz and Fermat curves over finite fields.
//!
//! Exit codes: 0 success, 1 invalid input, 2 budget exceeded or undecided,
//! 3 invariant violation or disagreement.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hurwitz_core::count::{CountConfig, Parallelism, DEFAULT_BUDGET};
use hurwitz_core::criteria::{aoki_supersingular, CriteriaError};
use hurwitz_core::curves::{CurveId, Triple};
use hurwitz_core::genus::{hurwitz_genera, is_representable, solutions_enum};
use hurwitz_core::report::{
    self, classify, compare_with_golden, render_csv, render_json, render_text, scan, ClassifyOptions, CountCache, Counter,
    ErrorKind, ReportError, ScanOptions, TableOptions, TableRow,
};

/// `print!` that exits quietly when stdout is a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            quit_on_write_error(e);
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            quit_on_write_error(e);
        }
    }};
}

fn quit_on_write_error(e: std::io::Error) -> ! {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    eprintln!("error: writing output: {e}");
    std::process::exit(1);
}

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Supersingularity of Hurwitz curves over finite fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (default: available parallelism); 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest field size p^s any single count may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// JSON-lines point-count cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report for H_{n,l} (or F_d with --fermat) over F_p.
    Classify {
        #[arg(required_unless_present = "fermat")]
        n: Option<u64>,
        #[arg(required_unless_present = "fermat")]
        l: Option<u64>,
        #[arg(long)]
        p: u64,
        /// Classify the Fermat curve of this degree instead.
        #[arg(long, conflicts_with_all = ["n", "l"])]
        fermat: Option<u64>,
        /// Count N_{g+1} too and check it against the functional equation.
        #[arg(long)]
        verify: bool,
        /// Largest root-of-unity order tried for normalized Weil numbers.
        #[arg(long)]
        max_order: Option<u64>,
    },
    /// Supersingular rows in a genus and prime range.
    Table {
        #[arg(long, default_value_t = 37)]
        p_max: u64,
        #[arg(long, default_value_t = 5)]
        g_max: u64,
        #[arg(long)]
        include_genus_6: bool,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        max_order: Option<u64>,
        /// Compare the rows with the committed golden table; exit 3 on
        /// any difference.
        #[arg(long)]
        compare_golden: bool,
    },
    /// Congruence criterion against computed Newton polygons.
    Scan {
        #[arg(long, default_value_t = 50)]
        m_max: u64,
        #[arg(long, default_value_t = 37)]
        p_max: u64,
        #[arg(long)]
        include_non_coprime: bool,
        #[arg(long, default_value_t = 8)]
        condition2_n_max: u64,
    },
    /// Point counts N_1..N_S.
    Count {
        /// `hurwitz:n:l` or `fermat:d`.
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        max_s: u32,
    },
    /// Hurwitz genera up to a bound, or representability of one m.
    GenusSpectrum {
        #[arg(long, default_value_t = 50)]
        g_max: u64,
        /// Decide whether m = x^2 - xy + y^2 has a solution instead.
        #[arg(long)]
        representable: Option<u64>,
    },
    /// Two-condition supersingularity test for the triple (a, b, c) mod m.
    Aoki {
        a: i64,
        b: i64,
        c: i64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(err: ReportError) -> Self {
        let code = match err.kind() {
            ErrorKind::InvalidInput => 1,
            ErrorKind::Budget => 2,
            ErrorKind::Invariant => 3,
        };
        Failure::new(code, err.to_string())
    }
}

impl From<CriteriaError> for Failure {
    fn from(err: CriteriaError) -> Self {
        Failure::new(1, err.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn parallelism(threads: Option<usize>) -> Result<Parallelism, Failure> {
    match threads {
        Some(0) => Err(Failure::new(1, "--threads must be at least 1")),
        Some(1) => Ok(Parallelism::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::new(1, e.to_string()))?;
            Ok(Parallelism::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => {
            log::warn!("built without the parallel feature; running sequentially");
            Ok(Parallelism::Sequential)
        }
        None => Ok(Parallelism::Parallel),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn run(cli: Cli) -> Result<(), Failure> {
    let global = cli.global;
    if global.budget == 0 {
        return Err(Failure::new(1, "--budget must be positive"));
    }
    let config = CountConfig {
        budget: global.budget,
        parallelism: parallelism(global.threads)?,
        ..CountConfig::default()
    };
    let mut cache = match &global.cache {
        Some(path) => Some(CountCache::open(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?),
        None => None,
    };
    if let Some(c) = &cache {
        if c.corrupt_lines > 0 {
            log::warn!("{} corrupt cache line(s) skipped", c.corrupt_lines);
        }
    }
    let mut counter = Counter::new(config, cache.as_mut());
    let format = global.format;

    match cli.command {
        Command::Classify {
            n,
            l,
            p,
            fermat,
            verify,
            max_order,
        } => {
            let curve = match (fermat, n, l) {
                (Some(d), _, _) => CurveId::Fermat { d },
                (None, Some(n), Some(l)) => CurveId::Hurwitz { n, l },
                _ => return Err(Failure::new(1, "need n and l, or --fermat d")),
            };
            let options = ClassifyOptions { verify, max_order };
            let r = classify(curve, p, &options, &mut counter)?;
            match format {
                Format::Json => outln!("{}", json(&r)),
                Format::Text => outln!("{r}"),
                Format::Csv => {
                    let (n, l) = match curve {
                        CurveId::Hurwitz { n, l } => (n, l),
                        CurveId::Fermat { d } => (d, 0),
                    };
                    let row = TableRow {
                        n,
                        l,
                        p,
                        g: r.genus,
                        coefficients: r.l_coefficients.join(","),
                        nwn: r.nwn_text.clone().unwrap_or_default(),
                    };
                    out!("{}", render_csv(&[row]));
                }
            }
            if r.agreement == Some(false) {
                return Err(Failure::new(3, "congruence criterion and computation disagree"));
            }
        }
        Command::Table {
            p_max,
            g_max,
            include_genus_6,
            verify,
            max_order,
            compare_golden,
        } => {
            let options = TableOptions {
                p_max,
                g_max,
                include_genus_6,
                classify: ClassifyOptions { verify, max_order },
            };
            let out = report::table(&options, &mut counter);
            match format {
                Format::Json => outln!("{}", render_json(&out.rows)),
                Format::Csv => out!("{}", render_csv(&out.rows)),
                Format::Text => out!("{}", render_text(&out.rows)),
            }
            for f in &out.failures {
                eprintln!("row ({}, {}, {}) failed: {}", f.n, f.l, f.p, f.error);
            }
            if !out.failures.is_empty() {
                return Err(Failure::new(2, format!("{} row(s) could not be computed", out.failures.len())));
            }
            if compare_golden {
                let diff = compare_with_golden(&out.rows).lines();
                if !diff.is_empty() {
                    for line in &diff {
                        eprintln!("{line}");
                    }
                    return Err(Failure::new(3, format!("{} difference(s) from the golden table", diff.len())));
                }
                eprintln!("matches the golden table");
            }
        }
        Command::Scan {
            m_max,
            p_max,
            include_non_coprime,
            condition2_n_max,
        } => {
            let options = ScanOptions {
                m_max,
                p_max,
                include_non_coprime,
                condition2_n_max,
            };
            let s = scan(&options, &mut counter);
            match format {
                Format::Json => outln!("{}", json(&s)),
                Format::Csv => {
                    outln!("n,l,p,m,g,theory,computed,evidence");
                    for c in &s.cases {
                        let show = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());
                        outln!(
                            "{},{},{},{},{},{},{},{}",
                            c.n,
                            c.l,
                            c.p,
                            c.m,
                            c.genus,
                            show(c.theory.map(|t| t.supersingular)),
                            show(c.computed()),
                            serde_json::to_string(&c.evidence).expect("serializes").replace(',', ";")
                        );
                    }
                }
                Format::Text => {
                    outln!("cases            {}", s.cases.len());
                    outln!("agreements       {}", s.agreements);
                    outln!("disagreements    {}", s.disagreements.len());
                    outln!("undecided        {}", s.undecided.len());
                    outln!("theory N/A       {} (computed only)", s.computed_only);
                    outln!("errors           {}", s.errors.len());
                    outln!(
                        "condition 2      {} checked, {} witnesses",
                        s.condition2_checked,
                        s.condition2_witnesses.len()
                    );
                    for (n, l, p) in &s.undecided {
                        outln!("  undecided ({n}, {l}) p={p}");
                    }
                }
            }
            if let Some(c) = s.minimal_counterexample() {
                eprintln!("minimal counterexample: {}", json(c));
                return Err(Failure::new(3, "theory and computation disagree"));
            }
            if let Some(w) = s.condition2_witnesses.first() {
                eprintln!("condition-2 witness (n, l, p, i, d, j) = {w:?}");
                return Err(Failure::new(3, "condition 2 fired on a coprime pair"));
            }
            if !s.undecided.is_empty() || !s.errors.is_empty() {
                return Err(Failure::new(
                    2,
                    format!("{} case(s) undecided within the budget", s.undecided.len() + s.errors.len()),
                ));
            }
        }
        Command::Count { curve, p, max_s } => {
            let id: CurveId = curve.parse().map_err(|e: hurwitz_core::curves::CurveError| Failure::new(1, e.to_string()))?;
            let series = counter.series(id, p, max_s)?;
            match format {
                Format::Json => outln!("{}", json(&series)),
                Format::Csv => {
                    outln!("s,n");
                    for (s, n) in &series.counts {
                        outln!("{s},{n}");
                    }
                }
                Format::Text => {
                    for (s, n) in &series.counts {
                        outln!("N_{s} = {n}");
                    }
                }
            }
        }
        Command::GenusSpectrum { g_max, representable } => {
            if let Some(m) = representable {
                let r = is_representable(m).map_err(|e| Failure::new(1, e.to_string()))?;
                let witnesses = if m <= 1_000_000 { solutions_enum(m) } else { Vec::new() };
                match format {
                    Format::Json => outln!(
                        "{}",
                        json(&serde_json::json!({ "m": m, "representability": r, "positive_solutions": witnesses }))
                    ),
                    _ => {
                        outln!("m = {m}: representable = {}", r.representable);
                        outln!("factorization {:?}", r.factorization);
                        if !r.obstructions.is_empty() {
                            outln!("obstructions {:?}", r.obstructions);
                        }
                        if !witnesses.is_empty() {
                            outln!("positive solutions {witnesses:?}");
                        }
                    }
                }
            } else {
                let spectrum = hurwitz_genera(g_max);
                match format {
                    Format::Json => outln!("{}", json(&spectrum)),
                    Format::Csv => {
                        outln!("g,n,l,coprime");
                        for (g, pairs) in &spectrum.all {
                            for (n, l) in pairs {
                                outln!("{g},{n},{l},{}", hurwitz_core::arith::gcd(*n, *l) == 1);
                            }
                        }
                    }
                    Format::Text => {
                        for (g, pairs) in &spectrum.all {
                            let list: Vec<String> = pairs.iter().map(|(n, l)| format!("({n},{l})")).collect();
                            outln!("g = {g:>4}: {}", list.join(" "));
                        }
                    }
                }
            }
        }
        Command::Aoki { a, b, c, m, p } => {
            let alpha = Triple::new(a, b, c, m).map_err(|e| Failure::new(1, e.to_string()))?;
            if !hurwitz_core::arith::is_prime(p) {
                return Err(Failure::new(1, format!("{p} is not prime")));
            }
            let v = aoki_supersingular(&alpha, p)?;
            match format {
                Format::Json => outln!("{}", json(&v)),
                _ => outln!("D_{alpha} over F_{p}: supersingular = {} ({:?})", v.supersingular, v.condition),
            }
        }
    }
    Ok(())
}

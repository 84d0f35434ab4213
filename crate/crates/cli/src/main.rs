mod output;

use std::io::Write;
use std::process::ExitCode;

use cfq_core::cf::{ReducedFraction, WeightFn, Window};
use cfq_core::dedekind::{dedekind_bh, dedekind_direct};
use cfq_core::discrepancy::{extreme_discrepancy, star_discrepancy, PointSet};
use cfq_core::ensemble::{
    constants, digit_histogram_with, scan_with, thm_harness_with, ScanOptions, StatSpec, TailRule, Theorem,
};
use cfq_core::farey::{bd_tails, enumerate_farey, farey_count, hensley_tails, vardi_report};
use cfq_core::search::{min_max_quotient, min_sum, zaremba_scan};
use cfq_core::weight::IntervalQ;
use cfq_core::{expand, Error, ExactRational};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{Format, Record, Sink};

const AFTER_HELP: &str = "\
Output: JSON is one object per line with sorted keys. Exact values are \"p/q\"
strings with a decimal companion field. CSV columns are fixed per command:
  scan        N,phi,stat,mean,variance,tail@<t>...
  search      N,argmin,min,bound,margin
  zaremba     N
  gk          m,count,freq,target,diff
  farey       Q,members,t,count,fraction,reference
  harness     N,theorem,t,fraction,reference,score,pass

Exit codes: 0 success, 2 usage, 3 domain error, 4 size limit or overflow.";

#[derive(Parser)]
#[command(name = "cfq", version, about = "Exact continued-fraction statistics over reduced fractions a/N", after_help = AFTER_HELP)]
struct Cli {
    /// Worker threads for parallel scans
    #[arg(long, global = true, env = "CFQ_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    /// Output format; defaults to csv for `search` and `zaremba`, json otherwise
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout
    #[arg(long, short, global = true)]
    output: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    /// sum of partial quotients
    S,
    /// largest partial quotient
    M,
    /// number of partial quotients in [b, c]
    L,
    /// alternating sum
    A,
    /// Dedekind sum
    D,
    /// weighted sum over a window (--f, --eta, --theta)
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    One,
    Identity,
    Square,
}

#[derive(Clone, Copy, ValueEnum)]
enum MinStatArg {
    S,
    M,
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    /// tail of M >= t ln N against 1 - exp(-12/(pi^2 t))
    Hensley,
    /// tail of the centred digit sum, with t * fraction
    Bd,
    /// normalised Dedekind sums against the Cauchy law
    Vardi,
    /// number of members
    Count,
    /// every member, one per line
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    T1,
    T2,
    T3,
    T4,
}

#[derive(clap::Args)]
struct WindowArgs {
    /// Weight function
    #[arg(long = "f", value_enum, default_value = "identity")]
    f: Weight,
    #[arg(long, default_value_t = 1)]
    eta: u64,
    /// Upper cutoff, or N for none
    #[arg(long, default_value = "N")]
    theta: String,
}

impl WindowArgs {
    fn window(&self) -> Result<Window, Fail> {
        if self.theta.eq_ignore_ascii_case("n") {
            return Ok(Window::unbounded(self.eta)?);
        }
        let theta = self.theta.parse().map_err(|_| Fail::Usage(format!("--theta: not a number: {}", self.theta)))?;
        Ok(Window::new(self.eta, theta)?)
    }

    fn weight(&self) -> WeightFn {
        match self.f {
            Weight::One => WeightFn::One,
            Weight::Identity => WeightFn::Identity,
            Weight::Square => WeightFn::Square,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Continued fraction of a/N with its statistics
    Expand { n: u64, a: u64 },

    /// Summary of a statistic over all a coprime to N
    Scan {
        /// Modulus; omit when --range is given
        n: Option<u64>,
        #[arg(long, value_enum, default_value = "s")]
        stat: Stat,
        /// Tail thresholds, as multiples of ln N
        #[arg(long = "t", value_delimiter = ',')]
        ts: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long, default_value_t = 1)]
        c: u64,
        #[command(flatten)]
        window: WindowArgs,
        /// Tails count value >= center + t ln N
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        center: f64,
        /// Tails count |value - center| >= t ln N
        #[arg(long)]
        two_sided: bool,
        /// One summary per N in [LO, HI]
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "n")]
        range: Option<Vec<u64>>,
    },

    /// Dedekind sum D(a/N)
    Dedekind {
        n: u64,
        a: u64,
        /// Evaluate the defining sum instead of the continued-fraction formula
        #[arg(long)]
        direct: bool,
    },

    /// Discrepancy of {a/N : gcd(a, N) = 1}, or of an explicit point list
    Discrepancy {
        n: Option<u64>,
        /// Comma-separated rationals in [0, 1]
        #[arg(long, value_delimiter = ',', conflicts_with = "n")]
        points: Vec<ExactRational>,
        /// Closed range [lo, hi]; defaults to [0, 1]
        #[arg(long, default_value = "0")]
        lo: ExactRational,
        #[arg(long, default_value = "1")]
        hi: ExactRational,
    },

    /// Smallest digit sum or largest partial quotient over a in Z_N*, per N
    Search {
        #[arg(long, value_enum)]
        min_stat: MinStatArg,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
        range: Vec<u64>,
    },

    /// N in [LO, HI] with no a/N whose partial quotients are all <= K
    Zaremba {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
        range: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        k: u64,
    },

    /// Farey fractions of order Q and their limit-law comparisons
    Farey {
        q: u64,
        #[arg(long, value_enum, default_value = "hensley")]
        law: Law,
        #[arg(long = "t", value_delimiter = ',', default_value = "2")]
        ts: Vec<f64>,
    },

    /// Frequencies of the digits 1..=max-digit against Gauss-Kuzmin
    Gk {
        n: u64,
        #[arg(long, default_value_t = 5)]
        max_digit: u64,
    },

    /// Constants A, B, C, D, D', Xi and mu[b,c] for a weight and window
    Constants {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long, default_value_t = 1)]
        c: u64,
    },

    /// Tail and mean checks against the limit theorems at one N
    Harness {
        n: u64,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long = "t", value_delimiter = ',')]
        ts: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long, default_value_t = 1)]
        c: u64,
    },
}

enum Fail {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Io(e)
    }
}

fn fraction(a: u64, n: u64) -> Result<ReducedFraction, Fail> {
    Ok(ReducedFraction::new(a, n)?)
}

fn range_of(r: &[u64]) -> Result<std::ops::RangeInclusive<u64>, Fail> {
    match r {
        [lo, hi] if lo <= hi => Ok(*lo..=*hi),
        _ => Err(Fail::Usage(format!("--range needs LO <= HI, got {r:?}"))),
    }
}

fn stat_spec(stat: Stat, b: u64, c: u64, w: &WindowArgs) -> Result<StatSpec, Fail> {
    Ok(match stat {
        Stat::S => StatSpec::Sum,
        Stat::M => StatSpec::Max,
        Stat::L => StatSpec::count(b, c)?,
        Stat::A => StatSpec::Alt,
        Stat::D => StatSpec::Dedekind,
        Stat::R => StatSpec::restricted(w.weight(), w.window()?)?,
    })
}

fn run(cli: Cli, workers: usize, sink: &mut Sink) -> Result<(), Fail> {
    match cli.command {
        Command::Expand { n, a } => {
            let f = fraction(a, n)?;
            let cf = expand(f);
            let d = dedekind_bh(f);
            let convergents: Vec<String> = cf.convergents().iter().map(|(p, q)| format!("{p}/{q}")).collect();
            sink.one(Record::new()
                .field("a", a)
                .field("N", n)
                .field("digits", json!(cf.digits()))
                .field("convergents", json!(convergents))
                .field("S", cf.sum())
                .field("M", cf.max())
                .field("S_alt", cf.alt() as i64)
                .exact("D", &d))?;
        }
        Command::Scan { n, stat, ts, b, c, window, center, two_sided, range } => {
            let spec = stat_spec(stat, b, c, &window)?;
            let opts = ScanOptions { workers, rule: TailRule { center, two_sided } };
            let ns = match (n, range) {
                (Some(n), None) => n..=n,
                (None, Some(r)) => range_of(&r)?,
                _ => return Err(Fail::Usage("give N or --range LO HI".into())),
            };
            for n in ns {
                let s = scan_with(n, &spec, &ts, &opts)?;
                let mut row = Record::new()
                    .field("N", s.n)
                    .field("phi", s.phi)
                    .field("stat", s.stat.clone())
                    .field("mean", s.mean)
                    .field("variance", s.variance);
                for tail in &s.tails {
                    row = row.field(&format!("tail@{}", tail.t), tail.fraction);
                }
                sink.row_or_value(row, &s)?;
            }
        }
        Command::Dedekind { n, a, direct } => {
            let f = fraction(a, n)?;
            let d = if direct { dedekind_direct(f)? } else { dedekind_bh(f) };
            sink.one(Record::new().field("a", a).field("N", n).exact("D", &d))?;
        }
        Command::Discrepancy { n, points, lo, hi } => {
            let ps = match n {
                Some(n) => PointSet::reduced_fractions(n)?,
                None if !points.is_empty() => PointSet::new(points)?,
                None => return Err(Fail::Usage("give N or --points".into())),
            };
            let range = IntervalQ::closed(lo, hi)?;
            let ext = extreme_discrepancy(&ps, &range)?;
            let mut rec = Record::new().field("M", ps.len()).field("range", range.to_string());
            if let Some(n) = n {
                rec = rec.field("N", n);
            }
            rec = rec.exact("extreme", &ext.value).field("witness", ext.witness.to_string());
            if range == IntervalQ::unit() {
                rec = rec.exact("star", &star_discrepancy(&ps)?.value);
            }
            sink.one(rec)?;
        }
        Command::Search { min_stat, range } => {
            for n in range_of(&range)? {
                let r = match min_stat {
                    MinStatArg::S => min_sum(n)?,
                    MinStatArg::M => min_max_quotient(n)?,
                };
                sink.row(Record::new()
                    .field("N", r.n)
                    .field("argmin", r.argmin)
                    .field("min", r.min_value)
                    .field("bound", r.bound_value)
                    .field("margin", r.margin))?;
            }
        }
        Command::Zaremba { range, k } => {
            let r = range_of(&range)?;
            for n in zaremba_scan(*r.start(), *r.end(), k)? {
                sink.row(Record::new().field("N", n))?;
            }
        }
        Command::Farey { q, law, ts } => match law {
            Law::Hensley | Law::Bd => {
                let rows = match law {
                    Law::Hensley => hensley_tails(q, &ts, workers)?,
                    _ => bd_tails(q, &ts, workers)?,
                };
                for r in rows {
                    sink.row(Record::new()
                        .field("Q", r.q)
                        .field("members", r.members)
                        .field("t", r.t)
                        .field("count", r.count)
                        .field("fraction", r.fraction)
                        .field("reference", r.reference))?;
                }
            }
            Law::Vardi => {
                let v = vardi_report(q, workers)?;
                sink.row_or_value(
                    Record::new().field("Q", v.q).field("members", v.members).field("sup_distance", v.sup_distance),
                    &v,
                )?;
            }
            Law::Count => {
                enumerate_farey(q)?;
                sink.one(Record::new().field("Q", q).field("members", farey_count(q)))?;
            }
            Law::List => {
                for f in enumerate_farey(q)? {
                    sink.row(Record::new().field("a", f.numerator()).field("N", f.denominator()))?;
                }
            }
        },
        Command::Gk { n, max_digit } => {
            let h = digit_histogram_with(n, max_digit, workers)?;
            for r in h.rows {
                sink.row(Record::new()
                    .field("m", r.m)
                    .field("count", r.count)
                    .field("freq", r.freq)
                    .field("target", r.target)
                    .field("diff", r.diff))?;
            }
        }
        Command::Constants { window, b, c } => {
            let k = constants(&window.weight(), &window.window()?, b, c)?;
            sink.one(Record::new()
                .field("f", window.weight().label())
                .field("eta", window.eta)
                .field("theta", window.theta.clone())
                .field("A", k.a)
                .field("B", k.b)
                .field("C", k.c)
                .field("D", k.d)
                .field("D_prime", k.d_prime)
                .field("Xi", k.xi)
                .field("mu", k.mu))?;
        }
        Command::Harness { n, theorem, ts, b, c } => {
            let defaults = |d: &[f64]| if ts.is_empty() { d.to_vec() } else { ts.clone() };
            let which = match theorem {
                TheoremArg::T1 => Theorem::T1 { ts: defaults(&[4.0, 8.0, 16.0, 32.0]) },
                TheoremArg::T2 => Theorem::T2 { ts: defaults(&[2.0, 4.0, 8.0]) },
                TheoremArg::T3 => Theorem::T3 { b, c },
                TheoremArg::T4 => Theorem::T4 { ts: defaults(&[4.0, 8.0, 16.0, 32.0]) },
            };
            let r = thm_harness_with(n, &which, workers)?;
            match sink.format {
                Format::Json => sink.value(&r)?,
                Format::Csv => {
                    let label = serde_json::to_value(&r.theorem).unwrap_or_default();
                    for x in &r.rows {
                        sink.row(Record::new()
                            .field("N", r.n)
                            .field("theorem", label.clone())
                            .field("t", x.t)
                            .field("fraction", x.fraction)
                            .field("reference", x.reference)
                            .field("score", x.score)
                            .field("pass", x.pass))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli
        .workers
        .map_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()), |w| w as usize);
    let format = cli.format.unwrap_or(match cli.command {
        Command::Search { .. } | Command::Zaremba { .. } => Format::Csv,
        _ => Format::Json,
    });
    let out: Box<dyn Write + Send> = match &cli.output {
        Some(path) => match std::fs::File::create(path) {
            Ok(f) => Box::new(std::io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(std::io::BufWriter::new(std::io::stdout())),
    };
    let mut sink = Sink::new(out, format);

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {workers} workers: {e}");
            return ExitCode::from(4);
        }
    };
    let result = pool.install(|| run(cli, workers, &mut sink)).and_then(|()| Ok(sink.finish()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_limit() { 4 } else { 3 })
        }
        Err(Fail::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Fail::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}


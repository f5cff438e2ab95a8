//! `ordwb`: parse, compare, validate and enumerate ordinal notations, and
//! run the empirical suites.
//!
//! Exit status: 0 on success, 1 on a domain error, an invalid term or a
//! failed suite, 2 on a usage or syntax error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ordwb_core::collapse::collapse;
use ordwb_core::harness::{self, Report, Stepper};
use ordwb_core::hull::SupportSet;
use ordwb_core::systems::{enumerate, validate};
use ordwb_core::terms::parse;
use ordwb_core::{compare, Budget, Error, OrdTerm, SystemId};

#[derive(Parser, Debug)]
#[command(name = "ordwb", version, about = "Ordinal notation systems: terms, comparison, validity, collapsing and checks")]
struct Cli {
    /// Notation system: bh, pi3, piN:<n>, pi11 or stab.
    #[arg(long, global = true, default_value = "bh")]
    sys: SystemId,
    /// Longest term (constructor count) to enumerate.
    #[arg(long, global = true)]
    maxlen: Option<u64>,
    /// Step limit for descent chains.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a term and print its normal form.
    Parse { term: String },
    /// Compare two terms: prints <, = or >.
    Cmp { a: String, b: String },
    /// Check a term against the system's validity conditions.
    Validate { term: String },
    /// List every valid term up to --maxlen in increasing order.
    Enum,
    /// Mostowski-collapse a term at a collapse point.
    Collapse {
        #[arg(long)]
        rho: String,
        term: String,
    },
    /// The closure C^alpha(X) of the given terms inside the bounded universe.
    Closure {
        #[arg(long, default_value = "0")]
        alpha: String,
        gens: Vec<String>,
    },
    /// Run one of the empirical suites.
    Check {
        suite: Suite,
        /// Random-stepper chains per start (descent).
        #[arg(long, default_value_t = 1000)]
        trials: u32,
        /// Single start term for descent; every universe term otherwise.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value = "random")]
        stepper: Stepper,
        /// Ladder length.
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
    /// The milestone ladder psi(Om; w_n(Lambda + 1)) for n = 0..=N.
    Ladder {
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    LinearOrder,
    HullEquiv,
    CollapseIso,
    Stepdown,
    PsiMonotone,
    Descent,
    Jumpover,
    Ladder,
}

/// What went wrong, and which exit status it maps to.
enum Failure {
    Usage(String),
    Domain(Error),
    /// The answer is "no" (invalid term, failed suite); already printed.
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Syntax { .. } => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

struct Ctx {
    sys: SystemId,
    budget: Budget,
    seed: u64,
    format: Format,
}

impl Ctx {
    fn term(&self, s: &str) -> Result<OrdTerm, Failure> {
        Ok(parse(s, self.sys)?)
    }

    fn emit_term_line(&self, t: &OrdTerm) {
        match self.format {
            Format::Text => println!("{t}"),
            Format::Jsonl => println!("{}", json!({"sys": self.sys.to_string(), "term": t.to_string()})),
        }
    }

    fn emit_report(&self, r: &Report) -> Result<(), Failure> {
        match self.format {
            Format::Text => print!("{}", r.to_text()),
            Format::Jsonl => println!("{}", r.to_jsonl()),
        }
        if r.passed() {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }
}

fn budget_from(cli: &Cli) -> Result<Budget, Failure> {
    let mut b = Budget::default();
    if let Ok(spec) = std::env::var("ORDWB_BUDGET") {
        b = b.parse_overrides(&spec).map_err(|e| Failure::Usage(format!("ORDWB_BUDGET: {e}")))?;
    }
    if let Some(m) = cli.maxlen {
        b.maxlen = m;
    }
    if let Some(f) = cli.fuel {
        b.fuel = f;
    }
    Ok(b)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx { sys: cli.sys, budget: budget_from(&cli)?, seed: cli.seed, format: cli.format };
    let sys = ctx.sys;
    match &cli.cmd {
        Cmd::Parse { term } => {
            let t = ctx.term(term)?;
            match ctx.format {
                Format::Text => println!("{t}"),
                Format::Jsonl => println!("{}", json!({"sys": sys.to_string(), "term": t.to_string(), "len": t.len()})),
            }
        }
        Cmd::Cmp { a, b } => {
            let (x, y) = (ctx.term(a)?, ctx.term(b)?);
            let sym = match compare(sys, &x, &y)? {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            match ctx.format {
                Format::Text => println!("{sym}"),
                Format::Jsonl => println!("{}", json!({"a": x.to_string(), "b": y.to_string(), "cmp": sym})),
            }
        }
        Cmd::Validate { term } => {
            let t = ctx.term(term)?;
            let v = validate(sys, &t);
            match ctx.format {
                Format::Text => {
                    println!("{}", if v.ok { "valid" } else { "invalid" });
                    for (rule, path) in &v.reasons {
                        println!("  {rule} at {path}");
                    }
                }
                Format::Jsonl => {
                    let reasons: Vec<_> = v.reasons.iter().map(|(r, p)| json!({"rule": r, "path": p})).collect();
                    println!("{}", json!({"term": t.to_string(), "valid": v.ok, "reasons": reasons}));
                }
            }
            if !v.ok {
                return Err(Failure::Negative);
            }
        }
        Cmd::Enum => {
            let terms = enumerate(sys, &ctx.budget)?;
            for t in &terms {
                ctx.emit_term_line(t);
            }
            eprintln!("# {} terms", terms.len());
        }
        Cmd::Collapse { rho, term } => {
            let (r, t) = (ctx.term(rho)?, ctx.term(term)?);
            let c = collapse(&t, &r, sys)?;
            match ctx.format {
                Format::Text => println!("{c}"),
                Format::Jsonl => {
                    println!("{}", json!({"term": t.to_string(), "rho": r.to_string(), "collapsed": c.to_string()}))
                }
            }
        }
        Cmd::Closure { alpha, gens } => {
            let a = ctx.term(alpha)?;
            let xs: SupportSet = gens.iter().map(|g| ctx.term(g)).collect::<Result<_, _>>()?;
            let set = harness::closure_c(&a, &xs, sys, &ctx.budget)?;
            let mut members: Vec<OrdTerm> = set.into_iter().collect();
            ordwb_core::order::sort_by_compare(sys, &mut members, |t| t)?;
            for t in &members {
                ctx.emit_term_line(t);
            }
            eprintln!("# {} terms", members.len());
        }
        Cmd::Check { suite, trials, start, stepper, n } => {
            let b = &ctx.budget;
            let r = match suite {
                Suite::LinearOrder => harness::check_linear_order(sys, b)?,
                Suite::HullEquiv => harness::check_hull_equiv(sys, b)?,
                Suite::CollapseIso => harness::check_collapse_iso(sys, b, ctx.seed, 200)?,
                Suite::Stepdown => harness::check_stepdown_props(sys)?,
                Suite::PsiMonotone => harness::check_psi_monotone(sys, b)?,
                Suite::Descent => match start {
                    Some(s) => harness::check_descent(sys, &ctx.term(s)?, *stepper, *trials, ctx.seed, b)?,
                    None => harness::check_descent_universe(sys, *trials, ctx.seed, b)?,
                },
                Suite::Jumpover => harness::check_jumpover(b)?,
                Suite::Ladder => harness::check_ladder(sys, *n)?,
            };
            ctx.emit_report(&r)?;
        }
        Cmd::Ladder { n } => {
            for (i, t) in harness::milestone_ladder(sys, *n)?.iter().enumerate() {
                match ctx.format {
                    Format::Text => println!("{i}: {t}"),
                    Format::Jsonl => println!("{}", json!({"n": i, "term": t.to_string(), "len": t.len()})),
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Domain(e)) => {
            match format {
                Format::Text => eprintln!("error[{}]: {e}", e.kind()),
                Format::Jsonl => eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()})),
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            match format {
                Format::Text => eprintln!("error[usage]: {msg}"),
                Format::Jsonl => eprintln!("{}", json!({"error": "usage", "message": msg})),
            }
            ExitCode::from(2)
        }
    }
}

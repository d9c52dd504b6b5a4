use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qcrystal::kashiwara::{omega_apply, Omega};
use qcrystal::pairing::{gram, pair};
use qcrystal::qalgebra::{parse_element, Element, ParseError, Weight};
use qcrystal::report::{run_suite, Control, Report, RunConfig, Suite, DEFAULT_SEED};
use qcrystal::verma::{Chevalley, DirectSum, Generator, HighestWeight, VermaError, VermaVector};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qcrystal",
    version,
    about = "Exact computations in imaginary Verma modules and their crystal bases"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of an element.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Apply Omega_psi(p) or Omega_phi(p), keeping gamma formal.
    Omega {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short, allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Evaluate the bilinear form (at gamma = 1) and its residue mod q^2.
    Pair {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
    },
    /// Gram matrix of the form on one weight space.
    Gram {
        /// Number of factors.
        #[arg(long)]
        length: usize,
        /// Sum of indices.
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        /// Index window a:b.
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true, value_parser = parse_range)]
        window: (i64, i64),
    },
    /// Act on e·v in a reduced imaginary Verma module (or a direct sum).
    Act {
        /// x-, x+, h, K, D, tilde-omega, tilde-x, or a Chevalley generator (E0, E1, F0, F1, K0, K1, ...).
        #[arg(long = "gen")]
        generator: String,
        /// Mode index, or the power for K and D.
        #[arg(short, allow_negative_numbers = true, default_value_t = 1)]
        k: i64,
        /// lambda(h); repeat for a direct sum.
        #[arg(long = "h", required = true, allow_negative_numbers = true)]
        h: Vec<i64>,
        /// lambda(d), matched with --h by position (default 0).
        #[arg(long = "d", allow_negative_numbers = true)]
        d: Vec<i64>,
        /// Component holding e (1-based).
        #[arg(long, default_value_t = 1)]
        component: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run verification suites and report pass/fail with witnesses.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Psi,
    Phi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Relations,
    Form,
    Crystal,
    Confluence,
    Module,
    All,
}

#[derive(Args)]
struct BoundsArgs {
    /// lambda(h) of each component; repeat for a direct sum.
    #[arg(long = "h", allow_negative_numbers = true)]
    h: Vec<i64>,
    /// lambda(d), matched with --h by position (default 0).
    #[arg(long = "d", allow_negative_numbers = true)]
    d: Vec<i64>,
    /// Longest monomial probed.
    #[arg(long)]
    max_length: Option<usize>,
    /// Index window a:b for monomials and relation components.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    window: Option<(i64, i64)>,
    /// Operator index range a:b.
    #[arg(long = "m", allow_hyphen_values = true, value_parser = parse_range)]
    m: Option<(i64, i64)>,
    /// Number of random samples in randomized checks.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Corrupted fixture that must fail: scaled-lattice, diagonal-split (crystal),
    /// perturbed-gram (form), swapped-map (module).
    #[arg(long, value_parser = parse_control)]
    control: Option<Control>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got '{s}'"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad bound '{a}'"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad bound '{b}'"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_control(s: &str) -> Result<Control, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<VermaError> for Failure {
    fn from(e: VermaError) -> Self {
        match e {
            VermaError::UnknownComponent(..) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn parse(text: &str) -> Result<Element, Failure> {
    parse_element(text).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.position));
        Failure::Usage(format!("{e}\n  {text}\n  {caret}"))
    })
}

fn weights(h: &[i64], d: &[i64]) -> Result<Vec<HighestWeight>, Failure> {
    if d.len() > h.len() {
        return Err(Failure::Usage("more --d values than --h values".into()));
    }
    h.iter()
        .enumerate()
        .map(|(i, &h)| Ok(HighestWeight::new(h, d.get(i).copied().unwrap_or(0))?))
        .collect()
}

fn emit<T: Serialize>(format: Format, text: String, value: T) {
    let out = match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&value).expect("serializable"),
    };
    let _ = writeln!(std::io::stdout(), "{out}");
}

fn vector_text(v: &VermaVector) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let single = v.ambient().len() == 1;
    v.components()
        .map(|(id, e)| {
            if single {
                e.display_applied("v")
            } else {
                e.display_applied(&format!("v{id}"))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

enum Action {
    Gen(Generator),
    Chevalley(Chevalley),
    TildeOmega(i64),
    TildeX(i64),
}

fn action(name: &str, k: i64) -> Result<Action, Failure> {
    Ok(match name {
        "x-" | "xminus" => Action::Gen(Generator::XMinus(k)),
        "x+" | "xplus" => Action::Gen(Generator::XPlus(k)),
        "h" => Action::Gen(Generator::H(k)),
        "K" => Action::Gen(Generator::K(k)),
        "D" => Action::Gen(Generator::D(k)),
        "tilde-omega" => Action::TildeOmega(k),
        "tilde-x" => Action::TildeX(k),
        other => Action::Chevalley(other.parse().map_err(Failure::Usage)?),
    })
}

fn run_act(
    format: Format,
    generator: &str,
    k: i64,
    h: &[i64],
    d: &[i64],
    component: usize,
    expr: &str,
) -> Result<u8, Failure> {
    let sum = DirectSum::new(weights(h, d)?);
    let e = parse(expr)?;
    let v = sum.inject(component, &e)?;
    let out = match action(generator, k)? {
        Action::Gen(g) => v.act(g)?,
        Action::Chevalley(c) => v.act_chevalley(c)?,
        Action::TildeOmega(m) => v.tilde_omega(m),
        Action::TildeX(m) => v.tilde_xminus(m),
    };
    let text = vector_text(&out);
    let components: Vec<Value> = out
        .components()
        .map(|(id, e)| json!({"component": id, "element": e.to_string()}))
        .collect();
    emit(
        format,
        text.clone(),
        json!({"command": "act", "generator": generator, "k": k, "input": vector_text(&v), "result": text, "components": components}),
    );
    Ok(0)
}

fn config(suite: Suite, b: &BoundsArgs) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::for_suite(suite);
    if !b.h.is_empty() {
        cfg.weights = weights(&b.h, &b.d)?;
    } else if !b.d.is_empty() {
        return Err(Failure::Usage("--d given without --h".into()));
    }
    if let Some(n) = b.max_length {
        cfg.max_length = n;
    }
    if let Some(w) = b.window {
        cfg.window = w;
    }
    if let Some(m) = b.m {
        cfg.m_range = m;
    }
    if let Some(s) = b.samples {
        cfg.samples = s;
    }
    cfg.seed = b.seed;
    Ok(cfg)
}

fn run_verify(format: Format, suite: SuiteArg, b: &BoundsArgs) -> Result<u8, Failure> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Relations => vec![Suite::Relations],
        SuiteArg::Form => vec![Suite::Form],
        SuiteArg::Crystal => vec![Suite::Crystal],
        SuiteArg::Confluence => vec![Suite::Confluence],
        SuiteArg::Module => vec![Suite::Module],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    if let Some(c) = b.control {
        if !suites.contains(&c.suite()) {
            return Err(Failure::Usage(format!(
                "control {c} belongs to the {} suite",
                c.suite()
            )));
        }
    }
    let reports: Vec<Report> = suites
        .iter()
        .map(|&s| Ok(run_suite(s, &config(s, b)?, b.control)))
        .collect::<Result<_, Failure>>()?;
    let passed = reports.iter().all(Report::passed);
    let text = reports.iter().map(|r| r.to_string()).collect::<String>();
    let text = text.trim_end().to_string();
    if suite == SuiteArg::All {
        emit(format, text, &reports);
    } else {
        emit(format, text, &reports[0]);
    }
    Ok(if passed { 0 } else { EXIT_FAIL })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Normalize { expr } => {
            let e = parse(&expr)?;
            emit(
                format,
                e.to_string(),
                json!({"command": "normalize", "input": expr, "result": e.to_string()}),
            );
            Ok(0)
        }
        Command::Omega { kind, p, expr } => {
            let e = parse(&expr)?;
            let op = match kind {
                Kind::Psi => Omega::psi(p),
                Kind::Phi => Omega::phi(p),
            };
            let r = omega_apply(op, &e);
            emit(
                format,
                r.to_string(),
                json!({"command": "omega", "operator": op.to_string(), "input": e.to_string(), "result": r.to_string()}),
            );
            Ok(0)
        }
        Command::Pair { lhs, rhs } => {
            let (a, b) = (parse(&lhs)?, parse(&rhs)?);
            let v = pair(&a, &b);
            let residue = v.residue_mod_q2();
            let text = match &residue {
                Some(r) => format!("{v} (≡{r} mod q^2)"),
                None => format!("{v} (not regular at q=0)"),
            };
            emit(
                format,
                text,
                json!({"command": "pair", "value": v.to_string(), "residue_mod_q2": residue.map(|r| r.to_string())}),
            );
            Ok(0)
        }
        Command::Gram { length, degree, window } => {
            let g = gram(Weight::new(length, degree), window.0, window.1);
            let basis: Vec<String> = g.basis.iter().map(|m| m.to_string()).collect();
            let entries: Vec<Vec<String>> = g
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect();
            let mut text = format!("weight {} basis: {}", g.weight, basis.join(", "));
            for (m, row) in basis.iter().zip(&entries) {
                text.push_str(&format!("\n{m}: {}", row.join(" | ")));
            }
            emit(
                format,
                text,
                json!({"command": "gram", "length": length, "degree": degree, "window": [window.0, window.1], "basis": basis, "entries": entries}),
            );
            Ok(0)
        }
        Command::Act {
            generator,
            k,
            h,
            d,
            component,
            expr,
        } => run_act(format, &generator, k, &h, &d, component, &expr),
        Command::Verify { suite, bounds } => run_verify(format, suite, &bounds),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

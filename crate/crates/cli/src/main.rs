use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use qll_core::alethic::{format_decimal, Ext, Hardness};
use qll_core::bayes::{conditional_odds, BayesError, Density, DEFAULT_CAP};
use qll_core::calculus::{Derivation, Theory};
use qll_core::prover::{structure_provability, Prover, ProverError, ProverOptions};
use qll_core::rewrite::{cut_eliminate, RewriteError};
use qll_core::semantics::{
    check_softale_axioms, parse_valuation, pointwise_softale, real_softale, soundness_gap, tuple_grid, Softale,
};
use qll_core::syntax::{Sequent, Structure};

#[derive(Parser)]
#[command(
    name = "qll",
    version,
    about = "Exact provability, proof checking and cut elimination for quantitative linear logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a structure; open sequents are valued by provability
    Eval {
        structure: String,
        #[arg(long, default_value = "1")]
        p: Hardness,
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Check a proof file and print its validity
    Check {
        proof: PathBuf,
        #[arg(long, default_value = "1")]
        p: Hardness,
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Provability of a sequent
    Prove {
        sequent: String,
        #[arg(long, default_value = "1")]
        p: Hardness,
        #[arg(long)]
        theory: Option<PathBuf>,
        /// Write an optimal cut-free proof to this file
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Refuse sequents above this complexity
        #[arg(long)]
        cap: Option<usize>,
        /// Use the unary soft-disjunction rules and drop EFQ (p = inf only)
        #[arg(long)]
        unary: bool,
    },
    /// Eliminate cuts from a proof file
    Cutfree {
        proof: PathBuf,
        #[arg(long, default_value = "1")]
        p: Hardness,
        #[arg(long)]
        theory: Option<PathBuf>,
        /// Print one line per rewrite step
        #[arg(long)]
        trace: bool,
        /// Write the cut-free proof here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Provability of a sequent across hardness values
    Sweep {
        sequent: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,inf")]
        ps: Vec<Hardness>,
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Conditional odds of an event given another, as provability
    Bayes {
        #[arg(long)]
        density: PathBuf,
        /// Conditioning event, `A=x,y` or `x,y`
        #[arg(long)]
        given: String,
        /// Target event, `B=y,z` or `y,z`
        #[arg(long)]
        event: String,
        #[arg(long, default_value = "1")]
        p: Hardness,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Compare a proof's validity with the semantic value of its conclusion
    Soundness {
        proof: PathBuf,
        #[arg(long)]
        valuation: PathBuf,
        #[arg(long, default_value = "1")]
        p: Hardness,
        #[arg(long)]
        theory: Option<PathBuf>,
        /// `real` or `pointwise:<n>`
        #[arg(long, default_value = "real")]
        softale: String,
    },
    /// Check the softale axioms on a grid of elements
    Axioms {
        /// `real` or `pointwise:<n>`
        #[arg(long, default_value = "real")]
        softale: String,
        #[arg(long, default_value = "1")]
        p: Hardness,
        /// Real magnitudes; pointwise softales use all tuples over the grid
        #[arg(long, value_delimiter = ',', default_value = "0,1/3,1/2,1,2,3,inf")]
        grid: Vec<String>,
    },
}

/// Failure classes, one per exit code.
enum Failure {
    Input(anyhow::Error),
    Check(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Check(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<ProverError> for Failure {
    fn from(e: ProverError) -> Self {
        match e {
            ProverError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

fn input<E: Display>(what: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(anyhow!("{what}: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn theory(path: &Option<PathBuf>, p: &Hardness) -> Result<Theory, Failure> {
    match path {
        None => Ok(Theory::empty(p)),
        Some(f) => Theory::parse(&read(f)?, p).map_err(input("theory")),
    }
}

fn proof(path: &Path, p: &Hardness, t: &Theory) -> Result<Derivation, Failure> {
    Derivation::parse(&read(path)?, p, t).map_err(input(&path.display().to_string()))
}

fn event(arg: &str) -> Vec<String> {
    let list = arg.split_once('=').map_or(arg, |(_, xs)| xs);
    list.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Eval { structure, p, theory: tf } => {
            let h = Structure::parse(&structure, &p).map_err(input("structure"))?;
            if h.is_closed() {
                let v = h.eval().map_err(input("structure"))?;
                println!("value = {}", v.describe());
            } else {
                let t = theory(&tf, &p)?;
                let v = structure_provability(&h, &p, &t, &ProverOptions::default())?;
                println!("provability = {}", v.describe());
            }
        }
        Command::Check { proof: pf, p, theory: tf } => {
            let t = theory(&tf, &p)?;
            let d = proof(&pf, &p, &t)?;
            if let Err(violations) = d.check(&p, &t) {
                for v in &violations {
                    println!("violation {v}");
                }
                return Err(Failure::Check(format!("{} violations", violations.len())));
            }
            println!("OK");
            match d.conclusion() {
                Ok(s) => println!("conclusion = {s}"),
                Err(_) => println!("from {} to {}", d.top(), d.bottom()),
            }
            match d.validity() {
                Ok(v) => println!("validity = {}", v.describe()),
                Err(_) => println!("validity = undefined (open derivation)"),
            }
        }
        Command::Prove { sequent, p, theory: tf, witness, cap, unary } => {
            let s = Sequent::parse(&sequent).map_err(input("sequent"))?;
            let t = theory(&tf, &p)?;
            let opts = ProverOptions { unary_additives_at_infinity: unary, complexity_cap: cap, ..Default::default() };
            let mut prover = Prover::new(&p, &t, &opts)?;
            if let Some(out) = witness {
                let res = prover.prove(&s)?;
                fs::write(&out, res.witness.to_file()).with_context(|| format!("writing {}", out.display()))?;
                println!("provability = {}", res.value.describe());
            } else {
                println!("provability = {}", prover.value(&s)?.describe());
            }
        }
        Command::Cutfree { proof: pf, p, theory: tf, trace, out } => {
            let t = theory(&tf, &p)?;
            let d = proof(&pf, &p, &t)?;
            let before = d.validity().map_err(input("proof"))?;
            let (free, steps) = cut_eliminate(&d, &p, &t).map_err(|e| match e {
                RewriteError::Calculus(c) => Failure::Check(c.to_string()),
                other => Failure::Input(other.into()),
            })?;
            if trace {
                for s in &steps.steps {
                    println!("{s}");
                }
            }
            let after = free.validity().map_err(input("proof"))?;
            println!("steps = {}", steps.steps.len());
            println!("validity = {} -> {}", before.exact(), after.exact());
            let stalled = steps.steps.iter().filter(|s| s.after >= s.before).count();
            if stalled > 0 {
                println!("metric: {stalled} steps without strict decrease");
            }
            match out {
                Some(path) => {
                    fs::write(&path, free.to_file()).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{}", free.to_file()),
            }
            if !steps.validity_monotone() || after.power() < before.power() {
                return Err(Failure::Check("validity decreased".into()));
            }
        }
        Command::Sweep { sequent, ps, theory: tf } => {
            let s = Sequent::parse(&sequent).map_err(input("sequent"))?;
            for p in ps {
                let t = theory(&tf, &p)?;
                let v = Prover::new(&p, &t, &ProverOptions::default())?.value(&s)?;
                println!("p={p} {} {}", format_decimal(v.to_float()), v.exact());
            }
        }
        Command::Bayes { density, given, event: ev, p, cap } => {
            let d = Density::parse(&read(&density)?).map_err(input("density"))?;
            let (a, b) = (event(&given), event(&ev));
            let odds = conditional_odds(&d, &a, &b, &p, Some(cap)).map_err(|e| match e {
                BayesError::Prover(pe) => Failure::from(pe),
                other => Failure::Input(other.into()),
            })?;
            println!("sequent = {}", odds.sequent);
            if odds.empty_intersection {
                println!("note: empty intersection, encoded as bot");
            }
            println!("odds = {}", odds.value.describe());
        }
        Command::Soundness { proof: pf, valuation, p, theory: tf, softale } => {
            let t = theory(&tf, &p)?;
            let d = proof(&pf, &p, &t)?;
            let text = read(&valuation)?;
            match pointwise_size(&softale)? {
                None => soundness(&d, &text, &real_softale(&p))?,
                Some(n) => soundness(&d, &text, &pointwise_softale(n, &p))?,
            }
        }
        Command::Axioms { softale, p, grid } => {
            let real = real_softale(&p);
            let elems: Vec<Ext> =
                grid.iter().map(|g| real.parse_elem(g)).collect::<Result<_, _>>().map_err(input("grid"))?;
            let report = match pointwise_size(&softale)? {
                None => check_softale_axioms(&real, &elems),
                Some(n) => check_softale_axioms(&pointwise_softale(n, &p), &tuple_grid(&elems, n)),
            };
            print!("{report}");
            if !report.passes() {
                return Err(Failure::Check("softale axioms fail".into()));
            }
        }
    }
    Ok(())
}

fn pointwise_size(name: &str) -> Result<Option<usize>, Failure> {
    match name.split_once(':') {
        None if name == "real" => Ok(None),
        Some(("pointwise", n)) => match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::Input(anyhow!("pointwise size must be a positive integer, got {n:?}"))),
        },
        _ => Err(Failure::Input(anyhow!("unknown softale {name:?}; use real or pointwise:<n>"))),
    }
}

fn soundness<S: Softale>(d: &Derivation, valuation: &str, s: &S) -> Result<(), Failure> {
    let v = parse_valuation(valuation, s).map_err(input("valuation"))?;
    let (validity, semantic) = soundness_gap(d, &v, s).map_err(input("soundness"))?;
    println!("validity = {}", validity.describe());
    println!("semantic = {}", semantic.describe());
    if validity.power() > semantic.power() {
        return Err(Failure::Check("validity exceeds the semantic value".into()));
    }
    println!("sound");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(e) => eprintln!("error: {e:#}"),
                Failure::Check(m) => eprintln!("check failed: {m}"),
                Failure::Cap(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

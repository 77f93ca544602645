//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::checks::verify_paper;
use crate::disc_form::DEFAULT_BUDGET;
use crate::error::{Error, Result};
use crate::hperp::PolarizationData;
use crate::lattice::parse_description;
use crate::moduli::NormalityReason;
use crate::reflection::SymbolicPerpVector;
use crate::report::{
    analyze_report, classify_report, enumerate_report, hperp_report, lattice_report,
    normality_report, Envelope,
};

pub const BUDGET_ENV: &str = "HEEGNER_LAB_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "heegner-lab",
    version,
    about = "Discriminant forms, reflections and Heegner divisors for K3^[m]-type lattices"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Maximal group order enumerated exhaustively
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,

    /// JSON file with default values for the global flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of a lattice given as blocks, e.g. "U ⊕ E8(-1) ⊕ Z(-4)"
    Lattice {
        #[arg(long)]
        desc: String,
    },
    /// Discriminant form of a lattice or of h⊥ for a polarization
    DiscForm(DiscFormArgs),
    /// Normality of the monodromy subgroup in O(A_{h⊥})
    Normality(PolArgs),
    /// Classify one reflection vector β = a·m + b·k + c·ℓ (γ = 1)
    Classify {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        d: u64,
        /// a,msq,b,c
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Ramification classes for K3^[m] type with a γ = 1 polarization
    Enumerate {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u64,
        /// Same as --format json
        #[arg(long)]
        json: bool,
    },
    /// Normality, Galois group and ramification divisors
    Analyze {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        gamma: u64,
        #[arg(long)]
        c: Option<u64>,
        /// Same as --format json
        #[arg(long)]
        json: bool,
    },
    /// Re-derive the named facts and print a checklist
    VerifyPaper,
}

#[derive(Debug, Args)]
pub struct DiscFormArgs {
    /// Lattice description; exclusive with the polarization flags
    #[arg(long, conflicts_with_all = ["t", "d", "gamma", "c"])]
    pub lattice: Option<String>,
    #[arg(long, requires_all = ["d", "gamma"])]
    pub t: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub gamma: Option<u64>,
    #[arg(long)]
    pub c: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PolArgs {
    #[arg(long)]
    pub t: u64,
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub gamma: u64,
    #[arg(long)]
    pub c: Option<u64>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub format: Option<Format>,
    pub budget: Option<u64>,
    pub threads: Option<u64>,
}

impl Config {
    pub fn load(path: &PathBuf) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Config = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))?;
        if cfg.budget == Some(0) || cfg.threads == Some(0) {
            return Err(Error::Parse("budget and threads must be positive".into()));
        }
        Ok(cfg)
    }
}

/// Effective settings after merging flag > environment > config > default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub format: Format,
    pub budget: u64,
    pub threads: Option<u64>,
}

pub fn resolve_settings(cli: &Cli, env_budget: Option<&str>) -> Result<Settings> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let env = match env_budget {
        Some(s) => match s.trim().parse::<u64>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                return Err(Error::Parse(format!(
                    "{BUDGET_ENV}=`{s}` is not a positive integer"
                )))
            }
        },
        None => None,
    };
    Ok(Settings {
        format: cli.format.or(cfg.format).unwrap_or(Format::Table),
        budget: cli.budget.or(env).or(cfg.budget).unwrap_or(DEFAULT_BUDGET),
        threads: cli.threads.or(cfg.threads),
    })
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code: 0 on success, 2 on validation errors, 3 when the
/// budget is exceeded.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let env_budget = std::env::var(BUDGET_ENV).ok();
    let settings = match resolve_settings(&cli, env_budget.as_deref()) {
        Ok(s) => s,
        Err(e) => return report_error(&e, err),
    };
    let mut buf = Vec::new();
    let outcome = match settings.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli.command, settings, &mut buf)),
            Err(e) => Err(Error::Unsupported(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command, settings, &mut buf),
    };
    if let Err(e) = out.write_all(&buf) {
        return report_error(&io(e), err);
    }
    match outcome {
        Ok(code) => code,
        Err(e) => report_error(&e, err),
    }
}

fn report_error(e: &Error, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error [{}]: {e}", e.tag());
    e.exit_code()
}

fn io(e: std::io::Error) -> Error {
    Error::Unsupported(format!("write failed: {e}"))
}

fn emit<T: serde::Serialize>(out: &mut dyn Write, command: &str, body: T) -> Result<()> {
    writeln!(out, "{}", Envelope::new(command, body).to_json()).map_err(io)
}

fn dispatch(cmd: &Command, s: Settings, out: &mut dyn Write) -> Result<i32> {
    let json = |flag: bool| flag || s.format == Format::Json;
    match cmd {
        Command::Lattice { desc } => {
            let r = lattice_report(&parse_description(desc)?)?;
            if json(false) {
                emit(out, "lattice", r)?;
            } else {
                let mut t = String::new();
                t += &format!("lattice       {}\n", r.label);
                t += &format!("rank          {}\n", r.rank);
                t += &format!("signature     ({}, {})\n", r.signature[0], r.signature[1]);
                t += &format!("determinant   {}\n", r.determinant);
                t += &format!("even          {}\n", r.even);
                t += &format!("unimodular    {}\n", r.unimodular);
                t += &format!("A_L           {}\n", r.disc_form);
                write!(out, "{t}").map_err(io)?;
            }
        }
        Command::DiscForm(a) => {
            if let Some(desc) = &a.lattice {
                let r = lattice_report(&parse_description(desc)?)?;
                if json(false) {
                    emit(out, "disc-form", r.disc_form)?;
                } else {
                    writeln!(out, "{}", r.disc_form).map_err(io)?;
                }
            } else {
                let (Some(t), Some(d), Some(g)) = (a.t, a.d, a.gamma) else {
                    return Err(Error::Parse(
                        "disc-form needs --lattice or --t, --d and --gamma".into(),
                    ));
                };
                let r = hperp_report(&PolarizationData::new(t, d, g, a.c)?)?;
                if json(false) {
                    emit(out, "disc-form", r)?;
                } else {
                    let mut x = String::new();
                    x += &format!(
                        "(t, d, gamma, c)  ({}, {}, {}, {})\n",
                        r.t, r.d, r.gamma, r.c
                    );
                    x += &format!("b                 {}\n", r.b);
                    x += &format!("B                 {:?}\n", r.block);
                    x += &format!("omega             {}\n", r.omega);
                    x += &format!("presentation      {}\n", r.presentation);
                    x += &format!("orders            {:?}\n", r.disc_orders);
                    x += &format!("q_gen             ({})\n", r.q_gen.join(", "));
                    x += &format!("k1                {}\n", r.k1);
                    write!(out, "{x}").map_err(io)?;
                }
            }
        }
        Command::Normality(p) => {
            let r = normality_report(p.t, p.d, p.gamma, p.c, s.budget)?;
            if json(false) {
                emit(out, "normality", &r)?;
            } else {
                let v = &r.verdict;
                writeln!(
                    out,
                    "(t, d, gamma, c)  ({}, {}, {}, {})",
                    r.t, r.d, r.gamma, r.c
                )
                .map_err(io)?;
                writeln!(out, "status            {}", v.status).map_err(io)?;
                writeln!(out, "rule              {}", v.reason).map_err(io)?;
                if let Some(w) = &v.witness {
                    writeln!(out, "witness g         {}", w.g).map_err(io)?;
                    writeln!(out, "g^-1 s g          {}", w.conjugate).map_err(io)?;
                }
            }
            if r.verdict.reason == NormalityReason::OmegaNe1Unsupported {
                return Err(Error::OmegaUnsupported {
                    omega: PolarizationData::new(r.t, r.d, r.gamma, Some(r.c))?.omega(),
                });
            }
        }
        Command::Classify { t, d, beta } => {
            let beta: SymbolicPerpVector = beta.parse()?;
            let r = classify_report(*t, *d, &beta)?;
            if json(false) {
                emit(out, "classify", r)?;
            } else {
                let c = &r.class;
                writeln!(out, "beta        {}", r.beta).map_err(io)?;
                writeln!(out, "beta^2      {}", c.beta_sq).map_err(io)?;
                writeln!(out, "div         {}", c.div).map_err(io)?;
                writeln!(out, "beta_*      {}", c.beta_star).map_err(io)?;
                writeln!(out, "action      {}", r.induced_matrix).map_err(io)?;
                writeln!(out, "label       {}", c.galois_label).map_err(io)?;
            }
        }
        Command::Enumerate { m, d, json: j } => {
            let r = enumerate_report(*m, *d, s.budget)?;
            if json(*j) {
                emit(out, "enumerate", r)?;
            } else {
                writeln!(
                    out,
                    "m = {}, d = {}: {} nontrivial class(es)",
                    r.m,
                    r.d,
                    r.classes.len()
                )
                .map_err(io)?;
                writeln!(
                    out,
                    "{:>8} {:>5} {:>10}  witness [a, msq, b, c]",
                    "beta^2", "div", "beta_*"
                )
                .map_err(io)?;
                for c in &r.classes {
                    writeln!(
                        out,
                        "{:>8} {:>5} {:>10}  {}",
                        c.beta_sq,
                        c.div,
                        c.beta_star.to_string(),
                        c.witness
                    )
                    .map_err(io)?;
                }
                for (sq, e) in &r.unwitnessed {
                    writeln!(out, "no witness found for beta^2 = {sq}, beta_* = {e}")
                        .map_err(io)?;
                }
            }
        }
        Command::Analyze {
            m,
            d,
            gamma,
            c,
            json: j,
        } => {
            let r = analyze_report(*m, *d, *gamma, *c, s.budget)?;
            if json(*j) {
                emit(out, "analyze", r)?;
            } else {
                let g = &r.galois_group;
                let order = g
                    .order
                    .map_or("not enumerated".to_string(), |o| o.to_string());
                writeln!(
                    out,
                    "(m, d, gamma, c)  ({}, {}, {}, {})",
                    r.m, r.d, r.gamma, r.c
                )
                .map_err(io)?;
                writeln!(
                    out,
                    "normality         {} ({})",
                    r.normality.status, r.normality.reason
                )
                .map_err(io)?;
                writeln!(out, "Galois group      {} of order {order}", g.quotient).map_err(io)?;
                writeln!(out, "classes           {}", r.classes.len()).map_err(io)?;
                if let Some(divs) = &r.divisors {
                    writeln!(
                        out,
                        "{:>8} {:>5} {:>10} {:>10}  {:<18} rule",
                        "beta^2", "div", "beta_*", "disc(K⊥)", "image"
                    )
                    .map_err(io)?;
                    for x in divs {
                        writeln!(
                            out,
                            "{:>8} {:>5} {:>10} {:>10}  {:<18} {}",
                            x.cls.beta_sq,
                            x.cls.div,
                            x.cls.beta_star.to_string(),
                            x.disc_kperp,
                            x.image_status.as_str(),
                            x.excluded_rule.map_or("-", |r| r.as_str())
                        )
                        .map_err(io)?;
                    }
                } else {
                    for e in &r.classes {
                        writeln!(
                            out,
                            "  beta^2 = {}, div = {}, beta_* = {}, coset {:?}",
                            e.class.beta_sq, e.class.div, e.class.beta_star, e.coset
                        )
                        .map_err(io)?;
                    }
                }
            }
        }
        Command::VerifyPaper => {
            let start = Instant::now();
            let r = verify_paper(s.budget);
            let pass = r.pass;
            if json(false) {
                emit(out, "verify-paper", r)?;
            } else {
                for c in &r.checks {
                    let mark = if c.pass { "PASS" } else { "FAIL" };
                    writeln!(out, "[{mark}] {}: {}", c.name, c.detail).map_err(io)?;
                }
                writeln!(
                    out,
                    "{} of {} checks passed in {:.2}s",
                    r.checks.iter().filter(|c| c.pass).count(),
                    r.checks.len(),
                    start.elapsed().as_secs_f64()
                )
                .map_err(io)?;
            }
            return Ok(if pass { 0 } else { 1 });
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("heegner-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn budget_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, r#"{"budget": 77, "format": "json"}"#).unwrap();
        let path = cfg.to_str().unwrap();

        let s = resolve_settings(&parse(&["verify-paper"]), None).unwrap();
        assert_eq!((s.budget, s.format), (DEFAULT_BUDGET, Format::Table));
        let s = resolve_settings(&parse(&["--config", path, "verify-paper"]), None).unwrap();
        assert_eq!((s.budget, s.format), (77, Format::Json));
        let s = resolve_settings(&parse(&["--config", path, "verify-paper"]), Some("55")).unwrap();
        assert_eq!(s.budget, 55);
        let s = resolve_settings(
            &parse(&[
                "--config",
                path,
                "--budget",
                "9",
                "--format",
                "table",
                "verify-paper",
            ]),
            Some("55"),
        )
        .unwrap();
        assert_eq!((s.budget, s.format), (9, Format::Table));
        assert!(resolve_settings(&parse(&["verify-paper"]), Some("x")).is_err());
    }

    #[test]
    fn unknown_flags_are_errors() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            [
                "heegner-lab",
                "normality",
                "--t",
                "1",
                "--d",
                "1",
                "--gamma",
                "1",
                "--bogus",
            ],
            &mut out,
            &mut err,
        );
        assert_eq!(code, 2);
        assert!(String::from_utf8(err).unwrap().contains("--bogus"));
        let bad_cfg = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(bad_cfg.path(), r#"{"budgett": 3}"#).unwrap();
        let cli = parse(&["--config", bad_cfg.path().to_str().unwrap(), "verify-paper"]);
        assert!(resolve_settings(&cli, None).is_err());
    }
}

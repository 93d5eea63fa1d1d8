//! `rigid`: command-line reports for rigid diagonal actions on
//! `E^{n−1} × C` and their quotient singularities.

mod report;
mod reproduce;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rigid_core::classify::ClassifyOptions;
use serde_json::{json, Value};

use report::Report;

const EXIT_INVALID: u8 = 1;
const EXIT_CONTRADICTION: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "rigid", version, about = "Rigid diagonal actions, their quotients and resolutions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for reports when `--out` is not given; the file is named
    /// after the subcommand.
    #[arg(long, env = "RIGID_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

/// Group selection: `G_d` unless `--modulus` and `--gen` are given.
#[derive(Args, Debug)]
struct GroupArgs {
    /// Order of the twist, 3, 4 or 6.
    #[arg(long)]
    d: u32,
    /// Ambient modulus `m` of `A ≤ Z_m²`.
    #[arg(long)]
    modulus: Option<u32>,
    /// Generator `a,b` of `A`; repeatable.
    #[arg(long = "gen", value_parser = parse_pair)]
    gens: Vec<[u32; 2]>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the groups `A ⋊ Z_d` up to an order bound.
    Groups {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 50)]
        bound: usize,
    },
    /// Enumerate generating triples and decompose them into orbits.
    Triples {
        #[command(flatten)]
        group: GroupArgs,
        /// Restrict to this type, `a,b,c`.
        #[arg(long = "type", value_parser = parse_type)]
        ty: Option<[u32; 3]>,
        /// Use `Aut(G) × B_3` orbits instead of braid orbits.
        #[arg(long)]
        automorphisms: bool,
    },
    /// Rigid tuples and their isomorphism classes.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Also admit curve triples with no entry in `A`.
        #[arg(long)]
        exc366: bool,
    },
    /// Singularity table of the quotient.
    Census {
        /// Order of the twist for the minimal group `G_d`.
        #[arg(long, required_unless_present = "setting")]
        d: Option<u32>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// `xmin` for the `Z_6` action on `E^{n−1} × C′`.
        #[arg(long, value_parser = ["xmin"], conflicts_with = "d")]
        setting: Option<String>,
    },
    /// Search for the smallest group with a qualifying triple.
    Minimal {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 50)]
        bound: usize,
    },
    /// Verify the toric resolution of `1/ℓ(1, …, 1, a)`.
    Toric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        a: i64,
        /// Box bound for the lattice-point check; defaults to `5ℓ`.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Recompute every golden fixture and diff against the expected values.
    Reproduce {
        /// Fixture file to use instead of the bundled one.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn parse_numbers<const N: usize>(s: &str) -> Result<[u32; N], String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| format!("expected {N} comma-separated integers, got {s:?}"))
}

fn parse_pair(s: &str) -> Result<[u32; 2], String> {
    parse_numbers::<2>(s)
}

fn parse_type(s: &str) -> Result<[u32; 3], String> {
    parse_numbers::<3>(s)
}

/// A `reproduce` run with at least one mismatch.
#[derive(Debug)]
struct FixtureMismatch(usize);

impl std::fmt::Display for FixtureMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} fixture(s) do not match", self.0)
    }
}

impl std::error::Error for FixtureMismatch {}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Groups { .. } => "groups",
        Command::Triples { .. } => "triples",
        Command::Classify { .. } => "classify",
        Command::Census { .. } => "census",
        Command::Minimal { .. } => "minimal",
        Command::Toric { .. } => "toric",
        Command::Reproduce { .. } => "reproduce",
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        bail!(rigid_core::Error::invalid(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

/// Builds the report; the second value is a deferred error raised after the
/// report has been written.
fn execute(command: &Command) -> Result<(Report, Option<anyhow::Error>)> {
    let report = match command {
        Command::Groups { d, bound } => report::groups(*d, *bound)?,
        Command::Triples { group, ty, automorphisms } => {
            let g = report::select_group(group.d, group.modulus, &group.gens)?;
            report::triples(&g, *ty, *automorphisms)?
        }
        Command::Classify { group, n, exc366 } => {
            check_dimension(*n)?;
            let g = report::select_group(group.d, group.modulus, &group.gens)?;
            report::classify_report(&g, *n, ClassifyOptions { include_exc366: *exc366 })?
        }
        Command::Census { d, n, setting } => {
            check_dimension(*n)?;
            match (d, setting) {
                (_, Some(_)) => report::census_report(
                    format!("singularities of (E^{} × C')/Z_6", n - 1),
                    report::xmin_table(*n)?,
                ),
                (Some(d), None) => {
                    let g = report::select_group(*d, None, &[])?;
                    report::census_report(
                        format!("singularities of (E^{} × C)/G_{d}, |G| = {}", n - 1, g.order()),
                        report::census_table(&g, *n)?,
                    )
                }
                (None, None) => bail!("census needs --d or --setting"),
            }
        }
        Command::Minimal { d, bound } => report::minimal_report(*d, *bound)?,
        Command::Toric { n, ell, a, bound } => {
            let r = report::toric_result(*n, *ell, *a, bound.unwrap_or(5 * *ell))?;
            let failure = (!r.passed).then(|| {
                anyhow::Error::new(rigid_core::Error::contradiction(format!(
                    "resolution of 1/{ell}(1,…,1,{a}) in dimension {n} fails a check"
                )))
            });
            return Ok((report::toric_report(&r), failure));
        }
        Command::Reproduce { fixtures } => {
            let text = match fixtures {
                Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
                None => reproduce::BUNDLED.to_string(),
            };
            let outcomes = reproduce::run(&reproduce::load(&text)?)?;
            let failed = outcomes.iter().filter(|o| !o.matched).count();
            let mut text = String::new();
            let mut csv = "fixture,matched\n".to_string();
            for o in &outcomes {
                text += &format!("{} {}\n", if o.matched { "ok      " } else { "MISMATCH" }, o.name);
                for d in &o.differences {
                    text += &format!("    {d}\n");
                }
                csv += &format!("{},{}\n", o.name, o.matched);
            }
            text += &format!("{} of {} fixtures match\n", outcomes.len() - failed, outcomes.len());
            let json = json!({ "fixtures": outcomes, "matched": outcomes.len() - failed, "total": outcomes.len() });
            let failure = (failed > 0).then(|| anyhow::Error::new(FixtureMismatch(failed)));
            return Ok((Report { json, csv: Some(csv), text }, failure));
        }
    };
    Ok((report, None))
}

fn render(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => canonical_json(&report.json)? + "\n",
        Format::Csv => match &report.csv {
            Some(csv) => csv.clone(),
            None => bail!(rigid_core::Error::invalid("this report has no CSV form")),
        },
        Format::Text => report.text.clone(),
    })
}

/// Pretty JSON with object keys in sorted order.
fn canonical_json(value: &Value) -> Result<String> {
    // serde_json's default map is ordered by key
    let sorted: Value = serde_json::from_str(&serde_json::to_string(value)?)?;
    Ok(serde_json::to_string_pretty(&sorted)?)
}

fn write_output(cli: &Cli, body: &str) -> Result<()> {
    let path = match (&cli.out, &cli.out_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.{}", name(&cli.command), cli.format.extension()))),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            std::fs::write(&p, body).with_context(|| format!("writing {}", Path::new(&p).display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<FixtureMismatch>().is_some() {
        return EXIT_MISMATCH;
    }
    match err.downcast_ref::<rigid_core::Error>() {
        Some(rigid_core::Error::Contradiction(_)) => EXIT_CONTRADICTION,
        _ => EXIT_INVALID,
    }
}

fn run(cli: &Cli) -> Result<()> {
    let (report, failure) = execute(&cli.command)?;
    write_output(cli, &render(&report, cli.format)?)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

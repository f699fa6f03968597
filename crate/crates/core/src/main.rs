//! Command-line front end: field and S-ring inspection, constant
//! computation, formula emission, and the verification suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use divring::construct::{
    build_neq, build_phi_inf, build_produnits, build_sq, compute_constants, find_lenstra_pair,
};
use divring::lform;
use divring::qfield::{make_field, KElem};
use divring::report::{
    to_json, BuildReport, ConstantsReport, FactorReport, FieldReport, LenstraReport,
    SunitsReport, SCHEMA,
};
use divring::sring::{sring_from_spec, SRing};
use divring::verify::{run_verify, Suite, VerifyOptions};
use divring::{ideals, Error};

#[derive(Parser)]
#[command(
    name = "divring",
    about = "Divisibility-language formulas over rings of S-integers of imaginary quadratic fields"
)]
struct Cli {
    /// Squarefree negative d of K = Q(√d).
    #[arg(short, long, global = true, default_value_t = -1, allow_negative_numbers = true)]
    d: i64,
    /// Primes of S as comma-separated <prime><r|s1|s2> entries.
    #[arg(short = 'S', long = "set", global = true, default_value = "2r", value_name = "SPEC")]
    s: String,
    /// Prime scan bound for the Lenstra pair.
    #[arg(long, global = true, default_value_t = 2000)]
    scan_bound: u64,
    /// Height bound for bounded witness searches.
    #[arg(long, global = true, default_value_t = 6)]
    bound: i64,
    /// Sample count per randomized check.
    #[arg(long, global = true, default_value_t = 25)]
    samples: u32,
    /// RNG seed (fixed seed → byte-identical output).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the field data for Q(√d).
    Field,
    /// Factor an element "(x + y*w)/den" into prime ideals.
    Factor { element: String },
    /// Show the S-ring caches: class data and S-unit generators.
    Sunits,
    /// Find and certify the Lenstra pair (p, b).
    Lenstra,
    /// Compute every constant the formulas need.
    Constants,
    /// Emit a formula as an S-expression: neq, produnits, phi-inf or sq.
    Build { which: String },
    /// Run a verification suite: constants, lenstra, produnits, neq,
    /// lemmas, sq or all.
    Verify { suite: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Runs the subcommand; returns whether all checks passed (always true
/// for the non-verify commands that succeed).
fn run(cli: &Cli) -> anyhow::Result<bool> {
    let spec = format!("d={};S={}", cli.d, cli.s);
    let emit = |text: String| -> anyhow::Result<()> {
        match &cli.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {path:?}"))?,
            None => print!("{text}"),
        }
        Ok(())
    };

    match &cli.command {
        Command::Field => {
            let field = make_field(cli.d)?;
            let report = FieldReport {
                schema: SCHEMA,
                command: "field".to_string(),
                d: field.d,
                disc: field.disc,
                omega: if field.omega_half {
                    format!("(1+sqrt({}))/2", field.d)
                } else {
                    format!("sqrt({})", field.d)
                },
                torsion_order: field.w,
                torsion_units: field.torsion_units.iter().map(KElem::render).collect(),
            };
            if cli.json {
                emit(to_json(&report))?;
            } else {
                emit(format!(
                    "K = Q(sqrt({})), D = {}, omega = {}, w = {}\ntorsion: {}\n",
                    report.d,
                    report.disc,
                    report.omega,
                    report.torsion_order,
                    report.torsion_units.join(", ")
                ))?;
            }
            Ok(true)
        }
        Command::Factor { element } => {
            let ring = ring(&spec)?;
            let x = KElem::parse(element)?;
            if x.is_zero() {
                bail!(Error::ValuationOfZero);
            }
            let fac = ideals::factor_element(&ring.field, &x)?;
            let report = FactorReport {
                schema: SCHEMA,
                command: "factor".to_string(),
                spec: spec.clone(),
                element: x.render(),
                factorization: ideals::render_factorization(&fac),
                norm: ring.field.norm(&x).to_string(),
            };
            if cli.json {
                emit(to_json(&report))?;
            } else {
                emit(format!(
                    "{} = {} (norm {})\n",
                    report.element, report.factorization, report.norm
                ))?;
            }
            Ok(true)
        }
        Command::Sunits => {
            let ring = ring(&spec)?;
            let report = SunitsReport {
                schema: SCHEMA,
                command: "sunits".to_string(),
                spec: spec.clone(),
                class_number: ring.h_k,
                class_orders: ring.class_orders.clone(),
                u_k: ring.u_k,
                torsion_generator: ring.zeta().render(),
                pi_generators: ring.pis.iter().map(KElem::render).collect(),
            };
            if cli.json {
                emit(to_json(&report))?;
            } else {
                emit(format!(
                    "h_K = {}, class orders {:?}, u_K = {}\nzeta = {}\npi: {}\n",
                    report.class_number,
                    report.class_orders,
                    report.u_k,
                    report.torsion_generator,
                    report.pi_generators.join(", ")
                ))?;
            }
            Ok(true)
        }
        Command::Lenstra => {
            let ring = ring(&spec)?;
            let (p, b, prime) = find_lenstra_pair(&ring, cli.scan_bound)?;
            let report = LenstraReport {
                schema: SCHEMA,
                command: "lenstra".to_string(),
                spec: spec.clone(),
                p,
                b,
                certifying_prime: prime.to_string(),
                image_index: ring.unit_image_index(&prime)?,
            };
            if cli.json {
                emit(to_json(&report))?;
            } else {
                emit(format!(
                    "(p, b) = ({}, {}), certified by P = {} with image index {}\n",
                    report.p, report.b, report.certifying_prime, report.image_index
                ))?;
            }
            Ok(true)
        }
        Command::Constants => {
            let ring = ring(&spec)?;
            let c = compute_constants(&ring, cli.scan_bound)?;
            let report = constants_report(&spec, &c);
            if cli.json {
                emit(to_json(&report))?;
            } else {
                emit(format!(
                    "(p, b) = ({}, {}), C² = {}, q = {}, q_i = {:?}, |I| = {}, |J| = {}\n",
                    report.lenstra_p,
                    report.lenstra_b,
                    report.c_sq,
                    report.q,
                    report.q_list,
                    report.i_size,
                    report.j_size
                ))?;
            }
            Ok(true)
        }
        Command::Build { which } => {
            let ring = ring(&spec)?;
            let c = compute_constants(&ring, cli.scan_bound)?;
            let formula = match which.as_str() {
                "neq" => build_neq(&ring, &c),
                "produnits" => build_produnits(&ring, &c),
                "phi-inf" => build_phi_inf(&ring, &c),
                "sq" => build_sq(&ring, &c),
                other => bail!("unknown formula {other:?} (expected neq, produnits, phi-inf or sq)"),
            };
            let text = lform::print(&formula);
            if cli.json {
                let report = BuildReport {
                    schema: SCHEMA,
                    command: "build".to_string(),
                    spec: spec.clone(),
                    which: which.clone(),
                    atoms: formula.atom_count(),
                    formula: text,
                };
                emit(to_json(&report))?;
            } else {
                emit(format!("{text}\n"))?;
            }
            Ok(true)
        }
        Command::Verify { suite } => {
            let ring = ring(&spec)?;
            let suite: Suite = suite.parse()?;
            let opts = VerifyOptions {
                samples: cli.samples,
                seed: cli.seed,
                bound: cli.bound,
                scan_bound: cli.scan_bound,
                ..VerifyOptions::default()
            };
            let report = run_verify(&ring, &spec, suite, &opts)?;
            if cli.json {
                emit(to_json(&report))?;
            } else {
                let mut text = String::new();
                for check in &report.checks {
                    text.push_str(&format!(
                        "{}: {} passed, {} failed{}\n",
                        check.name,
                        check.passed,
                        check.failed,
                        match &check.first_failure {
                            Some(f) => format!(" (first failure: {f})"),
                            None => String::new(),
                        }
                    ));
                }
                text.push_str(if report.pass { "PASS\n" } else { "FAIL\n" });
                emit(text)?;
            }
            Ok(report.pass)
        }
    }
}

fn ring(spec: &str) -> anyhow::Result<SRing> {
    sring_from_spec(spec).with_context(|| format!("building the S-ring for {spec:?}"))
}

fn constants_report(spec: &str, c: &divring::construct::Constants) -> ConstantsReport {
    ConstantsReport {
        schema: SCHEMA,
        command: "constants".to_string(),
        spec: spec.to_string(),
        lenstra_p: c.lenstra_p,
        lenstra_b: c.lenstra_b,
        certifying_prime: c.certifying_prime.to_string(),
        c_sq: c.c_sq.to_string(),
        q: c.q,
        q_list: c.q_list.clone(),
        i_size: c.i_set.len(),
        j_size: c.j_set.len(),
    }
}

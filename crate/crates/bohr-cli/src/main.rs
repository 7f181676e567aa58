//! Command-line front end. Every verb appends one record to the run ledger
//! (`--out`, else `BOHR_LEDGER`, else `./bohr-ledger.jsonl`) and prints its
//! result to stdout. Randomized verbs require an explicit `--seed`; there is
//! no wall-clock seeding. Exit codes: 0 pass, 1 assertion failure, 2 usage
//! error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bohr_core::kernel::{enumerate_sorted_tuples, IndexTuple, PrimeTable};
use bohr_core::multiplier::{classify, verdict_table, DirichletSpace, MultiplierVerdict};
use bohr_core::seqlab::b_functional;
use bohr_core::torusnum::{
    bh_ratio, fred1_check, fred2_ratio, h2_sharp_constant, khinchine_ratio, ksz_search,
    sidon_constant, Fred1Instance, NormKind, NormReport,
};

use bohr_cli::formats::{
    b_estimate_csv, b_estimate_json, export_sequence, export_series, import_sequence,
    import_series, json_real,
};
use bohr_cli::ledger::{resolve_path, Ledger};
use bohr_cli::suites::{
    canonical_rows, random_homogeneous, run_suite, Lcg, CANONICAL_SPACES, SUITE_NAMES,
};

#[derive(Parser)]
#[command(
    name = "bohr",
    version,
    about = "Dirichlet-series multiplier classification and polytorus numerics",
    after_help = "Environment: BOHR_LEDGER overrides the default ledger path; \
                  BOHR_TIMESTAMP pins record timestamps for replay checks."
)]
struct Cli {
    /// Ledger file receiving one JSON-line record per run.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a multiplicative sequence (given by its prime values) as an
    /// absolute multiplier of a Dirichlet-series space.
    Classify {
        /// Sequence spec JSON file (the values at the ascending primes).
        #[arg(long)]
        seq: PathBuf,
        /// Target space: hinf | hp:<p> | hinfm:<m> | hpm:<p>:<m>.
        #[arg(long)]
        space: String,
        /// Evidence horizon for numeric scans.
        #[arg(long, default_value_t = 65_536)]
        horizon: u64,
        /// Output format: json | csv.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Verdict matrix for the canonical sequence suite.
    VerdictTable {
        /// Suite of rows (only "canonical" is defined).
        #[arg(long, default_value = "canonical")]
        suite: String,
        /// Output format: csv | json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Evidence horizon for numeric scans.
        #[arg(long, default_value_t = 65_536)]
        horizon: u64,
    },
    /// Checkpoint table of the b functional for a sequence spec.
    Bfunc {
        /// Sequence spec JSON file.
        #[arg(long)]
        seq: PathBuf,
        /// Largest index of the checkpoint table.
        #[arg(long, default_value_t = 1_048_576)]
        horizon: u64,
        /// Output format: json | csv.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Desk-scale verification runs for the inequalities.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Sidon-constant estimate for Dirichlet polynomials of length N.
    Sidon {
        /// Polynomial length.
        #[arg(long)]
        n: u64,
        /// Outer random restarts of the coefficient ascent.
        #[arg(long, default_value_t = 32)]
        restarts: u32,
        /// RNG seed (required: runs are reproducible).
        #[arg(long)]
        seed: u64,
    },
    /// Run a named experiment suite with its published seeds.
    RunSuite {
        /// One of: canonical-multipliers, inequality-batch, sidon-sweep,
        /// counterexamples.
        name: String,
    },
    /// Validate a series file and print its canonical JSON form.
    ImportSeries {
        /// Path of the series JSON file.
        path: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Randomized sign search over a multinomial coefficient family.
    Ksz {
        /// Homogeneity degree (at least 2).
        #[arg(long)]
        m: u32,
        /// Number of variables.
        #[arg(long)]
        n: u32,
        /// Number of sign patterns sampled.
        #[arg(long, default_value_t = 256)]
        trials: u32,
        /// RNG seed (required: runs are reproducible).
        #[arg(long)]
        seed: u64,
    },
    /// Norm-comparison inequality on one random homogeneous polynomial.
    Khinchine {
        /// Homogeneity degree.
        #[arg(long)]
        m: u32,
        /// Number of variables.
        #[arg(long)]
        n: u32,
        /// Lower exponent.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Upper exponent.
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        /// Monte-Carlo samples per norm.
        #[arg(long, default_value_t = 100_000)]
        samples: u32,
        /// RNG seed (required: runs are reproducible).
        #[arg(long)]
        seed: u64,
    },
    /// Hypercontractive coefficient-norm ratio (report only).
    Bh {
        /// Homogeneity degree.
        #[arg(long)]
        m: u32,
        /// Number of variables.
        #[arg(long)]
        n: u32,
        /// Sup-norm ascent restarts.
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        /// RNG seed (required: runs are reproducible).
        #[arg(long)]
        seed: u64,
    },
    /// Constant-free two-factor bound on random nonnegative instances.
    Fred1 {
        /// Number of variables.
        #[arg(long)]
        n: u32,
        /// Split length (integer, at least 2).
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Radius bounding the r values.
        #[arg(long, default_value_t = 0.9)]
        rho: f64,
        /// Largest tuple length.
        #[arg(long, default_value_t = 4)]
        m_max: u32,
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        trials: u32,
        /// RNG seed (required: runs are reproducible).
        #[arg(long)]
        seed: u64,
    },
    /// Split mixed-norm ratio on one random polynomial (report only).
    Fred2 {
        /// Homogeneity degree.
        #[arg(long)]
        m: u32,
        /// Number of variables.
        #[arg(long)]
        n: u32,
        /// Split length (1 through m).
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Sup-norm ascent restarts.
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        /// RNG seed (required: runs are reproducible).
        #[arg(long)]
        seed: u64,
    },
    /// Sharp-constant check for the Hilbert-side coefficient bound
    /// (deterministic closed forms; no seed).
    H2 {
        /// Point moduli inside the unit disk, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0 / 3.0])]
        z: Vec<f64>,
        /// Per-variable exponent truncation.
        #[arg(long, default_value_t = 30)]
        truncation: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ledger_path = resolve_path(cli.out.as_deref());
    let mut ledger = Ledger::open(ledger_path);
    match dispatch(cli.cmd, &mut ledger) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_space(text: &str) -> Result<DirichletSpace, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let space = match parts.as_slice() {
        ["hinf"] => DirichletSpace::HInf,
        ["hp", p] => DirichletSpace::Hp(p.parse().map_err(usage)?),
        ["hinfm", m] => DirichletSpace::HInfHomog(m.parse().map_err(usage)?),
        ["hpm", p, m] => {
            DirichletSpace::HpHomog(p.parse().map_err(usage)?, m.parse().map_err(usage)?)
        }
        _ => {
            return Err(CliError::Usage(format!(
                "unknown space {text:?}; expected hinf | hp:<p> | hinfm:<m> | hpm:<p>:<m>"
            )))
        }
    };
    space.validate().map_err(usage)?;
    Ok(space)
}

fn norm_report_json(r: &NormReport) -> serde_json::Value {
    let kind = match &r.kind {
        NormKind::L2Exact => serde_json::json!({"kind": "l2-exact"}),
        NormKind::LpMonteCarlo { p, samples, stderr } => serde_json::json!({
            "kind": "lp-monte-carlo", "p": p, "samples": samples, "stderr": stderr,
        }),
        NormKind::SupEstimate { restarts, best_point } => serde_json::json!({
            "kind": "sup-estimate", "restarts": restarts,
            "witness_angles": best_point.angles(),
        }),
    };
    serde_json::json!({"value": r.value, "detail": kind, "seed": r.seed})
}

fn verdict_json(v: &MultiplierVerdict) -> serde_json::Value {
    let e = &v.evidence;
    serde_json::json!({
        "space": v.space.to_string(),
        "verdict": v.verdict.to_string(),
        "clause": format!("{:?}", e.clause),
        "sup_prime_value": e.sup_prime_value,
        "strict_unit_bound": e.strict_unit_bound,
        "membership": e.membership.as_ref().map(|m| serde_json::json!({
            "space": format!("{:?}", m.space),
            "verdict": format!("{:?}", m.verdict),
            "basis": format!("{:?}", m.basis),
            "finite_evidence": json_real(m.finite_evidence),
            "witness": m.witness,
            "scanned": m.scanned,
        })),
        "b_estimate": e.b_estimate.as_ref().map(b_estimate_json),
        "note": e.note,
    })
}

fn dispatch(cmd: Cmd, ledger: &mut Ledger) -> Result<ExitCode, CliError> {
    match cmd {
        Cmd::Classify { seq, space, horizon, format } => {
            let text = std::fs::read_to_string(&seq)?;
            let z = import_sequence(&text).map_err(usage)?;
            let target = parse_space(&space)?;
            let table = PrimeTable::new(horizon.max(1024) as usize, 0);
            let verdict = classify(
                &bohr_core::multiplier::MultiplicativeSeq::new(z.clone()),
                target,
                horizon,
                &table,
            )
            .map_err(usage)?;
            let payload = verdict_json(&verdict);
            match format.as_str() {
                "json" => println!("{payload}"),
                "csv" => {
                    println!("space,verdict,clause");
                    println!(
                        "{},{},{:?}",
                        verdict.space, verdict.verdict, verdict.evidence.clause
                    );
                }
                other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
            }
            ledger.append(
                "classify",
                serde_json::json!({
                    "seq": export_sequence(&z), "space": space, "horizon": horizon,
                }),
                None,
                payload,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerdictTable { suite, format, horizon } => {
            if suite != "canonical" {
                return Err(CliError::Usage(format!("unknown row suite {suite:?}")));
            }
            let table = PrimeTable::new(horizon.max(1024) as usize, 0);
            let rows = canonical_rows();
            let vt = verdict_table(&rows, &CANONICAL_SPACES, horizon, &table).map_err(usage)?;
            let mut cells = Vec::new();
            for (i, row) in vt.cells.iter().enumerate() {
                for cell in row {
                    cells.push(serde_json::json!({
                        "sequence": vt.row_labels[i],
                        "space": cell.space.to_string(),
                        "verdict": cell.verdict.to_string(),
                        "clause": format!("{:?}", cell.evidence.clause),
                    }));
                }
            }
            match format.as_str() {
                "csv" => {
                    println!("sequence,space,verdict,clause");
                    for c in &cells {
                        println!(
                            "{},{},{},{}",
                            c["sequence"].as_str().unwrap(),
                            c["space"].as_str().unwrap(),
                            c["verdict"].as_str().unwrap(),
                            c["clause"].as_str().unwrap()
                        );
                    }
                }
                "json" => println!("{}", serde_json::json!(cells)),
                other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
            }
            ledger.append(
                "verdict-table",
                serde_json::json!({"suite": suite, "horizon": horizon}),
                None,
                serde_json::json!({"cells": cells}),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bfunc { seq, horizon, format } => {
            let text = std::fs::read_to_string(&seq)?;
            let z = import_sequence(&text).map_err(usage)?;
            let needs_primes =
                matches!(z.kind(), bohr_core::seqlab::SeqKind::PrimePower { .. });
            let table =
                PrimeTable::new(if needs_primes { horizon as usize } else { 64 }, 0);
            let est = b_functional(&z, horizon, &table).map_err(usage)?;
            match format.as_str() {
                "json" => println!("{}", b_estimate_json(&est)),
                "csv" => print!("{}", b_estimate_csv(&est)),
                other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
            }
            ledger.append(
                "bfunc",
                serde_json::json!({"seq": export_sequence(&z), "horizon": horizon}),
                None,
                b_estimate_json(&est),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { what } => run_verify(what, ledger),
        Cmd::Sidon { n, restarts, seed } => {
            let table = PrimeTable::new((n as usize).max(8), 1024);
            let rep = sidon_constant(n, restarts, seed, &table).map_err(usage)?;
            let payload = serde_json::json!({
                "n": rep.n,
                "estimate": rep.estimate,
                "asymptotic_reference": rep.asymptotic_reference,
                "coeffs": rep.coeffs.iter().map(|c| (c.re, c.im)).collect::<Vec<_>>(),
                "sup": norm_report_json(&rep.sup),
            });
            println!("{payload}");
            ledger.append(
                "sidon",
                serde_json::json!({"n": n, "restarts": restarts}),
                Some(seed),
                payload,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::RunSuite { name } => {
            if !SUITE_NAMES.contains(&name.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown suite {name:?}; expected one of {SUITE_NAMES:?}"
                )));
            }
            let outcome = run_suite(&name, ledger)?;
            if outcome.passed() {
                println!("suite {name}: all hard assertions passed");
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "{}",
                    serde_json::json!({"suite": name, "failures": outcome.failures})
                );
                Ok(ExitCode::FAILURE)
            }
        }
        Cmd::ImportSeries { path } => {
            let text = std::fs::read_to_string(&path)?;
            let table = PrimeTable::new(20_000, 300_000);
            match import_series(&text, &table) {
                Ok(series) => {
                    println!("{}", export_series(&series));
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
    }
}

fn run_verify(what: VerifyCmd, ledger: &mut Ledger) -> Result<ExitCode, CliError> {
    match what {
        VerifyCmd::Ksz { m, n, trials, seed } => {
            let coeffs: Vec<f64> = bohr_core::kernel::enumerate_lambda(m, n)
                .map(|a| bohr_core::kernel::multinomial(&a).unwrap() as f64)
                .collect();
            let rep = ksz_search(m, n, &coeffs, trials, seed).map_err(usage)?;
            let payload = serde_json::json!({
                "m": m, "n": n, "trials": trials,
                "best_ratio": rep.best_ratio,
                "best_sup": rep.best_sup,
                "denom": rep.denom,
                "best_signs": rep.best_signs,
            });
            println!("{payload}");
            ledger.append(
                "verify-ksz",
                serde_json::json!({"m": m, "n": n, "trials": trials, "family": "multinomial"}),
                Some(seed),
                payload,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        VerifyCmd::Khinchine { m, n, r, s, samples, seed } => {
            let mut rng = Lcg(seed);
            let poly = random_homogeneous(m, n, &mut rng);
            let rep = khinchine_ratio(&poly, r, s, samples, seed).map_err(usage)?;
            let payload = serde_json::json!({
                "m": m, "n": n, "r": r, "s": s,
                "ratio": rep.ratio, "bound": rep.bound,
                "combined_stderr": rep.combined_stderr,
                "flagged": rep.flagged,
            });
            println!("{payload}");
            ledger.append(
                "verify-khinchine",
                serde_json::json!({"m": m, "n": n, "r": r, "s": s, "samples": samples}),
                Some(seed),
                payload,
            )?;
            Ok(if rep.flagged { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        VerifyCmd::Bh { m, n, restarts, seed } => {
            let mut rng = Lcg(seed);
            let poly = random_homogeneous(m, n, &mut rng);
            let rep = bh_ratio(&poly, restarts, seed).map_err(usage)?;
            let payload = serde_json::json!({
                "m": m, "n": n,
                "coeff_norm": rep.coeff_norm,
                "sup": norm_report_json(&rep.sup),
                "ratio": rep.ratio,
            });
            println!("{payload}");
            ledger.append(
                "verify-bh",
                serde_json::json!({"m": m, "n": n, "restarts": restarts}),
                Some(seed),
                payload,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        VerifyCmd::Fred1 { n, p, rho, m_max, trials, seed } => {
            if p < 2 || m_max < p {
                return Err(CliError::Usage("need p >= 2 and m_max >= p".into()));
            }
            let mut rng = Lcg(seed);
            let mut violations = 0u32;
            let mut worst = f64::INFINITY;
            for _ in 0..trials {
                let mut coeffs = std::collections::BTreeMap::new();
                for deg in p..=m_max {
                    for t in enumerate_sorted_tuples(deg, n) {
                        if rng.next_f64() < 0.7 {
                            coeffs.insert(IndexTuple::new(t), rng.next_f64());
                        }
                    }
                }
                let r: Vec<f64> = (0..n).map(|_| rng.next_f64() * rho * 0.999).collect();
                let out =
                    fred1_check(&Fred1Instance { nvars: n, p, rho, r, coeffs }).map_err(usage)?;
                if out.lhs > out.rhs * (1.0 + 1e-12) {
                    violations += 1;
                }
                if out.lhs > 0.0 {
                    worst = worst.min(out.rhs / out.lhs);
                }
            }
            let payload = serde_json::json!({
                "n": n, "p": p, "rho": rho, "m_max": m_max, "trials": trials,
                "violations": violations, "min_rhs_over_lhs": json_real(worst),
            });
            println!("{payload}");
            ledger.append(
                "verify-fred1",
                serde_json::json!({"n": n, "p": p, "rho": rho, "m_max": m_max, "trials": trials}),
                Some(seed),
                payload,
            )?;
            Ok(if violations > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        VerifyCmd::Fred2 { m, n, p, restarts, seed } => {
            let mut rng = Lcg(seed);
            let poly = random_homogeneous(m, n, &mut rng);
            let rep = fred2_ratio(&poly, p, restarts, seed).map_err(usage)?;
            let payload = serde_json::json!({
                "m": m, "n": n, "p": p,
                "mixed_norm": rep.mixed_norm,
                "sup": norm_report_json(&rep.sup),
                "ratio": rep.ratio,
                "reference_growth": rep.reference_growth,
                "kappa": rep.kappa,
            });
            println!("{payload}");
            ledger.append(
                "verify-fred2",
                serde_json::json!({"m": m, "n": n, "p": p, "restarts": restarts}),
                Some(seed),
                payload,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        VerifyCmd::H2 { z, truncation } => {
            let rep = h2_sharp_constant(&z, truncation).map_err(usage)?;
            let payload = serde_json::json!({
                "z": z, "truncation": truncation,
                "empirical_ratio": rep.empirical_ratio,
                "exact_constant": rep.exact_constant,
            });
            println!("{payload}");
            ledger.append(
                "verify-h2",
                serde_json::json!({"z": z, "truncation": truncation}),
                None,
                payload,
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

//! Command-line front end: sequence tables, Hankel certificates,
//! divisibility probes, Mellin tables, density quadrature oracles,
//! Carleman diagnostics, Bernstein reports, the determinacy classifier,
//! and the full verification suite.
//!
//! Output is JSON by default (CSV where a subcommand has a natural table;
//! `gen` defaults to CSV since a sequence export is a table). Identical
//! invocations produce byte-identical output: no timestamps, fixed field
//! order, rows sorted.
//!
//! Exit codes: 0 success, 1 computation failure (structured error emitted),
//! 2 argument parse failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stieltjes_core::densities::{self, DensityModel};
use stieltjes_core::divisibility::{
    carleman_diagnose, complete_monotonicity_check, determinacy_classify_rational,
    FactorizationTheorem,
};
use stieltjes_core::hankel;
use stieltjes_core::hiprec::decimal_string;
use stieltjes_core::mellin;
use stieltjes_core::report;
use stieltjes_core::sequences::{self, FamilyId};
use stieltjes_core::verification;
use stieltjes_core::{Rational, DEFAULT_N, DEFAULT_PMAX, DEFAULT_PRECISION, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "stieltjes")]
#[command(about = "Moment-sequence toolkit: exact Hankel certification, divisibility probes, Mellin transforms, density oracles, determinacy diagnostics")]
#[command(version)]
struct Cli {
    /// Output format (gen defaults to csv, everything else to json)
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Write output to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Working precision in bits (env: STIELTJES_PRECISION)
    #[arg(long, global = true)]
    precision: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Family selector shared by most subcommands.
#[derive(Args, Clone)]
struct FamilyArgs {
    /// Family: catalan | central-binomial | central-binomial-scaled |
    /// double-factorial | factorial | even-factorial | fuss-catalan |
    /// fuss-binomial | k-factorial | gamma-power
    #[arg(long)]
    family: String,

    /// Order parameter k (fuss-catalan, fuss-binomial, k-factorial)
    #[arg(long)]
    k: Option<u32>,

    /// Parameter a as an integer or fraction like 1/2 (gamma-power)
    #[arg(long)]
    a: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sequence table
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        /// Last index N (terms m_0..m_N)
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
    },
    /// Hankel certificates (both families) for a sequence or its power
    Hankel {
        #[command(flatten)]
        family: FamilyArgs,
        /// Hankel order (matrix size order+1)
        #[arg(long)]
        order: usize,
        /// Exponent; omitted means the base sequence (c = 1)
        #[arg(long)]
        c: Option<f64>,
        /// Precision-escalation ceiling in bits
        #[arg(long, default_value_t = DEFAULT_PMAX)]
        pmax: u32,
    },
    /// Infinite-divisibility probe over a grid of exponents
    Probe {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated exponents, e.g. 0.1,0.25,0.5
        #[arg(long, value_delimiter = ',')]
        c_grid: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_PMAX)]
        pmax: u32,
    },
    /// Mellin transform table plus moment-consistency residual
    Mellin {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 10.0)]
        s_max: f64,
        #[arg(long, default_value_t = 0.5)]
        s_step: f64,
        /// Highest integer point for the consistency residual
        #[arg(long, default_value_t = 20)]
        consistency_n: usize,
        /// Evaluate outside the determinate range (value not asserted as a
        /// transform there)
        #[arg(long, default_value_t = false)]
        uncertified: bool,
    },
    /// Density quadrature-vs-moment table, optional plot grid
    Density {
        /// Model: catalan-density | central-binomial-density |
        /// scaled-arcsine | symmetric-arcsine | chi-square-1 | fuss-catalan-2
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also write a (x, f(x)) CSV grid to this path
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        plot_points: usize,
    },
    /// Carleman determinacy diagnostic
    Carleman {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Bernstein factorization and complete-monotonicity report
    Bernstein {
        /// Theorem id: t1 | t2 | t2prime | t3 | t5 | t6
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Highest derivative order checked for complete monotonicity
        #[arg(long, default_value_t = 8)]
        j: u32,
    },
    /// Determinacy classification with citation
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        /// Exponent, decimal or exact fraction like 2/3
        #[arg(long)]
        c: String,
    },
    /// Run the full verification suite (nonzero exit on any failure)
    VerifyAll,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    if let Ok(f) = s.parse::<f64>() {
        if let Some(r) = Rational::from_f64(f) {
            return Ok(r);
        }
    }
    Err(format!("cannot parse `{s}` as a rational"))
}

impl FamilyArgs {
    fn resolve(&self) -> Result<FamilyId, String> {
        let need_k = || self.k.ok_or(format!("family `{}` requires --k", self.family));
        let fam = match self.family.as_str() {
            "catalan" => FamilyId::Catalan,
            "central-binomial" => FamilyId::CentralBinomial,
            "central-binomial-scaled" => FamilyId::CentralBinomialScaled,
            "double-factorial" => FamilyId::DoubleFactorial,
            "factorial" => FamilyId::Factorial,
            "even-factorial" => FamilyId::EvenFactorial,
            "fuss-catalan" => FamilyId::FussCatalan { k: need_k()? },
            "fuss-binomial" => FamilyId::FussBinomial { k: need_k()? },
            "k-factorial" => FamilyId::KFactorial { k: need_k()? },
            "gamma-power" => {
                let a = self
                    .a
                    .as_deref()
                    .ok_or("family `gamma-power` requires --a".to_string())?;
                FamilyId::GammaPower {
                    a: parse_rational(a)?,
                }
            }
            other => return Err(format!("unknown family `{other}`")),
        };
        fam.validate().map_err(|e| e.to_string())?;
        Ok(fam)
    }
}

/// Subcommand output: a JSON document plus an optional native CSV table.
struct Output {
    json: Value,
    csv: Option<String>,
}

fn run_command(cli: &Cli) -> Result<Output, String> {
    let precision = cli
        .precision
        .or_else(|| {
            std::env::var("STIELTJES_PRECISION")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_PRECISION);

    match &cli.command {
        Command::Gen { family, n } => {
            let fam = family.resolve()?;
            let seq = sequences::generate_with_precision(&fam, *n, precision)
                .map_err(|e| e.to_string())?;
            let json = serde_json::to_value(report::sequence_report(&fam, &seq)).unwrap();
            Ok(Output {
                json,
                csv: Some(sequences::sequence_csv(&seq)),
            })
        }
        Command::Hankel {
            family,
            order,
            c,
            pmax,
        } => {
            let fam = family.resolve()?;
            let n_terms = 2 * order + 1;
            let seq = sequences::generate_with_precision(&fam, n_terms, precision)
                .map_err(|e| e.to_string())?;
            let (plain, shifted) = match c {
                None => {
                    if seq.is_exact() {
                        hankel::certify_stieltjes_exact(&seq, *order).map_err(|e| e.to_string())?
                    } else {
                        let pseq = sequences::power(&seq, 1.0, precision)
                            .map_err(|e| e.to_string())?;
                        hankel::certify_stieltjes_power(&pseq, *order, *pmax)
                            .map_err(|e| e.to_string())?
                    }
                }
                Some(c) => {
                    let pseq =
                        sequences::power(&seq, *c, precision).map_err(|e| e.to_string())?;
                    hankel::certify_stieltjes_power(&pseq, *order, *pmax)
                        .map_err(|e| e.to_string())?
                }
            };
            let c_val = c.unwrap_or(1.0);
            let reports = vec![
                report::hankel_report(&fam, c_val, &plain),
                report::hankel_report(&fam, c_val, &shifted),
            ];
            Ok(Output {
                json: json!({ "reports": reports }),
                csv: None,
            })
        }
        Command::Probe {
            family,
            c_grid,
            order,
            pmax,
        } => {
            let fam = family.resolve()?;
            let rep = hankel::divisibility_probe(&fam, c_grid, *order, precision, *pmax)
                .map_err(|e| e.to_string())?;
            let json_rep = report::probe_report(&rep);
            let mut csv = String::from("c,verdict,min_minor,precision_bits\n");
            for row in &json_rep.rows {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    row.c,
                    row.verdict,
                    row.min_minor,
                    row.precision_bits.map_or(String::new(), |p| p.to_string())
                ));
            }
            Ok(Output {
                json: serde_json::to_value(json_rep).unwrap(),
                csv: Some(csv),
            })
        }
        Command::Mellin {
            family,
            c,
            s_max,
            s_step,
            consistency_n,
            uncertified,
        } => {
            let fam = family.resolve()?;
            if s_step.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
                || !s_max.is_finite()
                || *s_max < 0.0
            {
                return Err("need --s-max >= 0 and --s-step > 0".to_string());
            }
            let eval = |s: f64| {
                if *uncertified {
                    mellin::mellin_uncertified(&fam, *c, s, precision)
                } else {
                    mellin::mellin(&fam, *c, s, precision)
                }
            };
            let mut rows = Vec::new();
            let mut csv = String::from("s,value\n");
            let mut i = 0u64;
            loop {
                let s = i as f64 * s_step;
                if s > s_max + 1e-12 {
                    break;
                }
                let v = eval(s).map_err(|e| e.to_string())?;
                let dec = decimal_string(&v);
                csv.push_str(&format!("{s},{dec}\n"));
                rows.push(json!({ "s": s, "value": dec }));
                i += 1;
            }
            let consistency = if *uncertified {
                Value::Null
            } else {
                let r = mellin::mellin_moment_consistency(&fam, *c, *consistency_n, precision)
                    .map_err(|e| e.to_string())?;
                json!({ "n_max": consistency_n, "max_residual": decimal_string(&r) })
            };
            Ok(Output {
                json: json!({
                    "family": fam.slug(),
                    "params": report::family_params(&fam),
                    "c": c,
                    "precision_bits": precision,
                    "uncertified": uncertified,
                    "conjectural": fam.is_conjectural(),
                    "rows": rows,
                    "consistency": consistency,
                }),
                csv: Some(csv),
            })
        }
        Command::Density {
            model,
            n_max,
            tol,
            plot,
            plot_points,
        } => {
            let model = DensityModel::parse(model).map_err(|e| e.to_string())?;
            let exact = model
                .matching_family()
                .map(|fam| sequences::generate(&fam, *n_max as usize))
                .transpose()
                .map_err(|e| e.to_string())?;
            let mut rows = Vec::new();
            let mut csv = String::from("n,quadrature,exact,residual\n");
            for n in 0..=*n_max {
                let scale = exact
                    .as_ref()
                    .map(|s| s.exact_terms().unwrap()[n as usize].to_f64().abs())
                    .unwrap_or(1.0)
                    .max(1.0);
                let q = densities::moment_quadrature(model, n, tol * scale)
                    .map_err(|e| e.to_string())?;
                let (exact_dec, residual_dec) = match &exact {
                    Some(seq) => {
                        let t = &seq.exact_terms().unwrap()[n as usize];
                        let e = stieltjes_core::hiprec::float_from_rational(t, 192);
                        let r = stieltjes_core::hiprec::rel_diff(&q.value, &e);
                        (decimal_string(&e), decimal_string(&r))
                    }
                    None => (String::new(), String::new()),
                };
                let q_dec = decimal_string(&q.value);
                csv.push_str(&format!("{n},{q_dec},{exact_dec},{residual_dec}\n"));
                rows.push(json!({
                    "n": n,
                    "quadrature": q_dec,
                    "exact": exact_dec,
                    "residual": residual_dec,
                    "errest": decimal_string(&q.errest),
                    "nodes": q.nodes,
                    "scheme": q.scheme,
                }));
            }
            if let Some(path) = plot {
                let grid =
                    densities::density_plot_csv(model, *plot_points).map_err(|e| e.to_string())?;
                std::fs::write(path, grid).map_err(|e| e.to_string())?;
            }
            Ok(Output {
                json: json!({
                    "model": model.slug(),
                    "tol": tol,
                    "rows": rows,
                }),
                csv: Some(csv),
            })
        }
        Command::Carleman { family, c, n } => {
            let fam = family.resolve()?;
            let diag = carleman_diagnose(&fam, *c, *n, precision).map_err(|e| e.to_string())?;
            Ok(Output {
                json: serde_json::to_value(report::carleman_report(&diag)).unwrap(),
                csv: None,
            })
        }
        Command::Bernstein { theorem, k, n, j } => {
            let t = FactorizationTheorem::parse(theorem, *k).map_err(|e| e.to_string())?;
            let product_ok =
                stieltjes_core::divisibility::bernstein_product_check(t, *n).map_err(|e| e.to_string())?;
            // 50-point log grid in (0, 100]
            let mut grid = Vec::new();
            let mut x = Rational::from(100);
            for _ in 0..50 {
                grid.push(x.clone());
                x *= Rational::from((4, 5));
            }
            let mut factors = Vec::new();
            let mut all_cm = true;
            for h in t.h_functions().map_err(|e| e.to_string())? {
                let shift = h.domain_shift();
                let cm = complete_monotonicity_check(&h, &shift, *j, &grid)
                    .map_err(|e| e.to_string())?;
                all_cm &= cm;
                factors.push(json!({
                    "factor": h.id.to_string(),
                    "completely_monotone": cm,
                }));
            }
            Ok(Output {
                json: json!({
                    "theorem": theorem,
                    "k": k,
                    "n": n,
                    "factorization_exact": product_ok,
                    "all_completely_monotone": all_cm,
                    "j_max": j,
                    "factors": factors,
                }),
                csv: None,
            })
        }
        Command::Classify { family, c } => {
            let fam = family.resolve()?;
            let c_rat = parse_rational(c)?;
            let class =
                determinacy_classify_rational(&fam, &c_rat).map_err(|e| e.to_string())?;
            let rep = report::ClassifyReportJson {
                family: fam.slug().to_string(),
                params: report::family_params(&fam),
                c: c_rat.to_f64(),
                verdict: class.verdict.slug().to_string(),
                citation: class.citation,
            };
            Ok(Output {
                json: serde_json::to_value(rep).unwrap(),
                csv: None,
            })
        }
        Command::VerifyAll => {
            let results = verification::run_all();
            let mut all_passed = true;
            for r in &results {
                eprintln!(
                    "{} criterion-{:02} {} — {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.detail
                );
                all_passed &= r.passed;
            }
            let criteria: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "name": r.name,
                        "passed": r.passed,
                        "detail": r.detail,
                    })
                })
                .collect();
            let out = Output {
                json: json!({ "criteria": criteria, "all_passed": all_passed }),
                csv: None,
            };
            if !all_passed {
                // emit the report, then fail
                emit(cli, &out).map_err(|e| e.to_string())?;
                std::process::exit(1);
            }
            Ok(out)
        }
    }
}

/// Flatten a JSON object into `key,value` CSV rows (arrays and nested
/// objects inline-encoded), for subcommands without a native table.
fn kv_csv(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(map) = v {
        for (k, val) in map {
            let rendered = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k},{}\n", rendered.replace('\n', " ")));
        }
    }
    out
}

fn emit(cli: &Cli, out: &Output) -> std::io::Result<()> {
    let default_fmt = if matches!(cli.command, Command::Gen { .. }) {
        Format::Csv
    } else {
        Format::Json
    };
    let fmt = cli.format.unwrap_or(default_fmt);
    let body = match fmt {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).unwrap()),
        Format::Csv => out.csv.clone().unwrap_or_else(|| kv_csv(&out.json)),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(&cli) {
        Ok(out) => {
            if emit(&cli, &out).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(msg) => {
            let err = json!({ "error": msg });
            let _ = writeln!(
                std::io::stdout(),
                "{}",
                serde_json::to_string_pretty(&err).unwrap()
            );
            ExitCode::from(1)
        }
    }
}

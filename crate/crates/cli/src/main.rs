use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use liminal_core::catalog::{self, EnumerationBounds, ExportFormat, SuiteStatus, SUITES};
use liminal_core::cohomology::{self as coh, CohomologyTable, GradedHypersurface};
use liminal_core::obstruction::{self, ObstructionConfig, SmoothingDirection};
use liminal_core::rational::{format_q64, parse_big};
use liminal_core::spectrum::DiagonalSingularity;
use liminal_core::weights::{self, WeightSystem};

#[derive(Parser)]
#[command(name = "liminal", version, about = "Invariants of weighted homogeneous k-liminal singularities")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Node cap for catalog enumeration.
    #[arg(long, global = true, env = "LIMINAL_CAP")]
    cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Du Bois / rational / liminal levels of a weight system.
    Classify(WsArg),
    /// N, a, r and the canonical twists of a liminal weight system.
    Numerology(WsArg),
    /// Diagonal exponents of a k-liminal singularity in dimension n.
    Family {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// Spectrum of a Brieskorn-Pham singularity.
    Spectrum {
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u64>,
        #[arg(long, default_value_t = liminal_core::spectrum::DEFAULT_MU_CAP)]
        mu_cap: u128,
    },
    /// Cohomology of a sheaf on the Fermat hypersurface of a weight system.
    Cohomology {
        #[command(flatten)]
        ws: WsArg,
        #[arg(long, value_enum)]
        sheaf: Sheaf,
        /// Twist m (or i for the log and form sheaves).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
        /// Form degree for omegaTop / omegaWP / primitive.
        #[arg(long)]
        p: Option<usize>,
    },
    /// Smoothing obstruction for a configuration of singular points.
    Obstruction {
        #[command(subcommand)]
        action: ObstructionAction,
    },
    /// Enumerate weight systems and print the catalog.
    Enumerate(EnumerateArgs),
    /// Run verification suites on one weight system.
    Verify {
        /// Suite id, or "all".
        suite: String,
        #[command(flatten)]
        ws: WsArg,
    },
    /// Write a catalog file, enumerated or converted from JSON.
    Export {
        #[command(flatten)]
        bounds: EnumerateArgs,
        /// Convert an existing JSON catalog instead of enumerating.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct WsArg {
    /// Weight system as a1,a2,...:d.
    #[arg(long, value_parser = parse_ws)]
    ws: WeightSystem,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 8)]
    max_d: u64,
    /// Keep only k-liminal systems.
    #[arg(long)]
    k: Option<u64>,
    /// Allow weights equal to the degree.
    #[arg(long)]
    allow_full_weights: bool,
    /// Run all verification suites on every entry.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum ObstructionAction {
    /// Decide or evaluate the relation for a JSON configuration.
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated λ values in point order.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sheaf {
    /// O_E(m)
    #[value(name = "lineE")]
    LineE,
    /// O_WP(m)
    #[value(name = "lineWP")]
    LineWp,
    /// T_E(m)
    #[value(name = "tangentE")]
    TangentE,
    /// T_WP(m)|E
    #[value(name = "tangentWP")]
    TangentWp,
    /// Ω^p_E(i) for p = n-1, n-2
    #[value(name = "omegaTop")]
    OmegaTop,
    /// Ω^p_WP(r)|E
    #[value(name = "omegaWP")]
    OmegaWp,
    /// Ω^{n-1}(log E)(-iE)|E
    #[value(name = "log")]
    Log,
    /// ∧^{i+1} T_WP|E(-(i+1)d)
    #[value(name = "wedgeTangent")]
    WedgeTangent,
    /// graded T^1
    #[value(name = "t1")]
    T1,
    /// primitive h^{p,n-1-p}
    #[value(name = "primitive")]
    Primitive,
}

fn parse_ws(s: &str) -> Result<WeightSystem, String> {
    WeightSystem::parse(s)
}

fn print(json_mode: bool, value: &Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!("{value}");
    } else {
        println!("{}", text());
    }
}

fn opt_text<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "none".into())
}

fn table_json(t: &CohomologyTable) -> Value {
    serde_json::to_value(t).expect("table")
}

fn table_text(t: &CohomologyTable) -> String {
    let mut s = format!("h = {:?}", t.h);
    if !t.exact {
        s.push_str(&format!(" (bounds {:?} .. {:?})", t.lower, t.upper));
    }
    s
}

fn run(cli: Cli) -> Result<ExitCode> {
    let j = cli.json;
    match cli.command {
        Command::Classify(WsArg { ws }) => {
            let c = weights::classify(&ws);
            let flags: Vec<&str> = ws.flags().iter().map(|f| f.as_str()).collect();
            let v = json!({
                "weight_sum": format_q64(&c.weight_sum),
                "max_du_bois": c.max_du_bois,
                "max_rational": c.max_rational,
                "liminal_k": c.liminal_k,
                "flags": flags,
            });
            print(j, &v, || {
                format!(
                    "weight sum {}\nmax Du Bois {}\nmax rational {}\nliminal k {}\nflags {}",
                    format_q64(&c.weight_sum),
                    opt_text(c.max_du_bois),
                    opt_text(c.max_rational),
                    opt_text(c.liminal_k),
                    if flags.is_empty() { "none".into() } else { flags.join(" ") }
                )
            });
        }
        Command::Numerology(WsArg { ws }) => {
            let num = weights::numerology(&ws)?;
            let v = serde_json::to_value(&num)?;
            print(j, &v, || {
                format!(
                    "k {}\nN {}\na {}\nr {}\nK_E twist {}",
                    num.k, num.canonical_degree, num.top_twist, num.discrepancy, num.ke_degree
                )
            });
        }
        Command::Family { n, k } => {
            let e = weights::diagonal_family(n, k)?;
            let ws = weights::weight_system_from_exponents(&e)?;
            let v = json!({"exponents": e, "weights": ws.weights(), "degree": ws.degree()});
            print(j, &v, || format!("exponents {e:?}\nweight system {ws}"));
        }
        Command::Spectrum { exponents, mu_cap } => {
            let s = DiagonalSingularity::new(exponents)?.spectrum(mu_cap)?;
            let v = serde_json::to_value(s.to_json())?;
            print(j, &v, || {
                let mut out = format!("mu {}", s.total);
                for (x, m) in &s.entries {
                    out.push_str(&format!("\n{} {}", format_q64(x), m));
                }
                out
            });
        }
        Command::Cohomology { ws, sheaf, twist, p } => {
            let ws = ws.ws;
            if let Sheaf::LineWp = sheaf {
                let t = coh::h_line_wp(&ws, twist);
                print(j, &table_json(&t), || table_text(&t));
                return Ok(ExitCode::SUCCESS);
            }
            let hyp = GradedHypersurface::fermat(ws)?;
            let need_p = || p.ok_or_else(|| anyhow!("--p is required for this sheaf"));
            let v = match sheaf {
                Sheaf::LineWp => unreachable!(),
                Sheaf::LineE => table_json(&coh::h_line_E(&hyp, twist)),
                Sheaf::TangentE => table_json(&coh::tangent_E(&hyp, twist)?),
                Sheaf::TangentWp => table_json(&coh::tangent_wp_restricted(&hyp, twist)?),
                Sheaf::OmegaTop => table_json(&coh::omega_top_minus(&hyp, need_p()?, twist)?),
                Sheaf::OmegaWp => table_json(&coh::omega_wp_restricted(&hyp, need_p()?, twist)?),
                Sheaf::Log => table_json(&coh::log_restricted(&hyp, twist)?),
                Sheaf::WedgeTangent => {
                    let i = usize::try_from(twist).context("i must be nonnegative")?;
                    table_json(&coh::wedge_tangent_twisted(&hyp, i)?)
                }
                Sheaf::T1 => {
                    let t1 = coh::graded_T1(&hyp)?;
                    let dims: Vec<(i64, u64)> = t1.dims.iter().map(|(w, d)| (*w, *d)).collect();
                    json!({"degree": t1.degree, "dims": dims, "total": t1.total()})
                }
                Sheaf::Primitive => {
                    json!({"dim": coh::griffiths_steenbrink_primitive(&hyp, need_p()? as i64)})
                }
            };
            print(j, &v, || match (v.get("h"), v.get("dims"), v.get("dim")) {
                (Some(_), _, _) => table_text(&serde_json::from_value(v.clone()).expect("table")),
                (_, Some(d), _) => format!("weights {d}"),
                (_, _, Some(d)) => format!("dim {d}"),
                _ => v.to_string(),
            });
        }
        Command::Obstruction {
            action: ObstructionAction::Check { config, lambda },
        } => {
            let cfg = ObstructionConfig::load(&config)?;
            let dir = match lambda {
                Some(text) => {
                    let values = text.split(',').map(parse_big).collect::<Result<Vec<_>, _>>()?;
                    Some(SmoothingDirection::from_values(&cfg, values)?)
                }
                None => None,
            };
            let report = obstruction::check(&cfg, dir.as_ref())?;
            let v = report.to_json();
            print(j, &v, || {
                let mut out = format!(
                    "{}\ns' = {}, s'' = {}",
                    report.verdict(),
                    report.s_prime,
                    report.s_doubleprime
                );
                if let Some(w) = &report.witness {
                    out.push_str(&format!("\nwitness {}", w.to_json()));
                }
                if let Some(val) = v.get("value").filter(|x| !x.is_null()) {
                    out.push_str(&format!("\nvalue {val}"));
                }
                out
            });
            return Ok(if report.satisfiable {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Enumerate(args) => {
            let entries = build_catalog(&args, cli.cap)?;
            let text = match (j, args.format) {
                (true, _) | (_, Format::Json) => catalog::export_json(&entries)?,
                (false, Format::Csv) => catalog::export_csv(&entries)?,
            };
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
        Command::Verify { suite, ws } => {
            let suites: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                bail!("unknown suite {suite:?}; expected one of {} or all", SUITES.join(", "));
            };
            let entry = catalog::CatalogEntry::new(ws.ws);
            let results = catalog::verify_all(&entry, &suites);
            let v = serde_json::to_value(&results)?;
            print(j, &v, || {
                results
                    .iter()
                    .map(|(id, o)| format!("{id}: {} ({})", status_word(o.status), o.detail))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            if results.values().any(|o| o.status == SuiteStatus::Fail) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Export { bounds, from, output } => {
            let entries = match from {
                Some(path) => catalog::import(&path)?,
                None => build_catalog(&bounds, cli.cap)?,
            };
            let format = match bounds.format {
                Format::Json => ExportFormat::Json,
                Format::Csv => ExportFormat::Csv,
            };
            catalog::export(&entries, format, &output)?;
            let v = json!({"entries": entries.len(), "output": output.display().to_string()});
            print(j, &v, || format!("wrote {} entries to {}", entries.len(), output.display()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn status_word(s: SuiteStatus) -> &'static str {
    match s {
        SuiteStatus::Pass => "pass",
        SuiteStatus::Fail => "fail",
        SuiteStatus::Skipped => "skipped",
    }
}

fn build_catalog(args: &EnumerateArgs, cap: Option<u64>) -> Result<Vec<catalog::CatalogEntry>> {
    let mut bounds = EnumerationBounds::new(args.max_n, args.max_d);
    bounds.require_liminal = args.k;
    bounds.require_genuinely_singular = !args.allow_full_weights;
    let mut entries = catalog::enumerate_with_cap(&bounds, cap.unwrap_or(catalog::DEFAULT_NODE_CAP))?;
    if args.verify {
        catalog::verify_catalog(&mut entries, &SUITES);
    }
    Ok(entries)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

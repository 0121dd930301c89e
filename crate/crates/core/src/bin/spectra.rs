use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use spectra_core::covers::CoverReport;
use spectra_core::harness::{self, siegel_veech_from_sum, verify_genus, VerdictStatus};
use spectra_core::hnfilt::{sum_bound_check, w_catalog, WSpectrum};
use spectra_core::polygons::{dominates, polygon_csv, svg_overlay, PolygonSeries};
use spectra_core::rational::{self, parse_rational, Rational};
use spectra_core::spectra::{estimate_component, estimate_spectrum, EstimateConfig, RunRecord};
use spectra_core::strata::{ComponentId, QStratum, Stratum};
use spectra_core::Permutation;

#[derive(Parser)]
#[command(name = "spectra", version, about = "Lyapunov and Harder-Narasimhan spectra of Teichmüller curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the Lyapunov spectrum of a catalogued component.
    Estimate {
        /// Component such as "H(4)^hyp".
        #[arg(long, required_unless_present = "perm")]
        stratum: Option<ComponentId>,
        /// Explicit permutation "A B C D / D C B A" instead of a catalog entry.
        #[arg(long, conflicts_with = "stratum")]
        perm: Option<String>,
        #[arg(long, default_value_t = 10_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        batches: usize,
        /// Track all 2g exponents.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the (component, index, estimate, stderr) rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the Harder-Narasimhan spectrum w of a component.
    Wspec {
        #[arg(long)]
        stratum: ComponentId,
        #[arg(long)]
        json: bool,
    },
    /// Estimate every catalogued component of a genus and check λ ≥ w.
    Verify {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 10_000_000)]
        steps: u64,
        /// Comma-separated seeds, one run each.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 20)]
        batches: usize,
        /// Directory for the JSON archive, CSV summary and SVG overlays.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare the polygon of a stored run with that of w.
    Polygon {
        /// Run document written by `estimate`.
        #[arg(long)]
        lambda: PathBuf,
        /// "auto" for the catalog value, or a list such as "1,1/2,1/4".
        #[arg(long, default_value = "auto")]
        w: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Double-cover bookkeeping for a quadratic stratum.
    Cover {
        #[arg(long)]
        q: QStratum,
        /// Spectrum of the cover, e.g. "1,1/2,1/3"; defaults to the hyperelliptic-locus formula.
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Area Siegel-Veech constant from a measured exponent sum.
    Sv {
        #[arg(long)]
        stratum: Stratum,
        /// Run document providing the sum and its error.
        #[arg(long, required_unless_present = "sum")]
        from: Option<PathBuf>,
        /// Sum given directly instead.
        #[arg(long, conflicts_with = "from")]
        sum: Option<f64>,
    },
}

fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|t| parse_rational(t).with_context(|| format!("bad entry {t:?}")))
        .collect()
}

fn load_run(path: &PathBuf) -> Result<RunRecord> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunRecord::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_record(r: &RunRecord) {
    println!("{} [{}]", r.label(), r.permutation);
    for (i, (v, s)) in r.estimates.values.iter().zip(&r.stderr).enumerate() {
        println!("  lambda_{} = {:.6} ± {:.6}", i + 1, v, s);
    }
    println!("  sum = {:.6} ± {:.6}", r.sum, r.sum_stderr);
    if let Some(full) = &r.full_spectrum {
        let vals: Vec<String> = full.values.iter().map(|v| format!("{v:.4}")).collect();
        println!("  full spectrum = ({}), symmetric: {}", vals.join(", "), full.symmetric);
    }
    println!("  steps = {} x {} runs, resamples = {}, wall = {:.2}s", r.steps, r.runs, r.resamples, r.wall_time_s);
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate { stratum, perm, steps, seed, batches, full, out, csv } => {
            let cfg = EstimateConfig { full_spectrum: full, ..EstimateConfig::new(steps, seed, batches) };
            let record = match (stratum, perm) {
                (Some(id), _) => estimate_component(&id, &cfg)?,
                (None, Some(p)) => estimate_spectrum(&p.parse::<Permutation>()?, &cfg)?,
                (None, None) => bail!("give --stratum or --perm"),
            };
            print_record(&record);
            if let Some(path) = out {
                fs::write(&path, record.to_json() + "\n")?;
            }
            if let Some(path) = csv {
                fs::write(&path, record.to_csv())?;
            }
        }
        Command::Wspec { stratum, json } => {
            let w = w_catalog(&stratum)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&w)?);
            } else {
                println!("{stratum}: w = {w}");
                match w.sum() {
                    Ok(s) => {
                        let g = stratum.genus();
                        println!("sum = {}", rational::format_rational(&s));
                        println!("sum <= (g+1)/2: {}", sum_bound_check(&w, g)?);
                    }
                    Err(_) => println!("sum: not determined (upper bounds only)"),
                }
            }
        }
        Command::Verify { genus, steps, seeds, batches, report } => {
            let verdicts = verify_genus(genus, steps, &seeds, batches)?;
            if verdicts.is_empty() {
                bail!("no catalogued components in genus {genus}");
            }
            for v in &verdicts {
                let status = match v.status {
                    VerdictStatus::Dominates => "dominates",
                    VerdictStatus::InconclusiveAtCurrentPrecision => "inconclusive at current precision",
                    VerdictStatus::TailBoundsHold => "tail-sum bound check holds (w has upper bounds only)",
                    VerdictStatus::TailBoundsInconclusive => "tail-sum bound check inconclusive",
                };
                let lam: Vec<String> = v.lambda_partial_sums.iter().map(|x| format!("{x:.4}")).collect();
                let w: Vec<String> = v.w_partial_sums.iter().map(rational::format_rational).collect();
                println!("{}: {status}", v.component);
                println!("  partial sums lambda ({}) vs w ({})", lam.join(", "), w.join(", "));
            }
            println!("({})", harness::CONTINUITY_LABEL);
            if let Some(dir) = report {
                for p in harness::write_report(&verdicts, &dir)? {
                    println!("wrote {}", p.display());
                }
            }
        }
        Command::Polygon { lambda, w, svg, csv } => {
            let record = load_run(&lambda)?;
            let wspec = if w == "auto" {
                let id = record.component.clone().context("run has no component; pass --w explicitly")?;
                w_catalog(&id)?
            } else {
                WSpectrum::exact(parse_list(&w)?)
            };
            let wv: Vec<f64> = wspec.values().iter().map(rational::to_f64).collect();
            let slack = 3.0 * record.partial_sum_stderr.iter().copied().fold(0.0, f64::max);
            let verdict = dominates(&record.estimates.values, &wv, slack.max(3.0 * record.sum_stderr))?;
            println!("{}: lambda = {:?}", record.label(), record.estimates.values);
            println!("w = {wspec}");
            println!("dominance: {verdict:?}");
            let mut lp = vec![0.0];
            lp.extend(record.estimates.values.iter().scan(0.0, |a, x| {
                *a += x;
                Some(*a)
            }));
            let mut wp = vec![0.0];
            wp.extend(wv.iter().scan(0.0, |a, x| {
                *a += x;
                Some(*a)
            }));
            let upper = PolygonSeries::new("P_lambda", lp);
            let lower = PolygonSeries::new("P_w", wp);
            if let Some(path) = svg {
                fs::write(&path, svg_overlay(&record.label(), &upper, &lower))?;
            }
            if let Some(path) = csv {
                fs::write(&path, polygon_csv(&[upper, lower]))?;
            }
        }
        Command::Cover { q, w, json } => {
            let w = w.map(|s| parse_list(&s)).transpose()?.map(WSpectrum::exact);
            let report = CoverReport::new(&q, w.as_ref())?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{report}");
            }
        }
        Command::Sv { stratum, from, sum } => {
            let (s, se) = match (from, sum) {
                (Some(path), _) => {
                    let r = load_run(&path)?;
                    (r.sum, r.sum_stderr)
                }
                (None, Some(s)) => (s, 0.0),
                (None, None) => bail!("give --from or --sum"),
            };
            let sv = siegel_veech_from_sum(&stratum, s, se);
            println!("{stratum}: kappa = {}", rational::format_rational(&sv.kappa));
            println!("c_area = {:.6} ± {:.6}{}", sv.c_area, sv.c_area_stderr, if sv.negative { " (negative)" } else { "" });
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

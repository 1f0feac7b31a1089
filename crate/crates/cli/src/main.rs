use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hhs_core::axioms::{full_report, ReportConfig};
use hhs_core::distance::{coarse_hull, df_rows, fit_rows, DfRow, PairSet};
use hhs_core::generators::{bundled, flat_grid, tree_of_flats, ExampleConfig, TreeOfFlatsConfig};
use hhs_core::io::{
    coordinate_scatter_svg, length_exact, load_document, space_to_dot, space_to_json, structure_to_dot,
    structure_to_json, to_stable_string, Document,
};
use hhs_core::metric::delta_report;
use hhs_core::structure::Relation;
use hhs_core::{Error, HhsStructure, Limits, Rational};

const EXIT_VALIDATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "hhs", version, about = "Build and check hierarchically hyperbolic structures on finite graphs")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Caps {
    /// Largest space accepted by the hyperbolicity sweeps.
    #[arg(long, global = true)]
    delta_cap: Option<usize>,
    /// Largest number of vertex pairs a sweep may visit.
    #[arg(long, global = true)]
    pair_budget: Option<u64>,
    /// Largest number of geodesics listed per pair.
    #[arg(long, global = true)]
    geodesic_cap: Option<usize>,
    /// Largest orthogonal family used by partial realization.
    #[arg(long, global = true)]
    family_cap: Option<usize>,
    /// Largest number of realization tuples.
    #[arg(long, global = true)]
    tuple_budget: Option<u64>,
}

impl Caps {
    fn limits(&self) -> anyhow::Result<Limits> {
        let mut limits = Limits::from_env();
        let positive = |name: &str, v: u64| {
            if v == 0 {
                bail!("--{name} must be positive")
            }
            Ok(v)
        };
        if let Some(v) = self.delta_cap {
            limits.delta_cap = positive("delta-cap", v as u64)? as usize;
        }
        if let Some(v) = self.pair_budget {
            limits.pair_budget = positive("pair-budget", v)?;
        }
        if let Some(v) = self.geodesic_cap {
            limits.geodesic_cap = positive("geodesic-cap", v as u64)? as usize;
        }
        if let Some(v) = self.family_cap {
            limits.family_cap = positive("family-cap", v as u64)? as usize;
        }
        if let Some(v) = self.tuple_budget {
            limits.tuple_budget = positive("tuple-budget", v)?;
        }
        Ok(limits)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExampleKind {
    TreeOfFlats,
    FlatGrid,
    IntervalComplex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    SvgPlot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an example structure (or space) and write it as JSON.
    Build {
        #[arg(long, value_enum, required_unless_present_any = ["config", "bundled"])]
        example: Option<ExampleKind>,
        /// Flat radius (tree of flats) or side length (flat grid).
        #[arg(long = "N", short = 'N')]
        n: Option<usize>,
        /// Tree depth (tree of flats).
        #[arg(long = "D", short = 'D')]
        d: Option<usize>,
        /// Generator config file.
        #[arg(long, conflicts_with = "bundled")]
        config: Option<PathBuf>,
        /// Name of a bundled config, e.g. toy2.json.
        #[arg(long)]
        bundled: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate the relation axioms, then compute every metric-axiom constant.
    Check {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the distance formula on every pair and fit (K, C).
    Distfit {
        file: PathBuf,
        #[arg(long, default_value = "0")]
        threshold: Rational,
        /// CSV destination; the fit goes to `<out>.fit.json` when set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Four-point and thin-triangle hyperbolicity constants.
    Delta {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relation and ρ availability for every pair of domains.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Coarse hull of two points.
    Hull {
        file: PathBuf,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long, default_value = "0")]
        slack: Rational,
        /// Also write the total space as DOT with the hull highlighted.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Write a document in another format.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// First domain of the scatter plot.
        #[arg(long)]
        u: Option<String>,
        /// Second domain of the scatter plot.
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_structure(path: &Path, limits: &Limits) -> anyhow::Result<HhsStructure> {
    Ok(load_document(path, limits)?.into_structure(limits)?)
}

fn relation_name(r: Relation, s: &HhsStructure) -> String {
    match r {
        Relation::Equal => "equal".into(),
        Relation::Nested { child, parent } => format!("nested({} in {})", s.name(child), s.name(parent)),
        Relation::Orthogonal => "orthogonal".into(),
        Relation::Transverse => "transverse".into(),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let limits = cli.caps.limits()?;
    match cli.command {
        Command::Build {
            example,
            n,
            d,
            config,
            bundled: bundled_name,
            out,
        } => {
            let value = if let Some(path) = config {
                let cfg: ExampleConfig = serde_json::from_str(
                    &fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?,
                )
                .map_err(Error::from)?;
                structure_to_json(&cfg.build(&limits)?)
            } else if let Some(name) = bundled_name {
                let text = bundled::get(&name).with_context(|| {
                    let names: Vec<_> = bundled::ALL.iter().map(|(n, _)| *n).collect();
                    format!("no bundled config `{name}` (available: {})", names.join(", "))
                })?;
                let cfg: ExampleConfig = serde_json::from_str(text).map_err(Error::from)?;
                structure_to_json(&cfg.build(&limits)?)
            } else {
                match example.expect("clap requires one source") {
                    ExampleKind::TreeOfFlats => {
                        let cfg = TreeOfFlatsConfig::new(n.unwrap_or(1), d.unwrap_or(1));
                        structure_to_json(&tree_of_flats(&cfg, &limits)?.structure)
                    }
                    ExampleKind::FlatGrid => space_to_json(&flat_grid(n.unwrap_or(2), &limits)?),
                    ExampleKind::IntervalComplex => {
                        let cfg: ExampleConfig = serde_json::from_str(bundled::TOY2).map_err(Error::from)?;
                        structure_to_json(&cfg.build(&limits)?)
                    }
                }
            };
            emit(out.as_deref(), &to_stable_string(value))?;
        }
        Command::Check { file, out } => {
            let s = load_structure(&file, &limits)?;
            let violations = s.validate_relation_axioms();
            let listed: Vec<Value> = violations
                .iter()
                .map(|v| json!({"family": format!("{:?}", v.family()), "domains": v.domains(), "message": v.to_string()}))
                .collect();
            let report = if violations.is_empty() {
                let metric = full_report(
                    &s,
                    &ReportConfig {
                        limits,
                        ..ReportConfig::default()
                    },
                )?;
                json!({"valid": true, "relation_violations": listed, "metric": metric.to_json(&s)})
            } else {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                json!({"valid": false, "relation_violations": listed, "metric": null})
            };
            emit(out.as_deref(), &to_stable_string(report))?;
            if !violations.is_empty() {
                return Ok(ExitCode::from(EXIT_VALIDATION));
            }
        }
        Command::Distfit { file, threshold, out } => {
            let s = load_structure(&file, &limits)?;
            let rows = df_rows(&s, &PairSet::All, threshold, &limits)?;
            let mut csv = csv::Writer::from_writer(Vec::new());
            csv.write_record(DfRow::HEADER)?;
            for row in &rows {
                csv.write_record(row.record())?;
            }
            let csv = String::from_utf8(csv.into_inner()?)?;
            let fit = match fit_rows(&rows, threshold) {
                Ok(fit) => fit.to_json(),
                Err(e @ Error::DegeneratePairs) => json!({
                    "K": null,
                    "C": null,
                    "threshold_s": length_exact(threshold),
                    "flags": ["degenerate"],
                    "error": e.to_string(),
                }),
                Err(e) => return Err(e.into()),
            };
            match out {
                Some(path) => {
                    emit(Some(&path), &csv)?;
                    let mut fit_path = path.into_os_string();
                    fit_path.push(".fit.json");
                    emit(Some(Path::new(&fit_path)), &to_stable_string(fit))?;
                }
                None => emit(None, &format!("{csv}\n{}", to_stable_string(fit)))?,
            }
        }
        Command::Delta { file, out } => {
            let space = load_document(&file, &limits)?.into_space(&limits)?;
            let report = delta_report(&space, &limits)?;
            emit(out.as_deref(), &to_stable_string(report.to_json()))?;
        }
        Command::Classify { file, json: as_json } => {
            let s = load_structure(&file, &limits)?;
            let rows = s.classify_pairs();
            if as_json {
                let table: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "a": s.name(r.a),
                            "b": s.name(r.b),
                            "relation": relation_name(r.relation, &s),
                            "rho_ab": r.rho_ab,
                            "rho_ba": r.rho_ba,
                        })
                    })
                    .collect();
                emit(None, &to_stable_string(Value::Array(table)))?;
            } else {
                let mut text = String::from("a\tb\trelation\trho_ab\trho_ba\n");
                let show = |r: Option<usize>| r.map_or("-".to_string(), |v| v.to_string());
                for r in &rows {
                    text.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        s.name(r.a),
                        s.name(r.b),
                        relation_name(r.relation, &s),
                        show(r.rho_ab),
                        show(r.rho_ba)
                    ));
                }
                emit(None, &text)?;
            }
        }
        Command::Hull { file, x, y, slack, dot } => {
            let s = load_structure(&file, &limits)?;
            let hull = coarse_hull(&s, x, y, slack)?;
            if let Some(path) = dot {
                emit(Some(&path), &space_to_dot(s.total_space(), &hull))?;
            }
            let value = json!({"x": x, "y": y, "slack": length_exact(slack), "vertices": hull});
            emit(None, &to_stable_string(value))?;
        }
        Command::Export {
            file,
            format,
            u,
            v,
            out,
        } => {
            let doc = load_document(&file, &limits)?;
            let text = match (format, doc) {
                (Format::Json, Document::Space(space)) => to_stable_string(space_to_json(&space)),
                (Format::Json, doc) => to_stable_string(structure_to_json(&doc.into_structure(&limits)?)),
                (Format::Dot, Document::Space(space)) => space_to_dot(&space, &[]),
                (Format::Dot, doc) => structure_to_dot(&doc.into_structure(&limits)?, &[]),
                (Format::Csv, doc) => coordinates_csv(&doc.into_structure(&limits)?)?,
                (Format::SvgPlot, doc) => {
                    let s = doc.into_structure(&limits)?;
                    let (Some(u), Some(v)) = (u, v) else {
                        return Err(Error::InvalidArgument("svg-plot needs --u and --v".into()).into());
                    };
                    coordinate_scatter_svg(&s, s.id(&u)?, s.id(&v)?)
                }
            };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// One row per total-space vertex, one column per domain.
fn coordinates_csv(s: &HhsStructure) -> anyhow::Result<String> {
    let mut csv = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["vertex".to_string()];
    header.extend(s.domain_ids().map(|d| s.name(d).to_string()));
    csv.write_record(&header)?;
    for x in 0..s.total_space().len() {
        let mut row = vec![x.to_string()];
        row.extend(s.domain_ids().map(|d| s.coordinate(d, x).to_string()));
        csv.write_record(&row)?;
    }
    Ok(String::from_utf8(csv.into_inner()?)?)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::AxiomViolation(_) | Error::RelationConflict(_) | Error::MissingRho { .. } | Error::ValidationFirst(_)) => {
            EXIT_VALIDATION
        }
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("hhs: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

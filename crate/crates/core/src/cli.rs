//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage and validation errors, 3 when a
//! computation fails. Canonical output is JSON with sorted keys and every
//! number written as an exact `"p/q"` string.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::builder::RecipeFile;
use crate::catalog::{self, hilbert, Config};
use crate::error::{Error, Result};
use crate::kstab::{self, delta_report_for_path, DeltaReport};
use crate::lattice::SurfaceModel;
use crate::rational::{self, Rational};
use crate::zariski::{self, ZariskiPath};

/// Environment variable that disables ANSI colour.
pub const NO_COLOR_ENV: &str = "KDELTA_NO_COLOR";

#[derive(Debug, Parser)]
#[command(
    name = "kdelta",
    version,
    about = "Exact K-stability invariants of del Pezzo surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Recipe file (JSON).
    pub recipe: Option<PathBuf>,
    /// Named catalog configuration, e.g. S326 or Snm_n2(4,2).
    #[arg(long, conflicts_with = "recipe")]
    pub catalog: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a model and print its intersection data.
    Build {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
    },
    /// Flag lower bound for delta at the singular point.
    Delta {
        #[command(flatten)]
        source: Source,
        /// Flag curve label.
        #[arg(long)]
        flag: String,
        #[command(flatten)]
        common: Common,
    },
    /// Chamber decomposition of -K - tE along a flag.
    Zariski {
        #[command(flatten)]
        source: Source,
        /// Flag curve label.
        #[arg(long)]
        flag: String,
        #[command(flatten)]
        common: Common,
    },
    /// Normalized volume screen (-K)^2 <= 9/|G|.
    Liu {
        /// Anticanonical volume as p/q.
        #[arg(long, requires = "group_order", conflicts_with = "triple")]
        volume: Option<String>,
        /// Order of the local group.
        #[arg(long)]
        group_order: Option<u64>,
        /// Family triple n,m,k; uses the volume formula.
        #[arg(long, value_delimiter = ',')]
        triple: Option<Vec<u64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Regenerate the classification table.
    Table1 {
        /// Worker threads for row computations.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare truncated Hilbert series.
    Hilbert {
        /// Variable weights, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "two_negative")]
        weights: Option<Vec<u64>>,
        /// Equation degrees, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "")]
        degrees: Vec<String>,
        /// Check the two-term expression for the pair n,m.
        #[arg(long, value_delimiter = ',')]
        two_negative: Option<Vec<u64>>,
        /// Truncation order.
        #[arg(long, default_value_t = 50)]
        order: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        2
    } else {
        3
    }
}

fn execute(command: &Command) -> Result<()> {
    let (text, common) = render(command)?;
    emit(&text, common.out.as_ref())
}

/// Renders a command's output without writing it.
pub fn render(command: &Command) -> Result<(String, &Common)> {
    let color = use_color();
    match command {
        Command::Build { source, common } => {
            let models = load(source)?;
            let text = match common.format.unwrap_or(Format::Text) {
                Format::Text => models
                    .iter()
                    .map(|(label, m)| format!("[{label}]\n{m}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Json => to_json(&Value::Array(
                    models.iter().map(|(l, m)| model_json(l, m)).collect(),
                )),
                Format::Tsv => models
                    .iter()
                    .map(|(l, m)| model_tsv(l, m))
                    .collect::<Vec<_>>()
                    .join(""),
            };
            Ok((text, common))
        }
        Command::Delta {
            source,
            flag,
            common,
        } => {
            let report = delta_for(source, flag)?;
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report.to_json()),
                Format::Tsv => report_tsv(&report),
                Format::Text => report_text(&report, color),
            };
            Ok((text, common))
        }
        Command::Zariski {
            source,
            flag,
            common,
        } => {
            let path = path_for(source, flag)?;
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&path_json(&path)?),
                Format::Tsv | Format::Text => path_tsv(&path)?,
            };
            Ok((text, common))
        }
        Command::Liu {
            volume,
            group_order,
            triple,
            common,
        } => {
            let (vol, order) = match (volume, group_order, triple) {
                (Some(v), Some(g), _) => (rational::parse(v)?, *g),
                (_, _, Some(t)) => {
                    if t.len() != 3 {
                        return Err(usage("--triple takes n,m,k"));
                    }
                    let (n, m, k) = (t[0], t[1], t[2]);
                    if n < 2 || m < 2 {
                        return Err(Error::OutOfDomain(format!(
                            "triple ({n},{m},{k}) needs n, m >= 2"
                        )));
                    }
                    (
                        catalog::volume_formula(n, m, k),
                        catalog::classify::group_order(n, m),
                    )
                }
                _ => return Err(usage("liu needs --volume with --group-order, or --triple")),
            };
            if order == 0 {
                return Err(usage("group order must be positive"));
            }
            let verdict = kstab::liu_test(&vol, order);
            let bound = Rational::new(9.into(), order.into());
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({
                    "volume": rational::format(&vol),
                    "group_order": order,
                    "bound": rational::format(&bound),
                    "verdict": verdict.to_string(),
                })),
                Format::Tsv => format!(
                    "volume\tgroup_order\tbound\tverdict\n{}\t{}\t{}\t{}\n",
                    rational::format(&vol),
                    order,
                    rational::format(&bound),
                    verdict
                ),
                Format::Text => format!(
                    "(-K)^2 = {} vs 9/|G| = {}: {}\n",
                    rational::format(&vol),
                    rational::format(&bound),
                    verdict
                ),
            };
            Ok((text, common))
        }
        Command::Table1 { jobs, common } => {
            let groups = match jobs {
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads((*j).max(1))
                    .build()
                    .map_err(|e| Error::Io(e.to_string()))?
                    .install(catalog::table1)?,
                None => catalog::table1()?,
            };
            let text = match common.format.unwrap_or(Format::Tsv) {
                Format::Tsv | Format::Text => catalog::table1_tsv(&groups),
                Format::Json => {
                    to_json(&serde_json::to_value(&groups).expect("table serialization"))
                }
            };
            Ok((text, common))
        }
        Command::Hilbert {
            weights,
            degrees,
            two_negative,
            order,
            common,
        } => {
            let check = match (weights, two_negative) {
                (_, Some(nm)) => {
                    if nm.len() != 2 {
                        return Err(usage("--two-negative takes n,m"));
                    }
                    if nm[0] < 2 || nm[1] < 2 {
                        return Err(Error::OutOfDomain(
                            "two-negative check needs n, m >= 2".into(),
                        ));
                    }
                    hilbert::two_negative_check(nm[0], nm[1], *order)
                }
                (Some(w), None) => {
                    let degrees = degrees
                        .iter()
                        .filter(|d| !d.trim().is_empty())
                        .map(|d| {
                            d.trim()
                                .parse::<u64>()
                                .map_err(|_| Error::RationalParse(d.clone()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if w.is_empty() || w.contains(&0) || degrees.contains(&0) {
                        return Err(Error::OutOfDomain(
                            "weights and degrees must be positive".into(),
                        ));
                    }
                    hilbert::hilbert_series_check(w, &degrees, *order)
                }
                (None, None) => return Err(usage("hilbert needs --weights or --two-negative")),
            };
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => {
                    to_json(&serde_json::to_value(&check).expect("check serialization"))
                }
                Format::Tsv | Format::Text => {
                    let mut s = String::from("degree\tclosed_form\tother\n");
                    for (i, (a, b)) in check.closed_form.iter().zip(&check.other).enumerate() {
                        s.push_str(&format!("{i}\t{a}\t{b}\n"));
                    }
                    s.push_str(&format!("equal\t{}\n", check.equal));
                    s
                }
            };
            Ok((text, common))
        }
    }
}

fn usage(message: &str) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

fn use_color() -> bool {
    std::env::var_os(NO_COLOR_ENV).is_none() && io::stdout().is_terminal()
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// Reads a recipe file, mapping JSON errors to line and column.
pub fn read_recipe(path: &PathBuf) -> Result<RecipeFile> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    RecipeFile::parse(&text)
}

fn load(source: &Source) -> Result<Vec<(String, SurfaceModel)>> {
    match (&source.recipe, &source.catalog) {
        (Some(path), _) => {
            let file = read_recipe(path)?;
            Ok(vec![(file.name.clone(), file.build()?)])
        }
        (None, Some(name)) => Ok(catalog::build_config_named(name)?.models),
        (None, None) => Err(usage("give a recipe path or --catalog")),
    }
}

fn catalog_flag<'a>(config: &'a Config, flag: &str) -> Result<&'a SurfaceModel> {
    Ok(config.flag(flag)?.0)
}

fn path_for(source: &Source, flag: &str) -> Result<ZariskiPath> {
    match &source.catalog {
        Some(name) => {
            let config = catalog::build_config_named(name)?;
            zariski::zariski_path(catalog_flag(&config, flag)?, flag)
        }
        None => {
            let models = load(source)?;
            let model = &models[0].1;
            model
                .curve(flag)
                .map_err(|_| Error::UnknownFlag(flag.to_string()))?;
            zariski::zariski_path(model, flag)
        }
    }
}

fn delta_for(source: &Source, flag: &str) -> Result<DeltaReport> {
    let path = path_for(source, flag)?;
    let points: Vec<_> = path
        .model
        .flag_points()
        .iter()
        .filter(|p| p.flag_curve == flag)
        .cloned()
        .collect();
    delta_report_for_path(&path, &points)
}

fn fmt_map(m: &std::collections::BTreeMap<String, Rational>) -> Value {
    Value::Object(
        m.iter()
            .map(|(k, v)| (k.clone(), Value::String(rational::format(v))))
            .collect(),
    )
}

/// JSON dump of a model.
pub fn model_json(label: &str, m: &SurfaceModel) -> Value {
    let matrix: Vec<Vec<String>> = m
        .form()
        .rows()
        .iter()
        .map(|r| r.iter().map(rational::format).collect())
        .collect();
    let curves: serde_json::Map<String, Value> = m
        .curves()
        .iter()
        .map(|c| (c.label.clone(), fmt_map(&m.express(&c.class))))
        .collect();
    let degree = m
        .degree()
        .map(|d| Value::String(rational::format(&d)))
        .unwrap_or(Value::Null);
    json!({
        "model": label,
        "name": m.name(),
        "basis": m.basis(),
        "intersection_matrix": matrix,
        "minus_K": fmt_map(&m.express(&m.anticanonical())),
        "degree": degree,
        "contracted": m.contracted(),
        "curves": curves,
        "singularities": serde_json::to_value(m.singularities()).expect("singularity serialization"),
        "flag_points": serde_json::to_value(m.flag_points()).expect("flag point serialization"),
    })
}

fn model_tsv(label: &str, m: &SurfaceModel) -> String {
    let mut s = format!("# {label}\n\t{}\n", m.basis().join("\t"));
    for (b, row) in m.basis().iter().zip(m.form().rows()) {
        let cells: Vec<String> = row.iter().map(rational::format).collect();
        s.push_str(&format!("{b}\t{}\n", cells.join("\t")));
    }
    s
}

fn report_tsv(r: &DeltaReport) -> String {
    let mut s = String::from("flag\tA\tS\ttau\tA/S\tdelta_lower_bound\tbound_mode\tverdict\n");
    s.push_str(&format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        r.flag,
        rational::format(&r.a),
        rational::format(&r.s),
        rational::format(&r.tau),
        rational::format(&r.ratio),
        rational::format(&r.delta_lower_bound),
        json_word(&r.bound_mode),
        r.verdict
    ));
    s.push_str("point\tS_W\tmode\tA_q\tquotient\n");
    for p in &r.points {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            p.point,
            rational::format(&p.s_w),
            json_word(&p.mode),
            rational::format(&p.a_q),
            rational::format(&p.quotient)
        ));
    }
    s
}

fn json_word<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

fn report_text(r: &DeltaReport, color: bool) -> String {
    let verdict = r.verdict.to_string();
    let verdict = if color {
        let code = match r.verdict {
            kstab::Verdict::DeltaGt1 => "32",
            kstab::Verdict::DeltaEq1 => "33",
            kstab::Verdict::Inconclusive => "31",
        };
        format!("\x1b[{code}m{verdict}\x1b[0m")
    } else {
        verdict
    };
    let mut s = format!(
        "flag {}: A = {}, S = {}, tau = {}, A/S = {}\n",
        r.flag,
        rational::format(&r.a),
        rational::format(&r.s),
        rational::format(&r.tau),
        rational::format(&r.ratio)
    );
    for p in &r.points {
        let rel = if p.mode == kstab::PointMode::UpperBound {
            "<="
        } else {
            "="
        };
        s.push_str(&format!(
            "  {}: S_W {} {}, A_q/S_W {} {}\n",
            p.point,
            rel,
            rational::format(&p.s_w),
            if rel == "<=" { ">=" } else { "=" },
            rational::format(&p.quotient)
        ));
    }
    s.push_str(&format!(
        "delta >= {} ({}), {}\n",
        rational::format(&r.delta_lower_bound),
        json_word(&r.bound_mode),
        verdict
    ));
    s
}

/// JSON dump of a chamber decomposition.
pub fn path_json(path: &ZariskiPath) -> Result<Value> {
    let vol = zariski::volume_function(path)?;
    let pe = zariski::flag_degree_profile(path)?;
    let segments: Vec<Value> = path
        .segments
        .iter()
        .zip(&vol.segments)
        .zip(&pe)
        .map(|((seg, v), pe)| {
            let coeffs: serde_json::Map<String, Value> = seg
                .coefficients
                .iter()
                .map(|(c, a)| {
                    (
                        c.clone(),
                        json!([rational::format(&a.c0), rational::format(&a.c1)]),
                    )
                })
                .collect();
            json!({
                "interval": [rational::format(&seg.t_lo), rational::format(&seg.t_hi)],
                "negative_support": seg.negative_support,
                "negative_coefficients": coeffs,
                "volume": v.iter().map(rational::format).collect::<Vec<_>>(),
                "P_dot_flag": [rational::format(&pe.c0), rational::format(&pe.c1)],
            })
        })
        .collect();
    Ok(json!({
        "flag": path.flag,
        "start": fmt_map(&path.model.express(&path.start)),
        "breakpoints": path.breakpoints().iter().map(rational::format).collect::<Vec<_>>(),
        "tau": rational::format(&path.tau),
        "S": rational::format(&kstab::s_invariant(path)?),
        "segments": segments,
    }))
}

fn path_tsv(path: &ZariskiPath) -> Result<String> {
    let vol = zariski::volume_function(path)?;
    let mut s = String::from("t_lo\tt_hi\tnegative_support\tvol_c0\tvol_c1\tvol_c2\n");
    for (seg, v) in path.segments.iter().zip(&vol.segments) {
        let support: Vec<&str> = seg.negative_support.iter().map(String::as_str).collect();
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            rational::format(&seg.t_lo),
            rational::format(&seg.t_hi),
            support.join(","),
            rational::format(&v[0]),
            rational::format(&v[1]),
            rational::format(&v[2])
        ));
    }
    Ok(s)
}

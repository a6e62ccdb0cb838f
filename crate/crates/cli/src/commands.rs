//! Command surface of the `depthkit` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use depthkit::depth::{default_alpha_grid, outlyingness};
use depthkit::functional::{graph_depth, grid_depth};
use depthkit::lift::{depth_lift, depth_order_leq, depth_semimetric};
use depthkit::postulates::{check_depth_kind, check_postulates};
use depthkit::registry::Invariance;
use depthkit::regions::{region_contours, GridSpec};
use depthkit::{DepthKind, DepthOptions, DirectionBudget};

use crate::curves::load_curves;
use crate::dataset::{load_dataset, Dataset, LabelColumn, LoadOptions};
use crate::document::{export_region_json, export_region_svg, ContourDocument};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "depthkit", version, about = "Statistical data depths, central regions and contour plots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Depth of a point, or of every data point, with respect to a data cloud.
    Depth(DepthArgs),
    /// Central regions at several levels, drawn as an SVG contour plot.
    Region(RegionArgs),
    /// Whether the first cloud is less dispersed than the second (lift containment).
    Order(PairArgs),
    /// Distance between the depth lifts of two clouds.
    Metric(PairArgs),
    /// Graph or grid depth of every curve of a sample.
    Fdepth(FdepthArgs),
    /// Randomized check of the depth postulates.
    CheckPostulates(CheckArgs),
    /// Registered depths and their properties.
    List,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Seed for the randomized depths.
    #[arg(long, env = "DEPTHKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of random directions (projection, random Tukey, grid depth).
    #[arg(long, default_value_t = 1000)]
    pub directions: usize,
}

impl EvalArgs {
    fn options(&self) -> DepthOptions {
        DepthOptions {
            seed: self.seed,
            directions: self.directions,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Field delimiter.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// The first row is data, not a header.
    #[arg(long)]
    pub no_header: bool,
    /// Label column: `auto`, `none` or a one-based column number.
    #[arg(long, default_value = "auto")]
    pub label_column: String,
    /// Skip malformed rows (reported on stderr) instead of failing.
    #[arg(long)]
    pub skip_bad: bool,
}

impl InputArgs {
    fn options(&self) -> CliResult<LoadOptions> {
        if !self.delimiter.is_ascii() {
            return Err(CliError::Usage("delimiter must be an ASCII character".into()));
        }
        let label_column = match self.label_column.as_str() {
            "auto" => LabelColumn::Auto,
            "none" => LabelColumn::None,
            s => match s.parse::<usize>() {
                Ok(k) if k >= 1 => LabelColumn::Index(k - 1),
                _ => return Err(CliError::Usage(format!("invalid label column '{s}'"))),
            },
        };
        Ok(LoadOptions {
            delimiter: self.delimiter as u8,
            has_header: !self.no_header,
            label_column,
            skip_bad: self.skip_bad,
        })
    }

    fn load(&self, path: &Path) -> CliResult<Dataset> {
        let d = load_dataset(path, &self.options()?)?;
        for s in &d.report.skipped {
            eprintln!("warning: {}: skipped row {}: {}", path.display(), s.row, s.reason);
        }
        Ok(d)
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("query").required(true).args(["point", "all"])))]
pub struct DepthArgs {
    /// Depth name, e.g. mahalanobis, projection, zonoid, halfspace.
    pub name: String,
    /// CSV file, or `@eu27` for the bundled fixture.
    #[arg(long)]
    pub data: PathBuf,
    /// Query point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Depth of every data point, in input order.
    #[arg(long)]
    pub all: bool,
    /// Print outlyingness instead of depth.
    #[arg(long)]
    pub outlyingness: bool,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    pub name: String,
    /// Levels: comma separated numbers, fractions `a/b` or ranges `from:step:to`.
    #[arg(long)]
    pub alpha_list: String,
    #[arg(long)]
    pub data: PathBuf,
    /// Output SVG file.
    #[arg(long)]
    pub svg: PathBuf,
    /// Also write the regions as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Plot title; defaults to the depth name.
    #[arg(long)]
    pub title: Option<String>,
    /// Grid nodes per axis for depths without exact regions.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Omit point labels.
    #[arg(long)]
    pub no_labels: bool,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    pub name: String,
    #[arg(long)]
    pub data1: PathBuf,
    #[arg(long)]
    pub data2: PathBuf,
    /// Level grid of the lifts; defaults to 0.01, 0.02, .., 1.
    #[arg(long)]
    pub alpha_list: Option<String>,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionalKind {
    Graph,
    Grid,
}

#[derive(Debug, Args)]
pub struct FdepthArgs {
    pub kind: FunctionalKind,
    /// Wide CSV: argument column `t`, then the curves.
    #[arg(long)]
    pub curves: PathBuf,
    /// Multivariate base depth.
    #[arg(long)]
    pub base: String,
    /// Number of adjacent columns per curve.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Zero-based grid indices to use; defaults to all.
    #[arg(long)]
    pub t: Option<String>,
    /// Curves to evaluate (same grid); defaults to the sample itself.
    #[arg(long)]
    pub query: Option<PathBuf>,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Affine,
    Isometric,
    Scale,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub name: String,
    #[arg(long)]
    pub data: PathBuf,
    /// Number of random transforms.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Invariance to test instead of the declared one.
    #[arg(long)]
    pub variant: Option<VariantArg>,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(flatten)]
    pub input: InputArgs,
}

/// Formats `v` with 9 significant digits in fixed notation.
pub fn fmt_sig(v: f64) -> String {
    if !v.is_finite() {
        return if v > 0.0 { "inf".into() } else { v.to_string() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn parse_number(s: &str) -> CliResult<f64> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (
                a.trim().parse().map_err(|_| bad_number(s))?,
                b.trim().parse().map_err(|_| bad_number(s))?,
            );
            a / b
        }
        None => s.parse().map_err(|_| bad_number(s))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad_number(s))
    }
}

fn bad_number(s: &str) -> CliError {
    CliError::Usage(format!("'{s}' is not a number"))
}

/// Rounds off accumulated error, so 0.1 + 2 * 0.1 reads as 0.3; values that are not
/// within a few ulps of a short decimal (such as 3/27) are kept as computed.
fn snap(v: f64) -> f64 {
    let short: f64 = format!("{v:.12}").parse().expect("formatted float parses");
    if (short - v).abs() <= 4.0 * f64::EPSILON * v.abs() {
        short
    } else {
        v
    }
}

/// Parses a level list such as `0.1,0.2`, `2/27,3/27` or `0.1:0.1:0.9`.
pub fn parse_alpha_list(text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [one] => out.push(parse_number(one)?),
            [from, step, to] => {
                let (from, step, to) = (parse_number(from)?, parse_number(step)?, parse_number(to)?);
                if step <= 0.0 {
                    return Err(CliError::Usage(format!("range '{item}' needs a positive step")));
                }
                let count = ((to - from) / step + 1e-9).floor();
                if !(0.0..=1e5).contains(&count) {
                    return Err(CliError::Usage(format!("range '{item}' is empty or too long")));
                }
                out.extend((0..=count as usize).map(|k| snap(from + k as f64 * step)));
            }
            _ => return Err(CliError::Usage(format!("cannot read level '{item}'"))),
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty level list".into()));
    }
    Ok(out)
}

fn parse_point(text: &str) -> CliResult<Vec<f64>> {
    text.split(',').map(parse_number).collect()
}

fn parse_indices(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("'{s}' is not a grid index")))
        })
        .collect()
}

fn io_out(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

/// Runs `cli`, writing results to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Depth(a) => depth(a, out),
        Command::Region(a) => region(a, out),
        Command::Order(a) => {
            let (p, q) = lifts(a)?;
            writeln!(out, "{}", depth_order_leq(&p, &q)?).map_err(io_out)
        }
        Command::Metric(a) => {
            let (p, q) = lifts(a)?;
            writeln!(out, "{}", fmt_sig(depth_semimetric(&p, &q)?)).map_err(io_out)
        }
        Command::Fdepth(a) => fdepth(a, out),
        Command::CheckPostulates(a) => check(a, out),
        Command::List => list(out),
    }
}

fn depth(a: &DepthArgs, out: &mut dyn Write) -> CliResult<()> {
    let kind: DepthKind = a.name.parse()?;
    let data = a.input.load(&a.data)?;
    let f = kind.bind(&data.cloud, &a.eval.options())?;
    let show = |v: depthkit::DepthValue| {
        if a.outlyingness {
            fmt_sig(outlyingness(v))
        } else {
            fmt_sig(v.get())
        }
    };
    let column = if a.outlyingness { "outlyingness" } else { "depth" };
    if let Some(p) = &a.point {
        let z = parse_point(p)?;
        writeln!(out, "{}", show(f.depth(&z)?)).map_err(io_out)?;
        return Ok(());
    }
    writeln!(out, "label,{column}").map_err(io_out)?;
    for (i, z) in data.cloud.points().enumerate() {
        let label = data.cloud.label(i).map_or_else(|| (i + 1).to_string(), csv_field);
        writeln!(out, "{label},{}", show(f.depth(z)?)).map_err(io_out)?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn region(a: &RegionArgs, out: &mut dyn Write) -> CliResult<()> {
    let kind: DepthKind = a.name.parse()?;
    let alphas = parse_alpha_list(&a.alpha_list)?;
    let data = a.input.load(&a.data)?;
    if data.dim() != 2 {
        return Err(CliError::Usage(format!(
            "region plots need bivariate data, got {} columns",
            data.dim()
        )));
    }
    if a.grid < 2 {
        return Err(CliError::Usage("grid needs at least 2 nodes per axis".into()));
    }
    let spec = GridSpec::around(&data.cloud, a.grid, 0.1);
    let regions = region_contours(&data.cloud, kind, &alphas, &a.eval.options(), Some(spec))?;
    let cloud = if a.no_labels {
        depthkit::DataCloud::from_flat(2, data.cloud.coords().to_vec())?
    } else {
        data.cloud.clone()
    };
    let title = a.title.clone().unwrap_or_else(|| format!("{kind} regions"));
    let axes = [data.columns[0].clone(), data.columns[1].clone()];
    let doc = ContourDocument::new(title, kind.name(), axes, &cloud, &regions)?;
    export_region_svg(&doc, &a.svg)?;
    if let Some(json) = &a.json {
        export_region_json(&doc, json)?;
    }
    writeln!(out, "alpha,rings,vertices").map_err(io_out)?;
    for l in &doc.layers {
        let vertices: usize = l.rings.iter().map(|r| r.len().saturating_sub(1)).sum();
        writeln!(out, "{},{},{vertices}", l.alpha, l.rings.len()).map_err(io_out)?;
    }
    Ok(())
}

fn lifts(a: &PairArgs) -> CliResult<(depthkit::lift::DepthLift, depthkit::lift::DepthLift)> {
    let kind: DepthKind = a.name.parse()?;
    let alphas = match &a.alpha_list {
        Some(l) => parse_alpha_list(l)?,
        None => default_alpha_grid(),
    };
    let opts = a.eval.options();
    let p = depth_lift(&a.input.load(&a.data1)?.cloud, kind, &alphas, &opts)?;
    let q = depth_lift(&a.input.load(&a.data2)?.cloud, kind, &alphas, &opts)?;
    Ok((p, q))
}

fn fdepth(a: &FdepthArgs, out: &mut dyn Write) -> CliResult<()> {
    let base: DepthKind = a.base.parse()?;
    let set = load_curves(&a.curves, a.dim)?;
    let queries = match &a.query {
        Some(q) => load_curves(q, a.dim)?,
        None => set.clone(),
    };
    if queries.sample.grid() != set.sample.grid() {
        return Err(CliError::Usage("query curves use a different grid".into()));
    }
    let t = match &a.t {
        Some(t) => parse_indices(t)?,
        None => (0..set.sample.grid().len()).collect(),
    };
    let opts = a.eval.options();
    writeln!(out, "curve,depth").map_err(io_out)?;
    for (name, z) in queries.names.iter().zip(queries.sample.curves()) {
        let d = match a.kind {
            FunctionalKind::Graph => graph_depth(z, &set.sample, base, &t, &opts)?,
            FunctionalKind::Grid => grid_depth(
                z,
                &set.sample,
                &t,
                base,
                DirectionBudget::new(a.eval.directions, a.eval.seed),
                &opts,
            )?,
        };
        writeln!(out, "{},{}", csv_field(name), fmt_sig(d.get())).map_err(io_out)?;
    }
    Ok(())
}

fn check(a: &CheckArgs, out: &mut dyn Write) -> CliResult<()> {
    let kind: DepthKind = a.name.parse()?;
    let data = a.input.load(&a.data)?;
    let opts = a.eval.options();
    let report = match a.variant {
        None => check_depth_kind(kind, &data.cloud, &opts, a.trials, a.eval.seed)?,
        Some(v) => {
            let variant = match v {
                VariantArg::Affine => Invariance::Affine,
                VariantArg::Isometric => Invariance::Isometric,
                VariantArg::Scale => Invariance::Scale,
            };
            check_postulates(&|c| kind.bind(c, &opts), &data.cloud, variant, a.trials, a.eval.seed)?
        }
    };
    let convex = kind.convex_regions();
    writeln!(out, "check,result,worst,tolerance").map_err(io_out)?;
    for (name, c) in report.checks() {
        let result = match (c.passed, name == "D4con" && !convex) {
            (_, true) => "n/a",
            (true, false) => "pass",
            (false, false) => "fail",
        };
        writeln!(out, "{name},{result},{:.3e},{:.0e}", c.worst, c.tolerance).map_err(io_out)?;
    }
    let overall = if report.passed(convex) { "pass" } else { "fail" };
    writeln!(out, "overall,{overall},,").map_err(io_out)
}

fn list(out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "name,invariance,proper,convex_regions,reaches_one").map_err(io_out)?;
    for k in DepthKind::ALL {
        let inv = match k.invariance() {
            Invariance::Affine => "affine",
            Invariance::Isometric => "isometric",
            Invariance::Scale => "scale",
        };
        writeln!(
            out,
            "{},{inv},{},{},{}",
            k.name(),
            k.satisfies_postulates(),
            k.convex_regions(),
            k.reaches_one()
        )
        .map_err(io_out)?;
    }
    Ok(())
}

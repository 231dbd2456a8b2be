//! Command-line surface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qualimeter_core::ck::CkOptions;
use qualimeter_core::complexity::{ClpmScale, MiInputs};
use qualimeter_core::detect::builtin_rules;
use qualimeter_core::java::Severity;
use qualimeter_core::lines::{self, aggregate};
use qualimeter_core::maintain::{kiviat_status, logiscope_metrics, LogiscopeMetrics, ThresholdProfile};
use qualimeter_core::model::ClassModel;
use qualimeter_core::treemap::{layout_hierarchy, LayoutParams, NestedCell, Region, TreemapNode};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::census::census;
use crate::compare;
use crate::config::{self, RunConfig, CONFIG_ENV};
use crate::error::{Error, Result};
use crate::evolution;
use crate::interchange;
use crate::number;
use crate::report::{self, csv_err, AnalysisOptions, Suite, SCHEMA_VERSION};
use crate::sources::{self, InputMode};
use crate::svg;

#[derive(Debug, Parser)]
#[command(name = "qualimeter", version, about = "Measure object-oriented code quality")]
pub struct Cli {
    /// Run configuration file (JSON); flags override its keys.
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct Output {
    /// Output formats (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub format: Vec<Format>,
    /// Directory for output files; standard output when absent.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct Input {
    /// Source directories, files, or interchange `.json` models.
    #[arg(required = true, value_name = "PATH")]
    pub paths: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub input_mode: Option<InputMode>,
}

#[derive(Debug, Args, Default)]
pub struct MetricFlags {
    /// Threshold profile (JSON).
    #[arg(long, value_name = "FILE")]
    pub thresholds: Option<PathBuf>,
    /// QMOOD weight overrides (JSON).
    #[arg(long, value_name = "FILE")]
    pub weights: Option<PathBuf>,
    /// CBO also counts incoming references.
    #[arg(long)]
    pub cbo_bidirectional: bool,
    /// NOC of an interface counts its implementors.
    #[arg(long)]
    pub noc_interfaces: bool,
    /// Count constructors as methods.
    #[arg(long)]
    pub nom_constructors: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse sources into an interchange model, or print a census.
    Extract {
        #[command(flatten)]
        input: Input,
        /// Print type, visibility, inheritance and line counts instead of the model.
        #[arg(long)]
        census: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Count blank, comment and code lines per file and language.
    Cloc {
        #[arg(required = true, value_name = "PATH")]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Compute metric suites.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Suites to run (comma-separated); all when absent.
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        /// Maintainability Index inputs `HV,CC,LOCPM,CLPM` replacing the derived ones.
        #[arg(long, value_name = "HV,CC,LOCPM,CLPM")]
        mi: Option<String>,
        /// CLPM given to --mi is a percentage.
        #[arg(long)]
        clpm_percent: bool,
        #[command(flatten)]
        metrics: MetricFlags,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate detection strategies.
    Detect {
        #[command(flatten)]
        input: Input,
        /// Rule file (JSON); built-in rules when absent.
        #[arg(long, value_name = "FILE")]
        rules: Vec<PathBuf>,
        #[command(flatten)]
        metrics: MetricFlags,
        #[command(flatten)]
        output: Output,
    },
    /// Draw Kiviat diagrams of the thirteen class metrics.
    Kiviat {
        /// Sources to take classes from.
        #[arg(value_name = "PATH")]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum)]
        input_mode: Option<InputMode>,
        /// Class to draw (repeatable); every class when absent.
        #[arg(long = "class", value_name = "NAME")]
        classes: Vec<String>,
        /// Draw a literal 13-value vector instead of classes.
        #[arg(long, value_delimiter = ',', num_args = 1, allow_negative_numbers = true, value_name = "V,...")]
        values: Option<Vec<f64>>,
        /// Diagram title for --values.
        #[arg(long, default_value = "metrics")]
        title: String,
        #[command(flatten)]
        metrics: MetricFlags,
        #[command(flatten)]
        output: Output,
    },
    /// Lay out a Voronoi treemap from a hierarchy file or source tree.
    Treemap {
        /// Hierarchy JSON, or source paths weighted by code lines.
        #[arg(required = true, value_name = "PATH")]
        paths: Vec<PathBuf>,
        #[arg(long, default_value_t = 256)]
        resolution: u32,
        #[arg(long, default_value_t = 100)]
        iterations: u32,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// System design instability across iteration snapshots.
    Stability {
        /// Snapshot files in iteration order.
        #[arg(value_name = "SNAPSHOT")]
        snapshots: Vec<PathBuf>,
        /// Use-case model for cohesion measures.
        #[arg(long, value_name = "FILE")]
        use_cases: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Spearman rank correlation of two series.
    Correlate {
        /// CSV with two numeric columns, or JSON `{"x": [...], "y": [...]}`.
        #[arg(value_name = "FILE")]
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the quality-level distributions of two systems.
    Compare {
        #[arg(value_name = "FIRST")]
        first: PathBuf,
        #[arg(value_name = "SECOND")]
        second: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

/// One artifact: file stem, format, body.
type Artifact = (String, Format, String);

struct Ctx<'a> {
    cfg: RunConfig,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn formats(&self, output: &Output, allowed: &[Format], default: &[Format]) -> Result<Vec<Format>> {
        let mut f = output.format.clone();
        if f.is_empty() {
            if let Some(s) = &self.cfg.format {
                for part in s.split(',') {
                    f.push(Format::from_str(part.trim(), true).map_err(|_| Error::Usage(format!("config format `{part}` is not json, csv or svg")))?);
                }
            }
        }
        if f.is_empty() {
            f = default.to_vec();
        }
        f.dedup();
        if let Some(bad) = f.iter().find(|x| !allowed.contains(x)) {
            let names: Vec<_> = allowed.iter().map(|a| a.ext()).collect();
            return Err(Error::Usage(format!("--format {} is not supported here (use {})", bad.ext(), names.join("|"))));
        }
        Ok(f)
    }

    fn out_dir(&self, output: &Output) -> Option<PathBuf> {
        output.out.clone().or_else(|| self.cfg.out.clone())
    }

    fn input_mode(&self, flag: Option<InputMode>) -> InputMode {
        flag.or(self.cfg.input_mode).unwrap_or_default()
    }

    fn load(&mut self, paths: &[PathBuf], mode: Option<InputMode>) -> Result<ClassModel> {
        let loaded = sources::load_model(paths, self.input_mode(mode))?;
        for d in &loaded.diagnostics {
            let sev = match d.severity {
                Severity::Warning => "warning",
                Severity::Error => "error",
            };
            let _ = writeln!(self.stderr, "qualimeter: {sev}: {}: {}", d.path, d.message);
        }
        Ok(loaded.model)
    }

    fn profile(&self, flags: &MetricFlags) -> Result<ThresholdProfile> {
        match flags.thresholds.as_ref().or(self.cfg.thresholds.as_ref()) {
            Some(p) => config::load_profile(p),
            None => Ok(ThresholdProfile::default()),
        }
    }

    fn analysis_options(&self, flags: &MetricFlags) -> Result<AnalysisOptions> {
        let weights = match flags.weights.as_ref().or(self.cfg.weights.as_ref()) {
            Some(p) => config::load_weights(p)?,
            None => Default::default(),
        };
        Ok(AnalysisOptions {
            ck: CkOptions {
                include_constructors: flags.nom_constructors || self.cfg.nom_constructors.unwrap_or(false),
                cbo_bidirectional: flags.cbo_bidirectional || self.cfg.cbo_bidirectional.unwrap_or(false),
                noc_interfaces: flags.noc_interfaces || self.cfg.noc_interfaces.unwrap_or(false),
                ..CkOptions::default()
            },
            profile: self.profile(flags)?,
            weights,
            ..AnalysisOptions::default()
        })
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn emit(artifacts: Vec<Artifact>, out: Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        None => {
            if artifacts.len() > 1 {
                return Err(Error::Usage(format!(
                    "{} outputs requested; pass --out DIR to write them as files",
                    artifacts.len()
                )));
            }
            for (_, _, body) in artifacts {
                stdout
                    .write_all(body.as_bytes())
                    .map_err(|e| Error::io(Path::new("<stdout>"), e))?;
            }
        }
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            for (stem, fmt, body) in artifacts {
                let path = dir.join(format!("{}.{}", file_stem(&stem), fmt.ext()));
                fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            }
        }
    }
    Ok(())
}

/// Class names and the like made safe for file names.
fn file_stem(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() || matches!(c, '.' | '-' | '_') { c } else { '_' })
        .collect()
}

fn parse_mi(text: &str, percent: bool) -> Result<MiInputs> {
    let v: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Usage(format!("--mi expects four numbers HV,CC,LOCPM,CLPM, got `{text}`")))?;
    let [hv, cc, loc, clpm] = v[..] else {
        return Err(Error::Usage(format!("--mi expects four numbers HV,CC,LOCPM,CLPM, got {}", v.len())));
    };
    let scale = if percent { ClpmScale::Percent } else { ClpmScale::Fraction };
    MiInputs::new(hv, cc, loc, clpm, scale).map_err(|e| Error::Usage(format!("--mi: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    name: String,
    weight: Option<f64>,
    #[serde(default)]
    children: Vec<NodeJson>,
}

fn to_node(n: NodeJson) -> TreemapNode {
    if n.children.is_empty() {
        TreemapNode::leaf(n.name, n.weight.unwrap_or(0.0))
    } else {
        let mut g = TreemapNode::group(n.name, n.children.into_iter().map(to_node).collect());
        if let Some(w) = n.weight {
            g.weight = w;
        }
        g
    }
}

/// Directory tree of files with code, weighted by code lines.
fn loc_hierarchy(paths: &[PathBuf]) -> Result<TreemapNode> {
    let counts = sources::count_lines(paths, &lines::default_configs())?;
    #[derive(Default)]
    struct Dir {
        dirs: std::collections::BTreeMap<String, Dir>,
        files: Vec<(String, f64)>,
    }
    let mut root = Dir::default();
    for f in counts.iter().filter(|f| f.counts.code > 0) {
        let parts: Vec<&str> = f.path.split('/').collect();
        let (file, dirs) = parts.split_last().expect("split yields one part");
        let mut d = &mut root;
        for p in dirs {
            d = d.dirs.entry(p.to_string()).or_default();
        }
        d.files.push((file.to_string(), f.counts.code as f64));
    }
    fn build(name: String, d: Dir) -> TreemapNode {
        let mut kids: Vec<TreemapNode> = d.dirs.into_iter().map(|(n, sub)| build(n, sub)).collect();
        kids.extend(d.files.into_iter().map(|(n, w)| TreemapNode::leaf(n, w)));
        // collapse single-child chains
        if kids.len() == 1 && !kids[0].children.is_empty() {
            let only = kids.pop().expect("one child");
            return TreemapNode::group(format!("{name}/{}", only.name), only.children);
        }
        TreemapNode::group(name, kids)
    }
    let tree = build(".".into(), root);
    if tree.children.is_empty() {
        return Err(Error::analysis("no files with code lines to lay out"));
    }
    Ok(tree)
}

fn cell_json(c: &NestedCell) -> Value {
    json!({
        "name": c.name,
        "path": c.path,
        "weight": number::real(Some(c.weight)),
        "samples": c.samples.len(),
        "iterations": c.iterations,
        "converged": c.converged,
        "children": c.children.iter().map(cell_json).collect::<Vec<_>>(),
    })
}

fn run_command(cli: Cli, ctx: &mut Ctx, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Extract { input, census: want_census, output } => {
            let formats = ctx.formats(&output, &[Format::Json], &[Format::Json])?;
            let model = ctx.load(&input.paths, input.input_mode)?;
            let body = if want_census {
                json_text(&census(&model).to_json())
            } else {
                interchange::to_string(&model)
            };
            let stem = if want_census { "census" } else { "model" };
            emit(formats.into_iter().map(|f| (stem.to_string(), f, body.clone())).collect(), ctx.out_dir(&output), stdout)
        }
        Command::Cloc { paths, output } => {
            let formats = ctx.formats(&output, &[Format::Json, Format::Csv], &[Format::Json])?;
            let files = sources::count_lines(&paths, &lines::default_configs())?;
            let langs = aggregate(&files);
            let mut arts = Vec::new();
            for f in formats {
                let body = match f {
                    Format::Json => {
                        let languages: serde_json::Map<String, Value> = langs
                            .iter()
                            .map(|(l, t)| {
                                (l.clone(), json!({"files": t.files, "blank": t.counts.blank, "comment": t.counts.comment, "code": t.counts.code}))
                            })
                            .collect();
                        let per_file: Vec<Value> = files
                            .iter()
                            .map(|f| json!({"path": f.path, "language": f.language, "blank": f.counts.blank, "comment": f.counts.comment, "code": f.counts.code}))
                            .collect();
                        json_text(&json!({"schemaVersion": SCHEMA_VERSION, "languages": languages, "files": per_file}))
                    }
                    _ => {
                        let mut w = csv::Writer::from_writer(Vec::new());
                        w.write_record(["language", "files", "blank", "comment", "code"]).map_err(csv_err)?;
                        for (l, t) in &langs {
                            w.write_record([
                                l.clone(),
                                t.files.to_string(),
                                t.counts.blank.to_string(),
                                t.counts.comment.to_string(),
                                t.counts.code.to_string(),
                            ])
                            .map_err(csv_err)?;
                        }
                        String::from_utf8(w.into_inner().map_err(|e| Error::analysis(e.to_string()))?)
                            .map_err(|e| Error::analysis(e.to_string()))?
                    }
                };
                arts.push(("cloc".to_string(), f, body));
            }
            emit(arts, ctx.out_dir(&output), stdout)
        }
        Command::Analyze { input, suite, mi, clpm_percent, metrics, output } => {
            let formats = ctx.formats(&output, &[Format::Json, Format::Csv], &[Format::Json])?;
            let mut opts = ctx.analysis_options(&metrics)?;
            if let Some(text) = &mi {
                opts.mi = Some(parse_mi(text, clpm_percent || ctx.cfg.clpm_percent.unwrap_or(false))?);
            } else if clpm_percent {
                return Err(Error::Usage("--clpm-percent only applies to a CLPM given with --mi".into()));
            }
            let suites = if suite.is_empty() { Suite::ALL.to_vec() } else { suite };
            let model = ctx.load(&input.paths, input.input_mode)?;
            let rep = report::analyze(&model, &suites, &opts)?;
            let mut arts = Vec::new();
            for f in formats {
                let body = match f {
                    Format::Json => json_text(&rep.to_json()),
                    _ => rep.to_csv()?,
                };
                arts.push(("analysis".to_string(), f, body));
            }
            emit(arts, ctx.out_dir(&output), stdout)
        }
        Command::Detect { input, rules, metrics, output } => {
            let formats = ctx.formats(&output, &[Format::Json, Format::Csv], &[Format::Json])?;
            let opts = ctx.analysis_options(&metrics)?;
            let mut files = rules;
            if files.is_empty() {
                files.extend(ctx.cfg.rules.clone());
            }
            let rule_set = if files.is_empty() {
                builtin_rules()
            } else {
                let mut all = Vec::new();
                for f in &files {
                    all.extend(config::load_rules(f).map_err(|e| Error::Usage(e.to_string()))?);
                }
                all
            };
            let model = ctx.load(&input.paths, input.input_mode)?;
            let rep = report::detect(&model, &rule_set, &opts.ck)?;
            let mut arts = Vec::new();
            for f in formats {
                let body = match f {
                    Format::Json => json_text(&rep.to_json()),
                    _ => rep.to_csv()?,
                };
                arts.push(("detect".to_string(), f, body));
            }
            emit(arts, ctx.out_dir(&output), stdout)
        }
        Command::Kiviat { paths, input_mode, classes, values, title, metrics, output } => {
            let formats = ctx.formats(&output, &[Format::Svg, Format::Json], &[Format::Svg])?;
            let opts = ctx.analysis_options(&metrics)?;
            let mut diagrams: Vec<(String, LogiscopeMetrics)> = Vec::new();
            match values {
                Some(v) => {
                    if !paths.is_empty() || !classes.is_empty() {
                        return Err(Error::Usage("--values cannot be combined with sources or --class".into()));
                    }
                    let arr: [f64; 13] = v
                        .clone()
                        .try_into()
                        .map_err(|_| Error::Usage(format!("--values expects 13 numbers, got {}", v.len())))?;
                    if arr.iter().any(|x| !x.is_finite()) {
                        return Err(Error::Usage("--values must be finite".into()));
                    }
                    diagrams.push((title, LogiscopeMetrics(arr)));
                }
                None => {
                    if paths.is_empty() {
                        return Err(Error::Usage("kiviat needs source paths or --values".into()));
                    }
                    let model = ctx.load(&paths, input_mode)?;
                    let names: Vec<String> = if classes.is_empty() {
                        model.types().iter().map(|t| t.qualified_name.clone()).collect()
                    } else {
                        classes
                    };
                    for n in names {
                        let m = logiscope_metrics(&model, &n, &opts.logiscope())
                            .map_err(|e| Error::Usage(format!("--class {n}: {e}")))?;
                        diagrams.push((n, m));
                    }
                }
            }
            let mut arts = Vec::new();
            for (name, m) in &diagrams {
                let status = kiviat_status(m, &opts.profile).map_err(Error::analysis)?;
                for f in &formats {
                    let body = match f {
                        Format::Svg => svg::kiviat(name, m, &status, &opts.profile)?,
                        _ => {
                            let metrics: serde_json::Map<String, Value> = qualimeter_core::maintain::LogiscopeMetric::ALL
                                .iter()
                                .zip(status)
                                .map(|(k, s)| (k.name().to_string(), json!({"value": number::real(Some(m.get(*k))), "status": s})))
                                .collect();
                            json_text(&json!({"schemaVersion": SCHEMA_VERSION, "entity": name, "metrics": metrics}))
                        }
                    };
                    arts.push((name.clone(), *f, body));
                }
            }
            emit(arts, ctx.out_dir(&output), stdout)
        }
        Command::Treemap { paths, resolution, iterations, tolerance, seed, output } => {
            let formats = ctx.formats(&output, &[Format::Svg, Format::Json], &[Format::Svg])?;
            let is_hierarchy =
                paths.len() == 1 && paths[0].is_file() && paths[0].extension().is_some_and(|e| e == "json");
            let tree = if is_hierarchy {
                let text = fs::read_to_string(&paths[0]).map_err(|e| Error::io(&paths[0], e))?;
                to_node(config::from_json::<NodeJson>(&text, &paths[0])?)
            } else {
                loc_hierarchy(&paths)?
            };
            let params = LayoutParams {
                resolution,
                max_iterations: iterations,
                tolerance,
                seed: seed.or(ctx.cfg.seed).unwrap_or(0),
            };
            params.check().map_err(|e| Error::Usage(e.to_string()))?;
            let root = layout_hierarchy(&tree, &Region::full(resolution, resolution), &params).map_err(Error::analysis)?;
            let mut arts = Vec::new();
            for f in formats {
                let body = match f {
                    Format::Svg => svg::treemap(&root, resolution, resolution),
                    _ => json_text(&json!({"schemaVersion": SCHEMA_VERSION, "resolution": resolution, "root": cell_json(&root)})),
                };
                arts.push(("treemap".to_string(), f, body));
            }
            emit(arts, ctx.out_dir(&output), stdout)
        }
        Command::Stability { snapshots, use_cases, output } => {
            let formats = ctx.formats(&output, &[Format::Json], &[Format::Json])?;
            if snapshots.is_empty() && use_cases.is_none() {
                return Err(Error::Usage("stability needs snapshot files or --use-cases".into()));
            }
            let mut doc = if snapshots.is_empty() {
                json!({"schemaVersion": SCHEMA_VERSION})
            } else {
                let snaps = snapshots.iter().map(|p| evolution::load_snapshot(p)).collect::<Result<Vec<_>>>()?;
                evolution::stability(&snaps)?
            };
            if let Some(p) = &use_cases {
                doc["useCases"] = evolution::use_case_report(&evolution::load_use_cases(p)?)?;
            }
            let body = json_text(&doc);
            emit(formats.into_iter().map(|f| ("stability".to_string(), f, body.clone())).collect(), ctx.out_dir(&output), stdout)
        }
        Command::Correlate { file, output } => {
            let formats = ctx.formats(&output, &[Format::Json, Format::Csv], &[Format::Json])?;
            let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
            let (x, y) = evolution::parse_series(&text, &file)?;
            let v = evolution::correlate(&x, &y)?;
            let arts = formats
                .into_iter()
                .map(|f| {
                    let body = match f {
                        Format::Json => json_text(&v),
                        _ => format!("n,spearman\n{},{}\n", v["n"], v["spearman"]),
                    };
                    ("correlate".to_string(), f, body)
                })
                .collect();
            emit(arts, ctx.out_dir(&output), stdout)
        }
        Command::Compare { first, second, output } => {
            let out = ctx.out_dir(&output);
            let default: &[Format] = if out.is_some() { &[Format::Json, Format::Csv] } else { &[Format::Json] };
            let formats = ctx.formats(&output, &[Format::Json, Format::Csv], default)?;
            let c = compare::compare(compare::load_side(&first)?, compare::load_side(&second)?)?;
            let mut arts = Vec::new();
            for f in formats {
                let body = match f {
                    Format::Json => json_text(&c.to_json()),
                    _ => c.to_csv()?,
                };
                arts.push(("compare".to_string(), f, body));
            }
            emit(arts, out, stdout)
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered
                        .lines()
                        .next()
                        .unwrap_or("invalid arguments")
                        .trim_start_matches("error: ")
                        .to_string();
                    let _ = writeln!(stderr, "{}", Error::Usage(first).diagnostic());
                    let rest: Vec<&str> = rendered.lines().skip(1).collect();
                    let _ = writeln!(stderr, "{}", rest.join("\n").trim_end());
                    2
                }
            };
        }
    };
    let cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(stderr, "{}", e.diagnostic());
                return e.exit_code();
            }
        },
        None => RunConfig::default(),
    };
    let mut ctx = Ctx { cfg, stderr };
    match run_command(cli, &mut ctx, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "{}", e.diagnostic());
            e.exit_code()
        }
    }
}

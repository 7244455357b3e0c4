//! The `drillgauge` command-line interface.
//!
//! Subcommands: `slope-length`, `count-excluded`, `moduli-max`, `certify`,
//! `integrate`, `drill`, `hds-region`, `bounds`. Every command supports
//! `--output {json,csv,table}`; table and CSV values print with 12 fixed
//! decimal places.
//!
//! A JSON run configuration may be supplied with `--config` or the
//! `DRILLGAUGE_CONFIG` environment variable; command-line flags override it.
//! Unknown configuration keys are rejected.
//!
//! Exit codes: 0 success or positive verdict, 10 inconclusive verdict,
//! 2 parse/configuration error, 3 domain error, 4 internal discrepancy
//! (a computed result contradicting a published constant).

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::constants::{self, CONSTANTS_VERSION};
use crate::error::{Error, Result};
use crate::family_ode::{self, IntegrateOptions, Termination};
use crate::flat_torus::{CuspShape, ShapeRecord, Slope, WeightedClass};
use crate::harmonic_bounds::{self, BoundaryForm};
use crate::slope_census::{self, CertifyConfig, SearchConfig, Verdict};
use crate::tube::RadiusFloor;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_DISCREPANCY: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 10;

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "DRILLGAUGE_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Parser, Debug)]
#[command(
    name = "drillgauge",
    version,
    about = "Certificates for hyperbolic Dehn filling: length thresholds, \
             cone-family envelopes, slope-exclusion counts, boundary-term bounds"
)]
struct Cli {
    /// JSON run configuration (default: $DRILLGAUGE_CONFIG)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format (default from config, then `table`)
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ShapeArgs {
    /// Torus modulus: the lattice spanned by 1 and x+iy
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    modulus: Option<Vec<f64>>,

    /// Raw lattice basis, two row vectors: e11 e12 e21 e22
    #[arg(long, num_args = 4, value_names = ["E11", "E12", "E21", "E22"],
          allow_negative_numbers = true)]
    basis: Option<Vec<f64>>,

    /// JSON shape record: {"name": .., "basis": ..} or {"name": .., "modulus": ..}
    #[arg(long)]
    shape_file: Option<PathBuf>,

    /// Label recorded in certificates
    #[arg(long)]
    name: Option<String>,
}

impl ShapeArgs {
    fn resolve(&self) -> Result<(CuspShape, String)> {
        let given = [
            self.modulus.is_some(),
            self.basis.is_some(),
            self.shape_file.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if given != 1 {
            return Err(Error::BadConfig(
                "provide exactly one of --modulus, --basis, --shape-file".into(),
            ));
        }
        if let Some(m) = &self.modulus {
            let shape = CuspShape::from_modulus(m[0], m[1])?;
            let name = self.name.clone().unwrap_or_else(|| "inline".into());
            return Ok((shape, name));
        }
        if let Some(b) = &self.basis {
            let shape = CuspShape::from_basis([b[0], b[1]], [b[2], b[3]])?;
            let name = self.name.clone().unwrap_or_else(|| "inline".into());
            return Ok((shape, name));
        }
        let path = self.shape_file.as_ref().unwrap();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))?;
        let record: ShapeRecord = serde_json::from_str(&text)
            .map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))?;
        let shape = record.to_shape()?;
        Ok((shape, self.name.clone().unwrap_or(record.name)))
    }
}

#[derive(Args, Debug)]
struct FloorArgs {
    /// Constant radius floor value
    #[arg(long)]
    floor: Option<f64>,

    /// Validity cap on the angle-length product for --floor
    #[arg(long)]
    cap: Option<f64>,

    /// Tabulated floor file: {"validity_cap": .., "table": [[al, rmin], ..]}
    #[arg(long, conflicts_with_all = ["floor", "cap"])]
    floor_file: Option<PathBuf>,

    /// Exact model regime: error interval pinned to zero
    #[arg(long, conflicts_with_all = ["floor", "cap", "floor_file"])]
    model: bool,
}

impl FloorArgs {
    fn resolve(&self, config: &RunConfig) -> Result<RadiusFloor> {
        if self.model {
            return Ok(RadiusFloor::model());
        }
        if let Some(path) = &self.floor_file {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))?;
            return RadiusFloor::tabulated_from_json(&text);
        }
        if let Some(v) = self.floor {
            let cap = self.cap.unwrap_or(constants::TUBE_PRODUCT_CAP);
            return RadiusFloor::constant(v, cap);
        }
        Ok(config.floor.clone())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized and extremal length of a slope on a cusp shape
    SlopeLength {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Surgery slope p q
        #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true)]
        slope: Vec<i64>,
    },

    /// Count slopes with normalized length strictly below a bound
    CountExcluded {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        bound: f64,
        /// List the excluded slopes as well
        #[arg(long)]
        list: bool,
    },

    /// Maximize the exclusion count over the moduli space of cusp shapes
    ModuliMax {
        #[arg(long)]
        bound: f64,
        #[arg(long, default_value_t = 101)]
        nx: usize,
        #[arg(long, default_value_t = 100)]
        ny: usize,
        #[arg(long)]
        y_cap: Option<f64>,
        #[arg(long, default_value_t = 2)]
        refine_rounds: usize,
        #[arg(long, default_value_t = 21)]
        refine_n: usize,
    },

    /// Certify a Dehn filling (slope) or surgery coefficient (class)
    Certify {
        #[command(flatten)]
        shape: Option<ShapeArgs>,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true)]
        slope: Option<Vec<i64>>,
        /// Weighted class x y instead of an integer slope
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true,
              conflicts_with = "slope")]
        class: Option<Vec<f64>>,
        /// Use the per-cusp multi-cusp threshold
        #[arg(long)]
        multi_cusp: bool,
        /// Attach a cone-family volume enclosure
        #[arg(long)]
        integrate: bool,
        /// Batch mode: JSON-lines shape records (with optional "slope")
        #[arg(long)]
        batch: Option<PathBuf>,
        /// Write the certificate JSON to a file
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        floor: FloorArgs,
    },

    /// Integrate a cone-angle family with certified envelopes
    Integrate {
        /// Normalized length of the filling slope
        #[arg(long)]
        lhat: f64,
        #[arg(long)]
        alpha_start: Option<f64>,
        /// Target cone angle (default 2*pi)
        #[arg(long)]
        alpha_target: Option<f64>,
        #[arg(long)]
        d_alpha_max: Option<f64>,
        /// Relative slack on the initial enclosure
        #[arg(long)]
        rel_slack: Option<f64>,
        #[command(flatten)]
        floor: FloorArgs,
        /// Write the trace CSV to a file
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Drilling certificate for a closed manifold with a short geodesic
    Drill {
        /// Length of the shortest closed geodesic
        #[arg(long, allow_negative_numbers = true)]
        geodesic: f64,
        /// Known volume lower bound for the drilled (cusped) manifold
        #[arg(long)]
        cusped_volume: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Excluded-ellipse descriptor of hyperbolic Dehn surgery space
    HdsRegion {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = constants::HDS_THRESHOLD)]
        threshold: f64,
        /// Optional membership query for a weighted class
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        class: Option<Vec<f64>>,
    },

    /// Evaluate the deformation bounds at given tube data
    Bounds {
        /// Tube radius
        #[arg(long)]
        radius: f64,
        /// Cone angle (with --ell, enables the boundary-term bounds)
        #[arg(long)]
        alpha: Option<f64>,
        /// Core length
        #[arg(long)]
        ell: Option<f64>,
        /// Boundary form JSON for the slice maximizer
        #[arg(long)]
        form_file: Option<PathBuf>,
        /// Angle-axis component handed to the slice maximizer
        #[arg(long, default_value_t = 1.0)]
        vm: f64,
    },
}

/// Resolved run configuration: file values with defaults filled in.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha_start: f64,
    pub d_alpha_max: f64,
    pub rel_slack: f64,
    pub floor: RadiusFloor,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha_start: 1e-4,
            d_alpha_max: 0.05,
            rel_slack: 0.0,
            floor: RadiusFloor::default_constant(),
            output: OutputFormat::Table,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfigFile {
    constants_version: Option<String>,
    alpha_start: Option<f64>,
    d_alpha_max: Option<f64>,
    rel_slack: Option<f64>,
    floor: Option<FloorSpec>,
    output: Option<OutputFormat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FloorSpec {
    constant: Option<f64>,
    table: Option<Vec<[f64; 2]>>,
    validity_cap: Option<f64>,
}

impl RunConfig {
    fn from_file(text: &str) -> Result<Self> {
        let file: RunConfigFile =
            serde_json::from_str(text).map_err(|e| Error::BadConfig(format!("config: {e}")))?;
        if let Some(v) = &file.constants_version {
            if v != CONSTANTS_VERSION {
                return Err(Error::BadConfig(format!(
                    "unknown constants_version '{v}' (this build ships '{CONSTANTS_VERSION}')"
                )));
            }
        }
        let mut cfg = RunConfig::default();
        if let Some(v) = file.alpha_start {
            cfg.alpha_start = v;
        }
        if let Some(v) = file.d_alpha_max {
            cfg.d_alpha_max = v;
        }
        if let Some(v) = file.rel_slack {
            cfg.rel_slack = v;
        }
        if let Some(v) = file.output {
            cfg.output = v;
        }
        if let Some(spec) = file.floor {
            cfg.floor = match (spec.constant, spec.table) {
                (Some(c), None) => RadiusFloor::constant(
                    c,
                    spec.validity_cap.unwrap_or(constants::TUBE_PRODUCT_CAP),
                )?,
                (None, Some(t)) => RadiusFloor::tabulated(
                    t.into_iter().map(|[a, r]| (a, r)).collect(),
                    spec.validity_cap
                        .ok_or_else(|| Error::BadConfig("floor table needs validity_cap".into()))?,
                )?,
                _ => {
                    return Err(Error::BadConfig(
                        "floor spec needs exactly one of `constant` or `table`".into(),
                    ))
                }
            };
        }
        for (name, v) in [
            ("alpha_start", cfg.alpha_start),
            ("d_alpha_max", cfg.d_alpha_max),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::BadConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(cfg.rel_slack >= 0.0) {
            return Err(Error::BadConfig(format!(
                "rel_slack must be nonnegative, got {}",
                cfg.rel_slack
            )));
        }
        Ok(cfg)
    }

    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let path = match path {
            Some(p) => p.clone(),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) => PathBuf::from(p),
                None => return Ok(RunConfig::default()),
            },
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))?;
        Self::from_file(&text)
    }
}

// --- output helpers ---

enum Field {
    F(f64),
    I(i64),
    S(String),
}

fn render(fields: &[(&str, Field)], format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            fields
                .iter()
                .map(|(k, v)| match v {
                    Field::F(x) => format!("{k:<width$}  {x:.12}"),
                    Field::I(x) => format!("{k:<width$}  {x}"),
                    Field::S(x) => format!("{k:<width$}  {x}"),
                })
                .collect::<Vec<_>>()
                .join("\n")
        }
        OutputFormat::Csv => {
            let header = fields.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(",");
            let row = fields
                .iter()
                .map(|(_, v)| match v {
                    Field::F(x) => format!("{x:.12}"),
                    Field::I(x) => format!("{x}"),
                    Field::S(x) => x.clone(),
                })
                .collect::<Vec<_>>()
                .join(",");
            format!("{header}\n{row}")
        }
        OutputFormat::Json => {
            let mut map = serde_json::Map::new();
            for (k, v) in fields {
                let value = match v {
                    Field::F(x) => serde_json::Number::from_f64(*x)
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null),
                    Field::I(x) => serde_json::Value::Number((*x).into()),
                    Field::S(x) => serde_json::Value::String(x.clone()),
                };
                map.insert((*k).to_string(), value);
            }
            serde_json::Value::Object(map).to_string()
        }
    }
}

fn verdict_exit(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::CertifiedHyperbolic | Verdict::InHdsRegion | Verdict::Drillable => EXIT_OK,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::CertifiedHyperbolic => "certified_hyperbolic",
        Verdict::InHdsRegion => "in_hds_region",
        Verdict::Drillable => "drillable",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn write_out(path: &PathBuf, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))
}

fn certificate_output(
    cert: &crate::slope_census::Certificate,
    format: OutputFormat,
    out: Option<&PathBuf>,
) -> Result<i32> {
    if let Some(path) = out {
        write_out(path, &(cert.to_json() + "\n"))?;
    }
    match format {
        OutputFormat::Json => println!("{}", cert.to_json()),
        _ => {
            let mut fields = vec![("verdict", Field::S(verdict_name(cert.verdict).into()))];
            for (k, v) in &cert.numbers {
                fields.push((k.as_str(), Field::F(*v)));
            }
            for (k, v) in &cert.thresholds {
                fields.push((k.as_str(), Field::F(*v)));
            }
            for (k, v) in &cert.enclosures {
                fields.push((k.as_str(), Field::F(*v)));
            }
            fields.push((
                "paper_constants_version",
                Field::S(cert.paper_constants_version.clone()),
            ));
            println!("{}", render(&fields, format));
        }
    }
    Ok(verdict_exit(cert.verdict))
}

/// Entry point: parse arguments, run the command, return the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let config = match RunConfig::load(cli.config.as_ref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let format = cli.output.unwrap_or(config.output);
    match dispatch(cli.command, &config, format) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_parse_error() {
                EXIT_PARSE
            } else {
                EXIT_DOMAIN
            }
        }
    }
}

fn dispatch(command: Command, config: &RunConfig, format: OutputFormat) -> Result<i32> {
    match command {
        Command::SlopeLength { shape, slope } => {
            let (shape, _) = shape.resolve()?;
            let slope = Slope::new(slope[0], slope[1])?;
            let l = shape.slope_length(slope);
            println!(
                "{}",
                render(
                    &[
                        ("normalized_length", Field::F(l)),
                        ("extremal_length", Field::F(l * l)),
                    ],
                    format
                )
            );
            Ok(EXIT_OK)
        }

        Command::CountExcluded { shape, bound, list } => {
            let (shape, _) = shape.resolve()?;
            if !(bound > 0.0) {
                return Err(Error::NonPositiveInput {
                    name: "bound",
                    value: bound,
                });
            }
            let slopes = shape.enumerate_slopes(bound)?;
            if list {
                match format {
                    OutputFormat::Json => {
                        let items: Vec<serde_json::Value> = slopes
                            .iter()
                            .map(|(s, l)| serde_json::json!({"p": s.p(), "q": s.q(), "length": l}))
                            .collect();
                        println!(
                            "{}",
                            serde_json::json!({"count": slopes.len(), "slopes": items})
                        );
                    }
                    _ => {
                        println!("count  {}", slopes.len());
                        println!("p,q,length");
                        for (s, l) in &slopes {
                            println!("{},{},{:.12}", s.p(), s.q(), l);
                        }
                    }
                }
            } else {
                println!(
                    "{}",
                    render(&[("count", Field::I(slopes.len() as i64))], format)
                );
            }
            Ok(EXIT_OK)
        }

        Command::ModuliMax {
            bound,
            nx,
            ny,
            y_cap,
            refine_rounds,
            refine_n,
        } => {
            let cfg = SearchConfig {
                nx,
                ny,
                y_cap,
                refine_rounds,
                refine_n,
            };
            let r = slope_census::max_excluded_over_moduli(bound, &cfg)?;
            println!(
                "{}",
                render(
                    &[
                        ("max_count", Field::I(r.max_count as i64)),
                        ("argmax_x", Field::F(r.argmax_modulus.0)),
                        ("argmax_y", Field::F(r.argmax_modulus.1)),
                        ("samples_evaluated", Field::I(r.samples_evaluated as i64)),
                        ("refinement_depth", Field::I(r.refinement_depth as i64)),
                    ],
                    format
                )
            );
            if let Some(cap) = constants::exclusion_cap(bound) {
                if r.max_count > cap {
                    eprintln!(
                        "discrepancy: computed maximum {} exceeds the published constant {}",
                        r.max_count, cap
                    );
                    return Ok(EXIT_DISCREPANCY);
                }
            }
            Ok(EXIT_OK)
        }

        Command::Certify {
            shape,
            slope,
            class,
            multi_cusp,
            integrate,
            batch,
            out,
            floor,
        } => {
            let certify_config = CertifyConfig {
                multi_cusp,
                integrate,
                floor: floor.resolve(config)?,
                alpha_start: config.alpha_start,
                d_alpha_max: config.d_alpha_max,
                rel_slack: config.rel_slack,
            };
            if let Some(batch_path) = batch {
                return certify_batch(&batch_path, slope.as_deref(), &certify_config, out.as_ref());
            }
            let shape_args = shape
                .ok_or_else(|| Error::BadConfig("certify needs a shape (or --batch)".into()))?;
            let (cusp, name) = shape_args.resolve()?;
            let cert = match (&slope, &class) {
                (Some(s), None) => slope_census::certify_fill(
                    &cusp,
                    &name,
                    Slope::new(s[0], s[1])?,
                    &certify_config,
                ),
                (None, Some(c)) => slope_census::certify_class(
                    &cusp,
                    &name,
                    WeightedClass::new(c[0], c[1]),
                    &certify_config,
                )?,
                _ => {
                    return Err(Error::BadConfig(
                        "certify needs exactly one of --slope or --class".into(),
                    ))
                }
            };
            certificate_output(&cert, format, out.as_ref())
        }

        Command::Integrate {
            lhat,
            alpha_start,
            alpha_target,
            d_alpha_max,
            rel_slack,
            floor,
            out,
        } => {
            let floor = floor.resolve(config)?;
            let alpha_start = alpha_start.unwrap_or(config.alpha_start);
            let alpha_target = alpha_target.unwrap_or(std::f64::consts::TAU);
            let d_alpha_max = d_alpha_max.unwrap_or(config.d_alpha_max);
            let rel_slack = rel_slack.unwrap_or(config.rel_slack);
            let state = family_ode::init_family(lhat, alpha_start, rel_slack)?;
            let trace = family_ode::integrate_to_with(
                &state,
                alpha_target,
                d_alpha_max,
                &floor,
                IntegrateOptions::default(),
            )?;
            if let Some(path) = &out {
                write_out(path, &trace.to_csv())?;
            }
            let f = trace.final_state();
            let vb = family_ode::volume_change_bounds(&trace, lhat);
            match format {
                OutputFormat::Csv => print!("{}", trace.to_csv()),
                _ => println!(
                    "{}",
                    render(
                        &[
                            ("alpha_reached", Field::F(f.alpha)),
                            ("ell_lo", Field::F(f.ell_lo)),
                            ("ell_hi", Field::F(f.ell_hi)),
                            ("dv_lo", Field::F(f.dv_lo)),
                            ("dv_hi", Field::F(f.dv_hi)),
                            ("nz_reference", Field::F(vb.nz_reference)),
                            ("steps", Field::I(trace.samples.len() as i64 - 1)),
                            ("status", Field::S(f.status.to_string())),
                            ("termination", Field::S(format!("{:?}", trace.termination))),
                        ],
                        format
                    )
                ),
            }
            Ok(if trace.termination == Termination::ReachedTarget {
                EXIT_OK
            } else {
                EXIT_INCONCLUSIVE
            })
        }

        Command::Drill {
            geodesic,
            cusped_volume,
            out,
        } => {
            let cert = family_ode::drilling_certificate(geodesic, cusped_volume)?;
            certificate_output(&cert, format, out.as_ref())
        }

        Command::HdsRegion {
            shape,
            threshold,
            class,
        } => {
            let (cusp, _) = shape.resolve()?;
            let region = slope_census::hds_region(&cusp, threshold)?;
            match (&class, format) {
                (None, OutputFormat::Json) => println!("{}", region.to_json()),
                (Some(c), OutputFormat::Json) => {
                    let cls = WeightedClass::new(c[0], c[1]);
                    let inside = region.contains(cls)?;
                    let mut v: serde_json::Value =
                        serde_json::from_str(&region.to_json()).expect("region JSON");
                    v["class"] = serde_json::json!([c[0], c[1]]);
                    v["in_region"] = serde_json::json!(inside);
                    println!("{v}");
                }
                (maybe_class, _) => {
                    let mut fields = vec![
                        ("matrix_00", Field::F(region.matrix[0][0])),
                        ("matrix_01", Field::F(region.matrix[0][1])),
                        ("matrix_11", Field::F(region.matrix[1][1])),
                        ("threshold", Field::F(region.threshold)),
                        ("semi_major", Field::F(region.semi_major)),
                        ("semi_minor", Field::F(region.semi_minor)),
                    ];
                    let membership;
                    if let Some(c) = maybe_class {
                        membership = region.contains(WeightedClass::new(c[0], c[1]))?;
                        fields.push(("in_region", Field::S(membership.to_string())));
                    }
                    println!("{}", render(&fields, format));
                }
            }
            Ok(EXIT_OK)
        }

        Command::Bounds {
            radius,
            alpha,
            ell,
            form_file,
            vm,
        } => {
            let e = harmonic_bounds::error_interval(radius)?;
            let mut fields = vec![
                ("radius", Field::F(radius)),
                ("e_lo", Field::F(e.e_lo)),
                ("e_hi", Field::F(e.e_hi)),
            ];
            match (alpha, ell) {
                (Some(a), Some(l)) => {
                    fields.push(("bmm", Field::F(harmonic_bounds::bmm(a, l, radius)?)));
                    fields.push((
                        "b00_upper",
                        Field::F(harmonic_bounds::b00_upper(a, l, radius)?),
                    ));
                    fields.push((
                        "l2_upper",
                        Field::F(harmonic_bounds::l2_upper(a, l, radius)?.bound),
                    ));
                }
                (None, None) => {}
                _ => {
                    return Err(Error::BadConfig(
                        "--alpha and --ell must be given together".into(),
                    ))
                }
            }
            if let Some(path) = &form_file {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))?;
                let form = BoundaryForm::from_json(&text)?;
                let m = harmonic_bounds::slice_max(&form, [vm, 0.0, 0.0])?;
                fields.push(("slice_max", Field::F(m.max_value)));
                fields.push(("argmax_l1", Field::F(m.argmax[1])));
                fields.push(("argmax_l2", Field::F(m.argmax[2])));
            }
            println!("{}", render(&fields, format));
            Ok(EXIT_OK)
        }
    }
}

/// Batch certification: one shape record per input line, one certificate
/// JSON per output line, order preserved. Lines run concurrently.
fn certify_batch(
    path: &PathBuf,
    fallback_slope: Option<&[i64]>,
    config: &CertifyConfig,
    out: Option<&PathBuf>,
) -> Result<i32> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::BadConfig(format!("{}: {e}", path.display())))?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let fallback = match fallback_slope {
        Some(s) => Some(Slope::new(s[0], s[1])?),
        None => None,
    };
    let certs: Vec<crate::slope_census::Certificate> = lines
        .par_iter()
        .map(|line| {
            let record: ShapeRecord = serde_json::from_str(line)
                .map_err(|e| Error::BadConfig(format!("batch line: {e}")))?;
            let shape = record.to_shape()?;
            let slope = match record.slope {
                Some([p, q]) => Slope::new(p, q)?,
                None => fallback.ok_or_else(|| {
                    Error::BadConfig(format!(
                        "record '{}' has no slope and no --slope fallback was given",
                        record.name
                    ))
                })?,
            };
            Ok(slope_census::certify_fill(
                &shape,
                &record.name,
                slope,
                config,
            ))
        })
        .collect::<Result<_>>()?;
    let mut rendered = String::new();
    for c in &certs {
        rendered.push_str(&c.to_json());
        rendered.push('\n');
    }
    if let Some(path) = out {
        write_out(path, &rendered)?;
    }
    print!("{rendered}");
    Ok(
        if certs.iter().any(|c| c.verdict == Verdict::Inconclusive) {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        },
    )
}

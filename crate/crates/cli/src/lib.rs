//! Job configuration, dispatch and artifact writers behind the `hyptile`
//! binary.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use hyptile::dyadic::LocallyConstFnOmega;
use hyptile::hull::{
    check_relation_rpw, harmonicity_check, invariance_check, tau_pairing, CursorLaw, HullSampler, Profile,
    TestFunction, DEFAULT_STEP,
};
use hyptile::hypgeo::{generate_patch_with, geodesic_arc, tile_vertices, GeodesicArc, PatchFilter, Point, TileSet};
use hyptile::kinv::{cech_cohomology, gap_labels, k_groups, CylinderFunction, Ring};
use hyptile::numeric::rational_to_f64;
use hyptile::subshift::{language, measures, two_sided_window, SubshiftSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default fill colours, assigned to letters in sorted order.
pub const DEFAULT_PALETTE: [&str; 6] = ["#f4d35e", "#0d3b66", "#ee964b", "#5fa8d3", "#f95738", "#faf0ca"];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hyptile::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "computation",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
        }
    }

    /// Machine-readable error object.
    pub fn to_json(&self) -> Value {
        let detail = match self {
            CliError::Core(e) => format!("{e:?}"),
            _ => String::new(),
        };
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "detail": detail } })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// SVG figure of a coloured patch.
    Render,
    /// JSON tile list of a coloured patch.
    Patch,
    /// K0 and K1 of the crossed product.
    Kgroups,
    /// Čech cohomology of the hull.
    Cech,
    /// Gap-labelling group.
    Gaplabels,
    /// CSV of cylinder measures.
    Measures,
    /// Monte-Carlo invariance and harmonicity checks.
    Hullcheck,
    /// Monte-Carlo estimates of the 1-cocycle pairing.
    Cocycle,
}

impl Command {
    pub fn is_stochastic(self) -> bool {
        matches!(self, Command::Hullcheck | Command::Cocycle)
    }

    fn extension(self) -> &'static str {
        match self {
            Command::Render => "svg",
            Command::Measures => "csv",
            _ => "json",
        }
    }
}

/// Everything a job depends on. The output path is not part of the
/// provenance record, so moving an artifact does not change its bytes.
#[derive(Clone, Debug, Serialize)]
pub struct JobConfig {
    pub command: Command,
    #[serde(serialize_with = "ser_spec")]
    pub spec: SubshiftSpec,
    pub radius: f64,
    pub nmax: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub palette: Vec<String>,
}

fn ser_spec<S: serde::Serializer>(spec: &SubshiftSpec, s: S) -> Result<S::Ok, S::Error> {
    let v: Value = serde_json::from_str(&spec.to_json()).map_err(serde::ser::Error::custom)?;
    v.serialize(s)
}

impl JobConfig {
    pub fn new(command: Command, spec: SubshiftSpec) -> Self {
        JobConfig {
            command,
            spec,
            radius: 3.0,
            nmax: 8,
            samples: 100_000,
            seed: None,
            out: None,
            palette: DEFAULT_PALETTE.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.radius.is_finite() && self.radius > 0.0 && self.radius <= 8.0) {
            return bad(format!("radius must be in (0, 8], got {}", self.radius));
        }
        if self.command.is_stochastic() && self.seed.is_none() {
            return bad(format!("{:?} is stochastic and needs --seed", self.command).to_lowercase());
        }
        if self.command.is_stochastic() && !(2..=10_000_000).contains(&self.samples) {
            return bad(format!("samples must be in 2..=10000000, got {}", self.samples));
        }
        match self.command {
            Command::Kgroups | Command::Cech if !(2..=14).contains(&self.nmax) => {
                bad(format!("nmax must be in 2..=14, got {}", self.nmax))
            }
            Command::Gaplabels | Command::Measures if !(1..=16).contains(&self.nmax) => {
                bad(format!("nmax must be in 1..=16, got {}", self.nmax))
            }
            _ if self.palette.is_empty() => bad("palette must not be empty".into()),
            _ => Ok(()),
        }
    }

    fn provenance(&self) -> Value {
        json!({ "hyptile_version": VERSION, "config": self })
    }
}

/// A rendered artifact.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub contents: String,
    pub extension: &'static str,
}

/// Run a job and return its artifact without touching the disk.
pub fn build(config: &JobConfig) -> CliResult<Artifact> {
    config.validate()?;
    let spec = &config.spec;
    let contents = match config.command {
        Command::Render => {
            let (ts, window) = coloured_patch(config)?;
            svg_render(&ts, &palette_for(spec, &config.palette), window, &config.provenance())
        }
        Command::Patch => {
            let (ts, _) = coloured_patch(config)?;
            json_document(config, patch_json(&ts))
        }
        Command::Kgroups => {
            let k = k_groups(spec, config.nmax)?;
            let result = json!({
                "K0": {
                    "rank": k.k0_rank(),
                    "torsion": k.k0_torsion().iter().map(|d| d.to_string().parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(d.to_string()))).collect::<Vec<_>>(),
                    "coinv": k.k0_coinv,
                    "inv": k.k0_inv,
                },
                "K1": k.k1,
                "stabilized": k.stabilized,
            });
            json_document(config, result)
        }
        Command::Cech => {
            json_document(config, serde_json::to_value(cech_cohomology(spec, config.nmax)?).expect("serializable"))
        }
        Command::Gaplabels => {
            json_document(config, serde_json::to_value(gap_labels(spec, config.nmax)?).expect("serializable"))
        }
        Command::Measures => measures_csv(config)?,
        Command::Hullcheck => json_document(config, hullcheck(config)?),
        Command::Cocycle => json_document(config, cocycle(config)?),
    };
    Ok(Artifact { contents, extension: config.command.extension() })
}

/// Run a job and write its artifact to `config.out` (or return it for
/// printing when no path is given). Files are written through a temporary
/// sibling and renamed, so failures leave nothing behind.
pub fn run(config: &JobConfig) -> CliResult<Option<Artifact>> {
    let artifact = build(config)?;
    match &config.out {
        Some(path) => {
            write_atomic(path, &artifact.contents)?;
            Ok(None)
        }
        None => Ok(Some(artifact)),
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    let name = path.file_name().ok_or_else(|| CliError::Config(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(io(e));
    }
    Ok(())
}

fn json_document(config: &JobConfig, result: Value) -> String {
    let mut doc = config.provenance();
    doc["result"] = result;
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Shortest round-trip decimal form (at most 17 significant digits).
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

/// Colours per letter, in sorted letter order.
pub fn palette_for(spec: &SubshiftSpec, palette: &[String]) -> Vec<(u8, String)> {
    spec.alphabet().into_iter().enumerate().map(|(i, a)| (a, palette[i % palette.len()].clone())).collect()
}

/// The patch of radius `config.radius` around `i`, coloured by the spec, and
/// the Euclidean window `(x0, x1, y0, y1)` of the ball.
fn coloured_patch(config: &JobConfig) -> CliResult<(TileSet, (f64, f64, f64, f64))> {
    let r = config.radius;
    // scales meeting the ball lie within |k| <= r / ln 2 + 3
    let half = (r / std::f64::consts::LN_2).ceil() as usize + 8;
    let w = two_sided_window(&config.spec, half)?;
    let ts = generate_patch_with(&Point::i(), r, Some(&w), PatchFilter::BoundingBox)?;
    let (c, d) = (r.cosh(), r.sinh());
    Ok((ts, (-d, d, c - d, c + d)))
}

fn patch_json(ts: &TileSet) -> Value {
    let tiles: Vec<Value> = ts
        .iter()
        .map(|t| {
            let verts: Vec<Value> =
                tile_vertices(t).iter().map(|p| json!([p.x().to_string(), p.y().to_string()])).collect();
            json!({
                "k": t.k,
                "n": t.n,
                "colour": t.colour.map(|c| (c as char).to_string()),
                "vertices": verts,
            })
        })
        .collect();
    json!({ "radius": ts.window_radius, "count": ts.len(), "tiles": tiles })
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Stroke width of a scale-0 tile, in user units.
const STROKE: f64 = 0.02;

/// SVG document for a coloured patch. `window` is the bounding box
/// `(x0, x1, y0, y1)` of the ball's Euclidean disk, which is also the clip
/// region; the picture is flipped so that `y` grows upwards.
pub fn svg_render(ts: &TileSet, colours: &[(u8, String)], window: (f64, f64, f64, f64), provenance: &Value) -> String {
    let (x0, x1, y0, y1) = window;
    let fallback = colours.first().map(|c| c.1.as_str()).unwrap_or("#cccccc");
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        fmt_num(x0),
        fmt_num(-y1),
        fmt_num(x1 - x0),
        fmt_num(y1 - y0)
    );
    let _ = writeln!(s, "<metadata>{}</metadata>", xml_escape(&provenance.to_string()));
    let _ = writeln!(
        s,
        "<defs><clipPath id=\"window\"><ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\"/></clipPath></defs>",
        fmt_num((x0 + x1) / 2.0),
        fmt_num(-(y0 + y1) / 2.0),
        fmt_num((x1 - x0) / 2.0),
        fmt_num((y1 - y0) / 2.0)
    );
    s.push_str("<g clip-path=\"url(#window)\" stroke=\"#000000\" stroke-linejoin=\"round\">\n");
    for t in ts.iter() {
        let fill = t
            .colour
            .and_then(|c| colours.iter().find(|(a, _)| *a == c).map(|(_, col)| col.as_str()))
            .unwrap_or(fallback);
        let _ = writeln!(
            s,
            "<path data-tile=\"{} {}\" fill=\"{}\" stroke-width=\"{}\" d=\"{}\"/>",
            t.k,
            t.n,
            fill,
            fmt_num(STROKE * 2f64.powi(t.k as i32)),
            tile_path(t)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Path data of a tile: `M A1`, then one segment per edge `A1A2, …, A5A1`.
pub fn tile_path(t: &hyptile::hypgeo::TileIndex) -> String {
    let v = tile_vertices(t);
    let pt = |p: &Point| format!("{} {}", fmt_num(p.x().to_f64()), fmt_num(-p.y().to_f64()));
    let mut d = format!("M {}", pt(&v[0]));
    for i in 0..5 {
        let (p, q) = (&v[i], &v[(i + 1) % 5]);
        match geodesic_arc(p, q) {
            GeodesicArc::Vertical { .. } => {
                let _ = write!(d, " L {}", pt(q));
            }
            GeodesicArc::Circle { radius_sq, .. } => {
                let r = fmt_num(rational_to_f64(&radius_sq).sqrt());
                let sweep = u8::from(p.x() < q.x());
                let _ = write!(d, " A {r} {r} 0 0 {sweep} {}", pt(q));
            }
        }
    }
    d.push_str(" Z");
    d
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn measures_csv(config: &JobConfig) -> CliResult<String> {
    let mut s = String::new();
    let _ = writeln!(s, "# {}", config.provenance());
    s.push_str("n,word,measure,approx\n");
    for n in 1..=config.nmax {
        for (w, m) in measures(&config.spec, n)?.iter() {
            let _ = writeln!(s, "{n},{},{},{}", csv_field(w.as_str()), csv_field(&m.to_string()), fmt_num(m.to_f64()));
        }
    }
    Ok(s)
}

/// `χ_[a] ⊗ χ_{F_{1,0}}` with C² bumps in `t` and `s`, `a` the first letter.
pub fn default_test_function(spec: &SubshiftSpec) -> CliResult<TestFunction> {
    let first = language(spec, 1)?.first().cloned().ok_or_else(|| CliError::Config("empty alphabet".into()))?;
    Ok(TestFunction {
        cylinder: Some(CylinderFunction::indicator(Ring::Z, 0, &first)),
        omega: Some(LocallyConstFnOmega::indicator(1, 0, 1)?),
        profile_t: Profile::bump(0.5, 0.4)?,
        profile_s: Profile::bump(0.5, 0.45)?,
    })
}

/// `n` group elements `(2^e, b)` with `e ∈ [-1.5, 1.5)`, `b ∈ [-3, 3)`.
pub fn random_group_elements(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.random_range(-1.5..1.5f64).exp2(), rng.random_range(-3.0..3.0))).collect()
}

fn hullcheck(config: &JobConfig) -> CliResult<Value> {
    let seed = config.seed.expect("validated");
    let spec = &config.spec;
    let sampler = HullSampler::new(spec, CursorLaw::Invariant)?;
    let f = default_test_function(spec)?;
    let gs = random_group_elements(seed, 20);
    let inv = invariance_check(&sampler, &f, &gs, config.samples, seed)?;
    let harm = harmonicity_check(&sampler, &f, config.samples, DEFAULT_STEP, seed.wrapping_add(1))?;
    let rpw = check_relation_rpw(sampler.window(), config.radius)?;
    Ok(json!({
        "invariance": inv,
        "harmonicity": harm,
        "relation_RPw": rpw,
        "pass": inv.pass && harm.pass && rpw,
    }))
}

fn cocycle(config: &JobConfig) -> CliResult<Value> {
    let seed = config.seed.expect("validated");
    let sampler = HullSampler::new(&config.spec, CursorLaw::Invariant)?;
    let f = default_test_function(&config.spec)?;
    let g = TestFunction {
        cylinder: None,
        omega: None,
        profile_t: Profile::bump(0.4, 0.3)?,
        profile_s: Profile::bump(0.6, 0.35)?,
    };
    let fg = tau_pairing(&sampler, &f, &g, config.samples, DEFAULT_STEP, seed)?;
    let f1 = tau_pairing(&sampler, &f, &TestFunction::constant(), config.samples, DEFAULT_STEP, seed)?;
    Ok(json!({
        "tau_f_g": fg.tau,
        "antisymmetry_defect": fg.antisymmetry_defect,
        "tau_f_1": f1.tau,
        "pass": fg.antisymmetry_defect.pass && f1.tau.pass,
    }))
}

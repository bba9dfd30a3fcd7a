//! `fresnel-tomo` command line.
//!
//! Exit codes: 0 success, 1 a verification or tolerance check failed,
//! 2 bad input (usage, parse or validation errors).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fockspace::{fresnel_operator, DEFAULT_DIM};
use crate::gridtransform::{fresnel_transform, fresnel_transform_via, GridSpec, GridWavefunction, TransformRoute};
use crate::io::{
    load_state_file, write_json, write_sinogram, write_tomogram_csv, write_wavefunction_csv,
    write_wavefunction_json, write_wigner_binary, write_wigner_csv,
};
use crate::phasespace::{
    inverse_radon_fbp, radon, rotation_sinogram, tomogram_via_fresnel, wigner, Quadrature, TomogramCurve,
    WignerGrid,
};
use crate::states::{make_state_fock, make_state_grid, StateSpec};
use crate::symplectic::{Elementary, RayMatrix, SrPair};
use crate::verify::{self, reconstruction_grid, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fresnel-tomo", version, about = "Fresnel transforms, Wigner functions and tomograms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wigner function of a state on the phase-space grid.
    Wigner(CommonArgs),
    /// Quadrature distribution of DX - BP (or AP - CX) for a state.
    Tomogram(TomogramArgs),
    /// Radon transform of the Wigner function, or a rotation sinogram.
    Radon(RadonArgs),
    /// Applies the Fresnel transform of a matrix to a state.
    FresnelApply(ApplyArgs),
    /// Multiplies matrices and cross-checks the (s, r) composition.
    Compose(ComposeArgs),
    /// Runs the self-check suite.
    Verify(VerifyArgs),
    /// Filtered back-projection from rotation tomograms.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// State spec: vacuum, fock:N, coherent:RE[,IM], squeezed:LAMBDA, cat:RE[,IM].
    #[arg(long, conflicts_with = "state_file")]
    pub state: Option<String>,
    /// State file: spec JSON, wavefunction JSON or wavefunction CSV.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    /// Ray matrix entries A,B,C,D.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["sr", "elementary"])]
    pub matrix: Option<String>,
    /// (s, r) pair as Re s,Im s,Re r,Im r.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "elementary")]
    pub sr: Option<String>,
    /// identity, rotation:T, free:L, lens:K or scale:M.
    #[arg(long, allow_hyphen_values = true)]
    pub elementary: Option<String>,
    /// Grid half-width and point count, L,n.
    #[arg(long)]
    pub grid: Option<String>,
    /// Fock-space dimension.
    #[arg(long)]
    pub fock_dim: Option<usize>,
    /// Output file (or directory for sinograms).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Evaluation route; meaning depends on the subcommand.
    #[arg(long)]
    pub route: Option<String>,
    /// Seed for randomized checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print the summary as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TomogramArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// position (DX - BP) or momentum (AP - CX).
    #[arg(long, default_value = "position")]
    pub mode: Quadrature,
    /// Largest fresnel/radon deviation accepted with `--route both`.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct RadonArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "position")]
    pub mode: Quadrature,
    /// Write a rotation sinogram with this many angles to the `--out` directory.
    #[arg(long)]
    pub angles: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Apply the truncated Fock-space operator instead of the grid transform.
    #[arg(long)]
    pub fock: bool,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Matrices, leftmost outermost: `A,B,C,D` (or `abcd:A,B,C,D` when A is
    /// negative), `sr:Re s,Im s,Re r,Im r` or an elementary name.
    #[arg(required = true, num_args = 1..)]
    pub specs: Vec<String>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Random matrices per state in the tomogram identities.
    #[arg(long, default_value_t = 20)]
    pub matrices: usize,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of rotation angles over a half turn.
    #[arg(long, default_value_t = 180)]
    pub angles: usize,
    /// Fail (exit 1) when the L-infinity error exceeds this.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

/// Where the state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Spec(StateSpec),
    File(PathBuf),
}

/// Resolved common arguments.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub state: Option<StateSource>,
    pub matrix: Option<RayMatrix>,
    pub grid: GridSpec,
    pub fock_dim: usize,
    pub out: Option<PathBuf>,
    pub route: Option<String>,
    pub seed: Option<u64>,
    pub json: bool,
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs, default_grid: GridSpec) -> Result<RunConfig> {
        let state = match (&a.state, &a.state_file) {
            (Some(s), None) => Some(StateSource::Spec(s.parse()?)),
            (None, Some(p)) => Some(StateSource::File(p.clone())),
            (None, None) => None,
            (Some(_), Some(_)) => return Err(usage("give either --state or --state-file, not both")),
        };
        let matrix = match (&a.matrix, &a.sr, &a.elementary) {
            (Some(m), None, None) => Some(parse_abcd(m)?),
            (None, Some(s), None) => Some(parse_sr(s)?.to_ray()),
            (None, None, Some(e)) => Some(e.parse::<Elementary>()?.to_matrix()?),
            (None, None, None) => None,
            _ => return Err(usage("give at most one of --matrix, --sr, --elementary")),
        };
        let grid = match &a.grid {
            Some(g) => parse_grid(g)?,
            None => default_grid,
        };
        let fock_dim = a.fock_dim.unwrap_or(DEFAULT_DIM);
        if fock_dim < 2 {
            return Err(usage("--fock-dim must be at least 2"));
        }
        Ok(RunConfig {
            state,
            matrix,
            grid,
            fock_dim,
            out: a.out.clone(),
            route: a.route.clone(),
            seed: a.seed,
            json: a.json,
        })
    }

    fn require_state(&self) -> Result<&StateSource> {
        self.state
            .as_ref()
            .ok_or_else(|| usage("a state is required: use --state or --state-file"))
    }

    fn require_matrix(&self) -> Result<RayMatrix> {
        self.matrix
            .ok_or_else(|| usage("a matrix is required: use --matrix, --sr or --elementary"))
    }

    /// The state sampled on the configured grid.
    pub fn wavefunction(&self) -> Result<GridWavefunction> {
        match self.require_state()? {
            StateSource::Spec(spec) => {
                spec.validate(None)?;
                make_state_grid(spec, &self.grid)
            }
            StateSource::File(p) => load_state_file(p, &self.grid),
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn numbers(text: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?} in {what}")))
        })
        .collect::<Result<_>>()?;
    if v.len() != count {
        return Err(Error::Parse(format!("{what} needs {count} comma-separated numbers, got {}", v.len())));
    }
    Ok(v)
}

/// `A,B,C,D`, validated for unimodularity.
pub fn parse_abcd(text: &str) -> Result<RayMatrix> {
    let v = numbers(text, 4, "matrix")?;
    RayMatrix::new(v[0], v[1], v[2], v[3])
}

/// `Re s,Im s,Re r,Im r`.
pub fn parse_sr(text: &str) -> Result<SrPair> {
    let v = numbers(text, 4, "(s, r)")?;
    SrPair::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
}

/// `L,n`.
pub fn parse_grid(text: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [l, n] = parts.as_slice() else {
        return Err(Error::Parse(format!("grid must be L,n, got {text:?}")));
    };
    let l = l.parse::<f64>().map_err(|_| Error::Parse(format!("bad half-width {l:?}")))?;
    let n = n.parse::<usize>().map_err(|_| Error::Parse(format!("bad point count {n:?}")))?;
    GridSpec::new(l, n)
}

/// A positional matrix for `compose`.
pub fn parse_matrix_spec(text: &str) -> Result<RayMatrix> {
    if let Some(rest) = text.strip_prefix("sr:") {
        return Ok(parse_sr(rest)?.to_ray());
    }
    if let Some(rest) = text.strip_prefix("abcd:") {
        return parse_abcd(rest);
    }
    if text.starts_with(|c: char| c.is_ascii_alphabetic()) {
        return text.parse::<Elementary>()?.to_matrix();
    }
    parse_abcd(text)
}

/// Outcome of a subcommand: the exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Wigner(a) => cmd_wigner(&a),
        Command::Tomogram(a) => cmd_tomogram(&a),
        Command::Radon(a) => cmd_radon(&a),
        Command::FresnelApply(a) => cmd_fresnel_apply(&a),
        Command::Compose(a) => cmd_compose(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Reconstruct(a) => cmd_reconstruct(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn open_out(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes `summary` to stdout as JSON or as `key: value` lines.
fn print_summary(cfg_json: bool, summary: &serde_json::Value) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if cfg_json {
        serde_json::to_writer_pretty(&mut out, summary)?;
        writeln!(out)?;
    } else if let Some(map) = summary.as_object() {
        for (k, v) in map {
            writeln!(out, "{k}: {v}")?;
        }
    }
    Ok(())
}

fn with_stdout(f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    f(&mut lock)?;
    lock.flush()?;
    Ok(())
}

fn write_wigner(w: &WignerGrid, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e == "bin") {
        write_wigner_binary(w, path)
    } else {
        write_wigner_csv(w, open_out(path)?)
    }
}

pub fn cmd_wigner(a: &CommonArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(a, GridSpec::default())?;
    let w = wigner(&cfg.wavefunction()?)?;
    let (j, k) = w.argmax();
    let g = w.grid();
    let norm = w.normalization();
    let summary = json!({
        "normalization": norm,
        "min": w.min(),
        "max": w.max(),
        "argmax": [g.x(j), g.x(k)],
    });
    match &cfg.out {
        Some(p) => {
            write_wigner(&w, p)?;
            print_summary(cfg.json, &summary)?;
        }
        None => {
            with_stdout(|o| write_wigner_csv(&w, o))?;
            eprintln!("{summary}");
        }
    }
    if (norm - 1.0).abs() > 1e-6 {
        eprintln!("normalization {norm} differs from 1 by more than 1e-6");
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn emit_tomogram(cfg: &RunConfig, curve: &TomogramCurve, trailer: Option<String>, summary: serde_json::Value) -> Result<()> {
    let write = |o: &mut dyn Write| -> Result<()> {
        write_tomogram_csv(curve, &mut *o)?;
        if let Some(t) = &trailer {
            writeln!(o, "{t}")?;
        }
        Ok(())
    };
    match &cfg.out {
        Some(p) => {
            let mut f = open_out(p)?;
            write(&mut f)?;
            f.flush()?;
            print_summary(cfg.json, &summary)
        }
        None => {
            with_stdout(write)?;
            eprintln!("{summary}");
            Ok(())
        }
    }
}

pub fn cmd_tomogram(a: &TomogramArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(&a.common, GridSpec::default())?;
    let m = cfg.require_matrix()?;
    let psi = cfg.wavefunction()?;
    let route = cfg.route.as_deref().unwrap_or("fresnel");
    let (curve, deviation) = match route {
        "fresnel" => (tomogram_via_fresnel(&psi, &m, a.mode)?, None),
        "radon" => (radon(&wigner(&psi)?, &m, &psi.grid().xs(), a.mode)?, None),
        "both" => {
            let f = tomogram_via_fresnel(&psi, &m, a.mode)?;
            let r = radon(&wigner(&psi)?, &m, f.abscissas(), a.mode)?;
            let d = f.max_abs_diff(&r);
            (f, Some(d))
        }
        other => return Err(usage(format!("tomogram --route must be fresnel, radon or both, got {other:?}"))),
    };
    let summary = json!({
        "route": route,
        "mode": a.mode.to_string(),
        "matrix": m.entries(),
        "integral": curve.integral(),
        "mean": curve.mean(),
        "variance": curve.variance(),
        "max_deviation": deviation,
    });
    emit_tomogram(&cfg, &curve, deviation.map(|d| format!("# max_deviation={d:e}")), summary)?;
    match deviation {
        Some(d) if !(d <= a.tolerance) => {
            eprintln!("fresnel and radon routes differ by {d:e} > {:e}", a.tolerance);
            Ok(EXIT_CHECK_FAILED)
        }
        _ => Ok(EXIT_OK),
    }
}

pub fn cmd_radon(a: &RadonArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(&a.common, GridSpec::default())?;
    let psi = cfg.wavefunction()?;
    let w = wigner(&psi)?;
    if let Some(m) = a.angles {
        let dir = cfg
            .out
            .as_ref()
            .ok_or_else(|| usage("--angles writes a sinogram directory; give it with --out"))?;
        let curves = rotation_sinogram(&w, m, &psi.grid().xs())?;
        write_sinogram(&curves, dir)?;
        print_summary(cfg.json, &json!({ "angles": m, "directory": dir }))?;
        return Ok(EXIT_OK);
    }
    let m = cfg.require_matrix()?;
    let curve = radon(&w, &m, &psi.grid().xs(), a.mode)?;
    let summary = json!({
        "mode": a.mode.to_string(),
        "matrix": m.entries(),
        "integral": curve.integral(),
        "mean": curve.mean(),
        "variance": curve.variance(),
    });
    emit_tomogram(&cfg, &curve, None, summary)?;
    Ok(EXIT_OK)
}

fn parse_transform_route(text: Option<&str>) -> Result<Option<TransformRoute>> {
    Ok(match text {
        None | Some("auto") => None,
        Some("dense") => Some(TransformRoute::Dense),
        Some("degenerate") => Some(TransformRoute::Degenerate),
        Some("factorized") => Some(TransformRoute::Factorized),
        Some(other) => {
            return Err(usage(format!(
                "fresnel-apply --route must be auto, dense, degenerate or factorized, got {other:?}"
            )))
        }
    })
}

pub fn cmd_fresnel_apply(a: &ApplyArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(&a.common, GridSpec::default())?;
    let m = cfg.require_matrix()?;
    if a.fock {
        let StateSource::Spec(spec) = cfg.require_state()? else {
            return Err(usage("--fock needs a --state spec"));
        };
        spec.validate(Some(cfg.fock_dim))?;
        let v = make_state_fock(spec, cfg.fock_dim)?;
        let out = fresnel_operator(&m.to_sr(), cfg.fock_dim)?.apply(&v)?;
        let summary = json!({
            "matrix": m.entries(),
            "norm": out.norm(),
            "truncation_loss": out.truncation_loss(),
        });
        match &cfg.out {
            Some(p) => {
                write_json(&out, open_out(p)?)?;
                print_summary(cfg.json, &summary)?;
            }
            None => with_stdout(|o| write_json(&out, o))?,
        }
        return Ok(EXIT_OK);
    }
    let psi = cfg.wavefunction()?;
    if m.b().abs() <= crate::gridtransform::EPS_B && cfg.route.as_deref() == Some("dense") {
        return Err(usage("the dense route needs B != 0"));
    }
    let out = match parse_transform_route(cfg.route.as_deref())? {
        Some(r) => fresnel_transform_via(&m, &psi, r),
        None => fresnel_transform(&m, &psi),
    };
    let summary = json!({
        "matrix": m.entries(),
        "norm": out.norm_sqr(),
        "edge_amplitude": out.edge_amplitude(),
    });
    match &cfg.out {
        Some(p) => {
            if p.extension().is_some_and(|e| e == "json") {
                write_wavefunction_json(&out, open_out(p)?)?;
            } else {
                write_wavefunction_csv(&out, open_out(p)?)?;
            }
            print_summary(cfg.json, &summary)?;
        }
        None => {
            with_stdout(|o| write_wavefunction_csv(&out, o))?;
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Composition {
    matrix: [f64; 4],
    s: Complex64,
    r: Complex64,
    chart_mismatch: f64,
}

pub fn cmd_compose(a: &ComposeArgs) -> Result<i32> {
    let ms: Vec<RayMatrix> = a.specs.iter().map(|s| parse_matrix_spec(s)).collect::<Result<_>>()?;
    let product = ms.iter().skip(1).fold(ms[0], |acc, m| acc * *m);
    let chart = ms
        .iter()
        .skip(1)
        .fold(ms[0].to_sr(), |acc, m| acc.compose(&m.to_sr()));
    let mismatch = chart.max_abs_diff(&product.to_sr());
    let result = Composition {
        matrix: product.entries(),
        s: chart.s(),
        r: chart.r(),
        chart_mismatch: mismatch,
    };
    if let Some(p) = &a.out {
        write_json(&result, open_out(p)?)?;
    }
    if a.json {
        with_stdout(|o| {
            write_json(&result, &mut *o)?;
            writeln!(o)?;
            Ok(())
        })?;
    } else {
        let [aa, b, c, d] = result.matrix;
        println!("A,B,C,D: {aa},{b},{c},{d}");
        println!("s: {}", result.s);
        println!("r: {}", result.r);
        println!("chart mismatch: {mismatch:e}");
    }
    if mismatch > 1e-10 {
        eprintln!("(s, r) composition disagrees with the matrix product by {mismatch:e}");
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(&a.common, GridSpec::default())?;
    let defaults = VerifyConfig::default();
    let vc = VerifyConfig {
        grid: cfg.grid,
        fock_dim: cfg.fock_dim,
        seed: cfg.seed.unwrap_or(defaults.seed),
        matrices: a.matrices,
        tolerance_scale: a.tolerance_scale,
    };
    let report = verify::run(&vc)?;
    for c in &report.checks {
        for w in &c.warnings {
            log::warn!("{}: {w}", c.check);
        }
    }
    if let Some(p) = &cfg.out {
        write_json(&report, open_out(p)?)?;
    }
    if cfg.json {
        with_stdout(|o| {
            write_json(&report, &mut *o)?;
            writeln!(o)?;
            Ok(())
        })?;
    } else {
        for c in &report.checks {
            println!(
                "{:<22} {:>12.3e} <= {:<9.1e} {}{}",
                c.check,
                c.value,
                c.tolerance,
                if c.pass { "pass" } else { "FAIL" },
                if c.degraded { " (degraded)" } else { "" }
            );
        }
    }
    if report.all_pass() {
        Ok(EXIT_OK)
    } else {
        for c in report.failures() {
            eprintln!("failed: {} = {:e} (tolerance {:e})", c.check, c.value, c.tolerance);
        }
        Ok(EXIT_CHECK_FAILED)
    }
}

pub fn cmd_reconstruct(a: &ReconstructArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(&a.common, reconstruction_grid())?;
    let psi = cfg.wavefunction()?;
    let w = wigner(&psi)?;
    let sino = rotation_sinogram(&w, a.angles, &psi.grid().xs())?;
    let rec = inverse_radon_fbp(&sino, &psi.grid())?;
    let err = rec.max_abs_diff(&w);
    let summary = json!({
        "angles": a.angles,
        "linf_error": err,
        "center": rec.value_at(0.0, 0.0),
        "normalization": rec.normalization(),
    });
    match &cfg.out {
        Some(p) => {
            write_wigner(&rec, p)?;
            print_summary(cfg.json, &summary)?;
        }
        None => {
            with_stdout(|o| write_wigner_csv(&rec, o))?;
            eprintln!("{summary}");
        }
    }
    match a.tolerance {
        Some(t) if !(err <= t) => {
            eprintln!("reconstruction error {err:e} exceeds {t:e}");
            Ok(EXIT_CHECK_FAILED)
        }
        _ => Ok(EXIT_OK),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_specs() {
        assert_eq!(parse_matrix_spec("1,2,0,1").unwrap(), RayMatrix::new(1.0, 2.0, 0.0, 1.0).unwrap());
        assert_eq!(
            parse_matrix_spec("free:2").unwrap(),
            RayMatrix::new(1.0, 2.0, 0.0, 1.0).unwrap()
        );
        let sr = parse_matrix_spec("sr:1,0,0,0").unwrap();
        assert!(sr.max_abs_diff(&RayMatrix::IDENTITY) < 1e-15);
        assert!(parse_matrix_spec("1,0,0,2").is_err());
        assert!(parse_matrix_spec("1,0,0").is_err());
        assert!(parse_matrix_spec("warp:1").is_err());
        assert_eq!(parse_matrix_spec("abcd:-1,0,0,-1").unwrap(), RayMatrix::new(-1.0, 0.0, 0.0, -1.0).unwrap());
    }

    #[test]
    fn grid_and_sr_parsing() {
        let g = parse_grid("6, 129").unwrap();
        assert_eq!((g.half_width(), g.len()), (6.0, 129));
        assert!(parse_grid("6").is_err());
        assert!(parse_grid("-1,10").is_err());
        assert!(parse_sr("2,0,0,0").is_err());
    }

    #[test]
    fn one_state_source() {
        let mut a = CommonArgs {
            state: Some("vacuum".into()),
            state_file: Some("x.json".into()),
            matrix: None,
            sr: None,
            elementary: None,
            grid: None,
            fock_dim: None,
            out: None,
            route: None,
            seed: None,
            json: false,
        };
        assert!(RunConfig::from_args(&a, GridSpec::default()).is_err());
        a.state_file = None;
        let cfg = RunConfig::from_args(&a, GridSpec::default()).unwrap();
        assert_eq!(cfg.state, Some(StateSource::Spec(StateSpec::Vacuum)));
        assert!(cfg.require_matrix().is_err());
        a.matrix = Some("1,0,0,1".into());
        a.elementary = Some("free:1".into());
        assert!(RunConfig::from_args(&a, GridSpec::default()).is_err());
    }
}

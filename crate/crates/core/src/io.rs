//! File formats.
//!
//! - Wavefunction CSV: header `x,re,im`, one row per grid point.
//! - Wavefunction JSON: `{"L": .., "n": .., "samples": [[re, im], ...]}`.
//! - Wigner CSV: header `x,p,W`, `x` outer, `p` inner.
//! - Wigner binary: row-major little-endian `f64`, sidecar `<file>.json` with `{"L", "n"}`.
//! - Tomogram CSV: a `# mode=<position|momentum> A=.. B=.. C=.. D=..` line, then
//!   header `x,t` (position) or `p,t` (momentum).
//! - Sinogram bundle: a directory with `manifest.json` and one tomogram CSV per curve.
//! - Fock vectors and operators: JSON via serde.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridtransform::{GridSpec, GridWavefunction};
use crate::phasespace::{Quadrature, TomogramCurve, WignerGrid};
use crate::states::{make_state_grid, StateSpec};
use crate::symplectic::RayMatrix;

pub fn write_json<T: Serialize>(value: &T, w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(w, value)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(r: impl Read) -> Result<T> {
    Ok(serde_json::from_reader(r)?)
}

#[derive(Serialize, Deserialize)]
struct WavefunctionJson {
    #[serde(flatten)]
    grid: GridSpec,
    samples: Vec<Complex64>,
}

pub fn write_wavefunction_json(psi: &GridWavefunction, w: impl Write) -> Result<()> {
    let doc = WavefunctionJson {
        grid: psi.grid(),
        samples: psi.samples().to_vec(),
    };
    write_json(&doc, w)
}

pub fn read_wavefunction_json(r: impl Read) -> Result<GridWavefunction> {
    let doc: WavefunctionJson = read_json(r)?;
    let grid = GridSpec::new(doc.grid.half_width(), doc.grid.len())?;
    GridWavefunction::new(grid, doc.samples)
}

pub fn write_wavefunction_csv(psi: &GridWavefunction, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "re", "im"])?;
    let g = psi.grid();
    for (j, v) in psi.samples().iter().enumerate() {
        out.serialize((g.x(j), v.re, v.im))?;
    }
    out.flush()?;
    Ok(())
}

/// Recovers the grid from the `x` column, which must be uniform and symmetric.
pub fn read_wavefunction_csv(r: impl Read) -> Result<GridWavefunction> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut xs = Vec::new();
    let mut samples = Vec::new();
    for row in rdr.deserialize() {
        let (x, re, im): (f64, f64, f64) = row?;
        xs.push(x);
        samples.push(Complex64::new(re, im));
    }
    let grid = infer_grid(&xs)?;
    GridWavefunction::new(grid, samples)
}

fn infer_grid(xs: &[f64]) -> Result<GridSpec> {
    if xs.len() < 8 {
        return Err(Error::Parse(format!("need at least 8 grid points, got {}", xs.len())));
    }
    let l = xs[xs.len() - 1];
    let grid = GridSpec::new(l, xs.len())?;
    let tol = 1e-9 * l.max(1.0);
    if xs.iter().enumerate().any(|(j, x)| (x - grid.x(j)).abs() > tol) {
        return Err(Error::Parse("x column is not a uniform symmetric grid -L..L".into()));
    }
    Ok(grid)
}

pub fn write_wigner_csv(w: &WignerGrid, out: impl Write) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["x", "p", "W"])?;
    let g = w.grid();
    let n = g.len();
    for (i, v) in w.values().iter().enumerate() {
        wr.serialize((g.x(i / n), g.x(i % n), v))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_wigner_csv(r: impl Read) -> Result<WignerGrid> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for row in rdr.deserialize() {
        let (x, _p, v): (f64, f64, f64) = row?;
        if xs.last() != Some(&x) {
            xs.push(x);
        }
        values.push(v);
    }
    WignerGrid::new(infer_grid(&xs)?, values)
}

/// Path of the JSON sidecar next to a binary Wigner file.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_wigner_binary(w: &WignerGrid, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(8 * w.values().len());
    for v in w.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    write_json(&w.grid(), fs::File::create(sidecar_path(path))?)
}

pub fn read_wigner_binary(path: &Path) -> Result<WignerGrid> {
    let grid: GridSpec = read_json(fs::File::open(sidecar_path(path))?)?;
    let grid = GridSpec::new(grid.half_width(), grid.len())?;
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Parse("binary Wigner file length is not a multiple of 8".into()));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    WignerGrid::new(grid, values)
}

fn abscissa_name(mode: Quadrature) -> &'static str {
    match mode {
        Quadrature::Position => "x",
        Quadrature::Momentum => "p",
    }
}

pub fn write_tomogram_csv(curve: &TomogramCurve, mut out: impl Write) -> Result<()> {
    let [a, b, c, d] = curve.matrix().entries();
    writeln!(out, "# mode={} A={a} B={b} C={c} D={d}", curve.mode())?;
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record([abscissa_name(curve.mode()), "t"])?;
    for (x, t) in curve.abscissas().iter().zip(curve.values()) {
        wr.serialize((x, t))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_tomogram_csv(mut r: impl Read) -> Result<TomogramCurve> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let (first, rest) = text
        .split_once('\n')
        .ok_or_else(|| Error::Parse("empty tomogram file".into()))?;
    let meta = first
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("tomogram file must start with a '# mode=..' line".into()))?;
    let mut mode = None;
    let mut abcd = [None; 4];
    for tok in meta.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token {tok:?}")))?;
        let num = || v.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {v:?}")));
        match k {
            "mode" => mode = Some(v.parse::<Quadrature>()?),
            "A" => abcd[0] = Some(num()?),
            "B" => abcd[1] = Some(num()?),
            "C" => abcd[2] = Some(num()?),
            "D" => abcd[3] = Some(num()?),
            _ => {}
        }
    }
    let mode = mode.ok_or_else(|| Error::Parse("tomogram header lacks mode".into()))?;
    let [Some(a), Some(b), Some(c), Some(d)] = abcd else {
        return Err(Error::Parse("tomogram header lacks A, B, C or D".into()));
    };
    let matrix = RayMatrix::new(a, b, c, d)?;
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let mut xs = Vec::new();
    let mut ts = Vec::new();
    for row in rdr.deserialize() {
        let (x, t): (f64, f64) = row?;
        xs.push(x);
        ts.push(t);
    }
    TomogramCurve::new(xs, ts, matrix, mode)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SinogramEntry {
    pub file: String,
    pub matrix: RayMatrix,
    pub mode: Quadrature,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SinogramManifest {
    pub curves: Vec<SinogramEntry>,
}

/// Writes `manifest.json` and `curve_NNN.csv` files into `dir` (created if needed).
pub fn write_sinogram(curves: &[TomogramCurve], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(curves.len());
    for (i, c) in curves.iter().enumerate() {
        let file = format!("curve_{i:03}.csv");
        write_tomogram_csv(c, fs::File::create(dir.join(&file))?)?;
        entries.push(SinogramEntry {
            file,
            matrix: c.matrix(),
            mode: c.mode(),
        });
    }
    write_json(
        &SinogramManifest { curves: entries },
        fs::File::create(dir.join("manifest.json"))?,
    )
}

pub fn read_sinogram(dir: &Path) -> Result<Vec<TomogramCurve>> {
    let manifest: SinogramManifest = read_json(fs::File::open(dir.join("manifest.json"))?)?;
    manifest
        .curves
        .iter()
        .map(|e| {
            let c = read_tomogram_csv(fs::File::open(dir.join(&e.file))?)?;
            if c.matrix() != e.matrix || c.mode() != e.mode {
                return Err(Error::Parse(format!("{} disagrees with the manifest", e.file)));
            }
            Ok(c)
        })
        .collect()
}

/// Loads a state file: a [`StateSpec`] JSON, a wavefunction JSON, or a
/// wavefunction CSV. Specs are sampled on `grid`; stored wavefunctions keep
/// their own grid.
pub fn load_state_file(path: &Path, grid: &GridSpec) -> Result<GridWavefunction> {
    let text = fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(trimmed)?;
        if value.get("kind").is_some() {
            let spec: StateSpec = serde_json::from_value(value)?;
            return make_state_grid(&spec, grid);
        }
        return read_wavefunction_json(trimmed.as_bytes());
    }
    read_wavefunction_csv(trimmed.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{FockOperator, FockVector};
    use crate::symplectic::Elementary;

    fn sample_state() -> GridWavefunction {
        let grid = GridSpec::new(6.0, 33).unwrap();
        make_state_grid(&"coherent:0.5,0.2".parse().unwrap(), &grid).unwrap()
    }

    #[test]
    fn wavefunction_round_trips() {
        let psi = sample_state();
        let mut buf = Vec::new();
        write_wavefunction_csv(&psi, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("x,re,im\n"));
        assert_eq!(read_wavefunction_csv(buf.as_slice()).unwrap(), psi);

        let mut buf = Vec::new();
        write_wavefunction_json(&psi, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"L\"") && text.contains("\"n\""));
        assert_eq!(read_wavefunction_json(text.as_bytes()).unwrap(), psi);
    }

    #[test]
    fn wigner_round_trips() {
        let g = GridSpec::new(3.0, 9).unwrap();
        let w = WignerGrid::from_fn(g, |x, p| x - 2.0 * p);
        let mut buf = Vec::new();
        write_wigner_csv(&w, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("x,p,W\n"));
        assert_eq!(read_wigner_csv(buf.as_slice()).unwrap(), w);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.bin");
        write_wigner_binary(&w, &path).unwrap();
        assert_eq!(fs::metadata(&path).unwrap().len(), 81 * 8);
        assert_eq!(read_wigner_binary(&path).unwrap(), w);
    }

    #[test]
    fn tomogram_and_sinogram_round_trips() {
        let m = Elementary::Rotation(0.3).to_matrix().unwrap();
        let c = TomogramCurve::new(vec![-1.0, 0.0, 1.0], vec![0.1, 0.5, 0.1], m, Quadrature::Momentum).unwrap();
        let mut buf = Vec::new();
        write_tomogram_csv(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# mode=momentum A="));
        assert!(text.lines().nth(1) == Some("p,t"));
        assert_eq!(read_tomogram_csv(text.as_bytes()).unwrap(), c);

        let dir = tempfile::tempdir().unwrap();
        write_sinogram(&[c.clone(), c.clone()], dir.path()).unwrap();
        assert_eq!(read_sinogram(dir.path()).unwrap(), vec![c.clone(), c]);
    }

    #[test]
    fn fock_json() {
        let v = FockVector::basis(1, 3).unwrap();
        let mut buf = Vec::new();
        write_json(&v, &mut buf).unwrap();
        assert_eq!(read_json::<FockVector>(buf.as_slice()).unwrap(), v);
        let op = FockOperator::identity(3);
        let mut buf = Vec::new();
        write_json(&op, &mut buf).unwrap();
        assert_eq!(read_json::<FockOperator>(buf.as_slice()).unwrap(), op);
    }

    #[test]
    fn state_files() {
        let dir = tempfile::tempdir().unwrap();
        let grid = GridSpec::new(6.0, 33).unwrap();
        let spec_path = dir.path().join("s.json");
        fs::write(&spec_path, r#"{"kind":"fock","n":1}"#).unwrap();
        let a = load_state_file(&spec_path, &grid).unwrap();
        assert_eq!(a, make_state_grid(&StateSpec::Fock { n: 1 }, &grid).unwrap());

        let psi = sample_state();
        let csv_path = dir.path().join("psi.csv");
        write_wavefunction_csv(&psi, fs::File::create(&csv_path).unwrap()).unwrap();
        assert_eq!(load_state_file(&csv_path, &GridSpec::default()).unwrap(), psi);

        let bad = dir.path().join("bad.csv");
        fs::write(&bad, "x,re,im\n0,1,0\n1,1,0\n").unwrap();
        assert!(load_state_file(&bad, &grid).is_err());
    }
}

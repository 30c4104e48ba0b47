//! File formats: the versioned state JSON, and the CSV schemas for sweeps,
//! Wigner grids and quadrature datasets.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::SweepRow;
use crate::fock::DensityMatrix;
use crate::measures::WignerGrid;
use crate::tomo::QuadratureDataset;

/// Version tag of the state JSON schema.
pub const STATE_FORMAT_VERSION: &str = "fockbench-state-v1";

#[derive(Serialize, Deserialize)]
struct StateJson {
    version: String,
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Serialize a state to the versioned JSON document. Floats are written in
/// shortest-round-trip decimal form, so load → save is byte identical.
pub fn state_to_json(rho: &DensityMatrix) -> String {
    let d = rho.dim();
    let row = |f: fn(Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..d)
            .map(|m| (0..d).map(|n| f(rho.entry(m, n))).collect())
            .collect()
    };
    let doc = StateJson {
        version: STATE_FORMAT_VERSION.to_string(),
        dim: d,
        re: row(|c| c.re),
        im: row(|c| c.im),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("state serialization cannot fail");
    s.push('\n');
    s
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let doc: StateJson = serde_json::from_str(text)?;
    if doc.version != STATE_FORMAT_VERSION {
        return Err(Error::FormatVersion {
            found: doc.version,
            expected: STATE_FORMAT_VERSION,
        });
    }
    if doc.dim < 1
        || doc.re.len() != doc.dim
        || doc.im.len() != doc.dim
        || doc.re.iter().any(|r| r.len() != doc.dim)
        || doc.im.iter().any(|r| r.len() != doc.dim)
    {
        return Err(Error::Parse(format!(
            "state matrix shape does not match dim = {}",
            doc.dim
        )));
    }
    let mat = DMatrix::from_fn(doc.dim, doc.dim, |m, n| {
        Complex64::new(doc.re[m][n], doc.im[m][n])
    });
    DensityMatrix::from_matrix(mat)
}

pub fn save_state(path: impl AsRef<Path>, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, state_to_json(rho))?;
    Ok(())
}

pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    state_from_json(&std::fs::read_to_string(path)?)
}

/// CSV schema `alpha,r,gamma,xi,eta,delta_nats,nu,click_weight`.
pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "alpha,r,gamma,xi,eta,delta_nats,nu,click_weight")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            row.alpha,
            row.r,
            row.gamma,
            row.xi,
            row.eta,
            row.delta_nats,
            row.nu,
            row.click_weight
        )?;
    }
    Ok(())
}

/// CSV schema `x,p,w`, row-major over x then p.
pub fn write_wigner_csv<W: Write>(mut w: W, grid: &WignerGrid) -> Result<()> {
    writeln!(w, "x,p,w")?;
    for (ix, &x) in grid.xs.iter().enumerate() {
        for (ip, &p) in grid.ps.iter().enumerate() {
            writeln!(w, "{},{},{}", x, p, grid.values[ix][ip])?;
        }
    }
    Ok(())
}

/// CSV schema `bin,phase_rad,x`.
pub fn write_dataset_csv<W: Write>(mut w: W, data: &QuadratureDataset) -> Result<()> {
    writeln!(w, "bin,phase_rad,x")?;
    let phases = data.phases();
    for &(b, x) in data.samples() {
        writeln!(w, "{},{},{}", b, phases[b], x)?;
    }
    Ok(())
}

/// Parse a dataset CSV. The bin count is inferred from the largest bin index;
/// recorded phases must match the uniform `b·π/B` convention.
pub fn read_dataset_csv<R: Read>(r: R) -> Result<QuadratureDataset> {
    let reader = BufReader::new(r);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty dataset file".into()))??;
    if header.trim() != "bin,phase_rad,x" {
        return Err(Error::Parse(format!(
            "unexpected dataset header {header:?} (expected \"bin,phase_rad,x\")"
        )));
    }
    let mut rows: Vec<(usize, f64, f64)> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let parse_err = || Error::Parse(format!("malformed dataset row {}", lineno + 2));
        let b: usize = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(parse_err)?;
        let phase: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(parse_err)?;
        let x: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(parse_err)?;
        rows.push((b, phase, x));
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n_bins = rows.iter().map(|&(b, _, _)| b).max().unwrap() + 1;
    for &(b, phase, _) in &rows {
        let expect = b as f64 * std::f64::consts::PI / n_bins as f64;
        if (phase - expect).abs() > 1e-9 {
            return Err(Error::Parse(format!(
                "bin {b} phase {phase} does not match the uniform convention {expect}"
            )));
        }
    }
    QuadratureDataset::new(rows.into_iter().map(|(b, _, x)| (b, x)).collect(), n_bins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, displace};
    use crate::tomo::sample_quadratures;

    #[test]
    fn state_round_trip_is_byte_identical() {
        let (s, _) = coherent_state(Complex64::new(0.8, 0.0), 12).unwrap();
        let rho = DensityMatrix::from_pure(&s).unwrap();
        // entries with both signs and both components
        let rho = displace(&rho, Complex64::new(-0.13, 0.27));
        let text = state_to_json(&rho);
        let back = state_from_json(&text).unwrap();
        assert_eq!(state_to_json(&back), text);
        assert!((back.matrix() - rho.matrix()).norm() == 0.0);
    }

    #[test]
    fn state_version_is_checked() {
        let text = state_to_json(&DensityMatrix::vacuum(3).unwrap());
        let bad = text.replace(STATE_FORMAT_VERSION, "fockbench-state-v0");
        assert!(matches!(
            state_from_json(&bad),
            Err(Error::FormatVersion { .. })
        ));
    }

    #[test]
    fn state_shape_is_checked() {
        let text = state_to_json(&DensityMatrix::vacuum(3).unwrap());
        let bad = text.replacen("\"dim\": 3", "\"dim\": 4", 1);
        assert!(state_from_json(&bad).is_err());
    }

    #[test]
    fn dataset_round_trip() {
        let rho = DensityMatrix::fock(1, 8).unwrap();
        let data = sample_quadratures(&rho, 500, 12, 99).unwrap();
        let mut buf = Vec::new();
        write_dataset_csv(&mut buf, &data).unwrap();
        let back = read_dataset_csv(buf.as_slice()).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn dataset_rejects_garbage() {
        assert!(read_dataset_csv("nope".as_bytes()).is_err());
        assert!(matches!(
            read_dataset_csv("bin,phase_rad,x\n".as_bytes()),
            Err(Error::EmptyDataset)
        ));
        assert!(read_dataset_csv("bin,phase_rad,x\n0,0.5,1.0\n".as_bytes()).is_err());
    }
}

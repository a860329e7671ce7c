//! CSV and JSON export with atomic replacement of the target file.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::Result;
use crate::scalar::Real;
use crate::spectra::SpectrumSample;
use crate::twophoton::{Landscape, CHANNELS};

/// Twelve significant digits in scientific notation; missing values are empty.
pub fn format_value(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.11e}"),
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

/// Writes `path` through a temporary file in the same directory, so that
/// readers never see a partial file.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// CSV rows with a header, written atomically.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<Option<f64>>]) -> Result<()> {
    write_atomic(path, |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(header)?;
        for row in rows {
            out.write_record(row.iter().map(|v| format_value(*v)))?;
        }
        out.flush()?;
        Ok(())
    })
}

/// Spectrum CSV with header `varpi,omega,S`.
pub fn write_spectrum_csv<T: Real>(path: &Path, samples: &[SpectrumSample<T>]) -> Result<()> {
    let rows: Vec<Vec<Option<f64>>> = samples
        .iter()
        .map(|s| vec![Some(s.varpi.as_f64()), Some(s.omega.as_f64()), Some(s.value.as_f64())])
        .collect();
    write_table(path, &["varpi", "omega", "S"], &rows)
}

/// Landscape CSV with header `varpi1,varpi2,g2,I0,I1,I2,R,B,S`, `ϖ₁` slow.
pub fn write_landscape_csv<T: Real>(path: &Path, l: &Landscape<T>) -> Result<()> {
    let mut header = vec!["varpi1", "varpi2"];
    header.extend(CHANNELS);
    let n2 = l.varpi2_grid.len();
    let mut rows = Vec::with_capacity(l.varpi1_grid.len() * n2);
    for (i, x) in l.varpi1_grid.iter().enumerate() {
        for (j, y) in l.varpi2_grid.iter().enumerate() {
            let mut row = vec![Some(x.as_f64()), Some(y.as_f64())];
            row.extend(CHANNELS.iter().map(|c| l.get(c, i, j).map(|v| v.as_f64())));
            rows.push(row);
        }
    }
    write_table(path, &header, &rows)
}

/// Pretty-printed JSON, written atomically.
pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

/// Sidecar path `<out>.json` next to a CSV output.
pub fn sidecar_path(out: &Path) -> std::path::PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_value(Some(0.1)), "1.00000000000e-1");
        assert_eq!(format_value(Some(-123456.7890123456)), "-1.23456789012e5");
        assert_eq!(format_value(None), "");
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_partial_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        write_table(&p, &["a"], &[vec![Some(1.0)]]).unwrap();
        let failed = write_atomic(&p, |_| Err(crate::Error::Config("boom".into())));
        assert!(failed.is_err());
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a\n1.00000000000e0\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}

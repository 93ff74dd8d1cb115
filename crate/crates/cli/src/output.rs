use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use isowave::hamlab::Domain;
use isowave::WaveactionSpectrum;
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// Seventeen significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Artifact directory of one run.
pub struct OutputDir {
    root: PathBuf,
    artifacts: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn artifacts(&self) -> &[String] {
        &self.artifacts
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.artifacts.push(name.to_string());
        self.root.join(name)
    }

    pub fn csv(&mut self, name: &str, header: &[&str]) -> Result<CsvTable, CliError> {
        let path = self.path(name);
        let writer = csv::Writer::from_path(&path).map_err(|e| CliError::io(&path, e.into()))?;
        let mut t = CsvTable {
            writer,
            path,
            width: header.len(),
        };
        t.write(header.iter().map(|s| s.to_string()).collect())?;
        Ok(t)
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.path(name);
        fs::write(&path, body).map_err(|e| CliError::io(&path, e))
    }

    /// Grid axes, then one line of values per k node.
    pub fn spectrum_snapshot(
        &mut self,
        name: &str,
        t: f64,
        s: &WaveactionSpectrum,
    ) -> Result<(), CliError> {
        let g = s.grid();
        let mut body = format!("t,{}\n", fmt17(t));
        body += &axis_line("k_axis", g.k_axis());
        body += &axis_line("m_axis", g.m_axis());
        for i in 0..g.nk() {
            let row: Vec<f64> = (0..g.nm()).map(|j| s.value(i, j)).collect();
            body += &values_line(&row);
        }
        self.text(name, &body)
    }

    /// Axes, then one line of ρ values per (x, y) column in storage order.
    pub fn field_snapshot(
        &mut self,
        name: &str,
        t: f64,
        domain: &Domain,
        field: &[f64],
    ) -> Result<(), CliError> {
        let n = domain.n();
        let len = domain.len();
        let coords =
            |a: usize| -> Vec<f64> { (0..n[a]).map(|i| i as f64 * len[a] / n[a] as f64).collect() };
        let mut body = format!("t,{}\n", fmt17(t));
        body += &axis_line("x_axis", &coords(0));
        body += &axis_line("y_axis", &coords(1));
        body += &axis_line("rho_axis", &coords(2));
        for col in field.chunks(n[2]) {
            body += &values_line(col);
        }
        self.text(name, &body)
    }

    pub fn manifest(&mut self, manifest: &Manifest) -> Result<(), CliError> {
        let body = toml::to_string(manifest)
            .map_err(|e| CliError::Compute(format!("manifest serialization: {e}")))?;
        let path = self.root.join("manifest.toml");
        fs::write(&path, body).map_err(|e| CliError::io(&path, e))
    }
}

fn axis_line(name: &str, axis: &[f64]) -> String {
    let mut s = name.to_string();
    for v in axis {
        s.push(',');
        s += &fmt17(*v);
    }
    s.push('\n');
    s
}

fn values_line(values: &[f64]) -> String {
    let mut s = values
        .iter()
        .map(|v| fmt17(*v))
        .collect::<Vec<_>>()
        .join(",");
    s.push('\n');
    s
}

pub struct CsvTable {
    writer: csv::Writer<fs::File>,
    path: PathBuf,
    width: usize,
}

impl CsvTable {
    fn write(&mut self, row: Vec<String>) -> Result<(), CliError> {
        debug_assert_eq!(row.len(), self.width);
        self.writer
            .write_record(&row)
            .map_err(|e| CliError::io(&self.path, e.into()))
    }

    pub fn row(&mut self, values: &[f64]) -> Result<(), CliError> {
        self.write(values.iter().map(|v| fmt17(*v)).collect())
    }

    /// Leading text cell followed by numbers.
    pub fn labelled(&mut self, label: &str, values: &[f64]) -> Result<(), CliError> {
        let mut row = vec![label.to_string()];
        row.extend(values.iter().map(|v| fmt17(*v)));
        self.write(row)
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub version: String,
    pub scenario: String,
    pub threads: usize,
    pub artifacts: Vec<String>,
    pub summary: BTreeMap<String, toml::Value>,
    pub config: RunConfig,
}

/// Writes `error.txt` into `dir`, creating it if needed.
pub fn write_diagnostic(dir: &Path, err: &CliError) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = fs::File::create(dir.join("error.txt"))?;
    writeln!(f, "isowave {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(f, "exit status: {}", err.exit_code())?;
    writeln!(f, "{err}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::propagator::{Frame, Sample};

/// Collects files written for one experiment, all under one directory.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    fn path(&mut self, name: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        self.files.push(PathBuf::from(name));
        Ok(path)
    }

    /// Writes rows of serializable records with the given header.
    pub fn csv<R: Serialize>(&mut self, name: &str, header: &[&str], rows: &[R]) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(self.path(name)?)?;
        w.write_record(header)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Probability time series with columns `t, <first>, <second>`.
    pub fn series(&mut self, name: &str, columns: [&str; 2], samples: &[Sample]) -> Result<()> {
        let rows: Vec<(f64, f64, f64)> = samples.iter().map(|s| (s.t, s.first, s.second)).collect();
        self.csv(name, &["t", columns[0], columns[1]], &rows)
    }

    /// Numbered `|ψ|²` matrices, each with a TOML sidecar describing axes.
    pub fn frames(&mut self, stem: &str, frames: &[Frame], header: &FrameHeader) -> Result<()> {
        for (k, frame) in frames.iter().enumerate() {
            let name = format!("{stem}_{k:04}");
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_path(self.path(&format!("{name}.csv"))?)?;
            for row in frame.density.chunks(header.cols) {
                w.serialize(row)?;
            }
            w.flush()?;
            let sidecar = FrameSidecar {
                index: k,
                t: frame.t,
                header,
            };
            let text = toml::to_string(&sidecar)?;
            fs::write(self.path(&format!("{name}.toml"))?, text)?;
        }
        Ok(())
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<()> {
        fs::write(self.path(name)?, contents)?;
        Ok(())
    }
}

/// Axis description shared by all frames of a run. Rows run along
/// `row_axis`, columns along `col_axis`; a 1D run has one row.
#[derive(Debug, Clone, Serialize)]
pub struct FrameHeader {
    pub experiment: String,
    pub rows: usize,
    pub cols: usize,
    pub row_axis: String,
    pub row_range: (f64, f64),
    pub col_axis: String,
    pub col_range: (f64, f64),
    pub parameters: String,
}

#[derive(Serialize)]
struct FrameSidecar<'a> {
    index: usize,
    t: f64,
    #[serde(flatten)]
    header: &'a FrameHeader,
}

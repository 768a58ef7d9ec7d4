//! Report files. JSON is the source of truth; CSV and PNG are projections.

use std::io;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use weylgrid::{singular_values, GridFunction, OperatorMatrix};

use crate::plot::Plot;
use crate::Cli;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Png,
}

pub struct Artifacts {
    /// `<subcommand>-<family>-N<N>-seed<seed>`.
    pub stem: String,
    pub json: String,
    pub csv: Option<Vec<u8>>,
    pub plots: Vec<Plot>,
    pub pass: bool,
    pub summary: String,
}

impl Artifacts {
    pub fn new(cli: &Cli, subcommand: &str, family: &str, json: String, pass: bool) -> Self {
        Self {
            stem: format!("{subcommand}-{family}-N{}-seed{}", cli.grid_n, cli.seed),
            json,
            csv: None,
            plots: Vec::new(),
            pass,
            summary: String::new(),
        }
    }

    pub fn write(&self, dir: &Path, formats: &[Format]) -> io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if formats.contains(&Format::Json) {
            let path = dir.join(format!("{}.json", self.stem));
            std::fs::write(&path, format!("{}\n", self.json))?;
            written.push(path);
        }
        if let (true, Some(csv)) = (formats.contains(&Format::Csv), &self.csv) {
            let path = dir.join(format!("{}.csv", self.stem));
            std::fs::write(&path, csv)?;
            written.push(path);
        }
        if formats.contains(&Format::Png) {
            for p in &self.plots {
                let path = dir.join(format!("{}-{}.png", self.stem, p.suffix()));
                p.render(&path).map_err(|e| io::Error::other(e.to_string()))?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

pub fn csv_of<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

/// A matrix or grid function, row-major with the first index as the row.
#[derive(Serialize)]
pub struct Dump {
    pub object: String,
    pub member: String,
    pub grid_n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct Entry {
    i: usize,
    j: usize,
    re: f64,
    im: f64,
}

impl Dump {
    pub fn operator(member: &str, a: &OperatorMatrix) -> weylgrid::Result<Self> {
        let e = a.entries();
        let n = e.nrows();
        let values: Vec<_> = (0..n).flat_map(|i| (0..n).map(move |j| e[(i, j)])).collect();
        Ok(Self {
            object: "weyl".to_string(),
            member: member.to_string(),
            grid_n: n,
            re: values.iter().map(|v| v.re).collect(),
            im: values.iter().map(|v| v.im).collect(),
            singular_values: Some(singular_values(a)?.to_vec()),
        })
    }

    pub fn function(object: &str, member: &str, f: &GridFunction) -> Self {
        let v = f.values();
        Self {
            object: object.to_string(),
            member: member.to_string(),
            grid_n: f.grid().n(),
            re: v.iter().map(|c| c.re).collect(),
            im: v.iter().map(|c| c.im).collect(),
            singular_values: None,
        }
    }

    pub fn csv(&self) -> Result<Vec<u8>, csv::Error> {
        let n = self.grid_n;
        let rows: Vec<Entry> = (0..n * n)
            .map(|k| Entry {
                i: k / n,
                j: k % n,
                re: self.re[k],
                im: self.im[k],
            })
            .collect();
        csv_of(&rows)
    }
}

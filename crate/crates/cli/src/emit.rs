use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use fidsamp_core::inference::{interval, summarize, IntervalSpec};
use fidsamp_core::EmpiricalDistribution;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileRow {
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryBlock {
    pub mean: f64,
    pub sd: f64,
    pub quantiles: Vec<QuantileRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBlock {
    pub level: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: f64,
    pub weight: f64,
}

/// JSON document for a sampled cloud; `samples` is filled only in files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub model: String,
    pub params: std::collections::BTreeMap<String, f64>,
    pub seed: u64,
    pub n: usize,
    pub summary: SummaryBlock,
    pub interval: IntervalBlock,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Atom>>,
}

impl SummaryDoc {
    pub fn build(
        model: &str,
        params: &crate::registry::Params,
        seed: u64,
        d: &EmpiricalDistribution,
        level: f64,
    ) -> Result<Self, CliError> {
        if d.is_empty() {
            return Err(CliError::Usage("refusing to emit an empty cloud".into()));
        }
        let s = summarize(d)?;
        let iv = interval(d, &IntervalSpec::symmetric(level)?)?;
        Ok(Self {
            model: model.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            seed,
            n: d.len(),
            summary: SummaryBlock {
                mean: s.mean,
                sd: s.sd,
                quantiles: s.quantiles.into_iter().map(|(p, q)| QuantileRow { p, q }).collect(),
            },
            interval: IntervalBlock {
                level,
                lo: iv.lo,
                hi: iv.hi,
            },
            warnings: d.warnings().to_vec(),
            samples: None,
        })
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes the cloud to `path`: CSV rows `value,weight` in draw order, or the
/// summary document with every atom attached.
pub fn emit(
    d: &EmpiricalDistribution,
    doc: &SummaryDoc,
    format: Format,
    path: &Path,
) -> Result<(), CliError> {
    if d.is_empty() {
        return Err(CliError::Usage("refusing to emit an empty cloud".into()));
    }
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(BufWriter::new(file));
            w.write_record(["value", "weight"]).map_err(|e| io_error(path, e))?;
            for (v, wt) in d.iter() {
                w.serialize((v, wt)).map_err(|e| io_error(path, e))?;
            }
            w.flush().map_err(|e| io_error(path, e))?;
        }
        Format::Json => {
            let mut full = doc.clone();
            full.samples = Some(d.iter().map(|(&value, weight)| Atom { value, weight }).collect());
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, &full).map_err(|e| io_error(path, e))?;
            writeln!(w).map_err(|e| io_error(path, e))?;
            w.flush().map_err(|e| io_error(path, e))?;
        }
    }
    Ok(())
}

/// Reads a CSV written by [`emit`]. Equal weights give a uniform cloud, so
/// summaries of the re-read cloud match the original bit for bit.
pub fn read_csv(path: &Path) -> Result<EmpiricalDistribution, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_error(path, e))?;
    let mut values = Vec::new();
    let mut weights = Vec::new();
    for row in r.deserialize() {
        let (v, w): (f64, f64) = row.map_err(|e| io_error(path, e))?;
        values.push(v);
        weights.push(w);
    }
    if weights.windows(2).all(|p| p[0] == p[1]) && weights.first().is_none_or(|&w| w == 1.0 / weights.len() as f64) {
        Ok(EmpiricalDistribution::uniform(values))
    } else {
        Ok(EmpiricalDistribution::weighted(values, weights)?)
    }
}

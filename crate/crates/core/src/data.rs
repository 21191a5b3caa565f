//! Lifetime observations with right-censoring flags, and CSV ingestion.

use std::io::Read;

use crate::{Error, Result};

/// Observed times `t_i > 0` with event flags (`true` = failure observed,
/// `false` = right-censored at `t_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeData {
    times: Vec<f64>,
    events: Vec<bool>,
}

impl LifetimeData {
    pub fn new(times: Vec<f64>, events: Vec<bool>) -> Result<Self> {
        if times.len() != events.len() {
            return Err(Error::InvalidData(format!(
                "{} times but {} status flags",
                times.len(),
                events.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::InvalidData("no observations".into()));
        }
        if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::InvalidData(format!(
                "times must be finite and positive, got {t}"
            )));
        }
        Ok(LifetimeData { times, events })
    }

    /// Uncensored sample.
    pub fn complete(times: Vec<f64>) -> Result<Self> {
        let events = vec![true; times.len()];
        Self::new(times, events)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn events(&self) -> &[bool] {
        &self.events
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    /// Number of observed failures `d = Σ δ_i`.
    pub fn d(&self) -> usize {
        self.events.iter().filter(|e| **e).count()
    }

    pub fn is_complete(&self) -> bool {
        self.events.iter().all(|e| *e)
    }

    pub fn censored_fraction(&self) -> f64 {
        1.0 - self.d() as f64 / self.n() as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, bool)> + '_ {
        self.times.iter().copied().zip(self.events.iter().copied())
    }

    /// Draws the observations at `indices` (with repetition).
    pub fn resample(&self, indices: &[usize]) -> LifetimeData {
        LifetimeData {
            times: indices.iter().map(|&i| self.times[i]).collect(),
            events: indices.iter().map(|&i| self.events[i]).collect(),
        }
    }

    /// Multiplies every time by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<LifetimeData> {
        Self::new(
            self.times.iter().map(|t| t * c).collect(),
            self.events.clone(),
        )
    }

    /// Parses a CSV dataset with a header row.
    ///
    /// Column `time` is required and must be positive; column `status` is
    /// optional (`1` = failure, `0` = censored). Without it every row is a
    /// failure. Other columns are ignored.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .clone();
        let time_col = headers
            .iter()
            .position(|h| h == "time")
            .ok_or_else(|| Error::Parse("missing `time` column".into()))?;
        let status_col = headers.iter().position(|h| h == "status");

        let mut times = Vec::new();
        let mut events = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let line = row + 2;
            let record = record.map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
            let raw = record.get(time_col).unwrap_or("");
            let t: f64 = raw
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: invalid time `{raw}`")))?;
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Parse(format!(
                    "line {line}: time must be positive, got {t}"
                )));
            }
            let event = match status_col.map(|c| record.get(c).unwrap_or("")) {
                None => true,
                Some("1") => true,
                Some("0") => false,
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "line {line}: status must be 0 or 1, got `{other}`"
                    )))
                }
            };
            times.push(t);
            events.push(event);
        }
        if times.is_empty() {
            return Err(Error::Parse("dataset has no rows".into()));
        }
        Self::new(times, events)
    }

    pub fn from_csv_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }
}

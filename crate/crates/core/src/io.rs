//! File formats: census and volume CSV with a `# key=value` metadata header,
//! JSON documents with a `config` block, and atomic writes.
//!
//! The only nondeterministic field anywhere is the census `elapsed_seconds`
//! metadata line.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::census::{CensusRow, CensusTable};
use crate::volume::McEstimate;
use crate::{Error, HeightKind, Result};

pub type Config = BTreeMap<String, String>;

/// Name of the census metadata key that varies between identical runs.
pub const ELAPSED_KEY: &str = "elapsed_seconds";

pub const CENSUS_COLUMNS: &str = "n,Q,height,s,X,count";
pub const VOLUME_COLUMNS: &str = "n,s,height,delta,mean,stderr,samples,hits,seed";

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn write_metadata(out: &mut String, meta: &Config) {
    for (k, v) in meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
}

/// Census table as CSV. `config` is echoed into the metadata header next to
/// the run's own parameters.
pub fn census_csv(table: &CensusTable, config: &Config) -> String {
    let spec = &table.spec;
    let mut meta = Config::new();
    for (k, v) in config {
        meta.insert(format!("config.{k}"), v.clone());
    }
    let join = |v: Vec<String>| v.join(";");
    meta.insert("n".into(), spec.n.to_string());
    meta.insert("Q".into(), spec.q.to_string());
    meta.insert("height".into(), spec.height.to_string());
    meta.insert("thresholds".into(), join(spec.thresholds.iter().map(|x| x.to_string()).collect()));
    meta.insert("workers".into(), spec.workers.to_string());
    meta.insert("symmetry_reduced".into(), spec.reduce.to_string());
    meta.insert("work_budget".into(), format!("{:e}", spec.work_budget));
    meta.insert("box_constants".into(), join(spec.box_constants().iter().map(|c| c.to_string()).collect()));
    meta.insert("total".into(), table.total.to_string());
    meta.insert("ambiguous".into(), table.ambiguous.to_string());
    meta.insert(
        "ambiguous_examples".into(),
        join(table.ambiguous_examples.iter().map(|p| p.to_string()).collect()),
    );
    meta.insert("enumerated".into(), table.enumerated.to_string());
    meta.insert(ELAPSED_KEY.into(), format!("{:.3}", table.elapsed));
    let mut out = String::new();
    write_metadata(&mut out, &meta);
    out.push_str(CENSUS_COLUMNS);
    out.push('\n');
    for r in table.rows() {
        out.push_str(&format!("{},{},{},{},{},{}\n", r.n, r.q, r.height, r.s, r.x, r.count));
    }
    out
}

/// Metadata and rows of a census CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusFile {
    pub metadata: Config,
    pub rows: Vec<CensusRow>,
}

fn split_metadata<'a>(text: &'a str, columns: &str) -> Result<(Config, Vec<(usize, &'a str)>)> {
    let mut meta = Config::new();
    let mut data = Vec::new();
    let mut seen_header = false;
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some((k, v)) = rest.split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
        } else if line.trim().is_empty() {
            continue;
        } else if !seen_header {
            if line.trim() != columns {
                return Err(Error::Parse(format!("line {}: expected header `{columns}`", i + 1)));
            }
            seen_header = true;
        } else {
            data.push((i + 1, line));
        }
    }
    if !seen_header {
        return Err(Error::Parse(format!("missing header `{columns}`")));
    }
    Ok((meta, data))
}

fn field<T: std::str::FromStr>(s: &str, line: usize, name: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("line {line}: invalid {name} `{s}`")))
}

pub fn parse_census_csv(text: &str) -> Result<CensusFile> {
    let (metadata, data) = split_metadata(text, CENSUS_COLUMNS)?;
    let mut rows = Vec::new();
    for (line, l) in data {
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Parse(format!("line {line}: expected 6 fields")));
        }
        rows.push(CensusRow {
            n: field(f[0], line, "n")?,
            q: field(f[1], line, "Q")?,
            height: f[2].trim().parse::<HeightKind>()?,
            s: field(f[3], line, "s")?,
            x: field::<BigInt>(f[4], line, "X")?,
            count: field(f[5], line, "count")?,
        });
    }
    Ok(CensusFile { metadata, rows })
}

pub fn read_census_csv(path: &Path) -> Result<CensusFile> {
    parse_census_csv(&std::fs::read_to_string(path)?)
}

/// Volume estimates as CSV.
pub fn volume_csv(estimates: &[McEstimate], config: &Config) -> String {
    let mut meta = Config::new();
    for (k, v) in config {
        meta.insert(format!("config.{k}"), v.clone());
    }
    if let Some(e) = estimates.first() {
        meta.insert("workers".into(), e.workers.to_string());
    }
    let escalated: u64 = estimates.iter().map(|e| e.escalated).max().unwrap_or(0);
    meta.insert("escalated".into(), escalated.to_string());
    let mut out = String::new();
    write_metadata(&mut out, &meta);
    out.push_str(VOLUME_COLUMNS);
    out.push('\n');
    for e in estimates {
        out.push_str(&format!(
            "{},{},{},{:e},{:e},{:e},{},{},{}\n",
            e.n, e.s, e.height, e.delta, e.mean, e.stderr, e.samples, e.hits, e.seed
        ));
    }
    out
}

/// One row of a volume CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeRow {
    pub n: usize,
    pub s: u32,
    pub height: HeightKind,
    pub delta: f64,
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
}

impl From<&McEstimate> for VolumeRow {
    fn from(e: &McEstimate) -> Self {
        Self {
            n: e.n,
            s: e.s,
            height: e.height,
            delta: e.delta,
            mean: e.mean,
            stderr: e.stderr,
            samples: e.samples,
            hits: e.hits,
            seed: e.seed,
        }
    }
}

pub fn parse_volume_csv(text: &str) -> Result<(Config, Vec<VolumeRow>)> {
    let (metadata, data) = split_metadata(text, VOLUME_COLUMNS)?;
    let mut rows = Vec::new();
    for (line, l) in data {
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Parse(format!("line {line}: expected 9 fields")));
        }
        rows.push(VolumeRow {
            n: field(f[0], line, "n")?,
            s: field(f[1], line, "s")?,
            height: f[2].trim().parse::<HeightKind>()?,
            delta: field(f[3], line, "delta")?,
            mean: field(f[4], line, "mean")?,
            stderr: field(f[5], line, "stderr")?,
            samples: field(f[6], line, "samples")?,
            hits: field(f[7], line, "hits")?,
            seed: field(f[8], line, "seed")?,
        });
    }
    Ok((metadata, rows))
}

/// A JSON document: the resolved configuration next to the payload fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub config: Config,
    #[serde(flatten)]
    pub body: T,
}

/// Payload of a volume JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeBody {
    pub estimates: Vec<McEstimate>,
}

pub fn to_json<T: Serialize>(config: &Config, body: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document { config: config.clone(), body })?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<Document<T>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Whitespace-separated columns with a `#` header line, for plotting tools.
pub fn plot_data<I: IntoIterator<Item = Vec<f64>>>(columns: &[&str], rows: I) -> String {
    let mut out = format!("# {}\n", columns.join(" "));
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

//! Run configuration: sectioned TOML with flat keys, plus dotted overrides.

use anyhow::{anyhow, bail, Context, Result};
use klab_core::geometry::{make_config, GeometryConfig, Sector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SUITES: &[&str] =
    &["basis", "semigroup", "kernel", "transform", "analytic", "schatten", "strichartz", "restriction", "hls", "dunkl"];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryBlock,
    #[serde(default)]
    pub truncation: TruncationBlock,
    #[serde(default)]
    pub suite: SuiteBlock,
    #[serde(default)]
    pub ensemble: EnsembleBlock,
    #[serde(default)]
    pub exponents: ExponentBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub a: u32,
    pub n: usize,
    /// `rank1` or `radial`
    pub sector: String,
    pub k: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationBlock {
    pub l_max: usize,
    /// largest ν kept in transform tables; defaults to `2 l_max + 2`
    pub nu_max: Option<i64>,
    /// order of the exact spatial rule; defaults to `l_max + 4`
    pub spatial_order: Option<usize>,
    pub time_refine: usize,
    /// composite spatial panels for mixed norms; defaults from `l_max`
    pub space_panels: Option<usize>,
    pub space_order: usize,
}

impl Default for TruncationBlock {
    fn default() -> Self {
        Self { l_max: 47, nu_max: None, spatial_order: None, time_refine: 1, space_panels: None, space_order: 10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteBlock {
    pub names: Vec<String>,
}

impl Default for SuiteBlock {
    fn default() -> Self {
        Self { names: vec!["all".into()] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleBlock {
    pub sizes: Vec<usize>,
    /// number of seeds; seeds are `base_seed .. base_seed + seeds`
    pub seeds: u64,
    pub base_seed: u64,
    /// Haar band; defaults to `min(basis size, 96)`
    pub band: Option<usize>,
    /// weight pairs for the Schatten suite
    pub w_pairs: u64,
}

impl Default for EnsembleBlock {
    fn default() -> Self {
        Self { sizes: vec![1, 2, 4, 8, 16, 32, 64], seeds: 8, base_seed: 0, band: None, w_pairs: 50 }
    }
}

/// Explicit `(p, q)` pairs as two parallel lists; empty means the diagonal
/// pair plus three pairs on the general scaling line.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExponentBlock {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: String,
    /// any of `json`, `csv`, `summary`
    pub formats: Vec<String>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { dir: "klab-out".into(), formats: vec!["json".into(), "csv".into(), "summary".into()] }
    }
}

/// Sets `path` (dotted) in the table to `raw`, parsed as a TOML value when
/// possible and as a string otherwise.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment.split_once('=').ok_or_else(|| anyhow!("override `{assignment}` is not key=value"))?;
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.trim().split('.').collect();
    let (last, sections) = parts.split_last().expect("split yields one part");
    let mut cur = table;
    for s in sections {
        cur = cur
            .entry(s.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| anyhow!("override `{key}`: `{s}` is not a section"))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

impl RunConfig {
    pub fn from_table(table: toml::Table) -> Result<Self> {
        let cfg: RunConfig = toml::Value::Table(table).try_into().context("config does not match the schema")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn geometry(&self) -> Result<GeometryConfig> {
        let g = &self.geometry;
        let sector = match g.sector.as_str() {
            "rank1" => Sector::Rank1 { k: g.k.ok_or_else(|| anyhow!("rank1 sector needs geometry.k"))? },
            "radial" => Sector::Radial { gamma: g.gamma.unwrap_or(0.0) },
            other => bail!("geometry.sector must be `rank1` or `radial`, got `{other}`"),
        };
        make_config(g.a, g.n, sector).map_err(|e| anyhow!("{e}"))
    }

    fn validate(&self) -> Result<()> {
        self.geometry()?;
        if self.truncation.l_max == 0 {
            bail!("truncation.l_max must be at least 1");
        }
        if self.truncation.time_refine == 0 || self.truncation.space_order == 0 {
            bail!("truncation.time_refine and truncation.space_order must be positive");
        }
        for s in &self.suite.names {
            if s != "all" && !SUITES.contains(&s.as_str()) {
                bail!("unknown suite `{s}`; expected one of {SUITES:?} or `all`");
            }
        }
        if self.exponents.p.len() != self.exponents.q.len() {
            bail!("exponents.p and exponents.q must have the same length");
        }
        if self.ensemble.seeds == 0 || self.ensemble.sizes.is_empty() || self.ensemble.sizes.contains(&0) {
            bail!("ensemble needs at least one seed and positive sizes");
        }
        let basis = self.geometry()?.sectors().len() * (self.truncation.l_max + 1);
        let nmax = *self.ensemble.sizes.iter().max().expect("non-empty");
        let band = self.band(basis);
        if nmax > band || band > basis {
            bail!("ensemble sizes up to {nmax} need N ≤ band ≤ basis size (band {band}, basis {basis}); raise truncation.l_max");
        }
        for f in &self.output.formats {
            if !["json", "csv", "summary"].contains(&f.as_str()) {
                bail!("unknown output format `{f}`");
            }
        }
        Ok(())
    }

    pub fn band(&self, basis: usize) -> usize {
        self.ensemble.band.unwrap_or(basis.min(96))
    }

    pub fn selected_suites(&self) -> Vec<&'static str> {
        if self.suite.names.iter().any(|s| s == "all") {
            return SUITES.to_vec();
        }
        SUITES.iter().copied().filter(|s| self.suite.names.iter().any(|n| n == s)).collect()
    }

    pub fn seeds(&self) -> Vec<u64> {
        (self.ensemble.base_seed..self.ensemble.base_seed + self.ensemble.seeds).collect()
    }

    /// SHA-256 of the effective configuration, excluding the output block so
    /// that identical computations written to different places share a hash.
    pub fn hash(&self) -> String {
        let mut v = toml::Table::try_from(self).expect("config serializes");
        v.remove("output");
        let text = toml::to_string(&v).expect("config serializes");
        let d = Sha256::digest(text.as_bytes());
        d.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn wants(&self, format: &str) -> bool {
        self.output.formats.iter().any(|f| f == format)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_create_sections_and_parse_values() {
        let mut t = toml::Table::new();
        apply_override(&mut t, "geometry.a=2").unwrap();
        apply_override(&mut t, "geometry.sector=rank1").unwrap();
        apply_override(&mut t, "geometry.k=0.5").unwrap();
        apply_override(&mut t, "geometry.n=1").unwrap();
        apply_override(&mut t, "ensemble.sizes=[1,2]").unwrap();
        let cfg = RunConfig::from_table(t).unwrap();
        assert_eq!(cfg.ensemble.sizes, vec![1, 2]);
        assert_eq!(cfg.geometry.sector, "rank1");
        assert!(apply_override(&mut toml::Table::new(), "novalue").is_err());
    }

    #[test]
    fn hash_is_stable() {
        let t: toml::Table = toml::from_str("[geometry]\na = 2\nn = 1\nsector = \"rank1\"\nk = 0.0\n").unwrap();
        let a = RunConfig::from_table(t.clone()).unwrap();
        let mut b = RunConfig::from_table(t).unwrap();
        assert_eq!(a.hash(), b.hash());
        b.output.dir = "elsewhere".into();
        assert_eq!(a.hash(), b.hash());
        b.ensemble.base_seed = 1;
        assert_ne!(a.hash(), b.hash());
    }
}

use clap::ValueEnum;
use noncross::freeprob::CumulantSpec;
use noncross::sampling::Sampler;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    F64,
    High,
}

/// Everything that determines the content of an output file. The output path is not part of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub suite: Option<String>,
    pub n: Option<usize>,
    pub n_range: Option<Vec<usize>>,
    pub sampler: Option<Sampler>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub spec: Option<CumulantSpec>,
    pub format: Option<Format>,
    pub precision: Precision,
    pub filter: Option<String>,
    pub trace: bool,
}

impl RunConfig {
    pub fn new(subcommand: &str, seed: u64) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            suite: None,
            n: None,
            n_range: None,
            sampler: None,
            samples: None,
            seed,
            spec: None,
            format: None,
            precision: Precision::F64,
            filter: None,
            trace: false,
        }
    }

    /// SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// A list of semilengths from `--n-range`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

/// Parses `100,1000,10000`, `5..9` (inclusive) or a mix of both.
pub fn parse_n_range(text: &str) -> Result<Sizes, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| format!("bad range end in {part:?}"))?;
            if a > b {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("bad size {part:?}"))?);
        }
    }
    if out.is_empty() {
        return Err("no sizes given".into());
    }
    Ok(Sizes(out))
}

//! Versioned JSON run manifests.
//!
//! ```json
//! { "schema_version": 1, "command": "verify", "seed": 7, "out": "out",
//!   "epsilon": 0.01, "parameters": { ... } }
//! ```
//!
//! The header is read first to learn the command; the whole document is then
//! parsed again against the command's parameter schema so that every error
//! carries a line and column of the manifest file.

use std::path::PathBuf;

use dkg_core::harness::angles::Bound16Denominator;
use dkg_core::harness::cone::ConeBranch;
use dkg_core::harness::product::{ProductInstance, ProductWhich};
use dkg_core::harness::region::RegionVariant;
use dkg_core::harness::scaling::FieldKind;
use dkg_core::norms::NormSpec;
use dkg_core::solver::{InitialData, PhysicsParams, SolverConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Simulate,
    Verify,
    Norms,
    Region,
    Scaling,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Norms => "norms",
            Command::Region => "region",
            Command::Scaling => "scaling",
        }
    }
}

#[derive(Deserialize)]
struct Header {
    schema_version: u32,
    command: Command,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest<P> {
    // Checked by `Source::command`; kept so unknown-field checks cover them.
    #[serde(rename = "schema_version")]
    _schema_version: u32,
    #[serde(rename = "command")]
    _command: Command,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    pub parameters: P,
}

/// Raw manifest text with its SHA-256.
pub struct Source {
    pub text: String,
    pub sha256: String,
}

impl Source {
    pub fn new(text: String) -> Self {
        let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
        Self { text, sha256 }
    }

    pub fn command(&self) -> Result<Command, String> {
        let h: Header = serde_json::from_str(&self.text).map_err(describe)?;
        if h.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                h.schema_version
            ));
        }
        Ok(h.command)
    }

    pub fn parse<P: DeserializeOwned>(&self) -> Result<Manifest<P>, String> {
        serde_json::from_str(&self.text).map_err(describe)
    }
}

fn describe(e: serde_json::Error) -> String {
    let text = e.to_string();
    let message = text.rsplit_once(" at line ").map_or(text.as_str(), |(m, _)| m);
    format!("manifest line {}, column {}: {message}", e.line(), e.column())
}

fn default_record_every() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub n_x: usize,
    pub period: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateParams {
    pub grid: GridParams,
    pub physics: PhysicsParams,
    pub solver: SolverConfig,
    pub data: InitialData,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    /// `Ĥ^{s,r}` norms of `ψ(t)` and `φ(t)` added to the series.
    #[serde(default)]
    pub norms: Vec<NormSpec>,
    /// Write the space-time trajectory containers.
    #[serde(default = "yes")]
    pub fields: bool,
}

fn yes() -> bool {
    true
}

fn default_range_min() -> f64 {
    1e-2
}

fn default_range_max() -> f64 {
    1e3
}

fn default_resolutions() -> Vec<usize> {
    vec![16, 32, 64]
}

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    Angle14 {
        count: usize,
        #[serde(default = "default_range_min")]
        range_min: f64,
        #[serde(default = "default_range_max")]
        range_max: f64,
    },
    Angle15 {
        count: usize,
        #[serde(default = "default_range_min")]
        range_min: f64,
        #[serde(default = "default_range_max")]
        range_max: f64,
    },
    Angle16 {
        count: usize,
        #[serde(default = "default_range_min")]
        range_min: f64,
        #[serde(default = "default_range_max")]
        range_max: f64,
        #[serde(default = "literal")]
        denominator: Bound16Denominator,
    },
    Nullform13 {
        n_x: usize,
        n_t: usize,
        #[serde(default = "default_seeds")]
        seeds: usize,
    },
    Bilinear11 {
        r: f64,
        s: f64,
        l: f64,
        b: f64,
        samples: usize,
        #[serde(default = "default_resolutions")]
        resolutions: Vec<usize>,
    },
    Bilinear12 {
        r: f64,
        s: f64,
        l: f64,
        b: f64,
        samples: usize,
        #[serde(default = "default_resolutions")]
        resolutions: Vec<usize>,
    },
    Product {
        r: f64,
        which: ProductWhich,
        #[serde(default)]
        instance: Option<ProductInstance>,
        /// `[s, l, b]` for the reduction steps.
        #[serde(default)]
        reduction: Option<[f64; 3]>,
        samples: usize,
        #[serde(default = "default_resolutions")]
        resolutions: Vec<usize>,
    },
    Cone {
        r: f64,
        branch: ConeBranch,
    },
    Transfer {
        p: f64,
        q: f64,
        r: f64,
        s1: f64,
        s2: f64,
        b: f64,
        n: usize,
        samples: usize,
        #[serde(default = "default_signs")]
        signs: String,
    },
}

fn literal() -> Bound16Denominator {
    Bound16Denominator::XiLiteral
}

fn default_seeds() -> usize {
    1
}

fn default_signs() -> String {
    "++".into()
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Angle14 { .. } => "angle14",
            Check::Angle15 { .. } => "angle15",
            Check::Angle16 { .. } => "angle16",
            Check::Nullform13 { .. } => "nullform13",
            Check::Bilinear11 { .. } => "bilinear11",
            Check::Bilinear12 { .. } => "bilinear12",
            Check::Product { .. } => "product",
            Check::Cone { .. } => "cone",
            Check::Transfer { .. } => "transfer",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    pub checks: Vec<Check>,
    #[serde(default = "two_pi")]
    pub period: f64,
    #[serde(default = "two_pi")]
    pub window: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormsParams {
    /// DKGF container to measure; otherwise the data family on `grid`.
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub grid: Option<GridParams>,
    #[serde(default)]
    pub data: Option<InitialData>,
    pub specs: Vec<NormSpec>,
    /// Restriction time for space-time inputs.
    #[serde(default)]
    pub t_sub: Option<f64>,
}

/// Decimal as written in the manifest, kept exact.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Decimal {
    Text(String),
    Number(serde_json::Number),
}

impl Decimal {
    pub fn text(&self) -> String {
        match self {
            Decimal::Text(s) => s.clone(),
            Decimal::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionParams {
    pub r: Decimal,
    pub delta: Decimal,
    pub variant: RegionVariant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingCase {
    pub s: f64,
    pub r: f64,
    pub kind: FieldKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingParams {
    pub cases: Vec<ScalingCase>,
    #[serde(default = "default_scaling_n")]
    pub n_x: usize,
}

fn default_scaling_n() -> usize {
    64
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const DEFAULT_SEED: u64 = 1;
pub const OUTPUT_DIR_ENV: &str = "IGAM_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "igam", version, about = "Influencer-Guided Attachment Model toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Global {
    /// JSON object whose keys override flags of the same name.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Defaults to $IGAM_OUTPUT_DIR, then the working directory.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Table format for `compare`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Skip SVG output.
    #[arg(long, global = true)]
    pub no_plot: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a graph from one of the model variants.
    Generate(GenerateArgs),
    /// Fit fanout, scale and heights to an edge list.
    Fit(FitArgs),
    /// Rank nodes and trace the domination curve.
    Dominate(DominateArgs),
    /// Exponent table across registered datasets and strategies.
    Compare(CompareArgs),
    /// Layered drawing of a graph by height.
    Visualize(VisualizeArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Igam,
    Igam2,
    Directed,
    Continuous,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Greedy,
    Prestige,
    Cp,
    Jb,
    Th,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScorerArg {
    Exact,
    Approx,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Variant::Igam)]
    pub variant: Variant,
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long = "H0")]
    #[serde(rename = "H0")]
    pub h0: Option<u32>,
    #[arg(long = "H")]
    #[serde(rename = "H")]
    pub h: Option<u32>,
    /// Node count for the continuous variant; defaults to the full tree size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Output file stem; defaults to the variant name.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct FitArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ScorerArg::Exact)]
    pub scorer: ScorerArg,
    #[arg(long)]
    pub b_min: Option<u32>,
    #[arg(long)]
    pub b_max: Option<u32>,
    /// Run pairwise height swaps after the sweep.
    #[arg(long)]
    pub swaps: bool,
    /// Sweep every fanout even on large graphs.
    #[arg(long)]
    pub uncapped: bool,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DominateArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::Prestige)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0.8)]
    pub kappa: f64,
    /// Heights sidecar used by `prestige`; fitted when absent.
    #[arg(long, requires = "b")]
    pub heights: Option<PathBuf>,
    /// Fanout of the heights sidecar.
    #[arg(long)]
    pub b: Option<u32>,
    /// Coordinates CSV (`node_id,x,y[,z]`), required by `jb`.
    #[arg(long)]
    pub coords: Option<PathBuf>,
    /// Also run greedy and regress its curve against this one.
    #[arg(long)]
    pub against_greedy: bool,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CompareArgs {
    /// Comma-separated registry names; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub datasets: Vec<String>,
    #[arg(long, value_delimiter = ',', value_enum)]
    pub strategies: Vec<StrategyArg>,
    #[arg(long, default_value_t = 0.8)]
    pub kappa: f64,
    /// Dataset root; defaults to $IGAM_DATA_DIR.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Allowed distance from the published exponents.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
    /// Repeat the low-degree filter until no node qualifies.
    #[arg(long)]
    pub iterate_filter: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct VisualizeArgs {
    pub input: PathBuf,
    #[arg(long, requires = "b")]
    pub heights: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<u32>,
    /// Labels CSV (`node_id,label`) for the top levels.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub name: Option<String>,
}

/// Overlay `config` keys onto `target`, consuming the keys it knows.
fn overlay<T: Serialize + DeserializeOwned>(target: &T, config: &mut Map<String, Value>) -> Result<T, String> {
    let Value::Object(mut fields) = serde_json::to_value(target).map_err(|e| e.to_string())? else {
        unreachable!("argument structs serialize to objects")
    };
    let known: Vec<String> = fields.keys().cloned().collect();
    for key in known {
        if let Some(v) = config.remove(&key) {
            fields.insert(key, v);
        }
    }
    serde_json::from_value(Value::Object(fields)).map_err(|e| format!("config: {e}"))
}

impl Cli {
    pub fn apply_config(mut self, text: &str) -> Result<Self, String> {
        let Value::Object(mut config) = serde_json::from_str(text).map_err(|e| format!("config: {e}"))? else {
            return Err("config: expected a JSON object".into());
        };
        let keep = self.global.config.take();
        self.global = overlay(&self.global, &mut config)?;
        self.global.config = keep;
        self.command = match self.command {
            Command::Generate(a) => Command::Generate(overlay(&a, &mut config)?),
            Command::Fit(a) => Command::Fit(overlay(&a, &mut config)?),
            Command::Dominate(a) => Command::Dominate(overlay(&a, &mut config)?),
            Command::Compare(a) => Command::Compare(overlay(&a, &mut config)?),
            Command::Visualize(a) => Command::Visualize(overlay(&a, &mut config)?),
        };
        match config.keys().next() {
            Some(key) => Err(format!("config: unknown key `{key}`")),
            None => Ok(self),
        }
    }
}

//! Command-line front end: generator files in, JSON reports and CSV traces out.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_word, limit_disc_exact, Classification, LimitDisc, NamedWord, Verdict, WordSpec};
use crate::dimension::{dimension, DimensionReport};
use crate::dynamics::{
    exceptional_set, ideal_limit, iterate_orbit, pointwise_convergence, rapid_escape_report, tangency_chain_check, ConvergenceReport,
    EscapeReport, IdealLimit, OrbitTrace,
};
use crate::error::{Error, Result};
use crate::mobius::{Disc, ExtComplex, MobiusMap};
use crate::tangency::{GeneratorSet, TangencyData};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    #[serde(flatten)]
    pub map: MobiusMap,
}

/// `{"generators": [{"name", "a", "b", "c", "d"}, ...], "tol": x}`.
/// Unknown fields are ignored, so an `analyze` report reads back as a
/// generator file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl GeneratorFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the generator set; `tol` overrides the file's tolerance.
    pub fn into_set(self, tol: Option<f64>) -> Result<GeneratorSet> {
        if self.generators.is_empty() {
            return Err(Error::Parse("generator list is empty".into()));
        }
        let tol = tol.or(self.tol).unwrap_or(tol::DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(Error::Parse(format!("tolerance must be positive, got {tol}")));
        }
        GeneratorSet::new(self.generators.into_iter().map(|g| (g.name, g.map)).collect(), tol)
    }
}

pub fn load_generators(path: &Path, tol: Option<f64>) -> Result<GeneratorSet> {
    GeneratorFile::parse(&fs::read_to_string(path)?)?.into_set(tol)
}

pub fn load_word(path: &Path, set: &GeneratorSet) -> Result<WordSpec> {
    let word: NamedWord = serde_json::from_str(&fs::read_to_string(path)?)?;
    WordSpec::resolve(&word, set)
}

/// Eventually periodic word with prefix length 0..=2 and period length 1..=4.
pub fn random_word(b: usize, rng: &mut impl Rng) -> WordSpec {
    let prefix = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..b)).collect();
    let period = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..b)).collect();
    WordSpec::new(prefix, period)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorReport {
    pub name: String,
    #[serde(flatten)]
    pub map: MobiusMap,
    #[serde(flatten)]
    pub data: TangencyData,
    pub image: Disc,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub tol: f64,
    pub generators: Vec<GeneratorReport>,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub adjacency: Vec<Vec<u8>>,
    pub spectral_radius: f64,
    pub complete: bool,
    pub has_cycle: bool,
}

pub fn cmd_analyze(set: &GeneratorSet) -> Result<AnalyzeReport> {
    let graph = set.graph();
    Ok(AnalyzeReport {
        tol: set.tol(),
        generators: set
            .generators()
            .iter()
            .map(|g| GeneratorReport {
                name: g.name.clone(),
                map: g.map,
                data: g.data,
                image: g.image,
            })
            .collect(),
        vertices: set.names(),
        edges: graph.named_edges(),
        adjacency: graph.adjacency().to_vec(),
        spectral_radius: graph.spectral_radius()?,
        complete: graph.is_complete(),
        has_cycle: graph.has_cycle(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub tol: f64,
    pub word: NamedWord,
    #[serde(flatten)]
    pub classification: Classification,
    pub t_inf: Option<f64>,
    pub limit_disc: Option<LimitDisc>,
}

pub fn cmd_classify(set: &GeneratorSet, w: &WordSpec) -> Result<ClassifyReport> {
    let graph = set.graph();
    let classification = classify_word(set, &graph, w)?;
    let limit_disc = match classification.verdict {
        Verdict::LimitDisc => Some(limit_disc_exact(set, &graph, w)?),
        Verdict::LimitPoint => None,
    };
    Ok(ClassifyReport {
        tol: set.tol(),
        word: w.named(set),
        classification,
        t_inf: limit_disc.as_ref().map(|l| l.t_inf),
        limit_disc,
    })
}

pub fn cmd_dimension(set: &GeneratorSet) -> Result<DimensionReport> {
    dimension(set, &set.graph())
}

/// A report section that may fail on its own without failing the command.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Section<T> {
    Value(T),
    Failed { error: String },
}

impl<T> From<Result<T>> for Section<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Section::Value(v),
            Err(e) => Section::Failed { error: e.to_string() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub eventually_tangent: bool,
    pub witness_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub tol: f64,
    pub word: NamedWord,
    pub steps: usize,
    pub classification: Section<ClassifyReport>,
    pub final_disc: Disc,
    pub final_dist_j: f64,
    pub tangency_chain: ChainReport,
    pub escape: Section<EscapeReport>,
    pub ideal_limit: Section<IdealLimit>,
    pub pointwise: Section<ConvergenceReport>,
}

/// Default sample points: the exceptional set, a few fixed interior
/// points, and seeded random points of the disc.
pub fn default_points(set: &GeneratorSet, w: &WordSpec, rng: &mut impl Rng) -> Vec<ExtComplex> {
    let mut pts = exceptional_set(set, w);
    pts.extend([ExtComplex::new(0.0, 0.0), ExtComplex::new(0.3, 0.2), ExtComplex::new(0.0, 1.0)]);
    for _ in 0..4 {
        let r = 0.95 * rng.gen::<f64>().sqrt();
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        pts.push(ExtComplex::new(r * th.cos(), r * th.sin()));
    }
    pts
}

pub fn cmd_simulate(set: &GeneratorSet, w: &WordSpec, steps: usize, points: &[ExtComplex]) -> Result<(SimulateReport, OrbitTrace)> {
    let trace = iterate_orbit(set, w, steps)?;
    let (eventually_tangent, witness_index) = tangency_chain_check(&trace.discs, set.tol());
    let classification = if w.period.is_empty() {
        Err(Error::EmptyPeriod)
    } else {
        cmd_classify(set, w)
    };
    let report = SimulateReport {
        tol: set.tol(),
        word: w.named(set),
        steps,
        classification: classification.into(),
        final_disc: *trace.discs.last().expect("steps >= 1"),
        final_dist_j: *trace.dist_j.last().expect("steps >= 1"),
        tangency_chain: ChainReport {
            eventually_tangent,
            witness_index,
        },
        escape: rapid_escape_report(&trace).into(),
        ideal_limit: ideal_limit(&trace, set.tol()).into(),
        pointwise: pointwise_convergence(set, w, steps, points).into(),
    };
    Ok((report, trace))
}

#[derive(Debug, Serialize)]
struct TraceRow {
    n: usize,
    radius: f64,
    center_re: f64,
    center_im: f64,
    dist_j: f64,
    height: f64,
    partial_sum: f64,
}

pub fn write_trace_csv<W: std::io::Write>(trace: &OrbitTrace, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for i in 0..trace.len() {
        let d = trace.discs[i];
        wtr.serialize(TraceRow {
            n: i + 1,
            radius: d.radius(),
            center_re: d.center().re,
            center_im: d.center().im,
            dist_j: trace.dist_j[i],
            height: trace.heights[i],
            partial_sum: trace.escape_partial_sums[i],
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

/// `"re,im;re,im;..."`.
pub fn parse_points(s: &str) -> Result<Vec<ExtComplex>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let bad = || Error::Parse(format!("bad point `{p}`, expected re,im"));
            let (re, im) = p.split_once(',').ok_or_else(bad)?;
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            Ok(ExtComplex::new(re, im))
        })
        .collect()
}

#[derive(Debug, Parser)]
#[command(name = "discdyn", version, about = "Composition sequences of Möbius self-maps of the unit disc")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Generator file (JSON)
    #[arg(long)]
    pub input: PathBuf,
    /// Tolerance for tangency and equality on the sphere (overrides the file)
    #[arg(long)]
    pub tol: Option<f64>,
    /// Directory for report and trace files
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomised choices
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tangency data, tangency graph and spectral radius
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Limit-point / limit-disc verdict for an eventually periodic word
    Classify {
        #[command(flatten)]
        common: Common,
        /// Word file {"prefix": [...], "period": [...]}; random if absent
        #[arg(long)]
        word: Option<PathBuf>,
    },
    /// Hausdorff dimension of the limit-disc words
    Dimension {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate F_n(D), escape sums and convergence
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: Option<PathBuf>,
        #[arg(long, default_value_t = 300)]
        steps: usize,
        /// Sample points "re,im;re,im;..."
        #[arg(long)]
        points: Option<String>,
        /// Write the per-step trace as trace.csv
        #[arg(long)]
        csv: bool,
    },
}

fn word_or_random(path: Option<&Path>, set: &GeneratorSet, rng: &mut ChaCha8Rng) -> Result<WordSpec> {
    match path {
        Some(p) => load_word(p, set),
        None => Ok(random_word(set.len(), rng)),
    }
}

fn emit<T: Serialize>(report: &T, out: Option<&Path>, name: &str) -> Result<String> {
    let text = serde_json::to_string_pretty(report)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{name}.json")), format!("{text}\n"))?;
    }
    Ok(text)
}

/// Runs a command and returns the JSON report text.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Analyze { common } => {
            let set = load_generators(&common.input, common.tol)?;
            emit(&cmd_analyze(&set)?, common.out.as_deref(), "analyze")
        }
        Command::Classify { common, word } => {
            let set = load_generators(&common.input, common.tol)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let w = word_or_random(word.as_deref(), &set, &mut rng)?;
            emit(&cmd_classify(&set, &w)?, common.out.as_deref(), "classify")
        }
        Command::Dimension { common } => {
            let set = load_generators(&common.input, common.tol)?;
            emit(&cmd_dimension(&set)?, common.out.as_deref(), "dimension")
        }
        Command::Simulate {
            common,
            word,
            steps,
            points,
            csv,
        } => {
            let set = load_generators(&common.input, common.tol)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let w = word_or_random(word.as_deref(), &set, &mut rng)?;
            let pts = match points {
                Some(s) => parse_points(s)?,
                None => default_points(&set, &w, &mut rng),
            };
            let (report, trace) = cmd_simulate(&set, &w, *steps, &pts)?;
            if *csv {
                let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
                fs::create_dir_all(&dir)?;
                write_trace_csv(&trace, fs::File::create(dir.join("trace.csv"))?)?;
            }
            emit(&report, common.out.as_deref(), "simulate")
        }
    }
}

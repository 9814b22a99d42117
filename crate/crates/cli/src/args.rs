use std::path::PathBuf;

use casecenter::mctest::Metric;
use casecenter::resample::{DEFAULT_ELLIPSE_LEVEL, DEFAULT_REPLICATES, DEFAULT_SIZES};
use casecenter::{CenterEstimator, Zone};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "casecenter", version, about = "Centrality statistics for epidemic case locations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output directory; created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    /// Output formats, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "csv")]
    pub format: Vec<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    Both,
    With,
    Without,
}

impl Sampling {
    /// Replacement flags, without first.
    pub fn modes(self) -> Vec<bool> {
        match self {
            Sampling::Both => vec![false, true],
            Sampling::With => vec![true],
            Sampling::Without => vec![false],
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CaseArgs {
    /// Case file: `id,lat,lon` or `id,easting,northing,zone`.
    #[arg(long)]
    pub cases: PathBuf,

    /// Force the UTM zone (e.g. 50N) instead of the dataset's own.
    #[arg(long)]
    pub zone: Option<Zone>,

    /// Collapse cases sharing a location.
    #[arg(long)]
    pub dedupe: bool,

    /// Displace each case uniformly within this radius, metres.
    #[arg(long, value_name = "METRES")]
    pub jitter: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct LandmarkArgs {
    /// Landmark file: `name,lat,lon` or `name,easting,northing,zone`.
    #[arg(long)]
    pub landmarks: PathBuf,

    /// Landmark under test.
    #[arg(long, default_value = "Market")]
    pub landmark: String,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimatorArgs {
    /// Center estimators, comma separated.
    #[arg(
        long = "estimator",
        value_delimiter = ',',
        default_values_t = [CenterEstimator::Centroid, CenterEstimator::CenterPoint]
    )]
    pub estimators: Vec<CenterEstimator>,

    /// Take the center-point median on latitude/longitude, then project.
    #[arg(long)]
    pub median_on_geographic: bool,
}

impl EstimatorArgs {
    pub fn resolved(&self) -> Vec<CenterEstimator> {
        self.estimators
            .iter()
            .map(|&e| match e {
                CenterEstimator::CenterPoint if self.median_on_geographic => CenterEstimator::GeographicCenterPoint,
                e => e,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PlanArgs {
    /// Resample sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
    pub n: Vec<usize>,

    /// Resamples per size.
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub m: usize,

    /// Which sampling modes to run.
    #[arg(long, value_enum, default_value = "both")]
    pub sampling: Sampling,

    /// Shorthand for `--sampling with`.
    #[arg(long, conflicts_with = "sampling")]
    pub with_replacement: bool,
}

impl PlanArgs {
    pub fn modes(&self) -> Vec<bool> {
        if self.with_replacement {
            vec![true]
        } else {
            self.sampling.modes()
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Project a geographic case file to UTM (planar input passes through).
    Project {
        #[command(flatten)]
        cases: CaseArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Full-sample centroid and center-point.
    Centers {
        #[command(flatten)]
        cases: CaseArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Resampled center clouds.
    Resample {
        #[command(flatten)]
        cases: CaseArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Covariance ellipses and spread of the center clouds.
    Ellipse {
        #[command(flatten)]
        cases: CaseArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Coverage level of the ellipse.
        #[arg(long, default_value_t = DEFAULT_ELLIPSE_LEVEL)]
        level: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Is the landmark the center? Rank test against resampled centers.
    TestCenter {
        #[command(flatten)]
        cases: CaseArgs,
        #[command(flatten)]
        landmarks: LandmarkArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Are the cases closer to the landmark than the population? Any tight
    /// cluster passes this for a landmark inside it; see flaw-demo.
    TestProximity {
        #[command(flatten)]
        cases: CaseArgs,
        #[command(flatten)]
        landmarks: LandmarkArgs,
        /// Population density grid used as the null.
        #[arg(long)]
        density: PathBuf,
        /// Simulated null patterns.
        #[arg(long, default_value_t = casecenter::mctest::DEFAULT_NULL_REPLICATES)]
        r: usize,
        #[arg(long, default_value = "haversine")]
        metric: Metric,
        /// Also test the full-sample center against this many null points.
        #[arg(long, value_name = "COUNT")]
        point_count: Option<usize>,
        /// Estimator for the point test.
        #[arg(long, default_value = "centroid")]
        point_estimator: CenterEstimator,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Grid of landmark-center p-values by sampling mode, estimator and n.
    Table1 {
        #[command(flatten)]
        cases: CaseArgs,
        #[command(flatten)]
        landmarks: LandmarkArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// SVG panels of the center clouds, one per sampling mode and size.
    Figures {
        #[command(flatten)]
        cases: CaseArgs,
        #[command(flatten)]
        landmarks: LandmarkArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        median_on_geographic: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Synthetic bivariate-normal case cluster.
    Synth {
        #[arg(long)]
        origin_e: f64,
        #[arg(long)]
        origin_n: f64,
        #[arg(long, default_value = "50N")]
        zone: Zone,
        /// Standard deviation along the major axis, metres.
        #[arg(long, default_value_t = 1000.0)]
        sigma: f64,
        /// Minor-axis standard deviation; defaults to `--sigma`.
        #[arg(long)]
        sigma_minor: Option<f64>,
        /// Major-axis direction, degrees counterclockwise from east.
        #[arg(long, default_value_t = 0.0)]
        orientation: f64,
        #[arg(long, default_value_t = 155)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tight clusters placed anywhere in a city all pass the proximity test
    /// for a landmark at their origin.
    FlawDemo {
        /// Density grid; defaults to the built-in 30 km synthetic city.
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long, default_value_t = 1000.0)]
        sigma: f64,
        #[arg(long, default_value_t = 155)]
        count: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 199)]
        r: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value = "haversine")]
        metric: Metric,
        #[arg(long, default_value = "landmark")]
        landmark_name: String,
        /// Landmark offset east of each cluster origin, metres.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        offset_e: f64,
        /// Landmark offset north of each cluster origin, metres.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        offset_n: f64,
        /// Allow clusters wider than a tenth of the city.
        #[arg(long)]
        relax: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write the synthetic city density grid.
    DensityFixture {
        /// Side length, metres.
        #[arg(long, default_value_t = 30_000.0)]
        extent: f64,
        #[arg(long, default_value_t = 60)]
        cells: usize,
        #[arg(long, default_value_t = 6)]
        blobs: usize,
        #[arg(long, default_value_t = 223_000.0)]
        xmin: f64,
        #[arg(long, default_value_t = 3_376_000.0)]
        ymin: f64,
        #[arg(long, default_value = "50N")]
        zone: Zone,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-run the command recorded in a manifest and check its outputs.
    #[serde(skip)]
    Replay {
        /// manifest.json of an earlier run.
        manifest: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Project { .. } => "project",
            Command::Centers { .. } => "centers",
            Command::Resample { .. } => "resample",
            Command::Ellipse { .. } => "ellipse",
            Command::TestCenter { .. } => "test-center",
            Command::TestProximity { .. } => "test-proximity",
            Command::Table1 { .. } => "table1",
            Command::Figures { .. } => "figures",
            Command::Synth { .. } => "synth",
            Command::FlawDemo { .. } => "flaw-demo",
            Command::DensityFixture { .. } => "density-fixture",
            Command::Replay { .. } => "replay",
        }
    }

    pub fn seed_mut(&mut self) -> Option<&mut Option<u64>> {
        match self {
            Command::Project { seed, .. }
            | Command::Centers { seed, .. }
            | Command::Resample { seed, .. }
            | Command::Ellipse { seed, .. }
            | Command::TestCenter { seed, .. }
            | Command::TestProximity { seed, .. }
            | Command::Table1 { seed, .. }
            | Command::Figures { seed, .. }
            | Command::Synth { seed, .. }
            | Command::FlawDemo { seed, .. }
            | Command::DensityFixture { seed, .. } => Some(seed),
            Command::Replay { .. } => None,
        }
    }

    /// Files the command reads.
    pub fn inputs(&self) -> Vec<PathBuf> {
        match self {
            Command::Project { cases, .. }
            | Command::Centers { cases, .. }
            | Command::Resample { cases, .. }
            | Command::Ellipse { cases, .. } => vec![cases.cases.clone()],
            Command::TestCenter { cases, landmarks, .. }
            | Command::Table1 { cases, landmarks, .. }
            | Command::Figures { cases, landmarks, .. } => vec![cases.cases.clone(), landmarks.landmarks.clone()],
            Command::TestProximity { cases, landmarks, density, .. } => {
                vec![cases.cases.clone(), landmarks.landmarks.clone(), density.clone()]
            }
            Command::FlawDemo { density, .. } => density.iter().cloned().collect(),
            Command::Synth { .. } | Command::DensityFixture { .. } => Vec::new(),
            Command::Replay { manifest } => vec![manifest.clone()],
        }
    }
}

//! Synthetic case clusters and the proximity-test flaw demonstration.
//!
//! [`flaw_demo`] drops a tight cluster at a random place in a city raster,
//! puts the tested landmark at the cluster's origin, and runs the
//! population-density proximity test. Because the null model spreads points
//! over the whole city, a compact cluster is "significantly close" to
//! whatever landmark sits inside it, so the rejection rate stays near one
//! wherever the origin falls.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geo::PlanePoint;
use crate::mctest::{proximity_test, Metric};
use crate::pattern::{CasePattern, Landmark};
use crate::popsim::DensityGrid;
use crate::seeding::{derive_seed, domain, stream_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterShape {
    IsotropicNormal,
    AnisotropicNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterModel {
    pub origin: PlanePoint,
    pub shape: ClusterShape,
    pub sigma_major: f64,
    /// Ignored for isotropic clusters.
    pub sigma_minor: f64,
    /// Major-axis angle from the easting axis, radians.
    pub orientation: f64,
    pub n: usize,
}

impl ClusterModel {
    pub fn isotropic(origin: PlanePoint, sigma: f64, n: usize) -> Self {
        ClusterModel {
            origin,
            shape: ClusterShape::IsotropicNormal,
            sigma_major: sigma,
            sigma_minor: sigma,
            orientation: 0.0,
            n,
        }
    }

    pub fn anisotropic(origin: PlanePoint, sigma_major: f64, sigma_minor: f64, orientation: f64, n: usize) -> Self {
        ClusterModel {
            origin,
            shape: ClusterShape::AnisotropicNormal,
            sigma_major,
            sigma_minor,
            orientation,
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let minor = self.minor();
        if !(self.sigma_major > 0.0 && self.sigma_major.is_finite()) || !(minor > 0.0 && minor.is_finite()) {
            return Err(Error::Config(format!(
                "cluster sigmas must be finite and > 0 (got {}, {})",
                self.sigma_major, minor
            )));
        }
        if self.n == 0 {
            return Err(Error::Config("cluster needs n >= 1".into()));
        }
        Ok(())
    }

    fn minor(&self) -> f64 {
        match self.shape {
            ClusterShape::IsotropicNormal => self.sigma_major,
            ClusterShape::AnisotropicNormal => self.sigma_minor,
        }
    }

    pub fn at(self, origin: PlanePoint) -> Self {
        ClusterModel { origin, ..self }
    }
}

/// `model.n` independent bivariate-normal draws about the origin.
pub fn synth_cluster<R: Rng + ?Sized>(model: &ClusterModel, rng: &mut R) -> Result<CasePattern> {
    model.validate()?;
    let (s, c) = model.orientation.sin_cos();
    let minor = model.minor();
    let points = (0..model.n)
        .map(|_| {
            let u: f64 = rng.sample::<f64, _>(StandardNormal) * model.sigma_major;
            let v: f64 = rng.sample::<f64, _>(StandardNormal) * minor;
            model.origin.offset(c * u - s * v, s * u + c * v)
        })
        .collect();
    CasePattern::from_points(points)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlawDemoConfig {
    pub trials: usize,
    /// Template; the origin is replaced in every trial.
    pub cluster: ClusterModel,
    pub alpha: f64,
    /// Null replicates per proximity test.
    pub replicates: usize,
    pub metric: Metric,
    pub seed: u64,
    pub landmark_name: String,
    /// Landmark position relative to the cluster origin, metres.
    pub landmark_offset: (f64, f64),
    /// Skip the `sigma_major <= extent / 10` check.
    pub relax_precondition: bool,
}

impl FlawDemoConfig {
    pub fn new(cluster: ClusterModel, seed: u64) -> Self {
        FlawDemoConfig {
            trials: 200,
            cluster,
            alpha: 0.05,
            replicates: 199,
            metric: Metric::Haversine,
            seed,
            landmark_name: "landmark".into(),
            landmark_offset: (0.0, 0.0),
            relax_precondition: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlawTrial {
    pub trial: usize,
    pub origin_e: f64,
    pub origin_n: f64,
    pub p_value: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlawReport {
    pub landmark_name: String,
    pub alpha: f64,
    pub replicates: usize,
    pub trials: Vec<FlawTrial>,
    pub rejection_rate: f64,
}

impl FlawReport {
    pub fn p_values(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.p_value).collect()
    }

    pub fn summary(&self) -> String {
        let rejected = self.trials.iter().filter(|t| t.reject).count();
        format!(
            "landmark={} trials={} rejected={} alpha={} R={} rejection_rate={}",
            self.landmark_name,
            self.trials.len(),
            rejected,
            self.alpha,
            self.replicates,
            self.rejection_rate
        )
    }

    /// `trial,origin_e,origin_n,p_value,reject` rows, then a `#` summary line.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["trial", "origin_e", "origin_n", "p_value", "reject"])?;
            for t in &self.trials {
                w.write_record([
                    t.trial.to_string(),
                    t.origin_e.to_string(),
                    t.origin_n.to_string(),
                    t.p_value.to_string(),
                    t.reject.to_string(),
                ])?;
            }
            w.flush()?;
        }
        writeln!(out, "# {}", self.summary())
    }
}

/// Runs `config.trials` cluster-and-test rounds against the grid null.
/// Trial `t` draws its origin from `stream_rng(seed, ORIGIN, t)`, its
/// cluster from `stream_rng(seed, CLUSTER, t)` and its null replicates
/// under `derive_seed(seed, TRIAL, t)`.
pub fn flaw_demo(grid: &DensityGrid, config: &FlawDemoConfig) -> Result<FlawReport> {
    config.cluster.validate()?;
    if config.trials == 0 {
        return Err(Error::Config("flaw demo needs at least one trial".into()));
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::Config(format!("alpha {} must be in (0, 1)", config.alpha)));
    }
    if !config.relax_precondition && config.cluster.sigma_major > grid.extent() / 10.0 {
        return Err(Error::Config(format!(
            "cluster sigma {} m exceeds a tenth of the city extent ({} m); pass the relax flag to run anyway",
            config.cluster.sigma_major,
            grid.extent()
        )));
    }
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let origin = grid.sample_point(&mut stream_rng(config.seed, domain::ORIGIN, t as u64));
            let model = config.cluster.at(origin);
            let cluster = synth_cluster(&model, &mut stream_rng(config.seed, domain::CLUSTER, t as u64))?;
            let (de, dn) = config.landmark_offset;
            let landmark = Landmark::new(config.landmark_name.clone(), origin.offset(de, dn))?;
            let result = proximity_test(
                &cluster,
                &landmark,
                grid,
                config.replicates,
                config.metric,
                derive_seed(config.seed, domain::TRIAL, t as u64),
            )?;
            Ok(FlawTrial {
                trial: t + 1,
                origin_e: origin.easting,
                origin_n: origin.northing,
                p_value: result.p_value,
                reject: result.rejects(config.alpha),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rejected = trials.iter().filter(|t| t.reject).count();
    Ok(FlawReport {
        landmark_name: config.landmark_name.clone(),
        alpha: config.alpha,
        replicates: config.replicates,
        rejection_rate: rejected as f64 / trials.len() as f64,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central;
    use crate::geo::Zone;
    use crate::popsim::{synthetic_city, CityFixture};

    fn origin() -> PlanePoint {
        PlanePoint::new(240_000.0, 3_390_000.0, Zone::new(50, true).unwrap()).unwrap()
    }

    #[test]
    fn tiny_sigma_collapses_onto_origin() {
        let model = ClusterModel::isotropic(origin(), 1e-6, 200);
        let p = synth_cluster(&model, &mut stream_rng(1, domain::CLUSTER, 0)).unwrap();
        for q in p.points() {
            assert!((q.easting - 240_000.0).hypot(q.northing - 3_390_000.0) < 1e-3);
        }
    }

    #[test]
    fn large_cluster_centroid_is_near_origin() {
        let model = ClusterModel::isotropic(origin(), 1000.0, 10_000);
        let p = synth_cluster(&model, &mut stream_rng(2, domain::CLUSTER, 0)).unwrap();
        let c = central::centroid(&p).unwrap();
        let bound = 3.0 * 1000.0 / (10_000f64).sqrt();
        assert!((c.easting - 240_000.0).abs() < bound);
        assert!((c.northing - 3_390_000.0).abs() < bound);
    }

    #[test]
    fn invalid_models_are_config_errors() {
        assert!(matches!(ClusterModel::isotropic(origin(), 0.0, 5).validate(), Err(Error::Config(_))));
        assert!(matches!(ClusterModel::isotropic(origin(), 1.0, 0).validate(), Err(Error::Config(_))));
        assert!(ClusterModel::anisotropic(origin(), 3.0, -1.0, 0.0, 5).validate().is_err());
    }

    #[test]
    fn wide_cluster_needs_relax_flag() {
        let grid = synthetic_city(&CityFixture { cells: 20, ..CityFixture::default() }).unwrap();
        let mut cfg = FlawDemoConfig::new(ClusterModel::isotropic(origin(), 5_000.0, 155), 1);
        cfg.trials = 2;
        cfg.replicates = 9;
        assert!(matches!(flaw_demo(&grid, &cfg), Err(Error::Config(_))));
        cfg.relax_precondition = true;
        assert_eq!(flaw_demo(&grid, &cfg).unwrap().trials.len(), 2);
    }

    #[test]
    fn report_csv_layout() {
        let report = FlawReport {
            landmark_name: "X".into(),
            alpha: 0.05,
            replicates: 9,
            trials: vec![FlawTrial { trial: 1, origin_e: 1.5, origin_n: 2.0, p_value: 0.1, reject: false }],
            rejection_rate: 0.0,
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("trial,origin_e,origin_n,p_value,reject"));
        assert_eq!(lines.next(), Some("1,1.5,2,0.1,false"));
        assert!(lines.next().unwrap().starts_with("# landmark=X trials=1 rejected=0"));
    }
}

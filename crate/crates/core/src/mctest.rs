//! Monte Carlo rank tests.
//!
//! Two tests share the same p-value machinery:
//!
//! * [`landmark_center_test`] asks whether a landmark can be the center of
//!   the case cloud. The observed statistic is the distance from the
//!   full-sample center to the landmark; replicates are the distances from
//!   the full-sample center to resampled centers. Large observed values
//!   reject.
//! * [`proximity_test`] replicates the population-density proximity test:
//!   the observed statistic is the median case-to-landmark distance,
//!   replicates are the same median for patterns drawn from a null sampler.
//!   Small observed values reject. The test is kept as a replication target;
//!   its null model has no special point, so clustered data reject it
//!   around any landmark (see [`crate::synth::flaw_demo`]).
//!
//! p-values are `(1 + #{replicates at least as extreme}) / (count + 1)`;
//! ties with the observed value count against rejection.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::central::{median_in_place, CenterEstimator};
use crate::error::{Error, Result};
use crate::geo::{self, EarthModel, GeoPoint, PlanePoint};
use crate::pattern::{CasePattern, Landmark};
use crate::resample::{draw_indices, resample_centers, ResamplePlan};
use crate::seeding::{domain, stream_rng};

pub const DEFAULT_NULL_REPLICATES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Large observed values are evidence against the null.
    ObservedLarge,
    /// Small observed values are evidence against the null.
    ObservedSmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Planar distance in the UTM zone.
    Euclidean,
    /// Great-circle distance on the mean-radius sphere.
    Haversine,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Haversine => "haversine",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "utm" => Ok(Metric::Euclidean),
            "haversine" => Ok(Metric::Haversine),
            _ => Err(Error::Input(format!("unknown metric {s:?} (expected euclidean or haversine)"))),
        }
    }
}

impl Metric {
    pub fn distance(self, a: PlanePoint, b: PlanePoint) -> Result<f64> {
        match self {
            Metric::Euclidean => geo::euclidean_distance(a, b),
            Metric::Haversine => geo::haversine_distance(
                geo::utm_inverse(a, EarthModel::WGS84)?,
                geo::utm_inverse(b, EarthModel::WGS84)?,
                EarthModel::SPHERE,
            ),
        }
    }
}

/// Point a distance is measured to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Plane(PlanePoint),
    Geo(GeoPoint),
}

impl Target {
    pub fn of_landmark(landmark: &Landmark, metric: Metric) -> Result<Target> {
        Ok(match metric {
            Metric::Euclidean => Target::Plane(landmark.location),
            Metric::Haversine => Target::Geo(landmark.geo_point()?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    /// The observed statistic, metres.
    pub observed: f64,
    pub replicates: Vec<f64>,
    pub p_value: f64,
    pub direction: Direction,
    /// Replicates exactly equal to the observed statistic.
    pub ties: usize,
    pub seed: u64,
}

impl TestResult {
    pub fn from_replicates(observed: f64, replicates: Vec<f64>, direction: Direction, seed: u64) -> Self {
        let (p_value, ties) = rank_p_value(observed, &replicates, direction);
        TestResult {
            observed,
            replicates,
            p_value,
            direction,
            ties,
            seed,
        }
    }

    pub fn count(&self) -> usize {
        self.replicates.len()
    }

    /// `p * (count + 1)`, always an integer in `1..=count + 1`.
    pub fn rank(&self) -> usize {
        (self.p_value * (self.count() + 1) as f64).round() as usize
    }

    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value <= alpha
    }

    pub fn replicate_median(&self) -> f64 {
        let mut v = self.replicates.clone();
        median_in_place(&mut v)
    }

    /// Writes `replicate,statistic`; row 0 is the observed statistic.
    pub fn write_csv(&self, out: impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["replicate", "statistic"])?;
        w.write_record(["0".to_string(), self.observed.to_string()])?;
        for (i, r) in self.replicates.iter().enumerate() {
            w.write_record([(i + 1).to_string(), r.to_string()])?;
        }
        w.flush()
    }
}

/// Monte Carlo p-value and tie count.
///
/// For [`Direction::ObservedLarge`] this is the rank of the observed value
/// in the decreasing series of observed-plus-replicates, divided by
/// `count + 1`; equivalently `(1 + #{r >= observed}) / (count + 1)`.
pub fn rank_p_value(observed: f64, replicates: &[f64], direction: Direction) -> (f64, usize) {
    let at_least_as_extreme = replicates
        .iter()
        .filter(|&&r| match direction {
            Direction::ObservedLarge => r >= observed,
            Direction::ObservedSmall => r <= observed,
        })
        .count();
    let ties = replicates.iter().filter(|&&r| r == observed).count();
    ((1 + at_least_as_extreme) as f64 / (replicates.len() + 1) as f64, ties)
}

/// Median distance from the cases to `target`; even N averages the two
/// middle distances.
pub fn median_distance(pattern: &CasePattern, target: Target, metric: Metric) -> Result<f64> {
    let mut d = distances(pattern, target, metric)?;
    Ok(median_in_place(&mut d))
}

fn distances(pattern: &CasePattern, target: Target, metric: Metric) -> Result<Vec<f64>> {
    match (metric, target) {
        (Metric::Euclidean, Target::Plane(t)) => pattern
            .points()
            .iter()
            .map(|&p| geo::euclidean_distance(p, t))
            .collect(),
        (Metric::Euclidean, Target::Geo(_)) => Err(Error::Input(
            "euclidean distance needs a planar target; project it first".into(),
        )),
        (Metric::Haversine, target) => {
            let t = match target {
                Target::Geo(g) => g,
                Target::Plane(p) => geo::utm_inverse(p, EarthModel::WGS84)?,
            };
            pattern
                .geo_points()?
                .into_iter()
                .map(|g| geo::haversine_distance(g, t, EarthModel::SPHERE))
                .collect()
        }
    }
}

/// Distance-to-center test of whether `landmark` is the center of `pattern`,
/// in the plane.
pub fn landmark_center_test(
    pattern: &CasePattern,
    landmark: &Landmark,
    plan: &ResamplePlan,
    estimator: CenterEstimator,
) -> Result<TestResult> {
    landmark_center_test_with_metric(pattern, landmark, plan, estimator, Metric::Euclidean)
}

pub fn landmark_center_test_with_metric(
    pattern: &CasePattern,
    landmark: &Landmark,
    plan: &ResamplePlan,
    estimator: CenterEstimator,
    metric: Metric,
) -> Result<TestResult> {
    landmark.check_zone(pattern.zone())?;
    plan.validate(pattern.len())?;
    if plan.is_degenerate_for(pattern.len()) {
        return Err(Error::DegenerateCloud);
    }
    let full = estimator.estimate(pattern)?;
    let cloud = resample_centers(pattern, plan, estimator)?;
    if cloud.degenerate {
        return Err(Error::DegenerateCloud);
    }
    let observed = metric.distance(full, landmark.location)?;
    let replicates = cloud
        .points
        .par_iter()
        .map(|&c| metric.distance(full, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(TestResult::from_replicates(
        observed,
        replicates,
        Direction::ObservedLarge,
        plan.seed,
    ))
}

/// Source of null-model patterns.
pub trait NullSampler: Sync {
    fn sample_pattern(&self, n: usize, rng: &mut dyn RngCore) -> Result<CasePattern>;
}

/// Null model that resamples a fixed pattern.
pub struct PatternResampler<'a> {
    pub pattern: &'a CasePattern,
    pub with_replacement: bool,
}

impl NullSampler for PatternResampler<'_> {
    fn sample_pattern(&self, n: usize, rng: &mut dyn RngCore) -> Result<CasePattern> {
        if !self.with_replacement && n > self.pattern.len() {
            return Err(Error::Plan(format!(
                "cannot draw {n} of {} cases without replacement",
                self.pattern.len()
            )));
        }
        let idx = draw_indices(rng, self.pattern.len(), n, self.with_replacement);
        self.pattern.select(&idx)
    }
}

/// Median-distance proximity test against a null sampler. Replicate `i`
/// uses `stream_rng(seed, NULL_PATTERN, i)`.
pub fn proximity_test(
    observed: &CasePattern,
    landmark: &Landmark,
    null_sampler: &dyn NullSampler,
    replicates: usize,
    metric: Metric,
    seed: u64,
) -> Result<TestResult> {
    if replicates == 0 {
        return Err(Error::Input("at least one null replicate is required".into()));
    }
    landmark.check_zone(observed.zone())?;
    let target = Target::of_landmark(landmark, metric)?;
    let n = observed.len();
    let m0 = median_distance(observed, target, metric)?;
    let meds = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, domain::NULL_PATTERN, i as u64);
            let sim = null_sampler.sample_pattern(n, &mut rng)?;
            if sim.len() != n {
                return Err(Error::Input(format!(
                    "null sampler returned {} points, observed pattern has {n}",
                    sim.len()
                )));
            }
            if sim.zone() != observed.zone() {
                return Err(Error::ZoneMismatch(observed.zone(), sim.zone()));
            }
            median_distance(&sim, target, metric)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TestResult::from_replicates(m0, meds, Direction::ObservedSmall, seed))
}

/// Single-point version: is `center` closer to the landmark than points
/// drawn from the null? Replicate `i` uses `stream_rng(seed, NULL_POINT, i)`.
pub fn point_proximity_test(
    center: PlanePoint,
    landmark: &Landmark,
    null_sampler: &dyn NullSampler,
    count: usize,
    metric: Metric,
    seed: u64,
) -> Result<TestResult> {
    if count == 0 {
        return Err(Error::Input("count must be at least 1".into()));
    }
    landmark.check_zone(center.zone)?;
    let observed = metric.distance(center, landmark.location)?;
    let target = Target::of_landmark(landmark, metric)?;
    let reps = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, domain::NULL_POINT, i as u64);
            let sim = null_sampler.sample_pattern(1, &mut rng)?;
            if sim.len() != 1 {
                return Err(Error::Input(format!("null sampler returned {} points, expected 1", sim.len())));
            }
            median_distance(&sim, target, metric)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TestResult::from_replicates(observed, reps, Direction::ObservedSmall, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::Zone;

    fn zone() -> Zone {
        Zone::new(50, true).unwrap()
    }

    fn pattern(n: usize) -> CasePattern {
        let xy: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = i as f64;
                (240_000.0 + (t * 37.0) % 101.0 * 30.0, 3_390_000.0 + (t * 53.0) % 97.0 * 20.0)
            })
            .collect();
        CasePattern::from_xy(&xy, zone()).unwrap()
    }

    fn landmark_at(p: PlanePoint) -> Landmark {
        Landmark::new("L", p).unwrap()
    }

    #[test]
    fn p_value_rules() {
        let reps = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(rank_p_value(5.0, &reps, Direction::ObservedLarge), (0.2, 0));
        assert_eq!(rank_p_value(0.0, &reps, Direction::ObservedLarge), (1.0, 0));
        assert_eq!(rank_p_value(3.0, &reps, Direction::ObservedLarge), (0.6, 1));
        assert_eq!(rank_p_value(0.0, &reps, Direction::ObservedSmall), (0.2, 0));
        assert_eq!(rank_p_value(2.0, &reps, Direction::ObservedSmall), (0.6, 1));
    }

    #[test]
    fn ties_never_lower_p() {
        let mut reps = vec![1.0, 2.0, 5.0];
        let (before, _) = rank_p_value(2.0, &reps, Direction::ObservedLarge);
        reps.push(2.0);
        let (after, ties) = rank_p_value(2.0, &reps, Direction::ObservedLarge);
        assert!(after >= before);
        assert_eq!(ties, 2);
    }

    #[test]
    fn median_distance_examples() {
        let z = zone();
        let one = CasePattern::from_xy(&[(7000.0, 0.0)], z).unwrap();
        let origin = Target::Plane(PlanePoint::new(0.0, 0.0, z).unwrap());
        assert_eq!(median_distance(&one, origin, Metric::Euclidean).unwrap(), 7000.0);
        let four = CasePattern::from_xy(&[(1000.0, 0.0), (0.0, 2000.0), (9000.0, 0.0), (0.0, -10000.0)], z).unwrap();
        assert_eq!(median_distance(&four, origin, Metric::Euclidean).unwrap(), 5500.0);
        let g = Target::Geo(GeoPoint::new(30.6, 114.3).unwrap());
        assert!(matches!(median_distance(&four, g, Metric::Euclidean), Err(Error::Input(_))));
    }

    #[test]
    fn haversine_median_matches_planar_locally() {
        let p = pattern(31);
        let t = PlanePoint::new(241_000.0, 3_391_000.0, zone()).unwrap();
        let e = median_distance(&p, Target::Plane(t), Metric::Euclidean).unwrap();
        let h = median_distance(&p, Target::Plane(t), Metric::Haversine).unwrap();
        assert!((e - h).abs() / e < 2e-3, "{e} vs {h}");
    }

    #[test]
    fn landmark_at_center_gives_p_one() {
        let p = pattern(80);
        let plan = ResamplePlan::new(40, 99, false, 1);
        let full = CenterEstimator::Centroid.estimate(&p).unwrap();
        let r = landmark_center_test(&p, &landmark_at(full), &plan, CenterEstimator::Centroid).unwrap();
        assert_eq!(r.observed, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.direction, Direction::ObservedLarge);
    }

    #[test]
    fn distant_landmark_gives_minimal_p() {
        let p = pattern(80);
        let plan = ResamplePlan::new(40, 99, true, 1);
        let full = CenterEstimator::CenterPoint.estimate(&p).unwrap();
        let r = landmark_center_test(&p, &landmark_at(full.offset(100_000.0, 0.0)), &plan, CenterEstimator::CenterPoint).unwrap();
        assert_eq!(r.p_value, 0.01);
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn degenerate_plan_is_an_error() {
        let p = pattern(30);
        let plan = ResamplePlan::new(30, 99, false, 1);
        let lm = landmark_at(p.points()[0]);
        assert!(matches!(
            landmark_center_test(&p, &lm, &plan, CenterEstimator::Centroid),
            Err(Error::DegenerateCloud)
        ));
    }

    #[test]
    fn landmark_in_other_zone_is_rejected() {
        let p = pattern(30);
        let lm = landmark_at(PlanePoint::new(0.0, 0.0, Zone::new(49, true).unwrap()).unwrap());
        let plan = ResamplePlan::new(10, 9, false, 1);
        assert!(matches!(
            landmark_center_test(&p, &lm, &plan, CenterEstimator::Centroid),
            Err(Error::ZoneMismatch(..))
        ));
    }

    #[test]
    fn moving_landmark_away_never_raises_p() {
        let p = pattern(100);
        let plan = ResamplePlan::new(50, 199, false, 17);
        let full = CenterEstimator::Centroid.estimate(&p).unwrap();
        let mut last = f64::INFINITY;
        for k in 0..30 {
            let d = k as f64 * 15.0;
            let lm = landmark_at(full.offset(d * 0.6, d * 0.8));
            let r = landmark_center_test(&p, &lm, &plan, CenterEstimator::Centroid).unwrap();
            assert!(r.p_value <= last);
            last = r.p_value;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn point_test_at_landmark_is_minimal() {
        let p = pattern(50);
        let sampler = PatternResampler { pattern: &p, with_replacement: true };
        let lm = landmark_at(PlanePoint::new(250_000.0, 3_400_000.0, zone()).unwrap());
        let r = point_proximity_test(lm.location, &lm, &sampler, 500, Metric::Euclidean, 3).unwrap();
        assert_eq!(r.observed, 0.0);
        assert!((r.p_value - 1.0 / 501.0).abs() < 1e-15);
    }

    struct WrongSize;
    impl NullSampler for WrongSize {
        fn sample_pattern(&self, _n: usize, _rng: &mut dyn RngCore) -> Result<CasePattern> {
            CasePattern::from_xy(&[(0.0, 0.0)], Zone::new(50, true).unwrap())
        }
    }

    #[test]
    fn proximity_rejects_wrong_sized_null() {
        let p = pattern(10);
        let lm = landmark_at(p.points()[0]);
        assert!(matches!(
            proximity_test(&p, &lm, &WrongSize, 9, Metric::Euclidean, 1),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn proximity_default_is_observed_small() {
        let p = pattern(40);
        let sampler = PatternResampler { pattern: &p, with_replacement: true };
        let lm = landmark_at(p.points()[3]);
        let r = proximity_test(&p, &lm, &sampler, 99, Metric::Haversine, 5).unwrap();
        assert_eq!(r.direction, Direction::ObservedSmall);
        assert_eq!(r.count(), 99);
        assert!(r.rank() >= 1 && r.rank() <= 100);
    }

    #[test]
    fn result_csv_starts_with_observed() {
        let r = TestResult::from_replicates(2.5, vec![1.0, 3.0], Direction::ObservedLarge, 7);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "replicate,statistic\n0,2.5\n1,1\n2,3\n");
    }
}

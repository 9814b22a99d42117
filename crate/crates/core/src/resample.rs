//! Resampled center clouds and their summaries.
//!
//! Replicate `i` of a plan draws its indices from the generator
//! `stream_rng(seed, RESAMPLE, i)`, and the drawn indices are sorted before
//! the estimator runs. The cloud is therefore a pure function of
//! `(pattern, plan, estimator)`, whatever the rayon pool size.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::central::{CenterContext, CenterEstimator};
use crate::error::{Error, Result};
use crate::geo::PlanePoint;
use crate::pattern::CasePattern;
use crate::seeding::{domain, stream_rng};

pub const DEFAULT_REPLICATES: usize = 999;
pub const DEFAULT_SIZES: [usize; 5] = [155, 150, 100, 80, 50];
pub const DEFAULT_ELLIPSE_LEVEL: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResamplePlan {
    /// Size of each resample.
    pub n: usize,
    /// Number of resamples.
    pub m: usize,
    pub with_replacement: bool,
    pub seed: u64,
}

impl ResamplePlan {
    pub fn new(n: usize, m: usize, with_replacement: bool, seed: u64) -> Self {
        ResamplePlan {
            n,
            m,
            with_replacement,
            seed,
        }
    }

    pub fn validate(&self, population: usize) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Plan("m must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Plan("n must be at least 1".into()));
        }
        if !self.with_replacement && self.n > population {
            return Err(Error::Plan(format!(
                "cannot draw n = {} without replacement from N = {population} cases",
                self.n
            )));
        }
        Ok(())
    }

    /// A without-replacement plan with n = N reproduces the full sample in
    /// every replicate.
    pub fn is_degenerate_for(&self, population: usize) -> bool {
        !self.with_replacement && self.n == population
    }

    pub fn sampling_label(&self) -> &'static str {
        if self.with_replacement {
            "with"
        } else {
            "without"
        }
    }
}

/// Indices of one resample in ascending order.
pub fn draw_indices<R: Rng + ?Sized>(rng: &mut R, population: usize, n: usize, with_replacement: bool) -> Vec<usize> {
    let mut out = if with_replacement {
        (0..n).map(|_| rng.random_range(0..population)).collect::<Vec<_>>()
    } else {
        // partial Fisher-Yates: the first n slots end up a uniform n-subset
        let mut pool: Vec<usize> = (0..population).collect();
        for j in 0..n {
            let k = rng.random_range(j..population);
            pool.swap(j, k);
        }
        pool.truncate(n);
        pool
    };
    out.sort_unstable();
    out
}

/// Indices of replicate `i` of `plan`.
pub fn replicate_indices(plan: &ResamplePlan, population: usize, i: usize) -> Vec<usize> {
    let mut rng = stream_rng(plan.seed, domain::RESAMPLE, i as u64);
    draw_indices(&mut rng, population, plan.n, plan.with_replacement)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterCloud {
    pub points: Vec<PlanePoint>,
    pub estimator: CenterEstimator,
    pub plan: ResamplePlan,
    /// Every point coincides.
    pub degenerate: bool,
}

impl CenterCloud {
    pub fn from_points(points: Vec<PlanePoint>, estimator: CenterEstimator, plan: ResamplePlan) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("a center cloud needs at least one point".into()));
        }
        let first = points[0];
        let degenerate = points
            .iter()
            .all(|p| p.easting == first.easting && p.northing == first.northing);
        Ok(CenterCloud {
            points,
            estimator,
            plan,
            degenerate,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean(&self) -> (f64, f64) {
        let m = self.points.len() as f64;
        let (se, sn) = self
            .points
            .iter()
            .fold((0.0, 0.0), |(a, b), p| (a + p.easting, b + p.northing));
        (se / m, sn / m)
    }

    /// Writes `replicate,easting,northing`, replicates numbered from 1.
    pub fn write_csv(&self, out: impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["replicate", "easting", "northing"])?;
        for (i, p) in self.points.iter().enumerate() {
            w.write_record([(i + 1).to_string(), p.easting.to_string(), p.northing.to_string()])?;
        }
        w.flush()
    }
}

/// The center of each of `plan.m` resamples of `pattern`.
pub fn resample_centers(pattern: &CasePattern, plan: &ResamplePlan, estimator: CenterEstimator) -> Result<CenterCloud> {
    plan.validate(pattern.len())?;
    let ctx = CenterContext::new(pattern, estimator)?;
    let population = pattern.len();
    let points = (0..plan.m)
        .into_par_iter()
        .map_init(Vec::new, |scratch, i| {
            let idx = replicate_indices(plan, population, i);
            ctx.center(&idx, scratch)
        })
        .collect::<Result<Vec<_>>>()?;
    CenterCloud::from_points(points, estimator, *plan)
}

/// Root-mean-square distance of cloud points to their mean.
pub fn cloud_spread(cloud: &CenterCloud) -> f64 {
    if cloud.degenerate {
        return 0.0;
    }
    let (me, mn) = cloud.mean();
    let ss: f64 = cloud
        .points
        .iter()
        .map(|p| (p.easting - me).powi(2) + (p.northing - mn).powi(2))
        .sum();
    (ss / cloud.points.len() as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ellipse {
    pub center: PlanePoint,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Angle of the major axis from the easting axis, in [0, pi).
    pub orientation: f64,
    pub level: f64,
}

impl Ellipse {
    pub fn axis_ratio(&self) -> f64 {
        self.semi_major / self.semi_minor
    }

    pub fn contains(&self, p: PlanePoint) -> bool {
        let dx = p.easting - self.center.easting;
        let dy = p.northing - self.center.northing;
        let (s, c) = self.orientation.sin_cos();
        let u = c * dx + s * dy;
        let v = -s * dx + c * dy;
        if self.semi_minor == 0.0 {
            return v == 0.0 && u.abs() <= self.semi_major;
        }
        (u / self.semi_major).powi(2) + (v / self.semi_minor).powi(2) <= 1.0
    }
}

/// Quantile of the chi-square distribution with two degrees of freedom.
pub fn chi2_2df_quantile(level: f64) -> f64 {
    -2.0 * (1.0 - level).ln()
}

/// Eigen-decomposition of a symmetric 2x2 matrix `[[a, b], [b, c]]`:
/// `(larger, smaller, angle of the larger eigenvector in [0, pi))`.
pub fn symmetric_eigen(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let half_trace = 0.5 * (a + c);
    let r = (0.5 * (a - c)).hypot(b);
    let mut theta = 0.5 * (2.0 * b).atan2(a - c);
    if theta < 0.0 {
        theta += std::f64::consts::PI;
    }
    if theta >= std::f64::consts::PI {
        theta -= std::f64::consts::PI;
    }
    (half_trace + r, half_trace - r, theta)
}

/// Covariance ellipse of a point set: centered at the mean, axes along the
/// sample-covariance eigenvectors, scaled so a bivariate normal puts mass
/// `level` inside.
pub fn covariance_ellipse(points: &[PlanePoint], level: f64) -> Result<Ellipse> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Input(format!("ellipse level {level} must be in (0, 1)")));
    }
    if points.len() < 3 {
        return Err(Error::Input("an ellipse needs at least three points".into()));
    }
    let m = points.len() as f64;
    let me = points.iter().map(|p| p.easting).sum::<f64>() / m;
    let mn = points.iter().map(|p| p.northing).sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let dx = p.easting - me;
        let dy = p.northing - mn;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let (sxx, sxy, syy) = (sxx / (m - 1.0), sxy / (m - 1.0), syy / (m - 1.0));
    let (big, mut small, orientation) = symmetric_eigen(sxx, sxy, syy);
    if big <= 0.0 {
        return Err(Error::DegenerateCloud);
    }
    if small <= 1e-12 * big {
        small = 0.0;
    }
    let scale = chi2_2df_quantile(level).sqrt();
    Ok(Ellipse {
        center: PlanePoint {
            easting: me,
            northing: mn,
            zone: points[0].zone,
        },
        semi_major: scale * big.sqrt(),
        semi_minor: scale * small.sqrt(),
        orientation,
        level,
    })
}

pub fn concentration_ellipse(cloud: &CenterCloud, level: f64) -> Result<Ellipse> {
    if cloud.degenerate {
        return Err(Error::DegenerateCloud);
    }
    covariance_ellipse(&cloud.points, level)
}

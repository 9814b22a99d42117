//! Center estimators: the centroid (coordinate-wise mean) and the
//! center-point (coordinate-wise median).
//!
//! Both operate on UTM coordinates. [`CenterEstimator::GeographicCenterPoint`]
//! takes the median of latitudes and longitudes instead and projects the
//! result, for comparison with analyses done on raw lat/lon.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{self, EarthModel, GeoPoint, PlanePoint, Zone};
use crate::pattern::CasePattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterEstimator {
    Centroid,
    CenterPoint,
    /// Coordinate-wise median of lat/lon, projected into the pattern's zone.
    GeographicCenterPoint,
}

impl CenterEstimator {
    pub fn label(self) -> &'static str {
        match self {
            CenterEstimator::Centroid => "centroid",
            CenterEstimator::CenterPoint => "center-point",
            CenterEstimator::GeographicCenterPoint => "center-point-geographic",
        }
    }

    pub fn estimate(self, pattern: &CasePattern) -> Result<PlanePoint> {
        let all: Vec<usize> = (0..pattern.len()).collect();
        CenterContext::new(pattern, self)?.center(&all, &mut Vec::new())
    }
}

impl fmt::Display for CenterEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CenterEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "centroid" | "mean" => Ok(CenterEstimator::Centroid),
            "center-point" | "centerpoint" | "median" => Ok(CenterEstimator::CenterPoint),
            "center-point-geographic" => Ok(CenterEstimator::GeographicCenterPoint),
            _ => Err(Error::Input(format!(
                "unknown estimator {s:?} (expected centroid or center-point)"
            ))),
        }
    }
}

/// Median of a scratch buffer; reorders it. Even length averages the two
/// middle order statistics.
pub fn median_in_place(v: &mut [f64]) -> f64 {
    let k = v.len();
    assert!(k > 0, "median of an empty slice");
    let mid = k / 2;
    let (lower, upper, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if k % 2 == 1 {
        upper
    } else {
        let lower_max = lower.iter().copied().max_by(f64::total_cmp).expect("k >= 2");
        0.5 * (lower_max + upper)
    }
}

pub fn mean(v: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, count) = v.into_iter().fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    sum / count as f64
}

/// Columnar copy of a pattern, ready for repeated estimation on index
/// subsets.
pub struct CenterContext {
    estimator: CenterEstimator,
    zone: Zone,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl CenterContext {
    pub fn new(pattern: &CasePattern, estimator: CenterEstimator) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::Input("center of an empty pattern".into()));
        }
        let (x, y) = match estimator {
            CenterEstimator::GeographicCenterPoint => {
                let g = pattern.geo_points()?;
                (g.iter().map(|p| p.lon).collect(), g.iter().map(|p| p.lat).collect())
            }
            _ => (pattern.eastings(), pattern.northings()),
        };
        Ok(CenterContext {
            estimator,
            zone: pattern.zone(),
            x,
            y,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Center of the cases at `indices` (repeats count with multiplicity).
    pub fn center(&self, indices: &[usize], scratch: &mut Vec<f64>) -> Result<PlanePoint> {
        if indices.is_empty() {
            return Err(Error::Input("center of an empty selection".into()));
        }
        match self.estimator {
            CenterEstimator::Centroid => PlanePoint::new(
                mean(indices.iter().map(|&i| self.x[i])),
                mean(indices.iter().map(|&i| self.y[i])),
                self.zone,
            ),
            CenterEstimator::CenterPoint => {
                let (e, n) = self.medians(indices, scratch);
                PlanePoint::new(e, n, self.zone)
            }
            CenterEstimator::GeographicCenterPoint => {
                let (lon, lat) = self.medians(indices, scratch);
                geo::utm_forward(GeoPoint::new(lat, lon)?, Some(self.zone), EarthModel::WGS84)
            }
        }
    }

    fn medians(&self, indices: &[usize], scratch: &mut Vec<f64>) -> (f64, f64) {
        scratch.clear();
        scratch.extend(indices.iter().map(|&i| self.x[i]));
        let mx = median_in_place(scratch);
        scratch.clear();
        scratch.extend(indices.iter().map(|&i| self.y[i]));
        let my = median_in_place(scratch);
        (mx, my)
    }
}

pub fn centroid(pattern: &CasePattern) -> Result<PlanePoint> {
    CenterEstimator::Centroid.estimate(pattern)
}

pub fn center_point(pattern: &CasePattern) -> Result<PlanePoint> {
    CenterEstimator::CenterPoint.estimate(pattern)
}

/// Largest pairwise distance in the pattern.
pub fn diameter(pattern: &CasePattern) -> f64 {
    let pts = pattern.points();
    let mut best: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max((a.easting - b.easting).hypot(a.northing - b.northing));
        }
    }
    best
}

/// How far each estimator moves off the rotated estimate when the pattern
/// is rotated about its centroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationReport {
    pub angle: f64,
    pub centroid_shift: f64,
    pub center_point_shift: f64,
    pub diameter: f64,
}

/// Rotates the pattern by `angle` radians about its centroid, re-estimates
/// both centers, and compares them with the original centers rotated by
/// the same map.
pub fn rotation_equivariance_report(pattern: &CasePattern, angle: f64) -> Result<RotationReport> {
    if pattern.len() < 2 {
        return Err(Error::Input("rotation report needs at least two cases".into()));
    }
    let pivot = centroid(pattern)?;
    let (s, c) = angle.sin_cos();
    let rotate = |p: PlanePoint| {
        let dx = p.easting - pivot.easting;
        let dy = p.northing - pivot.northing;
        PlanePoint {
            easting: pivot.easting + c * dx - s * dy,
            northing: pivot.northing + s * dx + c * dy,
            zone: p.zone,
        }
    };
    let rotated = pattern.map_points(rotate)?;
    let shift = |est: CenterEstimator| -> Result<f64> {
        let expected = rotate(est.estimate(pattern)?);
        geo::euclidean_distance(est.estimate(&rotated)?, expected)
    };
    Ok(RotationReport {
        angle,
        centroid_shift: shift(CenterEstimator::Centroid)?,
        center_point_shift: shift(CenterEstimator::CenterPoint)?,
        diameter: diameter(pattern),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(xy: &[(f64, f64)]) -> CasePattern {
        CasePattern::from_xy(xy, Zone::new(50, true).unwrap()).unwrap()
    }

    fn xy(p: PlanePoint) -> (f64, f64) {
        (p.easting, p.northing)
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(xy(centroid(&pat(&[(0.0, 0.0), (0.0, 10.0), (10.0, 0.0), (10.0, 10.0)])).unwrap()), (5.0, 5.0));
        assert_eq!(xy(centroid(&pat(&[(3.5, -2.0)])).unwrap()), (3.5, -2.0));
        let c = centroid(&pat(&[(0.0, 0.0), (0.0, 10.0), (10.0, 0.0)])).unwrap();
        assert!((c.easting - 10.0 / 3.0).abs() < 1e-12 && (c.northing - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn center_point_examples() {
        assert_eq!(xy(center_point(&pat(&[(0.0, 0.0), (0.0, 10.0), (10.0, 0.0)])).unwrap()), (0.0, 0.0));
        assert_eq!(xy(center_point(&pat(&[(0.0, 0.0), (10.0, 10.0)])).unwrap()), (5.0, 5.0));
        assert_eq!(xy(center_point(&pat(&[(7.0, 8.0)])).unwrap()), (7.0, 8.0));
    }

    #[test]
    fn duplicates_weigh_by_multiplicity() {
        let p = pat(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (12.0, 12.0)]);
        assert_eq!(xy(centroid(&p).unwrap()), (3.0, 3.0));
        assert_eq!(xy(center_point(&p).unwrap()), (0.0, 0.0));
    }

    #[test]
    fn median_even_rule() {
        let mut v = vec![10.0, 1.0, 9.0, 2.0];
        assert_eq!(median_in_place(&mut v), 5.5);
        let mut v = vec![3.0];
        assert_eq!(median_in_place(&mut v), 3.0);
    }

    #[test]
    fn three_point_witness_at_45_degrees() {
        // Worked by hand: the rotated center-point sits 5*sqrt(2) from the
        // rotated original center-point; the diameter is 10*sqrt(2).
        let p = pat(&[(0.0, 0.0), (0.0, 10.0), (10.0, 0.0)]);
        let r = rotation_equivariance_report(&p, std::f64::consts::FRAC_PI_4).unwrap();
        assert!(r.centroid_shift < 1e-9 * r.diameter);
        assert!((r.center_point_shift - 5.0 * 2f64.sqrt()).abs() < 1e-9, "{r:?}");
        assert!((r.diameter - 10.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(r.center_point_shift > 0.1 * r.diameter);
    }

    #[test]
    fn square_is_symmetric_under_quarter_turn() {
        let p = pat(&[(0.0, 0.0), (0.0, 10.0), (10.0, 0.0), (10.0, 10.0)]);
        let r = rotation_equivariance_report(&p, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(r.centroid_shift < 1e-9);
        assert!(r.center_point_shift < 1e-9);
    }

    #[test]
    fn rotation_report_needs_two_cases() {
        assert!(rotation_equivariance_report(&pat(&[(1.0, 1.0)]), 0.3).is_err());
    }

    #[test]
    fn geographic_center_point_projects_lat_lon_medians() {
        let text = "id,lat,lon\na,30.60,114.20\nb,30.62,114.30\nc,30.70,114.25\n";
        let p = crate::pattern::read_cases(std::path::Path::new("t.csv"), text.as_bytes(), None).unwrap();
        let g = CenterEstimator::GeographicCenterPoint.estimate(&p).unwrap();
        let expected = geo::utm_forward(GeoPoint::new(30.62, 114.25).unwrap(), Some(p.zone()), EarthModel::WGS84).unwrap();
        assert!(geo::euclidean_distance(g, expected).unwrap() < 1e-6);
    }

    #[test]
    fn estimator_names_parse() {
        assert_eq!("centroid".parse::<CenterEstimator>().unwrap(), CenterEstimator::Centroid);
        assert_eq!("center-point".parse::<CenterEstimator>().unwrap(), CenterEstimator::CenterPoint);
        assert!("mode".parse::<CenterEstimator>().is_err());
    }
}

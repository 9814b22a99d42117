//! Coordinates, the WGS84 Transverse Mercator (UTM) projection, and the two
//! distance metrics: great-circle (Haversine) on a sphere and Euclidean in
//! the UTM plane.
//!
//! The projection uses the Krüger series to sixth order in the third
//! flattening, which is accurate to well below a millimetre inside a zone.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// UTM scale on the central meridian.
pub const UTM_SCALE: f64 = 0.9996;
pub const UTM_FALSE_EASTING: f64 = 500_000.0;
pub const UTM_FALSE_NORTHING_SOUTH: f64 = 10_000_000.0;
/// UTM is defined for |lat| < 84 here; polar zones are not supported.
pub const UTM_MAX_LATITUDE: f64 = 84.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(Error::Input(format!("non-finite coordinate ({lat}, {lon})")));
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(Error::Input(format!("latitude {lat} outside [-90, 90]")));
        }
        if !(-180.0..180.0).contains(&lon) {
            return Err(Error::Input(format!("longitude {lon} outside [-180, 180)")));
        }
        Ok(GeoPoint { lat, lon })
    }
}

/// A UTM zone number (1 to 60) with its hemisphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zone {
    pub number: u8,
    pub north: bool,
}

impl Zone {
    pub fn new(number: u8, north: bool) -> Result<Self> {
        if !(1..=60).contains(&number) {
            return Err(Error::Input(format!("UTM zone {number} outside 1..=60")));
        }
        Ok(Zone { number, north })
    }

    /// Longitude of the zone's central meridian, degrees.
    pub fn central_meridian(self) -> f64 {
        f64::from(self.number) * 6.0 - 183.0
    }

    fn false_northing(self) -> f64 {
        if self.north {
            0.0
        } else {
            UTM_FALSE_NORTHING_SOUTH
        }
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.number, if self.north { 'N' } else { 'S' })
    }
}

impl FromStr for Zone {
    type Err = Error;

    /// Accepts `50N`, `50S`, `50n` or a bare `50` (northern).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (digits, north) = match s.chars().last() {
            Some('N' | 'n') => (&s[..s.len() - 1], true),
            Some('S' | 's') => (&s[..s.len() - 1], false),
            _ => (s, true),
        };
        let number: u8 = digits
            .parse()
            .map_err(|_| Error::Input(format!("bad UTM zone {s:?}")))?;
        Zone::new(number, north)
    }
}

/// A projected location in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub easting: f64,
    pub northing: f64,
    pub zone: Zone,
}

impl PlanePoint {
    pub fn new(easting: f64, northing: f64, zone: Zone) -> Result<Self> {
        if !easting.is_finite() || !northing.is_finite() {
            return Err(Error::Input(format!(
                "non-finite planar coordinate ({easting}, {northing})"
            )));
        }
        Ok(PlanePoint {
            easting,
            northing,
            zone,
        })
    }

    pub fn offset(self, de: f64, dn: f64) -> PlanePoint {
        PlanePoint {
            easting: self.easting + de,
            northing: self.northing + dn,
            zone: self.zone,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum EarthModel {
    Sphere { radius: f64 },
    Ellipsoid { a: f64, f: f64 },
}

impl EarthModel {
    /// IUGG mean Earth radius.
    pub const MEAN_RADIUS: f64 = 6_371_008.8;
    pub const SPHERE: EarthModel = EarthModel::Sphere {
        radius: Self::MEAN_RADIUS,
    };
    pub const WGS84: EarthModel = EarthModel::Ellipsoid {
        a: 6_378_137.0,
        f: 1.0 / 298.257_223_563,
    };

    pub fn validate(&self) -> Result<()> {
        match *self {
            EarthModel::Sphere { radius } if radius > 0.0 && radius.is_finite() => Ok(()),
            EarthModel::Sphere { radius } => Err(Error::Input(format!("sphere radius {radius} must be > 0"))),
            EarthModel::Ellipsoid { a, f } if a > 0.0 && a.is_finite() && f > 0.0 && f < 1.0 => Ok(()),
            EarthModel::Ellipsoid { a, f } => Err(Error::Input(format!(
                "ellipsoid requires a > 0 and 0 < f < 1 (got a = {a}, f = {f})"
            ))),
        }
    }
}

impl Default for EarthModel {
    fn default() -> Self {
        EarthModel::SPHERE
    }
}

/// Great-circle distance on a sphere, metres.
pub fn haversine_distance(a: GeoPoint, b: GeoPoint, model: EarthModel) -> Result<f64> {
    model.validate()?;
    let EarthModel::Sphere { radius } = model else {
        return Err(Error::Input("haversine distance needs a spherical earth model".into()));
    };
    for p in [a, b] {
        if !p.lat.is_finite() || !p.lon.is_finite() {
            return Err(Error::Input(format!("non-finite coordinate ({}, {})", p.lat, p.lon)));
        }
    }
    Ok(haversine_radians(
        a.lat.to_radians(),
        a.lon.to_radians(),
        b.lat.to_radians(),
        b.lon.to_radians(),
        radius,
    ))
}

pub(crate) fn haversine_radians(lat1: f64, lon1: f64, lat2: f64, lon2: f64, radius: f64) -> f64 {
    let s_lat = ((lat2 - lat1) / 2.0).sin();
    let s_lon = ((lon2 - lon1) / 2.0).sin();
    let h = (s_lat * s_lat + lat1.cos() * lat2.cos() * s_lon * s_lon).clamp(0.0, 1.0);
    2.0 * radius * h.sqrt().asin()
}

/// Zone number of a longitude: `floor((lon + 180) / 6) + 1`, clamped to 1..=60.
pub fn utm_zone_of(lon: f64) -> Result<u8> {
    if !lon.is_finite() || !(-180.0..180.0).contains(&lon) {
        return Err(Error::Input(format!("longitude {lon} outside [-180, 180)")));
    }
    let z = ((lon + 180.0) / 6.0).floor() as i64 + 1;
    Ok(z.clamp(1, 60) as u8)
}

/// Series coefficients for one ellipsoid.
struct Kruger {
    /// Rectifying radius.
    big_a: f64,
    n: f64,
    alpha: [f64; 6],
    beta: [f64; 6],
    delta: [f64; 6],
}

impl Kruger {
    fn new(a: f64, f: f64) -> Self {
        let n = f / (2.0 - f);
        let n2 = n * n;
        let n3 = n2 * n;
        let n4 = n3 * n;
        let n5 = n4 * n;
        let n6 = n5 * n;
        let big_a = a / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
        let alpha = [
            n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0
                + 7891.0 * n6 / 37800.0,
            13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0
                - 1_983_433.0 * n6 / 1_935_360.0,
            61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0
                + 167_603.0 * n6 / 181_440.0,
            49561.0 * n4 / 161_280.0 - 179.0 * n5 / 168.0 + 6_601_661.0 * n6 / 7_257_600.0,
            34729.0 * n5 / 80640.0 - 3_418_889.0 * n6 / 1_995_840.0,
            212_378_941.0 * n6 / 319_334_400.0,
        ];
        let beta = [
            n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0 - 81.0 * n5 / 512.0
                + 96199.0 * n6 / 604_800.0,
            n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0 + 46.0 * n5 / 105.0
                - 1_118_711.0 * n6 / 3_870_720.0,
            17.0 * n3 / 480.0 - 37.0 * n4 / 840.0 - 209.0 * n5 / 4480.0 + 5569.0 * n6 / 90720.0,
            4397.0 * n4 / 161_280.0 - 11.0 * n5 / 504.0 - 830_251.0 * n6 / 7_257_600.0,
            4583.0 * n5 / 161_280.0 - 108_847.0 * n6 / 3_991_680.0,
            20_648_693.0 * n6 / 638_668_800.0,
        ];
        let delta = [
            2.0 * n - 2.0 * n2 / 3.0 - 2.0 * n3 + 116.0 * n4 / 45.0 + 26.0 * n5 / 45.0
                - 2854.0 * n6 / 675.0,
            7.0 * n2 / 3.0 - 8.0 * n3 / 5.0 - 227.0 * n4 / 45.0 + 2704.0 * n5 / 315.0
                + 2323.0 * n6 / 945.0,
            56.0 * n3 / 15.0 - 136.0 * n4 / 35.0 - 1262.0 * n5 / 105.0 + 73814.0 * n6 / 2835.0,
            4279.0 * n4 / 630.0 - 332.0 * n5 / 35.0 - 399_572.0 * n6 / 14175.0,
            4174.0 * n5 / 315.0 - 144_838.0 * n6 / 6237.0,
            601_676.0 * n6 / 22275.0,
        ];
        Kruger {
            big_a,
            n,
            alpha,
            beta,
            delta,
        }
    }
}

fn ellipsoid_params(model: EarthModel) -> Result<(f64, f64)> {
    model.validate()?;
    match model {
        EarthModel::Ellipsoid { a, f } => Ok((a, f)),
        EarthModel::Sphere { .. } => Err(Error::Input(
            "UTM projection needs an ellipsoidal earth model".into(),
        )),
    }
}

/// Forward UTM projection. `zone` defaults to the point's own zone and
/// hemisphere; passing an explicit zone projects into that zone even if the
/// point lies outside it.
pub fn utm_forward(p: GeoPoint, zone: Option<Zone>, model: EarthModel) -> Result<PlanePoint> {
    let (a, f) = ellipsoid_params(model)?;
    let p = GeoPoint::new(p.lat, p.lon)?;
    if p.lat.abs() >= UTM_MAX_LATITUDE {
        return Err(Error::UnsupportedRegion(p.lat));
    }
    let zone = match zone {
        Some(z) => z,
        None => Zone::new(utm_zone_of(p.lon)?, p.lat >= 0.0)?,
    };
    let k = Kruger::new(a, f);

    let phi = p.lat.to_radians();
    let mut dlam = p.lon - zone.central_meridian();
    if dlam > 180.0 {
        dlam -= 360.0;
    } else if dlam < -180.0 {
        dlam += 360.0;
    }
    let lam = dlam.to_radians();

    let c = 2.0 * k.n.sqrt() / (1.0 + k.n);
    let sin_phi = phi.sin();
    let t = (sin_phi.atanh() - c * (c * sin_phi).atanh()).sinh();
    let xi_p = t.atan2(lam.cos());
    let eta_p = (lam.sin() / (1.0 + t * t).sqrt()).atanh();

    let mut xi = xi_p;
    let mut eta = eta_p;
    for (j, alpha) in k.alpha.iter().enumerate() {
        let m = 2.0 * (j as f64 + 1.0);
        xi += alpha * (m * xi_p).sin() * (m * eta_p).cosh();
        eta += alpha * (m * xi_p).cos() * (m * eta_p).sinh();
    }

    PlanePoint::new(
        UTM_FALSE_EASTING + UTM_SCALE * k.big_a * eta,
        zone.false_northing() + UTM_SCALE * k.big_a * xi,
        zone,
    )
}

/// Inverse UTM projection. Only used to evaluate great-circle distances for
/// points that exist in the plane (sampled null patterns, jittered cases).
pub fn utm_inverse(p: PlanePoint, model: EarthModel) -> Result<GeoPoint> {
    let (a, f) = ellipsoid_params(model)?;
    let k = Kruger::new(a, f);
    let xi = (p.northing - p.zone.false_northing()) / (UTM_SCALE * k.big_a);
    let eta = (p.easting - UTM_FALSE_EASTING) / (UTM_SCALE * k.big_a);

    let mut xi_p = xi;
    let mut eta_p = eta;
    for (j, beta) in k.beta.iter().enumerate() {
        let m = 2.0 * (j as f64 + 1.0);
        xi_p -= beta * (m * xi).sin() * (m * eta).cosh();
        eta_p -= beta * (m * xi).cos() * (m * eta).sinh();
    }
    let chi = (xi_p.sin() / eta_p.cosh()).asin();
    let mut phi = chi;
    for (j, delta) in k.delta.iter().enumerate() {
        let m = 2.0 * (j as f64 + 1.0);
        phi += delta * (m * chi).sin();
    }
    let lam = eta_p.sinh().atan2(xi_p.cos());

    let mut lon = p.zone.central_meridian() + lam.to_degrees();
    if lon >= 180.0 {
        lon -= 360.0;
    } else if lon < -180.0 {
        lon += 360.0;
    }
    let lat = phi.to_degrees();
    if !lat.is_finite() || !lon.is_finite() || lat.abs() > 90.0 {
        return Err(Error::Input(format!(
            "planar point ({}, {}) in zone {} does not invert",
            p.easting, p.northing, p.zone
        )));
    }
    Ok(GeoPoint { lat, lon })
}

/// Planar distance in metres; both points must be in the same zone.
pub fn euclidean_distance(a: PlanePoint, b: PlanePoint) -> Result<f64> {
    if a.zone != b.zone {
        return Err(Error::ZoneMismatch(a.zone, b.zone));
    }
    Ok((a.easting - b.easting).hypot(a.northing - b.northing))
}

/// Half the circumference of a sphere of the given radius.
pub fn half_circumference(radius: f64) -> f64 {
    PI * radius
}

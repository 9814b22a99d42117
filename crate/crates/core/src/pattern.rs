//! Case patterns, landmarks and their delimited-text files.
//!
//! Case files are UTF-8 CSV with a header naming either `id,lat,lon` or
//! `id,easting,northing,zone`. Landmark files use `name` in place of `id`.
//! Columns are matched by header name; extra columns are ignored.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geo::{self, EarthModel, GeoPoint, PlanePoint, Zone};

/// An ordered multiset of planar case locations. Duplicated coordinates are
/// legal and count with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct CasePattern {
    points: Vec<PlanePoint>,
    ids: Vec<String>,
    /// Source lat/lon when the pattern was projected from geographic input.
    geo: Option<Vec<GeoPoint>>,
}

impl CasePattern {
    pub fn new(points: Vec<PlanePoint>, ids: Vec<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("a case pattern needs at least one point".into()));
        }
        if points.len() != ids.len() {
            return Err(Error::Input(format!(
                "{} points but {} identifiers",
                points.len(),
                ids.len()
            )));
        }
        let zone = points[0].zone;
        if let Some(p) = points.iter().find(|p| p.zone != zone) {
            return Err(Error::ZoneMismatch(zone, p.zone));
        }
        Ok(CasePattern {
            points,
            ids,
            geo: None,
        })
    }

    /// Pattern with identifiers `1..=N`.
    pub fn from_points(points: Vec<PlanePoint>) -> Result<Self> {
        let ids = (1..=points.len()).map(|i| i.to_string()).collect();
        Self::new(points, ids)
    }

    pub fn from_xy(xy: &[(f64, f64)], zone: Zone) -> Result<Self> {
        let points = xy
            .iter()
            .map(|&(e, n)| PlanePoint::new(e, n, zone))
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn zone(&self) -> Zone {
        self.points[0].zone
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn geographic(&self) -> Option<&[GeoPoint]> {
        self.geo.as_deref()
    }

    /// Geographic coordinates: the source values when known, otherwise the
    /// inverse projection of the planar points.
    pub fn geo_points(&self) -> Result<Vec<GeoPoint>> {
        match &self.geo {
            Some(g) => Ok(g.clone()),
            None => self
                .points
                .iter()
                .map(|&p| geo::utm_inverse(p, EarthModel::WGS84))
                .collect(),
        }
    }

    pub fn eastings(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.easting).collect()
    }

    pub fn northings(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.northing).collect()
    }

    /// Sub-pattern selected by index, repeats allowed.
    pub fn select(&self, indices: &[usize]) -> Result<CasePattern> {
        if let Some(&i) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::Input(format!("index {i} out of range for {} cases", self.len())));
        }
        let mut out = CasePattern::new(
            indices.iter().map(|&i| self.points[i]).collect(),
            indices.iter().map(|&i| self.ids[i].clone()).collect(),
        )?;
        out.geo = self.geo.as_ref().map(|g| indices.iter().map(|&i| g[i]).collect());
        Ok(out)
    }

    /// Applies `f` to every planar point; geographic source values are dropped.
    pub fn map_points(&self, mut f: impl FnMut(PlanePoint) -> PlanePoint) -> Result<CasePattern> {
        CasePattern::new(self.points.iter().map(|&p| f(p)).collect(), self.ids.clone())
    }

    /// Keeps the first case at every distinct coordinate.
    pub fn dedupe(&self) -> CasePattern {
        let mut seen = HashSet::new();
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let p = self.points[i];
                seen.insert((p.easting.to_bits(), p.northing.to_bits()))
            })
            .collect();
        self.select(&keep).expect("indices in range and nonempty")
    }

    /// Number of cases sharing a coordinate with an earlier case.
    pub fn duplicate_count(&self) -> usize {
        self.len() - self.dedupe().len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Landmark {
    pub name: String,
    pub location: PlanePoint,
    pub geo: Option<GeoPoint>,
}

impl Landmark {
    pub fn new(name: impl Into<String>, location: PlanePoint) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::Input("landmark name is empty".into()));
        }
        Ok(Landmark {
            name,
            location,
            geo: None,
        })
    }

    pub fn geo_point(&self) -> Result<GeoPoint> {
        match self.geo {
            Some(g) => Ok(g),
            None => geo::utm_inverse(self.location, EarthModel::WGS84),
        }
    }

    /// Errors unless the landmark is in `zone`.
    pub fn check_zone(&self, zone: Zone) -> Result<()> {
        if self.location.zone != zone {
            return Err(Error::ZoneMismatch(zone, self.location.zone));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Geographic { lat: usize, lon: usize },
    Planar { easting: usize, northing: usize, zone: usize },
}

struct Table {
    label: usize,
    layout: Layout,
    rows: Vec<(usize, csv::StringRecord)>,
}

fn read_table(path: &Path, reader: impl Read, label: &str) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(path, 1, format!("unreadable header: {e}")))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim_start_matches('\u{feff}').eq_ignore_ascii_case(name))
    };
    let label_col = find(label)
        .ok_or_else(|| Error::parse(path, 1, format!("header lacks a `{label}` column")))?;
    let layout = match (find("lat"), find("lon"), find("easting"), find("northing"), find("zone")) {
        (_, _, Some(easting), Some(northing), Some(zone)) => Layout::Planar {
            easting,
            northing,
            zone,
        },
        (Some(lat), Some(lon), _, _, _) => Layout::Geographic { lat, lon },
        _ => {
            return Err(Error::parse(
                path,
                1,
                format!("header must contain `{label},lat,lon` or `{label},easting,northing,zone`"),
            ))
        }
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push((line, rec));
    }
    Ok(Table {
        label: label_col,
        layout,
        rows,
    })
}

fn number(path: &Path, line: usize, rec: &csv::StringRecord, col: usize, what: &str) -> Result<f64> {
    let raw = rec.get(col).unwrap_or("");
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::parse(path, line, format!("{what} {raw:?} is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(path, line, format!("{what} {raw:?} is not finite")));
    }
    Ok(v)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Zone chosen for a geographic dataset: the zone of the median longitude,
/// hemisphere of the median latitude. Applied to every point so datasets
/// straddling a zone edge stay in one plane.
pub fn dataset_zone(points: &[GeoPoint]) -> Result<Zone> {
    if points.is_empty() {
        return Err(Error::Input("no points to choose a zone from".into()));
    }
    let lon = median(points.iter().map(|p| p.lon).collect());
    let lat = median(points.iter().map(|p| p.lat).collect());
    Zone::new(geo::utm_zone_of(lon)?, lat >= 0.0)
}

/// Labelled locations, either projected or planar.
struct Located {
    labels: Vec<String>,
    points: Vec<PlanePoint>,
    geo: Option<Vec<GeoPoint>>,
}

fn locate(path: &Path, table: Table, zone: Option<Zone>) -> Result<Located> {
    let mut labels = Vec::with_capacity(table.rows.len());
    match table.layout {
        Layout::Geographic { lat, lon } => {
            let mut geo_pts = Vec::with_capacity(table.rows.len());
            for (line, rec) in &table.rows {
                let la = number(path, *line, rec, lat, "latitude")?;
                let lo = number(path, *line, rec, lon, "longitude")?;
                let g = GeoPoint::new(la, lo).map_err(|e| Error::parse(path, *line, e.to_string()))?;
                labels.push(rec.get(table.label).unwrap_or("").to_string());
                geo_pts.push(g);
            }
            let zone = match zone {
                Some(z) => z,
                None => dataset_zone(&geo_pts)?,
            };
            let points = geo_pts
                .iter()
                .zip(&table.rows)
                .map(|(&g, (line, _))| {
                    geo::utm_forward(g, Some(zone), EarthModel::WGS84)
                        .map_err(|e| Error::parse(path, *line, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Located {
                labels,
                points,
                geo: Some(geo_pts),
            })
        }
        Layout::Planar {
            easting,
            northing,
            zone: zone_col,
        } => {
            let mut points = Vec::with_capacity(table.rows.len());
            let mut first_zone: Option<Zone> = None;
            for (line, rec) in &table.rows {
                let e = number(path, *line, rec, easting, "easting")?;
                let n = number(path, *line, rec, northing, "northing")?;
                let z: Zone = rec
                    .get(zone_col)
                    .unwrap_or("")
                    .parse()
                    .map_err(|e: Error| Error::parse(path, *line, e.to_string()))?;
                match first_zone {
                    None => first_zone = Some(z),
                    Some(z0) if z0 != z => {
                        return Err(Error::parse(
                            path,
                            *line,
                            format!("mixed zones: {z} after {z0}"),
                        ))
                    }
                    _ => {}
                }
                labels.push(rec.get(table.label).unwrap_or("").to_string());
                points.push(PlanePoint::new(e, n, z)?);
            }
            Ok(Located {
                labels,
                points,
                geo: None,
            })
        }
    }
}

/// Reads a case file. Geographic input is projected into the dataset zone
/// (or `zone` when given).
pub fn read_cases(path: &Path, reader: impl Read, zone: Option<Zone>) -> Result<CasePattern> {
    let table = read_table(path, reader, "id")?;
    if table.rows.is_empty() {
        return Err(Error::parse(path, 1, "no cases after the header"));
    }
    let located = locate(path, table, zone)?;
    let mut pattern = CasePattern::new(located.points, located.labels)?;
    pattern.geo = located.geo;
    Ok(pattern)
}

pub fn load_cases(path: impl AsRef<Path>, zone: Option<Zone>) -> Result<CasePattern> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_cases(path, file, zone)
}

/// Writes the planar form `id,easting,northing,zone`. Coordinates use the
/// shortest representation that parses back to the same `f64`.
pub fn write_cases(pattern: &CasePattern, out: impl Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "easting", "northing", "zone"])?;
    for (id, p) in pattern.ids.iter().zip(&pattern.points) {
        w.write_record([
            id.as_str(),
            &p.easting.to_string(),
            &p.northing.to_string(),
            &p.zone.to_string(),
        ])?;
    }
    w.flush()
}

pub fn read_landmarks(path: &Path, reader: impl Read, zone: Option<Zone>) -> Result<Vec<Landmark>> {
    let table = read_table(path, reader, "name")?;
    if table.rows.is_empty() {
        return Err(Error::Input(format!("{}: no landmarks", path.display())));
    }
    let lines: Vec<usize> = table.rows.iter().map(|(l, _)| *l).collect();
    let located = locate(path, table, zone)?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(located.points.len());
    for (i, (name, point)) in located.labels.into_iter().zip(located.points).enumerate() {
        if !seen.insert(name.clone()) {
            return Err(Error::parse(path, lines[i], format!("duplicate landmark name {name:?}")));
        }
        let mut lm = Landmark::new(name, point).map_err(|e| Error::parse(path, lines[i], e.to_string()))?;
        lm.geo = located.geo.as_ref().map(|g| g[i]);
        out.push(lm);
    }
    Ok(out)
}

/// Reads a landmark file. Pass the case pattern's zone so geographic
/// landmarks land in the same plane.
pub fn load_landmarks(path: impl AsRef<Path>, zone: Option<Zone>) -> Result<Vec<Landmark>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_landmarks(path, file, zone)
}

pub fn find_landmark<'a>(landmarks: &'a [Landmark], name: &str) -> Result<&'a Landmark> {
    landmarks
        .iter()
        .find(|l| l.name == name)
        .or_else(|| landmarks.iter().find(|l| l.name.eq_ignore_ascii_case(name)))
        .ok_or_else(|| {
            let names: Vec<&str> = landmarks.iter().map(|l| l.name.as_str()).collect();
            Error::Input(format!("no landmark named {name:?} (have {names:?})"))
        })
}

/// Displaces every case by an independent uniform draw from the disc of
/// the given radius.
pub fn jitter<R: Rng + ?Sized>(pattern: &CasePattern, radius: f64, rng: &mut R) -> Result<CasePattern> {
    if radius < 0.0 || !radius.is_finite() {
        return Err(Error::Input(format!("jitter radius {radius} must be finite and >= 0")));
    }
    if radius == 0.0 {
        return Ok(pattern.clone());
    }
    pattern.map_points(|p| {
        let r = radius * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        p.offset(r * theta.cos(), r * theta.sin())
    })
}

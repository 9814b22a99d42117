//! Population-density rasters and the fixed-n null sampler.
//!
//! Grid file format (ASCII, whitespace separated):
//!
//! ```text
//! # comment lines are allowed anywhere
//! ncols nrows xmin ymin cellsize zone
//! w(0,0) w(0,1) ... w(0,ncols-1)
//! ...
//! ```
//!
//! Weights are row-major with the first row the northernmost one. `xmin`
//! and `ymin` are the south-west corner of the raster in UTM metres.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use rand::{Rng, RngCore};
use rand_distr::weighted::WeightedIndex;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::geo::{PlanePoint, Zone};
use crate::mctest::NullSampler;
use crate::pattern::CasePattern;
use crate::seeding::{domain, stream_rng};

#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub ncols: usize,
    pub nrows: usize,
    pub xmin: f64,
    pub ymin: f64,
    pub cellsize: f64,
    pub zone: Zone,
    weights: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl PartialEq for DensityGrid {
    fn eq(&self, other: &Self) -> bool {
        self.ncols == other.ncols
            && self.nrows == other.nrows
            && self.xmin == other.xmin
            && self.ymin == other.ymin
            && self.cellsize == other.cellsize
            && self.zone == other.zone
            && self.weights == other.weights
    }
}

impl DensityGrid {
    pub fn new(
        ncols: usize,
        nrows: usize,
        xmin: f64,
        ymin: f64,
        cellsize: f64,
        zone: Zone,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if ncols == 0 || nrows == 0 {
            return Err(Error::Input("grid needs at least one row and one column".into()));
        }
        if cellsize <= 0.0 || !cellsize.is_finite() || !xmin.is_finite() || !ymin.is_finite() {
            return Err(Error::Input(format!(
                "grid origin ({xmin}, {ymin}) and cellsize {cellsize} must be finite, cellsize > 0"
            )));
        }
        if weights.len() != ncols * nrows {
            return Err(Error::Input(format!(
                "grid declares {ncols}x{nrows} = {} cells but has {} weights",
                ncols * nrows,
                weights.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::Input(format!("cell {i}: weight {w} must be finite and >= 0")));
        }
        let index = WeightedIndex::new(&weights)
            .map_err(|_| Error::Input("grid has no positive weight".into()))?;
        Ok(DensityGrid {
            ncols,
            nrows,
            xmin,
            ymin,
            cellsize,
            zone,
            weights,
            index,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cell_count(&self) -> usize {
        self.weights.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn width(&self) -> f64 {
        self.ncols as f64 * self.cellsize
    }

    pub fn height(&self) -> f64 {
        self.nrows as f64 * self.cellsize
    }

    /// Shorter side of the raster, metres.
    pub fn extent(&self) -> f64 {
        self.width().min(self.height())
    }

    pub fn xmax(&self) -> f64 {
        self.xmin + self.width()
    }

    pub fn ymax(&self) -> f64 {
        self.ymin + self.height()
    }

    pub fn center(&self) -> PlanePoint {
        PlanePoint {
            easting: self.xmin + 0.5 * self.width(),
            northing: self.ymin + 0.5 * self.height(),
            zone: self.zone,
        }
    }

    /// South-west corner of a cell.
    pub fn cell_origin(&self, cell: usize) -> (f64, f64) {
        let row = cell / self.ncols;
        let col = cell % self.ncols;
        (
            self.xmin + col as f64 * self.cellsize,
            self.ymin + (self.nrows - 1 - row) as f64 * self.cellsize,
        )
    }

    /// Cell containing a point, `None` outside the raster.
    pub fn cell_of(&self, p: PlanePoint) -> Option<usize> {
        if p.zone != self.zone {
            return None;
        }
        let cx = ((p.easting - self.xmin) / self.cellsize).floor();
        let cy = ((p.northing - self.ymin) / self.cellsize).floor();
        if cx < 0.0 || cy < 0.0 || cx >= self.ncols as f64 || cy >= self.nrows as f64 {
            return None;
        }
        let row = self.nrows - 1 - cy as usize;
        Some(row * self.ncols + cx as usize)
    }

    pub fn contains(&self, p: PlanePoint) -> bool {
        p.zone == self.zone
            && p.easting >= self.xmin
            && p.easting <= self.xmax()
            && p.northing >= self.ymin
            && p.northing <= self.ymax()
    }

    /// One point: cell with probability weight / total, uniform inside it.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> PlanePoint {
        let cell = self.index.sample(rng);
        let (x0, y0) = self.cell_origin(cell);
        PlanePoint {
            easting: x0 + self.cellsize * rng.random::<f64>(),
            northing: y0 + self.cellsize * rng.random::<f64>(),
            zone: self.zone,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            self.ncols, self.nrows, self.xmin, self.ymin, self.cellsize, self.zone
        );
        for row in self.weights.chunks(self.ncols) {
            let line: Vec<String> = row.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

/// `n` independent points from the grid: the fixed-total (binomial) form of
/// an inhomogeneous Poisson process with intensity proportional to the
/// weights.
pub fn sample_fixed_n<R: Rng + ?Sized>(grid: &DensityGrid, n: usize, rng: &mut R) -> Result<CasePattern> {
    if n == 0 {
        return Err(Error::Input("sample size must be at least 1".into()));
    }
    let points = (0..n).map(|_| grid.sample_point(rng)).collect();
    CasePattern::from_points(points)
}

impl NullSampler for DensityGrid {
    fn sample_pattern(&self, n: usize, rng: &mut dyn RngCore) -> Result<CasePattern> {
        sample_fixed_n(self, n, rng)
    }
}

pub fn parse_density(path: &Path, text: &str) -> Result<DensityGrid> {
    let mut tokens = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));

    let mut header = Vec::with_capacity(6);
    for _ in 0..6 {
        match tokens.next() {
            Some(t) => header.push(t),
            None => {
                return Err(Error::parse(
                    path,
                    header.last().map_or(1, |(l, _)| *l),
                    "header must be `ncols nrows xmin ymin cellsize zone`",
                ))
            }
        }
    }
    let count = |(line, t): (usize, &str), what: &str| -> Result<usize> {
        t.parse()
            .map_err(|_| Error::parse(path, line, format!("{what} {t:?} is not a count")))
    };
    let real = |(line, t): (usize, &str), what: &str| -> Result<f64> {
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse(path, line, format!("{what} {t:?} is not a finite number")))
    };
    let ncols = count(header[0], "ncols")?;
    let nrows = count(header[1], "nrows")?;
    let xmin = real(header[2], "xmin")?;
    let ymin = real(header[3], "ymin")?;
    let cellsize = real(header[4], "cellsize")?;
    let zone: Zone = header[5]
        .1
        .parse()
        .map_err(|e: Error| Error::parse(path, header[5].0, e.to_string()))?;

    let expected = ncols
        .checked_mul(nrows)
        .ok_or_else(|| Error::parse(path, header[0].0, "grid dimensions overflow"))?;
    let mut weights = Vec::with_capacity(expected);
    let mut last_line = header[5].0;
    for (line, t) in tokens {
        let idx = weights.len();
        if idx >= expected {
            return Err(Error::parse(
                path,
                line,
                format!("more than the declared {ncols}x{nrows} = {expected} weights"),
            ));
        }
        let w: f64 = t.parse().map_err(|_| {
            Error::parse(path, line, format!("cell {idx}: weight {t:?} is not a number"))
        })?;
        if !w.is_finite() || w < 0.0 {
            return Err(Error::parse(
                path,
                line,
                format!("cell {idx}: weight {w} must be finite and >= 0"),
            ));
        }
        weights.push(w);
        last_line = line;
    }
    if weights.len() != expected {
        return Err(Error::parse(
            path,
            last_line,
            format!("declared {ncols}x{nrows} = {expected} cells, found {} weights", weights.len()),
        ));
    }
    DensityGrid::new(ncols, nrows, xmin, ymin, cellsize, zone, weights)
        .map_err(|e| Error::parse(path, header[0].0, e.to_string()))
}

pub fn read_density(path: &Path, mut reader: impl Read) -> Result<DensityGrid> {
    let mut text = String::new();
    reader.read_to_string(&mut text).map_err(|e| Error::io(path, e))?;
    parse_density(path, &text)
}

pub fn load_density(path: impl AsRef<Path>) -> Result<DensityGrid> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_density(path, &text)
}

/// Parameters of a synthetic city: a square raster with a faint uniform
/// background and a few Gaussian population blobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CityFixture {
    /// Side length, metres.
    pub extent: f64,
    /// Cells per side.
    pub cells: usize,
    pub blobs: usize,
    pub xmin: f64,
    pub ymin: f64,
    pub zone: Zone,
    pub seed: u64,
}

impl Default for CityFixture {
    /// A 30 km city in zone 50N, south-west corner at (223 000, 3 376 000).
    fn default() -> Self {
        CityFixture {
            extent: 30_000.0,
            cells: 60,
            blobs: 6,
            xmin: 223_000.0,
            ymin: 3_376_000.0,
            zone: Zone { number: 50, north: true },
            seed: 2019,
        }
    }
}

pub fn synthetic_city(fixture: &CityFixture) -> Result<DensityGrid> {
    if fixture.cells == 0 || fixture.extent <= 0.0 || !fixture.extent.is_finite() {
        return Err(Error::Config("city fixture needs cells >= 1 and extent > 0".into()));
    }
    let mut rng = stream_rng(fixture.seed, domain::FIXTURE, 0);
    let blobs: Vec<(f64, f64, f64, f64)> = (0..fixture.blobs)
        .map(|_| {
            let cx = fixture.extent * rng.random_range(0.15..0.85);
            let cy = fixture.extent * rng.random_range(0.15..0.85);
            let sigma = fixture.extent * rng.random_range(0.05..0.18);
            let amp = rng.random_range(0.3..1.0);
            (cx, cy, sigma, amp)
        })
        .collect();
    let cs = fixture.extent / fixture.cells as f64;
    let mut weights = Vec::with_capacity(fixture.cells * fixture.cells);
    for row in 0..fixture.cells {
        let y = (fixture.cells - 1 - row) as f64 * cs + 0.5 * cs;
        for col in 0..fixture.cells {
            let x = col as f64 * cs + 0.5 * cs;
            let mut w = 0.02;
            for &(cx, cy, s, a) in &blobs {
                let r2 = (x - cx).powi(2) + (y - cy).powi(2);
                w += a * (-0.5 * r2 / (s * s)).exp();
            }
            // round so the text form is short and exact
            weights.push((w * 1e6).round() / 1e6);
        }
    }
    DensityGrid::new(fixture.cells, fixture.cells, fixture.xmin, fixture.ymin, cs, fixture.zone, weights)
}

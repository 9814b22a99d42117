use std::fmt::Write as _;
use std::path::Path;

use casecenter::mctest::{landmark_center_test_with_metric, point_proximity_test, proximity_test, TestResult};
use casecenter::pattern::{find_landmark, jitter, load_cases, load_landmarks, write_cases};
use casecenter::popsim::{load_density, synthetic_city, CityFixture};
use casecenter::resample::{cloud_spread, concentration_ellipse, resample_centers, CenterCloud};
use casecenter::seeding::{domain, stream_rng};
use casecenter::svg::{histogram, scatter_panel, Cloud, Marker, MarkerShape, Panel};
use casecenter::synth::{flaw_demo, synth_cluster, FlawDemoConfig};
use casecenter::{CasePattern, CenterEstimator, ClusterModel, Landmark, ResamplePlan};
use clap::ValueEnum;
use serde::Serialize;

use crate::args::{CaseArgs, Command, Format, LandmarkArgs};
use crate::output::{digest_inputs, CliError, Manifest, Outputs};

const HISTOGRAM_BINS: usize = 40;

pub fn run(mut command: Command, format: Vec<Format>, out: &Path) -> anyhow::Result<()> {
    let seed = resolve_seed(&mut command);
    let inputs = digest_inputs(&command.inputs())?;
    let outputs = execute(&command, &format)?;
    let manifest = Manifest {
        tool: tool(),
        seed,
        format,
        command,
        inputs,
        outputs: outputs.digests(),
    };
    outputs.write(out, &manifest)?;
    eprintln!("wrote {} files and the manifest to {}", manifest.outputs.len(), out.display());
    Ok(())
}

/// Re-runs a manifest's command into `out` and checks inputs and outputs
/// against the recorded digests.
pub fn replay(manifest_path: &Path, out: &Path) -> anyhow::Result<()> {
    let manifest = Manifest::load(manifest_path)?;
    let paths: Vec<_> = manifest.inputs.iter().map(|i| i.path.clone()).collect();
    for (now, then) in digest_inputs(&paths)?.iter().zip(&manifest.inputs) {
        if now.sha256 != then.sha256 {
            return Err(CliError::Input(format!("input {} changed since the run was recorded", then.path.display())).into());
        }
    }
    let outputs = execute(&manifest.command, &manifest.format)?;
    let digests = outputs.digests();
    outputs.write(out, &manifest)?;
    if digests != manifest.outputs {
        let changed: Vec<&str> = digests
            .iter()
            .filter(|d| !manifest.outputs.contains(d))
            .map(|d| d.file.as_str())
            .collect();
        return Err(CliError::Diverged(format!("outputs differ: {changed:?}")).into());
    }
    eprintln!("replayed {}: {} outputs identical", manifest.command.name(), digests.len());
    Ok(())
}

fn tool() -> String {
    format!("casecenter {}", env!("CARGO_PKG_VERSION"))
}

fn resolve_seed(command: &mut Command) -> Option<u64> {
    let is_fixture = matches!(command, Command::DensityFixture { .. });
    let slot = command.seed_mut()?;
    let seed = *slot.get_or_insert_with(|| {
        if is_fixture {
            CityFixture::default().seed
        } else {
            let s = rand::random();
            eprintln!("no --seed given; using {s}");
            s
        }
    });
    Some(seed)
}

fn check_formats(command: &str, format: &[Format], supported: &[Format]) -> anyhow::Result<()> {
    match format.iter().find(|f| !supported.contains(f)) {
        Some(f) => {
            let f = f.to_possible_value().expect("formats are not skipped");
            Err(CliError::Input(format!("{command} cannot write {} output", f.get_name())).into())
        }
        None => Ok(()),
    }
}

fn load_pattern(args: &CaseArgs, seed: u64) -> anyhow::Result<CasePattern> {
    let mut pattern = load_cases(&args.cases, args.zone)?;
    if args.dedupe {
        pattern = pattern.dedupe();
    }
    if let Some(radius) = args.jitter {
        pattern = jitter(&pattern, radius, &mut stream_rng(seed, domain::JITTER, 0))?;
    }
    Ok(pattern)
}

fn load_landmark_set(args: &LandmarkArgs, pattern: &CasePattern) -> anyhow::Result<(Vec<Landmark>, Landmark)> {
    let all = load_landmarks(&args.landmarks, Some(pattern.zone()))?;
    let chosen = find_landmark(&all, &args.landmark)?.clone();
    Ok((all, chosen))
}

fn mode(with_replacement: bool) -> &'static str {
    if with_replacement {
        "with"
    } else {
        "without"
    }
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn table_bytes(header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
}

#[derive(Serialize)]
struct CenterRow {
    estimator: CenterEstimator,
    easting: f64,
    northing: f64,
    zone: String,
}

#[derive(Serialize)]
struct CloudSummary {
    estimator: CenterEstimator,
    sampling: &'static str,
    n: usize,
    m: usize,
    degenerate: bool,
    mean_easting: f64,
    mean_northing: f64,
    spread: f64,
}

#[derive(Serialize)]
struct EllipseRow {
    estimator: CenterEstimator,
    sampling: &'static str,
    n: usize,
    m: usize,
    spread: f64,
    ellipse: Option<casecenter::Ellipse>,
}

#[derive(Serialize)]
struct TestRow {
    landmark: String,
    estimator: CenterEstimator,
    sampling: &'static str,
    n: usize,
    m: usize,
    metric: String,
    /// `None` for the degenerate n = N without-replacement cell.
    observed: Option<f64>,
    p_value: Option<f64>,
    ties: Option<usize>,
}

impl TestRow {
    fn csv(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "--".into());
        vec![
            self.landmark.clone(),
            self.estimator.to_string(),
            self.sampling.into(),
            self.n.to_string(),
            self.m.to_string(),
            self.metric.clone(),
            opt(self.observed.map(|x| x.to_string())),
            opt(self.p_value.map(|x| x.to_string())),
            opt(self.ties.map(|x| x.to_string())),
        ]
    }
}

const TEST_HEADER: [&str; 9] = ["landmark", "estimator", "sampling", "n", "m", "metric", "observed", "p_value", "ties"];

/// Runs one landmark-center test; the degenerate cell yields `Ok(None)`.
fn center_cell(
    pattern: &CasePattern,
    landmark: &Landmark,
    plan: &ResamplePlan,
    est: CenterEstimator,
    metric: casecenter::Metric,
) -> anyhow::Result<Option<TestResult>> {
    match landmark_center_test_with_metric(pattern, landmark, plan, est, metric) {
        Ok(r) => Ok(Some(r)),
        Err(casecenter::Error::DegenerateCloud) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn execute(command: &Command, format: &[Format]) -> anyhow::Result<Outputs> {
    use Format::*;
    let mut out = Outputs::default();
    let name = command.name();
    match command {
        Command::Project { cases, seed } => {
            check_formats(name, format, &[Csv, Json])?;
            let p = load_pattern(cases, seed.unwrap_or_default())?;
            let duplicates = p.duplicate_count();
            println!(
                "zone {}: {} cases, {} at repeated locations, input {}",
                p.zone(),
                p.len(),
                duplicates,
                if p.geographic().is_some() { "geographic" } else { "planar" }
            );
            if format.contains(&Csv) {
                out.add("cases_utm.csv", csv_bytes(|b| write_cases(&p, b))?);
            }
            if format.contains(&Json) {
                #[derive(Serialize)]
                struct Report {
                    zone: String,
                    cases: usize,
                    duplicates: usize,
                    geographic_input: bool,
                }
                out.add_json(
                    "projection.json",
                    &Report {
                        zone: p.zone().to_string(),
                        cases: p.len(),
                        duplicates,
                        geographic_input: p.geographic().is_some(),
                    },
                )?;
            }
        }

        Command::Centers { cases, estimator, seed } => {
            check_formats(name, format, &[Csv, Json])?;
            let p = load_pattern(cases, seed.unwrap_or_default())?;
            let rows = estimator
                .resolved()
                .into_iter()
                .map(|est| {
                    let c = est.estimate(&p)?;
                    println!("{est}: {} {} ({})", c.easting, c.northing, c.zone);
                    Ok(CenterRow {
                        estimator: est,
                        easting: c.easting,
                        northing: c.northing,
                        zone: c.zone.to_string(),
                    })
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            if format.contains(&Csv) {
                let body: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| vec![r.estimator.to_string(), r.easting.to_string(), r.northing.to_string(), r.zone.clone()])
                    .collect();
                out.add("centers.csv", table_bytes(&["estimator", "easting", "northing", "zone"], &body)?);
            }
            if format.contains(&Json) {
                out.add_json("centers.json", &rows)?;
            }
        }

        Command::Resample { cases, estimator, plan, seed } => {
            check_formats(name, format, &[Csv, Json])?;
            let seed = seed.unwrap_or_default();
            let p = load_pattern(cases, seed)?;
            let mut summaries = Vec::new();
            for with in plan.modes() {
                for &n in &plan.n {
                    for est in estimator.resolved() {
                        let rp = ResamplePlan::new(n, plan.m, with, seed);
                        let cloud = resample_centers(&p, &rp, est)?;
                        let (me, mn) = cloud.mean();
                        let spread = cloud_spread(&cloud);
                        println!("{est} {} n={n}: spread {spread:.1} m{}", mode(with), if cloud.degenerate { " (degenerate)" } else { "" });
                        if format.contains(&Csv) {
                            out.add(format!("cloud_{est}_{}_n{n}.csv", mode(with)), csv_bytes(|b| cloud.write_csv(b))?);
                        }
                        summaries.push(CloudSummary {
                            estimator: est,
                            sampling: mode(with),
                            n,
                            m: plan.m,
                            degenerate: cloud.degenerate,
                            mean_easting: me,
                            mean_northing: mn,
                            spread,
                        });
                    }
                }
            }
            if format.contains(&Json) {
                out.add_json("clouds.json", &summaries)?;
            }
        }

        Command::Ellipse { cases, estimator, plan, level, seed } => {
            check_formats(name, format, &[Csv, Json])?;
            let seed = seed.unwrap_or_default();
            let p = load_pattern(cases, seed)?;
            let mut rows = Vec::new();
            for with in plan.modes() {
                for &n in &plan.n {
                    for est in estimator.resolved() {
                        let cloud = resample_centers(&p, &ResamplePlan::new(n, plan.m, with, seed), est)?;
                        let ellipse = match concentration_ellipse(&cloud, *level) {
                            Ok(e) => Some(e),
                            Err(casecenter::Error::DegenerateCloud) => None,
                            Err(e) => return Err(e.into()),
                        };
                        rows.push(EllipseRow {
                            estimator: est,
                            sampling: mode(with),
                            n,
                            m: plan.m,
                            spread: cloud_spread(&cloud),
                            ellipse,
                        });
                    }
                }
            }
            if rows.iter().all(|r| r.ellipse.is_none()) {
                return Err(casecenter::Error::DegenerateCloud.into());
            }
            if format.contains(&Csv) {
                let body: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        let mut v = vec![r.estimator.to_string(), r.sampling.into(), r.n.to_string(), r.m.to_string(), r.spread.to_string()];
                        match &r.ellipse {
                            Some(e) => v.extend([
                                e.center.easting.to_string(),
                                e.center.northing.to_string(),
                                e.semi_major.to_string(),
                                e.semi_minor.to_string(),
                                e.orientation.to_string(),
                                e.level.to_string(),
                            ]),
                            None => v.extend(std::iter::repeat_n("--".to_string(), 6)),
                        }
                        v
                    })
                    .collect();
                let header = [
                    "estimator", "sampling", "n", "m", "spread", "center_easting", "center_northing", "semi_major", "semi_minor",
                    "orientation", "level",
                ];
                out.add("ellipses.csv", table_bytes(&header, &body)?);
            }
            if format.contains(&Json) {
                out.add_json("ellipses.json", &rows)?;
            }
        }

        Command::TestCenter { cases, landmarks, estimator, plan, metric, seed } => {
            check_formats(name, format, &[Csv, Json, Svg])?;
            let seed = seed.unwrap_or_default();
            let p = load_pattern(cases, seed)?;
            let (_, lm) = load_landmark_set(landmarks, &p)?;
            let mut rows = Vec::new();
            for with in plan.modes() {
                for &n in &plan.n {
                    for est in estimator.resolved() {
                        let rp = ResamplePlan::new(n, plan.m, with, seed);
                        let result = center_cell(&p, &lm, &rp, est, *metric)?;
                        let stem = format!("test_center_{est}_{}_n{n}", mode(with));
                        if let Some(r) = &result {
                            println!("{} as {est} center, {} n={n}: d0 = {:.1} m, p = {}", lm.name, mode(with), r.observed, r.p_value);
                            if format.contains(&Csv) {
                                out.add(format!("{stem}.csv"), csv_bytes(|b| r.write_csv(b))?);
                            }
                            if format.contains(&Svg) {
                                let title = format!("{est}, {} replacement, n = {n}: distance to {}", mode(with), lm.name);
                                out.add(format!("{stem}.svg"), histogram(&title, &r.replicates, r.observed, HISTOGRAM_BINS).into_bytes());
                            }
                        } else {
                            println!("{} as {est} center, {} n={n}: -- (every resample is the full sample)", lm.name, mode(with));
                        }
                        rows.push(TestRow {
                            landmark: lm.name.clone(),
                            estimator: est,
                            sampling: mode(with),
                            n,
                            m: plan.m,
                            metric: metric.to_string(),
                            observed: result.as_ref().map(|r| r.observed),
                            p_value: result.as_ref().map(|r| r.p_value),
                            ties: result.as_ref().map(|r| r.ties),
                        });
                    }
                }
            }
            if rows.iter().all(|r| r.p_value.is_none()) {
                return Err(casecenter::Error::DegenerateCloud.into());
            }
            if format.contains(&Csv) {
                let body: Vec<_> = rows.iter().map(TestRow::csv).collect();
                out.add("test_center.csv", table_bytes(&TEST_HEADER, &body)?);
            }
            if format.contains(&Json) {
                out.add_json("test_center.json", &rows)?;
            }
        }

        Command::TestProximity { cases, landmarks, density, r, metric, point_count, point_estimator, seed } => {
            check_formats(name, format, &[Csv, Json, Svg])?;
            let seed = seed.unwrap_or_default();
            let p = load_pattern(cases, seed)?;
            let (_, lm) = load_landmark_set(landmarks, &p)?;
            let grid = load_density(density)?;
            let result = proximity_test(&p, &lm, &grid, *r, *metric, seed)?;
            let null_median = result.replicate_median();
            println!("[replicated-flawed] proximity test for {}: a small p says only that the cases cluster near it", lm.name);
            println!(
                "median distance {:.1} m, null median {:.1} m over R = {r}, p = {}",
                result.observed, null_median, result.p_value
            );
            let point = match point_count {
                Some(count) => {
                    let center = point_estimator.estimate(&p)?;
                    let pr = point_proximity_test(center, &lm, &grid, *count, *metric, seed)?;
                    println!("[replicated-flawed] {point_estimator} to {}: {:.1} m, p = {} over {count} null points", lm.name, pr.observed, pr.p_value);
                    Some(pr)
                }
                None => None,
            };
            if format.contains(&Csv) {
                out.add("proximity.csv", csv_bytes(|b| result.write_csv(b))?);
                let mut body = vec![vec![
                    "replicated-flawed".into(),
                    "median".into(),
                    lm.name.clone(),
                    metric.to_string(),
                    r.to_string(),
                    result.observed.to_string(),
                    null_median.to_string(),
                    result.p_value.to_string(),
                ]];
                if let Some(pr) = &point {
                    out.add("proximity_point.csv", csv_bytes(|b| pr.write_csv(b))?);
                    body.push(vec![
                        "replicated-flawed".into(),
                        format!("point-{point_estimator}"),
                        lm.name.clone(),
                        metric.to_string(),
                        pr.count().to_string(),
                        pr.observed.to_string(),
                        pr.replicate_median().to_string(),
                        pr.p_value.to_string(),
                    ]);
                }
                let header = ["label", "statistic", "landmark", "metric", "replicates", "observed", "null_median", "p_value"];
                out.add("proximity_summary.csv", table_bytes(&header, &body)?);
            }
            if format.contains(&Json) {
                #[derive(Serialize)]
                struct Report<'a> {
                    label: &'static str,
                    landmark: &'a str,
                    metric: String,
                    null_median: f64,
                    median_test: &'a TestResult,
                    point_test: Option<&'a TestResult>,
                }
                out.add_json(
                    "proximity.json",
                    &Report {
                        label: "replicated-flawed",
                        landmark: &lm.name,
                        metric: metric.to_string(),
                        null_median,
                        median_test: &result,
                        point_test: point.as_ref(),
                    },
                )?;
            }
            if format.contains(&Svg) {
                let title = format!("[replicated-flawed] median distance to {}: null vs observed", lm.name);
                out.add("proximity.svg", histogram(&title, &result.replicates, result.observed, HISTOGRAM_BINS).into_bytes());
            }
        }

        Command::Table1 { cases, landmarks, estimator, plan, metric, seed } => {
            check_formats(name, format, &[Csv, Json])?;
            let seed = seed.unwrap_or_default();
            let p = load_pattern(cases, seed)?;
            let (_, lm) = load_landmark_set(landmarks, &p)?;
            let mut rows = Vec::new();
            for with in plan.modes() {
                for est in estimator.resolved() {
                    for &n in &plan.n {
                        let rp = ResamplePlan::new(n, plan.m, with, seed);
                        let result = center_cell(&p, &lm, &rp, est, *metric)?;
                        rows.push(TestRow {
                            landmark: lm.name.clone(),
                            estimator: est,
                            sampling: mode(with),
                            n,
                            m: plan.m,
                            metric: metric.to_string(),
                            observed: result.as_ref().map(|r| r.observed),
                            p_value: result.as_ref().map(|r| r.p_value),
                            ties: result.as_ref().map(|r| r.ties),
                        });
                    }
                }
            }
            let text = table1_text(&lm.name, &plan.n, plan.m, *metric, seed, &rows);
            print!("{text}");
            out.add("table1.txt", text.into_bytes());
            if format.contains(&Csv) {
                let body: Vec<_> = rows.iter().map(TestRow::csv).collect();
                out.add("table1.csv", table_bytes(&TEST_HEADER, &body)?);
            }
            if format.contains(&Json) {
                out.add_json("table1.json", &rows)?;
            }
        }

        Command::Figures { cases, landmarks, plan, median_on_geographic, seed } => {
            check_formats(name, format, &[Csv, Svg])?;
            let seed = seed.unwrap_or_default();
            let p = load_pattern(cases, seed)?;
            let (all, _) = load_landmark_set(landmarks, &p)?;
            let point_est = if *median_on_geographic {
                CenterEstimator::GeographicCenterPoint
            } else {
                CenterEstimator::CenterPoint
            };
            let full_centroid = CenterEstimator::Centroid.estimate(&p)?;
            let full_point = point_est.estimate(&p)?;
            for with in plan.modes() {
                for &n in &plan.n {
                    let clouds: Vec<CenterCloud> = [CenterEstimator::Centroid, point_est]
                        .into_iter()
                        .map(|est| resample_centers(&p, &ResamplePlan::new(n, plan.m, with, seed), est))
                        .collect::<casecenter::Result<_>>()?;
                    let panel = Panel {
                        title: format!("{} replacement, n = {n}, m = {}", mode(with), plan.m),
                        cases: p.points(),
                        clouds: vec![
                            Cloud { label: "centroid", points: &clouds[0].points, color: "#c040c0" },
                            Cloud { label: point_est.label(), points: &clouds[1].points, color: "#20a020" },
                        ],
                        markers: vec![
                            Marker { label: "centroid", point: full_centroid, shape: MarkerShape::Plus, color: "magenta" },
                            Marker { label: point_est.label(), point: full_point, shape: MarkerShape::Cross, color: "green" },
                        ],
                        landmarks: &all,
                    };
                    let stem = format!("figure_{}_n{n}", mode(with));
                    out.add(format!("{stem}.svg"), scatter_panel(&panel).into_bytes());
                    if format.contains(&Csv) {
                        for c in &clouds {
                            out.add(format!("{stem}_{}.csv", c.estimator), csv_bytes(|b| c.write_csv(b))?);
                        }
                    }
                }
            }
            println!("{} panels", plan.modes().len() * plan.n.len());
        }

        Command::Synth { origin_e, origin_n, zone, sigma, sigma_minor, orientation, count, seed } => {
            check_formats(name, format, &[Csv])?;
            let origin = casecenter::PlanePoint::new(*origin_e, *origin_n, *zone)?;
            let model = ClusterModel::anisotropic(origin, *sigma, sigma_minor.unwrap_or(*sigma), orientation.to_radians(), *count);
            let p = synth_cluster(&model, &mut stream_rng(seed.unwrap_or_default(), domain::CLUSTER, 0))?;
            println!("{} cases around {} {} ({})", p.len(), origin_e, origin_n, zone);
            out.add("synth_cases.csv", csv_bytes(|b| write_cases(&p, b))?);
        }

        Command::FlawDemo {
            density,
            sigma,
            count,
            trials,
            r,
            alpha,
            metric,
            landmark_name,
            offset_e,
            offset_n,
            relax,
            seed,
        } => {
            check_formats(name, format, &[Csv, Json])?;
            let grid = match density {
                Some(path) => load_density(path)?,
                None => synthetic_city(&CityFixture::default())?,
            };
            let mut cfg = FlawDemoConfig::new(ClusterModel::isotropic(grid.center(), *sigma, *count), seed.unwrap_or_default());
            cfg.trials = *trials;
            cfg.replicates = *r;
            cfg.alpha = *alpha;
            cfg.metric = *metric;
            cfg.landmark_name = landmark_name.clone();
            cfg.landmark_offset = (*offset_e, *offset_n);
            cfg.relax_precondition = *relax;
            let report = flaw_demo(&grid, &cfg)?;
            println!("{}", report.summary());
            if format.contains(&Csv) {
                out.add("flaw_demo.csv", csv_bytes(|b| report.write_csv(b))?);
            }
            if format.contains(&Json) {
                out.add_json("flaw_demo.json", &report)?;
            }
        }

        Command::DensityFixture { extent, cells, blobs, xmin, ymin, zone, seed } => {
            check_formats(name, format, &[Csv])?;
            let grid = synthetic_city(&CityFixture {
                extent: *extent,
                cells: *cells,
                blobs: *blobs,
                xmin: *xmin,
                ymin: *ymin,
                zone: *zone,
                seed: seed.unwrap_or_default(),
            })?;
            println!("{cells}x{cells} grid, {extent} m side, zone {zone}");
            out.add("density.txt", grid.to_text().into_bytes());
        }

        Command::Replay { .. } => unreachable!("replay is dispatched before execute"),
    }
    Ok(out)
}

/// Text table: rows by sampling mode and estimator, columns by n.
fn table1_text(landmark: &str, sizes: &[usize], m: usize, metric: casecenter::Metric, seed: u64, rows: &[TestRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Monte Carlo p-value for testing whether {landmark} is the \"center\"");
    let _ = writeln!(s, "m = {m}, metric = {metric}, seed = {seed}");
    let _ = write!(s, "{:<12} {:<24}", "Sampling", "\"center\"");
    for n in sizes {
        let _ = write!(s, " {:>7}", format!("n={n}"));
    }
    s.push('\n');
    let mut last_mode = "";
    let mut line_in_mode = 0;
    for chunk in rows.chunks(sizes.len().max(1)) {
        let first = &chunk[0];
        if first.sampling != last_mode {
            last_mode = first.sampling;
            line_in_mode = 0;
        }
        let label = match line_in_mode {
            0 => first.sampling,
            1 => "replacement",
            _ => "",
        };
        line_in_mode += 1;
        let _ = write!(s, "{label:<12} {:<24}", first.estimator.label());
        for r in chunk {
            let cell = r.p_value.map_or_else(|| "--".to_string(), |p| format!("{p:.3}"));
            let _ = write!(s, " {cell:>7}");
        }
        s.push('\n');
    }
    s
}

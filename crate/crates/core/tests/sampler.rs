use casecenter::popsim::{parse_density, sample_fixed_n, DensityGrid};
use casecenter::seeding::{domain, stream_rng};
use casecenter::Zone;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::path::Path;

fn counts(grid: &DensityGrid, n: usize, seed: u64) -> Vec<usize> {
    let p = sample_fixed_n(grid, n, &mut stream_rng(seed, domain::NULL_PATTERN, 0)).unwrap();
    let mut c = vec![0usize; grid.cell_count()];
    for q in p.points() {
        c[grid.cell_of(*q).expect("sampled point inside the grid")] += 1;
    }
    c
}

/// Pearson chi-square goodness of fit over cells with positive weight.
fn chi_square_passes(grid: &DensityGrid, observed: &[usize], alpha: f64) -> (f64, f64) {
    let n: usize = observed.iter().sum();
    let total = grid.total_weight();
    let mut stat = 0.0;
    let mut df = 0usize;
    for (o, w) in observed.iter().zip(grid.weights()) {
        if *w > 0.0 {
            let e = n as f64 * w / total;
            stat += (*o as f64 - e).powi(2) / e;
            df += 1;
        }
    }
    let critical = ChiSquared::new((df - 1) as f64).unwrap().inverse_cdf(1.0 - alpha);
    (stat, critical)
}

fn uniform_grid(side: usize) -> DensityGrid {
    DensityGrid::new(side, side, 0.0, 0.0, 100.0, Zone::new(50, true).unwrap(), vec![1.0; side * side]).unwrap()
}

#[test]
fn uniform_ten_by_ten_passes_chi_square() {
    let g = uniform_grid(10);
    for seed in 0..3 {
        let (stat, crit) = chi_square_passes(&g, &counts(&g, 10_000, seed), 0.001);
        assert!(stat < crit, "seed {seed}: {stat} >= {crit}");
    }
}

#[test]
fn two_equal_cells_pass_chi_square() {
    let g = parse_density(Path::new("two.txt"), "2 1 0 0 50 50N\n3.5 3.5\n").unwrap();
    let (stat, crit) = chi_square_passes(&g, &counts(&g, 10_000, 4), 0.001);
    assert!(stat < crit, "{stat} >= {crit}");
}

#[test]
fn frequencies_converge_in_total_variation() {
    let mut rng = stream_rng(77, 1, 0);
    let weights: Vec<f64> = (0..100).map(|_| rng.random_range(0.0..1.0)).collect();
    let g = DensityGrid::new(10, 10, 0.0, 0.0, 100.0, Zone::new(50, true).unwrap(), weights).unwrap();
    let c = counts(&g, 100_000, 5);
    let total = g.total_weight();
    let tv: f64 = 0.5
        * c.iter()
            .zip(g.weights())
            .map(|(&k, w)| (k as f64 / 100_000.0 - w / total).abs())
            .sum::<f64>();
    assert!(tv < 0.02, "{tv}");
}

#[test]
fn zero_weight_cells_get_nothing_and_points_stay_in_bounds() {
    let mut weights = vec![0.0; 25];
    weights[3] = 1.0;
    weights[12] = 4.0;
    weights[24] = 0.5;
    let g = DensityGrid::new(5, 5, 1000.0, 2000.0, 10.0, Zone::new(50, true).unwrap(), weights).unwrap();
    let p = sample_fixed_n(&g, 1_000_000, &mut stream_rng(6, domain::NULL_PATTERN, 0)).unwrap();
    let mut c = [0usize; 25];
    for q in p.points() {
        assert!(g.contains(*q));
        c[g.cell_of(*q).unwrap()] += 1;
    }
    for (k, (&count, &w)) in c.iter().zip(g.weights()).enumerate() {
        if w == 0.0 {
            assert_eq!(count, 0, "cell {k}");
        }
    }
}

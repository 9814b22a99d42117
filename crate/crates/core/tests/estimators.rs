use casecenter::central::{center_point, centroid, diameter, rotation_equivariance_report};
use casecenter::pattern::{read_cases, write_cases, jitter};
use casecenter::seeding::{domain, stream_rng};
use casecenter::{CasePattern, Zone};
use proptest::prelude::*;

fn zone() -> Zone {
    Zone::new(50, true).unwrap()
}

fn cloud(min: usize, max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((200_000.0f64..260_000.0, 3_370_000.0f64..3_410_000.0), min..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn both_estimators_commute_with_translation(xy in cloud(1, 60), tx in -5e4f64..5e4, ty in -5e4f64..5e4) {
        let p = CasePattern::from_xy(&xy, zone()).unwrap();
        let moved = p.map_points(|q| q.offset(tx, ty)).unwrap();
        for (a, b) in [(centroid(&p).unwrap(), centroid(&moved).unwrap()), (center_point(&p).unwrap(), center_point(&moved).unwrap())] {
            prop_assert!((a.easting + tx - b.easting).abs() < 1e-9 * a.easting.abs());
            prop_assert!((a.northing + ty - b.northing).abs() < 1e-9 * a.northing.abs());
        }
    }

    #[test]
    fn centroid_commutes_with_rotation(xy in cloud(2, 60), angle in 0.0f64..std::f64::consts::TAU) {
        let p = CasePattern::from_xy(&xy, zone()).unwrap();
        let r = rotation_equivariance_report(&p, angle).unwrap();
        prop_assert!(r.centroid_shift <= 1e-9 * r.diameter.max(1.0), "{:?}", r);
    }

    #[test]
    fn odd_center_point_coordinates_are_data_values(xy in cloud(1, 40)) {
        let xy = if xy.len() % 2 == 0 { &xy[1..] } else { &xy[..] };
        let p = CasePattern::from_xy(xy, zone()).unwrap();
        let c = center_point(&p).unwrap();
        prop_assert!(xy.iter().any(|&(e, _)| e == c.easting));
        prop_assert!(xy.iter().any(|&(_, n)| n == c.northing));
    }

    #[test]
    fn planar_files_round_trip(xy in cloud(1, 30)) {
        let p = CasePattern::from_xy(&xy, zone()).unwrap();
        let mut buf = Vec::new();
        write_cases(&p, &mut buf).unwrap();
        let back = read_cases(std::path::Path::new("mem.csv"), buf.as_slice(), None).unwrap();
        prop_assert_eq!(back.ids(), p.ids());
        for (a, b) in p.points().iter().zip(back.points()) {
            prop_assert!((a.easting - b.easting).abs() <= 1e-6 && (a.northing - b.northing).abs() <= 1e-6);
            prop_assert_eq!(a.zone, b.zone);
        }
    }

    #[test]
    fn jitter_preserves_size_and_ids(xy in cloud(1, 30), radius in 0.0f64..500.0, seed in any::<u64>()) {
        let p = CasePattern::from_xy(&xy, zone()).unwrap();
        let j = jitter(&p, radius, &mut stream_rng(seed, domain::JITTER, 0)).unwrap();
        prop_assert_eq!(j.len(), p.len());
        prop_assert_eq!(j.ids(), p.ids());
    }
}

#[test]
fn center_point_is_not_rotation_equivariant() {
    let p = CasePattern::from_xy(&[(0.0, 0.0), (0.0, 10.0), (10.0, 0.0)], zone()).unwrap();
    let r = rotation_equivariance_report(&p, std::f64::consts::FRAC_PI_4).unwrap();
    assert!(r.center_point_shift > 0.1 * diameter(&p));
}

#[test]
fn jitter_never_exceeds_radius() {
    let p = CasePattern::from_xy(&vec![(240_000.0, 3_390_000.0); 100], zone()).unwrap();
    let mut max_disp: f64 = 0.0;
    for trial in 0..100 {
        let j = jitter(&p, 50.0, &mut stream_rng(trial, domain::JITTER, 0)).unwrap();
        for (a, b) in p.points().iter().zip(j.points()) {
            max_disp = max_disp.max((a.easting - b.easting).hypot(a.northing - b.northing));
        }
    }
    assert!(max_disp <= 50.0, "{max_disp}");
    // uniform on the disc reaches close to the edge over 10 000 draws
    assert!(max_disp > 49.0, "{max_disp}");
}

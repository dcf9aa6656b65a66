use std::f64::consts::PI;

use proptest::prelude::*;

use eprmol::dataset::TrajectoryDataset;
use eprmol::trajectory::{
    find_turning_points, pair_events, positions_at_time, segment_trajectory, time_of_position,
    Direction, EventKind, DEFAULT_GRID_STEP,
};
use eprmol::ModelParams;

#[test]
fn dataset_branches_match_segments() {
    let p = ModelParams::reference().with_beta(PI / 3.0).unwrap();
    let segs = segment_trajectory(0.0, 6.0, &p).unwrap();
    let d = TrajectoryDataset::build(&p, 0.0, 6.0, 1201, DEFAULT_GRID_STEP).unwrap();
    for row in &d.rows {
        let seg = &segs[row.branch_id];
        assert!(row.x >= seg.x_start - 1e-12 && row.x <= seg.x_end + 1e-12);
        if row.direction != Direction::Turning {
            assert_eq!(row.direction, seg.direction, "x = {}", row.x);
        }
    }
}

#[test]
fn events_alternate() {
    let p = ModelParams::reference();
    let tps = find_turning_points(0.0, 8.0, &p, DEFAULT_GRID_STEP).unwrap();
    let events = pair_events(&tps).unwrap();
    assert_eq!(events.len(), tps.len());
    assert!(events.windows(2).all(|w| w[0].kind != w[1].kind));
    assert_eq!(events[0].kind, EventKind::Annihilation);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverted_positions_reproduce_time(
        alpha in 0.1..0.9f64,
        beta in -PI..PI,
        t in 0.05..3.0f64,
    ) {
        let p = ModelParams::reference().with_alpha(alpha).unwrap().with_beta(beta).unwrap();
        for x in positions_at_time(t, 0.0, 4.0, &p, DEFAULT_GRID_STEP).unwrap() {
            let tx = time_of_position(x, &p).unwrap();
            prop_assert!((tx - t).abs() <= 1e-6 * t.max(1.0));
        }
    }

    #[test]
    fn odd_number_of_crossings_below_the_far_end(
        alpha in 0.1..0.9f64,
        beta in -PI..PI,
        t in 0.05..0.3f64,
    ) {
        // t(0) = 0 < t and t(4) above t, so the curve crosses an odd number of times
        let p = ModelParams::reference().with_alpha(alpha).unwrap().with_beta(beta).unwrap();
        prop_assume!(time_of_position(4.0, &p).unwrap() > t + 1e-6);
        let n = positions_at_time(t, 0.0, 4.0, &p, DEFAULT_GRID_STEP).unwrap().len();
        prop_assert_eq!(n % 2, 1);
    }
}

use std::f64::consts::PI;

use proptest::prelude::*;
use vtarget_core::apollonius::{apollonius_circle, intercept, propagate_evader};
use vtarget_core::geom::normalize_angle;
use vtarget_core::{Evader, Point2, Pursuer};

fn coord() -> impl Strategy<Value = f64> {
    -50.0..50.0f64
}

prop_compose! {
    fn triple()(px in coord(), py in coord(), vx in coord(), vy in coord(),
                ex in coord(), ey in coord(), heading in -PI..PI,
                v_p in 0.5..3.0f64, mu in 0.05..0.95f64)
        -> (Pursuer, Point2, Evader) {
        let p = Pursuer { id: 0, position: Point2::new(px, py), speed: v_p };
        let e = Evader { id: 0, position: Point2::new(ex, ey), speed: mu * v_p, heading };
        (p, Point2::new(vx, vy), e)
    }
}

proptest! {
    #[test]
    fn second_leg_collocates((p, vt, e) in triple()) {
        let Ok(s) = intercept(&p, vt, &e) else { return Ok(()) };
        let pursuer_end = vt + Point2::from_angle(s.heading_phase2) * (p.speed * (s.t_f - s.t1));
        let evader_end = propagate_evader(&e, s.t_f).unwrap();
        prop_assert!(pursuer_end.distance(evader_end) < 1e-6);
        prop_assert!(pursuer_end.distance(s.intercept) < 1e-9);
    }

    #[test]
    fn intercept_lies_ahead_on_evader_ray((p, vt, e) in triple()) {
        let Ok(s) = intercept(&p, vt, &e) else { return Ok(()) };
        let ahead = s.intercept - s.evader_at_t1;
        let dir = Point2::from_angle(e.heading);
        prop_assert!(ahead.dot(dir) >= -1e-9);
        prop_assert!(ahead.cross(dir).abs() <= 1e-9 * (1.0 + ahead.norm()));
    }

    #[test]
    fn leg_lengths_match_times((p, vt, e) in triple()) {
        let Ok(s) = intercept(&p, vt, &e) else { return Ok(()) };
        let leg = s.t_f - s.t1;
        prop_assert!((leg * p.speed - s.dist_vt_to_intercept).abs() < 1e-9);
        prop_assert!((leg * e.speed - s.intercept.distance(s.evader_at_t1)).abs() < 1e-9);
    }

    #[test]
    fn circle_points_keep_the_speed_ratio(vt in (coord(), coord()), et in (coord(), coord()),
                                          mu in 0.05..0.95f64, phi in -PI..PI) {
        let (vt, et) = (Point2::new(vt.0, vt.1), Point2::new(et.0, et.1));
        prop_assume!(vt.distance(et) > 1e-3);
        let c = apollonius_circle(vt, et, mu).unwrap();
        let x = c.point_at(phi);
        prop_assert!((x.distance(et) / x.distance(vt) - mu).abs() < 1e-9);
    }

    #[test]
    fn intercept_is_on_the_circle((p, vt, e) in triple()) {
        let Ok(s) = intercept(&p, vt, &e) else { return Ok(()) };
        let r = s.intercept.distance(s.circle.origin);
        prop_assert!((r - s.circle.radius).abs() < 1e-9 * (1.0 + s.circle.radius));
    }

    #[test]
    fn along_and_against_line_of_sight(d in 0.1..100.0f64, mu in 0.05..0.95f64, bearing in -PI..PI) {
        let vt = Point2::new(1.0, -2.0);
        let start = vt + Point2::from_angle(bearing) * d;
        let pursuer = Pursuer { id: 0, position: vt, speed: 1.0 };
        for (heading, want) in [(bearing, d / (1.0 - mu)), (bearing + PI, d / (1.0 + mu))] {
            let e = Evader { id: 0, position: start, speed: mu, heading: normalize_angle(heading) };
            let s = intercept(&pursuer, vt, &e).unwrap();
            prop_assert!((s.dist_vt_to_intercept - want).abs() <= 1e-12 * want.max(1.0) * 4.0);
        }
    }
}

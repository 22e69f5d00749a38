//! Planar vector math, straight-line path extrapolation, and path-conflict
//! detection. Everything here is a pure function over values; prediction and
//! motion are built on top of these primitives.

use crate::error::Error;

/// A point or displacement in the arena plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// Positions sampled at a fixed time step, as produced by [`extrapolate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub points: Vec<Vec2>,
    /// Seconds between consecutive samples.
    pub dt: f64,
}

/// Unsigned angle between two directions, in `[0, π]`.
///
/// Computed as the arccosine of the normalized dot product, clamped to
/// `[-1, 1]` before `acos` to absorb rounding. Zero-length inputs have no
/// direction and are rejected.
pub fn angle_between(v1: Vec2, v2: Vec2) -> Result<f64, Error> {
    let n1 = v1.norm();
    let n2 = v2.norm();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let cos = (v1.dot(v2) / (n1 * n2)).clamp(-1.0, 1.0);
    Ok(cos.acos())
}

/// Moves `pos` by `min(step, distance(pos, goal))` along the straight line to
/// `goal`. Never overshoots; at the goal it is the identity.
pub fn advance_toward(pos: Vec2, goal: Vec2, step: f64) -> Vec2 {
    debug_assert!(step >= 0.0);
    let delta = goal - pos;
    let dist = delta.norm();
    if dist <= step || dist == 0.0 {
        goal
    } else {
        pos + delta * (step / dist)
    }
}

/// Straight-line extrapolation: repeated [`advance_toward`] with
/// `step = speed * dt`. The returned path holds `horizon + 1` samples with
/// `points[0] == pos`; an absent goal yields a constant path at `pos`.
pub fn extrapolate(pos: Vec2, goal: Option<Vec2>, speed: f64, dt: f64, horizon: usize) -> Path {
    debug_assert!(speed >= 0.0 && horizon >= 1);
    let step = speed * dt;
    let mut points = Vec::with_capacity(horizon + 1);
    points.push(pos);
    let mut current = pos;
    for _ in 0..horizon {
        if let Some(goal) = goal {
            current = advance_toward(current, goal, step);
        }
        points.push(current);
    }
    Path { points, dt }
}

/// Earliest step at which the two paths come strictly closer than
/// `threshold`, together with both positions at the step immediately before
/// (the stopping positions). A conflict at step 0 returns the step-0
/// positions themselves. `None` if the paths never violate the threshold.
///
/// Paths of unequal length are compared up to the shorter one; agents that
/// have reached their goal hold position, so callers should extrapolate both
/// paths over the same horizon.
pub fn first_conflict(pa: &Path, pb: &Path, threshold: f64) -> Option<(usize, Vec2, Vec2)> {
    debug_assert!(threshold > 0.0);
    let len = pa.points.len().min(pb.points.len());
    for i in 0..len {
        if pa.points[i].distance(pb.points[i]) < threshold {
            let stop = i.saturating_sub(1);
            return Some((i, pa.points[stop], pb.points[stop]));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const EPS: f64 = 1e-12;

    fn assert_vec2_eq(a: Vec2, b: Vec2, tol: f64) {
        assert!(a.distance(b) <= tol, "{a:?} != {b:?}");
    }

    #[test]
    fn angle_identical_directions_is_zero() {
        let a = angle_between(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!(a.abs() < EPS);
    }

    #[test]
    fn angle_orthogonal_is_half_pi() {
        let a = angle_between(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        assert!((a - FRAC_PI_2).abs() < EPS);
    }

    #[test]
    fn angle_diagonal_is_quarter_pi() {
        let a = angle_between(Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!((a - FRAC_PI_4).abs() < EPS);
    }

    #[test]
    fn angle_rejects_zero_vector() {
        assert!(matches!(
            angle_between(Vec2::ZERO, Vec2::new(1.0, 0.0)),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            angle_between(Vec2::new(1.0, 0.0), Vec2::ZERO),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn advance_axis_aligned() {
        let p = advance_toward(Vec2::ZERO, Vec2::new(1.0, 0.0), 0.1);
        assert_vec2_eq(p, Vec2::new(0.1, 0.0), EPS);
    }

    #[test]
    fn advance_clamps_at_goal() {
        let p = advance_toward(Vec2::ZERO, Vec2::new(0.05, 0.0), 0.1);
        assert_vec2_eq(p, Vec2::new(0.05, 0.0), 0.0);
    }

    #[test]
    fn advance_identity_at_goal() {
        let p = advance_toward(Vec2::new(2.0, 2.0), Vec2::new(2.0, 2.0), 0.5);
        assert_vec2_eq(p, Vec2::new(2.0, 2.0), 0.0);
    }

    #[test]
    fn extrapolate_reaches_goal_and_stays() {
        // 1 m at 0.15 m/s and dt = 1/30 is 0.005 m per step: arrival at step 200.
        let path = extrapolate(
            Vec2::ZERO,
            Some(Vec2::new(1.0, 0.0)),
            0.15,
            1.0 / 30.0,
            210,
        );
        assert_eq!(path.points.len(), 211);
        assert!(path.points[199].distance(Vec2::new(1.0, 0.0)) > 0.0);
        assert_vec2_eq(path.points[200], Vec2::new(1.0, 0.0), 1e-9);
        assert_vec2_eq(path.points[210], Vec2::new(1.0, 0.0), 0.0);
    }

    #[test]
    fn extrapolate_without_goal_is_constant() {
        let pos = Vec2::new(0.3, -0.2);
        let path = extrapolate(pos, None, 0.15, 1.0 / 30.0, 50);
        assert!(path.points.iter().all(|&p| p == pos));
    }

    #[test]
    fn extrapolate_diagonal_arrival_step() {
        // Straight-line distance sqrt(0.5^2 + 1.4^2) = 1.4866 m; at 0.005 m
        // per step the goal is first reached at step ceil(1.4866/0.005) = 298.
        let start = Vec2::new(0.0, -0.8);
        let goal = Vec2::new(-0.5, 0.6);
        let dist = start.distance(goal);
        let arrival = (dist / 0.005).ceil() as usize;
        assert_eq!(arrival, 298);
        let path = extrapolate(start, Some(goal), 0.15, 1.0 / 30.0, 400);
        assert!(path.points[arrival - 1].distance(goal) > 0.0);
        assert_vec2_eq(path.points[arrival], goal, 1e-9);
    }

    #[test]
    fn conflict_absent_for_distant_constant_paths() {
        let pa = extrapolate(Vec2::ZERO, None, 0.0, 1.0 / 30.0, 100);
        let pb = extrapolate(Vec2::new(2.0, 0.0), None, 0.0, 1.0 / 30.0, 100);
        assert_eq!(first_conflict(&pa, &pb, 0.5), None);
    }

    #[test]
    fn conflict_head_on_stops_at_threshold() {
        // Closing speed 0.3 m/s from 2 m apart: separation drops below 0.5 m
        // at step 151, so both stop at their step-150 positions, 0.75 m in.
        let dt = 1.0 / 30.0;
        let pa = extrapolate(Vec2::ZERO, Some(Vec2::new(2.0, 0.0)), 0.15, dt, 300);
        let pb = extrapolate(Vec2::new(2.0, 0.0), Some(Vec2::ZERO), 0.15, dt, 300);
        let (step, a, b) = first_conflict(&pa, &pb, 0.5).unwrap();
        assert_eq!(step, 151);
        assert_vec2_eq(a, Vec2::new(0.75, 0.0), 1e-9);
        assert_vec2_eq(b, Vec2::new(1.25, 0.0), 1e-9);
    }

    #[test]
    fn conflict_at_identical_start_points() {
        let p = Vec2::new(0.1, 0.2);
        let pa = extrapolate(p, None, 0.0, 1.0 / 30.0, 10);
        let pb = extrapolate(p, Some(Vec2::new(1.0, 1.0)), 0.15, 1.0 / 30.0, 10);
        let (step, a, b) = first_conflict(&pa, &pb, 0.5).unwrap();
        assert_eq!(step, 0);
        assert_vec2_eq(a, p, 0.0);
        assert_vec2_eq(b, p, 0.0);
    }

    proptest! {
        #[test]
        fn angle_symmetric_and_scale_invariant(
            ax in -10.0f64..10.0, ay in -10.0f64..10.0,
            bx in -10.0f64..10.0, by in -10.0f64..10.0,
            s in 0.01f64..100.0,
        ) {
            let a = Vec2::new(ax, ay);
            let b = Vec2::new(bx, by);
            prop_assume!(a.norm() > 1e-6 && b.norm() > 1e-6);
            let fwd = angle_between(a, b).unwrap();
            let rev = angle_between(b, a).unwrap();
            let scaled = angle_between(a * s, b).unwrap();
            prop_assert!((fwd - rev).abs() < 1e-9);
            prop_assert!((fwd - scaled).abs() < 1e-9);
            prop_assert!((0.0..=std::f64::consts::PI).contains(&fwd));
        }

        #[test]
        fn advance_decreases_distance_by_step(
            px in -2.0f64..2.0, py in -2.0f64..2.0,
            gx in -2.0f64..2.0, gy in -2.0f64..2.0,
            step in 0.0f64..1.0,
        ) {
            let pos = Vec2::new(px, py);
            let goal = Vec2::new(gx, gy);
            let before = pos.distance(goal);
            let after = advance_toward(pos, goal, step).distance(goal);
            let expected = (before - step).max(0.0);
            prop_assert!((after - expected).abs() < 1e-9);
        }

        #[test]
        fn conflict_is_symmetric(
            ax in -1.0f64..1.0, ay in -1.0f64..1.0,
            bx in -1.0f64..1.0, by in -1.0f64..1.0,
            gx in -1.0f64..1.0, gy in -1.0f64..1.0,
        ) {
            let dt = 1.0 / 30.0;
            let pa = extrapolate(Vec2::new(ax, ay), Some(Vec2::new(gx, gy)), 0.15, dt, 200);
            let pb = extrapolate(Vec2::new(bx, by), Some(Vec2::new(gx, gy)), 0.15, dt, 200);
            let fwd = first_conflict(&pa, &pb, 0.5);
            let rev = first_conflict(&pb, &pa, 0.5);
            match (fwd, rev) {
                (None, None) => {}
                (Some((i, a, b)), Some((j, c, d))) => {
                    prop_assert_eq!(i, j);
                    prop_assert_eq!(a, d);
                    prop_assert_eq!(b, c);
                }
                other => prop_assert!(false, "asymmetric: {:?}", other),
            }
        }

        #[test]
        fn extrapolate_terminates_at_goal(
            px in -1.0f64..1.0, py in -1.0f64..1.0,
            gx in -1.0f64..1.0, gy in -1.0f64..1.0,
        ) {
            let pos = Vec2::new(px, py);
            let goal = Vec2::new(gx, gy);
            // Max distance inside the sampled square is ~2.83 m: 600 steps
            // of 0.005 m always suffice.
            let path = extrapolate(pos, Some(goal), 0.15, 1.0 / 30.0, 600);
            prop_assert!(path.points[600].distance(goal) < 1e-9);
        }
    }
}

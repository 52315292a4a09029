//! Helpers for angles defined modulo 2π.

use std::f64::consts::PI;

/// Maps an angle into (−π, π].
pub fn wrap(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// Maps an angle into [0, 2π).
pub fn wrap_positive(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Distance between two angles on the circle, in [0, π].
pub fn distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

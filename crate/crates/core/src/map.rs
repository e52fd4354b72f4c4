//! The map `F(z, w) = (exp(-z^2) - delta*w, z)`, its inverse and its linear part.
//!
//! Saturation: `exp(-z^2)` overflows an `f64` once `Re(z^2) < -709`. Every
//! evaluation that would overflow returns `None` instead of an infinity, and
//! orbits record the step at which that happened. Direct iteration is the
//! production path; [`closed_form_iterate`] exists to cross-check it.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `|Re(z^2)|` for which `exp(-z^2)` is evaluated in floating point.
pub const DEFAULT_EXP_GUARD: f64 = 709.0;

/// A point `(z, w)` of `C^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub z: Complex64,
    pub w: Complex64,
}

impl Point {
    pub const fn new(z: Complex64, w: Complex64) -> Self {
        Self { z, w }
    }

    /// Both coordinates real.
    pub const fn real(z: f64, w: f64) -> Self {
        Self {
            z: Complex64::new(z, 0.0),
            w: Complex64::new(w, 0.0),
        }
    }

    /// Euclidean norm in `C^2`.
    pub fn norm(&self) -> f64 {
        self.z.norm().hypot(self.w.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.z.is_finite() && self.w.is_finite()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.z - rhs.z, self.w - rhs.w)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.z + rhs.z, self.w + rhs.w)
    }
}

impl std::ops::Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.z, -self.w)
    }
}

/// Fixes the map: the Jacobian `delta` and the overflow guard for `exp(-z^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    delta: f64,
    exp_guard: f64,
}

impl MapParams {
    pub fn new(delta: f64) -> Result<Self> {
        Self::with_guard(delta, DEFAULT_EXP_GUARD)
    }

    pub fn with_guard(delta: f64, exp_guard: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 2.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must be finite and > 2, got {delta}"
            )));
        }
        if !(exp_guard > 0.0 && exp_guard <= DEFAULT_EXP_GUARD) {
            return Err(Error::InvalidParameter(format!(
                "exp_guard must lie in (0, 709], got {exp_guard}"
            )));
        }
        Ok(Self { delta, exp_guard })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn exp_guard(&self) -> f64 {
        self.exp_guard
    }
}

/// A forward orbit `points[0], F(points[0]), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub points: Vec<Point>,
    /// Step whose evaluation overflowed; `points.len()` when set.
    pub saturated_at: Option<usize>,
}

impl Orbit {
    pub fn last(&self) -> &Point {
        self.points
            .last()
            .expect("orbit always holds its start point")
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated_at.is_some()
    }
}

/// `exp(-z^2)`, or `None` when the result would overflow.
///
/// `Re(z^2) > exp_guard` underflows to exact zero.
pub fn eval_f(z: Complex64, params: &MapParams) -> Option<Complex64> {
    let re2 = z.re * z.re - z.im * z.im;
    if re2.is_nan() {
        return None;
    }
    if re2 > params.exp_guard {
        return Some(Complex64::new(0.0, 0.0));
    }
    if re2 < -params.exp_guard {
        return None;
    }
    let im2 = 2.0 * z.re * z.im;
    if !im2.is_finite() {
        return None;
    }
    Some(Complex64::from_polar((-re2).exp(), -im2))
}

/// `F(z, w) = (exp(-z^2) - delta*w, z)`.
pub fn apply_f(p: &Point, params: &MapParams) -> Option<Point> {
    let fz = eval_f(p.z, params)?;
    let next = Point::new(fz - params.delta * p.w, p.z);
    next.is_finite().then_some(next)
}

/// `F^{-1}(Z, W) = (W, (exp(-W^2) - Z) / delta)`.
pub fn apply_f_inverse(p: &Point, params: &MapParams) -> Option<Point> {
    let fw = eval_f(p.w, params)?;
    let prev = Point::new(p.w, (fw - p.z) / params.delta);
    prev.is_finite().then_some(prev)
}

/// The linear part `L(z, w) = (-delta*w, z)`.
pub fn apply_l(p: &Point, params: &MapParams) -> Point {
    Point::new(-params.delta * p.w, p.z)
}

/// `L^{-1}(Z, W) = (W, -Z/delta)`.
pub fn apply_l_inverse(p: &Point, params: &MapParams) -> Point {
    Point::new(p.w, -p.z / params.delta)
}

/// Iterates `F` up to `n` times, stopping at the first saturated step.
pub fn iterate(p: &Point, n: usize, params: &MapParams) -> Orbit {
    let mut points = Vec::with_capacity(n + 1);
    points.push(*p);
    let mut current = *p;
    for step in 1..=n {
        match apply_f(&current, params) {
            Some(next) => {
                points.push(next);
                current = next;
            }
            None => {
                return Orbit {
                    points,
                    saturated_at: Some(step),
                }
            }
        }
    }
    Orbit {
        points,
        saturated_at: None,
    }
}

/// `(sum_{j=1..n1} (-delta)^{-j} f(z_{2j-1}), sum_{j=1..n2} (-delta)^{-j} f(z_{2j-2}))`
/// over the stored orbit.
pub(crate) fn delta_sums_on_orbit(
    orbit: &[Point],
    n1: usize,
    n2: usize,
    params: &MapParams,
) -> Result<(Complex64, Complex64)> {
    let ratio = -1.0 / params.delta;
    let f_at = |step: usize| -> Result<Complex64> {
        let p = orbit.get(step).ok_or(Error::SaturatedOrbit { step })?;
        eval_f(p.z, params).ok_or(Error::SaturatedOrbit { step: step + 1 })
    };
    let mut d1 = Complex64::new(0.0, 0.0);
    let mut d2 = Complex64::new(0.0, 0.0);
    let mut weight = 1.0;
    for j in 1..=n1.max(n2) {
        weight *= ratio;
        if j <= n1 {
            d1 += weight * f_at(2 * j - 1)?;
        }
        if j <= n2 {
            d2 += weight * f_at(2 * j - 2)?;
        }
    }
    Ok((d1, d2))
}

/// The partial sums `(Delta_1^n, Delta_2^n)` by direct summation along the orbit.
pub fn delta_partial_sums(
    p: &Point,
    n: usize,
    params: &MapParams,
) -> Result<(Complex64, Complex64)> {
    if n == 0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let orbit = iterate(p, 2 * n - 1, params);
    delta_sums_on_orbit(&orbit.points, n, n, params)
}

/// `F^n(P)` from the closed-form expressions in the `Delta` sums:
///
/// ```text
/// F^{2m}(P)   = (-delta)^m ( z0 + Delta_1^m, w0 + Delta_2^m )
/// F^{2m+1}(P) = (-delta)^m ( -delta (w0 + Delta_2^{m+1}), z0 + Delta_1^m )
/// ```
pub fn closed_form_iterate(p: &Point, n: usize, params: &MapParams) -> Result<Point> {
    if n == 0 {
        return Ok(*p);
    }
    let orbit = iterate(p, n - 1, params);
    if let Some(step) = orbit.saturated_at {
        return Err(Error::SaturatedOrbit { step });
    }
    let m = n / 2;
    let delta = params.delta;
    let scale = (-delta).powi(m as i32);
    if n.is_multiple_of(2) {
        let (d1, d2) = delta_sums_on_orbit(&orbit.points, m, m, params)?;
        Ok(Point::new(scale * (p.z + d1), scale * (p.w + d2)))
    } else {
        let (d1, d2) = delta_sums_on_orbit(&orbit.points, m, m + 1, params)?;
        Ok(Point::new(
            scale * (-delta * (p.w + d2)),
            scale * (p.z + d1),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p3() -> MapParams {
        MapParams::new(3.0).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(MapParams::new(2.0).is_err());
        assert!(MapParams::new(f64::NAN).is_err());
        assert!(MapParams::with_guard(3.0, 0.0).is_err());
        assert!(MapParams::with_guard(3.0, 710.0).is_err());
        assert!(MapParams::with_guard(3.0, 700.0).is_ok());
    }

    #[test]
    fn f_values() {
        let params = p3();
        assert_eq!(eval_f(c(0.0, 0.0), &params), Some(c(1.0, 0.0)));
        // e^{-1} to 11 digits
        let v = eval_f(c(1.0, 0.0), &params).unwrap();
        assert!((v.re - 0.36787944117144233).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
        assert!(eval_f(c(1.0, 0.5), &params).unwrap().norm() < 1.0);
    }

    #[test]
    fn f_saturation_and_underflow() {
        let params = p3();
        // Re(z^2) = -900
        assert_eq!(eval_f(c(0.0, 30.0), &params), None);
        // Re(z^2) = 900 underflows to exact zero
        assert_eq!(eval_f(c(30.0, 0.0), &params), Some(c(0.0, 0.0)));
        assert_eq!(eval_f(c(f64::INFINITY, f64::INFINITY), &params), None);
        // just inside the guard stays finite
        let v = eval_f(c(0.0, 26.6), &params).unwrap();
        assert!(v.is_finite() && v.norm() > 1e300);
    }

    #[test]
    fn apply_examples() {
        let params = p3();
        assert_eq!(
            apply_f(&Point::real(0.0, 0.0), &params),
            Some(Point::real(1.0, 0.0))
        );
        let q = apply_f(&Point::real(1.0, 1.0), &params).unwrap();
        assert!((q.z.re - (-2.632_120_558_828_557_7)).abs() < 1e-14);
        assert_eq!(q.w, c(1.0, 0.0));
        let q = apply_f(&Point::real(20.0, 20.0), &params).unwrap();
        assert_eq!(q, Point::real(-60.0, 20.0));
        assert_eq!(
            apply_f(&Point::new(c(0.0, 30.0), c(0.0, 0.0)), &params),
            None
        );
    }

    #[test]
    fn inverse_examples() {
        let params = p3();
        assert_eq!(
            apply_f_inverse(&Point::real(1.0, 0.0), &params),
            Some(Point::real(0.0, 0.0))
        );
        let p = Point::real(2.0, -3.0);
        let back = apply_f_inverse(&apply_f(&p, &params).unwrap(), &params).unwrap();
        assert!(back.dist(&p) < 1e-14);
        let back = apply_f_inverse(&Point::real(-2.63212056, 1.0), &params).unwrap();
        assert!(back.dist(&Point::real(1.0, 1.0)) < 1e-8 / 3.0 + 1e-10);
    }

    #[test]
    fn linear_part() {
        let params = p3();
        let p = Point::real(1.0, 2.0);
        assert_eq!(apply_l(&p, &params), Point::real(-6.0, 1.0));
        assert_eq!(apply_l_inverse(&Point::real(-6.0, 1.0), &params), p);
        let mut q = Point::real(1.0, 1.0);
        for _ in 0..4 {
            q = apply_l(&q, &params);
        }
        assert_eq!(q, Point::real(9.0, 9.0));
    }

    #[test]
    fn iterate_examples() {
        let params = p3();
        let p = Point::real(20.0, 20.0);
        let o = iterate(&p, 0, &params);
        assert_eq!(o.points, vec![p]);
        assert_eq!(o.saturated_at, None);
        let o = iterate(&p, 2, &params);
        assert_eq!(o.points.len(), 3);
        assert_eq!(o.points[2].w, c(-60.0, 0.0));
        // Growth with lambda = 1
        let o = iterate(&p, 20, &params);
        for n in 1..=10 {
            assert!(o.points[2 * n].z.re.abs() > 20.0 + n as f64);
        }
    }

    #[test]
    fn iterate_stops_on_saturation() {
        let params = p3();
        let o = iterate(&Point::new(c(0.0, 30.0), c(0.0, 0.0)), 5, &params);
        assert_eq!(o.points.len(), 1);
        assert_eq!(o.saturated_at, Some(1));
        assert!(o.is_saturated());
    }

    #[test]
    fn partial_sums_examples() {
        let params = p3();
        let p = Point::real(20.0, 20.0);
        assert_eq!(
            delta_partial_sums(&p, 0, &params).unwrap(),
            (c(0.0, 0.0), c(0.0, 0.0))
        );
        let (_, d2) = delta_partial_sums(&p, 1, &params).unwrap();
        assert!(d2.norm() < 1e-170);
        let (_, d2) = delta_partial_sums(&Point::real(1.0, 0.0), 1, &params).unwrap();
        assert!((d2.re + (-1.0f64).exp() / 3.0).abs() < 1e-16);
        let err = delta_partial_sums(&Point::new(c(0.0, 30.0), c(0.0, 0.0)), 2, &params);
        assert!(matches!(err, Err(Error::SaturatedOrbit { .. })));
    }

    #[test]
    fn closed_form_examples() {
        let params = p3();
        let p = Point::real(1.0, 1.0);
        assert_eq!(closed_form_iterate(&p, 0, &params).unwrap(), p);
        let q = closed_form_iterate(&p, 1, &params).unwrap();
        let direct = apply_f(&p, &params).unwrap();
        assert!(q.dist(&direct) < 1e-14);
        let p = Point::real(20.0, 20.0);
        let orbit = iterate(&p, 6, &params);
        for n in 0..=6 {
            let q = closed_form_iterate(&p, n, &params).unwrap();
            let d = orbit.points[n];
            assert!(q.dist(&d) <= 1e-9 * d.norm(), "n = {n}");
        }
    }

    #[test]
    fn closed_form_matches_direct_off_the_real_line() {
        let params = MapParams::new(2.5).unwrap();
        let p = Point::new(c(0.7, 0.2), c(-0.4, 0.1));
        let orbit = iterate(&p, 9, &params);
        assert!(!orbit.is_saturated());
        for n in 0..=9 {
            let q = closed_form_iterate(&p, n, &params).unwrap();
            let d = orbit.points[n];
            assert!(q.dist(&d) <= 1e-9 * d.norm().max(1.0), "n = {n}");
        }
    }
}

//! Limits along orbits confined to the sector `S`.
//!
//! While every orbit point `z_j` lies in `S`, `|exp(-z_j^2)| < 1`, so the sums
//!
//! ```text
//! Delta_1 = sum_{j>=1} (-delta)^{-j} f(z_{2j-1}),   Delta_2 = sum_{j>=1} (-delta)^{-j} f(z_{2j-2})
//! ```
//!
//! converge geometrically and the tail after `n` terms is below
//! `delta^{-n} / (delta - 1)`. Every estimate here certifies the orbit points it
//! uses; if one of them leaves `S` the a-priori bound is void and the call
//! fails with [`Error::OrbitLeftS`].

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::{apply_l_inverse, delta_sums_on_orbit, iterate, MapParams, Point};
use crate::regions::in_sector_s;

/// Denominators below this modulus are treated as zero: the value is the point at infinity.
pub const INFINITY_THRESHOLD: f64 = 1e-300;

/// A value on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(c) => Some(c),
            ExtComplex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: ExtComplex,
    /// Bound on the distance from `value` to the exact limit.
    pub truncation_bound: f64,
    /// Number of series terms summed.
    pub terms_used: usize,
}

/// `phi(P)` together with a bound on the truncation error of the returned point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugacyImage {
    pub point: Point,
    pub error_bound: f64,
}

/// Terms needed so that `delta^{-n}/(delta-1) <= tol`, and that tail bound.
fn terms_for_tolerance(tol: f64, delta: f64) -> Result<(usize, f64)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let mut bound = 1.0 / (delta - 1.0);
    let mut n = 0;
    while bound > tol {
        bound /= delta;
        n += 1;
    }
    Ok((n, bound))
}

/// Orbit through step `2n - 1` with every point certified in `S`.
fn certified_orbit(p: &Point, n: usize, params: &MapParams) -> Result<Vec<Point>> {
    if n == 0 {
        return Ok(vec![*p]);
    }
    let orbit = iterate(p, 2 * n - 1, params);
    if let Some(step) = orbit.points.iter().position(|q| !in_sector_s(q.z)) {
        return Err(Error::OrbitLeftS { step });
    }
    if let Some(step) = orbit.saturated_at {
        return Err(Error::SaturatedOrbit { step });
    }
    Ok(orbit.points)
}

/// `(Delta_1, Delta_2)` summed until the geometric tail drops to `tol`.
pub fn delta_limits(
    p: &Point,
    tol: f64,
    params: &MapParams,
) -> Result<(LimitEstimate, LimitEstimate)> {
    let (n, tail) = terms_for_tolerance(tol, params.delta())?;
    let orbit = certified_orbit(p, n, params)?;
    let (d1, d2) = delta_sums_on_orbit(&orbit, n, n, params)?;
    let est = |value| LimitEstimate {
        value: ExtComplex::Finite(value),
        truncation_bound: tail,
        terms_used: n,
    };
    Ok((est(d1), est(d2)))
}

/// `num/den` where both carry an absolute error of at most `tail`.
fn quotient(num: Complex64, den: Complex64, tail: f64, terms: usize) -> LimitEstimate {
    if den.norm() < INFINITY_THRESHOLD {
        return LimitEstimate {
            value: ExtComplex::Infinity,
            truncation_bound: f64::INFINITY,
            terms_used: terms,
        };
    }
    let (nn, dn) = (num.norm(), den.norm());
    let truncation_bound = if dn > tail {
        tail * (nn + dn) / (dn * (dn - tail))
    } else {
        f64::INFINITY
    };
    LimitEstimate {
        value: ExtComplex::Finite(num / den),
        truncation_bound,
        terms_used: terms,
    }
}

/// `h1 = (z + Delta_1) / (w + Delta_2)`, the limit of `z_{2n} / w_{2n}`.
pub fn h1(p: &Point, tol: f64, params: &MapParams) -> Result<LimitEstimate> {
    let (d1, d2) = delta_limits(p, tol, params)?;
    let (d1v, d2v) = (d1.value.finite().unwrap(), d2.value.finite().unwrap());
    Ok(quotient(
        p.z + d1v,
        p.w + d2v,
        d1.truncation_bound,
        d1.terms_used,
    ))
}

/// `h2 = -delta / h1`, the limit of `z_{2n+1} / w_{2n+1}`.
pub fn h2(p: &Point, tol: f64, params: &MapParams) -> Result<LimitEstimate> {
    let first = h1(p, tol, params)?;
    let delta = params.delta();
    let value = match first.value {
        ExtComplex::Infinity => ExtComplex::Finite(Complex64::new(0.0, 0.0)),
        ExtComplex::Finite(v) if v.norm() < INFINITY_THRESHOLD => ExtComplex::Infinity,
        ExtComplex::Finite(v) => ExtComplex::Finite(-delta / v),
    };
    // |delta/h - delta/h'| <= delta e / (|h| (|h| - e))
    let truncation_bound = match first.value {
        ExtComplex::Finite(v) if v.norm() > first.truncation_bound => {
            let m = v.norm();
            delta * first.truncation_bound / (m * (m - first.truncation_bound))
        }
        _ => f64::INFINITY,
    };
    Ok(LimitEstimate {
        value,
        truncation_bound,
        terms_used: first.terms_used,
    })
}

/// `h2` from its own quotient `-delta (w + Delta_2) / (z + Delta_1)`, without going through `h1`.
pub fn h2_direct(p: &Point, tol: f64, params: &MapParams) -> Result<LimitEstimate> {
    let (d1, d2) = delta_limits(p, tol, params)?;
    let (d1v, d2v) = (d1.value.finite().unwrap(), d2.value.finite().unwrap());
    let delta = params.delta();
    Ok(quotient(
        -delta * (p.w + d2v),
        p.z + d1v,
        delta * d1.truncation_bound,
        d1.terms_used,
    ))
}

/// The linearizing conjugacy `phi(P) = (z + Delta_1, w + Delta_2)`, with `phi o F = L o phi`.
pub fn phi(p: &Point, tol: f64, params: &MapParams) -> Result<ConjugacyImage> {
    let (d1, d2) = delta_limits(p, tol, params)?;
    Ok(ConjugacyImage {
        point: Point::new(
            p.z + d1.value.finite().unwrap(),
            p.w + d2.value.finite().unwrap(),
        ),
        error_bound: SQRT_2 * d1.truncation_bound,
    })
}

/// `phi_n = L^{-n} o F^n`, evaluated literally.
pub fn phi_n(p: &Point, n: usize, params: &MapParams) -> Result<Point> {
    let orbit = iterate(p, n, params);
    if let Some(step) = orbit.saturated_at {
        return Err(Error::SaturatedOrbit { step });
    }
    let mut q = *orbit.last();
    for _ in 0..n {
        q = apply_l_inverse(&q, params);
    }
    Ok(q)
}

/// `u_n(P) = -Re(z_n^2) / n`.
pub fn u_n(p: &Point, n: usize, params: &MapParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("u_n needs n >= 1".into()));
    }
    let orbit = iterate(p, n, params);
    if let Some(step) = orbit.saturated_at {
        return Err(Error::SaturatedOrbit { step });
    }
    let z = orbit.last().z;
    Ok(-(z.re * z.re - z.im * z.im) / n as f64)
}

/// `|u_n(P) - mean of u_n over the circle zeta -> P + radius e^{i theta} direction|`,
/// by the equispaced trapezoid rule on `nodes` points.
///
/// `direction` is normalized to a unit vector of `C^2`. The differences
/// `u_n(node) - u_n(P)` are summed with compensation, so a zero radius gives an
/// exactly zero residual.
pub fn mean_value_check(
    p: &Point,
    direction: (Complex64, Complex64),
    radius: f64,
    n: usize,
    nodes: usize,
    params: &MapParams,
) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::InvalidParameter(
            "need at least one quadrature node".into(),
        ));
    }
    let norm = direction.0.norm().hypot(direction.1.norm());
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter(
            "direction must be a nonzero vector".into(),
        ));
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad radius {radius}")));
    }
    let (dz, dw) = (direction.0 / norm, direction.1 / norm);
    let center = u_n(p, n, params)?;

    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..nodes {
        let zeta = Complex64::from_polar(radius, 2.0 * PI * k as f64 / nodes as f64);
        let q = Point::new(p.z + zeta * dz, p.w + zeta * dw);
        let diff = u_n(&q, n, params)? - center;
        // Neumaier summation
        let t = sum + diff;
        if sum.abs() >= diff.abs() {
            comp += (sum - t) + diff;
        } else {
            comp += (diff - t) + sum;
        }
        sum = t;
    }
    Ok(((sum + comp) / nodes as f64).abs())
}

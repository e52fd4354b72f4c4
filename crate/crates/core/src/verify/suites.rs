//! One check per catalog entry. Each check sees a single sample and either
//! rejects it as inadmissible or returns a signed margin.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::sampler::{Region, Sample};
use super::SuiteParams;
use crate::classify::{classify, ClassifyConfig, Status};
use crate::limits::{h1, h2, h2_direct, mean_value_check, phi, u_n};
use crate::map::{apply_f, apply_l, delta_sums_on_orbit, iterate, Point};
use crate::regions::{
    in_i, in_sector_s, in_w, in_wn, point_in_ixi, point_in_s, quadrant, sigma, tan2theta_bound,
    ConeSchedule,
};
use crate::rng::SplitMix64;

/// Tolerance on `|h1 h2 + delta| / delta`.
pub const H_PRODUCT_TOL: f64 = 1e-9;
/// Tolerance on `|h2 - h2_direct| / |h2|`.
pub const H2_CROSS_TOL: f64 = 1e-10;
/// Relative tolerance on `phi(F(P)) = L(phi(P))`.
pub const CONJUGACY_TOL: f64 = 1e-9;
/// Additive slack on the `tan 2 theta` bound.
pub const TAN2THETA_SLACK: f64 = 1e-12;
/// Additive slack on the `Delta` bound.
pub const DELTA_BOUND_SLACK: f64 = 1e-12;
/// Terms of the `Delta` sums checked by `delta-bound`.
pub const DELTA_BOUND_TERMS: usize = 40;
/// Steps checked by `real-growth`.
pub const GROWTH_STEPS: usize = 10;
/// Range of `n` checked by `un-decay`.
pub const UN_DECAY_RANGE: (usize, usize) = (4, 20);
/// Disk radius, quadrature nodes and required reduction on halving for `mean-value`.
pub const MEAN_VALUE_RADIUS: f64 = 0.1;
pub const MEAN_VALUE_NODES: usize = 512;
pub const MEAN_VALUE_TOL: f64 = 1e-6;
pub const MEAN_VALUE_HALVING_FACTOR: f64 = 3.0;
/// Highest ladder rung searched for samples drawn outside the ladder.
const MAX_RUNG: usize = 512;
/// Tolerance for the `Delta` sums behind `h1`, `h2` and `phi`.
const LIMIT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Outcome {
    Inadmissible,
    Checked { margin: f64, ok: bool },
}

impl Outcome {
    /// Holds iff `margin < 0`.
    fn strict(margin: f64) -> Self {
        Outcome::Checked {
            margin,
            ok: margin < 0.0,
        }
    }

    /// Holds iff `margin <= 0`.
    fn weak(margin: f64) -> Self {
        Outcome::Checked {
            margin,
            ok: margin <= 0.0,
        }
    }
}

pub(crate) struct Ctx<'a> {
    pub params: &'a SuiteParams,
    pub region: Region,
}

impl Ctx<'_> {
    fn delta(&self) -> f64 {
        self.params.map.delta()
    }

    fn schedule(&self) -> &ConeSchedule {
        &self.params.schedule
    }
}

pub(crate) type Check = fn(&Sample, &Ctx) -> Outcome;

/// `(name, check)` for every suite, in report order.
pub(crate) const SUITES: [(&str, Check); 15] = [
    ("sector-f-bound", sector_f_bound),
    ("quadrant-cycle", quadrant_cycle),
    ("real-growth", real_growth),
    ("cone-step", cone_step),
    ("ladder-invariance", ladder_invariance),
    ("delta-bound", delta_bound),
    ("h-product", h_product),
    ("conjugacy-distance", conjugacy_distance),
    ("conjugacy-equation", conjugacy_equation),
    ("phi-image-in-S", phi_image_in_s),
    ("un-decay", un_decay),
    ("tan2theta", tan2theta),
    ("mean-value", mean_value),
    ("halfplane-limits", halfplane_limits),
    ("wI-cycle", wi_cycle),
];

/// `(lhs - rhs) / |rhs|`, the relative margin of `lhs < rhs`.
fn rel(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / rhs.abs().max(f64::MIN_POSITIVE)
}

/// `err / tol - 1`: negative while `err` is within tolerance.
fn within(err: f64, tol: f64) -> f64 {
    err / tol - 1.0
}

/// Negative iff `Re z` is nonzero with sign `sign`.
fn sign_margin(z: Complex64, sign: f64) -> f64 {
    -sign * z.re / z.norm().max(f64::MIN_POSITIVE)
}

/// Negative iff `z` is strictly inside `S`, pushed inward by `err`.
fn sector_margin(z: Complex64, err: f64) -> f64 {
    (z.im.abs() - z.re.abs() + SQRT_2 * err) / z.norm().max(f64::MIN_POSITIVE)
}

/// Negative iff `P` is in `W_n`.
fn wn_margin(p: &Point, n: usize, sched: &ConeSchedule) -> f64 {
    let pattern = sched.pattern(n);
    let k = sched.k(n);
    let coord = |z: Complex64, sign: f64, r: f64| {
        let slope = z.im.abs() / z.re.abs().max(f64::MIN_POSITIVE) - k;
        sign_margin(z, sign).max(slope).max(rel(r, z.re.abs()))
    };
    coord(p.z, pattern.a.value(), sched.radius(n as i64)).max(coord(
        p.w,
        pattern.b.value(),
        sched.radius(n as i64 - 1),
    ))
}

/// The sample's ladder rung, or the smallest one containing it.
fn rung(s: &Sample, ctx: &Ctx) -> Option<usize> {
    s.rung.or_else(|| in_w(&s.point, ctx.schedule(), MAX_RUNG))
}

/// `|exp(-z^2)| < 1` on `S`.
fn sector_f_bound(s: &Sample, _: &Ctx) -> Outcome {
    let z = s.point.z;
    if !in_sector_s(z) {
        return Outcome::Inadmissible;
    }
    Outcome::strict((-(z * z).re).exp_m1())
}

/// `P in S^{ab}`, `|Re w| > 1/delta`, `F(P) in S`  =>  `F(P) in S^{(-b)a}`.
fn quadrant_cycle(s: &Sample, ctx: &Ctx) -> Outcome {
    let p = &s.point;
    let Some(q) = quadrant(p).filter(|_| point_in_s(p)) else {
        return Outcome::Inadmissible;
    };
    if p.w.re.abs() <= 1.0 / ctx.delta() {
        return Outcome::Inadmissible;
    }
    let Some(fp) = apply_f(p, &ctx.params.map).filter(point_in_s) else {
        return Outcome::Inadmissible;
    };
    let target = sigma(q);
    let margin = sign_margin(fp.z, target.a.value()).max(sign_margin(fp.w, target.b.value()));
    Outcome::Checked {
        margin,
        ok: quadrant(&fp) == Some(target),
    }
}

/// `|Re z_{2n}| > |Re z_0| + n` and `|Re z_{2n-1}| > |Re w_0| + n` for `1 <= n <= 10`.
fn real_growth(s: &Sample, ctx: &Ctx) -> Outcome {
    let p = &s.point;
    let floor = 2.0 / (ctx.delta() - 1.0);
    if rung(s, ctx).is_none() || p.z.re.abs() <= floor || p.w.re.abs() <= floor {
        return Outcome::Inadmissible;
    }
    let orbit = iterate(p, 2 * GROWTH_STEPS, &ctx.params.map);
    if orbit.is_saturated() {
        return Outcome::Inadmissible;
    }
    let pts = &orbit.points;
    let margin = (1..=GROWTH_STEPS)
        .map(|n| {
            let even = rel(p.z.re.abs() + n as f64, pts[2 * n].z.re.abs());
            let odd = rel(p.w.re.abs() + n as f64, pts[2 * n - 1].z.re.abs());
            even.max(odd)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Outcome::strict(margin)
}

/// With `P in W_{k, R_1, R_2}`, `k < k' < 1` and `R_2 > 2 / (delta (k' - k))`:
/// the slope of `z_1` is below `k'` and that of `w_1` below `k`.
///
/// Ladder samples use `k = k_n`, `k' = k_{n+1}`. Other samples with largest
/// slope `m < 1` use `k = (3m + 1)/4` and `k' = (m + 1)/2`.
fn cone_step(s: &Sample, ctx: &Ctx) -> Outcome {
    let p = &s.point;
    let slope = |z: Complex64| z.im.abs() / z.re.abs();
    let (k, k_next) = match rung(s, ctx) {
        Some(n) => (ctx.schedule().k(n), ctx.schedule().k(n + 1)),
        None => {
            let m = slope(p.z).max(slope(p.w));
            ((3.0 * m + 1.0) / 4.0, (m + 1.0) / 2.0)
        }
    };
    if !(slope(p.z) < k && slope(p.w) < k) {
        return Outcome::Inadmissible;
    }
    if !(k_next < 1.0) || p.w.re.abs() <= 2.0 / (ctx.delta() * (k_next - k)) {
        return Outcome::Inadmissible;
    }
    let Some(fp) = apply_f(p, &ctx.params.map) else {
        return Outcome::Inadmissible;
    };
    Outcome::strict((slope(fp.z) - k_next).max(slope(fp.w) - k))
}

/// `F(W_n) ⊂ W_{n+1}`.
fn ladder_invariance(s: &Sample, ctx: &Ctx) -> Outcome {
    let Some(n) = rung(s, ctx) else {
        return Outcome::Inadmissible;
    };
    let Some(fp) = apply_f(&s.point, &ctx.params.map) else {
        return Outcome::Checked {
            margin: f64::INFINITY,
            ok: false,
        };
    };
    let sched = ctx.schedule();
    Outcome::Checked {
        margin: wn_margin(&fp, n + 1, sched),
        ok: in_wn(&fp, n + 1, sched),
    }
}

/// `max(|Delta_1|, |Delta_2|) < 1/(delta - 1)` at 40 terms, on orbits certified in `S`.
fn delta_bound(s: &Sample, ctx: &Ctx) -> Outcome {
    let params = &ctx.params.map;
    let orbit = iterate(&s.point, 2 * DELTA_BOUND_TERMS - 1, params);
    if orbit.is_saturated() || !orbit.points.iter().all(|q| in_sector_s(q.z)) {
        return Outcome::Inadmissible;
    }
    let Ok((d1, d2)) =
        delta_sums_on_orbit(&orbit.points, DELTA_BOUND_TERMS, DELTA_BOUND_TERMS, params)
    else {
        return Outcome::Inadmissible;
    };
    let bound = 1.0 / (ctx.delta() - 1.0) + DELTA_BOUND_SLACK;
    Outcome::strict(d1.norm().max(d2.norm()) - bound)
}

/// `|h1 h2 + delta| / delta < 1e-9`, and `h2` agrees with its independent quotient.
fn h_product(s: &Sample, ctx: &Ctx) -> Outcome {
    let params = &ctx.params.map;
    let (Ok(a), Ok(b), Ok(c)) = (
        h1(&s.point, LIMIT_TOL, params),
        h2(&s.point, LIMIT_TOL, params),
        h2_direct(&s.point, LIMIT_TOL, params),
    ) else {
        return Outcome::Inadmissible;
    };
    let (Some(a), Some(b), Some(c)) = (a.value.finite(), b.value.finite(), c.value.finite()) else {
        return Outcome::Inadmissible;
    };
    let delta = ctx.delta();
    let product = within((a * b + delta).norm() / delta, H_PRODUCT_TOL);
    let cross = within((b - c).norm() / b.norm(), H2_CROSS_TOL);
    Outcome::strict(product.max(cross))
}

/// `||phi(P) - P|| < sqrt(2)`, with the truncation error counted against it.
fn conjugacy_distance(s: &Sample, ctx: &Ctx) -> Outcome {
    let Ok(img) = phi(&s.point, LIMIT_TOL, &ctx.params.map) else {
        return Outcome::Inadmissible;
    };
    Outcome::strict(img.point.dist(&s.point) + img.error_bound - SQRT_2)
}

/// `phi(F(P)) = L(phi(P))` to `1e-9` relative.
fn conjugacy_equation(s: &Sample, ctx: &Ctx) -> Outcome {
    let params = &ctx.params.map;
    let Some(fp) = apply_f(&s.point, params) else {
        return Outcome::Inadmissible;
    };
    let (Ok(a), Ok(b)) = (
        phi(&s.point, LIMIT_TOL, params),
        phi(&fp, LIMIT_TOL, params),
    ) else {
        return Outcome::Inadmissible;
    };
    let expected = apply_l(&a.point, params);
    let err = b.point.dist(&expected) / expected.norm().max(f64::MIN_POSITIVE);
    Outcome::strict(within(err, CONJUGACY_TOL))
}

/// `phi(P) in S`, allowing for the truncation error.
fn phi_image_in_s(s: &Sample, ctx: &Ctx) -> Outcome {
    let Ok(img) = phi(&s.point, LIMIT_TOL, &ctx.params.map) else {
        return Outcome::Inadmissible;
    };
    let err = img.error_bound;
    Outcome::strict(sector_margin(img.point.z, err).max(sector_margin(img.point.w, err)))
}

/// `u_n(P) <= -delta^{n/2} / n` for `4 <= n <= 20`.
fn un_decay(s: &Sample, ctx: &Ctx) -> Outcome {
    let params = &ctx.params.map;
    let (lo, hi) = UN_DECAY_RANGE;
    let mut margin = f64::NEG_INFINITY;
    for n in lo..=hi {
        let Ok(u) = u_n(&s.point, n, params) else {
            return Outcome::Inadmissible;
        };
        let bound = -ctx.delta().powf(n as f64 / 2.0) / n as f64;
        margin = margin.max(rel(u, bound));
    }
    Outcome::weak(margin)
}

/// `|Im z^2 / Re z^2| <= 2k / (1 - k^2)` when `|Im z| <= k |Re z|`.
///
/// The aperture `k` comes from an `Aperture(k)` region; for any other region
/// each sample is measured against its own slope.
fn tan2theta(s: &Sample, ctx: &Ctx) -> Outcome {
    let z = s.point.z;
    if z.re == 0.0 {
        return Outcome::Inadmissible;
    }
    let slope = z.im.abs() / z.re.abs();
    let k = match ctx.region {
        Region::Aperture(k) => k,
        _ => slope,
    };
    if !(slope <= k && k < 1.0) {
        return Outcome::Inadmissible;
    }
    let sq = z * z;
    let ratio = (sq.im / sq.re).abs();
    Outcome::weak(ratio - tan2theta_bound(k) - TAN2THETA_SLACK)
}

/// `u_1` on a random affine disk: residual below `1e-6` at radius 0.1, and
/// halving the radius shrinks the residual by a factor of at least 3.
fn mean_value(s: &Sample, ctx: &Ctx) -> Outcome {
    let params = &ctx.params.map;
    let mut rng = SplitMix64::new(s.aux);
    let mut unit = || Complex64::from_polar(rng.next_f64() + 0.5, 2.0 * PI * rng.next_f64());
    let direction = (unit(), unit());
    let residual =
        |radius| mean_value_check(&s.point, direction, radius, 1, MEAN_VALUE_NODES, params);
    let (Ok(full), Ok(half)) = (
        residual(MEAN_VALUE_RADIUS),
        residual(0.5 * MEAN_VALUE_RADIUS),
    ) else {
        return Outcome::Inadmissible;
    };
    let size = within(full, MEAN_VALUE_TOL);
    let shrink = MEAN_VALUE_HALVING_FACTOR * half - full;
    let shrink = if full > 0.0 { shrink / full } else { shrink };
    Outcome::Checked {
        margin: size.max(shrink),
        ok: full < MEAN_VALUE_TOL && full >= MEAN_VALUE_HALVING_FACTOR * half,
    }
}

/// On captured points, `Re h1 > 0` for the diagonal labels and `< 0` otherwise.
fn halfplane_limits(s: &Sample, ctx: &Ctx) -> Outcome {
    let cfg = ClassifyConfig::new(ctx.params.schedule);
    let r = classify(&s.point, &cfg, &ctx.params.map);
    let (Some(label), Some(h)) = (r.label, r.h1_at_point) else {
        return Outcome::Inadmissible;
    };
    let sign = if label.is_diagonal() { 1.0 } else { -1.0 };
    Outcome::strict(sign_margin(h, sign))
}

/// `F(W_I^{ab}) ⊂ W_I^{(-b)a}`, with `W_I` replaced by captured points whose
/// orbit stays in `I x I` through capture and validation.
fn wi_cycle(s: &Sample, ctx: &Ctx) -> Outcome {
    let params = &ctx.params.map;
    let c = &ctx.params.absorbing;
    let cfg = ClassifyConfig::new(ctx.params.schedule);
    let r = classify(&s.point, &cfg, params);
    let (Status::Captured, Some(label), Some(m)) = (r.status, r.label, r.capture_step) else {
        return Outcome::Inadmissible;
    };
    let orbit = iterate(&s.point, m + cfg.validate_steps, params);
    if orbit.is_saturated() || !orbit.points.iter().all(|q| point_in_ixi(q, c)) {
        return Outcome::Inadmissible;
    }
    let fp = orbit.points[1];
    let image = classify(&fp, &cfg, params);
    let i_margin = |z: Complex64| {
        let c2 = c.c() * c.c();
        (c2 - (z * z).re) / c2
    };
    let label_ok = image.label == Some(sigma(label));
    let margin = i_margin(fp.z)
        .max(i_margin(fp.w))
        .max(if label_ok { -1.0 } else { 1.0 });
    Outcome::Checked {
        margin,
        ok: label_ok && in_i(fp.z, c) && in_i(fp.w, c),
    }
}

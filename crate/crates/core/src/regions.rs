//! Region predicates and cone schedules.
//!
//! All predicates use strict inequalities: boundary points are outside.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of `x`, `None` for zero and NaN.
    pub fn of(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Plus)
        } else if x < 0.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// The sign pair `(a, b)` of `(Re z, Re w)` naming one of the four quadrants `A^{ab}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadrantLabel {
    pub a: Sign,
    pub b: Sign,
}

impl QuadrantLabel {
    pub const PP: QuadrantLabel = QuadrantLabel::new(Sign::Plus, Sign::Plus);
    pub const MP: QuadrantLabel = QuadrantLabel::new(Sign::Minus, Sign::Plus);
    pub const MM: QuadrantLabel = QuadrantLabel::new(Sign::Minus, Sign::Minus);
    pub const PM: QuadrantLabel = QuadrantLabel::new(Sign::Plus, Sign::Minus);

    /// In cycle order: `ALL[n] = sigma^n(++)`.
    pub const ALL: [QuadrantLabel; 4] = [Self::PP, Self::MP, Self::MM, Self::PM];

    pub const fn new(a: Sign, b: Sign) -> Self {
        Self { a, b }
    }

    /// Position in the cycle `++ -> -+ -> -- -> +-`.
    pub fn cycle_index(self) -> usize {
        match (self.a, self.b) {
            (Sign::Plus, Sign::Plus) => 0,
            (Sign::Minus, Sign::Plus) => 1,
            (Sign::Minus, Sign::Minus) => 2,
            (Sign::Plus, Sign::Minus) => 3,
        }
    }

    /// `a == b`: the components on which `h1` takes values in the right half-plane.
    pub fn is_diagonal(self) -> bool {
        self.a == self.b
    }
}

impl std::ops::Neg for QuadrantLabel {
    type Output = QuadrantLabel;
    fn neg(self) -> QuadrantLabel {
        QuadrantLabel::new(-self.a, -self.b)
    }
}

impl fmt::Display for QuadrantLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.a.symbol(), self.b.symbol())
    }
}

impl FromStr for QuadrantLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let sign = |c| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            _ => Err(Error::InvalidParameter(format!("bad quadrant label `{s}`"))),
        };
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => Ok(QuadrantLabel::new(sign(a)?, sign(b)?)),
            _ => Err(Error::InvalidParameter(format!("bad quadrant label `{s}`"))),
        }
    }
}

/// `sigma(a, b) = (-b, a)`: how `F` permutes the quadrants of the invariant set.
pub fn sigma(q: QuadrantLabel) -> QuadrantLabel {
    QuadrantLabel::new(-q.b, q.a)
}

/// `sigma^{-1}(a, b) = (b, -a)`.
pub fn sigma_inverse(q: QuadrantLabel) -> QuadrantLabel {
    QuadrantLabel::new(q.b, -q.a)
}

/// `sigma^m` for any integer `m`, reduced mod 4.
pub fn sigma_power(q: QuadrantLabel, m: i64) -> QuadrantLabel {
    let idx = (q.cycle_index() as i64 + m).rem_euclid(4) as usize;
    QuadrantLabel::ALL[idx]
}

/// `|Im z| < |Re z|`.
pub fn in_sector_s(z: Complex64) -> bool {
    z.im.abs() < z.re.abs()
}

/// `P` in `S = S x S`.
pub fn point_in_s(p: &Point) -> bool {
    in_sector_s(p.z) && in_sector_s(p.w)
}

/// Signs of `(Re z, Re w)`; `None` if either is zero.
pub fn quadrant(p: &Point) -> Option<QuadrantLabel> {
    Some(QuadrantLabel::new(Sign::of(p.z.re)?, Sign::of(p.w.re)?))
}

/// `|Im z| < k |Re z|` and `|Re z| > r`.
pub fn in_w_kr(z: Complex64, k: f64, r: f64) -> bool {
    z.im.abs() < k * z.re.abs() && z.re.abs() > r
}

/// The right-hand side of the `R_0` requirement at index `n`:
/// `(2/delta)^{(n+1)/2} (n+2)(n+3)`.
pub fn r0_term(delta: f64, n: u64) -> f64 {
    let n = n as f64;
    (2.0 / delta).powf((n + 1.0) / 2.0) * (n + 2.0) * (n + 3.0)
}

/// Smallest admissible inner radius: `max(2, sup_n r0_term(delta, n))`.
///
/// Consecutive terms have ratio `sqrt(2/delta) (n+4)/(n+2)`, which decreases in
/// `n`, so the sequence is unimodal and the supremum sits at the first `n` where
/// that ratio drops to 1 or below.
pub fn r0_min(delta: f64) -> f64 {
    assert!(delta > 2.0, "r0_min requires delta > 2");
    let s = (delta / 2.0).sqrt();
    // ratio(n) <= 1  <=>  n >= (4 - 2s) / (s - 1)
    let turn = ((4.0 - 2.0 * s) / (s - 1.0)).ceil().max(0.0);
    let turn = turn.min(u64::MAX as f64 / 2.0) as u64;
    let sup = [turn.saturating_sub(1), turn, turn + 1]
        .into_iter()
        .map(|n| r0_term(delta, n))
        .fold(f64::NEG_INFINITY, f64::max);
    sup.max(2.0)
}

/// `R_0`, the sequences `k_n`, `R_n` and the quadrant pattern of the ladder `W_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSchedule {
    delta: f64,
    r0: f64,
}

/// Safety factor applied to [`r0_min`] for the default schedule.
pub const R0_MARGIN: f64 = 1.001;

impl ConeSchedule {
    pub fn new(delta: f64, r0: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 2.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must be > 2, got {delta}"
            )));
        }
        let min = r0_min(delta);
        if !(r0.is_finite() && r0 > min) {
            return Err(Error::InvalidParameter(format!(
                "R0 must exceed r0_min({delta}) = {min}, got {r0}"
            )));
        }
        Ok(Self { delta, r0 })
    }

    /// `R_0 = r0_min(delta) * 1.001`.
    pub fn default_for(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 2.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must be > 2, got {delta}"
            )));
        }
        Self::new(delta, r0_min(delta) * R0_MARGIN)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// `k_n = 1 - 1/(n+2)`.
    pub fn k(&self, n: usize) -> f64 {
        1.0 - 1.0 / (n as f64 + 2.0)
    }

    /// `R_n = (delta/2)^{n/2} R_0`, with `R_{-1} = R_0`.
    pub fn radius(&self, n: i64) -> f64 {
        if n <= 0 {
            self.r0
        } else {
            (self.delta / 2.0).powf(n as f64 / 2.0) * self.r0
        }
    }

    /// Quadrant of `W_n`: `++, -+, --, +-` for `n = 0, 1, 2, 3 (mod 4)`.
    pub fn pattern(&self, n: usize) -> QuadrantLabel {
        QuadrantLabel::ALL[n % 4]
    }
}

/// `P in W_n = W_{k_n, R_n, R_{n-1}}` with the quadrant pattern of `n`.
pub fn in_wn(p: &Point, n: usize, sched: &ConeSchedule) -> bool {
    let k = sched.k(n);
    quadrant(p) == Some(sched.pattern(n))
        && in_w_kr(p.z, k, sched.radius(n as i64))
        && in_w_kr(p.w, k, sched.radius(n as i64 - 1))
}

/// Smallest `n <= n_max` with `P in W_n`.
pub fn in_w(p: &Point, sched: &ConeSchedule, n_max: usize) -> Option<usize> {
    let q = quadrant(p)?;
    let (re_z, re_w) = (p.z.re.abs(), p.w.re.abs());
    let mut n = q.cycle_index();
    while n <= n_max {
        // Radii increase with n: once either one is out of reach, so is every later W_n.
        if sched.radius(n as i64) >= re_z || sched.radius(n as i64 - 1) >= re_w {
            return None;
        }
        if in_wn(p, n, sched) {
            return Some(n);
        }
        n += 4;
    }
    None
}

/// The constant `C >= 1` of the absorbing set `I(C) = { Re(z^2) > C^2 }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorbingParams {
    c: f64,
}

impl AbsorbingParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 1.0) {
            return Err(Error::InvalidParameter(format!("C must be >= 1, got {c}")));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Default for AbsorbingParams {
    fn default() -> Self {
        Self { c: 1.0 }
    }
}

/// `Re(z^2) > C^2`.
pub fn in_i(z: Complex64, params: &AbsorbingParams) -> bool {
    z.re * z.re - z.im * z.im > params.c * params.c
}

pub fn point_in_ixi(p: &Point, params: &AbsorbingParams) -> bool {
    in_i(p.z, params) && in_i(p.w, params)
}

/// Upper bound `2k / (1 - k^2)` on `|Im z^2 / Re z^2|` when `|Im z / Re z| <= k < 1`.
pub fn tan2theta_bound(k: f64) -> f64 {
    2.0 * k / (1.0 - k * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sector() {
        assert!(in_sector_s(c(1.0, 0.5)));
        assert!(!in_sector_s(c(0.0, 1.0)));
        assert!(!in_sector_s(c(1.0, 1.0)));
        assert!(in_sector_s(c(-3.0, 2.0)));
    }

    #[test]
    fn quadrants() {
        assert_eq!(
            quadrant(&Point::new(c(1.0, 0.5), c(-2.0, 0.0))),
            Some(QuadrantLabel::PM)
        );
        assert_eq!(quadrant(&Point::real(-3.0, -4.0)), Some(QuadrantLabel::MM));
        assert_eq!(quadrant(&Point::new(c(0.0, 2.0), c(1.0, 0.0))), None);
    }

    #[test]
    fn sigma_cycle() {
        assert_eq!(sigma(QuadrantLabel::PP), QuadrantLabel::MP);
        assert_eq!(sigma_inverse(QuadrantLabel::MP), QuadrantLabel::PP);
        for q in QuadrantLabel::ALL {
            assert_eq!(sigma(sigma(sigma(sigma(q)))), q);
            assert_eq!(sigma_inverse(sigma(q)), q);
            assert_eq!(sigma_power(q, 1), sigma(q));
            assert_eq!(sigma_power(q, -1), sigma_inverse(q));
            assert_eq!(sigma_power(q, 4), q);
            assert_eq!(sigma_power(q, -6), sigma(sigma(q)));
            assert_eq!(sigma(sigma(q)), -q);
        }
        // order exactly 4
        for m in 1..4 {
            assert!(QuadrantLabel::ALL.iter().any(|&q| sigma_power(q, m) != q));
        }
    }

    #[test]
    fn labels_display_and_parse() {
        for q in QuadrantLabel::ALL {
            assert_eq!(q.to_string().parse::<QuadrantLabel>().unwrap(), q);
        }
        assert_eq!(QuadrantLabel::MP.to_string(), "-+");
        assert!("+".parse::<QuadrantLabel>().is_err());
        assert!("+-+".parse::<QuadrantLabel>().is_err());
        assert!("x+".parse::<QuadrantLabel>().is_err());
    }

    fn r0_brute(delta: f64, n_max: u64) -> f64 {
        (0..=n_max).map(|n| r0_term(delta, n)).fold(2.0, f64::max)
    }

    #[test]
    fn r0_min_values() {
        assert!((r0_min(3.0) - 1440.0 / 81.0).abs() < 1e-9);
        assert!((r0_brute(3.0, 1000) - 1440.0 / 81.0).abs() < 1e-9);
        assert!((r0_min(8.0) - 3.0).abs() < 1e-12);
        assert!((r0_brute(8.0, 1000) - 3.0).abs() < 1e-12);
        for delta in [2.05, 2.5, 3.0, 5.0, 8.0, 50.0, 1e6] {
            let brute = r0_brute(delta, 5000);
            assert!(
                (r0_min(delta) - brute).abs() <= 1e-12 * brute,
                "delta = {delta}"
            );
            assert!(r0_min(delta) >= 2.0);
        }
    }

    #[test]
    fn r0_min_near_two_is_finite() {
        let r = r0_min(2.0 + 1e-9);
        assert!(r.is_finite() && r > 1e10);
    }

    #[test]
    fn schedule_sanity() {
        for delta in [2.5, 3.0, 5.0] {
            let s = ConeSchedule::default_for(delta).unwrap();
            assert_eq!(s.radius(-1), s.r0());
            assert_eq!(s.radius(0), s.r0());
            for n in 0..=100usize {
                assert!(s.k(n) < s.k(n + 1) && s.k(n + 1) < 1.0);
                assert!(s.radius(n as i64 + 1) > s.radius(n as i64) || n == 0);
                let ni = n as i64;
                assert!(s.radius(ni + 1) < delta * s.radius(ni - 1) - 1.0);
            }
        }
    }

    #[test]
    fn schedule_rejects_small_r0() {
        assert!(ConeSchedule::new(3.0, 17.0).is_err());
        assert!(ConeSchedule::new(3.0, r0_min(3.0)).is_err());
        assert!(ConeSchedule::new(3.0, 18.0).is_ok());
        assert!(ConeSchedule::default_for(1.5).is_err());
    }

    #[test]
    fn ladder_membership() {
        let s = ConeSchedule::new(3.0, 18.0).unwrap();
        let p = Point::real(20.0, 20.0);
        assert!(in_wn(&p, 0, &s));
        assert_eq!(in_w(&p, &s, 100), Some(0));
        let q = Point::real(20.0, -20.0);
        assert!(!in_wn(&q, 0, &s));
        assert!((s.radius(3) - 1.5f64.powf(1.5) * 18.0).abs() < 1e-12);
        assert!(!in_wn(&q, 3, &s));
        assert_eq!(in_w(&q, &s, 100), None);
        assert!(!in_w_kr(c(10.0, 6.0), 0.5, 8.0));
        assert!(in_w_kr(c(10.0, 4.0), 0.5, 8.0));
        // F(20, 20) = (-60, 20) sits in W_1
        assert_eq!(in_w(&Point::real(-60.0, 20.0), &s, 100), Some(1));
    }

    #[test]
    fn absorbing_set() {
        let params = AbsorbingParams::new(1.0).unwrap();
        assert!(in_i(c(2.0, 0.0), &params));
        assert!(!in_i(c(1.0, 1.0), &params));
        assert!(AbsorbingParams::new(0.5).is_err());
    }

    #[test]
    fn tan2theta_values() {
        assert_eq!(tan2theta_bound(0.0), 0.0);
        assert!((tan2theta_bound(0.5) - 4.0 / 3.0).abs() < 1e-15);
    }
}

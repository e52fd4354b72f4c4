use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::map::Point;
use crate::regions::{
    in_i, in_sector_s, in_w, in_wn, point_in_ixi, point_in_s, AbsorbingParams, ConeSchedule, Sign,
};
use crate::rng::SplitMix64;

/// Highest ladder rung drawn by [`Region::W`].
pub const W_SAMPLE_MAX_RUNG: usize = 12;

/// Moduli range for sector samples.
const SECTOR_MODULI: (f64, f64) = (1e-3, 1e3);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// `|Im| < |Re|` in each coordinate, moduli log-uniform in `[1e-3, 1e3]`.
    S,
    /// The ladder union, rung uniform in `0..=12`.
    W,
    /// One rung of the ladder.
    Wn(usize),
    /// `I(C) x I(C)` with the given `C`.
    IxI(f64),
    /// Real and imaginary parts uniform in the given ranges, in each coordinate.
    Box { re: (f64, f64), im: (f64, f64) },
    /// Closed cone `|Im z| <= k |Re z|`, `|Re z|` log-uniform in `[1e-3, 1e3]`.
    Aperture(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerSpec {
    pub region: Region,
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Sample {
    pub point: Point,
    /// Ladder rung the point was drawn from.
    pub rung: Option<usize>,
    /// Seed for any per-sample randomness a suite needs.
    pub aux: u64,
}

/// Draws points of a region; every emitted point satisfies the region predicate.
pub(crate) struct Sampler {
    rng: SplitMix64,
    region: Region,
    schedule: ConeSchedule,
}

impl Sampler {
    pub fn new(rng: SplitMix64, region: Region, schedule: ConeSchedule) -> Self {
        Self {
            rng,
            region,
            schedule,
        }
    }

    fn signed(&mut self, x: f64) -> f64 {
        if self.rng.coin() {
            x
        } else {
            -x
        }
    }

    fn sector_scalar(&mut self) -> Complex64 {
        loop {
            let r = self.rng.log_uniform(SECTOR_MODULI.0, SECTOR_MODULI.1);
            let theta = self.rng.uniform(-FRAC_PI_4, FRAC_PI_4);
            let z = Complex64::from_polar(r, theta);
            let z = if self.rng.coin() { z } else { -z };
            if in_sector_s(z) {
                return z;
            }
        }
    }

    fn aperture_scalar(&mut self, k: f64) -> Complex64 {
        let x = self.rng.log_uniform(SECTOR_MODULI.0, SECTOR_MODULI.1);
        let t = self.rng.uniform(-k, k);
        let re = self.signed(x);
        Complex64::new(re, t * x)
    }

    /// `z` in the cone `|Im| < k |Re|`, `|Re| > r`, with the sign of `Re z` given.
    fn cone_scalar(&mut self, k: f64, r: f64, sign: Sign) -> Complex64 {
        loop {
            let x = self.rng.log_uniform(1.01 * r, 100.0 * r);
            let t = self.rng.uniform(-k, k);
            let z = Complex64::new(sign.value() * x, t * x);
            if z.im.abs() < k * x {
                return z;
            }
        }
    }

    fn i_scalar(&mut self, c: f64) -> Complex64 {
        let params = AbsorbingParams::new(c).expect("validated by the suite");
        loop {
            let x = self.rng.log_uniform(1.01 * c, 1e3 * c);
            let y_max = (x * x - c * c).sqrt();
            let y = self.rng.uniform(-y_max, y_max);
            let z = Complex64::new(self.signed(x), y);
            if in_i(z, &params) {
                return z;
            }
        }
    }

    fn box_scalar(&mut self, re: (f64, f64), im: (f64, f64)) -> Complex64 {
        Complex64::new(self.rng.uniform(re.0, re.1), self.rng.uniform(im.0, im.1))
    }

    fn ladder_point(&mut self, n: usize) -> (Point, Option<usize>) {
        let s = self.schedule;
        let pattern = s.pattern(n);
        let k = s.k(n);
        loop {
            let z = self.cone_scalar(k, s.radius(n as i64), pattern.a);
            let w = self.cone_scalar(k, s.radius(n as i64 - 1), pattern.b);
            let point = Point::new(z, w);
            if in_wn(&point, n, &s) {
                return (point, Some(n));
            }
        }
    }

    pub fn draw(&mut self) -> Sample {
        let (point, rung) = match self.region {
            Region::W => {
                let n = self.rng.below(W_SAMPLE_MAX_RUNG as u64 + 1) as usize;
                self.ladder_point(n)
            }
            Region::Wn(n) => self.ladder_point(n),
            Region::S => (Point::new(self.sector_scalar(), self.sector_scalar()), None),
            Region::Aperture(k) => {
                let p = Point::new(self.aperture_scalar(k), self.aperture_scalar(k));
                (p, None)
            }
            Region::IxI(c) => (Point::new(self.i_scalar(c), self.i_scalar(c)), None),
            Region::Box { re, im } => {
                let p = Point::new(self.box_scalar(re, im), self.box_scalar(re, im));
                (p, None)
            }
        };
        Sample {
            point,
            rung,
            aux: self.rng.next_u64(),
        }
    }
}

/// Whether `p` lies in `region`; every sampler output must pass this.
pub(crate) fn region_contains(region: Region, p: &Point, schedule: &ConeSchedule) -> bool {
    match region {
        Region::S => point_in_s(p),
        Region::W => in_w(p, schedule, W_SAMPLE_MAX_RUNG).is_some(),
        Region::Wn(n) => in_wn(p, n, schedule),
        Region::IxI(c) => AbsorbingParams::new(c).is_ok_and(|c| point_in_ixi(p, &c)),
        Region::Box { re, im } => [p.z, p.w]
            .iter()
            .all(|z| (re.0..=re.1).contains(&z.re) && (im.0..=im.1).contains(&z.im)),
        Region::Aperture(k) => [p.z, p.w].iter().all(|z| z.im.abs() <= k * z.re.abs()),
    }
}

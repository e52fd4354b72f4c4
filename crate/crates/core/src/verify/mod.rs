//! Seeded property suites and their reports.
//!
//! A suite draws samples from a [`Region`], discards those that miss its
//! preconditions, and checks one inequality on the rest. Every check yields a
//! signed margin (negative when the inequality holds with room to spare);
//! the report keeps the largest one as `worst_violation`.
//!
//! Each suite owns the stream `SplitMix64::derive(seed, name)`. Samples are
//! drawn sequentially in batches and evaluated in parallel, so reports do not
//! depend on scheduling.

mod sampler;
mod suites;

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::map::{MapParams, Point};
use crate::regions::{AbsorbingParams, ConeSchedule};
use crate::rng::SplitMix64;

pub use sampler::{Region, SamplerSpec, W_SAMPLE_MAX_RUNG};
pub use suites::{
    CONJUGACY_TOL, DELTA_BOUND_SLACK, DELTA_BOUND_TERMS, GROWTH_STEPS, H2_CROSS_TOL, H_PRODUCT_TOL,
    MEAN_VALUE_HALVING_FACTOR, MEAN_VALUE_NODES, MEAN_VALUE_RADIUS, MEAN_VALUE_TOL,
    TAN2THETA_SLACK, UN_DECAY_RANGE,
};

use sampler::{region_contains, Sampler};
use suites::{Ctx, Outcome, SUITES};

/// Attempts allowed per requested admissible sample.
pub const MAX_ATTEMPT_FACTOR: usize = 64;

/// Samples drawn per batch at most.
const BATCH: usize = 4096;

/// Suite names, in report order.
pub const CATALOG: [&str; 15] = {
    let mut names = [""; 15];
    let mut i = 0;
    while i < 15 {
        names[i] = SUITES[i].0;
        i += 1;
    }
    names
};

/// Header line of [`emit_report`].
pub const REPORT_HEADER: &str =
    "# suite\tattempted\tadmissible\tfailures\tworst_violation\tseed\tdelta\tR0\tC\n";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteParams {
    pub map: MapParams,
    pub schedule: ConeSchedule,
    pub absorbing: AbsorbingParams,
}

impl SuiteParams {
    /// Default `R_0` and `C = 1` for `delta`.
    pub fn for_delta(delta: f64) -> Result<Self> {
        Ok(Self {
            map: MapParams::new(delta)?,
            schedule: ConeSchedule::default_for(delta)?,
            absorbing: AbsorbingParams::default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub attempted: usize,
    pub admissible: usize,
    pub failures: usize,
    /// Largest margin seen; `-inf` when nothing was admissible.
    pub worst_violation: f64,
    pub seed: u64,
    pub delta: f64,
    pub r0: f64,
    pub c: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn check_for(name: &str) -> Result<suites::Check> {
    SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, check)| check)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

/// The region and sample count the acceptance run uses for `name`.
pub fn default_sampler(name: &str, seed: u64) -> Result<SamplerSpec> {
    check_for(name)?;
    let (region, count) = match name {
        "sector-f-bound" => (Region::S, 100_000),
        "quadrant-cycle" => (Region::S, 10_000),
        "real-growth" => (Region::W, 1_000),
        "cone-step" => (Region::W, 10_000),
        "ladder-invariance" => (Region::W, 10_000),
        "un-decay" => (Region::W, 100),
        "tan2theta" => (Region::Aperture(0.5), 10_000),
        "mean-value" => (
            Region::Box {
                re: (-1.5, 1.5),
                im: (-1.0, 1.0),
            },
            20,
        ),
        "halfplane-limits" => (
            Region::Box {
                re: (-60.0, 60.0),
                im: (-2.0, 2.0),
            },
            4_000,
        ),
        "wI-cycle" => (Region::IxI(1.0), 1_000),
        _ => (Region::W, 1_000),
    };
    Ok(SamplerSpec {
        region,
        count,
        seed,
    })
}

/// Every catalog suite with its [`default_sampler`].
pub fn default_samplers(seed: u64) -> Vec<(&'static str, SamplerSpec)> {
    CATALOG
        .iter()
        .map(|&name| (name, default_sampler(name, seed).expect("catalog name")))
        .collect()
}

fn validate(sampler: &SamplerSpec, params: &SuiteParams) -> Result<()> {
    if sampler.count == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    if params.schedule.delta() != params.map.delta() {
        return Err(Error::InvalidParameter(format!(
            "schedule built for delta = {}, map has delta = {}",
            params.schedule.delta(),
            params.map.delta()
        )));
    }
    match sampler.region {
        Region::IxI(c) => {
            AbsorbingParams::new(c)?;
        }
        Region::Aperture(k) if !(0.0..1.0).contains(&k) => {
            return Err(Error::InvalidParameter(format!(
                "aperture must be in [0, 1), got {k}"
            )));
        }
        Region::Box { re, im } if !(re.0 <= re.1 && im.0 <= im.1) => {
            return Err(Error::InvalidParameter("empty sampling box".into()));
        }
        Region::Box { re, im } if ![re.0, re.1, im.0, im.1].iter().all(|x| x.is_finite()) => {
            return Err(Error::InvalidParameter(
                "sampling box must be finite".into(),
            ));
        }
        _ => {}
    }
    Ok(())
}

pub fn run_suite(name: &str, sampler: &SamplerSpec, params: &SuiteParams) -> Result<SuiteReport> {
    run_suite_with(name, sampler, params, Execution::default())
}

/// [`run_suite`] with explicit execution; the report is identical for every `exec`.
pub fn run_suite_with(
    name: &str,
    spec: &SamplerSpec,
    params: &SuiteParams,
    exec: Execution,
) -> Result<SuiteReport> {
    let check = check_for(name)?;
    validate(spec, params)?;
    let ctx = Ctx {
        params,
        region: spec.region,
    };
    let mut sampler = Sampler::new(
        SplitMix64::derive(spec.seed, name),
        spec.region,
        params.schedule,
    );
    let max_attempts = spec.count.saturating_mul(MAX_ATTEMPT_FACTOR);
    let mut report = SuiteReport {
        suite: name.to_string(),
        attempted: 0,
        admissible: 0,
        failures: 0,
        worst_violation: f64::NEG_INFINITY,
        seed: spec.seed,
        delta: params.map.delta(),
        r0: params.schedule.r0(),
        c: params.absorbing.c(),
    };

    while report.admissible < spec.count && report.attempted < max_attempts {
        let want = (spec.count - report.admissible)
            .min(max_attempts - report.attempted)
            .min(BATCH);
        let batch: Vec<_> = (0..want).map(|_| sampler.draw()).collect();
        let outcomes = map_slice(exec, &batch, |s| {
            assert!(
                region_contains(spec.region, &s.point, &params.schedule),
                "sampler emitted a point outside {:?}",
                spec.region
            );
            check(s, &ctx)
        });
        for outcome in outcomes {
            if report.admissible == spec.count {
                break;
            }
            report.attempted += 1;
            if let Outcome::Checked { margin, ok } = outcome {
                report.admissible += 1;
                if !ok {
                    report.failures += 1;
                }
                // NaN margins count as the worst possible
                report.worst_violation = if margin.is_nan() {
                    f64::INFINITY
                } else {
                    report.worst_violation.max(margin)
                };
            }
        }
    }
    Ok(report)
}

/// `spec.count` points drawn from `spec.region` with the stream `SplitMix64::new(spec.seed)`.
pub fn sample_points(spec: &SamplerSpec, schedule: &ConeSchedule) -> Vec<Point> {
    let mut sampler = Sampler::new(SplitMix64::new(spec.seed), spec.region, *schedule);
    (0..spec.count).map(|_| sampler.draw().point).collect()
}

/// Runs the given suites concurrently; reports come back in input order.
pub fn run_all(samplers: &[(&str, SamplerSpec)], params: &SuiteParams) -> Result<Vec<SuiteReport>> {
    run_all_with(samplers, params, Execution::default())
}

pub fn run_all_with(
    samplers: &[(&str, SamplerSpec)],
    params: &SuiteParams,
    exec: Execution,
) -> Result<Vec<SuiteReport>> {
    map_slice(exec, samplers, |(name, spec)| {
        run_suite_with(name, spec, params, exec)
    })
    .into_iter()
    .collect()
}

/// Writes the tab-separated report document and returns the bytes written.
pub fn emit_report<W: Write>(reports: &[SuiteReport], mut dest: W) -> io::Result<usize> {
    let mut doc = String::from(REPORT_HEADER);
    for r in reports {
        doc.push_str(&format!(
            "{}\t{}\t{}\t{}\t{:?}\t{}\t{:?}\t{:?}\t{:?}\n",
            r.suite,
            r.attempted,
            r.admissible,
            r.failures,
            r.worst_violation,
            r.seed,
            r.delta,
            r.r0,
            r.c
        ));
    }
    dest.write_all(doc.as_bytes())?;
    dest.flush()?;
    Ok(doc.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SuiteParams {
        SuiteParams::for_delta(3.0).unwrap()
    }

    fn small(name: &str, count: usize) -> SamplerSpec {
        SamplerSpec {
            count,
            ..default_sampler(name, 7).unwrap()
        }
    }

    #[test]
    fn catalog_is_closed() {
        assert_eq!(CATALOG.len(), 15);
        let err = run_suite("no-such-suite", &small("h-product", 1), &params()).unwrap_err();
        assert_eq!(err, Error::UnknownSuite("no-such-suite".into()));
        assert!(default_sampler("no-such-suite", 0).is_err());
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut out = Vec::new();
        let n = emit_report(&[], &mut out).unwrap();
        assert_eq!(n, REPORT_HEADER.len());
        assert_eq!(out, REPORT_HEADER.as_bytes());
    }

    #[test]
    fn counts_are_consistent() {
        for name in CATALOG {
            let r = run_suite(name, &small(name, 5), &params()).unwrap();
            assert!(
                r.failures <= r.admissible && r.admissible <= r.attempted,
                "{r:?}"
            );
            assert!(r.attempted <= 5 * MAX_ATTEMPT_FACTOR);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let samplers: Vec<_> = CATALOG.iter().map(|&n| (n, small(n, 20))).collect();
        let a = run_all_with(&samplers, &params(), Execution::Parallel).unwrap();
        let b = run_all_with(&samplers, &params(), Execution::Sequential).unwrap();
        let (mut da, mut db) = (Vec::new(), Vec::new());
        emit_report(&a, &mut da).unwrap();
        emit_report(&b, &mut db).unwrap();
        assert_eq!(da, db);
        assert_eq!(da.iter().filter(|&&c| c == b'\n').count(), 16);
    }

    #[test]
    fn flat_aperture_gives_zero_ratio() {
        let spec = SamplerSpec {
            region: Region::Box {
                re: (-5.0, 5.0),
                im: (0.0, 0.0),
            },
            count: 200,
            seed: 1,
        };
        let r = run_suite("tan2theta", &spec, &params()).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.admissible, 200);
        assert_eq!(r.worst_violation, -TAN2THETA_SLACK);
    }

    #[test]
    fn rejects_bad_samplers() {
        let mut spec = small("sector-f-bound", 1);
        spec.count = 0;
        assert!(run_suite("sector-f-bound", &spec, &params()).is_err());
        spec.count = 1;
        spec.region = Region::Aperture(1.0);
        assert!(run_suite("tan2theta", &spec, &params()).is_err());
        spec.region = Region::IxI(0.5);
        assert!(run_suite("wI-cycle", &spec, &params()).is_err());
    }

    #[test]
    fn write_failure_propagates() {
        struct Broken;
        impl Write for Broken {
            fn write(&mut self, _: &[u8]) -> io::Result<usize> {
                Err(io::Error::other("closed"))
            }
            fn flush(&mut self) -> io::Result<()> {
                Ok(())
            }
        }
        assert!(emit_report(&[], Broken).is_err());
    }
}

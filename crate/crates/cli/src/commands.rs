use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use henon_lab::classify::classify;
use henon_lab::map::iterate;
use henon_lab::regions::point_in_s;
use henon_lab::render::{render, write_ppm, Palette, RenderJob, SliceMode, SliceSpec};
use henon_lab::verify::{default_sampler, emit_report, run_all, SuiteParams, CATALOG};
use henon_lab::{AbsorbingParams, ClassifyConfig, ConeSchedule, MapParams, Point, Status};

use crate::{Cli, Command, Global, Slice};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(4),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<henon_lab::Error> for CliError {
    fn from(e: henon_lab::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

const NOT_CAPTURED: u8 = 3;
const VERIFY_FAILED: u8 = 1;

fn suite_params(g: &Global) -> Result<SuiteParams, CliError> {
    let schedule = match g.r0 {
        Some(r0) => ConeSchedule::new(g.delta, r0)?,
        None => ConeSchedule::default_for(g.delta)?,
    };
    Ok(SuiteParams {
        map: MapParams::new(g.delta)?,
        schedule,
        absorbing: AbsorbingParams::new(g.big_c)?,
    })
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let g = &cli.global;
    let params = suite_params(g)?;
    let cfg = ClassifyConfig::new(params.schedule).with_budget(g.budget);
    match cli.command {
        Command::Orbit { z0, w0, n } => {
            let mut out = open_out(g.out.as_deref())?;
            orbit(&mut out, Point::new(z0, w0), n, &params.map)?;
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { z0, w0 } => {
            let r = classify(&Point::new(z0, w0), &cfg, &params.map);
            let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            let line = format!(
                "{} {} {} {} {}\n",
                r.status,
                opt(r.label.map(|q| q.to_string())),
                opt(r.capture_step.map(|m| m.to_string())),
                opt(r.h1_at_point.map(|h| format!("{:?}", h.re))),
                opt(r.h1_at_point.map(|h| format!("{:?}", h.im))),
            );
            let mut out = open_out(g.out.as_deref())?;
            out.write_all(line.as_bytes())?;
            out.flush()?;
            Ok(if r.status == Status::Captured {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(NOT_CAPTURED)
            })
        }
        Command::Verify { suite, samples } => {
            let names: Vec<&str> = if suite == "all" {
                CATALOG.to_vec()
            } else {
                vec![suite.as_str()]
            };
            if samples == Some(0) {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let samplers = names
                .iter()
                .map(|&name| {
                    let mut spec = default_sampler(name, g.seed)?;
                    if let Some(n) = samples {
                        spec.count = n;
                    }
                    Ok((name, spec))
                })
                .collect::<Result<Vec<_>, henon_lab::Error>>()?;
            let reports = run_all(&samplers, &params)?;
            let mut out = open_out(g.out.as_deref())?;
            emit_report(&reports, &mut out)?;
            Ok(if reports.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(VERIFY_FAILED)
            })
        }
        Command::Render {
            slice,
            center,
            extent,
            res,
            fixed,
            gamma,
        } => {
            let path = g
                .out
                .as_deref()
                .ok_or_else(|| CliError::Usage("render needs --out FILE".into()))?;
            let mode = match slice {
                Slice::Real => SliceMode::RealPlane,
                Slice::Zplane => SliceMode::ZPlane { w: fixed },
            };
            let job = RenderJob {
                slice: SliceSpec {
                    mode,
                    center,
                    extent,
                    resolution: res,
                },
                cfg,
                params: params.map,
                palette: Palette::default(),
                gamma,
            };
            job.validate()?;
            let mut out = BufWriter::new(File::create(path)?);
            let img = render(&job)?;
            let bytes = write_ppm(&img, &mut out)?;
            println!("{} {} {bytes}", img.width, img.height);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn orbit<W: Write>(out: &mut W, p: Point, n: usize, params: &MapParams) -> io::Result<()> {
    let orbit = iterate(&p, n, params);
    writeln!(out, "step,re_z,im_z,re_w,im_w,in_S,u_n")?;
    for (k, q) in orbit.points.iter().enumerate() {
        let u = if k == 0 {
            String::new()
        } else {
            format!("{:?}", -(q.z * q.z).re / k as f64)
        };
        writeln!(
            out,
            "{k},{:?},{:?},{:?},{:?},{},{u}",
            q.z.re,
            q.z.im,
            q.w.re,
            q.w.im,
            point_in_s(q)
        )?;
    }
    if let Some(step) = orbit.saturated_at {
        eprintln!("henon-lab: orbit saturated at step {step}; rows stop there");
    }
    Ok(())
}

//! Tile-parallel rendering of real 2-slices of `C^2`, written as binary PPM.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::classify::{classify, ClassificationResult, ClassifyConfig, Status};
use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::map::{MapParams, Point};
use crate::regions::QuadrantLabel;

/// Edge length of the square tiles that make up one unit of parallel work.
pub const TILE: u32 = 64;

const MAX_PIXELS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceMode {
    /// `Im z = Im w = 0`; axes `Re z` (right) and `Re w` (up).
    RealPlane,
    /// `w` held fixed; axes `Re z` (right) and `Im z` (up).
    ZPlane { w: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceSpec {
    pub mode: SliceMode,
    pub center: (f64, f64),
    pub extent: (f64, f64),
    /// `(width, height)` in pixels.
    pub resolution: (u32, u32),
}

impl SliceSpec {
    pub fn validate(&self) -> Result<()> {
        let (ex, ey) = self.extent;
        let (w, h) = self.resolution;
        let finite = self.center.0.is_finite() && self.center.1.is_finite();
        if !(finite && ex > 0.0 && ey > 0.0 && ex.is_finite() && ey.is_finite()) {
            return Err(Error::InvalidParameter(
                "slice center must be finite and extents positive".into(),
            ));
        }
        if w == 0 || h == 0 || w as u64 * h as u64 > MAX_PIXELS {
            return Err(Error::InvalidParameter(format!(
                "resolution {w}x{h} must be nonzero and at most 1e8 pixels"
            )));
        }
        if let SliceMode::ZPlane { w } = self.mode {
            if !w.is_finite() {
                return Err(Error::InvalidParameter("fixed w must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Center of pixel `(i, j)`: `i` runs along the first axis, `j` down the second.
///
/// Offsets are formed as `(i + 1/2 - width/2) * pitch` so that pixels mirrored
/// through the center map to exactly negated coordinates.
pub fn pixel_to_point(slice: &SliceSpec, i: u32, j: u32) -> Point {
    let (w, h) = slice.resolution;
    let x = slice.center.0 + (i as f64 + 0.5 - w as f64 / 2.0) * (slice.extent.0 / w as f64);
    let y = slice.center.1 - (j as f64 + 0.5 - h as f64 / 2.0) * (slice.extent.1 / h as f64);
    match slice.mode {
        SliceMode::RealPlane => Point::real(x, y),
        SliceMode::ZPlane { w } => Point::new(Complex64::new(x, y), w),
    }
}

pub type Rgb = [u8; 3];

/// Colors for the four labels and the two failure statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette {
    /// Indexed by [`QuadrantLabel::cycle_index`]: `++, -+, --, +-`.
    pub labels: [Rgb; 4],
    pub saturated: Rgb,
    pub exhausted: Rgb,
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            labels: [[220, 60, 60], [60, 120, 220], [230, 180, 40], [60, 180, 90]],
            saturated: [0, 0, 0],
            exhausted: [128, 128, 128],
        }
    }
}

impl Palette {
    fn entries(&self) -> [Rgb; 6] {
        let [a, b, c, d] = self.labels;
        [a, b, c, d, self.saturated, self.exhausted]
    }

    pub fn validate(&self) -> Result<()> {
        let e = self.entries();
        for i in 0..e.len() {
            if e[i + 1..].contains(&e[i]) {
                return Err(Error::InvalidParameter(
                    "palette entries must be distinct".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn label(&self, q: QuadrantLabel) -> Rgb {
        self.labels[q.cycle_index()]
    }

    /// `LeftS` shares the exhausted color: both mean "not certified".
    pub fn color(&self, r: &ClassificationResult, gamma: f64) -> Rgb {
        match (r.status, r.label) {
            (Status::Captured, Some(q)) => {
                let base = self.label(q);
                let steps = r.capture_step.unwrap_or(0);
                if gamma == 1.0 || steps == 0 {
                    base
                } else {
                    let s = gamma.powi(steps.min(i32::MAX as usize) as i32);
                    base.map(|c| (c as f64 * s).round() as u8)
                }
            }
            (Status::Saturated, _) => self.saturated,
            _ => self.exhausted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderJob {
    pub slice: SliceSpec,
    pub cfg: ClassifyConfig,
    pub params: MapParams,
    pub palette: Palette,
    /// Captured colors are scaled by `gamma^capture_step`; `gamma` in `(0, 1]`.
    pub gamma: f64,
}

impl RenderJob {
    pub fn validate(&self) -> Result<()> {
        self.slice.validate()?;
        self.palette.validate()?;
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "shading factor must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Row-major RGB, 3 bytes per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            data: vec![0; 3 * width as usize * height as usize],
        }
    }

    pub fn pixel(&self, i: u32, j: u32) -> Rgb {
        let at = 3 * (j as usize * self.width as usize + i as usize);
        [self.data[at], self.data[at + 1], self.data[at + 2]]
    }
}

#[derive(Debug, Clone, Copy)]
struct Tile {
    x0: u32,
    y0: u32,
    w: u32,
    h: u32,
}

fn tiles(width: u32, height: u32) -> Vec<Tile> {
    let mut out = Vec::new();
    for y0 in (0..height).step_by(TILE as usize) {
        for x0 in (0..width).step_by(TILE as usize) {
            out.push(Tile {
                x0,
                y0,
                w: TILE.min(width - x0),
                h: TILE.min(height - y0),
            });
        }
    }
    out
}

/// Classifies every pixel of the slice, row-major.
pub fn classify_slice(job: &RenderJob, exec: Execution) -> Result<Vec<ClassificationResult>> {
    job.slice.validate()?;
    let (width, height) = job.slice.resolution;
    let tiles = tiles(width, height);
    let per_tile = map_slice(exec, &tiles, |t| {
        let mut out = Vec::with_capacity((t.w * t.h) as usize);
        for j in t.y0..t.y0 + t.h {
            for i in t.x0..t.x0 + t.w {
                let p = pixel_to_point(&job.slice, i, j);
                out.push(classify(&p, &job.cfg, &job.params));
            }
        }
        out
    });
    let blank = ClassificationResult {
        label: None,
        capture_step: None,
        status: Status::BudgetExhausted,
        h1_at_point: None,
    };
    let mut grid = vec![blank; width as usize * height as usize];
    for (t, results) in tiles.iter().zip(per_tile) {
        for (k, r) in results.into_iter().enumerate() {
            let (di, dj) = (k as u32 % t.w, k as u32 / t.w);
            grid[((t.y0 + dj) * width + t.x0 + di) as usize] = r;
        }
    }
    Ok(grid)
}

/// Renders the job; the bytes do not depend on `exec` or on the thread count.
pub fn render_with(job: &RenderJob, exec: Execution) -> Result<ImageBuffer> {
    job.validate()?;
    let (width, height) = job.slice.resolution;
    let grid = classify_slice(job, exec)?;
    let mut img = ImageBuffer::new(width, height);
    for (px, r) in img.data.chunks_exact_mut(3).zip(&grid) {
        px.copy_from_slice(&job.palette.color(r, job.gamma));
    }
    Ok(img)
}

pub fn render(job: &RenderJob) -> Result<ImageBuffer> {
    render_with(job, Execution::default())
}

/// Writes binary PPM (`P6`, maxval 255) and returns the number of bytes written.
pub fn write_ppm<W: Write>(img: &ImageBuffer, mut dest: W) -> io::Result<usize> {
    let header = format!("P6\n{} {}\n255\n", img.width, img.height);
    dest.write_all(header.as_bytes())?;
    dest.write_all(&img.data)?;
    dest.flush()?;
    Ok(header.len() + img.data.len())
}

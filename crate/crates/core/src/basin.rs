//! Basin rasters: every cell center of a rectangular window classified by
//! [`FateClassifier`].

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::Point;
use crate::systems::{FateClassifier, FateCode, SystemId, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Window {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        Self { x_lo, x_hi, y_lo, y_hi }
    }

    /// (11,6) is undefined on the y-axis, so its windows must sit inside the
    /// open quadrant; (11,14) windows may touch the axes.
    pub fn validate(&self, system: SystemId) -> Result<()> {
        let all_finite = [self.x_lo, self.x_hi, self.y_lo, self.y_hi]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidWindow("bounds must be finite".into()));
        }
        if !(self.x_lo < self.x_hi && self.y_lo < self.y_hi) {
            return Err(Error::InvalidWindow("window is empty".into()));
        }
        match system {
            SystemId::Sys1106 if !(self.x_lo > 0.0 && self.y_lo > 0.0) => Err(Error::InvalidWindow(
                "(11,6) windows must lie in the open positive quadrant".into(),
            )),
            SystemId::Sys1114 if !(self.x_lo >= 0.0 && self.y_lo >= 0.0) => Err(Error::InvalidWindow(
                "(11,14) windows must lie in the closed positive quadrant".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Row-major fate codes; row 0 is the top of the window (`y_hi`), matching
/// image row order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinRaster {
    pub system: SystemId,
    pub params: SystemParams,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub max_iter: usize,
    pub cells: Vec<FateCode>,
}

impl BasinRaster {
    pub fn cell_width(&self) -> f64 {
        (self.window.x_hi - self.window.x_lo) / self.width as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.window.y_hi - self.window.y_lo) / self.height as f64
    }

    pub fn cell_center(&self, col: usize, row: usize) -> Point {
        cell_center(&self.window, self.width, self.height, col, row)
    }

    pub fn get(&self, col: usize, row: usize) -> FateCode {
        self.cells[row * self.width + col]
    }

    /// Binary PGM (P5, maxval 255).
    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.cells.iter().map(|c| c.gray()).collect();
        out.write_all(&bytes)
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.cells.len() + 32);
        self.write_pgm(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    /// Sidecar metadata document.
    pub fn sidecar(&self) -> serde_json::Value {
        let fractions: BTreeMap<String, f64> = fate_fractions(self)
            .into_iter()
            .map(|(k, v)| (k.name().to_string(), v))
            .collect();
        let gray: BTreeMap<String, u8> = FateCode::ALL
            .iter()
            .map(|c| (c.name().to_string(), c.gray()))
            .collect();
        serde_json::json!({
            "schema": "cpd-basin-1",
            "system": self.system,
            "params": self.params.named(self.system),
            "window": self.window,
            "width": self.width,
            "height": self.height,
            "max_iter": self.max_iter,
            "row_order": "top_down",
            "gray_levels": gray,
            "fate_fractions": fractions,
        })
    }
}

fn cell_center(w: &Window, width: usize, height: usize, col: usize, row: usize) -> Point {
    let dx = (w.x_hi - w.x_lo) / width as f64;
    let dy = (w.y_hi - w.y_lo) / height as f64;
    Point {
        x: w.x_lo + (col as f64 + 0.5) * dx,
        y: w.y_hi - (row as f64 + 0.5) * dy,
    }
}

/// Classify every cell center. Rows are distributed over the current rayon
/// pool; the output is identical for any pool size.
pub fn rasterize(
    system: SystemId,
    params: &SystemParams,
    window: Window,
    width: usize,
    height: usize,
    max_iter: usize,
) -> Result<BasinRaster> {
    window.validate(system)?;
    if width == 0 || height == 0 {
        return Err(Error::InvalidWindow("resolution must be at least 1x1".into()));
    }
    let classifier = FateClassifier::new(system, params);
    let rows: Vec<Vec<FateCode>> = (0..height)
        .into_par_iter()
        .map(|row| {
            (0..width)
                .map(|col| {
                    let p = cell_center(&window, width, height, col, row);
                    classifier.classify(p, max_iter).fate
                })
                .collect()
        })
        .collect();
    Ok(BasinRaster {
        system,
        params: *params,
        window,
        width,
        height,
        max_iter,
        cells: rows.into_iter().flatten().collect(),
    })
}

/// Fraction of cells per fate code; codes that never occur are omitted.
pub fn fate_fractions(raster: &BasinRaster) -> BTreeMap<FateCode, f64> {
    let mut counts: BTreeMap<FateCode, usize> = BTreeMap::new();
    for c in &raster.cells {
        *counts.entry(*c).or_default() += 1;
    }
    let total = raster.cells.len() as f64;
    counts
        .into_iter()
        .map(|(k, n)| (k, n as f64 / total))
        .collect()
}

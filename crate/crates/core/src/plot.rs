//! Raster pictures of the pseudoorder around a centre point, written as
//! plain PPM.

use std::fmt::Write as _;

use crate::cxe::{band_edge_rows, classify_region, pseudoequal_cells, CxE, Region, Window};
use crate::error::Result;
use crate::scalar::PrecisionConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

pub const BLUE: Rgb = Rgb(0, 0, 255);
pub const RED: Rgb = Rgb(255, 0, 0);
pub const BLACK: Rgb = Rgb(0, 0, 0);
pub const WHITE: Rgb = Rgb(255, 255, 255);

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub center: CxE,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    /// Dashed white rows where the `2πe` band around the centre ends.
    pub band_marks: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    /// Row-major, row 0 at the top.
    pub pixels: Vec<Rgb>,
}

impl Raster {
    pub fn get(&self, col: usize, row: usize) -> Rgb {
        self.pixels[row * self.width + col]
    }

    /// Plain (`P3`) PPM text.
    pub fn to_ppm(&self) -> String {
        let mut out = format!("P3\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row
                .iter()
                .map(|Rgb(r, g, b)| format!("{r} {g} {b}"))
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

fn color(region: Region) -> Rgb {
    match region {
        Region::Major => BLUE,
        Region::Minor => RED,
        Region::Equal => BLACK,
    }
}

/// Blue where the cell centre is pseudogreater than the centre, red where
/// pseudoless, black on every cell that contains the centre or its stigma.
pub fn render(spec: &PlotSpec, cfg: &PrecisionConfig) -> Result<Raster> {
    let res = (spec.width, spec.height);
    let grid = classify_region(&spec.center, &spec.window, res, cfg)?;
    let mut pixels: Vec<Rgb> = grid.cells.iter().map(|r| color(*r)).collect();
    let mut black = vec![false; pixels.len()];
    for (i, r) in grid.cells.iter().enumerate() {
        black[i] = *r == Region::Equal;
    }
    for (col, row) in pseudoequal_cells(&spec.center, &spec.window, res, cfg)? {
        let i = row * spec.width + col;
        pixels[i] = BLACK;
        black[i] = true;
    }
    if spec.band_marks {
        for row in band_edge_rows(&spec.center, &spec.window, spec.height, cfg)? {
            for col in (0..spec.width).step_by(2) {
                let i = row * spec.width + col;
                if !black[i] {
                    pixels[i] = WHITE;
                }
            }
        }
    }
    Ok(Raster {
        width: spec.width,
        height: spec.height,
        pixels,
    })
}

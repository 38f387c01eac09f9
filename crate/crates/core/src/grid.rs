//! Square sample grids over `[0,1]²` and their on-disk formats.
//!
//! A grid value at `(i1, i2)` is an approximate cell average of the carried
//! function over `[i1/n,(i1+1)/n] × [i2/n,(i2+1)/n]`; the representative sample
//! point of a cell is its center `((i1+0.5)/n, (i2+0.5)/n)`. Storage is
//! row-major in `i1`.
//!
//! GRD1 container: a 64-byte header holding the JSON
//! `{"magic":"GRD1","n":N,"dtype":"f64le"}` padded with spaces, followed by the
//! samples as little-endian f64. One-dimensional tables reuse the container
//! with an extra `"rows"` field (`rows × n` samples instead of `n × n`).

use std::io::{self, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const GRD1_HEADER_LEN: usize = 64;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("bad GRD1 header: {0}")]
    BadHeader(String),
    #[error("grid payload truncated: expected {expected} samples, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("grid side {0} is not a supported size")]
    BadSide(usize),
}

/// An `n × n` real grid (row-major, `x1` = row index, `x2` = column index).
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    n: usize,
    data: Vec<f64>,
}

impl ImageGrid {
    pub fn zeros(n: usize) -> Self {
        ImageGrid {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_data(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "data length must be n^2");
        ImageGrid { n, data }
    }

    /// Fills from a function of the cell center.
    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        use rayon::prelude::*;
        let h = 1.0 / n as f64;
        let mut data = vec![0.0; n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(i1, row)| {
            let x1 = (i1 as f64 + 0.5) * h;
            for (i2, v) in row.iter_mut().enumerate() {
                let x2 = (i2 as f64 + 0.5) * h;
                *v = f(x1, x2);
            }
        });
        ImageGrid { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize) -> f64 {
        self.data[i1 * self.n + i2]
    }

    #[inline]
    pub fn set(&mut self, i1: usize, i2: usize, v: f64) {
        self.data[i1 * self.n + i2] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Transposed copy (swaps the roles of x1 and x2).
    pub fn transposed(&self) -> ImageGrid {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i1 in 0..n {
            for i2 in 0..n {
                out[i2 * n + i1] = self.data[i1 * n + i2];
            }
        }
        ImageGrid { n, data: out }
    }

    /// Discrete L² norm: `h · ‖data‖₂`, the grid analogue of `‖·‖_{L²([0,1]²)}`.
    pub fn norm_l2(&self) -> f64 {
        self.h() * self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Discrete L² inner product `h² Σ f·g`.
    pub fn dot(&self, other: &ImageGrid) -> f64 {
        assert_eq!(self.n, other.n);
        let s: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum();
        s * self.h() * self.h()
    }

    pub fn scaled(&self, a: f64) -> ImageGrid {
        ImageGrid {
            n: self.n,
            data: self.data.iter().map(|v| a * v).collect(),
        }
    }

    pub fn axpy(&mut self, a: f64, other: &ImageGrid) {
        assert_eq!(self.n, other.n);
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    pub fn sub(&self, other: &ImageGrid) -> ImageGrid {
        assert_eq!(self.n, other.n);
        ImageGrid {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Pointwise product (used for domain masks).
    pub fn hadamard(&self, other: &ImageGrid) -> ImageGrid {
        assert_eq!(self.n, other.n);
        ImageGrid {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// 2×2 cell-average downsampling to side n/2.
    pub fn downsample(&self) -> ImageGrid {
        let n = self.n / 2;
        let mut out = vec![0.0; n * n];
        for i1 in 0..n {
            for i2 in 0..n {
                out[i1 * n + i2] = 0.25
                    * (self.get(2 * i1, 2 * i2)
                        + self.get(2 * i1 + 1, 2 * i2)
                        + self.get(2 * i1, 2 * i2 + 1)
                        + self.get(2 * i1 + 1, 2 * i2 + 1));
            }
        }
        ImageGrid { n, data: out }
    }

    pub fn write_grd1<W: Write>(&self, w: &mut W) -> Result<(), GridError> {
        write_grd1_raw(w, self.n, self.n, &self.data)
    }

    pub fn read_grd1<R: Read>(r: &mut R) -> Result<ImageGrid, GridError> {
        let (rows, cols, data) = read_grd1_raw(r)?;
        if rows != cols {
            return Err(GridError::BadHeader(format!(
                "expected square grid, got {rows}x{cols}"
            )));
        }
        Ok(ImageGrid { n: cols, data })
    }

    pub fn save_grd1(&self, path: &Path) -> Result<(), GridError> {
        let mut f = std::fs::File::create(path)?;
        self.write_grd1(&mut f)
    }

    pub fn load_grd1(path: &Path) -> Result<ImageGrid, GridError> {
        let mut f = std::fs::File::open(path)?;
        ImageGrid::read_grd1(&mut f)
    }

    /// 16-bit binary PGM with a linear rescale (min→0, max→65535).
    pub fn write_pgm16<W: Write>(&self, w: &mut W) -> Result<(), GridError> {
        let lo = self.data.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        write!(w, "P5\n{} {}\n65535\n", self.n, self.n)?;
        let mut buf = Vec::with_capacity(self.n * self.n * 2);
        for v in &self.data {
            let t = ((v - lo) / span * 65535.0).round().clamp(0.0, 65535.0) as u16;
            buf.extend_from_slice(&t.to_be_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Grd1Header {
    magic: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<usize>,
    dtype: String,
}

pub(crate) fn write_grd1_raw<W: Write>(
    w: &mut W,
    rows: usize,
    cols: usize,
    data: &[f64],
) -> Result<(), GridError> {
    assert_eq!(data.len(), rows * cols);
    let header = if rows == cols {
        format!("{{\"magic\":\"GRD1\",\"n\":{cols},\"dtype\":\"f64le\"}}")
    } else {
        format!("{{\"magic\":\"GRD1\",\"n\":{cols},\"rows\":{rows},\"dtype\":\"f64le\"}}")
    };
    if header.len() > GRD1_HEADER_LEN {
        return Err(GridError::BadHeader("header exceeds 64 bytes".into()));
    }
    let mut padded = vec![b' '; GRD1_HEADER_LEN];
    padded[..header.len()].copy_from_slice(header.as_bytes());
    w.write_all(&padded)?;
    let mut buf = Vec::with_capacity(data.len() * 8);
    for v in data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub(crate) fn read_grd1_raw<R: Read>(r: &mut R) -> Result<(usize, usize, Vec<f64>), GridError> {
    let mut head = [0u8; GRD1_HEADER_LEN];
    r.read_exact(&mut head)?;
    let text = std::str::from_utf8(&head)
        .map_err(|e| GridError::BadHeader(e.to_string()))?
        .trim_end();
    let header: Grd1Header =
        serde_json::from_str(text).map_err(|e| GridError::BadHeader(e.to_string()))?;
    if header.magic != "GRD1" || header.dtype != "f64le" {
        return Err(GridError::BadHeader(format!(
            "magic={} dtype={}",
            header.magic, header.dtype
        )));
    }
    let cols = header.n;
    let rows = header.rows.unwrap_or(cols);
    let expected = rows * cols;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < expected * 8 {
        return Err(GridError::Truncated {
            expected,
            got: bytes.len() / 8,
        });
    }
    let data = bytes[..expected * 8]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((rows, cols, data))
}

//! Binary and CSV interchange for grids and operators.
//!
//! Binary layout, little-endian: magic `OQHA`, one tag byte (1 grid, 2 operator),
//! three zero bytes, `u64 d`, `f64 L`, `u64 n`, then `(re, im)` pairs as `f64`.
//! Operators store `d = 0`, `L = 0` and `n` = Fock truncation, row-major.

use std::io::{Read, Write};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::scalar::Real;

use super::{GridFunction, GridSpec};

const MAGIC: &[u8; 4] = b"OQHA";
const TAG_GRID: u8 = 1;
const TAG_OPERATOR: u8 = 2;

/// Either payload of the binary format.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload<T: Real> {
    Grid(GridFunction<T>),
    Operator(OperatorMatrix<T>),
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

fn write_header<W: Write>(w: &mut W, tag: u8, d: u64, l: f64, n: u64) -> Result<()> {
    w.write_all(MAGIC).map_err(io_err)?;
    w.write_all(&[tag, 0, 0, 0]).map_err(io_err)?;
    w.write_all(&d.to_le_bytes()).map_err(io_err)?;
    w.write_all(&l.to_le_bytes()).map_err(io_err)?;
    w.write_all(&n.to_le_bytes()).map_err(io_err)
}

fn write_values<W: Write, T: Real>(w: &mut W, values: &[Complex<T>]) -> Result<()> {
    let mut buf = Vec::with_capacity(values.len() * 16);
    for z in values {
        buf.extend_from_slice(&z.re.as_f64().to_le_bytes());
        buf.extend_from_slice(&z.im.as_f64().to_le_bytes());
    }
    w.write_all(&buf).map_err(io_err)
}

pub fn write_grid<W: Write, T: Real>(mut w: W, f: &GridFunction<T>) -> Result<()> {
    let s = f.spec();
    write_header(&mut w, TAG_GRID, s.d as u64, s.extent.as_f64(), s.n as u64)?;
    write_values(&mut w, f.values())
}

pub fn write_operator<W: Write, T: Real>(mut w: W, a: &OperatorMatrix<T>) -> Result<()> {
    write_header(&mut w, TAG_OPERATOR, 0, 0.0, a.dim() as u64)?;
    write_values(&mut w, a.data())
}

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

pub fn read_binary<R: Read, T: Real>(mut r: R) -> Result<Payload<T>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(io_err)?;
    if bytes.len() < 32 || &bytes[..4] != MAGIC {
        return Err(Error::InvalidInput("not an OQHA file".into()));
    }
    let tag = bytes[4];
    let (d, l, n) = (u64_at(&bytes, 8) as usize, f64_at(&bytes, 16), u64_at(&bytes, 24) as usize);
    let count = match tag {
        TAG_GRID => n.checked_pow(2 * d as u32),
        TAG_OPERATOR => n.checked_mul(n),
        other => return Err(Error::InvalidInput(format!("unknown payload tag {other}"))),
    }
    .ok_or_else(|| Error::InvalidInput("header sizes overflow".into()))?;
    let body = &bytes[32..];
    if body.len() != count * 16 {
        return Err(Error::InvalidInput(format!("expected {} value bytes, found {}", count * 16, body.len())));
    }
    let values: Vec<Complex<T>> = body
        .chunks_exact(16)
        .map(|c| Complex::new(T::lit(f64_at(c, 0)), T::lit(f64_at(c, 8))))
        .collect();
    match tag {
        TAG_GRID => Ok(Payload::Grid(GridFunction::new(GridSpec::new(d, T::lit(l), n)?, values)?)),
        _ => Ok(Payload::Operator(OperatorMatrix::from_rows(n, values)?)),
    }
}

/// Rows `z0, …, z{2d−1}, re, im` in flat index order.
pub fn write_grid_csv<W: Write, T: Real>(w: W, f: &GridFunction<T>) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::InvalidInput(e.to_string());
    let spec = f.spec();
    let mut header: Vec<String> = (0..spec.axes()).map(|a| format!("z{a}")).collect();
    header.push("re".into());
    header.push("im".into());
    wr.write_record(&header).map_err(err)?;
    let mut z = vec![T::zero(); spec.axes()];
    for (i, v) in f.values().iter().enumerate() {
        spec.point(i, &mut z);
        let mut rec: Vec<String> = z.iter().map(|x| x.to_string()).collect();
        rec.push(v.re.to_string());
        rec.push(v.im.to_string());
        wr.write_record(&rec).map_err(err)?;
    }
    wr.flush().map_err(io_err)
}

/// Inverse of [`write_grid_csv`]; `d`, `n` and `L` are recovered from the shape
/// and the first row.
pub fn read_grid_csv<R: Read, T: Real>(r: R) -> Result<GridFunction<T>> {
    let mut rd = csv::Reader::from_reader(r);
    let err = |e: csv::Error| Error::InvalidInput(e.to_string());
    let cols = rd.headers().map_err(err)?.len();
    if cols < 4 || cols % 2 != 0 {
        return Err(Error::InvalidInput("expected columns z0..z{2d-1},re,im".into()));
    }
    let axes = cols - 2;
    let mut first = None;
    let mut values = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(err)?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::InvalidInput(format!("{s:?}: {e}")));
        if first.is_none() {
            first = Some(parse(&rec[0])?);
        }
        values.push(Complex::new(T::lit(parse(&rec[axes])?), T::lit(parse(&rec[axes + 1])?)));
    }
    let n = (values.len() as f64).powf(1.0 / axes as f64).round() as usize;
    let extent = -first.ok_or_else(|| Error::InvalidInput("empty grid".into()))?;
    let spec = GridSpec::new(axes / 2, T::lit(extent), n)?;
    GridFunction::new(spec, values)
}

use std::fs;
use std::path::Path;

use orlicz_qha::phase_space::io::{read_binary, read_grid_csv, Payload};
use orlicz_qha::young_fn::YoungFunction;
use orlicz_qha::{Error, GridFunctionF64, OperatorMatrixF64, StepFunctionF64};
use serde_json::Value;

/// Error with the process exit code it maps to: 1 for mathematical
/// infeasibility, 2 for malformed input.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::GridMismatch(_) => Self::input(e.to_string()),
            _ => Self::infeasible(e.to_string()),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A Young function given inline as JSON or as a path to a JSON file.
pub fn young(arg: &str) -> Result<YoungFunction<f64>, Failure> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read_text(Path::new(arg))? };
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::input(format!("Young function {arg:?}: {e}")))?;
    YoungFunction::from_json(&value).map_err(|e| Failure::input(e.to_string()))
}

pub fn youngs(args: &[String]) -> Result<Vec<YoungFunction<f64>>, Failure> {
    args.iter().map(|a| young(a)).collect()
}

/// Any of the three norm inputs.
pub enum Data {
    Step(StepFunctionF64),
    Grid(GridFunctionF64),
    Operator(OperatorMatrixF64),
}

/// Binary files are recognised by their magic; CSV by the header row
/// (`t_break,value` for step functions, `z0,…` for grids).
pub fn data(path: &Path) -> Result<Data, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let bad = |e: Error| Failure::input(format!("{}: {e}", path.display()));
    if bytes.starts_with(b"OQHA") {
        return Ok(match read_binary(bytes.as_slice()).map_err(bad)? {
            Payload::Grid(f) => Data::Grid(f),
            Payload::Operator(a) => Data::Operator(a),
        });
    }
    let header = bytes.split(|b| *b == b'\n').next().unwrap_or_default();
    let header = String::from_utf8_lossy(header);
    match header.split(',').next().map(str::trim) {
        Some("t_break") => Ok(Data::Step(StepFunctionF64::read_csv(bytes.as_slice()).map_err(bad)?)),
        Some("z0") => Ok(Data::Grid(read_grid_csv(bytes.as_slice()).map_err(bad)?)),
        _ => Err(Failure::input(format!("{}: unrecognised input format", path.display()))),
    }
}

pub fn print_json(value: &Value) {
    println!("{}", serde_json::to_string(value).expect("values serialize"));
}

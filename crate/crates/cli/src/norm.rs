use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Subcommand};
use orlicz_qha::rearrangement::{lp_norm, orlicz_norm, singular_values, weak_orlicz_norm};
use orlicz_qha::weyl_qha::{schatten_norm, schatten_orlicz_norm};
use orlicz_qha::StepFunctionF64;
use serde_json::json;

use crate::input::{self, print_json, Data, Failure};

#[derive(Debug, Args)]
pub struct Source {
    /// Step-function CSV, grid CSV, or grid/operator binary.
    input: PathBuf,
    /// Measure of one grid cell is `h^{2d}` times this factor.
    #[arg(long, default_value_t = 1.0)]
    measure_scale: f64,
}

impl Source {
    /// Decreasing rearrangement of the input; singular values for operators.
    fn rearranged(&self) -> Result<StepFunctionF64, Failure> {
        Ok(match input::data(&self.input)? {
            Data::Step(mu) => mu,
            Data::Grid(f) => f.rearrangement(self.measure_scale),
            Data::Operator(a) => singular_values(&a),
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum NormCommand {
    /// Luxemburg norm.
    Orlicz {
        /// Young function, inline JSON or file path.
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        source: Source,
    },
    /// Weak Orlicz norm.
    Weak {
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        source: Source,
    },
    /// Lebesgue norm.
    Lp {
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        source: Source,
    },
    /// Schatten norm of an operator, for an exponent or a Young function.
    Schatten {
        #[arg(long, conflicts_with = "p", required_unless_present = "p")]
        phi: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        /// Operator binary.
        input: PathBuf,
    },
}

pub fn run(cmd: NormCommand) -> Result<ExitCode, Failure> {
    let norm = match cmd {
        NormCommand::Orlicz { phi, source } => orlicz_norm(&source.rearranged()?, &input::young(&phi)?)?,
        NormCommand::Weak { phi, source } => weak_orlicz_norm(&source.rearranged()?, &input::young(&phi)?)?,
        NormCommand::Lp { p, source } => {
            if p.is_nan() || p < 1.0 {
                return Err(Failure::input(format!("p = {p} must be at least 1")));
            }
            lp_norm(&source.rearranged()?, p)
        }
        NormCommand::Schatten { phi, p, input } => {
            let Data::Operator(a) = input::data(&input)? else {
                return Err(Failure::input(format!("{}: not an operator file", input.display())));
            };
            match (phi, p) {
                (Some(phi), _) => schatten_orlicz_norm(&a, &input::young(&phi)?)?,
                (None, Some(p)) => schatten_norm(&a, p),
                (None, None) => unreachable!("clap requires one of --phi and --p"),
            }
        }
    };
    print_json(&json!({ "norm": norm }));
    Ok(ExitCode::SUCCESS)
}

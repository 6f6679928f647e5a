use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Subcommand;
use orlicz_qha::young_fn::{
    convexify, exponents, interpolate, theta_solver, verify_young_relation, young_relation_target, SimplexPoint,
};
use serde_json::json;

use crate::input::{self, print_json, Failure};

/// Residual below which a Young relation counts as satisfied.
const RELATION_TOL: f64 = 1e-8;

#[derive(Debug, Subcommand)]
pub enum YoungCommand {
    /// Characteristic exponents `q` and `p`.
    Exponents {
        /// Young function as inline JSON or a path to a JSON file.
        phi: String,
    },
    /// Interpolate several Young functions with weights `theta`.
    Interpolate {
        /// Comma-separated simplex weights, one per function.
        #[arg(long, value_delimiter = ',', required = true)]
        theta: Vec<f64>,
        /// Young functions, inline JSON or file paths.
        #[arg(required = true)]
        phis: Vec<String>,
    },
    /// Interpolation weights solving the Young relation for `psis`.
    SolveTheta {
        #[arg(required = true)]
        psis: Vec<String>,
    },
    /// Target `psi0` of the Young relation, or the residual of a given one.
    CheckRelation {
        /// Candidate target; derived from `psis` when omitted.
        #[arg(long)]
        psi0: Option<String>,
        #[arg(required = true)]
        psis: Vec<String>,
    },
    /// Convex equivalent and its equivalence constant `L`.
    Convexify {
        phi: String,
        /// Write the sampled convex function as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: YoungCommand) -> Result<ExitCode, Failure> {
    match cmd {
        YoungCommand::Exponents { phi } => {
            let (q, p) = exponents(&input::young(&phi)?)?;
            print_json(&json!({ "q": q, "p": p }));
        }
        YoungCommand::Interpolate { theta, phis } => {
            let point = SimplexPoint::new(theta).map_err(|e| Failure::input(e.to_string()))?;
            let phi = interpolate(&input::youngs(&phis)?, &point)?;
            print_json(&json!({ "phi": phi.to_json() }));
        }
        YoungCommand::SolveTheta { psis } => {
            let theta = theta_solver(&input::youngs(&psis)?)?;
            print_json(&json!({ "theta": theta.theta() }));
        }
        YoungCommand::CheckRelation { psi0, psis } => {
            let psis = input::youngs(&psis)?;
            let target = match psi0 {
                Some(arg) => input::young(&arg)?,
                None => young_relation_target(&psis)?,
            };
            let residual = verify_young_relation(&target, &psis);
            let holds = residual <= RELATION_TOL;
            print_json(&json!({ "psi0": target.to_json(), "residual": residual, "holds": holds }));
            if !holds {
                return Ok(ExitCode::from(1));
            }
        }
        YoungCommand::Convexify { phi, out } => {
            let (psi, l) = convexify(&input::young(&phi)?)?;
            if let Some(path) = out {
                let text = serde_json::to_string(&psi.to_json()).expect("values serialize");
                fs::write(&path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            }
            print_json(&json!({ "l": l }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

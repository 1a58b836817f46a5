use locsolve::error::{Error, Result};
use locsolve::heat::{assemble_picard_system, initial_field, run_simulation, HeatConfig};
use locsolve::market::{read_matrix_market, read_vector};
use locsolve::solve::{local_character_solve, LinearProblem, MethodSelector};

use crate::record::{fill_speedups, render_csv, BenchRecord};
use crate::{SweepArgs, SweepParameter};

use super::write_output;

pub fn run(args: SweepArgs) -> Result<bool> {
    let problem = load_problem(&args)?;
    let mut config = args.opts.solver_config();
    config.tolerance = problem.tolerance;

    let mut records = Vec::new();
    let mut all_converged = true;
    for raw in &args.values {
        let (selector, tag) = match args.parameter {
            SweepParameter::Alpha => {
                let alpha: f64 = raw.parse().map_err(|_| {
                    Error::InvalidParameter(format!("cannot parse alpha value '{raw}'"))
                })?;
                (
                    MethodSelector::gradient(alpha).with_smoothing_sweeps(args.opts.sweeps),
                    format!("alpha={raw}"),
                )
            }
            SweepParameter::Emax => {
                let emax: usize = raw.parse().map_err(|_| {
                    Error::InvalidParameter(format!("cannot parse emax value '{raw}'"))
                })?;
                (
                    MethodSelector::residual(emax).with_smoothing_sweeps(args.opts.sweeps),
                    format!("emax={raw}"),
                )
            }
        };
        let report = local_character_solve(
            &problem.matrix,
            &problem.rhs,
            &problem.initial_iterate,
            &selector,
            &config,
        )?;
        all_converged &= report.converged();
        let id = format!("{}[{}]", args.problem_id, tag);
        records.push(BenchRecord::from_report(id, &report));
    }

    fill_speedups(&mut records);
    write_output(args.out.as_deref(), &render_csv(&records))?;
    Ok(all_converged)
}

/// Problem source: explicit files, or the first Picard system taken after
/// advancing the heat model `heat_warmup` baseline steps.
fn load_problem(args: &SweepArgs) -> Result<LinearProblem> {
    if let Some(matrix_path) = &args.matrix {
        let matrix = read_matrix_market(matrix_path)?;
        let rhs = match &args.rhs {
            Some(path) => read_vector(path)?,
            None => {
                return Err(Error::InvalidParameter(
                    "--rhs is required with --matrix".into(),
                ))
            }
        };
        let x0 = match &args.x0 {
            Some(path) => read_vector(path)?,
            None => vec![0.0; matrix.nrows()],
        };
        return Ok(LinearProblem {
            matrix,
            rhs,
            initial_iterate: x0,
            tolerance: args.opts.eps,
        });
    }

    let nx = args.heat_nx.ok_or_else(|| {
        Error::InvalidParameter("either --matrix or --heat-nx must be given".into())
    })?;
    let config = HeatConfig {
        nx,
        ny: args.heat_ny,
        dt: args.heat_dt,
        n_steps: args.heat_warmup,
        linear_eps: args.opts.eps,
        selector: MethodSelector::baseline(),
        ..HeatConfig::default()
    };
    config.validate()?;
    let field = if args.heat_warmup == 0 {
        initial_field(&config)
    } else {
        run_simulation(&config)?.final_field
    };
    assemble_picard_system(&field, &field, &config)
}

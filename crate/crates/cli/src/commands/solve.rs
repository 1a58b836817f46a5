use locsolve::domain::build_residual_domain;
use locsolve::error::Result;
use locsolve::market::{read_matrix_market, read_vector};
use locsolve::solve::local_character_solve;

use crate::record::{fill_speedups, render_csv, BenchRecord};
use crate::{MethodArg, SolveArgs};

use super::{dedup_preserving, write_diagnostic, write_output};

pub fn run(args: SolveArgs) -> Result<bool> {
    let matrix = read_matrix_market(&args.matrix)?;
    let rhs = read_vector(&args.rhs)?;
    let x0 = match &args.x0 {
        Some(path) => read_vector(path)?,
        None => vec![0.0; matrix.nrows()],
    };

    let methods = match args.method {
        Some(single) => vec![single],
        None => dedup_preserving(&args.methods),
    };
    let config = args.opts.solver_config();

    let mut records = Vec::new();
    let mut all_converged = true;
    for method in methods {
        let selector = args.opts.selector(method);
        let report = local_character_solve(&matrix, &rhs, &x0, &selector, &config)?;
        all_converged &= report.converged();
        records.push(BenchRecord::from_report(&args.problem_id, &report));

        if args.trace && method == MethodArg::Residual {
            let (_, trace) =
                build_residual_domain(&matrix, &rhs, &x0, args.opts.eps, args.opts.emax)?;
            write_diagnostic(args.trace_out.as_deref(), &trace.render_table())?;
        }
    }

    fill_speedups(&mut records);
    write_output(args.out.as_deref(), &render_csv(&records))?;
    Ok(all_converged)
}

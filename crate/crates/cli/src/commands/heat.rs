use std::path::Path;

use locsolve::error::{Error, Result};
use locsolve::heat::{initial_field, run_simulation, HeatConfig, SimulationResult, StepRecord};
use locsolve::solve::MethodSelector;

use crate::record::{fill_speedups, render_csv, BenchRecord};
use crate::HeatArgs;

use super::{dedup_preserving, write_output};

pub fn run(args: HeatArgs) -> Result<bool> {
    let methods = dedup_preserving(&args.methods);
    let mut records = Vec::new();
    let mut all_converged = true;

    for method in methods {
        let selector = args.opts.selector(method);
        let config = heat_config(&args, selector.clone());
        config.validate()?;

        if args.steps == 0 {
            // Nothing to solve; optionally dump the initial field.
            if args.snapshot_every > 0 {
                let field = initial_field(&config);
                write_snapshot(&args.snapshot_dir, selector.label(), 0, &field.to_grid_text())?;
            }
            continue;
        }

        let result = match run_simulation(&config) {
            Ok(result) => result,
            Err(Error::PicardStalled { step, iterations, .. }) => {
                log::error!(
                    "{}: Picard iteration stalled at step {step} after {iterations} iterations",
                    selector.label()
                );
                all_converged = false;
                continue;
            }
            Err(other) => return Err(other),
        };

        all_converged &= collect_records(&args, selector.label(), &result, &mut records)?;
    }

    fill_speedups(&mut records);
    write_output(args.out.as_deref(), &render_csv(&records))?;
    Ok(all_converged)
}

fn heat_config(args: &HeatArgs, selector: MethodSelector) -> HeatConfig {
    HeatConfig {
        nx: args.nx,
        ny: args.ny,
        dt: args.dt,
        n_steps: args.steps,
        t_left: args.tl,
        t_right: args.tr,
        kappa_exponent: args.kappa_exponent,
        linear_eps: args.opts.eps,
        nonlinear_tol: args.nonlinear_tol,
        selector,
        ..HeatConfig::default()
    }
}

fn collect_records(
    args: &HeatArgs,
    method: &str,
    result: &SimulationResult,
    records: &mut Vec<BenchRecord>,
) -> Result<bool> {
    let mut all_converged = true;
    if args.snapshot_every > 0 {
        write_snapshot(&args.snapshot_dir, method, 0, &result.initial.to_grid_text())?;
    }
    for step in &result.steps {
        for (s, report) in step.reports.iter().enumerate() {
            all_converged &= report.converged();
            let id = format!("step{}:solve{}", step.step, s + 1);
            records.push(BenchRecord::from_report(id, report));
        }
        records.push(aggregate_record(step));
        if args.snapshot_every > 0 && step.step % args.snapshot_every == 0 {
            write_snapshot(&args.snapshot_dir, method, step.step, &step.field.to_grid_text())?;
        }
    }
    Ok(all_converged)
}

/// Per-step aggregate row: N and K accumulate over the step's solves so that
/// eta = K/N is exactly the mean eta of the step; times and iteration counts
/// are summed.
fn aggregate_record(step: &StepRecord) -> BenchRecord {
    let solves = step.reports.len().max(1);
    let n_total: usize = step.reports.iter().map(|r| r.n).sum();
    let k_total: usize = step.reports.iter().map(|r| r.subsystem_size).sum();
    let method = step
        .reports
        .first()
        .map(|r| r.method.label().to_string())
        .unwrap_or_else(|| "method0".to_string());
    BenchRecord {
        problem_id: format!("step{}", step.step),
        method,
        n: n_total,
        k: k_total,
        eta: if n_total > 0 {
            k_total as f64 / n_total as f64
        } else {
            0.0
        },
        cpu_total: step
            .reports
            .iter()
            .map(|r| r.timings.total.as_secs_f64())
            .sum(),
        cpu_domain: step
            .reports
            .iter()
            .map(|r| r.timings.domain_construction.as_secs_f64())
            .sum(),
        cpu_subsystem: step
            .reports
            .iter()
            .map(|r| r.timings.subsystem_solve.as_secs_f64())
            .sum(),
        cpu_global: step
            .reports
            .iter()
            .map(|r| r.timings.global_solve.as_secs_f64())
            .sum(),
        iter_sub: step.reports.iter().map(|r| r.subsystem_iterations()).sum(),
        iter_glb: step.reports.iter().map(|r| r.global_iterations()).sum(),
        converged_local: step.reports.len() == solves
            && step.reports.iter().all(|r| r.converged_after_local),
        speedup: None,
    }
}

fn write_snapshot(dir: &Path, method: &str, step: usize, content: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("field_{method}_step{step:04}.txt"));
    std::fs::write(path, content)?;
    Ok(())
}

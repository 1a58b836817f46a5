//! CSV records mirroring the reported solve metrics, one row per solve plus
//! aggregate rows for the heat benchmark.

use locsolve::solve::SolveReport;

pub const CSV_HEADER: &str = "problem_id,method,N,K,eta,cpu_total,cpu_domain,cpu_subsystem,cpu_global,iter_sub,iter_glb,converged_local,speedup";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub problem_id: String,
    /// method0 | method1 | method2
    pub method: String,
    pub n: usize,
    pub k: usize,
    pub eta: f64,
    pub cpu_total: f64,
    pub cpu_domain: f64,
    pub cpu_subsystem: f64,
    pub cpu_global: f64,
    pub iter_sub: usize,
    pub iter_glb: usize,
    pub converged_local: bool,
    /// Baseline cpu_total over this row's cpu_total; filled post-hoc when a
    /// method0 row with the same problem_id exists in the run.
    pub speedup: Option<f64>,
}

impl BenchRecord {
    pub fn from_report(problem_id: impl Into<String>, report: &SolveReport) -> Self {
        let mut problem_id = problem_id.into();
        if problem_id.contains(',') {
            problem_id = problem_id.replace(',', ";");
        }
        Self {
            problem_id,
            method: report.method.label().to_string(),
            n: report.n,
            k: report.subsystem_size,
            eta: report.eta,
            cpu_total: report.timings.total.as_secs_f64(),
            cpu_domain: report.timings.domain_construction.as_secs_f64(),
            cpu_subsystem: report.timings.subsystem_solve.as_secs_f64(),
            cpu_global: report.timings.global_solve.as_secs_f64(),
            iter_sub: report.subsystem_iterations(),
            iter_glb: report.global_iterations(),
            converged_local: report.converged_after_local,
            speedup: None,
        }
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.problem_id,
            self.method,
            self.n,
            self.k,
            self.eta,
            self.cpu_total,
            self.cpu_domain,
            self.cpu_subsystem,
            self.cpu_global,
            self.iter_sub,
            self.iter_glb,
            self.converged_local,
            self.speedup.map(|s| s.to_string()).unwrap_or_default()
        )
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn parse_csv_row(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(format!("expected 13 fields, got {}", fields.len()));
        }
        let parse_f = |s: &str, name: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("cannot parse {name} '{s}'"))
        };
        let parse_u = |s: &str, name: &str| -> Result<usize, String> {
            s.parse().map_err(|_| format!("cannot parse {name} '{s}'"))
        };
        Ok(Self {
            problem_id: fields[0].to_string(),
            method: fields[1].to_string(),
            n: parse_u(fields[2], "N")?,
            k: parse_u(fields[3], "K")?,
            eta: parse_f(fields[4], "eta")?,
            cpu_total: parse_f(fields[5], "cpu_total")?,
            cpu_domain: parse_f(fields[6], "cpu_domain")?,
            cpu_subsystem: parse_f(fields[7], "cpu_subsystem")?,
            cpu_global: parse_f(fields[8], "cpu_global")?,
            iter_sub: parse_u(fields[9], "iter_sub")?,
            iter_glb: parse_u(fields[10], "iter_glb")?,
            converged_local: fields[11]
                .parse()
                .map_err(|_| format!("cannot parse converged_local '{}'", fields[11]))?,
            speedup: if fields[12].is_empty() {
                None
            } else {
                Some(parse_f(fields[12], "speedup")?)
            },
        })
    }
}

/// Fill the speedup column from the method0 row sharing each problem_id.
pub fn fill_speedups(records: &mut [BenchRecord]) {
    let baselines: Vec<(String, f64)> = records
        .iter()
        .filter(|r| r.method == "method0")
        .map(|r| (r.problem_id.clone(), r.cpu_total))
        .collect();
    for record in records.iter_mut() {
        if let Some((_, base)) = baselines
            .iter()
            .find(|(id, _)| *id == record.problem_id)
        {
            if *base > 0.0 && record.cpu_total > 0.0 {
                record.speedup = Some(base / record.cpu_total);
            }
        }
    }
}

/// Render header plus one row per record.
pub fn render_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&record.to_csv_row());
        out.push('\n');
    }
    out
}

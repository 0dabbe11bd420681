use groupwalk_core::sol::{
    default_n_range, lemma3_check, lower_bound, lower_bound_csv, lower_bound_curve, lower_bound_slope,
    monte_carlo_return, ProjectedKernel,
};
use serde_json::json;

use crate::args::{Format, SolCommand};
use crate::output::{write_file, CliError, Ctx, Status};

pub fn run(cmd: SolCommand, command_line: &str) -> Result<Status, CliError> {
    let kernel = ProjectedKernel::default();
    match cmd {
        SolCommand::LowerBound { q, tmin, tmax, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Csv);
            if tmin == 0 || tmin > tmax {
                return Err(CliError::Usage("need 0 < tmin <= tmax".into()));
            }
            let ts: Vec<u64> = std::iter::successors(Some(tmin), |&t| t.checked_mul(2)).take_while(|&t| t <= tmax).collect();
            let points = lower_bound_curve(&kernel, q, &ts)?;
            let header = ctx.header(json!({ "q": q, "kernel": [0.4, 0.2, 0.4], "tmin": tmin, "tmax": tmax }));
            let slope = if points.len() >= 2 { Some(lower_bound_slope(&points)?) } else { None };
            let summary = json!({
                "slope": slope.map(|f| f.slope),
                "intercept": slope.map(|f| f.intercept),
                "rms": slope.map(|f| f.rms),
                "points": points.len(),
                "all_interior": points.iter().all(|p| p.interior),
            });
            match ctx.format {
                Format::Csv => {
                    let mut doc = header.clone();
                    doc["summary"] = summary;
                    match &common.out {
                        Some(path) => {
                            ctx.write(&lower_bound_csv(&points))?;
                            let sidecar = path.with_extension("json");
                            write_file(&sidecar, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
                        }
                        None => ctx.write(&format!("{}# {doc}\n", lower_bound_csv(&points)))?,
                    }
                }
                Format::Json => ctx.emit_report(header, json!({ "summary": summary, "points": points }))?,
            }
            Ok(Status::Ok)
        }
        SolCommand::Mc { q, t, n, samples, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let (n, dp) = match n {
                Some(n) => (n, None),
                None => {
                    let p = lower_bound(&kernel, q, t, default_n_range(t))?;
                    (p.n_star, Some(p))
                }
            };
            let report = monte_carlo_return(q, t, n, samples, common.seed)?;
            let confined = groupwalk_core::sol::confined_dp(&kernel, n, 2 * t);
            let header = ctx.header(json!({}));
            let mut body = serde_json::to_value(&report).unwrap();
            body["dp_confined_prob"] = json!(confined);
            body["dp_bound"] = json!(dp.map(|p| p.bound));
            body["discarded_fraction"] = json!(report.discarded as f64 / samples as f64);
            ctx.emit_report(header, body)?;
            if report.estimate + 3.0 * report.std_error < confined {
                Ok(Status::Violated("Monte Carlo estimate below the confined probability".into()))
            } else {
                Ok(Status::Ok)
            }
        }
        SolCommand::Lemma3 { q, n, length, trials, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let report = lemma3_check(q, n, length, trials, common.seed)?;
            ctx.emit_report(ctx.header(json!({})), serde_json::to_value(&report).unwrap())?;
            if report.holds() {
                Ok(Status::Ok)
            } else {
                Ok(Status::Violated(format!("{} confined prefixes outside the box", report.violations)))
            }
        }
    }
}

use groupwalk_core::trace::{lemma2_sweep, prop2_sweep, thm1_sweep};
use serde_json::json;

use crate::args::{Format, TraceCommand};
use crate::output::{CliError, Ctx, Status};

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number `{x}`"))))
        .collect()
}

fn verdict(violations: usize, what: &str) -> Status {
    if violations == 0 {
        Status::Ok
    } else {
        Status::Violated(format!("{violations} {what} violations"))
    }
}

pub fn run(cmd: TraceCommand, command_line: &str) -> Result<Status, CliError> {
    match cmd {
        TraceCommand::Prop2 { pairs, specs, dim_min, dim_max, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let sweep = prop2_sweep(pairs, specs, (dim_min, dim_max), common.seed)?;
            let header = ctx.header(json!({ "check": "prop2", "dims": [dim_min, dim_max] }));
            match ctx.format {
                Format::Csv => {
                    let mut out = format!("# {header}\nindex,seed,dim,worst_margin,violations,dyadic_failures\n");
                    for i in &sweep.instances {
                        out.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            i.index, i.seed, i.dim, i.worst_margin, i.violations, i.dyadic_failures
                        ));
                    }
                    ctx.write(&out)?;
                }
                Format::Json => ctx.emit_report(header, serde_json::to_value(&sweep).unwrap())?,
            }
            Ok(verdict(sweep.violations + sweep.dyadic_failures, "monotonicity"))
        }
        TraceCommand::Lemma2 { grid, cs, ts, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let reports = lemma2_sweep(&parse_list(&cs)?, &parse_list(&ts)?, grid)?;
            let violations: usize = reports.iter().map(|r| r.violations.iter().sum::<usize>()).sum();
            let header = ctx.header(json!({ "check": "lemma2", "grid": grid }));
            match ctx.format {
                Format::Csv => {
                    let mut out = format!("# {header}\nc,t,worst_0,worst_1,worst_2,worst_3,violations\n");
                    for r in &reports {
                        out.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            r.c,
                            r.t,
                            r.worst[0],
                            r.worst[1],
                            r.worst[2],
                            r.worst[3],
                            r.violations.iter().sum::<usize>()
                        ));
                    }
                    ctx.write(&out)?;
                }
                Format::Json => {
                    ctx.emit_report(header, json!({ "violations": violations, "reports": reports }))?
                }
            }
            Ok(verdict(violations, "scalar inequality"))
        }
        TraceCommand::Thm1 { instances, dim_min, dim_max, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let sweep = thm1_sweep(instances, (dim_min, dim_max), common.seed)?;
            let header = ctx.header(json!({ "check": "thm1", "dims": [dim_min, dim_max] }));
            match ctx.format {
                Format::Csv => {
                    let mut out = format!("# {header}\nindex,seed,dim,big_c,t,margin_1,margin_2,margin_3,holds\n");
                    for i in &sweep.records {
                        let r = &i.report;
                        out.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{}\n",
                            i.index, i.seed, r.dim, r.big_c, r.t, r.margins[0], r.margins[1], r.margins[2], r.holds
                        ));
                    }
                    ctx.write(&out)?;
                }
                Format::Json => ctx.emit_report(header, serde_json::to_value(&sweep).unwrap())?,
            }
            Ok(verdict(sweep.violations, "trace chain"))
        }
    }
}

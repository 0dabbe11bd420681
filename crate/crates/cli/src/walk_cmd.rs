use groupwalk_core::group::{GeneratingSet, Group, GroupElement};
use groupwalk_core::walk::{
    comparison_constant, decay_fit, dirichlet_form, free_radial_series, random_test_function, return_series,
    series_csv, spectral_diagnostics, stability_compare, Measure, Mode, ReturnSeries, StabilityCaps, WalkError,
    Weight,
};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{Format, WalkArgs, WalkCommand};
use crate::output::{CliError, Ctx, Status};

/// Relative tolerance for the float Dirichlet identity.
const FLOAT_IDENTITY_TOLERANCE: f64 = 1e-9;

fn parse_group(s: &str) -> Result<Group, CliError> {
    s.parse::<Group>().map_err(|e| CliError::Usage(e.to_string()))
}

fn series<W: Weight>(group: Group, measure: &str, n: usize, budget: usize, radial: bool) -> Result<ReturnSeries<W>, CliError> {
    if radial {
        return match group {
            Group::Free { k } if measure == "srw" => Ok(free_radial_series::<W>(k, n)?),
            _ => Err(CliError::Usage("--radial needs a free group with the srw measure".into())),
        };
    }
    let mu = Measure::<W>::from_spec(group, measure)?;
    Ok(return_series(&mu, n, budget)?)
}

pub fn run(cmd: WalkCommand, command_line: &str) -> Result<Status, CliError> {
    match cmd {
        WalkCommand::Return { walk, n, radial, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Csv);
            match walk.mode {
                Mode::Exact => walk_return::<BigRational>(&ctx, &walk, n, radial),
                Mode::Float => walk_return::<f64>(&ctx, &walk, n, radial),
            }
        }
        WalkCommand::Dirichlet { walk, trials, radius, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Csv);
            match walk.mode {
                Mode::Exact => walk_dirichlet::<BigRational>(&ctx, &walk, trials, radius),
                Mode::Float => walk_dirichlet::<f64>(&ctx, &walk, trials, radius),
            }
        }
        WalkCommand::Compare { walk, measure2, u, trials, radius, radius_cap, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let args = CompareArgs { measure2: &measure2, u: u.as_deref(), trials, radius, radius_cap };
            match walk.mode {
                Mode::Exact => walk_compare::<BigRational>(&ctx, &walk, &args),
                Mode::Float => walk_compare::<f64>(&ctx, &walk, &args),
            }
        }
        WalkCommand::Stability { walk, measure2, group2, n, b_max, a_max, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let g1 = parse_group(&walk.group)?;
            let g2 = match &group2 {
                Some(g) => parse_group(g)?,
                None => g1,
            };
            let logs = |g: Group, m: &str| -> Result<Vec<f64>, CliError> {
                let radial = matches!(g, Group::Free { .. }) && m == "srw";
                Ok(match walk.mode {
                    Mode::Exact => series::<BigRational>(g, m, n, walk.budget, radial)?.log_values(),
                    Mode::Float => series::<f64>(g, m, n, walk.budget, radial)?.log_values(),
                })
            };
            let (l1, l2) = (logs(g1, &walk.measure)?, logs(g2, &measure2)?);
            let caps = StabilityCaps { b_max, a_max, ..StabilityCaps::default() };
            let report = stability_compare(&l1, &l2, caps);
            let header = ctx.header(json!({
                "mode": walk.mode.to_string(),
                "group": g1.to_string(),
                "measure": walk.measure,
                "group2": g2.to_string(),
                "measure2": measure2,
                "n": n,
            }));
            let mut body = serde_json::to_value(&report).unwrap();
            body["equivalent"] = json!(report.equivalent());
            ctx.emit_report(header, body)?;
            Ok(Status::Ok)
        }
        WalkCommand::Fit { walk, n, radial, lo, hi, common } => {
            let ctx = Ctx::new(command_line, &common, Format::Json);
            let group = parse_group(&walk.group)?;
            let logs = match walk.mode {
                Mode::Exact => series::<BigRational>(group, &walk.measure, n, walk.budget, radial)?.log_values(),
                Mode::Float => series::<f64>(group, &walk.measure, n, walk.budget, radial)?.log_values(),
            };
            let lo = lo.unwrap_or((n / 2).max(1));
            let hi = hi.unwrap_or(n);
            let fit = decay_fit(&logs, lo, hi)?;
            let header = ctx.header(json!({
                "mode": walk.mode.to_string(),
                "group": group.to_string(),
                "measure": walk.measure,
                "n": n,
            }));
            ctx.emit_report(header, serde_json::to_value(&fit).unwrap())?;
            Ok(Status::Ok)
        }
    }
}

fn walk_return<W: Weight>(ctx: &Ctx, walk: &WalkArgs, n: usize, radial: bool) -> Result<Status, CliError> {
    let group = parse_group(&walk.group)?;
    let s = series::<W>(group, &walk.measure, n, walk.budget, radial)?;
    let (diagnostics, status) = match spectral_diagnostics(&s) {
        Ok(d) => (serde_json::to_value(&d).unwrap(), Status::Ok),
        Err(WalkError::SeriesTooShort { .. }) => (Value::Null, Status::Ok),
        Err(e) if e.is_invariant() => (Value::Null, Status::Violated(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let mut header = ctx.header(json!({
        "mode": W::MODE.to_string(),
        "group": group.to_string(),
        "measure": walk.measure,
        "fingerprint": s.fingerprint,
        "n": n,
    }));
    match ctx.format {
        Format::Csv => {
            if !diagnostics.is_null() {
                header["norm_sq_estimate"] = diagnostics["norm_sq_estimate"].clone();
                header["richardson_estimate"] = diagnostics["richardson_estimate"].clone();
            }
            ctx.write(&series_csv(&s, &header))?;
        }
        Format::Json => {
            let body = json!({
                "values": s.values.iter().map(|v| v.render()).collect::<Vec<_>>(),
                "log_values": s.log_values(),
                "diagnostics": diagnostics,
            });
            ctx.emit_report(header, body)?;
        }
    }
    Ok(status)
}

fn test_pool(group: Group, radius: usize) -> Vec<GroupElement> {
    GeneratingSet::standard(group).ball(radius).into_iter().map(|(g, _)| g).collect()
}

fn walk_dirichlet<W: Weight>(ctx: &Ctx, walk: &WalkArgs, trials: usize, radius: usize) -> Result<Status, CliError> {
    let group = parse_group(&walk.group)?;
    let mu = Measure::<W>::from_spec(group, &walk.measure)?;
    let pool = test_pool(group, radius);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.common.seed);
    let mut rows = Vec::with_capacity(trials);
    let mut mismatches = 0;
    for i in 0..trials {
        let f = random_test_function::<W, _>(&pool, &mut rng);
        let v = dirichlet_form(&f, &mu)?;
        let agree = match W::MODE {
            Mode::Exact => v.quadratic == v.double_sum,
            Mode::Float => {
                let scale = v.quadratic.to_f64().abs().max(1.0);
                v.difference.to_f64().abs() <= FLOAT_IDENTITY_TOLERANCE * scale
            }
        };
        mismatches += !agree as usize;
        rows.push((i, f.len(), v));
    }
    let header = ctx.header(json!({
        "mode": W::MODE.to_string(),
        "group": group.to_string(),
        "measure": walk.measure,
        "fingerprint": mu.fingerprint(),
        "trials": trials,
        "mismatches": mismatches,
    }));
    match ctx.format {
        Format::Csv => {
            let mut out = format!("# {header}\ni,support,quadratic,double_sum,difference\n");
            for (i, support, v) in &rows {
                out.push_str(&format!(
                    "{i},{support},{},{},{}\n",
                    v.quadratic.render(),
                    v.double_sum.render(),
                    v.difference.render()
                ));
            }
            ctx.write(&out)?;
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(i, support, v)| {
                    json!({
                        "i": i,
                        "support": support,
                        "quadratic": v.quadratic.render(),
                        "double_sum": v.double_sum.render(),
                        "difference": v.difference.render(),
                    })
                })
                .collect();
            ctx.emit_report(header, json!({ "rows": rows }))?;
        }
    }
    if mismatches > 0 {
        Ok(Status::Violated(format!("{mismatches} Dirichlet form mismatches")))
    } else {
        Ok(Status::Ok)
    }
}

struct CompareArgs<'a> {
    measure2: &'a str,
    u: Option<&'a str>,
    trials: usize,
    radius: usize,
    radius_cap: usize,
}

fn walk_compare<W: Weight>(ctx: &Ctx, walk: &WalkArgs, args: &CompareArgs) -> Result<Status, CliError> {
    let group = parse_group(&walk.group)?;
    let mu1 = Measure::<W>::from_spec(group, &walk.measure)?;
    let mu2 = Measure::<W>::from_spec(group, args.measure2)?;
    let u = match args.u {
        Some(list) => {
            let elems = list.split(';').map(|s| group.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
            GeneratingSet::new(group, elems)?
        }
        None => GeneratingSet::standard(group).with_identity(),
    };
    let pool = test_pool(group, args.radius);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.common.seed);
    let tests: Vec<_> = (0..args.trials).map(|_| random_test_function::<W, _>(&pool, &mut rng)).collect();
    let (_, report) = comparison_constant(&mu1, &mu2, &u, args.radius_cap, &tests)?;
    let header = ctx.header(json!({
        "mode": W::MODE.to_string(),
        "group": group.to_string(),
        "measure": walk.measure,
        "measure2": args.measure2,
        "u": u.elements().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    }));
    let violations = report.violations;
    ctx.emit_report(header, serde_json::to_value(&report).unwrap())?;
    if violations > 0 {
        Ok(Status::Violated(format!("{violations} comparison violations")))
    } else {
        Ok(Status::Ok)
    }
}

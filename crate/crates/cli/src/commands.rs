//! Subcommand bodies. Each returns the `result` section of the report and
//! an exit code with an optional diagnostic.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use lacunary::criterion::{
    decide_independence_with, relation_residual_ball, verify_relation, DecideOptions, Relation, SeriesSpec, Status,
};
use lacunary::equiv::{
    canonical_first, canonical_form, check_condition_i_all_subsets, condition_i_analysis, decide_equiv,
    partition_classes, verify_certificate,
};
use lacunary::lattice::{falsify_over_field_with, required_precision};
use lacunary::numfield::{classify_base_with_cap, parse_elem, BaseKind, NumberField};
use lacunary::polyq::{poly_to_strings, validate_order_poly};
use lacunary::serieval::{eval_series, eval_theta, eval_theta_derivative, Theta};
use lacunary::RatPoly;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::problem::{ProblemFile, TaskJson};
use crate::report::{ErrorJson, Metadata, Params, Report, Tool};
use crate::{CliError, Common};

/// Exit code and the message to print on stderr, if any.
pub type Outcome = (u8, Option<String>);

/// Runs `name` on the file named in `args` and renders the report.
pub fn run(name: &str, args: &Common) -> (String, Outcome) {
    let start = Instant::now();
    let report = if name == "verify" {
        verify(args)
    } else {
        match ProblemFile::load(&args.input) {
            Ok(problem) => execute(name, args, problem),
            Err(e) => failed(name, None, None, e),
        }
    };
    let (mut report, outcome) = report;
    report.metadata = metadata(start);
    (serde_json::to_string_pretty(&report).expect("report serializes"), outcome)
}

fn metadata(start: Instant) -> Metadata {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    Metadata { unix_time_ms: now, elapsed_ms: start.elapsed().as_millis() }
}

fn failed(name: &str, params: Option<Params>, problem: Option<ProblemFile>, e: CliError) -> (Report, Outcome) {
    let report = Report {
        tool: Tool::current(),
        command: name.into(),
        parameters: params,
        problem,
        result: None,
        error: Some(ErrorJson::from(&e)),
        metadata: Metadata { unix_time_ms: 0, elapsed_ms: 0 },
    };
    (report, (e.code, Some(e.message)))
}

pub fn execute(name: &str, args: &Common, problem: ProblemFile) -> (Report, Outcome) {
    let params = match Params::resolve(args, &problem) {
        Ok(p) => p,
        Err(e) => return failed(name, None, Some(problem), e),
    };
    execute_with(name, params, problem)
}

pub fn execute_with(name: &str, params: Params, problem: ProblemFile) -> (Report, Outcome) {
    let out = match name {
        "classify" => classify(&problem, &params),
        "equiv" => equiv(&problem).map(|v| (v, (0, None))),
        "condition" => condition(&problem, &params).map(|v| (v, (0, None))),
        "decide" => decide(&problem, &params),
        "eval" => eval(&problem, &params).map(|v| (v, (0, None))),
        "hunt" => hunt(&problem, &params),
        _ => Err(CliError::input(format!("unknown command {name}"))),
    };
    match out {
        Ok((result, outcome)) => {
            let report = Report {
                tool: Tool::current(),
                command: name.into(),
                parameters: Some(params),
                problem: Some(problem),
                result: Some(result),
                error: None,
                metadata: Metadata { unix_time_ms: 0, elapsed_ms: 0 },
            };
            (report, outcome)
        }
        Err(e) => failed(name, Some(params), Some(problem), e),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("certificate serializes")
}

fn classify(problem: &ProblemFile, params: &Params) -> Result<(Value, Outcome), CliError> {
    let field = problem.field()?;
    let base = classify_base_with_cap(&field, params.precision_cap)?;
    let outcome = match base.kind {
        BaseKind::Neither => (2, Some("base is neither Pisot nor Salem".to_string())),
        _ => (0, None),
    };
    Ok((json!({ "base": base }), outcome))
}

fn equiv(problem: &ProblemFile) -> Result<Value, CliError> {
    let polys = problem.order_polys()?;
    for (j, f) in polys.iter().enumerate() {
        validate_order_poly(f).map_err(|e| CliError::from(e).context(format!("polynomial {j}")))?;
    }
    let mut pairs = Vec::new();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let w = decide_equiv(&polys[i], &polys[j])?;
            pairs.push(json!({ "i": i, "j": j, "equivalent": w.is_some(), "witness": w }));
        }
    }
    let mut classes = Vec::new();
    for class in partition_classes(&polys)? {
        let mut members = class.clone();
        let fs: Vec<RatPoly> = members.iter().map(|&j| polys[j].clone()).collect();
        members.rotate_left(canonical_first(&fs));
        let ordered: Vec<RatPoly> = members.iter().map(|&j| polys[j].clone()).collect();
        let form = canonical_form(&ordered)?;
        classes.push(json!({ "members": members, "canonical": form, "verified": form.verify() }));
    }
    Ok(json!({ "pairs": pairs, "classes": classes }))
}

fn condition(problem: &ProblemFile, params: &Params) -> Result<Value, CliError> {
    let polys = problem.order_polys()?;
    let analysis = condition_i_analysis(&polys)?;
    let verified = match &analysis.certificate {
        Some(c) => Some(verify_certificate(&polys, c)?),
        None => None,
    };
    let mut out = json!({
        "certificate_found": analysis.certificate.is_some(),
        "verified": verified,
        "analysis": analysis,
    });
    if params.subsets {
        out["subsets"] = to_value(&check_condition_i_all_subsets(&polys)?);
    }
    Ok(out)
}

fn task_series(all: &[SeriesSpec], task: &TaskJson) -> Vec<SeriesSpec> {
    task.series.iter().map(|&j| all[j].clone()).collect()
}

fn task_header(index: usize, task: &TaskJson) -> Value {
    json!({ "index": index, "label": task.label, "series": task.series })
}

/// Per-task code: the worst failure wins.
fn merge_codes(codes: impl Iterator<Item = Outcome>) -> Outcome {
    codes.fold((0, None), |acc, c| if c.0 > acc.0 { c } else { acc })
}

fn decide(problem: &ProblemFile, params: &Params) -> Result<(Value, Outcome), CliError> {
    let field = problem.field()?;
    let base = classify_base_with_cap(&field, params.precision_cap)?;
    if base.kind == BaseKind::Neither {
        let e = CliError::hypothesis("base is neither Pisot nor Salem; the criteria do not apply".into());
        return Ok((json!({ "base": base, "tasks": [] }), (e.code, Some(e.message))));
    }
    let series = problem.series_specs(&field)?;
    let opts = DecideOptions { mode: params.mode, strict: params.strict };
    let tasks = problem.task_list();
    let results: Vec<(Value, Outcome)> = tasks
        .par_iter()
        .enumerate()
        .map(|(t, task)| {
            let mut out = task_header(t, task);
            let sub = task_series(&series, task);
            match decide_task(&sub, &field, opts, params) {
                Ok((verdict, numeric, outcome)) => {
                    out["verdict"] = verdict;
                    out["numeric"] = numeric;
                    (out, outcome)
                }
                Err(e) => {
                    out["error"] = to_value(&ErrorJson::from(&e));
                    (out, (e.code, Some(format!("task {t}: {}", e.message))))
                }
            }
        })
        .collect();
    let outcome = merge_codes(results.iter().map(|r| r.1.clone()));
    let tasks: Vec<Value> = results.into_iter().map(|r| r.0).collect();
    Ok((json!({ "base": base, "tasks": tasks }), outcome))
}

fn decide_task(
    sub: &[SeriesSpec],
    field: &NumberField,
    opts: DecideOptions,
    params: &Params,
) -> Result<(Value, Value, Outcome), CliError> {
    let verdict = decide_independence_with(sub, field, opts)?;
    let numeric = match (verdict.status, verdict.relation()) {
        (Status::Dependent, Some(rel)) => {
            let symbolic = verify_relation(sub, field, rel)?;
            let ball = relation_residual_ball(sub, field, rel, params.prec)?;
            let width_ok = ball.width_at_most_pow2(-(params.prec as i64) + 4);
            let ok = symbolic && ball.contains_zero() && width_ok;
            let outcome = if ok { (0, None) } else { (2, Some("dependent certificate failed re-verification".into())) };
            let numeric = json!({
                "kind": "residual",
                "symbolic_check": symbolic,
                "residual": ball,
                "contains_zero": ball.contains_zero(),
                "width_ok": width_ok,
            });
            return Ok((to_value(&verdict), numeric, outcome));
        }
        _ => {
            let height = params.height_int()?;
            let prec = params.prec.max(required_precision(sub.len() + 1, &height));
            let values = sub.iter().map(|s| eval_series(s, field, prec)).collect::<Result<Vec<_>, _>>()?;
            let found = falsify_over_field_with(&values, field, &height, prec, &params.delta_rat()?)?;
            let consistent = !found.integer.found;
            if !consistent {
                eprintln!("lacunary decide: warning: relation hunt found a candidate despite an independence verdict");
            }
            json!({ "kind": "hunt", "prec": prec, "consistent": consistent, "hunt": found })
        }
    };
    Ok((to_value(&verdict), numeric, (0, None)))
}

fn eval(problem: &ProblemFile, params: &Params) -> Result<Value, CliError> {
    let field = problem.field()?;
    let series = problem.series_specs(&field)?;
    let prec = params.prec;
    let values: Vec<Value> = series
        .par_iter()
        .enumerate()
        .map(|(j, s)| Ok(json!({ "index": j, "value": eval_series(s, &field, prec)? })))
        .collect::<Result<_, CliError>>()?;
    let theta: Vec<Value> = problem
        .theta
        .par_iter()
        .map(|t| {
            let v = match t.derivative {
                0 => eval_theta(t.function, &field, t.i, prec)?,
                k if t.i == 1 => eval_theta_derivative(t.function, k, &field, prec)?,
                _ => return Err(CliError::input("theta derivatives are only supported at i = 1".into())),
            };
            let note = (t.function == Theta::Two).then_some("normalized: q^(i/4) theta2(q^-i)");
            Ok(json!({ "function": t.function, "i": t.i, "derivative": t.derivative, "note": note, "value": v }))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(json!({ "series": values, "theta": theta }))
}

fn hunt(problem: &ProblemFile, params: &Params) -> Result<(Value, Outcome), CliError> {
    let field = problem.field()?;
    let series = problem.series_specs(&field)?;
    let height = params.height_int()?;
    let delta = params.delta_rat()?;
    let tasks = problem.task_list();
    let results: Vec<(Value, Outcome)> = tasks
        .par_iter()
        .enumerate()
        .map(|(t, task)| {
            let mut out = task_header(t, task);
            let run = || -> Result<Value, CliError> {
                let values = task_series(&series, task)
                    .iter()
                    .map(|s| eval_series(s, &field, params.prec))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(to_value(&falsify_over_field_with(&values, &field, &height, params.prec, &delta)?))
            };
            match run() {
                Ok(v) => {
                    out["hunt"] = v;
                    (out, (0, None))
                }
                Err(e) => {
                    out["error"] = to_value(&ErrorJson::from(&e));
                    (out, (e.code, Some(format!("task {t}: {}", e.message))))
                }
            }
        })
        .collect();
    let outcome = merge_codes(results.iter().map(|r| r.1.clone()));
    Ok((json!({ "tasks": results.into_iter().map(|r| r.0).collect::<Vec<_>>() }), outcome))
}

/// Re-runs the recorded command with the recorded parameters, compares
/// the deterministic body, and independently re-checks every relation
/// certificate from its serialized form.
fn verify(args: &Common) -> (Report, Outcome) {
    let recorded = match load_report(args) {
        Ok(r) => r,
        Err(e) => return failed("verify", None, None, e),
    };
    let (Some(params), Some(problem)) = (recorded.parameters.clone(), recorded.problem.clone()) else {
        let e = CliError::input("report carries no parameters or problem to replay".into());
        return failed("verify", None, None, e);
    };
    let (again, _) = execute_with(&recorded.command, params.clone(), problem.clone());
    let reproducible = again.body() == recorded.body();
    let relations = match recheck_relations(&recorded, &problem, &params) {
        Ok(r) => r,
        Err(e) => return failed("verify", Some(params), Some(problem), e),
    };
    let all_ok = relations.iter().all(|r| r["symbolic_check"] == true && r["contains_zero"] == true);
    let outcome = if reproducible && all_ok {
        (0, None)
    } else if !reproducible {
        (2, Some("replay does not reproduce the recorded report".into()))
    } else {
        (2, Some("a recorded relation failed re-verification".into()))
    };
    let result = json!({
        "verified_command": recorded.command,
        "reproducible": reproducible,
        "relations": relations,
    });
    let report = Report {
        tool: Tool::current(),
        command: "verify".into(),
        parameters: Some(params),
        problem: Some(problem),
        result: Some(result),
        error: None,
        metadata: recorded.metadata,
    };
    (report, outcome)
}

fn load_report(args: &Common) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", args.input.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("not a report: {e}")))
}

fn recheck_relations(recorded: &Report, problem: &ProblemFile, params: &Params) -> Result<Vec<Value>, CliError> {
    if recorded.command != "decide" {
        return Ok(vec![]);
    }
    let Some(tasks) = recorded.result.as_ref().and_then(|r| r["tasks"].as_array()) else {
        return Ok(vec![]);
    };
    let field = problem.field()?;
    let series = problem.series_specs(&field)?;
    let bad = |m: &str| CliError::input(format!("malformed relation certificate: {m}"));
    let mut out = Vec::new();
    for task in tasks {
        let cert = &task["verdict"]["certificate"];
        if cert["kind"] != "relation" {
            continue;
        }
        let rel = &cert["relation"];
        let idx: Vec<usize> = serde_json::from_value(task["series"].clone()).map_err(|_| bad("series"))?;
        if idx.iter().any(|&j| j >= series.len()) {
            return Err(bad("series index out of range"));
        }
        let sub: Vec<SeriesSpec> = idx.iter().map(|&j| series[j].clone()).collect();
        let elem = |v: &Value| -> Result<_, CliError> {
            let cs: Vec<String> = serde_json::from_value(v.clone()).map_err(|_| bad("coordinates"))?;
            Ok(parse_elem(&field, &cs)?)
        };
        let coeffs = rel["coeffs"]
            .as_array()
            .ok_or_else(|| bad("coeffs"))?
            .iter()
            .map(elem)
            .collect::<Result<Vec<_>, _>>()?;
        let relation = Relation {
            class: serde_json::from_value(rel["class"].clone()).map_err(|_| bad("class"))?,
            g: serde_json::from_value(rel["g"].clone()).map_err(|_| bad("g"))?,
            members: serde_json::from_value(rel["members"].clone()).map_err(|_| bad("members"))?,
            coeffs,
            constant: elem(&rel["constant"])?,
        };
        let symbolic = verify_relation(&sub, &field, &relation)?;
        let ball = relation_residual_ball(&sub, &field, &relation, params.prec)?;
        out.push(json!({
            "task": task["index"],
            "symbolic_check": symbolic,
            "residual": ball,
            "contains_zero": ball.contains_zero(),
            "g": poly_to_strings(&relation.g),
        }));
    }
    Ok(out)
}

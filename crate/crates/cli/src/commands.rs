use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use zyglab::casestudies::*;
use zyglab::colombeau::*;
use zyglab::kernels::{
    make_mollifier, moment_defect, wavelet_from_derivative, wavelet_mu, write_profile_csv, KernelSpec,
};
use zyglab::signals::export_corpus;
use zyglab::transforms::{cwt, decay_exponent};
use zyglab::{Error, Result};

use crate::config::{Problem, Resolved};

/// Finite numbers as numbers, infinities as `"+inf"` / `"-inf"`.
fn ext(v: f64) -> Value {
    if v.is_infinite() {
        Value::from(if v > 0.0 { "+inf" } else { "-inf" })
    } else {
        json!(v)
    }
}

fn prediction_json(p: &Prediction) -> Value {
    match *p {
        Prediction::Value(v) => json!({ "value": ext(v) }),
        Prediction::Below(v) => json!({ "below": ext(v) }),
    }
}

/// `Below(v)` means every class `< v`, so only the lower side is checked.
fn matches(p: &Prediction, measured: f64, tol: f64) -> bool {
    match *p {
        Prediction::Value(v) if v.is_infinite() => measured == v,
        Prediction::Value(v) => (measured - v).abs() <= tol,
        Prediction::Below(v) => measured >= v - tol,
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Numerical(format!("serialisation: {e}")))
}

fn write_csv_file(path: &Path, f: impl FnOnce(fs::File) -> Result<()>) -> Result<()> {
    f(fs::File::create(path)?)
}

fn prepare(out: &Path, run: &Resolved) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join("config.json"), to_json(&run.config)?)?;
    Ok(())
}

fn class_of(net: &Net, run: &Resolved) -> Result<RegularityReport> {
    classify_net(net, run.config.orders, &run.sg)
}

pub fn analyze(run: &Resolved, out: &Path) -> Result<Value> {
    let src = run
        .config
        .signal
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("analyze needs a `signal` entry".into()))?;
    let net = run.net(src)?;
    let table = growth_profile(&net, run.config.orders, &run.sg)?;
    let report = classify_regularity(&table)?;

    prepare(out, run)?;
    let files = &run.config.outputs;
    write_csv_file(&out.join(&files.growth), |f| table.write_csv(f))?;
    let mut wavelet = Value::Null;
    let mut scalogram = Value::Null;
    if let Some(u) = run.sample(src)? {
        let s = cwt(&u, &run.wavelet, &run.sg)?;
        write_csv_file(&out.join(&files.scalogram), |f| s.write_csv(f))?;
        wavelet = json!(decay_exponent(
            &s.sup_curve(Some(&run.window))?,
            run.sg.default_window()
        )?);
        scalogram = json!(files.scalogram);
    }
    let result = json!({
        "config": run.config,
        "report": report,
        "nesting": nesting_holds(&table, &report),
        "wavelet_estimate": wavelet,
        "artifacts": { "growth": files.growth, "scalogram": scalogram },
    });
    fs::write(out.join(&files.report), to_json(&result)?)?;
    if !report.moderate {
        return Err(Error::Numerical(format!(
            "net is not moderate; report written to {}",
            out.join(&files.report).display()
        )));
    }
    Ok(result)
}

pub fn solve(run: &Resolved, out: &Path) -> Result<Value> {
    let problem = run
        .config
        .problem
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("solve needs a `problem` entry".into()))?;
    let orders = run.config.orders;
    let eps_min = run.sg.eps_min();
    let files = &run.config.outputs;
    let (kind, table, report, predicted, extra) = match problem {
        Problem::Ode { a, b } => {
            let a = run.net(a)?;
            let s = class_of(&a, run)?.s_hat;
            let b_net = formula_net(Formula::GeneralizedConst { c: *b }, run.grid, run.window)?;
            let t = class_of(&b_net, run)?.s_hat;
            let u = ode_solve(&a, *b)?;
            let table = growth_profile(&u, orders, &run.sg)?;
            let report = classify_regularity(&table)?;
            let residual = ode_residual(&a.eval(eps_min)?, &u.eval(eps_min)?, &run.window)?;
            let hypotheses = real_part_bounded(&a, &run.sg)?;
            let extra = json!({
                "coefficient_class": ext(s),
                "data_class": ext(t),
                "re_a_bounded": hypotheses,
                "residual_at_eps_min": residual,
            });
            (
                "ode",
                table,
                report,
                predicted_regularity_ode(s, t).ok().filter(|_| hypotheses),
                extra,
            )
        }
        Problem::Transport {
            a,
            b,
            c1,
            c2,
            t_values,
            t_max,
        } => {
            let a = run.net(a)?;
            let b = run.net(b)?;
            let s = class_of(&a, run)?.s_hat;
            let t = class_of(&b, run)?.s_hat;
            let ts = t_values.clone().unwrap_or_else(|| default_t_values(*t_max, 9));
            let u = transport_solve(&a, &b, &ts, *t_max, CoefficientBounds::new(*c1, *c2)?, &run.sg)?;
            let table = growth_profile_2d(&u, orders, &run.sg)?;
            let report = classify_regularity_2d(&u, orders, &run.sg)?;
            let t_last = *ts.last().expect("validated non-empty");
            let residuals = [run.sg.eps_max(), eps_min]
                .iter()
                .map(|&e| u.pde_residual(e, t_last))
                .collect::<Result<Vec<_>>>()?;
            prepare(out, run)?;
            write_csv_file(&out.join("slices.csv"), |f| u.write_slices_csv(eps_min, f))?;
            let extra = json!({
                "coefficient_class": ext(s),
                "data_class": ext(t),
                "pde_residual": residuals,
                "characteristic_defect": u.characteristic_defect(eps_min, t_last, 64)?,
                "slices": "slices.csv",
            });
            ("transport", table, report, predicted_regularity_pde(s, t).ok(), extra)
        }
    };
    prepare(out, run)?;
    write_csv_file(&out.join(&files.growth), |f| table.write_csv(f))?;
    let measured = report.s_hat;
    let pass = predicted
        .as_ref()
        .is_some_and(|p| !report.non_regular && matches(p, measured, run.config.tolerance));
    let result = json!({
        "config": run.config,
        "problem": kind,
        "predicted": predicted.as_ref().map(prediction_json),
        "measured": ext(measured),
        "tolerance": run.config.tolerance,
        "pass": pass,
        "non_regular": report.non_regular,
        "report": report,
        "details": extra,
        "artifacts": { "growth": files.growth },
    });
    fs::write(out.join(&files.report), to_json(&result)?)?;
    Ok(result)
}

pub fn corpus(run: &Resolved, out: &Path) -> Result<Value> {
    let manifest = export_corpus(out, &run.grid)?;
    Ok(json!({
        "manifest": out.join("manifest.json"),
        "entries": manifest.entries.len(),
    }))
}

pub fn kernels(out: &Path) -> Result<Value> {
    const ORDERS: usize = 8;
    fs::create_dir_all(out)?;
    let rho = make_mollifier();
    let mut kernels: Vec<(String, KernelSpec)> =
        vec![("rho".into(), *rho.spec()), ("mu".into(), *wavelet_mu(&rho).spec())];
    for k in 1..=4 {
        kernels.push((format!("rho{k}"), *wavelet_from_derivative(&rho, k)?.spec()));
    }
    let mut rows = Vec::new();
    for (name, spec) in &kernels {
        let file = format!("{name}_profile.csv");
        write_csv_file(&out.join(&file), |f| write_profile_csv(spec, 2.0, 801, f))?;
        rows.push(json!({
            "name": name,
            "moment_defect": moment_defect(spec, ORDERS + 1),
            "profile": file,
        }));
    }
    let result = json!({ "kernels": rows });
    fs::write(out.join("kernels.json"), to_json(&result)?)?;
    Ok(result)
}

//! Numerical runs described by `run` blocks or command-line flags.

use std::collections::BTreeMap;

use liesym_core::ode::{compile_rhs, integrate, state_name, IntegratorConfig, Method, Trajectory};
use thiserror::Error;

use crate::model::{Model, ModelError, RunSpec};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("run `{run}`: {message}")]
    Ode { run: String, message: String },
}

/// How a run's ODE grouping is named in output metadata.
pub fn grouping_of(ode: &str) -> &str {
    ode.strip_prefix("profile-")
        .and_then(|s| s.strip_suffix("-grouping"))
        .unwrap_or(ode)
}

/// Integrates a run; unset options take the integrator defaults.
pub fn run(model: &Model, spec: &RunSpec) -> Result<Trajectory<f64>, RunError> {
    let err = |e: &dyn std::fmt::Display| RunError::Ode {
        run: spec.name.clone(),
        message: e.to_string(),
    };
    let eq = model.ode(&spec.ode)?;
    let [var] = eq.independents.as_slice() else {
        return Err(err(&"the equation must have one independent variable"));
    };
    let sys = compile_rhs::<f64>(&eq.lhs, var, &eq.dependent, &spec.params, spec.n).map_err(|e| err(&e))?;
    let mut ic = vec![None; sys.dimension()];
    for (name, v) in &spec.ic {
        let k = (0..ic.len())
            .find(|&k| state_name(&eq.dependent, k) == *name)
            .ok_or_else(|| {
                err(&format!(
                    "unknown state `{name}`; expected {}",
                    sys.names[1..].join(", ")
                ))
            })?;
        ic[k] = Some(*v);
    }
    let ic: Vec<f64> = ic
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| err(&format!("missing initial value for `{}`", state_name(&eq.dependent, k)))))
        .collect::<Result<_, _>>()?;
    let mut cfg = IntegratorConfig::<f64>::default();
    if let Some(m) = spec.method {
        cfg.method = m;
    }
    if let Some(span) = spec.span {
        cfg.span = span;
    }
    if let Some((a, r)) = spec.tol {
        cfg.abs_tol = a;
        cfg.rel_tol = r;
    }
    if let Some(h) = spec.step {
        cfg.initial_step = h;
    }
    if let Some(p) = spec.points {
        cfg = cfg.with_uniform_grid(p);
    }
    let mut traj = integrate(&sys, &ic, &cfg).map_err(|e| err(&e))?;
    traj.labels.insert("run".into(), spec.name.clone());
    traj.labels.insert("ode".into(), spec.ode.clone());
    traj.labels
        .insert("grouping".into(), grouping_of(&spec.ode).to_string());
    if let Some(n) = spec.n {
        traj.labels.insert("n".into(), n.to_string());
    }
    Ok(traj)
}

/// A copy of `spec` integrated with a different method and step.
pub fn with_method(spec: &RunSpec, method: Method, step: Option<f64>) -> RunSpec {
    RunSpec {
        method: Some(method),
        step: step.or(spec.step),
        ..spec.clone()
    }
}

/// Endpoint error ratio of fixed-step RK4 on `y' = y` over `[0, 1]` when
/// the step is halved from 0.1; about 16 for a fourth-order method.
pub fn rk4_order_ratio() -> Result<f64, RunError> {
    let model = Model::parse("indep s\ndep y\node growth {\n  var s\n  dep y\n  eq D(y;s) - y = 0\n}\n")?;
    let err = |h: f64| -> Result<f64, RunError> {
        let spec = RunSpec {
            name: format!("growth-h{h}"),
            ode: "growth".into(),
            params: BTreeMap::new(),
            n: None,
            ic: vec![("y".into(), 1.0)],
            span: Some((0.0, 1.0)),
            method: Some(Method::FixedRk4),
            tol: None,
            step: Some(h),
            points: None,
        };
        let t = run(&model, &spec)?;
        Ok((t.last().expect("non-empty").1[0] - std::f64::consts::E).abs())
    };
    Ok(err(0.1)? / err(0.05)?)
}

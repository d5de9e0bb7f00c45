use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::input::ParsedInput;
use super::{CliError, Mode, Task, TaskOutput, TaskRequest};
use crate::calculus::{
    char_poly, cofactor, denominator_poly_augmented, determinant, diagonal_minor_det,
    eigenvector_components_augmented, kirchhoff_char_poly,
};
use crate::error::Error;
use crate::graph::{build_augmented, count_forests, Digraph, ForestQuery};
use crate::matrix::AdjacencyMatrix;
use crate::scalar::{format_rational, parse_rational, Field, Magnitude};
use crate::tropical::{
    eigenvalue_asymptotics, extreme_forests, newton_polygon, tropical_char_poly, validate_asymptotics,
    AsymptoticScalar, ExponentialMarkovInput, NewtonPolygon,
};

/// Scalars that can appear in a report: exact values as `"p/q"` strings,
/// floats as JSON numbers.
trait ReportScalar: Field + Magnitude {
    fn to_json(&self) -> Value;
    fn parse_literal(text: &str) -> Option<Self>;
    fn abs_value(&self) -> Self;
}

impl ReportScalar for BigRational {
    fn to_json(&self) -> Value {
        json!(format_rational(self))
    }

    fn parse_literal(text: &str) -> Option<Self> {
        parse_rational(text)
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

impl ReportScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn parse_literal(text: &str) -> Option<Self> {
        let t = text.trim();
        t.parse::<f64>().ok().or_else(|| parse_rational(t).map(|q| crate::scalar::rational_to_f64(&q)))
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

pub(super) fn run(req: &TaskRequest, parsed: &ParsedInput) -> Result<TaskOutput, CliError> {
    match (req.task, parsed) {
        (Task::TropicalSpectrum, ParsedInput::Tropical(inp)) => tropical_spectrum(inp),
        (Task::Validate, ParsedInput::Tropical(inp)) => validate(req, inp),
        (Task::Charpoly, ParsedInput::Tropical(inp)) => Ok(TaskOutput::new(json!(tropical_char_poly(inp)
            .coeffs()
            .iter()
            .map(asymptotic_json)
            .collect::<Vec<_>>()))),
        (_, ParsedInput::Exact(g)) => dense_task(req, g),
        (_, ParsedInput::Float(g)) => dense_task(req, g),
        (task, _) => Err(CliError::input(
            "InvalidArgument",
            format!("task {} does not accept this input in {} mode", task.name(), req.mode.name()),
        )),
    }
}

fn dense_task<S: ReportScalar>(req: &TaskRequest, g: &AdjacencyMatrix<S>) -> Result<TaskOutput, CliError> {
    let dagger = g.n();
    let with_zero_arcs = |q: ForestQuery| if req.include_zero_arcs { q.including_zero_arcs() } else { q };
    let count_augmented = |q: ForestQuery| -> Result<u64, CliError> {
        Ok(count_forests(build_augmented(g).graph(), &with_zero_arcs(q))?)
    };
    let out = match req.task {
        Task::Charpoly => {
            let mut out = TaskOutput::new(poly_json(char_poly(g).coeffs()));
            out.forest_count = Some(count_augmented(ForestQuery::rooted_at([dagger]))?);
            out
        }
        Task::Det => {
            let mut out = TaskOutput::new(determinant(g).to_json());
            out.forest_count = Some(count_augmented(ForestQuery::rooted_at([dagger]).with_extra_trees(0))?);
            out
        }
        Task::Minor => {
            let struck: BTreeSet<usize> = req.roots.iter().copied().collect();
            let mut out = TaskOutput::new(diagonal_minor_det(g, &struck)?.to_json());
            let roots = std::iter::once(dagger).chain(struck.iter().copied());
            out.forest_count = Some(count_augmented(ForestQuery::rooted_at(roots).with_extra_trees(0))?);
            out
        }
        Task::Cofactor => {
            let (row, col) = match (req.n, req.m) {
                (Some(n), Some(m)) => (n, m),
                _ => return Err(CliError::input("InvalidArgument", "cofactor needs --n (row) and --m (column)")),
            };
            let mut out = TaskOutput::new(cofactor(g, row, col)?.to_json());
            let mut q = ForestQuery::rooted_at([dagger, row]).with_extra_trees(0);
            if row != col {
                q = q.with_path(col, row);
            }
            out.forest_count = Some(count_augmented(q)?);
            out
        }
        Task::Eigenvector => eigenvector(req, g)?,
        Task::KirchhoffCharpoly => {
            let mut out = TaskOutput::new(poly_json(kirchhoff_char_poly(g).coeffs()));
            let q = with_zero_arcs(ForestQuery::rooted_at(std::iter::empty()));
            out.forest_count = Some(count_forests(&Digraph::from_matrix(g), &q)?);
            out
        }
        Task::TropicalSpectrum | Task::Validate | Task::Selftest => {
            return Err(CliError::input(
                "InvalidArgument",
                format!("task {} does not take a dense matrix", req.task.name()),
            ))
        }
    };
    Ok(out)
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn poly_json<S: ReportScalar>(coeffs: &[S]) -> Value {
    Value::Array(coeffs.iter().map(ReportScalar::to_json).collect())
}

fn eigenvector<S: ReportScalar>(req: &TaskRequest, g: &AdjacencyMatrix<S>) -> Result<TaskOutput, CliError> {
    let raw = req
        .lambda
        .as_deref()
        .ok_or_else(|| CliError::input("InvalidArgument", "eigenvector needs --lambda"))?;
    let lambda = S::parse_literal(raw).ok_or_else(|| {
        CliError::input("ParseError", format!("--lambda {raw:?} is not a number in {} mode", req.mode.name()))
    })?;
    let n = g.n();
    let h = build_augmented(g);
    let pivot = match req.n {
        Some(p) => p,
        None => {
            // largest |D_p(λ)| keeps the division best conditioned
            let mut best = (0, -1.0);
            for p in 0..n {
                let d = denominator_poly_augmented(&h, p)?.eval(&lambda).magnitude();
                if d > best.1 {
                    best = (p, d);
                }
            }
            best.0
        }
    };
    let ev = eigenvector_components_augmented(&h, &lambda, pivot, req.transpose)?;

    let target = if req.transpose { g.transpose() } else { g.clone() };
    let defects: Vec<S> = (0..n)
        .map(|i| {
            let gv = (0..n).fold(S::zero(), |acc, j| acc + target.get(i, j).clone() * ev.components[j].clone());
            lambda.clone() * ev.components[i].clone() - gv
        })
        .collect();
    let residual = defects
        .iter()
        .map(ReportScalar::abs_value)
        .fold(S::zero(), |best, d| if d.magnitude() > best.magnitude() { d } else { best });
    let tolerance = match req.mode {
        Mode::Exact => 0.0,
        _ => 1e-8 * (1.0 + g.norm_inf()),
    };
    let flagged = if req.mode == Mode::Exact { !residual.is_zero() } else { residual.magnitude() > tolerance };

    let mut out = TaskOutput::new(json!({
        "n": pivot + 1,
        "lambda": lambda.to_json(),
        "transpose": req.transpose,
        "components": ev.components.iter().map(ReportScalar::to_json).collect::<Vec<_>>(),
        "residual": residual.to_json(),
        "residual_warning": flagged,
    }));
    if flagged {
        out.warnings.push(format!(
            "residual ‖(λI−G)v‖_∞ = {} exceeds {}; λ is probably not an eigenvalue",
            plain(&residual.to_json()),
            if req.mode == Mode::Exact { "0".to_string() } else { format!("{tolerance:e}") }
        ));
    }
    Ok(out)
}

fn order_json(order: Option<&BigRational>) -> Value {
    order.map_or(Value::Null, |v| json!(format_rational(v)))
}

fn prefactor_json(c: &AsymptoticScalar) -> Value {
    if c.is_zero() {
        Value::Null
    } else {
        json!(format_rational(c.prefactor()))
    }
}

fn asymptotic_json(c: &AsymptoticScalar) -> Value {
    json!({ "V": order_json(c.order()), "m": prefactor_json(c) })
}

fn polygon_json(p: &NewtonPolygon) -> Value {
    json!({
        "vertices": p.vertices.iter().map(|(k, v)| json!({"k": k, "V": format_rational(v)})).collect::<Vec<_>>(),
        "segments": p.segments.iter().map(|s| json!({
            "from": s.from,
            "to": s.to,
            "slope": format_rational(&s.slope),
            "multiplicity": s.multiplicity(),
        })).collect::<Vec<_>>(),
        "convexity_ok": p.convexity_ok,
    })
}

const WITNESS_LIMIT: usize = 8;

fn witness_notes(inp: &ExponentialMarkovInput) -> Result<Vec<String>, CliError> {
    let dagger = inp.n();
    (0..=inp.n())
        .map(|k| {
            let ex = extreme_forests(inp, k)?;
            let Some(order) = &ex.order else {
                let trees = if k == 0 { "1 tree".to_string() } else { format!("{} trees", k + 1) };
                return Ok(format!("λ^{k} coefficient: no forest with {trees}, coefficient is exactly 0"));
            };
            let mut shown: Vec<String> = ex.forests.iter().take(WITNESS_LIMIT).map(|f| f.display_with(Some(dagger))).collect();
            if ex.forests.len() > WITNESS_LIMIT {
                shown.push(format!("… {} more", ex.forests.len() - WITNESS_LIMIT));
            }
            Ok(format!(
                "λ^{k} coefficient: order {} with prefactor {}, minimised by {}",
                format_rational(order),
                format_rational(&ex.prefactor),
                shown.join(" ")
            ))
        })
        .collect()
}

fn tropical_spectrum(inp: &ExponentialMarkovInput) -> Result<TaskOutput, CliError> {
    let poly = tropical_char_poly(inp);
    let coeffs = poly.coeffs();
    let polygon = newton_polygon(coeffs);
    let mut warnings = Vec::new();
    let eigenvalues: Vec<Value> = match eigenvalue_asymptotics(coeffs) {
        Ok(spectrum) => spectrum
            .eigenvalues
            .iter()
            .map(|e| {
                json!({
                    "k": e.k,
                    "exponent": format_rational(&e.exponent),
                    "Lambda": format_rational(&e.lambda),
                    "multiplicity": 1,
                })
            })
            .collect(),
        Err(Error::DegenerateSlopes { .. }) => {
            warnings.push(
                "DegenerateSlopes: hull slopes coincide or a coefficient is tropically zero; \
                 prefactors are given only for simple hull segments"
                    .to_string(),
            );
            segment_eigenvalues(coeffs, &polygon)
        }
        Err(e) => return Err(e.into()),
    };
    if !polygon.convexity_ok {
        warnings.push("some coefficient is off the lower hull or tropically zero; it sets no exponent".into());
    }
    let result = json!({
        "coefficient_orders": coeffs.iter().enumerate().map(|(k, c)| json!({
            "k": k,
            "V": order_json(c.order()),
            "m": prefactor_json(c),
        })).collect::<Vec<_>>(),
        "newton_polygon": polygon_json(&polygon),
        "eigenvalues": eigenvalues,
        "convexity_ok": polygon.convexity_ok,
    });
    Ok(TaskOutput { result, notes: witness_notes(inp)?, warnings, ..TaskOutput::default() })
}

/// Eigenvalue exponents per hull segment. Coefficients below the first
/// finite order vanish exactly, which makes that many eigenvalues zero.
fn segment_eigenvalues(coeffs: &[AsymptoticScalar], polygon: &NewtonPolygon) -> Vec<Value> {
    let first = polygon.vertices.first().map_or(0, |v| v.0);
    let zeros = (1..=first).map(|k| json!({"k": k, "exponent": null, "Lambda": "0", "multiplicity": first}));
    let mut segments: Vec<(&BigRational, Vec<Value>)> = polygon
        .segments
        .iter()
        .map(|s| {
            let lambda = if s.multiplicity() == 1 {
                json!(format_rational(&-(coeffs[s.from].prefactor() / coeffs[s.to].prefactor())))
            } else {
                Value::Null
            };
            let entries = (s.from + 1..=s.to)
                .map(|k| {
                    json!({
                        "k": k,
                        "exponent": format_rational(&s.slope),
                        "Lambda": lambda,
                        "multiplicity": s.multiplicity(),
                    })
                })
                .collect();
            (&s.slope, entries)
        })
        .collect();
    segments.sort_by(|a, b| b.0.cmp(a.0));
    zeros.chain(segments.into_iter().flat_map(|(_, e)| e)).collect()
}

fn validate(req: &TaskRequest, inp: &ExponentialMarkovInput) -> Result<TaskOutput, CliError> {
    let report = validate_asymptotics(inp, &req.eps)?;
    let mut warnings = Vec::new();
    for &eps in &req.eps {
        let realized = inp.realize_at_epsilon(eps)?;
        if !realized.underflowed.is_empty() {
            warnings.push(format!(
                "at ε = {eps}, {} rate(s) underflow to 0 in the dense matrix",
                realized.underflowed.len()
            ));
        }
    }
    let eigenvalues: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "k": c.k,
                "predicted_exponent": c.predicted_exponent_exact,
                "estimated_exponent": c.estimated_exponent,
                "exponent_rel_error": c.exponent_rel_error,
                "predicted_Lambda": c.predicted_lambda,
                "estimated_Lambda": c.estimated_lambda.re,
                "estimated_Lambda_im": c.estimated_lambda.im,
                "Lambda_rel_error": c.lambda_rel_error,
                "samples": c.samples.iter().map(|(e, l)| json!({"eps": e, "re": l.re, "im": l.im})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let result = json!({
        "eps": report.eps,
        "eigenvalues": eigenvalues,
        "max_exponent_rel_error": report.max_exponent_error(),
        "max_Lambda_rel_error": report.max_lambda_error(),
    });
    Ok(TaskOutput { result, warnings, ..TaskOutput::default() })
}

//! Dispatch from requests to the core pipelines.

use std::time::Instant;

use brauer_core::brauer::{
    brdim_report, filtration_level, hilbert_specialize, index_bounds, lemma21_reduce, normal_form,
    splitting_field, BrauerClass, HilbertTable, IndexBounds, Level,
};
use brauer_core::differentials::{
    format_omega1, format_omega2, kernel_decompose, kernel_expand, lemma16_lower_bound,
    paired_form, restrict_omega2, Omega2Form,
};
use brauer_core::field::p_independence;
use brauer_core::milnor::{h2p, k2_is_zero, SymbolSum};
use brauer_core::sampling::random_odd_points;
use brauer_core::{Embedding, Error, FieldDescriptor, RatFunc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::grammar::format_symbol_sum;
use crate::report::{
    error_kind, error_status, format_class, format_element, format_unit, ErrorInfo, Report, Status,
    SCHEMA_VERSION,
};
use crate::request::{Payload, Request};
use crate::suite;

/// What a command produced before it is wrapped into a report.
struct Outcome {
    status: Status,
    verdict: String,
    result: Value,
    certificates: Vec<String>,
}

impl Outcome {
    fn ok(verdict: impl Into<String>, result: Value, certificates: Vec<String>) -> Self {
        Outcome {
            status: Status::Ok,
            verdict: verdict.into(),
            result,
            certificates,
        }
    }
}

pub fn execute(req: &Request) -> Report {
    let start = Instant::now();
    let outcome = match &req.payload {
        Payload::Symbols { field, sum } => k2_vanish(field, sum),
        Payload::Form {
            field,
            form,
            gens,
            lambdas,
        } => omega_cert(field, form, gens, lambdas.as_deref()),
        Payload::Class(c) => match req.command {
            crate::request::CommandKind::NormalForm => {
                normal_form_cmd(c, req.echo.reduce, req.points, req.echo.seed)
            }
            crate::request::CommandKind::SplitField => split_field(c),
            _ => index_bounds_cmd(c),
        },
        Payload::Model(model) => brdim(model),
        Payload::Suite => Ok(selftest(req.echo.seed)),
    };
    let (status, verdict, result, certificates, error) = match outcome {
        Ok(o) => (o.status, Some(o.verdict), o.result, o.certificates, None),
        Err(e) => (
            error_status(&e),
            None,
            Value::Null,
            Vec::new(),
            Some(ErrorInfo {
                kind: error_kind(&e).into(),
                message: e.to_string(),
            }),
        ),
    };
    Report {
        schema_version: SCHEMA_VERSION,
        command: req.command.name().into(),
        request: req.echo.clone(),
        status,
        verdict,
        result,
        certificates,
        error,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn k2_vanish(field: &FieldDescriptor, sum: &SymbolSum) -> Result<Outcome, Error> {
    let (n, p) = (field.nvars(), field.p());
    let form = h2p(sum, n, p)?;
    let zero = k2_is_zero(sum, n, p);
    if zero != form.is_zero() {
        return Err(Error::Mismatch(
            "vanishing test disagrees with the differential symbol".into(),
        ));
    }
    Ok(Outcome::ok(
        if zero { "zero" } else { "nonzero" },
        json!({
            "symbols": format_symbol_sum(sum, field),
            "terms": sum.len(),
            "differential_symbol": format_omega2(field, &form),
        }),
        vec![
            format!("dlog-wedge image: {}", format_omega2(field, &form)),
            "the differential symbol is injective on k2, so the sum vanishes iff its image does"
                .into(),
        ],
    ))
}

/// Index `j` when `g` is the variable `t_j`.
fn as_variable(field: &FieldDescriptor, g: &RatFunc) -> Option<usize> {
    (0..field.nvars()).find(|&j| *g == field.var(j))
}

fn omega_cert(
    field: &FieldDescriptor,
    form: &Omega2Form,
    gens: &[RatFunc],
    lambdas: Option<&[RatFunc]>,
) -> Result<Outcome, Error> {
    let (n, p) = (field.nvars(), field.p());
    let indep = p_independence(gens);
    if !indep.independent {
        return Err(Error::DependentGenerators);
    }
    let mut certificates = vec![format!(
        "generators are p-independent: Jacobian rank {} with pivot variables {:?}",
        indep.rank,
        indep
            .pivots
            .iter()
            .map(|&j| field.var_names()[j].clone())
            .collect::<Vec<_>>()
    )];
    let parts = kernel_decompose(form, gens)?;
    let (in_kernel, parts_json, reconstructs) = match &parts {
        Some(parts) => {
            let back = kernel_expand(gens, parts, n, p);
            if back != *form {
                return Err(Error::Mismatch(
                    "decomposition does not reconstruct the form".into(),
                ));
            }
            certificates.push("sum of d(a_i) ^ f_i re-expands to the input form".into());
            let shown: Vec<String> = parts.iter().map(|f| format_omega1(field, f)).collect();
            (true, json!(shown), true)
        }
        None => {
            certificates.push("the linear system for f_1, ..., f_k is inconsistent".into());
            (false, Value::Null, false)
        }
    };

    // When the generators are coordinates, restrict to the field with their
    // p-th roots adjoined; the form dies there exactly when it decomposes.
    let roots: Option<Vec<(usize, u32)>> = gens
        .iter()
        .map(|g| as_variable(field, g).map(|j| (j, 1)))
        .collect();
    let restriction = match roots {
        Some(roots) => {
            let e = Embedding::adjoin_roots(field, &roots)?;
            let r = restrict_omega2(form, &e);
            if r.is_zero() != in_kernel {
                return Err(Error::Mismatch(
                    "restriction to the root field disagrees with the decomposition".into(),
                ));
            }
            certificates.push(format!(
                "restriction to the field with p-th roots of the generators: {}",
                format_omega2(e.target(), &r)
            ));
            json!({
                "target_vars": e.target().var_names(),
                "form": format_omega2(e.target(), &r),
                "vanishes": r.is_zero(),
            })
        }
        None => Value::Null,
    };

    let lower = match lambdas {
        Some(lambdas) => {
            let m = lemma16_lower_bound(lambdas, gens)?;
            let paired = paired_form(lambdas, gens, n, p);
            certificates.push(format!(
                "the paired form stays nonzero over every extension of degree below p^{m}"
            ));
            json!({
                "m": m,
                "paired_form": format_omega2(field, &paired),
                "input_is_paired_form": paired == *form,
            })
        }
        None => Value::Null,
    };

    Ok(Outcome::ok(
        if in_kernel {
            "in-kernel"
        } else {
            "outside-kernel"
        },
        json!({
            "form": format_omega2(field, form),
            "generators": gens.iter().map(|g| field.format(g)).collect::<Vec<_>>(),
            "p_rank_of_generators": indep.rank,
            "in_kernel": in_kernel,
            "parts": parts_json,
            "reconstructs": reconstructs,
            "restriction": restriction,
            "lower_bound": lower,
        }),
        certificates,
    ))
}

fn level_json(level: Level) -> Value {
    match level {
        Level::Infinite => json!("infinite"),
        Level::Finite { level, exact } => json!({ "level": level, "exact": exact }),
    }
}

fn normal_form_cmd(
    c: &BrauerClass,
    reduce: bool,
    points: usize,
    seed: u64,
) -> Result<Outcome, Error> {
    let mut certificates = Vec::new();
    let (work, reduction) = if reduce {
        let r = lemma21_reduce(c)?;
        let model = c.model();
        certificates.push(format!(
            "base change of degree {} leaves no graded-0 datum after removing (pi, {})",
            r.base_change.degree(),
            format_unit(model, &r.unit)
        ));
        let json = json!({
            "unit": format_unit(model, &r.unit),
            "degree": r.base_change.degree(),
            "target_vars": r.base_change.target().var_names(),
            "reduced": format_class(&r.reduced),
        });
        (r.reduced, json)
    } else {
        (c.clone(), Value::Null)
    };
    let model = work.model();
    let nf = normal_form(&work)?;
    let nf_class = nf.to_class(model);
    let residual = filtration_level(&work.plus(&nf_class.negated()))?;
    if residual != Level::Infinite {
        return Err(Error::Mismatch(
            "difference with the normal form is nonzero".into(),
        ));
    }
    certificates.push("class minus normal form expands to zero at every level".into());

    let table = HilbertTable::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut skipped) = (0usize, 0usize);
    for point in random_odd_points(&mut rng, model.nvars(), points) {
        match (
            hilbert_specialize(&work, &point, &table),
            hilbert_specialize(&nf_class, &point, &table),
        ) {
            (Ok(a), Ok(b)) if a == b => agree += 1,
            (Ok(a), Ok(b)) => {
                return Err(Error::Mismatch(format!(
                    "2-adic Hilbert symbols differ at {point:?}: {a} vs {b}"
                )))
            }
            (Err(Error::BadSpecialization(_)), _) | (_, Err(Error::BadSpecialization(_))) => {
                skipped += 1
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    certificates.push(format!(
        "2-adic Hilbert symbols agree at {agree} odd specializations ({skipped} skipped)"
    ));

    let k = model.residue();
    let levels: Vec<Value> = nf
        .levels
        .iter()
        .map(|d| {
            json!({
                "level": d.level,
                "form": format_omega1(k, &d.form),
                "scalar": k.format(&d.scalar),
            })
        })
        .collect();
    Ok(Outcome::ok(
        "normal-form",
        json!({
            "reduction": reduction,
            "normal_form": format_class(&nf_class),
            "lambdas": nf.lambdas.iter().map(|u| format_unit(model, u)).collect::<Vec<_>>(),
            "pi_coefficient": format_unit(model, &nf.pi_coeff),
            "basis_lifts": nf.basis_lifts.iter().map(|u| format_unit(model, u)).collect::<Vec<_>>(),
            "levels": levels,
            "sweeps": nf.sweeps,
            "difference_vanishes": nf.difference_vanishes,
            "hilbert_checks": { "agree": agree, "skipped": skipped },
        }),
        certificates,
    ))
}

fn split_field(c: &BrauerClass) -> Result<Outcome, Error> {
    let model = c.model();
    let s = splitting_field(c)?;
    let gens: Vec<String> = s
        .generators
        .iter()
        .map(|g| {
            format!(
                "({})^(1/{})",
                format_element(model, &g.radicand),
                g.root_degree
            )
        })
        .collect();
    Ok(Outcome::ok(
        format!("degree {}", s.degree),
        json!({
            "class": format_class(c),
            "generators": gens,
            "degree": s.degree,
        }),
        vec![format!(
            "every period-{} class over the model splits over this radical extension",
            model.p()
        )],
    ))
}

fn bounds_json(p: u32, b: &IndexBounds) -> Value {
    json!({
        "lower_exp": b.lower_exp,
        "upper_exp": b.upper_exp,
        "index_range": [
            (p as u64).pow(b.lower_exp as u32),
            (p as u64).pow(b.upper_exp as u32),
        ],
    })
}

fn index_bounds_cmd(c: &BrauerClass) -> Result<Outcome, Error> {
    let b = index_bounds(c)?;
    let mut result = bounds_json(c.model().p(), &b);
    result["class"] = json!(format_class(c));
    result["filtration_level"] = level_json(filtration_level(c)?);
    Ok(Outcome::ok(
        if b.lower_exp == b.upper_exp {
            "exact"
        } else {
            "interval"
        },
        result,
        b.certificates.clone(),
    ))
}

fn brdim(model: &brauer_core::cdvf::CdvfModel) -> Result<Outcome, Error> {
    let r = brdim_report(model)?;
    let mut certificates = vec![format!(
        "upper: {}",
        if model.nvars() == 0 {
            "period equals index over a local field with finite residue field".to_string()
        } else {
            format!("index divides period^(2n) with n = {}", model.nvars())
        }
    )];
    if let Some(w) = &r.witness {
        certificates.push(format!(
            "lower: the paired class on the lifted p-basis has index exponent in [{}, {}]",
            w.lower_exp, w.upper_exp
        ));
    }
    Ok(Outcome::ok(
        format!("[{}, {}]", r.lower, r.upper),
        json!({
            "nvars": model.nvars(),
            "lower": r.lower,
            "upper": r.upper,
            "witness": r.witness.as_ref().map(|w| bounds_json(model.p(), w)),
        }),
        certificates,
    ))
}

fn selftest(seed: u64) -> Outcome {
    let outcomes = suite::run_all(seed);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let total = outcomes.len();
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "id": o.id,
                "title": o.title,
                "passed": o.passed,
                "cases": o.cases,
                "failures": o.failures,
            })
        })
        .collect();
    Outcome {
        status: if passed == total {
            Status::Ok
        } else {
            Status::Failed
        },
        verdict: format!("{passed}/{total} criteria passed"),
        result: json!({ "passed": passed, "total": total, "criteria": criteria }),
        certificates: outcomes.iter().map(suite::Outcome::line).collect(),
    }
}

use std::fmt::Write as _;

use serde::Serialize;

use ordtopo_core::nets::{
    monotonicity_with, order_converges, CertificateCheck, ConvergenceOutcome, Family, Monotonicity,
};
use ordtopo_core::sets::{check_solid_with, SolidityVerdict};
use ordtopo_core::theorems::{
    sample_members, tau_subset_probe, verify_band_proposition, verify_example_e1_with,
    verify_theorem_t1, verify_vector_topology, TheoremReport,
};
use ordtopo_core::topology::{
    check_order_closed, check_quasi_order_closed, interval_fit, is_order_open,
    neighborhood_catalog, tau_e_convergence_report, IntervalFit, NeighborhoodCatalog, TauEReport,
    Verdict,
};
use ordtopo_core::{Carrier, IntervalSemantics, SearchConfig, SetExpr, Vector};

use crate::doc::{
    CatalogKind, CheckSetTask, ConvergenceTask, FitTask, ProblemDoc, Property, TheoremTask,
};
use crate::{CliError, Command, Rendered};

/// Header shared by every command report.
#[derive(Debug, Serialize)]
struct Context<'a> {
    command: &'static str,
    carrier: Carrier,
    semantics: IntervalSemantics,
    config: &'a SearchConfig,
}

#[derive(Debug, Serialize)]
struct CheckSetReport<'a> {
    #[serde(flatten)]
    context: Context<'a>,
    set: &'a SetExpr,
    #[serde(skip_serializing_if = "Option::is_none")]
    quasi_order_closed: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order_open: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order_closed: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solid: Option<SolidityVerdict>,
}

#[derive(Debug, Serialize)]
struct ConvergenceReport<'a> {
    #[serde(flatten)]
    context: Context<'a>,
    family: &'a Family,
    limit: &'a Vector,
    monotonicity: Monotonicity,
    order: ConvergenceOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_check: Option<CertificateCheck>,
    catalog: NeighborhoodCatalog,
    tau_e: TauEReport,
}

#[derive(Debug, Serialize)]
struct FitEntry {
    center: Vector,
    fit: Option<IntervalFit>,
}

#[derive(Debug, Serialize)]
struct FitReport<'a> {
    #[serde(flatten)]
    context: Context<'a>,
    set: &'a SetExpr,
    fits: Vec<FitEntry>,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn task_missing(command: Command) -> CliError {
    CliError::Input(format!("the document has no {} block", command.name()))
}

pub(crate) fn dispatch(
    command: Command,
    doc: &ProblemDoc,
    semantics: IntervalSemantics,
    cfg: &SearchConfig,
) -> Result<Rendered, CliError> {
    let context = Context {
        command: command.name(),
        carrier: doc.carrier,
        semantics,
        config: cfg,
    };
    match command {
        Command::CheckSet => check_set(
            doc.check_set
                .as_ref()
                .ok_or_else(|| task_missing(command))?,
            context,
        ),
        Command::Convergence => convergence(
            doc.convergence
                .as_ref()
                .ok_or_else(|| task_missing(command))?,
            context,
        ),
        Command::Fit => fit(
            doc.fit.as_ref().ok_or_else(|| task_missing(command))?,
            context,
        ),
        Command::Theorems => theorem(
            doc.theorem.as_ref().ok_or_else(|| task_missing(command))?,
            context,
        ),
    }
}

fn prepare(
    set: &SetExpr,
    carrier: Carrier,
    semantics: IntervalSemantics,
) -> Result<SetExpr, CliError> {
    let set = set.with_semantics(semantics)?;
    set.check_carrier(carrier)?;
    Ok(set)
}

fn verdict_line(out: &mut String, name: &str, v: &Verdict) {
    let _ = match v.witness() {
        Some(w) => writeln!(
            out,
            "{name}: refuted; {} stays in the set from index {} and tends to {}",
            w.family, w.in_set_from, w.limit
        ),
        None => match v {
            Verdict::Unknown { search_report } => {
                writeln!(
                    out,
                    "{name}: unknown after {} candidates",
                    search_report.candidates
                )
            }
            _ => writeln!(out, "{name}: {}", v.status()),
        },
    };
}

fn check_set(task: &CheckSetTask, context: Context<'_>) -> Result<Rendered, CliError> {
    let (carrier, cfg) = (context.carrier, context.config);
    let set = prepare(&task.set, carrier, context.semantics)?;
    let wants = |p: Property| task.properties.contains(&p);
    let mut report = CheckSetReport {
        context,
        set: &set,
        quasi_order_closed: None,
        order_open: None,
        order_closed: None,
        solid: None,
    };
    if wants(Property::QuasiOrderClosed) {
        report.quasi_order_closed = Some(check_quasi_order_closed(&set, carrier, cfg)?);
    }
    if wants(Property::OrderOpen) {
        report.order_open = Some(is_order_open(&set, carrier, cfg)?);
    }
    if wants(Property::OrderClosed) {
        report.order_closed = Some(check_order_closed(&set, carrier, cfg)?);
    }
    if wants(Property::Solid) {
        report.solid = Some(check_solid_with(&set, carrier, cfg)?);
    }
    let mut text = format!("set {set} in {carrier}\n");
    for (name, v) in [
        ("quasi-order-closed", &report.quasi_order_closed),
        ("order-open", &report.order_open),
        ("order-closed", &report.order_closed),
    ] {
        if let Some(v) = v {
            verdict_line(&mut text, name, v);
        }
    }
    let _ = match &report.solid {
        Some(SolidityVerdict::Refuted { x, y }) => {
            writeln!(text, "solid: refuted; {x} is in the set, {y} is not")
        }
        Some(SolidityVerdict::Certified { .. }) => writeln!(text, "solid: certified"),
        Some(SolidityVerdict::Unknown {
            candidates_searched,
        }) => {
            writeln!(
                text,
                "solid: unknown after {candidates_searched} candidates"
            )
        }
        None => Ok(()),
    };
    Ok(Rendered {
        json: to_json(&report)?,
        text,
        exit_code: 0,
    })
}

fn convergence(task: &ConvergenceTask, context: Context<'_>) -> Result<Rendered, CliError> {
    let (carrier, cfg, semantics) = (context.carrier, context.config, context.semantics);
    task.family.validate()?;
    let family_carrier = task.family.carrier()?;
    if family_carrier != carrier {
        return Err(CliError::Input(format!(
            "the family lives in {family_carrier}, the document in {carrier}"
        )));
    }
    task.limit.check_carrier(carrier)?;
    let depth = task.depth.unwrap_or(cfg.neighborhood_depth);
    let catalog = match task.catalog {
        CatalogKind::Full => neighborhood_catalog(&task.limit, depth, semantics)?,
        CatalogKind::Chain => NeighborhoodCatalog::symmetric_chain(&task.limit, depth, semantics)?,
    };
    let monotonicity = monotonicity_with(&task.family, cfg.horizon)?;
    let order = order_converges(&task.family, &task.limit)?;
    let certificate_check = order
        .certificate()
        .map(|c| c.revalidate(cfg.horizon))
        .transpose()?;
    let tau_e = tau_e_convergence_report(&task.family, &task.limit, &catalog, cfg.horizon)?;

    let mut text = format!("family {} toward {}\n", task.family, task.limit);
    let _ = match &order {
        ConvergenceOutcome::Converges { certificate } => writeln!(
            text,
            "order: certified; dominated by {}{}",
            certificate.dominating,
            match &certificate_check {
                Some(CertificateCheck::Valid) => ", certificate re-validated",
                _ => ", certificate NOT re-validated",
            }
        ),
        ConvergenceOutcome::Refuted {
            axis,
            coordinate_limit,
            target,
        } => {
            writeln!(
                text,
                "order: refuted; coordinate {axis} tends to {coordinate_limit}, not {target}"
            )
        }
        ConvergenceOutcome::Unknown { reason } => writeln!(text, "order: unknown; {reason}"),
    };
    let _ = match &tau_e {
        TauEReport::RefutedBy {
            interval,
            outside_from,
            ..
        } => {
            writeln!(
                text,
                "tau_e: refuted by {interval}; outside it from index {outside_from}"
            )
        }
        TauEReport::Consistent { thresholds } => {
            writeln!(
                text,
                "tau_e: consistent over {} intervals; thresholds {thresholds:?}",
                thresholds.len()
            )
        }
        TauEReport::Unknown { reason, .. } => writeln!(text, "tau_e: unknown; {reason}"),
    };
    let report = ConvergenceReport {
        context,
        family: &task.family,
        limit: &task.limit,
        monotonicity,
        order,
        certificate_check,
        catalog,
        tau_e,
    };
    Ok(Rendered {
        json: to_json(&report)?,
        text,
        exit_code: 0,
    })
}

fn fit(task: &FitTask, context: Context<'_>) -> Result<Rendered, CliError> {
    let (carrier, cfg, semantics) = (context.carrier, context.config, context.semantics);
    let set = prepare(&task.set, carrier, semantics)?;
    let points = match &task.points {
        Some(p) => p.clone(),
        None => sample_members(&set, carrier, task.samples, task.seed)?,
    };
    let mut fits = Vec::with_capacity(points.len());
    let mut text = format!("set {set} in {carrier}\n");
    for c in points {
        c.check_carrier(carrier)?;
        let fit = interval_fit(&c, &set, semantics, cfg)?;
        let _ = match &fit {
            Some(f) => writeln!(text, "{c}: {} (shrink {})", f.interval, f.shrink),
            None => writeln!(text, "{c}: no interval within budget {}", cfg.fit_budget),
        };
        fits.push(FitEntry { center: c, fit });
    }
    let report = FitReport {
        context,
        set: &set,
        fits,
    };
    Ok(Rendered {
        json: to_json(&report)?,
        text,
        exit_code: 0,
    })
}

fn theorem(task: &TheoremTask, context: Context<'_>) -> Result<Rendered, CliError> {
    let (carrier, cfg, semantics) = (context.carrier, context.config, context.semantics);
    let prepare_all = |sets: &[SetExpr]| {
        sets.iter()
            .map(|s| prepare(s, carrier, semantics))
            .collect::<Result<Vec<_>, _>>()
    };
    let report: TheoremReport = match task {
        TheoremTask::ExampleE1 {} => verify_example_e1_with(semantics, cfg)?,
        TheoremTask::T1 { family, x, depth } => {
            let chain = NeighborhoodCatalog::symmetric_chain(x, *depth, semantics)?;
            verify_theorem_t1(family, x, &chain, cfg)?
        }
        TheoremTask::Band { set } => {
            verify_band_proposition(&prepare(set, carrier, semantics)?, carrier, cfg)?
        }
        TheoremTask::TauSubset {
            catalog,
            samples,
            seed,
        } => tau_subset_probe(
            &prepare_all(catalog)?,
            carrier,
            *samples,
            semantics,
            *seed,
            cfg,
        )?,
        TheoremTask::VectorTopology {
            catalog,
            shifts,
            scalars,
        } => verify_vector_topology(&prepare_all(catalog)?, shifts, scalars, carrier, cfg)?,
    };
    let exit_code = if report.contradicts_claim { 3 } else { 0 };
    Ok(Rendered {
        json: to_json(&report)?,
        text: report.render_text(),
        exit_code,
    })
}

//! The three subcommands. Each returns the rendered output and whether the
//! run passed; the caller writes it and picks the exit code.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use spectra_core::coding::{generate_elements, FamilyKind};
use spectra_core::counting::{
    default_witness_radius, maximality_probe_sorted, points_in_radius, verify_counting_lemma_sorted,
};
use spectra_core::density::{
    beurling_dimension_estimate, verify_density_bound_within, verify_lacunarity,
};
use spectra_core::{Error as CoreError, SpectrumElement, SpectrumFamily};

use crate::config::{OutputFormat, RunConfig};
use crate::error::LabError;
use crate::output::sig9;

/// A finished run: the main document, an optional structured summary for
/// delimited runs, and the overall verdict.
#[derive(Debug)]
pub struct Rendered {
    pub body: String,
    pub summary: Option<String>,
    pub pass: bool,
}

pub fn generate(cfg: &RunConfig) -> Result<Rendered, LabError> {
    let family = cfg.family()?;
    let q = family.params().q();
    let elements = generate_elements(&family, cfg.limits.index_limit)?;
    let body = match cfg.output.format {
        OutputFormat::Delimited => {
            let mut s = String::from("index\tword\tlambda\n");
            for e in &elements {
                writeln!(
                    s,
                    "{}\t{}\t{}",
                    e.index,
                    e.word.to_digit_string(q),
                    e.lambda()
                )
                .unwrap();
            }
            s
        }
        OutputFormat::Structured => {
            let rows: Vec<_> = elements
                .iter()
                .map(|e| json!({"index": e.index, "word": e.word.to_digit_string(q), "lambda": e.lambda().to_string()}))
                .collect();
            document(json!({"command": "generate", "config": cfg, "elements": rows}))
        }
    };
    Ok(Rendered {
        body,
        summary: None,
        pass: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn render(&self) -> String {
        format!(
            "CHECK {} {} {}",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

/// Validation line for a family that failed to build.
pub fn validation_failure(err: &LabError) -> CheckLine {
    let detail = match err {
        LabError::Invalid(CoreError::Condition { condition, detail }) => {
            format!("{}: {detail}", condition.label())
        }
        LabError::Invalid(CoreError::Range { position, value }) => {
            format!("range: value {value} at position {position} outside {{-1, ..., p-2}}")
        }
        other => other.to_string(),
    };
    CheckLine {
        name: "validation",
        pass: false,
        detail,
    }
}

pub fn check(cfg: &RunConfig) -> Result<Rendered, LabError> {
    let family = cfg.family()?;
    let params = *family.params();
    let limits = &cfg.limits;
    let mut lines = vec![CheckLine {
        name: "validation",
        pass: true,
        detail: format!(
            "{} family, p={}, q={}, regular={}",
            family.name(),
            params.p(),
            params.q(),
            family.is_regular()
        ),
    }];

    let elements = generate_elements(&family, limits.index_limit)?;
    let violations = orthogonality_violations(&family, &elements);
    let n = elements.len() as u64;
    let mut detail = format!(
        "{} elements, {} pairs, {} violations",
        n,
        n * (n - 1) / 2,
        violations.len()
    );
    if let Some((i, j)) = violations.first() {
        write!(detail, ", first (n={i}, n={j})").unwrap();
    }
    lines.push(CheckLine {
        name: "orthogonality",
        pass: violations.is_empty(),
        detail,
    });

    let p = i128::from(params.p());
    let radius = match limits.search_radius {
        Some(r) => i128::from(r),
        None => p
            .checked_pow(limits.k_max + 1)
            .ok_or(CoreError::Overflow("p^(k_max+1) exceeds i128"))?,
    };
    let points = points_in_radius(&family, radius)?;
    let mut worst = None;
    let mut counting_pass = true;
    for k in 1..=limits.k_max {
        let v = verify_counting_lemma_sorted(&params, &points, k, radius)?;
        counting_pass &= v.pass;
        let slack = v.bound as f64 - v.worst.count as f64;
        if worst.as_ref().is_none_or(|(s, _)| slack < *s) {
            worst = Some((slack, v));
        }
    }
    let (_, w) = worst.expect("k_max >= 2");
    lines.push(CheckLine {
        name: "counting",
        pass: counting_pass,
        detail: format!(
            "windows p^k for k=1..{} within radius {radius}; tightest k={} count {} <= {} at m={}",
            limits.k_max, w.k, w.worst.count, w.bound, w.worst.m
        ),
    });

    // Regular mappings are maximal; other families may fail here honestly.
    {
        let candidate = i128::from(limits.candidate_radius);
        let witness = limits
            .witness_radius
            .map_or_else(|| default_witness_radius(&params, candidate), i128::from);
        let witnesses = points_in_radius(&family, witness)?;
        let unresolved = maximality_probe_sorted(&params, &witnesses, candidate);
        let mut detail = format!(
            "candidates [-{candidate}, {candidate}], witnesses [-{witness}, {witness}], {} unresolved",
            unresolved.len()
        );
        if !unresolved.is_empty() {
            let shown: Vec<String> = unresolved.iter().take(8).map(i128::to_string).collect();
            write!(detail, ": {}", shown.join(",")).unwrap();
        }
        lines.push(CheckLine {
            name: "maximality",
            pass: unresolved.is_empty(),
            detail,
        });
    }

    if matches!(family.kind(), FamilyKind::Thp(_)) {
        let v = verify_lacunarity(&family, limits.even_count)?;
        lines.push(CheckLine {
            name: "lacunarity",
            pass: v.pass,
            detail: format!(
                "{} consecutive even pairs, b = {}/{}, worst ratio {} at n={}, {} failures",
                v.pairs,
                v.b.0,
                v.b.1,
                sig9(v.min_ratio),
                v.min_at,
                v.failures.len()
            ),
        });
    }

    let pass = lines.iter().all(|l| l.pass);
    Ok(Rendered {
        body: render_checks(cfg, &lines),
        summary: None,
        pass,
    })
}

pub fn render_checks(cfg: &RunConfig, lines: &[CheckLine]) -> String {
    match cfg.output.format {
        OutputFormat::Delimited => lines.iter().map(|l| l.render() + "\n").collect(),
        OutputFormat::Structured => document(json!({
            "command": "check",
            "config": cfg,
            "checks": lines,
            "pass": lines.iter().all(|l| l.pass),
        })),
    }
}

/// Index pairs `(i, j)`, `i < j`, whose difference is outside the zero set,
/// in lexicographic order. Equal values count as violations.
pub fn orthogonality_violations(
    family: &SpectrumFamily,
    elements: &[SpectrumElement],
) -> Vec<(u64, u64)> {
    let params = family.params();
    elements
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, a)| {
            elements[i + 1..]
                .iter()
                .filter(|b| a.expansion.difference_in_zero_set(&b.expansion, params) != Some(true))
                .map(move |b| (a.index, b.index))
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn density(cfg: &RunConfig) -> Result<Rendered, LabError> {
    let family = cfg.family()?;
    let params = *family.params();
    let limits = &cfg.limits;
    let p = i128::from(params.p());
    let radius = match limits.search_radius {
        Some(r) => i128::from(r),
        None => p
            .checked_pow(limits.k_max + 1)
            .ok_or(CoreError::Overflow("p^(k_max+1) exceeds i128"))?,
    };
    let verdict = verify_density_bound_within(&family, limits.k_max, limits.tolerance, radius)?;
    let schedule: Vec<i128> = (1..=limits.k_max).map(|k| p.pow(k)).collect();
    let dimension = match beurling_dimension_estimate(&family, &schedule, radius) {
        Ok(fit) => json!({
            "slope": fit.slope,
            "intercept": fit.intercept,
            "max_residual": fit.max_residual,
            "endpoint_slope": fit.endpoint_slope,
            "degenerate": fit.constant_counts,
        }),
        Err(CoreError::DegenerateFit(reason)) => json!({"degenerate": true, "reason": reason}),
        Err(e) => return Err(e.into()),
    };
    let convergence = verdict.convergence.as_ref().map(|(steps, ok)| {
        let last = steps.last().expect("k_max >= 2");
        json!({
            "windows": steps.iter().map(|s| s.window.to_string()).collect::<Vec<_>>(),
            "ratios": steps.iter().map(|s| s.ratio).collect::<Vec<_>>(),
            "last_gap": verdict.bound - last.ratio,
            "last_envelope": last.envelope,
            "pass": ok,
        })
    });
    let summary = json!({
        "command": "density",
        "config": cfg,
        "s": params.s(),
        "r": verdict.report.r,
        "radius": radius.to_string(),
        "bound": verdict.bound,
        "estimate": verdict.report.estimate,
        "worst_window": {"n": verdict.worst.n.to_string(), "m": verdict.worst.m.to_string(), "count": verdict.worst.count},
        "exact_exceedances": verdict.exact_exceedances.iter().map(i128::to_string).collect::<Vec<_>>(),
        "tolerance": verdict.tolerance,
        "verdict": if verdict.pass { "PASS" } else { "FAIL" },
        "convergence": convergence,
        "dimension": dimension,
        "note": "finite-schedule estimate of a limsup over the searched radius",
    });

    let (body, summary) = match cfg.output.format {
        OutputFormat::Delimited => {
            let mut s = String::from("n\tm\tcount\tratio\n");
            for r in &verdict.report.rows {
                writeln!(s, "{}\t{}\t{}\t{}", r.n, r.m, r.count, sig9(r.ratio)).unwrap();
            }
            (s, Some(document(summary)))
        }
        OutputFormat::Structured => {
            let rows: Vec<_> = verdict
                .report
                .rows
                .iter()
                .map(|r| json!({"n": r.n.to_string(), "m": r.m.to_string(), "count": r.count, "ratio": sig9(r.ratio)}))
                .collect();
            let mut doc = summary;
            doc["rows"] = json!(rows);
            (document(doc), None)
        }
    };
    Ok(Rendered {
        body,
        summary,
        pass: verdict.pass,
    })
}

fn document(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json serializes");
    s.push('\n');
    s
}

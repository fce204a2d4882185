//! Single-tuple drill-down: conditions with slacks, invariants, identities and both Toledo values.

use std::fmt::Write as _;

use chyp::potential::toledo_by_integral;
use chyp::quadrangle::{compute_f_terms, evaluate, verify_identities, ExampleRecord, Params};
use chyp::triangle::classify_triangle;
use num_rational::Ratio;
use serde::Serialize;

use crate::config::SweepConfig;
use crate::record::Row;
use crate::sweep::CLASSIFY_TOL;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRow {
    pub name: &'static str,
    pub passed: bool,
    /// Signed slack; `None` when the condition could not be evaluated.
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleRow {
    pub name: &'static str,
    /// Classification of the holonomy restricted to the first vertex slice, or the error.
    pub class: String,
    pub abs_trace: Option<f64>,
    pub rotation_angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FTermsRow {
    pub lambda_y: u8,
    pub lambda_z: u8,
    pub o_y: u8,
    pub o_z: u8,
    pub f: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub n: i64,
    pub l: i64,
    pub k: i64,
    pub p: i64,
    pub admissible: bool,
    pub accepted: bool,
    pub marginal: bool,
    pub near_miss: bool,
    pub first_failure: Option<&'static str>,
    pub conditions: Vec<ConditionRow>,
    pub f_terms: Option<FTermsRow>,
    pub invariants: Option<Row>,
    /// `e / chi`, reduced.
    pub e_over_chi: Option<String>,
    pub laws: Option<String>,
    pub identity_max_residual: Option<f64>,
    pub triangles: Vec<TriangleRow>,
    /// `tau` from the congruence formula.
    pub toledo_closed_form: Option<String>,
    /// `tau` from the boundary integral of the potential over the cycle, times the cover degree.
    pub toledo_integral: Option<String>,
    pub errors: Vec<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn check_tuple(params: Params, cfg: &SweepConfig) -> CheckReport {
    let (report, data) = evaluate(params, cfg.margin, cfg.marginal_band);
    let mut out = CheckReport {
        n: params.n,
        l: params.l,
        k: params.k,
        p: params.p,
        admissible: params.is_admissible(),
        accepted: report.accepted,
        marginal: report.marginal,
        near_miss: report.near_miss,
        first_failure: report.first_failure().map(|c| c.name()),
        conditions: report
            .results
            .iter()
            .map(|r| ConditionRow { name: r.cond.name(), passed: r.passed, slack: finite(r.slack) })
            .collect(),
        f_terms: None,
        invariants: None,
        e_over_chi: None,
        laws: None,
        identity_max_residual: None,
        triangles: Vec::new(),
        toledo_closed_form: None,
        toledo_integral: None,
        errors: Vec::new(),
    };
    let Some(data) = data else {
        return out;
    };
    for (name, tri) in [("C", data.triangle_c()), ("S", data.triangle_s())] {
        out.triangles.push(match classify_triangle(&tri, CLASSIFY_TOL) {
            Ok(c) => TriangleRow {
                name,
                class: format!("{:?}", c.tag),
                abs_trace: Some(c.abs_trace),
                rotation_angle: c.rotation_angle,
            },
            Err(e) => TriangleRow { name, class: e.to_string(), abs_trace: None, rotation_angle: None },
        });
    }
    if !report.accepted {
        return out;
    }
    match compute_f_terms(&data, cfg.z_seed) {
        Ok(t) => {
            let rec = ExampleRecord::new(params, t.f(), report.marginal);
            out.f_terms = Some(FTermsRow { lambda_y: t.lambda_y, lambda_z: t.lambda_z, o_y: t.o_y, o_z: t.o_z, f: t.f() });
            out.invariants = Some(Row::from(&rec));
            out.e_over_chi = Some(Ratio::new(rec.e, rec.chi).to_string());
            out.laws = Some(match rec.check_laws() {
                Ok(()) => "ok".into(),
                Err(e) => e,
            });
            out.toledo_closed_form = Some(rec.tau().to_string());
        }
        Err(e) => out.errors.push(format!("f: {e}")),
    }
    match verify_identities(&data) {
        Ok(r) => out.identity_max_residual = Some(r.max_residual()),
        Err(e) => out.errors.push(format!("identities: {e}")),
    }
    match toledo_by_integral(&data) {
        Ok(t) => out.toledo_integral = Some((t * params.cover_degree()).to_string()),
        Err(e) => out.errors.push(format!("Toledo integral: {e}")),
    }
    out
}

impl CheckReport {
    /// Multi-line human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.accepted { "accepted" } else { "rejected" };
        let _ = writeln!(s, "M({},{},{},{}): {verdict}", self.n, self.l, self.k, self.p);
        if !self.admissible {
            let _ = writeln!(s, "  parameters outside 0 <= k <= l <= n-3, p in {{1,2}}");
        }
        if let Some(c) = self.first_failure {
            let _ = writeln!(s, "  first failing condition: {c}");
        }
        for c in &self.conditions {
            let slack = c.slack.map_or("n/a".to_string(), |x| format!("{x:.3e}"));
            let _ = writeln!(s, "  {} {:<4} slack {slack}", c.name, if c.passed { "pass" } else { "FAIL" });
        }
        if self.marginal {
            let _ = writeln!(s, "  marginal: a slack lies inside the marginal band");
        }
        if self.near_miss {
            let _ = writeln!(s, "  near miss: every failure lies inside the marginal band");
        }
        for t in &self.triangles {
            let _ = write!(s, "  triangle {}: {}", t.name, t.class);
            if let Some(a) = t.abs_trace {
                let _ = write!(s, ", |tr| {a:.12}");
            }
            if let Some(a) = t.rotation_angle {
                let _ = write!(s, ", rotation {a:.12}");
            }
            let _ = writeln!(s);
        }
        if let Some(f) = &self.f_terms {
            let _ = writeln!(
                s,
                "  f = {} (lambda_y {}, lambda_z {}, o_y {}, o_z {})",
                f.f, f.lambda_y, f.lambda_z, f.o_y, f.o_z
            );
        }
        if let Some(r) = &self.invariants {
            let _ = writeln!(
                s,
                "  t = {}, genus {}, chi {}, e {}, tau {}, e_P {}, orbifold e {}",
                r.t, r.genus, r.chi, r.e, r.tau, r.e_p, r.orb_e
            );
        }
        if let Some(x) = &self.e_over_chi {
            let _ = writeln!(s, "  e/chi = {x}");
        }
        if let Some(l) = &self.laws {
            let _ = writeln!(s, "  laws: {l}");
        }
        if let Some(r) = self.identity_max_residual {
            let _ = writeln!(s, "  identity residual: {r:.3e}");
        }
        if let (Some(a), Some(b)) = (&self.toledo_closed_form, &self.toledo_integral) {
            let _ = writeln!(s, "  tau closed form {a}, by integral {b}");
        }
        for e in &self.errors {
            let _ = writeln!(s, "  error: {e}");
        }
        s
    }

    /// Both Toledo computations are present and equal.
    pub fn toledo_agrees(&self) -> bool {
        matches!((&self.toledo_closed_form, &self.toledo_integral), (Some(a), Some(b)) if a == b)
    }
}

//! Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero on any failure.
//!
//! The full census (`n <= 1001`) runs by default; set `CHYP_SKIP_CENSUS=1` to skip it.

#[path = "../../chyp/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use chyp::bisector::{cotranchal_slack, transversality_oracle};
use chyp::hermitian::{dist, C64};
use chyp::isometry::{restrict_to_slice, ParabolicKind, SliceTag};
use chyp::potential::{check_dp, toledo_by_integral};
use chyp::quadrangle::{evaluate, toledo, Params};
use chyp::triangle::{
    classify_triangle, cplane_area, from_invariants, holonomy, holonomy_trace_from_middles, invariants, TriangleInv,
};
use chyp_sweep::census::{run_census, verdict, FULL_CENSUS_N_MAX};
use chyp_sweep::tables::{parse_table, verify_tables, EXTREMES_CSV, REAL_HYPERBOLIC_N_MAX};
use chyp_sweep::{run_sweep, SweepConfig};
use common::{
    random_ccw_transversal, random_negative, random_patch, random_triangle_inv, random_ultraparallel_triple, rng,
    scrambled_triangle, simpson_arclength,
};
use num_rational::Ratio;
use rand::Rng;

enum Verdict {
    Pass,
    Fail,
    Skip,
}

struct Line {
    id: &'static str,
    verdict: Verdict,
    detail: String,
}

fn judge(id: &'static str, ok: bool, detail: String) -> Line {
    Line { id, verdict: if ok { Verdict::Pass } else { Verdict::Fail }, detail }
}

fn timed(lines: &mut Vec<Line>, f: impl FnOnce() -> Vec<Line>) {
    let start = Instant::now();
    let new = f();
    let secs = start.elapsed().as_secs_f64();
    for l in new {
        let tag = match l.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        };
        println!("{tag} [{}] {} ({secs:.1}s)", l.id, l.detail);
        lines.push(l);
    }
}

fn small_n_pattern() -> Vec<Line> {
    let cfg = SweepConfig { n_min: 3, n_max: 12, ..SweepConfig::default() };
    let out = run_sweep(&cfg).expect("sweep");
    let counts = &out.summary.per_n_counts;
    let ok = (3..=12).all(|n| (counts[&n] > 0) == (n == 9 || n == 10)) && out.violations.is_empty();
    let shown: Vec<String> = counts.iter().filter(|(_, &c)| c > 0).map(|(n, c)| format!("n={n}: {c}")).collect();
    vec![judge("1 small-n pattern", ok, format!("accepted for n in [3,12]: {}", shown.join(", ")))]
}

fn tables_and_n101() -> Vec<Line> {
    let report = verify_tables(&SweepConfig::default()).expect("tables");
    let (n101_diffs, table_diffs): (Vec<&String>, Vec<&String>) =
        report.diffs.iter().partition(|d| d.starts_with("n = 101"));
    let ok2 = table_diffs.is_empty()
        && report.extremes_rows == 17
        && report.real_hyperbolic_rows == 55
        && report.real_hyperbolic_filtered == 55;
    let mut detail2 = format!(
        "17 extreme rows and 55 real-hyperbolic rows re-derived; filter 3e >= chi over n <= {REAL_HYPERBOLIC_N_MAX} gives {} rows",
        report.real_hyperbolic_filtered
    );
    for d in table_diffs.iter().take(5) {
        detail2.push_str(&format!("; {d}"));
    }
    let expected: BTreeMap<i64, i64> = [(-96, -580), (-92, -572), (-88, -564), (-84, -556), (-80, -548)].into();
    let groups_ok = report.n101_groups.len() == expected.len()
        && report
            .n101_groups
            .iter()
            .all(|(e, (_, taus))| expected.get(e).is_some_and(|t| taus.len() == 1 && taus.contains(t)));
    let ok3 = n101_diffs.is_empty() && groups_ok && report.n101_rows == 74;
    let groups: Vec<String> = report
        .n101_groups
        .iter()
        .map(|(e, (c, t))| format!("e={e}: {c} (tau {})", Ratio::new(*t.iter().next().unwrap(), 3)))
        .collect();
    let mut detail3 = format!("accepted set equals the 74 printed tuples; {}", groups.join(", "));
    for d in n101_diffs.iter().take(5) {
        detail3.push_str(&format!("; {d}"));
    }
    vec![judge("2 tables", ok2, detail2), judge("3 n = 101 census", ok3, detail3)]
}

fn laws_to_200() -> Vec<Line> {
    let cfg = SweepConfig { n_min: 3, n_max: 200, verify_identities: true, ..SweepConfig::default() };
    let out = run_sweep(&cfg).expect("sweep");
    let ok = out.violations.is_empty() && out.tuple_errors.is_empty() && out.summary.totals_consistent();
    let mut detail = format!(
        "{} accepted tuples: laws, identities, Toledo integral, elliptic triangles, lambda = 0, o_y = f where o_z = 0; \
         {} violations, {} evaluation errors, {} tuples failing only Q7",
        out.summary.total_accepted,
        out.violations.len(),
        out.tuple_errors.len(),
        out.summary.q7_only.len()
    );
    for v in out.violations.iter().take(5) {
        detail.push_str(&format!("; {v}"));
    }
    vec![judge("4 laws n <= 200", ok, detail)]
}

fn full_census() -> Vec<Line> {
    if std::env::var_os("CHYP_SKIP_CENSUS").is_some() {
        return vec![Line { id: "5 census n <= 1001", verdict: Verdict::Skip, detail: "CHYP_SKIP_CENSUS is set".into() }];
    }
    let dir = std::env::temp_dir().join(format!("chyp-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("census.json");
    let cfg = SweepConfig { n_min: 3, n_max: FULL_CENSUS_N_MAX, ..SweepConfig::default() };
    let state = run_census(&cfg, &path, |_, _| {}).expect("census");
    let _ = std::fs::remove_dir_all(&dir);
    let s = &state.summary;
    let v = verdict(s, cfg.n_min, cfg.n_max).expect("full range");
    let coverage = v.empty_ns_above_12.is_empty();
    let clean = state.violations.is_empty();
    let mut detail = format!(
        "total {} (expected {}), integer tau {} (expected {}), marginal {}, near misses {}, Q7-only {}, \
         empty n in [13,1001]: {:?}, violations {}, {:.0}s",
        s.total_accepted,
        v.expected_total,
        s.integer_tau_count,
        v.expected_integer_tau,
        s.marginal_count,
        s.near_miss_count,
        s.q7_only.len(),
        v.empty_ns_above_12,
        state.violations.len(),
        s.wall_time.as_secs_f64()
    );
    if !v.counts_match {
        detail.push_str(&format!(
            "; gap {} / {} against {} flagged marginal or near-miss tuples: {:?}",
            s.total_accepted.abs_diff(v.expected_total),
            s.integer_tau_count.abs_diff(v.expected_integer_tau),
            v.marginal_budget,
            s.marginal.iter().chain(s.near_misses.iter()).take(40).collect::<Vec<_>>()
        ));
    }
    for e in state.violations.iter().take(5) {
        detail.push_str(&format!("; {e}"));
    }
    let ok = (v.counts_match || v.explained_by_marginal) && coverage && clean;
    vec![judge("5 census n <= 1001", ok, detail)]
}

fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

fn holonomy_traces() -> Vec<Line> {
    let mut r = rng(101);
    let (mut worst3, mut worst_abs) = (0.0f64, 0.0f64);
    let samples = 10_000;
    for _ in 0..samples {
        let inv = random_triangle_inv(&mut r, 4.0);
        let t = scrambled_triangle(&mut r, &inv);
        let phi = holonomy(&t);
        let direct = phi.trace();
        worst3 = worst3.max(rel_err(direct, holonomy_trace_from_middles(&t))).max(rel_err(direct, invariants(&t).holonomy_trace()));
        let restricted = restrict_to_slice(&phi, &t.g[0]).expect("stabilizes").trace().norm();
        worst_abs = worst_abs.max((restricted - inv.holonomy_abs_trace()).abs() / restricted.max(1.0));
    }
    vec![
        judge("6a holonomy trace three ways", worst3 < 1e-9, format!("{samples} triangles, max relative error {worst3:.2e}")),
        judge("6b |tr psi| vs restriction", worst_abs < 1e-9, format!("{samples} triangles, max relative error {worst_abs:.2e}")),
    ]
}

fn criterion_vs_oracle() -> Vec<Line> {
    let mut r = rng(102);
    let (mut compared, mut disagree) = (0, 0);
    while compared < 1000 {
        let [g, g1, g2] = random_ultraparallel_triple(&mut r);
        let slack = cotranchal_slack(&g, &g1, &g2).expect("slack");
        if slack.abs() <= 1e-4 {
            continue;
        }
        if (slack > 0.0) != transversality_oracle(&g, &g1, &g2, 48).expect("oracle") {
            disagree += 1;
        }
        compared += 1;
    }
    vec![judge("6c transversality criterion vs oracle", disagree == 0, format!("{compared} samples with |slack| > 1e-4, {disagree} disagreements"))]
}

fn cplane_rotation() -> Vec<Line> {
    let mut r = rng(103);
    let (mut done, mut worst) = (0, 0.0f64);
    while done < 1000 {
        let t: [f64; 3] = [r.gen_range(1.01..4.0), r.gen_range(1.01..4.0), r.gen_range(1.01..4.0)];
        let e0 = (t.iter().map(|x| x * x).sum::<f64>() - 1.0) / (2.0 * t[0] * t[1] * t[2]);
        if e0 >= 1.0 {
            continue;
        }
        let inv = TriangleInv { t12: t[0], t23: t[1], t31: t[2], eps: C64::new(e0, -(1.0 - e0 * e0).sqrt()) };
        if !inv.is_transversal(1e-9) {
            continue;
        }
        let tri = from_invariants(&inv).expect("realizable");
        let area = cplane_area(&tri).expect("area");
        let angle = classify_triangle(&tri, 1e-8).ok().and_then(|c| c.rotation_angle).unwrap_or(f64::NAN);
        worst = worst.max((angle + 2.0 * area).abs());
        done += 1;
    }
    vec![judge("6d rotation = -2 area on C-plane triangles", worst < 1e-8, format!("{done} triangles, max error {worst:.2e}"))]
}

fn potential_exterior_derivative() -> Vec<Line> {
    let mut r = rng(104);
    let samples = [(0.0, 0.0), (0.3, -0.4), (-0.5, 0.2)];
    let (mut worst, mut ratio_lo, mut ratio_hi, mut bad) = (0.0f64, f64::INFINITY, 0.0f64, 0);
    let cases = 1000;
    for _ in 0..cases {
        let patch = random_patch(&mut r);
        let centre = random_negative(&mut r, 0.8);
        let r1 = check_dp(&centre, &patch, &samples, 1e-3).expect("dP");
        let r2 = check_dp(&centre, &patch, &samples, 5e-4).expect("dP");
        worst = worst.max(r1);
        if r1 > 1e-9 {
            let ratio = r1 / r2;
            ratio_lo = ratio_lo.min(ratio);
            ratio_hi = ratio_hi.max(ratio);
            if !(3.5..=4.5).contains(&ratio) {
                bad += 1;
            }
        }
    }
    let ok = worst < 1e-5 && bad == 0;
    vec![judge(
        "6e dP = omega",
        ok,
        format!("{cases} patches, max residual {worst:.2e} at h = 1e-3, Richardson ratio in [{ratio_lo:.3}, {ratio_hi:.3}]"),
    )]
}

fn arclength() -> Vec<Line> {
    let mut r = rng(105);
    let (mut done, mut worst) = (0, 0.0f64);
    while done < 1000 {
        let (p, q) = (random_negative(&mut r, 0.95), random_negative(&mut r, 0.95));
        let d = dist(&p, &q).expect("negative points");
        if d < 1e-3 {
            continue;
        }
        worst = worst.max((simpson_arclength(&p, &q, 400) - d).abs());
        done += 1;
    }
    vec![judge("6f Simpson arclength vs distance", worst < 1e-6, format!("{done} pairs, max error {worst:.2e}"))]
}

fn toledo_integrals() -> Vec<Line> {
    let mut ns: Vec<i64> = (3..=REAL_HYPERBOLIC_N_MAX).collect();
    ns.extend(parse_table(EXTREMES_CSV).expect("table").iter().map(|row| row.n));
    ns.push(101);
    ns.sort_unstable();
    ns.dedup();
    let cfg = SweepConfig::default();
    let (mut checked, mut bad) = (0, Vec::new());
    for n in ns {
        for params in Params::enumerate(n) {
            let (report, data) = evaluate(params, cfg.margin, cfg.marginal_band);
            if !report.accepted {
                continue;
            }
            let (t, _) = toledo(&params);
            let want = Ratio::new(2 * t - 3 * n, 3);
            match data.map(|d| toledo_by_integral(&d)) {
                Some(Ok(got)) if got == want => {}
                other => bad.push(format!("{params:?}: {other:?}")),
            }
            checked += 1;
        }
    }
    vec![judge(
        "6g Toledo integral = (2t-3n)/3",
        bad.is_empty(),
        format!("{checked} accepted tuples of criteria 1-3, {} mismatches {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )]
}

fn ccw_holonomy_never_trivial() -> Vec<Line> {
    let mut r = rng(106);
    let cases = 100_000;
    let (mut identity, mut r_parabolic, mut other_err) = (0, 0, 0);
    let mut tags: BTreeMap<&'static str, usize> = BTreeMap::new();
    for _ in 0..cases {
        let inv = random_ccw_transversal(&mut r, 4.0, 1e-9);
        let t = scrambled_triangle(&mut r, &inv);
        let phi = holonomy(&t);
        let Ok(a) = restrict_to_slice(&phi, &t.g[0]) else {
            other_err += 1;
            continue;
        };
        let class = chyp::isometry::classify(&a, 1e-8);
        match (class.tag, class.parabolic) {
            (SliceTag::Identity, _) => identity += 1,
            (SliceTag::Parabolic, Some(ParabolicKind::R)) => r_parabolic += 1,
            _ => {}
        }
        *tags
            .entry(match class.tag {
                SliceTag::Elliptic => "elliptic",
                SliceTag::Parabolic => "parabolic",
                SliceTag::Hyperbolic => "hyperbolic",
                SliceTag::Identity => "identity",
            })
            .or_default() += 1;
    }
    vec![judge(
        "6h CCW transversal holonomy never trivial or R-parabolic",
        identity == 0 && r_parabolic == 0 && other_err == 0,
        format!("{cases} triangles: {tags:?}, identity {identity}, R-parabolic {r_parabolic}, errors {other_err}"),
    )]
}

fn main() {
    let mut lines = Vec::new();
    timed(&mut lines, small_n_pattern);
    timed(&mut lines, tables_and_n101);
    timed(&mut lines, laws_to_200);
    timed(&mut lines, full_census);
    timed(&mut lines, holonomy_traces);
    timed(&mut lines, criterion_vs_oracle);
    timed(&mut lines, cplane_rotation);
    timed(&mut lines, potential_exterior_derivative);
    timed(&mut lines, arclength);
    timed(&mut lines, toledo_integrals);
    timed(&mut lines, ccw_holonomy_never_trivial);
    let failed = lines.iter().filter(|l| matches!(l.verdict, Verdict::Fail)).count();
    println!("acceptance: {} criteria, {failed} failed", lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

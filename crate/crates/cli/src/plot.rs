//! Static SVG point plots of a simulation report: mean SEP and mean number
//! of signs per sub-scenario, with ±1.96 Monte Carlo standard error bars.

use std::fmt::Write;

use signgate::simulation::{Procedure, ScenarioReport};

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 55.0;
const COLORS: [&str; 5] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"];

struct Panel<'a> {
    title: &'a str,
    x0: f64,
    value: fn(&signgate::simulation::ProcedureSummary) -> (f64, f64),
    reference: Option<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn procedures(reports: &[ScenarioReport]) -> Vec<Procedure> {
    let mut ps: Vec<Procedure> = reports
        .iter()
        .flat_map(|r| r.rows.iter().map(|s| s.procedure))
        .collect();
    ps.sort();
    ps.dedup();
    ps
}

fn draw_panel(out: &mut String, panel: &Panel, reports: &[ScenarioReport], procs: &[Procedure]) {
    let mut hi: f64 = panel.reference.unwrap_or(0.0);
    for r in reports {
        for s in &r.rows {
            let (v, se) = (panel.value)(s);
            hi = hi.max(v + 1.96 * se);
        }
    }
    let hi = if hi > 0.0 { hi * 1.08 } else { 1.0 };
    let (left, top) = (panel.x0 + MARGIN, 40.0);
    let (w, h) = (PANEL_W - MARGIN - 10.0, PANEL_H - 40.0 - MARGIN);
    let y_of = |v: f64| top + h * (1.0 - v / hi);
    let n = reports.len().max(1) as f64;
    let slot = w / n;

    writeln!(
        out,
        r#"<text x="{:.1}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
        left + w / 2.0,
        panel.title
    )
    .unwrap();
    writeln!(out, r#"<rect x="{left:.1}" y="{top:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="dimgray"/>"#).unwrap();
    for k in 0..=4 {
        let v = hi * k as f64 / 4.0;
        let y = y_of(v);
        writeln!(out, r#"<line x1="{:.1}" x2="{left:.1}" y1="{y:.1}" y2="{y:.1}" stroke="dimgray"/><text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{:.3}</text>"#, left - 4.0, left - 6.0, y + 3.0, v).unwrap();
    }
    if let Some(r) = panel.reference {
        let y = y_of(r);
        writeln!(out, r#"<line x1="{left:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="gray" stroke-dasharray="4 3"/>"#, left + w).unwrap();
    }
    for (i, rep) in reports.iter().enumerate() {
        let cx = left + slot * (i as f64 + 0.5);
        let label = rep
            .scenario_id
            .rsplit('/')
            .next()
            .unwrap_or(&rep.scenario_id);
        let label = label.get(..12).unwrap_or(label);
        writeln!(
            out,
            r#"<text x="{cx:.1}" y="{:.1}" font-size="9" text-anchor="middle">{}</text>"#,
            top + h + 14.0,
            escape(label)
        )
        .unwrap();
        for s in &rep.rows {
            let j = procs.iter().position(|p| *p == s.procedure).unwrap_or(0);
            let x = cx + (j as f64 - (procs.len() as f64 - 1.0) / 2.0) * slot * 0.12;
            let (v, se) = (panel.value)(s);
            let color = COLORS[j % COLORS.len()];
            writeln!(
                out,
                r#"<line x1="{x:.1}" x2="{x:.1}" y1="{:.1}" y2="{:.1}" stroke="{color}"/><circle cx="{x:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                y_of((v - 1.96 * se).max(0.0)),
                y_of(v + 1.96 * se),
                y_of(v)
            )
            .unwrap();
        }
    }
}

pub fn report_svg(title: &str, alpha_s: f64, reports: &[ScenarioReport]) -> String {
    let procs = procedures(reports);
    let width = 2.0 * PANEL_W;
    let height = PANEL_H + 30.0;
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    let sep_title = format!("{}: mean SEP", escape(title));
    let panels = [
        Panel {
            title: &sep_title,
            x0: 0.0,
            value: |s| (s.mean_sep, s.se_sep),
            reference: Some(alpha_s),
        },
        Panel {
            title: "mean signs inferred",
            x0: PANEL_W,
            value: |s| (s.mean_signs, s.se_signs),
            reference: None,
        },
    ];
    for p in &panels {
        draw_panel(&mut out, p, reports, &procs);
    }
    for (j, p) in procs.iter().enumerate() {
        let x = MARGIN + 80.0 * j as f64;
        let color = COLORS[j % COLORS.len()];
        writeln!(out, r#"<circle cx="{x:.1}" cy="{:.1}" r="4" fill="{color}"/><text x="{:.1}" y="{:.1}" font-size="11">{p}</text>"#, PANEL_H + 12.0, x + 8.0, PANEL_H + 16.0).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

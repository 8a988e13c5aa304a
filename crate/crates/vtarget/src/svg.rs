//! Engagement picture as SVG.
//!
//! Output depends only on the inputs: fixed element order, fixed number
//! formatting, no timestamps.

use std::fmt::Write;

use vtarget_core::{Assignment, CandidateSet, CostTensor, Point2, Scenario};

const WIDTH: f64 = 800.0;
const PAD: f64 = 30.0;

const PURSUER: &str = "#1f5fbf";
const EVADER: &str = "#c0392b";
const VT: &str = "#1e8449";

struct Frame {
    x_min: f64,
    y_max: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Point2]) -> Self {
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            x_min = x_min.min(p.x);
            x_max = x_max.max(p.x);
            y_min = y_min.min(p.y);
            y_max = y_max.max(p.y);
        }
        let span = (x_max - x_min).max(y_max - y_min).max(1e-9);
        let scale = (WIDTH - 2.0 * PAD) / (x_max - x_min).max(span * 0.25);
        let height = ((y_max - y_min).max(span * 0.25) * scale + 2.0 * PAD).round();
        Self {
            x_min,
            y_max,
            scale,
            height,
        }
    }

    fn x(&self, x: f64) -> String {
        num((x - self.x_min) * self.scale + PAD)
    }

    fn y(&self, y: f64) -> String {
        num((self.y_max - y) * self.scale + PAD)
    }

    fn len(&self, d: f64) -> String {
        num(d * self.scale)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn line(out: &mut String, f: &Frame, a: Point2, b: Point2, class: &str, style: &str) {
    let _ = writeln!(
        out,
        r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
        f.x(a.x),
        f.y(a.y),
        f.x(b.x),
        f.y(b.y)
    );
}

/// Renders the scenario, the candidate lattice and the chosen plan.
pub fn render(
    scenario: &Scenario,
    candidates: &CandidateSet,
    tensor: &CostTensor,
    assignment: &Assignment,
) -> String {
    let solutions: Vec<_> = assignment
        .choices
        .iter()
        .enumerate()
        .map(|(i, c)| tensor.solution(i, c.evader, c.candidate))
        .collect();
    let horizon = solutions.iter().map(|s| s.t_f).fold(0.0, f64::max);
    let evader_ends: Vec<Point2> = scenario
        .evaders
        .iter()
        .map(|e| e.position + e.velocity() * horizon)
        .collect();

    let r = &scenario.region;
    let mut extent = vec![Point2::new(r.x_min, r.y_min), Point2::new(r.x_max, r.y_max)];
    extent.extend(scenario.pursuers.iter().map(|p| p.position));
    extent.extend(scenario.evaders.iter().map(|e| e.position));
    extent.extend(evader_ends.iter().copied());
    for s in &solutions {
        extent.push(s.intercept);
        let c = &s.circle;
        extent.push(c.origin + Point2::new(c.radius, c.radius));
        extent.push(c.origin - Point2::new(c.radius, c.radius));
    }
    let f = Frame::fit(&extent);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(WIDTH),
        num(f.height),
        num(WIDTH),
        num(f.height)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<rect class="region" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#888" stroke-dasharray="4 3"/>"##,
        f.x(r.x_min),
        f.y(r.y_max),
        f.len(r.x_max - r.x_min),
        f.len(r.y_max - r.y_min)
    );
    for p in candidates.points() {
        let _ = writeln!(
            out,
            r##"<circle class="candidate" cx="{}" cy="{}" r="1.5" fill="#999" fill-opacity="0.35"/>"##,
            f.x(p.x),
            f.y(p.y)
        );
    }
    for s in &solutions {
        if s.circle.radius > 0.0 {
            let _ = writeln!(
                out,
                r##"<circle class="apollonius" cx="{}" cy="{}" r="{}" fill="none" stroke="#b7950b" stroke-opacity="0.6"/>"##,
                f.x(s.circle.origin.x),
                f.y(s.circle.origin.y),
                f.len(s.circle.radius)
            );
        }
    }
    for (e, end) in scenario.evaders.iter().zip(&evader_ends) {
        line(
            &mut out,
            &f,
            e.position,
            *end,
            "evader-course",
            &format!(r#"stroke="{EVADER}" stroke-dasharray="6 4""#),
        );
    }
    for (p, s) in scenario.pursuers.iter().zip(&solutions) {
        let vt = s.circle.vt;
        line(&mut out, &f, p.position, vt, "path-phase1", &format!(r#"stroke="{PURSUER}" stroke-width="1.5""#));
        line(&mut out, &f, vt, s.intercept, "path-phase2", &format!(r#"stroke="{PURSUER}" stroke-width="1.5""#));
    }
    for &k in &assignment.active_vts {
        let p = candidates[k];
        let _ = writeln!(
            out,
            r#"<circle class="vt-active" cx="{}" cy="{}" r="6" fill="none" stroke="{VT}" stroke-width="2.5"/>"#,
            f.x(p.x),
            f.y(p.y)
        );
    }
    for s in &solutions {
        let (x, y) = (f.x(s.intercept.x), f.y(s.intercept.y));
        let _ = writeln!(
            out,
            r#"<path class="intercept" d="M {x} {y} m -5 -5 l 10 10 m 0 -10 l -10 10" stroke="black" stroke-width="1.5"/>"#
        );
    }
    for p in &scenario.pursuers {
        let _ = writeln!(
            out,
            r#"<circle class="pursuer" cx="{}" cy="{}" r="5" fill="{PURSUER}"><title>pursuer {}</title></circle>"#,
            f.x(p.position.x),
            f.y(p.position.y),
            p.id
        );
    }
    for e in &scenario.evaders {
        let _ = writeln!(
            out,
            r#"<rect class="evader" x="{}" y="{}" width="10" height="10" transform="translate(-5 -5)" fill="{EVADER}"><title>evader {}</title></rect>"#,
            f.x(e.position.x),
            f.y(e.position.y),
            e.id
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="13">{}/{} virtual targets, cost {}</text>"#,
        num(PAD),
        assignment.active_vts.len(),
        candidates.len(),
        num(assignment.total_cost)
    );
    out.push_str("</svg>\n");
    out
}

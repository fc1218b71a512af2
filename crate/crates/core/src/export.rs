//! Tabular and SVG renderings of a hybrid arc.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;

use crate::solver::{HybridArc, JumpEvent};

/// One row of the dense time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRow {
    pub t: f64,
    pub j: usize,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub q1: u8,
    pub q2: u8,
    pub q3: u8,
    pub q4: u8,
}

impl SampleRow {
    fn new(t: f64, j: usize, state: &crate::state::HybridState) -> Self {
        let [x1, x2, x3] = state.x();
        let q = state.q();
        Self {
            t,
            j,
            x1,
            x2,
            x3,
            q1: q.bit(1),
            q2: q.bit(2),
            q3: q.bit(3),
            q4: q.bit(4),
        }
    }

    pub fn x(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

/// Grid samples every `spacing` plus a pre- and post-jump row for every jump.
///
/// Grid points that coincide with a jump instant are dropped so each jump is
/// represented by exactly its two rows.
pub fn dense_samples(arc: &HybridArc, spacing: f64) -> Vec<SampleRow> {
    assert!(spacing > 0.0, "sample spacing must be positive");
    let mut rows = Vec::new();
    let mut k = 0_usize;
    let grid = |k: usize| k as f64 * spacing;
    let last = arc.segments.len() - 1;
    let mut jump_at: Option<f64> = None;

    for (n, seg) in arc.segments.iter().enumerate() {
        let closes = |t: f64| if n == last && seg.jump.is_none() { t <= seg.end.t } else { t < seg.end.t };
        while closes(grid(k)) {
            let t = grid(k);
            k += 1;
            if t < seg.start.t || jump_at == Some(t) {
                continue;
            }
            rows.push(SampleRow::new(t, seg.start.j, &seg.state_at(t)));
        }
        if let Some(rec) = seg.jump {
            let t = seg.end.t;
            let post = seg.end_state.with_logic(seg.end_state.q().flipped(rec.index));
            rows.push(SampleRow::new(t, seg.end.j, &seg.end_state));
            rows.push(SampleRow::new(t, seg.end.j + 1, &post));
            jump_at = Some(t);
        }
    }
    rows
}

pub fn write_samples_csv<W: io::Write>(rows: &[SampleRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JumpRow {
    t: f64,
    j: usize,
    index: usize,
    active: String,
    pre_q: String,
    post_q: String,
}

/// Jump-event log: time, post-jump `j`, flipped index, active set, logic before/after.
pub fn write_jumps_csv<W: io::Write>(jumps: impl IntoIterator<Item = JumpEvent>, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in jumps {
        w.serialize(JumpRow {
            t: e.time.t,
            j: e.time.j,
            index: e.index,
            active: e.active.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
            pre_q: e.pre.q().to_string(),
            post_q: e.post.q().to_string(),
        })?;
    }
    w.flush()?;
    Ok(())
}

const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];
const LABELS: [&str; 3] = ["x1 TIMP-2", "x2 MT1-MMP", "x3 MMP-2"];

fn bounds(rows: &[SampleRow]) -> f64 {
    rows.iter()
        .flat_map(|r| r.x())
        .fold(0.0_f64, f64::max)
        .max(1e-9)
}

/// Concentrations against time, one polyline per protein.
pub fn timeseries_svg(rows: &[SampleRow], title: &str) -> String {
    let (w, h, pad) = (720.0, 360.0, 48.0);
    let t_end = rows.last().map_or(1.0, |r| r.t).max(1e-9);
    let x_max = bounds(rows) * 1.05;
    let px = |t: f64| pad + (w - 2.0 * pad) * t / t_end;
    let py = |x: f64| h - pad - (h - 2.0 * pad) * x / x_max;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{pad}" y="20">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{pad},{top} V{bot} H{right}" stroke="black" fill="none"/>"#,
        top = pad,
        bot = h - pad,
        right = w - pad
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}">t = {t_end:.3}</text>"#, w - pad - 60.0, h - pad + 20.0);
    let _ = writeln!(s, r#"<text x="4" y="{}">{x_max:.2}</text>"#, pad + 4.0);
    for c in 0..3 {
        let pts: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.t), py(r.x()[c])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" stroke="{}" fill="none" stroke-width="1.5"/>"#,
            pts.join(" "),
            COLORS[c]
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
            w - pad - 110.0,
            pad + 16.0 * c as f64,
            COLORS[c],
            LABELS[c]
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Oblique 3-D projection of the orbit in x-space; `*` marks the initial point.
pub fn phase_portrait_svg(rows: &[SampleRow], title: &str) -> String {
    let (w, h) = (520.0, 520.0);
    let scale = 340.0 / (bounds(rows) * 1.05);
    let (ox, oy) = (150.0, 400.0);
    // x1 to the right, x3 up, x2 receding at 30 degrees with half length.
    let (cx, cy) = (0.5 * 30f64.to_radians().cos(), 0.5 * 30f64.to_radians().sin());
    let project = |x: [f64; 3]| (ox + scale * (x[0] + cx * x[1]), oy - scale * (x[2] + cy * x[1]));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="12" y="20">{}</text>"#, escape(title));
    let axis_len = 1.0 / (scale / 340.0);
    for (c, name) in ["x1", "x2", "x3"].iter().enumerate() {
        let mut tip = [0.0; 3];
        tip[c] = axis_len;
        let (x0, y0) = project([0.0; 3]);
        let (x1, y1) = project(tip);
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="gray"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
            x1 + 4.0,
            y1 - 4.0
        );
    }
    let pts: Vec<String> = rows
        .iter()
        .map(|r| {
            let (x, y) = project(r.x());
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" stroke="{}" fill="none" stroke-width="1.2"/>"#,
        pts.join(" "),
        COLORS[0]
    );
    if let Some(first) = rows.first() {
        let (x, y) = project(first.x());
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-size="22" text-anchor="middle" fill="{}">*</text>"#,
            y + 8.0,
            COLORS[1]
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::preset;
    use crate::solver::simulate;

    fn run(id: &str) -> HybridArc {
        let cfg = preset(id).unwrap();
        simulate(&cfg.initial_state().unwrap(), &cfg.params, &cfg.solver).unwrap().arc
    }

    #[test]
    fn two_rows_per_jump() {
        let arc = run("s1");
        let rows = dense_samples(&arc, 0.01);
        let jumps: Vec<_> = arc.jumps().collect();
        let mut pairs = 0;
        for w in rows.windows(2) {
            if w[0].t == w[1].t && w[0].j + 1 == w[1].j {
                let ev = &jumps[pairs];
                assert_eq!(w[1].t, ev.time.t);
                assert_eq!(w[1].j, ev.time.j);
                assert_eq!(w[0].x(), w[1].x());
                let diff = [w[0].q1 != w[1].q1, w[0].q2 != w[1].q2, w[0].q3 != w[1].q3, w[0].q4 != w[1].q4];
                assert_eq!(diff.iter().filter(|d| **d).count(), 1);
                pairs += 1;
            }
        }
        assert_eq!(pairs, jumps.len());
        for ev in &jumps {
            let at = rows.iter().filter(|r| r.t == ev.time.t).count();
            let same_instant = jumps.iter().filter(|e| e.time.t == ev.time.t).count();
            assert_eq!(at, 2 * same_instant);
        }
        // Rows are ordered in hybrid time.
        assert!(rows.windows(2).all(|w| (w[0].t, w[0].j) <= (w[1].t, w[1].j)));
        assert_eq!(rows.last().unwrap().t, 100.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let arc = run("s3");
        let rows = dense_samples(&arc, 1.0);
        let mut buf = Vec::new();
        write_samples_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,j,x1,x2,x3,q1,q2,q3,q4"));
        assert_eq!(lines.count(), 101);

        let mut buf = Vec::new();
        write_jumps_csv(run("s1").jumps(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,j,index,active,pre_q,post_q\n0.0,1,1,1 2,1101,0101\n"), "{text}");
    }

    #[test]
    fn svg_marks_initial_point() {
        let rows = dense_samples(&run("s5"), 0.05);
        let svg = phase_portrait_svg(&rows, "fig-s5");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(">*</text>"));
        assert!(timeseries_svg(&rows, "a < b").contains("a &lt; b"));
    }
}

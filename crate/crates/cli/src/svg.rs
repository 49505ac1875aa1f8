//! Static SVG plot: purity and concurrence against ωt in two stacked panels,
//! quantum curves dashed and hybrid curves solid, one colour per κ.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::sweep::{RowMode, SweepRow};

const WIDTH: f64 = 820.0;
const PANEL_HEIGHT: f64 = 260.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const GAP: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const DASH: &str = "7 4";

/// One sweep and the coupling it was run at.
pub struct Series<'a> {
    pub kappa: f64,
    pub rows: &'a [SweepRow],
}

fn pi_label(k: u32) -> String {
    match k {
        0 => "0".into(),
        1 => "π".into(),
        k => format!("{k}π"),
    }
}

struct Panel {
    top: f64,
    x_max: f64,
}

impl Panel {
    fn x(&self, t: f64) -> f64 {
        LEFT + (WIDTH - LEFT - RIGHT) * t / self.x_max
    }

    fn y(&self, v: f64) -> f64 {
        self.top + PANEL_HEIGHT * (1.0 - v.clamp(0.0, 1.0))
    }

    fn frame(&self, out: &mut String, title: &str) {
        let (x0, x1) = (self.x(0.0), self.x(self.x_max));
        let (y0, y1) = (self.y(0.0), self.y(1.0));
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{PANEL_HEIGHT:.2}" fill="none" stroke="#000"/>"##,
            x1 - x0
        );
        for i in 0..=4 {
            let v = i as f64 / 4.0;
            let y = self.y(v);
            let _ =
                writeln!(out, r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="#000"/>"##, x0 - 5.0);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{v:.2}</text>"#,
                x0 - 8.0,
                y + 4.0
            );
        }
        let periods = (self.x_max / PI).floor() as u32;
        let step = periods.div_ceil(8).max(1);
        for k in (0..=periods).step_by(step as usize) {
            let x = self.x(k as f64 * PI);
            let _ =
                writeln!(out, r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/>"##, y0 + 5.0);
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
                y0 + 19.0,
                pi_label(k)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">ωt</text>"#,
            (x0 + x1) / 2.0,
            y0 + 38.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 {:.2} {:.2})">{title}</text>"#,
            LEFT - 48.0,
            (y0 + y1) / 2.0,
            LEFT - 48.0,
            (y0 + y1) / 2.0
        );
    }

    fn curve(&self, out: &mut String, rows: &[SweepRow], mode: RowMode, colour: &str, value: fn(&SweepRow) -> f64) {
        let points: Vec<String> = rows
            .iter()
            .filter(|r| r.mode == mode)
            .map(|r| format!("{:.2},{:.2}", self.x(r.omega_t), self.y(value(r))))
            .collect();
        if points.is_empty() {
            return;
        }
        let dash = match mode {
            RowMode::Quantum => format!(r#" stroke-dasharray="{DASH}""#),
            RowMode::Hybrid => String::new(),
        };
        let _ = writeln!(
            out,
            r#"<polyline class="{}" fill="none" stroke="{colour}" stroke-width="1.5"{dash} points="{}"/>"#,
            mode.as_str(),
            points.join(" ")
        );
    }
}

/// Renders the sweeps. Only the values in `rows` are drawn.
pub fn render_svg(series: &[Series<'_>]) -> String {
    let x_max = series.iter().flat_map(|s| s.rows.iter().map(|r| r.omega_t)).fold(0.0f64, f64::max);
    let x_max = if x_max > 0.0 { x_max } else { 1.0 };
    let height = TOP + 2.0 * PANEL_HEIGHT + GAP + 50.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);

    let panels = [
        (Panel { top: TOP, x_max }, "purity", (|r: &SweepRow| r.purity) as fn(&SweepRow) -> f64),
        (Panel { top: TOP + PANEL_HEIGHT + GAP, x_max }, "concurrence", |r: &SweepRow| r.concurrence),
    ];
    for (panel, title, value) in &panels {
        let _ = writeln!(out, r#"<g id="{title}">"#);
        panel.frame(&mut out, title);
        for (i, s) in series.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            for mode in [RowMode::Quantum, RowMode::Hybrid] {
                panel.curve(&mut out, s.rows, mode, colour, *value);
            }
        }
        let _ = writeln!(out, "</g>");
    }

    // legend
    let lx = WIDTH - RIGHT + 20.0;
    let mut ly = TOP + 10.0;
    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="3"/>"#,
            lx + 24.0
        );
        let _ =
            writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12">κ = {}</text>"#, lx + 30.0, ly + 4.0, s.kappa);
        ly += 20.0;
    }
    ly += 10.0;
    for (mode, dash) in [(RowMode::Quantum, format!(r#" stroke-dasharray="{DASH}""#)), (RowMode::Hybrid, String::new())]
    {
        let _ = writeln!(
            out,
            r##"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="#000" stroke-width="1.5"{dash}/>"##,
            lx + 24.0
        );
        let _ =
            writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#, lx + 30.0, ly + 4.0, mode.as_str());
        ly += 20.0;
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hvh_core::spin_oscillator::Rsu;

    fn rows() -> Vec<SweepRow> {
        (0..5)
            .flat_map(|k| {
                let t = k as f64 * PI;
                [RowMode::Quantum, RowMode::Hybrid].map(|mode| SweepRow {
                    omega_t: t,
                    mode,
                    rsu: Rsu::new(0.0, 0.0, 0.0),
                    purity: 1.0 - 0.1 * k as f64,
                    concurrence: 0.2 * k as f64,
                    oracle: None,
                })
            })
            .collect()
    }

    #[test]
    fn two_panels_with_dashed_quantum_curves() {
        let data = rows();
        let svg = render_svg(&[Series { kappa: 0.25, rows: &data }, Series { kappa: 1.0, rows: &data }]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains(r#"<g id="purity">"#) && svg.contains(r#"<g id="concurrence">"#));
        let quantum: Vec<&str> = svg.lines().filter(|l| l.contains(r#"class="quantum""#)).collect();
        let hybrid: Vec<&str> = svg.lines().filter(|l| l.contains(r#"class="hybrid""#)).collect();
        assert_eq!(quantum.len(), 4);
        assert_eq!(hybrid.len(), 4);
        assert!(quantum.iter().all(|l| l.contains("stroke-dasharray")));
        assert!(hybrid.iter().all(|l| !l.contains("stroke-dasharray")));
        assert!(svg.contains("κ = 0.25") && svg.contains("4π"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let data = rows();
        let a = render_svg(&[Series { kappa: 0.5, rows: &data }]);
        let b = render_svg(&[Series { kappa: 0.5, rows: &data }]);
        assert_eq!(a, b);
    }
}

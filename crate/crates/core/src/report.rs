//! Renderers for classification diagrams.

use std::fmt::Write as _;

use crate::classify::{CaseTag, DiagramGrid};
use crate::config::OutputFormat;
use crate::error::{Error, Result};

const CSV_HEADER: &str = "m,l,code,case";

pub fn render(grid: &DiagramGrid, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(grid),
        OutputFormat::Csv => Ok(to_csv(grid)),
        OutputFormat::Svg => Ok(to_svg(grid)),
    }
}

pub fn to_json(grid: &DiagramGrid) -> Result<String> {
    serde_json::to_string_pretty(grid).map_err(|e| Error::Io(e.to_string()))
}

fn case_name(code: u8) -> &'static str {
    CaseTag::ALL.iter().find(|t| t.code() == code).map(|t| t.name()).unwrap_or("Unknown")
}

/// One row per grid cell: `m,l,code,case`.
pub fn to_csv(grid: &DiagramGrid) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for (i, &m) in grid.m_values.iter().enumerate() {
        for (j, &l) in grid.l_values.iter().enumerate() {
            let code = grid.tags[i][j];
            let _ = writeln!(s, "{m},{l},{code},{}", case_name(code));
        }
    }
    s
}

fn color(code: u8) -> &'static str {
    match code {
        0 => "#4c72b0",
        1 => "#dd8452",
        2 => "#55a868",
        _ => "#eeeeee",
    }
}

const W: f64 = 600.0;
const H: f64 = 450.0;
const MARGIN: f64 = 50.0;
const LEGEND_W: f64 = 230.0;

/// Cells coloured by case, the parabolas `4m = ℓ²` and `4m = 3ℓ²/4`, and a legend.
pub fn to_svg(grid: &DiagramGrid) -> String {
    let (l0, l1) = (grid.l_values[0], *grid.l_values.last().expect("resolution >= 2"));
    let (m0, m1) = (grid.m_values[0], *grid.m_values.last().expect("resolution >= 2"));
    let nl = grid.l_values.len() as f64;
    let nm = grid.m_values.len() as f64;
    let sx = |l: f64| MARGIN + (l - l0) / (l1 - l0) * W;
    let sy = |m: f64| MARGIN + (m1 - m) / (m1 - m0) * H;
    let (cw, ch) = (W / (nl - 1.0), H / (nm - 1.0));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">"#,
        W + 2.0 * MARGIN + LEGEND_W,
        H + 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<title>r = {}</title>"#, grid.r);
    let _ = writeln!(s, r#"<defs><clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{W}" height="{H}"/></clipPath></defs>"#);
    s.push_str("<g id=\"cells\" clip-path=\"url(#plot)\">\n");
    for (i, &m) in grid.m_values.iter().enumerate() {
        for (j, &l) in grid.l_values.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                sx(l) - 0.5 * cw,
                sy(m) - 0.5 * ch,
                cw,
                ch,
                color(grid.tags[i][j])
            );
        }
    }
    s.push_str("</g>\n");
    for (id, pts, dash) in [
        ("parabola-space-form", &grid.parabola_space_form, ""),
        ("parabola-flat-horizontal", &grid.parabola_flat_horizontal, r#" stroke-dasharray="6 4""#),
    ] {
        let d: Vec<String> = pts
            .iter()
            .enumerate()
            .map(|(k, &(l, m))| format!("{}{:.3},{:.3}", if k == 0 { "M" } else { "L" }, sx(l), sy(m)))
            .collect();
        let _ = writeln!(
            s,
            r#"<path id="{id}" d="{}" fill="none" stroke="black" stroke-width="2"{dash} clip-path="url(#plot)"/>"#,
            d.join(" ")
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{W}" height="{H}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">l</text>"#, MARGIN + 0.5 * W, H + 2.0 * MARGIN - 10.0);
    let _ = writeln!(s, r#"<text x="15" y="{}" text-anchor="middle">m</text>"#, MARGIN + 0.5 * H);
    for (v, x) in [(l0, sx(l0)), (l1, sx(l1))] {
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{}" text-anchor="middle">{v}</text>"#, MARGIN + H + 18.0);
    }
    for (v, y) in [(m0, sy(m0)), (m1, sy(m1))] {
        let _ = writeln!(s, r#"<text x="{}" y="{y:.1}" text-anchor="end">{v}</text>"#, MARGIN - 6.0);
    }

    let lx = 2.0 * MARGIN + W;
    s.push_str("<g id=\"legend\">\n");
    for (k, (code, name)) in grid.legend.iter().enumerate() {
        let y = MARGIN + 22.0 * k as f64;
        let _ = writeln!(s, r#"<rect x="{lx}" y="{y}" width="14" height="14" fill="{}" stroke="black"/>"#, color(*code));
        let _ = writeln!(s, r#"<text x="{}" y="{}">{name}</text>"#, lx + 20.0, y + 11.0);
    }
    let y = MARGIN + 22.0 * grid.legend.len() as f64 + 10.0;
    let _ = writeln!(s, r#"<path d="M{lx},{y} L{},{y}" stroke="black" stroke-width="2"/>"#, lx + 14.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}">4m = l^2</text>"#, lx + 20.0, y + 4.0);
    let y = y + 20.0;
    let _ = writeln!(s, r#"<path d="M{lx},{y} L{},{y}" stroke="black" stroke-width="2" stroke-dasharray="6 4"/>"#, lx + 14.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}">4m = 3l^2/4</text>"#, lx + 20.0, y + 4.0);
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::diagram_grid;

    #[test]
    fn csv_is_rectangular() {
        let g = diagram_grid(3, (0.0, 2.0), (-1.0, 2.0), 4).unwrap();
        let csv = to_csv(&g);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 17);
        assert!(lines.iter().all(|l| l.split(',').count() == 4));
    }

    #[test]
    fn svg_has_parabolas_and_legend() {
        let g = diagram_grid(5, (0.0, 3.0), (-1.0, 3.0), 5).unwrap();
        let svg = to_svg(&g);
        assert!(svg.contains("id=\"parabola-space-form\""));
        assert!(svg.contains("id=\"parabola-flat-horizontal\""));
        assert!(svg.contains("id=\"legend\""));
        for t in CaseTag::ALL {
            assert!(svg.contains(t.name()));
        }
    }
}

use std::fmt::Write;
use std::path::Path;

use super::{UnmaskingCurve, UnmaskingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Svg,
}

/// `iteration,run_1,..,run_k,mean`, one row per iteration. Values use the
/// shortest representation that parses back to the same number.
pub fn curve_csv(curve: &UnmaskingCurve) -> String {
    let mut out = String::from("iteration");
    for r in 1..=curve.runs.len() {
        write!(out, ",run_{r}").unwrap();
    }
    out.push_str(",mean\n");
    for (i, m) in curve.mean.iter().enumerate() {
        write!(out, "{i}").unwrap();
        for run in &curve.runs {
            write!(out, ",{}", run[i]).unwrap();
        }
        writeln!(out, ",{m}").unwrap();
    }
    out
}

/// Parse a curve CSV back into per-run sequences and the mean.
pub fn read_curve_csv(raw: &str) -> Result<(Vec<Vec<f64>>, Vec<f64>), UnmaskingError> {
    let mut lines = raw.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| UnmaskingError::Format("empty file".into()))?
        .split(',')
        .collect();
    if header.len() < 2 || header[0] != "iteration" || header[header.len() - 1] != "mean" {
        return Err(UnmaskingError::Format("header must be iteration,run_..,mean".into()));
    }
    let n_runs = header.len() - 2;
    let mut runs = vec![vec![]; n_runs];
    let mut mean = vec![];
    for (ln, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(UnmaskingError::Format(format!("row {}: expected {} cells", ln + 1, header.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| UnmaskingError::Format(format!("row {}: {e}", ln + 1)))
        };
        for (r, run) in runs.iter_mut().enumerate() {
            run.push(parse(cells[r + 1])?);
        }
        mean.push(parse(cells[cells.len() - 1])?);
    }
    Ok((runs, mean))
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart of the mean curves with a legend; accuracy axis 0.4 to 1.0
/// (extended downwards when a curve goes lower).
pub fn curves_svg(curves: &[&UnmaskingCurve]) -> String {
    let (w, h) = (640.0, 400.0);
    let (left, right, top, bottom) = (60.0, 180.0, 20.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let iters = curves.iter().map(|c| c.mean.len()).max().unwrap_or(1).max(2);
    let lo = curves
        .iter()
        .flat_map(|c| c.mean.iter().copied())
        .fold(0.4f64, f64::min)
        .max(0.0);
    let x = |i: usize| left + pw * i as f64 / (iters - 1) as f64;
    let y = |a: f64| top + ph * (1.0 - (a - lo) / (1.0 - lo));

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#,
        top + ph,
        left + pw
    )
    .unwrap();
    let steps = ((1.0 - lo) / 0.1).round() as usize;
    for k in 0..=steps {
        let a = lo + k as f64 * (1.0 - lo) / steps.max(1) as f64;
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{a:.1}</text>"#,
            left - 6.0,
            y(a) + 4.0
        )
        .unwrap();
    }
    for i in (0..iters).step_by(5.max(iters / 5)) {
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{i}</text>"#, x(i), top + ph + 16.0).unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">iteration</text>"#,
        left + pw / 2.0,
        h - 10.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">accuracy</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    )
    .unwrap();
    for (k, c) in curves.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = c
            .mean
            .iter()
            .enumerate()
            .map(|(i, a)| format!("{:.2},{:.2}", x(i), y(*a)))
            .collect();
        let label = escape(&format!("{} vs. {}", c.labels.0, c.labels.1));
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"><title>{label}</title></polyline>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = top + 10.0 + 20.0 * k as f64;
        writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{label}</text>"#,
            left + pw + 12.0,
            left + pw + 36.0,
            left + pw + 42.0,
            ly + 4.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Write curves to `path`. CSV holds exactly one curve.
pub fn emit_curve(curves: &[&UnmaskingCurve], format: CurveFormat, path: &Path) -> Result<(), UnmaskingError> {
    let body = match format {
        CurveFormat::Csv => match curves {
            [one] => curve_csv(one),
            _ => return Err(UnmaskingError::Format(format!("CSV holds one curve, got {}", curves.len()))),
        },
        CurveFormat::Svg => curves_svg(curves),
    };
    std::fs::write(path, body).map_err(|source| UnmaskingError::Io {
        path: path.to_path_buf(),
        source,
    })
}

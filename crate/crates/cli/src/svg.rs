//! Standalone SVG rendering of sweep curves: fixed 960x600 canvas, one
//! polyline per (column, block size) series, optional log-x axis. No
//! plotting dependency; output bytes are a pure function of the input.

use crate::csvio::SweepTable;
use std::fmt::Write as _;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Render the selected rate columns of a sweep table. Rows are grouped by
/// n_modes; a column whose curves coincide for every block size (the
/// N-independent baselines) is drawn once without an N suffix.
pub fn render_sweep_svg(
    table: &SweepTable,
    columns: &[String],
    log_x: bool,
) -> Result<String, String> {
    let e_col = table
        .column_index("energy")
        .ok_or("CSV has no 'energy' column")?;
    let n_col = table.column_index("n_modes");

    let mut col_indices = Vec::new();
    for c in columns {
        let idx = table
            .column_index(c)
            .ok_or_else(|| format!("CSV has no '{c}' column"))?;
        col_indices.push((c.clone(), idx));
    }
    if col_indices.is_empty() {
        return Err("no columns selected".into());
    }

    // group row indices by block size, ascending
    let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let n = n_col.map(|c| row[c] as u64).unwrap_or(0);
        match groups.iter_mut().find(|(g, _)| *g == n) {
            Some((_, rows)) => rows.push(i),
            None => groups.push((n, vec![i])),
        }
    }
    groups.sort_by_key(|(n, _)| *n);
    let multi_n = groups.len() > 1;

    let mut series: Vec<Series> = Vec::new();
    for (name, idx) in &col_indices {
        let mut column_series: Vec<Series> = Vec::new();
        for (n, rows) in &groups {
            let mut points: Vec<(f64, f64)> = rows
                .iter()
                .map(|&r| (table.rows[r][e_col], table.rows[r][*idx]))
                .collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            let label = if multi_n {
                format!("{name} N={n}")
            } else {
                name.clone()
            };
            column_series.push(Series { label, points });
        }
        // collapse N-independent duplicates
        if multi_n && column_series.windows(2).all(|w| w[0].points == w[1].points) {
            column_series.truncate(1);
            column_series[0].label = name.clone();
        }
        series.extend(column_series);
    }

    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    let (x_min, x_max) = min_max(&xs)?;
    let (_, y_max) = min_max(&ys)?;
    if log_x && x_min <= 0.0 {
        return Err("log-x axis needs positive energies".into());
    }
    let y_top = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };

    let x_of = |e: f64| -> f64 {
        let t = if log_x {
            (e.log10() - x_min.log10()) / (x_max.log10() - x_min.log10())
        } else {
            (e - x_min) / (x_max - x_min)
        };
        MARGIN_LEFT + t * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    };
    let y_of = |v: f64| -> f64 {
        HEIGHT - MARGIN_BOTTOM - v / y_top * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM
    );

    // x ticks
    for t in x_ticks(x_min, x_max, log_x) {
        let x = x_of(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            HEIGHT - MARGIN_BOTTOM,
            HEIGHT - MARGIN_BOTTOM + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN_BOTTOM + 18.0,
            tick_label(t)
        );
    }

    // y ticks
    for t in y_ticks(y_top) {
        let y = y_of(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            MARGIN_LEFT,
            WIDTH - MARGIN_RIGHT
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="13" text-anchor="middle">photons per mode</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" font-family="monospace" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">bits per mode</text>"#,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0
    );

    // curves
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for (e, v) in &s.points {
            let _ = write!(pts, "{:.2},{:.2} ", x_of(*e), y_of(*v));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.trim_end()
        );
    }

    // legend, top-left inside the plot area
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 + i as f64 * 16.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            MARGIN_LEFT + 10.0,
            MARGIN_LEFT + 34.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">{}</text>"#,
            MARGIN_LEFT + 40.0,
            y + 4.0,
            s.label
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn min_max(values: &[f64]) -> Result<(f64, f64), String> {
    if values.is_empty() {
        return Err("no data points".into());
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if !v.is_finite() {
            return Err("non-finite value in data".into());
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        // avoid a degenerate axis
        lo -= 0.5;
        hi += 0.5;
    }
    Ok((lo, hi))
}

fn x_ticks(x_min: f64, x_max: f64, log_x: bool) -> Vec<f64> {
    if log_x {
        let mut ticks = Vec::new();
        let lo = x_min.log10().floor() as i32;
        let hi = x_max.log10().ceil() as i32;
        for d in lo..=hi {
            for k in [1.0, 2.0, 5.0] {
                let v = k * 10f64.powi(d);
                if v >= x_min * 0.999 && v <= x_max * 1.001 {
                    ticks.push(v);
                }
            }
        }
        if ticks.len() > 10 {
            // decades only
            ticks.retain(|v| {
                let l = v.log10();
                (l - l.round()).abs() < 1e-9
            });
        }
        ticks
    } else {
        linear_ticks(x_min, x_max)
    }
}

fn y_ticks(y_top: f64) -> Vec<f64> {
    linear_ticks(0.0, y_top)
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let range = hi - lo;
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|k| k * mag)
        .find(|s| range / s <= 6.0)
        .unwrap_or(mag);
    let mut ticks = Vec::new();
    let mut t = (lo / step).ceil() * step;
    while t <= hi + step * 1e-9 {
        ticks.push(t);
        t += step;
    }
    ticks
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.6}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() || trimmed == "-" {
        "0".into()
    } else {
        trimmed.to_string()
    }
}

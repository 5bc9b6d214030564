//! Deterministic log-log SVG convergence plots from CSV traces.
//!
//! One polyline per algorithm; points with the same abscissa (several seeds)
//! are averaged. Output is plain SVG 1.1 text with fixed number formatting, so
//! identical inputs produce identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::config::ConfigError;

/// Which column drives the x axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotAxis {
    Iterations,
    Time,
}

impl PlotAxis {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "iterations" => Some(PlotAxis::Iterations),
            "time" => Some(PlotAxis::Time),
            _ => None,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            PlotAxis::Iterations => "iterations",
            PlotAxis::Time => "seconds",
        }
    }
}

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 11] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8",
];

fn cfg_err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Reads trace CSVs and renders a log-log SVG; returns the SVG text.
pub fn render_plot(paths: &[impl AsRef<Path>], axis: PlotAxis) -> Result<String, ConfigError> {
    if paths.is_empty() {
        return Err(cfg_err("plot.inputs", "no CSV files given"));
    }

    // algorithm -> x -> (sum, count); merged across files and seeds.
    let mut acc: BTreeMap<String, BTreeMap<u64, (f64, f64, usize)>> = BTreeMap::new();
    let mut metric: Option<String> = None;

    for path in paths {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| cfg_err("plot.inputs", format!("cannot read {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 7 {
                return Err(cfg_err(
                    "plot.inputs",
                    format!("{}:{}: expected 7 columns", path.display(), lineno + 1),
                ));
            }
            let algorithm = cols[1].to_string();
            let iteration: f64 = cols[3].parse().map_err(|_| {
                cfg_err("plot.inputs", format!("{}: bad iteration", path.display()))
            })?;
            let elapsed: f64 = cols[4].parse().map_err(|_| {
                cfg_err("plot.inputs", format!("{}: bad elapsed", path.display()))
            })?;
            let this_metric = cols[5].to_string();
            let value: f64 = cols[6]
                .parse()
                .map_err(|_| cfg_err("plot.inputs", format!("{}: bad value", path.display())))?;
            match &metric {
                None => metric = Some(this_metric),
                Some(m) if *m != this_metric => {
                    return Err(cfg_err(
                        "plot.inputs",
                        format!("mixed metrics: {m} vs {this_metric}"),
                    ))
                }
                _ => {}
            }
            let x = match axis {
                PlotAxis::Iterations => iteration,
                PlotAxis::Time => elapsed,
            };
            if x <= 0.0 {
                continue;
            }
            // Quantize the key so float x values merge deterministically.
            let key = (x * 1e9).round() as u64;
            let entry = acc
                .entry(algorithm)
                .or_default()
                .entry(key)
                .or_insert((x, 0.0, 0));
            entry.1 += value;
            entry.2 += 1;
        }
    }

    let metric = metric.ok_or_else(|| cfg_err("plot.inputs", "no data rows found"))?;
    let series: Vec<Series> = acc
        .into_iter()
        .map(|(name, pts)| Series {
            name,
            points: pts
                .into_values()
                .map(|(x, sum, n)| (x, (sum / n as f64).max(1e-16)))
                .collect(),
        })
        .collect();
    if series.iter().all(|s| s.points.is_empty()) {
        return Err(cfg_err("plot.inputs", "no plottable points"));
    }

    Ok(render_svg(&series, &metric, axis))
}

fn render_svg(series: &[Series], metric: &str, axis: PlotAxis) -> String {
    let width = 860.0;
    let height = 600.0;
    let (ml, mr, mt, mb) = (80.0, 210.0, 30.0, 60.0);
    let pw = width - ml - mr;
    let ph = height - mt - mb;

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    let pad = |lo: f64, hi: f64| -> (f64, f64) {
        let (l, h) = (lo.log10(), hi.log10());
        if (h - l).abs() < 1e-12 {
            (l - 0.5, h + 0.5)
        } else {
            (l, h)
        }
    };
    let (lx_min, lx_max) = pad(x_min, x_max);
    let (ly_min, ly_max) = pad(y_min, y_max);

    let to_px = |x: f64| ml + (x.log10() - lx_min) / (lx_max - lx_min) * pw;
    let to_py = |y: f64| mt + (ly_max - y.log10()) / (ly_max - ly_min) * ph;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{ml:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        mt + ph,
        ml + pw,
        mt + ph
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml:.2}\" y1=\"{mt:.2}\" x2=\"{ml:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        mt + ph
    ));

    // Decade ticks.
    for d in (lx_min.floor() as i64)..=(lx_max.ceil() as i64) {
        let x = 10f64.powi(d as i32);
        if x.log10() < lx_min - 1e-9 || x.log10() > lx_max + 1e-9 {
            continue;
        }
        let px = to_px(x);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
            mt,
            mt + ph
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">1e{d}</text>\n",
            mt + ph + 18.0
        ));
    }
    for d in (ly_min.floor() as i64)..=(ly_max.ceil() as i64) {
        let y = 10f64.powi(d as i32);
        if y.log10() < ly_min - 1e-9 || y.log10() > ly_max + 1e-9 {
            continue;
        }
        let py = to_py(y);
        svg.push_str(&format!(
            "<line x1=\"{ml:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
            ml + pw
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">1e{d}</text>\n",
            ml - 6.0,
            py + 4.0
        ));
    }

    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        ml + pw / 2.0,
        height - 14.0,
        axis.label()
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
        mt + ph / 2.0,
        mt + ph / 2.0,
        metric
    ));

    // Series.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !s.points.is_empty() {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", to_px(x), to_py(y)))
                .collect();
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                pts.join(" ")
            ));
        }
        let ly = mt + 16.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            ml + pw + 12.0,
            ml + pw + 36.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>\n",
            ml + pw + 42.0,
            ly + 4.0,
            s.name
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

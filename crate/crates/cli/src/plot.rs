//! PNG charts: singular-value decay and norm ratio against p.

use std::path::Path;
use std::sync::OnceLock;

use plotters::prelude::*;
use plotters::style::{register_font, FontStyle};

pub enum Plot {
    SingularValues { title: String, curves: Vec<(String, Vec<f64>)> },
    Ratios { title: String, labels: Vec<String>, series: Vec<(String, Vec<f64>)> },
}

const SIZE: (u32, u32) = (960, 640);

/// Smallest plotted σ_k / σ₁.
const DECAY_FLOOR: f64 = 1e-17;

const FONT_PATHS: [&str; 3] = [
    "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf",
    "/usr/share/fonts/TTF/DejaVuSans.ttf",
    "/Library/Fonts/Arial.ttf",
];

/// Registers a sans-serif face for labels; charts are drawn without text when
/// none is found (`WEYLGRID_FONT` overrides the search).
fn have_font() -> bool {
    static FOUND: OnceLock<bool> = OnceLock::new();
    *FOUND.get_or_init(|| {
        let custom = std::env::var("WEYLGRID_FONT").ok();
        let candidates = custom.iter().map(String::as_str).chain(if custom.is_some() { [].as_slice() } else { FONT_PATHS.as_slice() }.iter().copied());
        for path in candidates {
            if let Ok(bytes) = std::fs::read(path) {
                if register_font("sans-serif", FontStyle::Normal, Box::leak(bytes.into_boxed_slice())).is_ok() {
                    return true;
                }
            }
        }
        false
    })
}

fn palette(i: usize) -> RGBColor {
    const COLORS: [RGBColor; 8] = [
        RGBColor(31, 119, 180),
        RGBColor(255, 127, 14),
        RGBColor(44, 160, 44),
        RGBColor(214, 39, 40),
        RGBColor(148, 103, 189),
        RGBColor(140, 86, 75),
        RGBColor(227, 119, 194),
        RGBColor(23, 190, 207),
    ];
    COLORS[i % COLORS.len()]
}

type DrawResult = Result<(), Box<dyn std::error::Error>>;

impl Plot {
    pub fn suffix(&self) -> &'static str {
        match self {
            Plot::SingularValues { .. } => "singular-values",
            Plot::Ratios { .. } => "ratios",
        }
    }

    pub fn render(&self, path: &Path) -> DrawResult {
        let text = have_font();
        let root = BitMapBackend::new(path, SIZE).into_drawing_area();
        root.fill(&WHITE)?;
        match self {
            Plot::SingularValues { title, curves } => singular_values(&root, title, curves, text)?,
            Plot::Ratios { title, labels, series } => ratios(&root, title, labels, series, text)?,
        }
        root.present()?;
        Ok(())
    }
}

fn singular_values(root: &DrawingArea<BitMapBackend, plotters::coord::Shift>, title: &str, curves: &[(String, Vec<f64>)], text: bool) -> DrawResult {
    let kmax = curves.iter().map(|(_, s)| s.len()).max().unwrap_or(1).max(2);
    let bottom = curves
        .iter()
        .filter_map(|(_, s)| Some(s.last()? / s.first().filter(|t| **t > 0.0)?))
        .fold(1.0f64, f64::min)
        .max(DECAY_FLOOR)
        .log10()
        - 0.5;
    let mut builder = ChartBuilder::on(root);
    builder.margin(20);
    if text {
        builder.caption(title, ("sans-serif", 24)).x_label_area_size(40).y_label_area_size(60);
    }
    let mut chart = builder.build_cartesian_2d(1f64..kmax as f64, bottom..0.5f64)?;
    let mut mesh = chart.configure_mesh();
    if text {
        mesh.x_desc("k").y_desc("log10 σ_k / σ_1");
    } else {
        mesh.x_labels(0).y_labels(0);
    }
    mesh.draw()?;
    for (i, (name, s)) in curves.iter().enumerate() {
        let top = s.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            continue;
        }
        let points = s.iter().enumerate().map(|(k, v)| ((k + 1) as f64, (v / top).max(DECAY_FLOOR).log10()));
        let color = palette(i);
        let series = chart.draw_series(LineSeries::new(points, color.stroke_width(2)))?;
        if text {
            series.label(name.as_str()).legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color));
        }
    }
    if text {
        chart.configure_series_labels().background_style(WHITE.mix(0.8)).border_style(BLACK).draw()?;
    }
    Ok(())
}

fn ratios(root: &DrawingArea<BitMapBackend, plotters::coord::Shift>, title: &str, labels: &[String], series: &[(String, Vec<f64>)], text: bool) -> DrawResult {
    let finite: Vec<f64> = series.iter().flat_map(|(_, r)| r.iter().copied()).filter(|r| r.is_finite() && *r > 0.0).collect();
    let lo = finite.iter().copied().fold(1.0f64, f64::min).log10() - 0.2;
    let hi = finite.iter().copied().fold(1.0f64, f64::max).log10() + 0.2;
    let n = labels.len().max(1);
    let mut builder = ChartBuilder::on(root);
    builder.margin(20);
    if text {
        builder.caption(title, ("sans-serif", 24)).x_label_area_size(40).y_label_area_size(60);
    }
    let mut chart = builder.build_cartesian_2d(-0.5f64..n as f64 - 0.5, lo..hi)?;
    let mut mesh = chart.configure_mesh();
    let label_of = |x: &f64| {
        let i = x.round();
        if (x - i).abs() < 1e-9 && i >= 0.0 {
            labels.get(i as usize).cloned().unwrap_or_default()
        } else {
            String::new()
        }
    };
    if text {
        mesh.x_desc("p").y_desc("log10 ratio").x_labels(n).x_label_formatter(&label_of);
    } else {
        mesh.x_labels(0).y_labels(0);
    }
    mesh.draw()?;
    chart.draw_series(LineSeries::new([(-0.5, 0.0), (n as f64 - 0.5, 0.0)], BLACK.mix(0.5)))?;
    for (i, (name, r)) in series.iter().enumerate() {
        let color = palette(i);
        let points: Vec<(f64, f64)> = r.iter().enumerate().filter(|(_, v)| v.is_finite() && **v > 0.0).map(|(k, v)| (k as f64, v.log10())).collect();
        chart.draw_series(PointSeries::of_element(points.clone(), 4, color.filled(), &|c, s, st| Circle::new(c, s, st)))?;
        let line = chart.draw_series(LineSeries::new(points, color.stroke_width(2)))?;
        if text {
            line.label(name.as_str()).legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color));
        }
    }
    if text {
        chart.configure_series_labels().background_style(WHITE.mix(0.8)).border_style(BLACK).draw()?;
    }
    Ok(())
}

//! Native SVG charts — no external plotting stack, deterministic layout.

use thiserror::Error;

use crate::runner::RunBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Fig1b,
    Fig4,
    Fig5,
    Proxy,
    Evolution,
}

impl PlotKind {
    pub fn parse(name: &str) -> Result<Self, PlotError> {
        match name {
            "fig1b" => Ok(PlotKind::Fig1b),
            "fig4" => Ok(PlotKind::Fig4),
            "fig5" => Ok(PlotKind::Fig5),
            "proxy" => Ok(PlotKind::Proxy),
            "evolution" => Ok(PlotKind::Evolution),
            other => Err(PlotError::UnknownKind(other.to_string())),
        }
    }

    pub fn file_name(&self) -> &'static str {
        match self {
            PlotKind::Fig1b => "fig1b.svg",
            PlotKind::Fig4 => "fig4.svg",
            PlotKind::Fig5 => "fig5.svg",
            PlotKind::Proxy => "proxy.svg",
            PlotKind::Evolution => "evolution.svg",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("unknown plot kind `{0}` (valid: fig1b, fig4, fig5, proxy, evolution)")]
    UnknownKind(String),
    #[error("bundle is missing the `{0}` series")]
    MissingSeries(String),
    #[error("no steps: the trajectory series is empty")]
    NoSteps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SeriesMode {
    Line,
    ArrowLine,
}

#[derive(Debug, Clone)]
struct Series {
    label: String,
    points: Vec<(f64, f64)>,
    mode: SeriesMode,
    /// Draw an open circle on the final point (goal resolution marker).
    open_end: bool,
}

#[derive(Debug, Clone)]
struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 210.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 64.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn fmt(value: f64) -> String {
    let s = format!("{value:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Tick positions on a 1-2-5 ladder covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let range = (hi - lo).max(1e-12);
    let raw = range / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|&s| range / s <= 6.0)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() * step;
    let mut out = Vec::new();
    let mut tick = first;
    while tick <= hi + step * 1e-9 {
        // normalize negative zero for stable rendering
        out.push(if tick == 0.0 { 0.0 } else { tick });
        tick += step;
    }
    out
}

fn bounds(series: &[Series]) -> ((f64, f64), (f64, f64)) {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if !x_lo.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if x_hi - x_lo < 1e-9 {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if y_hi - y_lo < 1e-9 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let x_pad = (x_hi - x_lo) * 0.04;
    let y_pad = (y_hi - y_lo) * 0.06;
    ((x_lo - x_pad, x_hi + x_pad), (y_lo - y_pad, y_hi + y_pad))
}

fn render(chart: &Chart) -> String {
    let ((x_lo, x_hi), (y_lo, y_hi)) = bounds(&chart.series);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" \
markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">\
<path d=\"M 0 1 L 9 5 L 0 9 z\" fill=\"context-stroke\"/></marker></defs>\n",
    );
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" \
font-size=\"17\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        escape(&chart.title)
    ));

    // frame
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\" \
stroke-width=\"1\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(plot_w),
        fmt(plot_h)
    ));

    for tick in ticks(x_lo, x_hi) {
        let x = sx(tick);
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#444\"/>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h),
            fmt(MARGIN_TOP + plot_h + 6.0)
        ));
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#ddd\"/>\n",
            fmt(x),
            fmt(MARGIN_TOP),
            fmt(MARGIN_TOP + plot_h)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
font-size=\"12\">{}</text>\n",
            fmt(x),
            fmt(MARGIN_TOP + plot_h + 20.0),
            fmt(tick)
        ));
    }
    for tick in ticks(y_lo, y_hi) {
        let y = sy(tick);
        out.push_str(&format!(
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#444\"/>\n",
            fmt(y),
            fmt(MARGIN_LEFT - 6.0),
            fmt(MARGIN_LEFT)
        ));
        out.push_str(&format!(
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#ddd\"/>\n",
            fmt(y),
            fmt(MARGIN_LEFT),
            fmt(MARGIN_LEFT + plot_w)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" \
font-size=\"12\">{}</text>\n",
            fmt(MARGIN_LEFT - 10.0),
            fmt(y + 4.0),
            fmt(tick)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
font-size=\"14\">{}</text>\n",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(HEIGHT - 18.0),
        escape(&chart.x_label)
    ));
    out.push_str(&format!(
        "<text x=\"22\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
font-size=\"14\" transform=\"rotate(-90 22 {})\">{}</text>\n",
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(MARGIN_TOP + plot_h / 2.0),
        escape(&chart.y_label)
    ));

    for (i, series) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = series
            .points
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y))))
            .collect();
        if coords.len() > 1 {
            let marker = match series.mode {
                SeriesMode::ArrowLine => " marker-mid=\"url(#arrow)\" marker-end=\"url(#arrow)\"",
                SeriesMode::Line => "",
            };
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{}/>\n",
                coords.join(" "),
                color,
                marker
            ));
        }
        for (j, &(x, y)) in series.points.iter().enumerate() {
            let last = j + 1 == series.points.len();
            if last && series.open_end {
                out.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"white\" stroke=\"{}\" \
stroke-width=\"1.8\"/>\n",
                    fmt(sx(x)),
                    fmt(sy(y)),
                    color
                ));
            } else {
                out.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"2.6\" fill=\"{}\"/>\n",
                    fmt(sx(x)),
                    fmt(sy(y)),
                    color
                ));
            }
        }
        let legend_y = MARGIN_TOP + 14.0 + i as f64 * 20.0;
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
            fmt(MARGIN_LEFT + plot_w + 14.0),
            fmt(legend_y - 4.0),
            fmt(MARGIN_LEFT + plot_w + 38.0),
            color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            fmt(MARGIN_LEFT + plot_w + 44.0),
            fmt(legend_y),
            escape(&series.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn first_scenario_runs(bundle: &RunBundle) -> Result<Vec<usize>, PlotError> {
    if bundle.runs.is_empty() {
        return Err(PlotError::MissingSeries("runs".to_string()));
    }
    let size = bundle.runs[0].size;
    let replicate = bundle.runs[0].replicate;
    Ok((0..bundle.runs.len())
        .filter(|&i| bundle.runs[i].size == size && bundle.runs[i].replicate == replicate)
        .collect())
}

fn fig1b(bundle: &RunBundle) -> Result<Chart, PlotError> {
    let runs = first_scenario_runs(bundle)?;
    let mut series = Vec::new();
    for &i in &runs {
        let run = &bundle.runs[i];
        if run.steps.is_empty() {
            return Err(PlotError::NoSteps);
        }
        let points = run
            .steps
            .iter()
            .map(|s| (s.time_cum, s.u_realized))
            .collect();
        series.push(Series {
            label: format!("{} ({})", run.agent, run.stop_reason),
            points,
            mode: SeriesMode::Line,
            open_end: run.stop_reason == "threshold_met",
        });
    }
    Ok(Chart {
        title: "Per-node information gain over time".to_string(),
        x_label: "cumulative time (abstract units)".to_string(),
        y_label: "realized information gain (bits)".to_string(),
        series,
    })
}

fn fig4(bundle: &RunBundle) -> Result<Chart, PlotError> {
    if bundle.runs.is_empty() {
        return Err(PlotError::MissingSeries("runs".to_string()));
    }
    let mut policies: Vec<String> = bundle.runs.iter().map(|r| r.policy.clone()).collect();
    policies.sort();
    policies.dedup();
    let mut sizes: Vec<usize> = bundle.runs.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut series = Vec::new();
    for policy in &policies {
        let mut points = Vec::new();
        for &size in &sizes {
            let values: Vec<f64> = bundle
                .runs
                .iter()
                .filter(|r| &r.policy == policy && r.size == size)
                .map(|r| r.report.intelligence_i)
                .collect();
            if values.is_empty() {
                return Err(PlotError::MissingSeries(format!("{policy}@{size}")));
            }
            points.push((size as f64, values.iter().sum::<f64>() / values.len() as f64));
        }
        series.push(Series {
            label: policy.clone(),
            points,
            mode: SeriesMode::Line,
            open_end: false,
        });
    }
    Ok(Chart {
        title: "Mean intelligence across goal complexity".to_string(),
        x_label: "network size (nodes)".to_string(),
        y_label: "intelligence index (dimensionless)".to_string(),
        series,
    })
}

fn fig5(bundle: &RunBundle) -> Result<Chart, PlotError> {
    let runs = first_scenario_runs(bundle)?;
    let mut series = Vec::new();
    for &i in &runs {
        let run = &bundle.runs[i];
        if run.steps.is_empty() {
            return Err(PlotError::NoSteps);
        }
        let points = run
            .steps
            .iter()
            .map(|s| (s.a_g_prefix, s.u_r_prefix))
            .collect();
        series.push(Series {
            label: run.policy.clone(),
            points,
            mode: SeriesMode::ArrowLine,
            open_end: false,
        });
    }
    Ok(Chart {
        title: "Solving against planning, step by step".to_string(),
        x_label: "one-shot planning index (dimensionless)".to_string(),
        y_label: "weighted solving index (dimensionless)".to_string(),
        series,
    })
}

fn proxy(bundle: &RunBundle) -> Result<Chart, PlotError> {
    let sweep = bundle
        .proxy
        .as_ref()
        .ok_or_else(|| PlotError::MissingSeries("proxy".to_string()))?;
    if sweep.points.is_empty() {
        return Err(PlotError::MissingSeries("proxy".to_string()));
    }
    let adjusted = sweep
        .points
        .iter()
        .map(|p| (p.strength_p, p.i_hat_proxy))
        .collect();
    let plain = sweep
        .points
        .iter()
        .map(|p| (p.strength_p, p.i_hat_plain))
        .collect();
    Ok(Chart {
        title: "Proxy-adjusted intelligence across support strength".to_string(),
        x_label: "proxy strength (bits-equivalent)".to_string(),
        y_label: "difficulty-scaled intelligence (index)".to_string(),
        series: vec![
            Series {
                label: "proxy-adjusted".to_string(),
                points: adjusted,
                mode: SeriesMode::Line,
                open_end: false,
            },
            Series {
                label: "unadjusted".to_string(),
                points: plain,
                mode: SeriesMode::Line,
                open_end: false,
            },
        ],
    })
}

fn evolution(bundle: &RunBundle) -> Result<Chart, PlotError> {
    let evo = bundle
        .evolution
        .as_ref()
        .ok_or_else(|| PlotError::MissingSeries("evolution".to_string()))?;
    if evo.trace.records.is_empty() {
        return Err(PlotError::MissingSeries("evolution".to_string()));
    }
    let series = vec![
        Series {
            label: "mean trait (ability, bits)".to_string(),
            points: evo
                .trace
                .records
                .iter()
                .map(|r| (r.generation as f64, r.mean_trait[0]))
                .collect(),
            mode: SeriesMode::Line,
            open_end: false,
        },
        Series {
            label: "benchmark ability (bits)".to_string(),
            points: evo
                .trace
                .records
                .iter()
                .map(|r| (r.generation as f64, r.benchmark_q))
                .collect(),
            mode: SeriesMode::Line,
            open_end: false,
        },
        Series {
            label: "mean benchmarked intelligence (index)".to_string(),
            points: evo
                .trace
                .records
                .iter()
                .map(|r| (r.generation as f64, r.mean_i_hat))
                .collect(),
            mode: SeriesMode::Line,
            open_end: false,
        },
    ];
    Ok(Chart {
        title: "Trait evolution under selection".to_string(),
        x_label: "generation".to_string(),
        y_label: "population mean".to_string(),
        series,
    })
}

/// Renders one plot kind from a run bundle as an SVG document.
pub fn emit_plot(bundle: &RunBundle, kind: PlotKind) -> Result<String, PlotError> {
    let chart = match kind {
        PlotKind::Fig1b => fig1b(bundle)?,
        PlotKind::Fig4 => fig4(bundle)?,
        PlotKind::Fig5 => fig5(bundle)?,
        PlotKind::Proxy => proxy(bundle)?,
        PlotKind::Evolution => evolution(bundle)?,
    };
    Ok(render(&chart))
}

use std::fmt::Write as _;

use super::rank::{Movement, RankComparison};
use crate::error::{Error, Result};
use crate::stats::{mean, sample_sd, RatioAnalysis};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovementColors {
    pub up: String,
    pub down: String,
    pub same: String,
}

impl Default for MovementColors {
    fn default() -> Self {
        Self {
            up: "#2ca02c".into(),
            down: "#d62728".into(),
            same: "#000000".into(),
        }
    }
}

impl MovementColors {
    pub fn for_movement(&self, m: Movement) -> &str {
        match m {
            Movement::Up => &self.up,
            Movement::Down => &self.down,
            Movement::Same => &self.same,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub width: f64,
    pub height: f64,
    /// Share of the left ranking shown by the slopegraph, in `(0, 1]`.
    pub top_fraction: f64,
    pub colors: MovementColors,
    pub title: String,
    pub left_label: String,
    pub right_label: String,
}

impl Default for FigureSpec {
    fn default() -> Self {
        Self {
            width: 640.0,
            height: 800.0,
            top_fraction: 1.0,
            colors: MovementColors::default(),
            title: String::new(),
            left_label: String::new(),
            right_label: String::new(),
        }
    }
}

impl FigureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0) {
            return Err(Error::Domain(format!(
                "figure dimensions must be positive ({}x{})",
                self.width, self.height
            )));
        }
        if !(self.top_fraction > 0.0 && self.top_fraction <= 1.0) {
            return Err(Error::Domain(format!(
                "top fraction must lie in (0, 1], got {}",
                self.top_fraction
            )));
        }
        Ok(())
    }
}

const MARGIN_TOP: f64 = 70.0;
const MARGIN_BOTTOM: f64 = 30.0;
const FONT: &str = "sans-serif";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Minimal SVG 1.1 writer with two-decimal coordinates.
struct Svg {
    buf: String,
}

impl Svg {
    fn new(spec: &FigureSpec) -> Self {
        let mut buf = String::new();
        buf.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            buf,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\" font-family=\"{FONT}\">",
            w = spec.width,
            h = spec.height
        );
        let _ = writeln!(
            buf,
            "<rect x=\"0\" y=\"0\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#ffffff\"/>",
            spec.width, spec.height
        );
        let mut svg = Self { buf };
        if !spec.title.is_empty() {
            svg.text(spec.width / 2.0, 24.0, "middle", 16.0, "#000000", "title", &spec.title);
        }
        svg
    }

    #[allow(clippy::too_many_arguments)]
    fn text(&mut self, x: f64, y: f64, anchor: &str, size: f64, fill: &str, class: &str, body: &str) {
        let _ = writeln!(
            self.buf,
            "<text class=\"{class}\" x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-size=\"{size:.2}\" fill=\"{fill}\">{}</text>",
            escape(body)
        );
    }

    fn line(&mut self, class: &str, (x1, y1): (f64, f64), (x2, y2): (f64, f64), stroke: &str, extra: &str) {
        let _ = writeln!(
            self.buf,
            "<line class=\"{class}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\" stroke-width=\"1.50\"{extra}/>"
        );
    }

    fn circle(&mut self, class: &str, x: f64, y: f64, r: f64, fill: &str, title: &str) {
        let _ = writeln!(
            self.buf,
            "<circle class=\"{class}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r:.2}\" fill=\"{fill}\"><title>{}</title></circle>",
            escape(title)
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str, count: usize) {
        let _ = writeln!(
            self.buf,
            "<rect class=\"{class}\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\" data-count=\"{count}\"/>"
        );
    }

    fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

fn column_headers(svg: &mut Svg, spec: &FigureSpec, cmp: &RankComparison, lx: f64, rx: f64) {
    let left = if spec.left_label.is_empty() { &cmp.left_name } else { &spec.left_label };
    let right = if spec.right_label.is_empty() { &cmp.right_name } else { &spec.right_label };
    svg.text(lx, MARGIN_TOP - 20.0, "end", 13.0, "#000000", "column-label", left);
    svg.text(rx, MARGIN_TOP - 20.0, "start", 13.0, "#000000", "column-label", right);
}

/// Two ranked columns joined by connectors coloured by movement.
///
/// The left column shows the top `ceil(n * top_fraction)` items of the left
/// ranking. The right column shows the same items in right-rank order. A
/// right-hand label is drawn in the `same` colour when the item's overall
/// right rank falls outside the shown rows.
pub fn render_slopegraph(cmp: &RankComparison, spec: &FigureSpec) -> Result<String> {
    spec.validate()?;
    if cmp.is_empty() {
        return Err(Error::Degenerate("nothing to plot".into()));
    }
    let shown = ((cmp.len() as f64 * spec.top_fraction).ceil() as usize).clamp(1, cmp.len());
    let subset = &cmp.items[..shown];
    let mut right_order: Vec<usize> = (0..shown).collect();
    right_order.sort_by_key(|&i| subset[i].rank_right);
    let mut right_row = vec![0; shown];
    for (row, &i) in right_order.iter().enumerate() {
        right_row[i] = row;
    }

    let lx = spec.width * 0.38;
    let rx = spec.width * 0.62;
    let step = (spec.height - MARGIN_TOP - MARGIN_BOTTOM) / shown as f64;
    let y = |row: usize| MARGIN_TOP + step * (row as f64 + 0.5);
    let font = (step * 0.7).clamp(6.0, 12.0);

    let mut svg = Svg::new(spec);
    column_headers(&mut svg, spec, cmp, lx - 6.0, rx + 6.0);
    for (i, item) in subset.iter().enumerate() {
        let color = spec.colors.for_movement(item.movement);
        svg.line(
            &format!("connector {}", item.movement.as_str()),
            (lx, y(i)),
            (rx, y(right_row[i])),
            color,
            "",
        );
    }
    for (i, item) in subset.iter().enumerate() {
        let color = spec.colors.for_movement(item.movement);
        svg.text(
            lx - 6.0,
            y(i) + font / 3.0,
            "end",
            font,
            color,
            "label left",
            &format!("{}. {}", item.rank_left, item.label),
        );
        let right_color = if item.rank_right > shown { spec.colors.same.as_str() } else { color };
        svg.text(
            rx + 6.0,
            y(right_row[i]) + font / 3.0,
            "start",
            font,
            right_color,
            "label right",
            &format!("{}. {}", item.rank_right, item.label),
        );
    }
    Ok(svg.finish())
}

/// Vertical placement of one item in the cardinal plot, as a fraction of the
/// scale height measured from the bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct CardinalPosition {
    pub label: String,
    pub left: f64,
    pub right: f64,
}

fn linear_scale(values: &[f64], side: &str) -> Result<(f64, f64)> {
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(0.0, f64::min);
    if !(hi - lo > 0.0) || !hi.is_finite() {
        return Err(Error::Degenerate(format!("{side} scores span no range")));
    }
    Ok((lo, hi - lo))
}

/// Positions of the top `top_k` left-ranked items on linear scales running
/// from zero (or the smallest negative score) to each side's maximum.
pub fn cardinal_positions(cmp: &RankComparison, top_k: usize) -> Result<Vec<CardinalPosition>> {
    if top_k == 0 || top_k > cmp.len() {
        return Err(Error::Domain(format!("top_k must lie in 1..={}, got {top_k}", cmp.len())));
    }
    let items = &cmp.items[..top_k];
    let left: Vec<f64> = items.iter().map(|i| i.score_left).collect();
    let right: Vec<f64> = items.iter().map(|i| i.score_right).collect();
    let (l0, lspan) = linear_scale(&left, "left")?;
    let (r0, rspan) = linear_scale(&right, "right")?;
    Ok(items
        .iter()
        .map(|i| CardinalPosition {
            label: i.label.clone(),
            left: (i.score_left - l0) / lspan,
            right: (i.score_right - r0) / rspan,
        })
        .collect())
}

/// Top `top_k` items placed at their score heights on each side.
pub fn render_cardinal_plot(cmp: &RankComparison, spec: &FigureSpec, top_k: usize) -> Result<String> {
    spec.validate()?;
    let positions = cardinal_positions(cmp, top_k)?;
    let lx = spec.width * 0.38;
    let rx = spec.width * 0.62;
    let bottom = spec.height - MARGIN_BOTTOM;
    let scale = spec.height - MARGIN_TOP - MARGIN_BOTTOM;
    let y = |frac: f64| bottom - frac * scale;

    let mut svg = Svg::new(spec);
    column_headers(&mut svg, spec, cmp, lx - 10.0, rx + 10.0);
    svg.line("axis", (lx, y(0.0)), (lx, y(1.0)), "#999999", "");
    svg.line("axis", (rx, y(0.0)), (rx, y(1.0)), "#999999", "");
    for (pos, item) in positions.iter().zip(&cmp.items) {
        let color = spec.colors.for_movement(item.movement);
        svg.line(
            &format!("connector {}", item.movement.as_str()),
            (lx, y(pos.left)),
            (rx, y(pos.right)),
            color,
            "",
        );
    }
    for (pos, item) in positions.iter().zip(&cmp.items) {
        svg.circle("point left", lx, y(pos.left), 3.0, "#000000", &pos.label);
        svg.circle("point right", rx, y(pos.right), 3.0, "#000000", &pos.label);
        svg.text(
            lx - 10.0,
            y(pos.left) + 4.0,
            "end",
            11.0,
            "#000000",
            "label left",
            &format!("{} ({})", pos.label, fmt_score(item.score_left)),
        );
        svg.text(
            rx + 10.0,
            y(pos.right) + 4.0,
            "start",
            11.0,
            "#000000",
            "label right",
            &format!("{} ({})", pos.label, fmt_score(item.score_right)),
        );
    }
    Ok(svg.finish())
}

fn fmt_score(v: f64) -> String {
    format!("{v:.3}")
}

/// Equal-width bin counts over `[min, max]`; the maximum lands in the last
/// bin. With a single distinct value everything lands in the first bin.
pub fn histogram_counts(values: &[f64], bins: usize) -> Result<Vec<usize>> {
    if values.is_empty() {
        return Err(Error::Degenerate("histogram needs at least one value".into()));
    }
    if bins == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0; bins];
    for &v in values {
        let k = if width > 0.0 {
            (((v - lo) / width).floor() as usize).min(bins - 1)
        } else {
            0
        };
        counts[k] += 1;
    }
    Ok(counts)
}

/// Histogram annotated with `n`, mean and sample standard deviation.
pub fn render_histogram(values: &[f64], bins: usize, spec: &FigureSpec) -> Result<String> {
    spec.validate()?;
    let counts = histogram_counts(values, bins)?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tallest = *counts.iter().max().expect("bins > 0") as f64;

    let left = 50.0;
    let right = spec.width - 20.0;
    let bottom = spec.height - MARGIN_BOTTOM - 20.0;
    let plot_h = bottom - MARGIN_TOP;
    let bar_w = (right - left) / bins as f64;

    let mut svg = Svg::new(spec);
    let sd = if values.len() > 1 { sample_sd(values) } else { 0.0 };
    svg.text(
        right,
        MARGIN_TOP - 20.0,
        "end",
        12.0,
        "#000000",
        "annotation",
        &format!("n={} mean={:.3} sd={:.3}", values.len(), mean(values), sd),
    );
    for (k, &c) in counts.iter().enumerate() {
        let h = c as f64 / tallest * plot_h;
        svg.rect("bar", left + k as f64 * bar_w, bottom - h, bar_w, h, "#4c72b0", c);
    }
    svg.line("axis", (left, bottom), (right, bottom), "#000000", "");
    svg.text(left, bottom + 16.0, "start", 11.0, "#000000", "tick", &format!("{lo:.3}"));
    svg.text(right, bottom + 16.0, "end", 11.0, "#000000", "tick", &format!("{hi:.3}"));
    Ok(svg.finish())
}

/// Median-normalised ratios from highest to lowest, with a dashed reference
/// line at one.
pub fn render_ratio_plot(ra: &RatioAnalysis, spec: &FigureSpec) -> Result<String> {
    spec.validate()?;
    if ra.normalized.is_empty() {
        return Err(Error::Degenerate("nothing to plot".into()));
    }
    let top = ra.normalized.iter().copied().fold(1.0, f64::max) * 1.05;
    let left = 50.0;
    let right = spec.width - 20.0;
    let bottom = spec.height - MARGIN_BOTTOM - 20.0;
    let plot_h = bottom - MARGIN_TOP;
    let n = ra.normalized.len();
    let x = |i: usize| {
        if n == 1 {
            (left + right) / 2.0
        } else {
            left + (right - left) * i as f64 / (n - 1) as f64
        }
    };
    let y = |v: f64| bottom - v / top * plot_h;

    let mut svg = Svg::new(spec);
    svg.line("axis", (left, bottom), (right, bottom), "#000000", "");
    svg.line("axis", (left, bottom), (left, MARGIN_TOP), "#000000", "");
    svg.line("reference", (left, y(1.0)), (right, y(1.0)), "#555555", " stroke-dasharray=\"6,4\"");
    svg.text(left - 6.0, y(1.0) + 4.0, "end", 11.0, "#000000", "tick", "1");
    let mut path = String::new();
    for (i, v) in ra.normalized.iter().enumerate() {
        let _ = write!(path, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, x(i), y(*v));
    }
    let _ = writeln!(
        svg.buf,
        "<path class=\"series\" d=\"{path}\" fill=\"none\" stroke=\"#4c72b0\" stroke-width=\"1.50\"/>"
    );
    for (i, (label, v)) in ra.labels.iter().zip(&ra.normalized).enumerate() {
        svg.circle("point", x(i), y(*v), 2.5, "#4c72b0", label);
    }
    Ok(svg.finish())
}

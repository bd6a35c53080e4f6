//! Static SVG rendering of experiment statistics: one mean curve per
//! measure over network size, with a shaded ±1 standard-error band.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use mbqn::{Measure, StatsRecord};
use plotters::prelude::*;

const SIZE: (u32, u32) = (900, 600);

pub fn render(records: &[StatsRecord], out: &Path) -> anyhow::Result<()> {
    let mut by_measure: BTreeMap<Measure, Vec<&StatsRecord>> = BTreeMap::new();
    for r in records {
        by_measure.entry(r.measure).or_default().push(r);
    }
    for series in by_measure.values_mut() {
        series.sort_by_key(|r| r.n);
    }

    let xs = records.iter().map(|r| r.n as f64);
    let (x_lo, x_hi) = padded_range(xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
    let y_lo_raw = records.iter().map(|r| r.mean - r.sem).fold(f64::INFINITY, f64::min);
    let y_hi_raw = records.iter().map(|r| r.mean + r.sem).fold(f64::NEG_INFINITY, f64::max);
    let (y_lo, y_hi) = padded_range(y_lo_raw, y_hi_raw);

    let root = SVGBackend::new(out, SIZE).into_drawing_area();
    root.fill(&WHITE).context("filling the canvas")?;
    let mut chart = ChartBuilder::on(&root)
        .margin(16)
        .caption("Simultaneously supported tasks", ("sans-serif", 24))
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(x_lo..x_hi, y_lo..y_hi)
        .context("laying out the chart")?;
    chart
        .configure_mesh()
        .x_desc("network size n")
        .y_desc("mean supported tasks")
        .draw()
        .context("drawing the axes")?;

    for (slot, (measure, series)) in by_measure.iter().enumerate() {
        let color = Palette99::pick(slot).to_rgba();
        if series.len() > 1 {
            let band: Vec<(f64, f64)> = series
                .iter()
                .map(|r| (r.n as f64, r.mean + r.sem))
                .chain(series.iter().rev().map(|r| (r.n as f64, r.mean - r.sem)))
                .collect();
            chart
                .draw_series(std::iter::once(Polygon::new(band, color.mix(0.2))))
                .context("shading the error band")?;
        }
        let line = color.stroke_width(2);
        chart
            .draw_series(LineSeries::new(series.iter().map(|r| (r.n as f64, r.mean)), line))
            .context("drawing the mean curve")?
            .label(measure.to_string())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], line));
        chart
            .draw_series(series.iter().map(|r| Circle::new((r.n as f64, r.mean), 3, color.filled())))
            .context("marking the samples")?;
    }

    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.85))
        .position(SeriesLabelPosition::UpperLeft)
        .draw()
        .context("drawing the legend")?;
    root.present().with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

/// Widens a data range by 5% so curves keep clear of the frame, and props
/// open degenerate ranges (a single x value or a flat line).
fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if (hi - lo).abs() < f64::EPSILON {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

//! Sampled solution series and their CSV/SVG serialization. CSV is the
//! authoritative artifact: fixed 17-significant-digit scientific notation,
//! '.' decimal separator, '\n' line endings, metadata as leading comment
//! lines — byte-identical across runs.

use crate::complex::ComplexValue;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesColumns {
    /// `zeta,re,im`
    Single,
    /// `zeta,re_u,im_u,re_v,im_v`
    Paired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

/// An ordered list of (ζ, values) samples with metadata comments.
#[derive(Debug, Clone)]
pub struct SampleSeries {
    pub meta: Vec<String>,
    pub columns: SeriesColumns,
    pub rows: Vec<(f64, Vec<ComplexValue>)>,
}

impl SampleSeries {
    pub fn new(columns: SeriesColumns) -> Self {
        SampleSeries {
            meta: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, line: impl Into<String>) -> Self {
        self.meta.push(line.into());
        self
    }

    pub fn push(&mut self, zeta: f64, values: Vec<ComplexValue>) {
        debug_assert_eq!(
            values.len(),
            match self.columns {
                SeriesColumns::Single => 1,
                SeriesColumns::Paired => 2,
            }
        );
        self.rows.push((zeta, values));
    }

    fn header(&self) -> &'static str {
        match self.columns {
            SeriesColumns::Single => "zeta,re,im",
            SeriesColumns::Paired => "zeta,re_u,im_u,re_v,im_v",
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            let _ = writeln!(out, "# {m}");
        }
        let _ = writeln!(out, "{}", self.header());
        for (z, vals) in &self.rows {
            let _ = write!(out, "{}", fmt17(*z));
            for v in vals {
                let _ = write!(out, ",{},{}", fmt17(v.re), fmt17(v.im));
            }
            out.push('\n');
        }
        out
    }

    /// Minimal self-contained polyline rendering of the real parts (solid)
    /// and imaginary parts (dashed); non-finite or off-scale samples break
    /// the polylines.
    pub fn to_svg(&self) -> String {
        const W: f64 = 800.0;
        const H: f64 = 500.0;
        const PAD: f64 = 40.0;
        let finite: Vec<f64> = self
            .rows
            .iter()
            .flat_map(|(_, vs)| vs.iter().flat_map(|v| [v.re, v.im]))
            .filter(|y| y.is_finite() && y.abs() < 1e3)
            .collect();
        let (ymin, ymax) = finite
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
                (lo.min(y), hi.max(y))
            });
        let (ymin, ymax) = if ymin < ymax {
            (ymin, ymax)
        } else {
            (-1.0, 1.0)
        };
        let (xmin, xmax) = match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) if a.0 < b.0 => (a.0, b.0),
            _ => (0.0, 1.0),
        };
        let sx = |x: f64| PAD + (x - xmin) / (xmax - xmin) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - ymin) / (ymax - ymin) * (H - 2.0 * PAD);

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(
            out,
            r##"<rect width="{W}" height="{H}" fill="white"/><line x1="{x0}" y1="{yz}" x2="{x1}" y2="{yz}" stroke="#999"/>"##,
            x0 = PAD,
            x1 = W - PAD,
            yz = sy(0.0f64.clamp(ymin, ymax)),
        );
        let colors = ["#1f77b4", "#d62728"];
        let ncurves = match self.columns {
            SeriesColumns::Single => 1,
            SeriesColumns::Paired => 2,
        };
        for curve in 0..ncurves {
            for (part, dash) in [(0usize, ""), (1usize, r#" stroke-dasharray="4 3""#)] {
                let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
                for (z, vs) in &self.rows {
                    let y = if part == 0 { vs[curve].re } else { vs[curve].im };
                    if y.is_finite() && y.abs() < 1e3 {
                        segments.last_mut().unwrap().push((sx(*z), sy(y)));
                    } else if !segments.last().unwrap().is_empty() {
                        segments.push(Vec::new());
                    }
                }
                for seg in segments.iter().filter(|s| s.len() > 1) {
                    let pts: Vec<String> =
                        seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{}"{} points="{}"/>"#,
                        colors[curve],
                        dash,
                        pts.join(" ")
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn write_to(&self, path: &Path, format: OutputFormat) -> std::io::Result<()> {
        let body = match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Svg => self.to_svg(),
        };
        std::fs::write(path, body)
    }
}

/// 17 significant digits, locale-independent.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_and_determinism() {
        let mut s = SampleSeries::new(SeriesColumns::Single).with_meta("window: [0, 1]");
        s.push(0.0, vec![ComplexValue::new(1.0, 0.0)]);
        s.push(0.5, vec![ComplexValue::new(-0.25, 1.5)]);
        let a = s.to_csv();
        let b = s.to_csv();
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(lines.next(), Some("# window: [0, 1]"));
        assert_eq!(lines.next(), Some("zeta,re,im"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.0000000000000000e0,"));
        assert!(!a.contains(','.to_string().repeat(2).as_str()));
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn paired_header() {
        let s = SampleSeries::new(SeriesColumns::Paired);
        assert!(s.to_csv().starts_with("zeta,re_u,im_u,re_v,im_v\n"));
    }

    #[test]
    fn svg_renders_polylines() {
        let mut s = SampleSeries::new(SeriesColumns::Single);
        for i in 0..=100 {
            let z = i as f64 * 0.06;
            s.push(z, vec![ComplexValue::new(z.sin(), 0.0)]);
        }
        let svg = s.to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.ends_with("</svg>\n"));
    }
}

//! CSV and SVG emission. CSV files carry a header row, LF line endings, and
//! floats printed with 17 significant digits so they parse back bit-exactly.

use std::io::{self, Write};

/// 17 significant digits; round-trips any finite f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(
    out: &mut W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// One polyline of an SVG chart.
pub struct PolySeries {
    pub points: Vec<(f64, f64)>,
    pub stroke: &'static str,
    pub dashed: bool,
}

/// Minimal self-contained SVG renderer: the series are scaled into a fixed
/// viewport and emitted as polylines, nothing more.
pub fn render_svg(series: &[PolySeries], width: u32, height: u32) -> String {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() || xmax <= xmin {
        xmin = 0.0;
        xmax = 1.0;
    }
    if !ymin.is_finite() || ymax <= ymin {
        ymin = 0.0;
        ymax = 1.0;
    }
    let margin = 10.0;
    let sx = (width as f64 - 2.0 * margin) / (xmax - xmin);
    let sy = (height as f64 - 2.0 * margin) / (ymax - ymin);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    for s in series {
        let mut points = String::new();
        for &(x, y) in &s.points {
            let px = margin + (x - xmin) * sx;
            let py = height as f64 - margin - (y - ymin) * sy;
            points.push_str(&format!("{px:.2},{py:.2} "));
        }
        let dash = if s.dashed {
            " stroke-dasharray=\"6,4\""
        } else {
            ""
        };
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\"{} points=\"{}\"/>\n",
            s.stroke,
            dash,
            points.trim_end()
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [
            0.0,
            1.0,
            -32.56637061435917,
            0.1 + 0.2,
            f64::MIN_POSITIVE,
            1.7976931348623157e308,
            -4.9e-324,
        ] {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{v} -> {s}");
        }
    }

    #[test]
    fn csv_shape() {
        let mut buf = Vec::new();
        write_csv(
            &mut buf,
            &["n", "re", "im"],
            vec![vec!["1".to_string(), fmt_float(1.0), fmt_float(0.0)]].into_iter(),
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "n,re,im\n1,1.0000000000000000e0,0.0000000000000000e0\n"
        );
        assert!(!text.contains('\r'));
    }

    #[test]
    fn svg_contains_polylines() {
        let svg = render_svg(
            &[PolySeries {
                points: vec![(1.0, 1.0), (2.0, 4.0), (3.0, 2.0)],
                stroke: "black",
                dashed: false,
            }],
            400,
            300,
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.ends_with("</svg>\n"));
    }
}

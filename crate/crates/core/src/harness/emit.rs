use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::{CurveKind, FidelityCurve};

pub const CSV_HEADER: &str = "distance_m,l,scheme,fidelity_mc,stderr_mc,fidelity_analytic";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "svg" => Ok(Self::Svg),
            other => Err(Error::InvalidArgument {
                name: "format",
                reason: format!("unknown output format `{other}` (expected csv or svg)"),
            }),
        }
    }
}

/// Formats `x` with 12 significant digits in the style of C's `%.12g`:
/// plain decimal for exponents in `-5..12`, scientific otherwise, trailing
/// zeros removed. Independent of locale.
pub fn format_significant(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn to_csv_string(curve: &FidelityCurve) -> String {
    let mut out = String::with_capacity(64 * (curve.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &curve.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_significant(r.distance_m),
            r.l,
            r.scheme.as_str(),
            format_significant(r.fidelity_mc),
            format_significant(r.stderr_mc),
            format_significant(r.fidelity_analytic),
        );
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Line plot of Monte Carlo fidelity: one series per `l` against distance,
/// or a single series against `l` for sweeps. A dashed line marks the
/// maximally mixed value 0.5.
pub fn render_svg(curve: &FidelityCurve) -> Result<String> {
    if curve.is_empty() {
        return Err(Error::EmptyInput("cannot plot an empty curve"));
    }
    let (w, h) = (720.0, 450.0);
    let (left, right, top, bottom) = (70.0, 130.0, 30.0, 55.0);
    let pw = w - left - right;
    let ph = h - top - bottom;

    let mut series: BTreeMap<i32, Vec<(f64, f64)>> = BTreeMap::new();
    let x_label = match curve.kind {
        CurveKind::Distance => {
            for r in &curve.rows {
                series.entry(r.l).or_default().push((r.distance_m, r.fidelity_mc));
            }
            "distance (m)"
        }
        CurveKind::Sweep => {
            let pts = curve.rows.iter().map(|r| (f64::from(r.l), r.fidelity_mc)).collect();
            series.insert(0, pts);
            "azimuthal order l"
        }
    };
    let xs = curve.rows.iter().map(|r| match curve.kind {
        CurveKind::Distance => r.distance_m,
        CurveKind::Sweep => f64::from(r.l),
    });
    let x_max = xs.clone().fold(f64::MIN, f64::max);
    let x_min = match curve.kind {
        CurveKind::Distance => 0.0,
        CurveKind::Sweep => xs.fold(f64::MAX, f64::min),
    };
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_min = 0.4;
    let sx = |x: f64| left + (x - x_min) / x_span * pw;
    let sy = |y: f64| top + (1.0 - (y.max(y_min) - y_min) / (1.0 - y_min)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=6 {
        let y = y_min + (1.0 - y_min) * i as f64 / 6.0;
        let py = sy(y);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.1}</text>"##,
            left + pw,
            left - 6.0,
            py + 4.0
        );
    }
    for i in 0..=5 {
        let x = x_min + x_span * i as f64 / 5.0;
        let px = sx(x);
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            top + ph + 18.0,
            format_significant((x * 100.0).round() / 100.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
        left + pw / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">fidelity</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    let half = sy(0.5);
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{half:.2}" x2="{:.2}" y2="{half:.2}" stroke="gray" stroke-dasharray="6 4"/>"#,
        left + pw
    );
    for (i, (l, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            path.join(" ")
        );
        let label = match curve.kind {
            CurveKind::Distance => format!("l = {l}"),
            CurveKind::Sweep => format!("{} end", curve.rows[0].scheme.as_str()),
        };
        let ly = top + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            left + pw + 10.0,
            left + pw + 30.0,
            left + pw + 36.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes `curve` to `path`. Nothing is written for an empty curve.
pub fn emit(curve: &FidelityCurve, format: OutputFormat, path: &Path) -> Result<()> {
    if curve.is_empty() {
        return Err(Error::EmptyInput("refusing to write an empty curve"));
    }
    let body = match format {
        OutputFormat::Csv => to_csv_string(curve),
        OutputFormat::Svg => render_svg(curve)?,
    };
    std::fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

//! Serialization of command results.
//!
//! * JSON: compact, every float written with 17 significant digits
//!   (trailing zeros dropped); non-finite values become `null`.
//! * CSV (scan rows): `c_re, c_im, class, period, summability,
//!   growth_exponent, mu_re, mu_im, flags`. Absent values are empty cells and
//!   flags are joined with `;`.
//! * PPM: binary P6, 8 bits per channel, first row at the top.
//!
//! Escape-time colors, with `t = 255 * n / max_iter` in integer arithmetic:
//! pixels that never escape are black, the rest are `(t, t*t/255, 255-t)`.
//!
//! Growth-heatmap colors: escaping cells white `(255, 255, 255)`, attracting
//! cells navy `(0, 0, 128)`, candidates without an exponent grey
//! `(128, 128, 128)`, and a candidate with exponent `g` gets
//! `(round(255 s), 0, round(255 (1 - s)))` with `s = clamp(g / 2, 0, 1)`.

use std::io::{self, Write};

use serde::Serialize;

use crate::scan::{EscapeImage, Heatmap, ScanClass, ScanRow};

/// JSON formatter writing floats with 17 significant digits.
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        writer.write_all(format_f64(value as f64).as_bytes())
    }
}

/// Seventeen significant digits, positional for moderate exponents and
/// scientific otherwise. Trailing zeros of the fraction are dropped.
pub fn format_f64(value: f64) -> String {
    if !value.is_finite() {
        return "null".into();
    }
    let sci = format!("{value:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let trim = |s: &str| s.trim_end_matches('0').to_string();
    if (-5..17).contains(&exp) {
        let (int_part, frac) = if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat((-exp - 1) as usize), digits))
        };
        let frac = trim(&frac);
        let frac = if frac.is_empty() { "0".to_string() } else { frac };
        format!("{sign}{int_part}.{frac}")
    } else {
        let frac = trim(&digits[1..]);
        let frac = if frac.is_empty() { "0".to_string() } else { frac };
        format!("{sign}{}.{frac}e{exp}", &digits[..1])
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub const CSV_HEADER: [&str; 9] =
    ["c_re", "c_im", "class", "period", "summability", "growth_exponent", "mu_re", "mu_im", "flags"];

pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let opt = |x: Option<f64>| x.map(format_f64).unwrap_or_default();
        w.write_record([
            format_f64(row.c.re),
            format_f64(row.c.im),
            row.class.as_str().to_string(),
            row.period.map(|p| p.to_string()).unwrap_or_default(),
            row.summability.map(|s| s.as_str().to_string()).unwrap_or_default(),
            opt(row.growth_exponent),
            opt(row.mu_constant.map(|m| m.re)),
            opt(row.mu_constant.map(|m| m.im)),
            row.flags.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn ppm(width: usize, height: usize, pixels: impl Iterator<Item = [u8; 3]>) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(3 * width * height);
    for px in pixels {
        out.extend_from_slice(&px);
    }
    out
}

pub fn escape_color(count: u32, max_iter: u32) -> [u8; 3] {
    if count >= max_iter {
        return [0, 0, 0];
    }
    let t = (255 * count as u64 / max_iter.max(1) as u64) as u8;
    [t, ((t as u32 * t as u32) / 255) as u8, 255 - t]
}

pub fn growth_color(value: Option<f64>, class: ScanClass) -> [u8; 3] {
    match (class, value) {
        (ScanClass::Escaping, _) => [255, 255, 255],
        (ScanClass::Attracting, _) => [0, 0, 128],
        (ScanClass::Candidate, None) => [128, 128, 128],
        (ScanClass::Candidate, Some(g)) => {
            let s = (g / 2.0).clamp(0.0, 1.0);
            [(255.0 * s).round() as u8, 0, (255.0 * (1.0 - s)).round() as u8]
        }
    }
}

pub fn escape_ppm(image: &EscapeImage) -> Vec<u8> {
    ppm(image.width, image.height, image.counts.iter().map(|&n| escape_color(n, image.max_iter)))
}

/// `rows` must be the scan that produced `heatmap`.
pub fn heatmap_ppm(heatmap: &Heatmap, rows: &[ScanRow]) -> Vec<u8> {
    ppm(heatmap.width, heatmap.height, heatmap.values.iter().zip(rows).map(|(&v, r)| growth_color(v, r.class)))
}

//! Number formatting and CSV writers. Output is byte-stable for a given input.

use std::io::{self, Write};

/// Significant digits in CSV cells.
pub const CSV_DIGITS: usize = 12;

/// `%.{sig}g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros removed. `-0` prints as `0`.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_cell(x: f64) -> String {
    fmt_sig(x, CSV_DIGITS)
}

pub fn write_row(out: &mut dyn Write, cells: &[f64]) -> io::Result<()> {
    let line = cells.iter().map(|&c| csv_cell(c)).collect::<Vec<_>>().join(",");
    writeln!(out, "{line}")
}

pub fn write_comment(out: &mut dyn Write, text: &str) -> io::Result<()> {
    writeln!(out, "# {text}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_style() {
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(-0.0, 12), "0");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(0.671_525_291_434_377_9, 12), "0.671525291434");
        assert_eq!(fmt_sig(-2.5, 12), "-2.5");
        assert_eq!(fmt_sig(1.5e-7, 12), "1.5e-07");
        assert_eq!(fmt_sig(123_456_789_012_345.0, 12), "1.23456789012e+14");
        assert_eq!(fmt_sig(0.000_012_5, 12), "1.25e-05");
        assert_eq!(fmt_sig(0.000_125, 12), "0.000125");
        assert_eq!(fmt_sig(999_999_999_999.7, 12), "1e+12");
        assert_eq!(fmt_sig(f64::INFINITY, 12), "inf");
    }

    #[test]
    fn rows() {
        let mut buf = Vec::new();
        write_row(&mut buf, &[0.0, 1.0, 0.25]).unwrap();
        write_comment(&mut buf, "done").unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0,1,0.25\n# done\n");
    }
}

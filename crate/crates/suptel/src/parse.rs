use suptel_core::rational::{self, Rational};
use suptel_core::{Error, Result};

/// Parses `p/q`, an integer, or an exact decimal such as `0.05` or `1e-3`.
pub fn exact_number(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('/') || !s.contains(['.', 'e', 'E']) {
        return rational::parse_rational(s);
    }
    let bad = || Error::Parse(format!("not an exact decimal: {s:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let shift = exponent - frac_part.len() as i64;
    if shift.unsigned_abs() > 4096 {
        return Err(bad());
    }
    let zeros = "0".repeat(shift.unsigned_abs() as usize);
    let text = if shift >= 0 {
        format!("{sign}{digits}{zeros}")
    } else {
        format!("{sign}{digits}/1{zeros}")
    };
    rational::parse_rational(&text)
}

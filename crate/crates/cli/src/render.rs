//! Number and world formatting shared by all subcommands.

use kmbc::logic::{Alphabet, WorldSet};
use kmbc::measures::KmValue;
use kmbc::prob::{exact_decimal, Rational};
use serde_json::{json, Value};

/// A real rounded to three decimals with trailing zeros dropped: `1.1`, `1.515`.
pub fn real(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn km(v: KmValue) -> String {
    real(v.to_f64())
}

/// Six-decimal JSON number; infinities become the string `"inf"`.
pub fn real_json(v: f64) -> Value {
    if v.is_finite() {
        let rounded = (v * 1e6).round() / 1e6;
        json!(if rounded == 0.0 { 0.0 } else { rounded })
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn km_json(v: KmValue) -> Value {
    real_json(v.to_f64())
}

/// A rational as `n/d`, or as its exact decimal expansion when `decimal` is
/// set and the expansion terminates.
pub fn rational(r: &Rational, decimal: bool) -> String {
    if decimal {
        if let Some(d) = exact_decimal(r) {
            return d;
        }
    }
    r.to_string()
}

/// `7/20 (0.35)`: both forms when the decimal expansion terminates.
pub fn rational_both(r: &Rational) -> String {
    match exact_decimal(r) {
        Some(d) if d != r.to_string() => format!("{r} ({d})"),
        _ => r.to_string(),
    }
}

pub fn world_list(worlds: &WorldSet, alphabet: &Alphabet) -> Vec<String> {
    worlds.iter().map(|w| alphabet.world_bits(w)).collect()
}

pub fn worlds_json(worlds: &WorldSet, alphabet: &Alphabet) -> Value {
    json!(world_list(worlds, alphabet))
}

/// `{10101 (b -p o -f w), ...}`.
pub fn worlds_text(worlds: &WorldSet, alphabet: &Alphabet) -> String {
    let items: Vec<String> =
        worlds.iter().map(|w| format!("{} ({})", alphabet.world_bits(w), alphabet.render_world(w))).collect();
    format!("{{{}}}", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmbc::prob::parse_rational;

    #[test]
    fn three_decimal_rendering() {
        assert_eq!(real(1.09954), "1.1");
        assert_eq!(real(-(0.35f64).log2()), "1.515");
        assert_eq!(real(2.0), "2");
        assert_eq!(real(0.0), "0");
        assert_eq!(real(-0.0001), "0");
        assert_eq!(real(f64::INFINITY), "inf");
    }

    #[test]
    fn json_numbers() {
        assert_eq!(real_json(1.09953567), json!(1.099536));
        assert_eq!(real_json(f64::INFINITY), json!("inf"));
    }

    #[test]
    fn rationals() {
        let r = parse_rational("7/20").unwrap();
        assert_eq!(rational(&r, false), "7/20");
        assert_eq!(rational(&r, true), "0.35");
        assert_eq!(rational_both(&r), "7/20 (0.35)");
        let third = parse_rational("1/3").unwrap();
        assert_eq!(rational(&third, true), "1/3");
        assert_eq!(rational_both(&parse_rational("1").unwrap()), "1");
    }
}

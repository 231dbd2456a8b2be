//! Fixed four-decimal formatting, rounding half away from zero on the
//! exact binary value.

use serde_json::{Number, Value};

pub const DECIMALS: usize = 4;

/// `None` for NaN and infinities.
pub fn fixed(v: f64) -> Option<String> {
    if !v.is_finite() {
        return None;
    }
    // Enough digits that the fifth decimal is exact for any practical value.
    let long = format!("{:.40}", v.abs());
    let (int, frac) = long.split_once('.').unwrap_or((&long, ""));
    let mut digits: Vec<u8> = int.bytes().chain(frac.bytes().take(DECIMALS)).collect();
    let round_up = frac.as_bytes().get(DECIMALS).is_some_and(|d| *d >= b'5');
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, b'1');
                break;
            }
            i -= 1;
            if digits[i] == b'9' {
                digits[i] = b'0';
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - DECIMALS;
    let (i, f) = digits.split_at(split);
    let body = format!("{}.{}", std::str::from_utf8(i).ok()?, std::str::from_utf8(f).ok()?);
    let zero = digits.iter().all(|d| *d == b'0');
    Some(if v < 0.0 && !zero { format!("-{body}") } else { body })
}

/// JSON number with four decimals, or `null` when undefined.
pub fn real(v: Option<f64>) -> Value {
    match v.and_then(fixed) {
        Some(s) => Value::Number(s.parse::<Number>().expect("fixed() yields a JSON number")),
        None => Value::Null,
    }
}

/// CSV cell: four decimals, or empty when undefined.
pub fn cell(v: Option<f64>) -> String {
    v.and_then(fixed).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_up() {
        assert_eq!(fixed(1.03125).unwrap(), "1.0313"); // exact tie rounds up
        assert_eq!(fixed(-1.03125).unwrap(), "-1.0313");
        assert_eq!(fixed(0.5).unwrap(), "0.5000");
        assert_eq!(fixed(81.97077536883356).unwrap(), "81.9708");
        assert_eq!(fixed(9.99995).unwrap(), "10.0000");
        assert_eq!(fixed(99999.99999).unwrap(), "100000.0000");
        assert_eq!(fixed(-0.00001).unwrap(), "0.0000");
        assert_eq!(fixed(1.0 / 3.0).unwrap(), "0.3333");
        assert!(fixed(f64::NAN).is_none());
    }

    #[test]
    fn json_keeps_decimals() {
        let v = serde_json::json!({ "x": real(Some(2.0)), "y": real(None) });
        assert_eq!(v.to_string(), r#"{"x":2.0000,"y":null}"#);
    }
}

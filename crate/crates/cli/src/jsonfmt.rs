//! JSON emission with 17-significant-digit floats.
//!
//! Results must be byte-identical across runs and thread counts, so every
//! float is rendered through one formatter (`{:.16e}`, round-trip exact for
//! f64) and non-finite values become explicit strings (JSON has no inf/nan).

use std::str::FromStr;

use serde_json::{Map, Number, Value};

pub fn float(x: f64) -> Value {
    if x.is_finite() {
        // Collapse -0.0 (e.g. from empty f64 sums) to 0.0.
        let x = if x == 0.0 { 0.0 } else { x };
        let text = format!("{x:.16e}");
        Value::Number(Number::from_str(&text).expect("formatted float is a JSON number"))
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn int(x: u64) -> Value {
    Value::Number(Number::from(x))
}

pub fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for &x in &[
            1.0,
            -0.0,
            std::f64::consts::E,
            1.0 / 3.0,
            6.02e23,
            5e-324,
            -1.2345678901234567e-100,
        ] {
            let v = float(x);
            let text = serde_json::to_string(&v).unwrap();
            let back: f64 = text.trim_matches('"').parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} vs {back} via {text}");
        }
        assert_eq!(serde_json::to_string(&float(f64::NEG_INFINITY)).unwrap(), "\"-inf\"");
    }
}

//! Numeric list syntax shared by flags and config files.
//!
//! A list is comma separated. Each item is a float, `p/q`, `B^e`, `sqrt(x)`
//! or a range `B^a..B^b` that expands to every integer exponent between `a`
//! and `b` inclusive, in the written order.

use serde::{Deserialize, Deserializer};

pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("cannot parse number {s:?}");
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return Ok(parse_number(inner)?.sqrt());
    }
    if let Some((p, q)) = s.split_once('/') {
        return Ok(parse_number(p)? / parse_number(q)?);
    }
    if let Some((b, e)) = s.split_once('^') {
        let base: f64 = b.trim().parse().map_err(|_| bad())?;
        let exp: f64 = e.trim().parse().map_err(|_| bad())?;
        return Ok(base.powf(exp));
    }
    let v: f64 = s.parse().map_err(|_| bad())?;
    if v.is_nan() {
        return Err(bad());
    }
    Ok(v)
}

fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let (lo, hi) = s.split_once("..").expect("caller checked");
    let split = |t: &str| -> Result<(f64, i32), String> {
        let (b, e) = t.trim().split_once('^').ok_or_else(|| format!("range endpoint {t:?} must be B^k"))?;
        let base: f64 = b.trim().parse().map_err(|_| format!("bad range base in {t:?}"))?;
        let exp: i32 = e.trim().parse().map_err(|_| format!("range exponent in {t:?} must be an integer"))?;
        Ok((base, exp))
    };
    let ((b0, e0), (b1, e1)) = (split(lo)?, split(hi)?);
    if b0 != b1 {
        return Err(format!("range {s:?} mixes bases"));
    }
    let step = if e1 >= e0 { 1 } else { -1 };
    let mut out = Vec::new();
    let mut e = e0;
    loop {
        out.push(b0.powi(e));
        if e == e1 {
            break;
        }
        e += step;
    }
    Ok(out)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if item.contains("..") {
            out.extend(parse_range(item)?);
        } else {
            out.push(parse_number(item)?);
        }
    }
    if out.is_empty() {
        return Err(format!("empty list {s:?}"));
    }
    Ok(out)
}

pub fn parse_triangle(s: &str) -> Result<[f64; 3], String> {
    let v = parse_list(s)?;
    v.as_slice().try_into().map_err(|_| format!("expected three side lengths, got {}", v.len()))
}

/// Accepts a list string or a JSON array of numbers, stored as a string.
pub fn list_or_string<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Number(f64),
        Numbers(Vec<f64>),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::Text(s) => s,
        Raw::Number(v) => v.to_string(),
        Raw::Numbers(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn items() {
        assert_eq!(parse_number("2^-3").unwrap(), 0.125);
        assert_eq!(parse_number("1/8").unwrap(), 0.125);
        assert_eq!(parse_number("sqrt(2)").unwrap(), std::f64::consts::SQRT_2);
        assert!(parse_number("x").is_err());
        assert!(parse_number("NaN").is_err());
    }

    #[test]
    fn ranges_keep_written_order() {
        assert_eq!(parse_list("2^-3..2^-6").unwrap(), vec![0.125, 0.0625, 0.03125, 0.015625]);
        assert_eq!(parse_list("2^1..2^2, 0.5").unwrap(), vec![2.0, 4.0, 0.5]);
        assert!(parse_list("2^-3..3^-4").is_err());
        assert!(parse_list("").is_err());
    }

    #[test]
    fn triangles() {
        assert_eq!(parse_triangle("1,1,sqrt(2)").unwrap()[2], std::f64::consts::SQRT_2);
        assert!(parse_triangle("1,1").is_err());
    }

    #[test]
    fn json_arrays_round_trip() {
        #[derive(Deserialize)]
        struct W {
            #[serde(deserialize_with = "list_or_string")]
            v: String,
        }
        let w: W = serde_json::from_str(r#"{"v": [0.1, 0.0625]}"#).unwrap();
        assert_eq!(parse_list(&w.v).unwrap(), vec![0.1, 0.0625]);
        let w: W = serde_json::from_str(r#"{"v": "2^-2..2^-3"}"#).unwrap();
        assert_eq!(parse_list(&w.v).unwrap(), vec![0.25, 0.125]);
    }
}

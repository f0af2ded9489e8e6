//! Fixed-precision rendering shared by every report: numbers carry 12
//! significant digits in JSON, CSV and text alike.

use serde::Serializer;

pub const SIG_DIGITS: usize = 12;

/// Round to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// `%.12g`-style rendering: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -5 || exp >= SIG_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{exp}")
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// serde helper: `#[serde(serialize_with = "sig12")]`.
pub fn sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

pub fn sig12_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_f64(round_sig(*v)),
        None => s.serialize_none(),
    }
}

pub fn sig12_map<S: Serializer>(
    m: &std::collections::BTreeMap<String, f64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &round_sig(*v))?;
    }
    map.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(243.5257202587127), "243.525720259");
        assert_eq!(fmt_sig(1e-7), "1e-7");
        assert_eq!(fmt_sig(-0.000123456789012345), "-0.000123456789012");
        assert_eq!(fmt_sig(1.5e20), "1.5e20");
        assert_eq!(fmt_sig(100.0), "100");
        assert_eq!(fmt_sig(0.0), "0");
    }

    proptest! {
        #[test]
        fn text_and_json_encode_the_same_value(x in -1e12f64..1e12) {
            let text: f64 = fmt_sig(x).parse().unwrap();
            prop_assert_eq!(text, round_sig(x));
            let json = serde_json::to_string(&round_sig(x)).unwrap();
            let back: f64 = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, round_sig(x));
            prop_assert_eq!(round_sig(back), back);
        }
    }
}

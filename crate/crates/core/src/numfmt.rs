//! Round-trip float formatting: 17 significant digits, positional notation,
//! trailing zeros trimmed (`1.0`, `0.57735026918962573`).

pub fn format_f64(x: f64) -> String {
    if x.is_nan() || x.is_infinite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if neg { "-" } else { "" };

    if !(-20..=20).contains(&exp) {
        let (lead, frac) = digits.split_at(1);
        let frac = trim_frac(frac);
        return format!("{sign}{lead}.{frac}e{exp}");
    }
    let (int_part, frac_part) = if exp >= 0 {
        let split = exp as usize + 1;
        if split >= digits.len() {
            (format!("{digits}{}", "0".repeat(split - digits.len())), String::new())
        } else {
            (digits[..split].to_string(), digits[split..].to_string())
        }
    } else {
        ("0".to_string(), format!("{}{digits}", "0".repeat((-exp - 1) as usize)))
    };
    format!("{sign}{int_part}.{}", trim_frac(&frac_part))
}

fn trim_frac(frac: &str) -> &str {
    let t = frac.trim_end_matches('0');
    if t.is_empty() {
        "0"
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(format_f64(1.0), "1.0");
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(24.0), "24.0");
        assert_eq!(format_f64((1.0f64 / 3.0).sqrt()), "0.57735026918962573");
        assert_eq!(format_f64(-0.25), "-0.25");
        assert_eq!(format_f64(0.0), "0.0");
        assert_eq!(format_f64(1e-30), "1.0000000000000001e-30");
        assert_eq!(format_f64(2f64.powi(-100)), "7.8886090522101181e-31");
        assert_eq!(format_f64(123456.0), "123456.0");
    }

    proptest! {
        #[test]
        fn round_trips_bitwise(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let back: f64 = format_f64(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}

//! Number formatting shared by the canonical printers.

use num_complex::Complex64;

const SIGNIFICANT: usize = 12;

/// Formats `x` with 12 significant digits in the style of C's `%.12g`,
/// normalizing `-0` to `0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let body = if !(-5..SIGNIFICANT as i32).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    } else if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let point = exp as usize + 1;
        if digits.len() <= point {
            format!("{digits}{}", "0".repeat(point - digits.len()))
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Complex coefficient literal: `2`, `-0.5i`, or `(1-2i)`.
pub fn format_coefficient(c: Complex64) -> String {
    let re = format_real(c.re);
    let im = format_real(c.im);
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ => {
            if let Some(rest) = im.strip_prefix('-') {
                format!("({re}-{rest}i)")
            } else {
                format!("({re}+{im}i)")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(-0.0), "0");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_real(123456.0), "123456");
        assert_eq!(format_real(1e12), "1e12");
        assert_eq!(format_real(1.5e-7), "1.5e-7");
        assert_eq!(format_real(0.00012), "0.00012");
        assert_eq!(format_real(-2.25), "-2.25");
        assert_eq!(format_real(0.99999999999999), "1");
        assert_eq!(format_real(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
    }

    #[test]
    fn complex_literals() {
        assert_eq!(format_coefficient(Complex64::new(2.0, 0.0)), "2");
        assert_eq!(format_coefficient(Complex64::new(0.0, -0.5)), "-0.5i");
        assert_eq!(format_coefficient(Complex64::new(1.0, -2.0)), "(1-2i)");
        assert_eq!(format_coefficient(Complex64::new(-1.0, 2.0)), "(-1+2i)");
    }

    #[test]
    fn output_parses_back_to_the_same_text() {
        for &x in &[1.0 / 7.0, -3.25e-9, 6.02214076e23, 42.0, 1e-5, 9.99999999999995] {
            let s = format_real(x);
            let y: f64 = s.parse().unwrap();
            assert_eq!(format_real(y), s);
        }
    }
}

//! Number rendering shared by the CLI and the file formats.

/// `%.{digits}g`-style rendering: `digits` significant digits, trailing
/// zeros dropped, scientific notation outside `[1e-5, 1e15)`.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Fifteen significant digits, the precision of every float the CLI prints.
pub fn f15(x: f64) -> String {
    sig(x, 15)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(f15(5.783185962946784), "5.78318596294678");
        assert_eq!(f15(0.25), "0.25");
        assert_eq!(f15(1.0), "1");
        assert_eq!(f15(-0.0138472), "-0.0138472");
        assert_eq!(f15(1234567.0), "1234567");
        assert_eq!(f15(1.5e-9), "1.5e-9");
        assert_eq!(f15(2.0e20), "2e20");
        assert_eq!(sig(std::f64::consts::PI, 4), "3.142");
        assert_eq!(f15(0.0), "0");
    }
}

//! Number formatting for the CSV output.

/// `x` with `digits` significant digits in positional notation.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = decimal_exponent(x, digits);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Exponent of `x` after rounding to `digits` significant digits.
fn decimal_exponent(x: f64, digits: usize) -> i32 {
    let sci = format!("{:.*e}", digits - 1, x);
    sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0)
}

/// Two significant digits as `0.dd e<exp>`, the `0.24 * 10^-12` style:
/// `2.4e-13` becomes `0.24e-12`.
pub fn residual(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = decimal_exponent(x, 2) + 1;
    let mantissa = x / 10f64.powi(exp);
    let m = format!("{mantissa:.2}");
    // rounding can carry to 1.00; redo one decade up
    if m.trim_start_matches('-').starts_with("1.") {
        return format!("{:.2}e{}", mantissa / 10.0, exp + 1);
    }
    format!("{m}e{exp}")
}

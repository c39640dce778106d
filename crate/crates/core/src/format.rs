//! Number formatting shared by reports and report records.

/// Up to 12 significant digits, no trailing zeros, `0` for signed zero.
/// Magnitudes outside `[1e-5, 1e15)` use exponent notation.
pub fn fmt_g(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    if rounded == 0.0 {
        return "0".into();
    }
    let a = rounded.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Outcome values with an explicit sign, e.g. `+1`, `-1`, `+0.5`.
pub fn fmt_outcome(v: f64) -> String {
    let s = fmt_g(v);
    if s.starts_with('-') || s == "0" {
        s
    } else {
        format!("+{s}")
    }
}

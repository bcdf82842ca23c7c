//! Number formatting shared by the text outputs.

/// Formats `x` with 17 significant digits, which round-trips any `f64`.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let e = x.abs().log10().floor() as i32;
    if !(-6..=16).contains(&e) {
        return format!("{x:.16e}");
    }
    let decimals = (16 - e).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for &x in &[1.0, -0.1, std::f64::consts::PI, 1e-9, 12345.678, 3.0e20, -2.5e-7] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sig17(0.0), "0");
        assert_eq!(sig17(1.5), "1.5000000000000000");
    }
}

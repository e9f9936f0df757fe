//! Float formatting for reports: 6 significant digits, trailing zeros
//! stripped, printf `%g`-style switch to scientific notation for extreme
//! magnitudes. Deterministic, locale-free.

pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_owned();
    }
    if v == 0.0 {
        return "0".to_owned();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..6).contains(&exp) {
        let s = format!("{v:.5e}");
        // trim zeros in the mantissa: 1.50000e8 -> 1.5e8
        let (mant, e) = s.split_once('e').expect("exponent marker");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{e}")
    } else {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    }
}

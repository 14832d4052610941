//! Text formatting shared by tabular outputs.

/// Six significant digits, trailing zeros trimmed; scientific notation
/// outside `[1e-5, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.5e}", x);
    let v: f64 = s.parse().expect("formatted float");
    let mag = v.abs().log10().floor() as i32;
    if (-5..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        let t = format!("{v:.decimals$}");
        if t.contains('.') {
            t.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            t
        }
    } else {
        s
    }
}

pub mod complexity;
pub mod dynamics;
pub mod generate;
pub mod gordon;
pub mod lyapunov;
pub mod spectrum;
pub mod tracemap;

/// `n` points of `[lo, hi]`, equally spaced, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

pub fn fmt_g(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e5) {
        format!("{x:.6e}")
    } else {
        format!("{x:.6}")
    }
}

use crate::math::exp;

/// `e^{(c − γak²)t}·cos(kx)`, the solution of `u_t = γa·u'' + c·u` with `u₀ = cos(kx)`.
pub fn exact_constant_solution(gamma: f64, a: f64, c: f64, k: f64, t: f64, x: f64) -> f64 {
    exp((c - gamma * a * k * k) * t) * libm::cos(k * x)
}

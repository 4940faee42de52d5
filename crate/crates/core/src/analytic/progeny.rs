/// Largest `n` summed as an explicit product.
const PRODUCT_LIMIT: u64 = 256;

/// `ln P(Z > n)` for the total progeny `Z` of a critical binary branching
/// process started from one individual, `P(Z > n) = 4^{-n} C(2n, n)`.
///
/// Small `n` use `Π_{k=1}^n (2k-1)/(2k)`. Larger `n` use the Stirling series
/// of `ln Γ(2n+1) - 2 ln Γ(n+1) - 2n ln 2` with the leading terms cancelled
/// by hand:
///
/// ```text
/// -½ ln(πn) - 1/(8n) + 1/(192n³) - 1/(640n⁵)
/// ```
pub fn ln_total_progeny_tail(n: u64) -> f64 {
    if n <= PRODUCT_LIMIT {
        let mut p = 1.0;
        for k in 1..=n {
            p *= (2 * k - 1) as f64 / (2 * k) as f64;
        }
        return p.ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv3 = inv * inv * inv;
    -0.5 * (std::f64::consts::PI * x).ln() - inv / 8.0 + inv3 / 192.0 - inv3 * inv * inv / 640.0
}

/// `P(Z > n) = 4^{-n} C(2n, n)`.
pub fn total_progeny_tail(n: u64) -> f64 {
    ln_total_progeny_tail(n).exp()
}

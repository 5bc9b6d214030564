//! Golden-section search for one-dimensional convex (resp. concave) objectives.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Minimizes a unimodal `f` over `[lo, hi]`, shrinking the bracket to width `tol`.
///
/// Returns the best abscissa/value pair seen, including the bracket endpoints.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    debug_assert!(tol > 0.0);
    if hi <= lo {
        let v = f(lo);
        return (lo, v);
    }
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        let cand = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        if cand.1 < best.1 {
            best = cand;
        }
    }
    let fa = f(lo);
    if fa < best.1 {
        best = (lo, fa);
    }
    let fb = f(hi);
    if fb < best.1 {
        best = (hi, fb);
    }
    best
}

/// Maximizes a unimodal `f` over `[lo, hi]` to bracket width `tol`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, neg) = golden_section_min(|t| -f(t), lo, hi, tol);
    (x, -neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let (x, v) = golden_section_min(|t| (t - 1.25) * (t - 1.25) + 3.0, 0.0, 10.0, 1e-10);
        assert!((x - 1.25).abs() < 1e-8);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_minimum_is_found() {
        let (x, _) = golden_section_min(|t| t, 2.0, 5.0, 1e-12);
        assert!((x - 2.0).abs() < 1e-10);
    }

    #[test]
    fn max_is_min_of_negation() {
        let (x, v) = golden_section_max(|t| -(t - 2.0) * (t - 2.0), 0.0, 4.0, 1e-10);
        assert!((x - 2.0).abs() < 1e-8);
        assert!(v.abs() < 1e-12);
    }
}

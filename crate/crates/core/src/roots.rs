/// A bracket `[lo, hi]` around the root of a monotone function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub iterations: u32,
}

/// Shrinks `[lo, hi]` by bisection until `hi - lo <= tol · max(1, lo)`.
///
/// `is_below(x)` must be true on `[lo, root)` and false on `(root, hi]`.
pub(crate) fn bisect(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut is_below: impl FnMut(f64) -> bool,
) -> Bracket {
    let mut iterations = 0;
    // 2000 halvings exhaust any f64 interval
    while hi - lo > tol * lo.max(1.0) && iterations < 2000 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if is_below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Bracket { lo, hi, iterations }
}

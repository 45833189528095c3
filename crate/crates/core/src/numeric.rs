//! Small interpolation and quadrature helpers.

use crate::Real;

/// Index `i` of the segment `[xs[i], xs[i+1]]` containing `x`, for ascending `xs`
/// with at least two points. Clamped to the first/last segment.
pub(crate) fn segment<T: Real>(xs: &[T], x: T) -> usize {
    debug_assert!(xs.len() >= 2);
    let upper = xs.partition_point(|&p| p <= x);
    upper.clamp(1, xs.len() - 1) - 1
}

/// Piecewise-linear interpolation with constant extrapolation.
pub(crate) fn interp_clamped<T: Real>(xs: &[T], ys: &[T], x: T) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => ys[0],
        _ if x <= xs[0] => ys[0],
        n if x >= xs[n - 1] => ys[n - 1],
        _ => {
            let i = segment(xs, x);
            let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
            ys[i] + w * (ys[i + 1] - ys[i])
        }
    }
}

/// Piecewise-linear interpolation, zero outside `[xs[0], xs[last]]`.
pub(crate) fn interp_zero<T: Real>(xs: &[T], ys: &[T], x: T) -> T {
    match xs.len() {
        0 => T::zero(),
        n if x < xs[0] || x > xs[n - 1] => T::zero(),
        1 => ys[0],
        _ => interp_clamped(xs, ys, x),
    }
}

/// Slope of the linear segment containing `x`; zero outside the table.
pub(crate) fn slope_zero<T: Real>(xs: &[T], ys: &[T], x: T) -> T {
    let n = xs.len();
    if n < 2 || x < xs[0] || x > xs[n - 1] {
        return T::zero();
    }
    let i = segment(xs, x);
    (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
}

/// Composite trapezoid rule on `[a, b]` with `intervals` equal sub-intervals.
pub fn trapezoid<T: Real>(a: T, b: T, intervals: usize, f: impl Fn(T) -> T) -> T {
    let n = intervals.max(1);
    let h = (b - a) / T::from_usize_lossy(n);
    let mut sum = (f(a) + f(b)) * T::lit(0.5);
    for i in 1..n {
        sum = sum + f(a + h * T::from_usize_lossy(i));
    }
    sum * h
}

pub(crate) fn check_ascending<T: Real>(what: &str, xs: &[T]) -> crate::Result<()> {
    if xs.is_empty() {
        return Err(crate::Error::Config(format!("{what}: table is empty")));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(crate::Error::Config(format!("{what}: non-finite entry")));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(crate::Error::Config(format!(
            "{what}: abscissae must be strictly ascending"
        )));
    }
    Ok(())
}

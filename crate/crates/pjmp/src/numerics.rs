//! Small shared numeric helpers.

/// Composite Simpson quadrature with `panels` panels (`panels` even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 2 && panels.is_multiple_of(2), "panels must be even");
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Log-spaced grid from `lo` to `hi` with `per_decade` points per decade,
/// endpoints included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && per_decade >= 1);
    let decades = (hi / lo).log10();
    let count = ((decades * per_decade as f64).ceil() as usize).max(1);
    let mut grid = Vec::with_capacity(count + 1);
    for k in 0..=count {
        grid.push(lo * 10f64.powf(decades * k as f64 / count as f64));
    }
    *grid.last_mut().unwrap() = hi;
    grid
}

/// Evenly spaced grid with `count >= 2` points, endpoints included.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

/// Neumaier compensated summation; order-insensitive up to rounding of the
/// compensation itself, used where reductions must not depend on chunking.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let got = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 2);
        assert!((got - (4.0 - 4.0)).abs() < 1e-14);
    }

    #[test]
    fn log_grid_covers_endpoints() {
        let g = log_grid(0.01, 10.0, 8);
        assert_eq!(*g.first().unwrap(), 0.01);
        assert_eq!(*g.last().unwrap(), 10.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn compensated_sum_beats_naive_on_cancellation() {
        let vals = vec![1.0, 1e-16, -1.0, 1e-16, 1.0, -1.0];
        assert_eq!(compensated_sum(&vals), 2e-16);
    }
}

//! Small numerical helpers shared across modules.

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximum of `f` on `[a, b]`: a uniform mesh of `mesh + 1` points, then
/// golden-section polishing around the best `keep` local maxima.
pub fn mesh_max(f: impl Fn(f64) -> f64, a: f64, b: f64, mesh: usize, keep: usize) -> (f64, f64) {
    let mesh = mesh.max(2);
    let h = (b - a) / mesh as f64;
    let xs: Vec<f64> = (0..=mesh).map(|j| if j == mesh { b } else { a + h * j as f64 }).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = (xs[0], vs[0]);
    for (x, v) in xs.iter().zip(&vs) {
        if *v > best.1 || best.1.is_nan() {
            best = (*x, *v);
        }
    }
    let mut peaks: Vec<usize> = (0..=mesh)
        .filter(|&i| (i == 0 || vs[i] >= vs[i - 1]) && (i == mesh || vs[i] >= vs[i + 1]))
        .collect();
    peaks.sort_by(|&i, &j| vs[j].total_cmp(&vs[i]));
    peaks.truncate(keep);
    let tol = 1e-13 * (b - a).abs().max(f64::MIN_POSITIVE);
    for i in peaks {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(mesh)];
        let (x, v) = golden_max(&f, lo, hi, tol);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v <= 0.0);
    }

    #[test]
    fn mesh_max_finds_the_global_peak() {
        let f = |x: f64| (7.0 * x).sin() + 0.1 * x;
        let (x, v) = mesh_max(f, 0.0, 3.0, 64, 4);
        // Peaks at (π/2 + 2πk)/7 shifted slightly by the linear term; the last one wins.
        assert!(x > 2.0 && v > 1.2);
        let grid = (0..=30000).map(|j| f(3.0 * j as f64 / 30000.0)).fold(f64::MIN, f64::max);
        assert!(v >= grid - 1e-12);
    }
}

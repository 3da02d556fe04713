//! Small scalar numerics shared by the solvers: grids, bracketing roots and
//! one-dimensional minimization.

/// `n` points spaced geometrically from `lo` to `hi` inclusive.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "geomspace needs 0 < lo < hi, n >= 2");
    let step = (hi / lo).ln() / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|k| lo * (step * k as f64).exp()).collect();
    out[n - 1] = hi;
    out
}

/// Root of `f` on `[a, b]` given a sign change, to relative width `rel_tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= rel_tol * m.abs().max(f64::MIN_POSITIVE) {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimum of a unimodal `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..300 {
        if (b - a).abs() <= rel_tol * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimum of `f` over a grid, refined by golden section around the best node.
pub fn grid_min<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> (f64, f64) {
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let k = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("non-empty grid");
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let (x, fx) = golden_min(&f, lo, hi, 1e-13);
    if fx < vals[k] {
        (x, fx)
    } else {
        (grid[k], vals[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geomspace_endpoints() {
        let g = geomspace(1.0, 100.0, 3);
        assert_eq!(g[0], 1.0);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(g[2], 100.0);
    }

    #[test]
    fn bisect_sqrt2() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15);
        assert!((x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn golden_and_grid() {
        let (x, fx) = golden_min(|x| (x - 1.3).powi(2) + 0.5, 0.0, 4.0, 1e-12);
        assert!((x - 1.3).abs() < 1e-6 && (fx - 0.5).abs() < 1e-12);
        let grid = geomspace(0.1, 10.0, 50);
        let (x, _) = grid_min(|x| (x.ln() - 0.7).powi(2), &grid);
        assert!((x - 0.7f64.exp()).abs() < 1e-5);
    }
}

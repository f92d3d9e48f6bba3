//! Small numerical kernels shared by the geometric modules.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::error::{Error, Result};

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `lower[i]` multiplies `x[i]` in row `i + 1`, `upper[i]` multiplies
/// `x[i + 1]` in row `i`.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n || rhs.len() != n {
        return Err(Error::Solver("tridiagonal system has inconsistent lengths".into()));
    }
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::Solver("zero pivot in tridiagonal solve".into()));
    }
    c.push(if n > 1 { upper[0] / pivot } else { 0.0 });
    d.push(rhs[0] / pivot);
    for i in 1..n {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Solver("zero pivot in tridiagonal solve".into()));
        }
        c.push(if i + 1 < n { upper[i] / pivot } else { 0.0 });
        d.push((rhs[i] - lower[i - 1] * d[i - 1]) / pivot);
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    Ok(x)
}

/// Composite Simpson rule on a uniform grid with an even number of intervals.
pub fn simpson(values: &[f64], spacing: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidSamples(
            "Simpson quadrature needs an odd number (>= 3) of uniform samples".into(),
        ));
    }
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(acc * spacing / 3.0)
}

/// Classical fourth-order Runge–Kutta for a scalar ODE `y' = f(t, y)`.
///
/// The interval is split into `ceil((t1 - t0) / step)` equal steps so the
/// final node lands exactly on `t1`. `guard` sees every accepted node and
/// may abort the integration.
pub fn rk4<F, G>(f: F, t0: f64, y0: f64, t1: f64, step: f64, mut guard: G) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(f64, f64) -> f64,
    G: FnMut(f64, f64) -> Result<()>,
{
    if !(t1 > t0) || !(step > 0.0) {
        return Err(Error::Parameter("RK4 needs t1 > t0 and a positive step".into()));
    }
    let steps = ((t1 - t0) / step).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let mut ts = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    let mut y = y0;
    guard(t0, y)?;
    ts.push(t0);
    ys.push(y);
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let t_next = if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h };
        guard(t_next, y)?;
        ts.push(t_next);
        ys.push(y);
    }
    Ok((ts, ys))
}

/// First and second derivatives by central differences with one level of
/// Richardson extrapolation. Returns `(d1, d2, disagreement)` where the
/// disagreement is the larger of the two step-halving corrections.
pub fn richardson_central<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> (f64, f64, f64) {
    let fx = f(x);
    let stencil = |h: f64| {
        let (fp, fm) = (f(x + h), f(x - h));
        ((fp - fm) / (2.0 * h), (fp - 2.0 * fx + fm) / (h * h))
    };
    let (d1_h, d2_h) = stencil(h);
    let (d1_half, d2_half) = stencil(0.5 * h);
    let d1 = (4.0 * d1_half - d1_h) / 3.0;
    let d2 = (4.0 * d2_half - d2_h) / 3.0;
    let err = ((d1_half - d1_h).abs() / 3.0).max((d2_half - d2_h).abs() / 3.0);
    (d1, d2, err)
}

/// One-sided second-order derivatives (forward if `dir > 0`, backward
/// otherwise) with one Richardson level, for stencils at a domain edge.
pub fn richardson_one_sided<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, dir: f64) -> (f64, f64, f64) {
    let s = if dir > 0.0 { 1.0 } else { -1.0 };
    let stencil = |h: f64| {
        let f0 = f(x);
        let f1 = f(x + s * h);
        let f2 = f(x + 2.0 * s * h);
        let f3 = f(x + 3.0 * s * h);
        let d1 = s * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
        let d2 = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
        (d1, d2)
    };
    let (d1_h, d2_h) = stencil(h);
    let (d1_half, d2_half) = stencil(0.5 * h);
    let d1 = (4.0 * d1_half - d1_h) / 3.0;
    let d2 = (4.0 * d2_half - d2_h) / 3.0;
    let err = ((d1_half - d1_h).abs() / 3.0).max((d2_half - d2_h).abs() / 3.0);
    (d1, d2, err)
}

/// Linear least squares for a handful of coefficients.
///
/// `rows[i]` holds the basis functions evaluated at sample `i`. Returns the
/// coefficients and the RMS residual.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let p = rows.first().map_or(0, Vec::len);
    if p == 0 || rows.len() < p || rows.len() != y.len() {
        return Err(Error::Extraction("least-squares fit is underdetermined".into()));
    }
    // Column scaling keeps the normal equations well conditioned when the
    // basis functions differ by many orders of magnitude.
    let mut scale = alloc::vec![0.0_f64; p];
    for row in rows {
        for (s, v) in scale.iter_mut().zip(row) {
            *s = s.max(v.abs());
        }
    }
    for s in scale.iter_mut() {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    let mut a = alloc::vec![alloc::vec![0.0_f64; p + 1]; p];
    for (row, &yi) in rows.iter().zip(y) {
        for j in 0..p {
            let rj = row[j] / scale[j];
            for k in 0..p {
                a[j][k] += rj * row[k] / scale[k];
            }
            a[j][p] += rj * yi;
        }
    }
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, piv);
        let d = a[col][col];
        if d.abs() < 1e-300 {
            return Err(Error::Extraction("singular least-squares system".into()));
        }
        for r in 0..p {
            if r != col {
                let factor = a[r][col] / d;
                let pivot = a[col].clone();
                for (x, v) in a[r][col..=p].iter_mut().zip(&pivot[col..=p]) {
                    *x -= factor * v;
                }
            }
        }
    }
    let coeffs: Vec<f64> = (0..p).map(|j| a[j][p] / a[j][j] / scale[j]).collect();
    let mut ss = 0.0;
    for (row, &yi) in rows.iter().zip(y) {
        let fit: f64 = row.iter().zip(&coeffs).map(|(b, c)| b * c).sum();
        ss += (fit - yi) * (fit - yi);
    }
    Ok((coeffs, (ss / y.len() as f64).sqrt()))
}

/// Surface area of the unit round sphere `S^{k}` (`ω_k`).
pub fn unit_sphere_area(k: usize) -> f64 {
    use core::f64::consts::PI;
    // ω_0 = 2, ω_1 = 2π, ω_k = 2π/(k-1) ω_{k-2}
    let (mut a, mut b) = (2.0, 2.0 * PI);
    if k == 0 {
        return a;
    }
    for j in 2..=k {
        let next = 2.0 * PI / (j as f64 - 1.0) * a;
        a = b;
        b = next;
    }
    b
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    use core::f64::consts::PI;
    let mut nodes = alloc::vec![0.0; m];
    let mut weights = alloc::vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * p1 - pm) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫_a^b f` by composite Gauss–Legendre over `panels` equal panels.
pub fn integrate_gl<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        for (x, w) in rule.0.iter().zip(&rule.1) {
            acc += w * f(mid + 0.5 * width * x);
        }
    }
    0.5 * width * acc
}

/// Smooth step `S(y) = e^{-1/y}/(e^{-1/y} + e^{-1/(1-y)})` with its first
/// two derivatives; `S = 0` for `y <= 0` and `1` for `y >= 1`.
pub fn smooth_step(y: f64) -> (f64, f64, f64) {
    if y <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if y >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    // S = L(q) with L(z) = 1/(1 + e^z), q = 1/y - 1/(1-y).
    let q = 1.0 / y - 1.0 / (1.0 - y);
    let dq = -1.0 / (y * y) - 1.0 / ((1.0 - y) * (1.0 - y));
    let ddq = 2.0 / (y * y * y) - 2.0 / ((1.0 - y) * (1.0 - y) * (1.0 - y));
    let l = 1.0 / (1.0 + q.exp());
    let dl = -l * (1.0 - l);
    let ddl = -dl * (1.0 - 2.0 * l);
    (l, dl * dq, ddl * dq * dq + dl * ddq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn thomas_matches_dense_solution() {
        // [2 1 0; 1 3 1; 0 1 4] x = [3, 5, 5] -> x = [1, 1, 1]
        let x = solve_tridiagonal(&[1.0, 1.0], &[2.0, 3.0, 4.0], &[1.0, 1.0], &[3.0, 5.0, 5.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let h = 0.25;
        let vals: Vec<f64> = (0..9).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson(&vals, h).unwrap() - 4.0).abs() < 1e-14);
        assert!(simpson(&vals[..8], h).is_err());
    }

    #[test]
    fn rk4_hits_the_endpoint_and_is_accurate() {
        let (ts, ys) = rk4(|_, y| -y, 0.0, 1.0, 1.0, 0.01, |_, _| Ok(())).unwrap();
        assert_eq!(*ts.last().unwrap(), 1.0);
        assert!((ys.last().unwrap() - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((unit_sphere_area(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn richardson_derivatives_of_sine() {
        let (d1, d2, err) = richardson_central(f64::sin, 0.7, 1e-3);
        assert!((d1 - 0.7f64.cos()).abs() < 1e-10);
        assert!((d2 + 0.7f64.sin()).abs() < 1e-6);
        assert!(err < 1e-6);
        let (f1, f2, _) = richardson_one_sided(f64::sin, 0.7, 1e-3, 1.0);
        assert!((f1 - 0.7f64.cos()).abs() < 1e-9);
        assert!((f2 + 0.7f64.sin()).abs() < 1e-5);
    }

    #[test]
    fn gauss_legendre_is_exact_for_high_degree() {
        let rule = gauss_legendre(16);
        assert!((rule.1.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let v = integrate_gl(|x| x.powi(30), 0.0, 1.0, 1, &rule);
        assert!((v - 1.0 / 31.0).abs() < 1e-14);
        let odd = gauss_legendre(7);
        assert!(odd.0[3].abs() < 1e-15);
        assert!((integrate_gl(f64::exp, 0.0, 2.0, 3, &odd) - (2.0f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn smooth_step_derivatives() {
        for &y in &[0.1, 0.37, 0.5, 0.8, 0.97] {
            let (s, d, dd) = smooth_step(y);
            let h = 1e-5;
            let (sp, sm) = (smooth_step(y + h).0, smooth_step(y - h).0);
            assert!((d - (sp - sm) / (2.0 * h)).abs() < 1e-6);
            assert!((dd - (sp - 2.0 * s + sm) / (h * h)).abs() < 1e-3 * (1.0 + dd.abs()));
        }
        assert!((smooth_step(0.5).0 - 0.5).abs() < 1e-15);
        let (s, d, dd) = smooth_step(1e-3);
        assert!(s == 0.0 && d.abs() == 0.0 && dd.abs() == 0.0);
    }

    #[test]
    fn least_squares_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| alloc::vec![1.0, x]).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.5 * x).collect();
        let (c, res) = least_squares(&rows, &ys).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-12 && (c[1] + 0.5).abs() < 1e-12);
        assert!(res < 1e-12);
    }
}

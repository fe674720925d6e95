//! Gauss rules on intervals and simplices.

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let m = order.max(1);
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        // Initial guess from the asymptotic formula, then Newton on P_m.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Collapsed-coordinate Gauss rule on the standard `p`-simplex
/// `{t ≥ 0, Σ t ≤ 1}`: points in `t`-coordinates with positive weights
/// summing to `1/p!`. Exact for polynomials of degree `≤ 2·order - 1`.
pub fn simplex_rule(p: usize, order: usize) -> Vec<(Vec<f64>, f64)> {
    if p == 0 {
        return vec![(Vec::new(), 1.0)];
    }
    // Extra points absorb the polynomial Jacobian of the collapse.
    let base = gauss_legendre(order + p);
    let mut out = vec![(Vec::new(), 1.0, 1.0)];
    for j in 0..p {
        let power = (p - 1 - j) as i32;
        let mut next = Vec::with_capacity(out.len() * base.len());
        for (t, w, rem) in &out {
            for &(u, wu) in &base {
                let mut t2: Vec<f64> = t.clone();
                t2.push(rem * u);
                let jac = (1.0 - u).powi(power);
                next.push((t2, w * wu * jac, rem * (1.0 - u)));
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, w, _)| (t, w)).collect()
}

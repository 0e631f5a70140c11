//! Internal quadrature kernels: adaptive Gauss–Kronrod, adaptive Simpson,
//! and Gauss–Legendre node tables for tensor-product integration.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("adaptive quadrature did not reach tolerance {tol:e} on [{lo}, {hi}] (best error {err:e})")]
    NonConvergence { lo: f64, hi: f64, tol: f64, err: f64 },
    #[error("integration bounds are not finite or not ordered: [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
}

// 15-point Kronrod abscissae on [-1, 1] (positive half; QUADPACK dqk15).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

// Kronrod weights matching XGK.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Embedded 7-point Gauss weights (nodes are XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss–Kronrod 15(7) panel: returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Panels whose error estimate is below this fraction of their own value
/// are at the f64 noise floor; refining further cannot improve them.
const REL_FLOOR: f64 = 5e-14;

/// Adaptive Gauss–Kronrod integration of `f` over `[lo, hi]` to absolute
/// tolerance `tol`, by bisection of panels whose embedded error estimate
/// exceeds both their share of the budget and the relative noise floor.
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<f64, QuadError> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(QuadError::BadInterval { lo, hi });
    }
    if lo == hi {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut worst = 0.0f64;
    let mut noise = 0.0f64;
    let mut stack = vec![(lo, hi, tol, 0u32)];
    while let Some((a, b, t, depth)) = stack.pop() {
        let (v, e) = gk15(f, a, b);
        let at_noise_floor = e <= REL_FLOOR * v.abs();
        if e <= t || at_noise_floor || depth >= MAX_DEPTH {
            total += v;
            if e > t {
                if at_noise_floor {
                    noise = noise.max(e);
                } else {
                    worst = worst.max(e);
                }
            }
        } else {
            let m = 0.5 * (a + b);
            stack.push((a, m, 0.5 * t, depth + 1));
            stack.push((m, b, 0.5 * t, depth + 1));
        }
    }
    // Noise-floored panels are as converged as f64 allows; only genuine
    // non-convergence (still-structured error at max depth) is fatal.
    if worst > tol.max(REL_FLOOR * total.abs()) {
        return Err(QuadError::NonConvergence { lo, hi, tol, err: worst });
    }
    Ok(total)
}

const MAX_DEPTH: u32 = 44;

/// Adaptive GK over a piecewise-smooth integrand: integrates each panel
/// between consecutive breakpoints separately so kinks never sit inside a
/// Kronrod panel.
pub fn adaptive_gk_segmented<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64, QuadError> {
    let mut total = 0.0;
    let per_segment = tol / breakpoints.len().saturating_sub(1).max(1) as f64;
    for w in breakpoints.windows(2) {
        total += adaptive_gk(f, w[0], w[1], per_segment)?;
    }
    Ok(total)
}

/// Classic adaptive Simpson with Richardson acceptance (`|S2 - S1| < 15 tol`).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, QuadError> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(QuadError::BadInterval { lo, hi });
    }
    if lo == hi {
        return Ok(0.0);
    }
    let flo = f(lo);
    let fhi = f(hi);
    let mid = 0.5 * (lo + hi);
    let fmid = f(mid);
    let whole = simpson_panel(lo, hi, flo, fmid, fhi);
    simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, 0)
}

fn simpson_panel(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(QuadError::NonConvergence { lo: a, hi: b, tol, err: delta.abs() / 15.0 });
    }
    let l = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Bonnet recurrence for P_n(x) and P_{n-1}(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to [lo, hi].
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    (
        xs.iter().map(|&x| c + h * x).collect(),
        ws.iter().map(|&w| w * h).collect(),
    )
}

//! Hermite polynomials and functions, the Mehler kernel identity, strip-of-
//! convergence radii for Hermite series, and the weighted-Gaussian integral
//! form of the `G_p` norms.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Stability guard on Hermite degrees.
pub const MAX_HERMITE_DEGREE: u32 = 500;

/// Physicists' Hermite polynomial `h_n(z)` by the three-term recurrence
/// `h_{n+1} = 2z h_n - 2n h_{n-1}` with `h_0 = 1`, `h_1 = 2z`. The sign
/// convention makes the leading coefficient positive.
pub fn hermite_poly(n: u32, z: Complex64) -> Result<Complex64> {
    guard_degree(n)?;
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Hermite function `xi_n(z) = pi^{-1/4} (2^n n!)^{-1/2} e^{-z^2/2} h_n(z)`.
///
/// Computed by the normalized recurrence
/// `xi_{n+1} = z sqrt(2/(n+1)) xi_n - sqrt(n/(n+1)) xi_{n-1}`, which folds the
/// normalization into each step so intermediate values never overflow where
/// the product of the raw factors would.
pub fn hermite_fn(n: u32, z: Complex64) -> Result<Complex64> {
    Ok(*hermite_fn_sequence(n, z)?.last().expect("n+1 values"))
}

/// All of `xi_0(z) ... xi_n(z)` in one recurrence pass.
pub fn hermite_fn_sequence(n: u32, z: Complex64) -> Result<Vec<Complex64>> {
    guard_degree(n)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    let xi0 = libm::pow(core::f64::consts::PI, -0.25) * (-z * z / 2.0).exp();
    out.push(xi0);
    if n >= 1 {
        out.push(libm::sqrt(2.0) * z * xi0);
    }
    for k in 1..n as usize {
        let kf = k as f64;
        let next =
            z * libm::sqrt(2.0 / (kf + 1.0)) * out[k] - libm::sqrt(kf / (kf + 1.0)) * out[k - 1];
        out.push(next);
    }
    Ok(out)
}

fn guard_degree(n: u32) -> Result<()> {
    if n > MAX_HERMITE_DEGREE {
        Err(Error::DegreeGuard {
            n,
            max: MAX_HERMITE_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// Truncated bilinear sum against the Mehler closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MehlerComparison {
    /// `sum_{n < terms} xi_n(u) xi_n(v) s^n`
    pub lhs: Complex64,
    /// `pi^{-1/2} (1-s^2)^{-1/2} exp(-((1+s^2)(u^2+v^2) - 4suv) / (2(1-s^2)))`
    pub rhs: Complex64,
    pub abs_err: f64,
}

/// Compares the Hermite bilinear series with the Mehler kernel at `|s| < 1`.
pub fn mehler_check(
    u: Complex64,
    v: Complex64,
    s: Complex64,
    terms: u32,
) -> Result<MehlerComparison> {
    if !(s.norm() < 1.0) {
        return Err(Error::MehlerDomain { modulus: s.norm() });
    }
    if terms == 0 {
        return Err(Error::Precondition("mehler_check needs terms >= 1".into()));
    }
    let xi_u = hermite_fn_sequence(terms - 1, u)?;
    let xi_v = hermite_fn_sequence(terms - 1, v)?;
    let mut lhs = Complex64::ZERO;
    let mut s_pow = Complex64::new(1.0, 0.0);
    for k in 0..terms as usize {
        lhs += xi_u[k] * xi_v[k] * s_pow;
        s_pow *= s;
    }
    let one = Complex64::new(1.0, 0.0);
    let s2 = s * s;
    // |s| < 1 keeps 1 - s^2 in the right half plane, so the principal square
    // root is the right branch.
    let prefactor = libm::pow(core::f64::consts::PI, -0.5) / (one - s2).sqrt();
    let exponent = -((one + s2) * (u * u + v * v) - 4.0 * s * u * v) / (2.0 * (one - s2));
    let rhs = prefactor * exponent.exp();
    Ok(MehlerComparison {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
    })
}

/// Verdict of the strip-radius estimator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StripVerdict {
    Finite(f64),
    Infinite,
}

/// Tail-window estimate of `tau = -limsup (2n+1)^{-1/2} log|F_n|`, the
/// half-width of the strip where `sum F_n xi_n` converges.
#[derive(Clone, Debug, PartialEq)]
pub struct StripEstimate {
    pub verdict: StripVerdict,
    /// The sampled tail window `[n_max/2, n_max]`.
    pub window: (u64, u64),
    /// Estimates over the last three window doublings, oldest first.
    pub growth: [f64; 3],
    pub cap: f64,
}

/// Estimates the strip radius from `log|F_n|` samples.
///
/// The limsup is replaced by a max over the tail window `[n_max/2, n_max]`;
/// the `Infinite` verdict requires the estimate to grow strictly over the
/// last three window doublings and to end above `cap`. The contract covers
/// the sampled window only.
pub fn strip_radius(log_coeff: impl Fn(u64) -> f64, n_max: u64, cap: f64) -> StripEstimate {
    assert!(n_max >= 8, "strip estimator needs n_max >= 8");
    let estimate = |hi: u64| -> f64 {
        let lo = hi / 2;
        let mut best = f64::NEG_INFINITY;
        for n in lo..=hi {
            let v = -log_coeff(n) / libm::sqrt(2.0 * n as f64 + 1.0);
            if v > best {
                best = v;
            }
        }
        best
    };
    let growth = [estimate(n_max / 4), estimate(n_max / 2), estimate(n_max)];
    let verdict = if growth[0] < growth[1] && growth[1] < growth[2] && growth[2] > cap {
        StripVerdict::Infinite
    } else {
        StripVerdict::Finite(growth[2])
    };
    StripEstimate {
        verdict,
        window: (n_max / 2, n_max),
        growth,
        cap,
    }
}

/// Default cap above which monotone growth is reported as an infinite strip.
pub const DEFAULT_STRIP_CAP: f64 = 50.0;

/// Tensor trapezoid quadrature controls for [`gp_integral_norm`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Relative agreement required between successive step halvings.
    pub rel_tolerance: f64,
    /// Number of halvings attempted after the initial grid.
    pub max_levels: u32,
    /// Grid step of the initial level.
    pub initial_step: f64,
    /// Half-widths `(Lx, Ly)`; `None` picks them from the density tails.
    pub half_width: Option<(f64, f64)>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tolerance: 1e-7,
            max_levels: 6,
            initial_step: 0.5,
            half_width: None,
        }
    }
}

/// Squared `G_p` norm of `f = sum coeffs[n] xi_n` as the weighted area
/// integral
/// `K_p ∬ |f(x+iy)|^2 exp(((1-2^{-p})/(1+2^{-p})) x^2 - ((1+2^{-p})/(1-2^{-p})) y^2) dx dy`
/// with `K_p = 2^{1-p} / sqrt(pi (1 - 2^{-2p}))`.
///
/// For coefficients in the space this equals `sum |coeffs[n]|^2 2^{np}`
/// (see [`gp_coefficient_norm`]); the integral is evaluated independently by
/// tensor trapezoid rule with step halving until two levels agree.
pub fn gp_integral_norm(coeffs: &[Complex64], p: u32, quad: &QuadratureSpec) -> Result<f64> {
    if p == 0 {
        return Err(Error::Precondition("gp norms need p >= 1".into()));
    }
    if p > 64 {
        return Err(Error::Precondition(
            "gp quadrature supports p <= 64; the density degenerates beyond".into(),
        ));
    }
    if coeffs.is_empty() {
        return Ok(0.0);
    }
    let n_max = (coeffs.len() - 1) as u32;
    guard_degree(n_max)?;
    let s = libm::exp2(-(p as f64));
    let k_p = libm::exp2(1.0 - p as f64) / libm::sqrt(core::f64::consts::PI * (1.0 - s * s));
    let cx = (1.0 - s) / (1.0 + s);
    let cy = (1.0 + s) / (1.0 - s);
    let (lx, ly) = quad.half_width.unwrap_or_else(|| {
        // integrand decay rates: exp(-(1-cx) x^2) and exp(-(cy-1) y^2) times
        // |h_n|^2 growth; solve a L^2 = 37 + 2 n log L by fixed point
        let pick = |a: f64| -> f64 {
            let mut l = libm::sqrt(40.0 / a);
            for _ in 0..4 {
                l = libm::sqrt((40.0 + 2.0 * n_max as f64 * libm::log(l.max(3.0))) / a);
            }
            l
        };
        (pick(1.0 - cx), pick(cy - 1.0))
    });

    let mut previous: Option<f64> = None;
    let mut step = quad.initial_step;
    let mut last_delta = f64::INFINITY;
    for _ in 0..=quad.max_levels {
        let value = k_p * trapezoid_grid(coeffs, cx, cy, lx, ly, step)?;
        if let Some(prev) = previous {
            last_delta = (value - prev).abs();
            if last_delta <= quad.rel_tolerance * value.abs().max(1e-30) {
                return Ok(value);
            }
        }
        previous = Some(value);
        step *= 0.5;
    }
    Err(Error::QuadratureNonConvergent {
        last_delta,
        tolerance: quad.rel_tolerance,
    })
}

/// The coefficient-side squared norm `sum |coeffs[n]|^2 2^{np}`.
pub fn gp_coefficient_norm(coeffs: &[Complex64], p: u32) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c.norm_sqr() * libm::exp2((n as u32 * p) as f64))
        .sum()
}

fn trapezoid_grid(
    coeffs: &[Complex64],
    cx: f64,
    cy: f64,
    lx: f64,
    ly: f64,
    step: f64,
) -> Result<f64> {
    let nx = libm::ceil(2.0 * lx / step) as usize;
    let ny = libm::ceil(2.0 * ly / step) as usize;
    let n_max = (coeffs.len() - 1) as u32;
    let mut total = 0.0f64;
    for iy in 0..=ny {
        let y = -ly + step * iy as f64;
        let wy = if iy == 0 || iy == ny { 0.5 } else { 1.0 };
        let gy = libm::exp(-cy * y * y);
        let mut row = 0.0f64;
        for ix in 0..=nx {
            let x = -lx + step * ix as f64;
            let wx = if ix == 0 || ix == nx { 0.5 } else { 1.0 };
            let z = Complex64::new(x, y);
            let xi = hermite_fn_sequence(n_max, z)?;
            let mut f = Complex64::ZERO;
            for (c, v) in coeffs.iter().zip(xi.iter()) {
                f += c * v;
            }
            row += wx * f.norm_sqr() * libm::exp(cx * x * x);
        }
        total += wy * row * gy;
    }
    Ok(total * step * step)
}

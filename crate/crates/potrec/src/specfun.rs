//! Special functions shared by every other module: real and complex
//! log-gamma, classical orthogonal polynomial evaluation by forward
//! three-term recurrence, and log-Pochhammer symbols.
//!
//! Normalization constants downstream involve gamma ratios up to n ~ 100,
//! which overflow well before f64 does in linear space; everything here is
//! exposed in log space so callers exponentiate last.

use crate::{Error, Result};
use num_complex::Complex64;

/// Stirling-series coefficients B_{2k} / (2k (2k-1)).
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Arguments are shifted up past this real part before applying the Stirling
/// series; with ten series terms the truncation error is far below 1e-14.
const SHIFT_THRESHOLD: f64 = 12.0;

fn stirling_ln_gamma_real(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < SHIFT_THRESHOLD {
        shift += y.ln();
        y += 1.0;
    }
    Ok(stirling_ln_gamma_real(y) - shift)
}

fn stirling_ln_gamma_complex(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// ln sin(πz) stable for large |Im z|, correct up to a multiple of 2πi.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    if z.im.abs() < 1.0 {
        return (Complex64::new(pi, 0.0) * z).sin().ln();
    }
    let i = Complex64::new(0.0, 1.0);
    let ln2i = Complex64::new(2.0_f64.ln(), pi / 2.0);
    if z.im > 0.0 {
        // sin(πz) = e^{-iπz} (e^{2iπz} - 1) / (2i), |e^{2iπz}| < 1
        let small = (2.0 * pi * i * z).exp();
        -i * pi * z + (small - 1.0).ln() - ln2i
    } else {
        let small = (-2.0 * pi * i * z).exp();
        i * pi * z + (1.0 - small).ln() - ln2i
    }
}

/// Principal-branch ln Γ(z). On the right half-plane the imaginary part is
/// the continuous arg Γ(z); on the left half-plane the value is correct up to
/// a multiple of 2πi (exp always reproduces Γ(z)).
pub fn complex_ln_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("complex_ln_gamma: non-finite argument"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::domain(format!(
            "complex_ln_gamma: pole at z = {z}"
        )));
    }
    if z.re < 0.5 {
        // Reflection: ln Γ(z) = ln π − ln sin(πz) − ln Γ(1 − z).
        let pi = std::f64::consts::PI;
        let refl = complex_ln_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(pi.ln(), 0.0) - ln_sin_pi(z) - refl);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < SHIFT_THRESHOLD {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling_ln_gamma_complex(w) - shift)
}

/// arg Γ(z) taken from the continuous branch on the right half-plane.
pub fn arg_gamma(z: Complex64) -> Result<f64> {
    Ok(complex_ln_gamma(z)?.im)
}

/// ln |Γ(z)|.
pub fn ln_abs_gamma(z: Complex64) -> Result<f64> {
    Ok(complex_ln_gamma(z)?.re)
}

/// ln |(z)_n| together with the sign of the Pochhammer symbol.
pub fn pochhammer_ln(z: f64, n: usize) -> Result<(f64, f64)> {
    let mut ln_abs = 0.0;
    let mut sign = 1.0;
    for k in 0..n {
        let factor = z + k as f64;
        if factor == 0.0 {
            return Err(Error::domain(format!(
                "pochhammer_ln: zero factor at z + {k} with z = {z}"
            )));
        }
        ln_abs += factor.abs().ln();
        if factor < 0.0 {
            sign = -sign;
        }
    }
    Ok((ln_abs, sign))
}

/// A classical orthogonal polynomial family, in the textbook normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyFamily {
    /// Generalized Laguerre L_n^ν, ν > −1.
    Laguerre { nu: f64 },
    /// Physicists' Hermite H_n.
    Hermite,
    /// Jacobi P_n^{(μ,ν)}, μ > −1 and ν > −1.
    Jacobi { mu: f64, nu: f64 },
}

impl PolyFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PolyFamily::Laguerre { nu } if nu <= -1.0 => Err(Error::domain(format!(
                "Laguerre parameter must satisfy nu > -1, got {nu}"
            ))),
            PolyFamily::Jacobi { mu, nu } if mu <= -1.0 || nu <= -1.0 => Err(Error::domain(
                format!("Jacobi parameters must satisfy mu, nu > -1, got ({mu}, {nu})"),
            )),
            _ => Ok(()),
        }
    }
}

/// Degree-n polynomial value by forward three-term recurrence from the
/// hard-coded degree-0/1 seeds.
pub fn eval_poly(family: PolyFamily, n: usize, x: f64) -> Result<f64> {
    family.validate()?;
    match family {
        PolyFamily::Laguerre { nu } => {
            // (n+1) L_{n+1} = (2n+ν+1−x) L_n − (n+ν) L_{n−1}
            let mut prev = 1.0;
            if n == 0 {
                return Ok(prev);
            }
            let mut cur = nu + 1.0 - x;
            for k in 1..n {
                let kf = k as f64;
                let next = ((2.0 * kf + nu + 1.0 - x) * cur - (kf + nu) * prev) / (kf + 1.0);
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
        PolyFamily::Hermite => {
            // H_{n+1} = 2x H_n − 2n H_{n−1}
            let mut prev = 1.0;
            if n == 0 {
                return Ok(prev);
            }
            let mut cur = 2.0 * x;
            for k in 1..n {
                let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
        PolyFamily::Jacobi { mu, nu } => {
            let mut prev = 1.0;
            if n == 0 {
                return Ok(prev);
            }
            let mut cur = 0.5 * (mu + nu + 2.0) * x + 0.5 * (mu - nu);
            for k in 2..=n {
                let kf = k as f64;
                let s = 2.0 * kf + mu + nu;
                let a1 = 2.0 * kf * (kf + mu + nu) * (s - 2.0);
                let a2 = (s - 1.0) * (mu * mu - nu * nu);
                let a3 = (s - 2.0) * (s - 1.0) * s;
                let a4 = 2.0 * (kf + mu - 1.0) * (kf + nu - 1.0) * s;
                let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(1e-300)
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < TOL);
        let sqrt_pi_ln = std::f64::consts::PI.sqrt().ln();
        assert!(rel_err(ln_gamma(0.5).unwrap(), sqrt_pi_ln) < TOL);
        assert!(rel_err(ln_gamma(6.0).unwrap(), 120.0_f64.ln()) < TOL);
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-3.5).is_err());
    }

    #[test]
    fn ln_gamma_recurrence_on_grid() {
        // ln Γ(x+1) = ln Γ(x) + ln x on x ∈ [0.1, 50]
        let mut x = 0.1;
        while x <= 50.0 {
            let lhs = ln_gamma(x + 1.0).unwrap();
            let rhs = ln_gamma(x).unwrap() + x.ln();
            assert!(
                (lhs - rhs).abs() <= TOL * lhs.abs().max(1.0),
                "recurrence failed at x = {x}: {lhs} vs {rhs}"
            );
            x += 0.37;
        }
    }

    #[test]
    fn complex_ln_gamma_trivial_points() {
        let g2 = complex_ln_gamma(Complex64::new(2.0, 0.0)).unwrap();
        assert!(g2.norm() < 1e-13);
        let gh = complex_ln_gamma(Complex64::new(0.5, 0.0)).unwrap();
        assert!((gh.re - 0.5723649429247001).abs() < TOL);
        assert!(gh.im.abs() < TOL);
    }

    /// Oracle for Γ(z): direct numerical integration of ∫_0^∞ t^{z−1} e^{−t} dt.
    /// Substituting t = e^u turns it into ∫ e^{zu − e^u} du with a smooth,
    /// rapidly decaying integrand; composite Simpson then converges fast.
    fn gamma_by_integration(z: Complex64) -> Complex64 {
        let f = |u: f64| -> Complex64 { (z * u - u.exp()).exp() };
        let (a, b, n) = (-40.0, 5.0, 180_000usize);
        let h = (b - a) / n as f64;
        let mut sum = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += f(a + i as f64 * h) * w;
        }
        sum * (h / 3.0)
    }

    #[test]
    fn complex_ln_gamma_against_integration_oracle() {
        // Frozen from the oracle: arg Γ(1+i) ≈ −0.30164032046753320
        let z = Complex64::new(1.0, 1.0);
        let oracle = gamma_by_integration(z);
        let frozen_im = -0.30164032046753320_f64;
        assert!(
            (oracle.arg() - frozen_im).abs() < 1e-10,
            "oracle drifted: {}",
            oracle.arg()
        );
        let lg = complex_ln_gamma(z).unwrap();
        assert!((lg.im - frozen_im).abs() < 1e-12, "got {}", lg.im);
        assert!((lg.exp() - oracle).norm() < 1e-10);
    }

    #[test]
    fn complex_ln_gamma_matches_real_axis() {
        for x in [0.3, 1.7, 4.2, 11.0, 26.5] {
            let lg = complex_ln_gamma(Complex64::new(x, 0.0)).unwrap();
            assert!((lg.re - ln_gamma(x).unwrap()).abs() < 1e-13);
            assert!(lg.im.abs() < 1e-13);
        }
    }

    #[test]
    fn complex_ln_gamma_reflection_identity() {
        // |Γ(z)Γ(1−z) − π/sin(πz)| / |π/sin(πz)| ≤ 1e-10 away from poles
        let pi = std::f64::consts::PI;
        for &re in &[-3.3, -1.2, -0.4, 0.25, 0.8, 2.6] {
            for &im in &[-2.0, -0.5, 0.37, 1.5, 4.0] {
                let z = Complex64::new(re, im);
                let lhs = (complex_ln_gamma(z).unwrap()
                    + complex_ln_gamma(Complex64::new(1.0, 0.0) - z).unwrap())
                .exp();
                let rhs = Complex64::new(pi, 0.0) / (Complex64::new(pi, 0.0) * z).sin();
                assert!(
                    (lhs - rhs).norm() / rhs.norm() <= 1e-10,
                    "reflection failed at {z}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn complex_ln_gamma_rejects_poles() {
        for k in 0..4 {
            assert!(complex_ln_gamma(Complex64::new(-(k as f64), 0.0)).is_err());
        }
    }

    #[test]
    fn eval_poly_low_degree_closed_forms() {
        // Laguerre: L_1^ν(x) = ν+1−x, L_2^ν(x) = x²/2 − (ν+2)x + (ν+1)(ν+2)/2
        let nu = 2.0;
        let l1 = eval_poly(PolyFamily::Laguerre { nu }, 1, 3.0).unwrap();
        assert!(l1.abs() < TOL);
        for &x in &[0.2, 1.0, 5.5] {
            let l2 = eval_poly(PolyFamily::Laguerre { nu }, 2, x).unwrap();
            let want = 0.5 * x * x - (nu + 2.0) * x + 0.5 * (nu + 1.0) * (nu + 2.0);
            assert!(rel_err(l2, want) < TOL);
            let l3 = eval_poly(PolyFamily::Laguerre { nu }, 3, x).unwrap();
            let want3 = -x * x * x / 6.0 + 0.5 * (nu + 3.0) * x * x
                - 0.5 * (nu + 2.0) * (nu + 3.0) * x
                + (nu + 1.0) * (nu + 2.0) * (nu + 3.0) / 6.0;
            assert!(rel_err(l3, want3) < TOL);
        }
        // Hermite: H_2 = 4x²−2, H_3 = 8x³−12x
        assert!((eval_poly(PolyFamily::Hermite, 2, 1.0).unwrap() - 2.0).abs() < TOL);
        for &x in &[-1.3, 0.4, 2.0] {
            let h3 = eval_poly(PolyFamily::Hermite, 3, x).unwrap();
            assert!(rel_err(h3, 8.0 * x * x * x - 12.0 * x) < 1e-11);
        }
        // Jacobi: P_1^{(0,0)}(z) = z; P_2^{(μ,ν)} checked against the explicit form
        assert!((eval_poly(PolyFamily::Jacobi { mu: 0.0, nu: 0.0 }, 1, 0.3).unwrap() - 0.3).abs() < TOL);
        let (mu, nu) = (1.5, 0.5);
        for &z in &[-0.7, 0.0, 0.6] {
            let p2 = eval_poly(PolyFamily::Jacobi { mu, nu }, 2, z).unwrap();
            // P_2^{(μ,ν)}(z) = (1/8)[(μ+ν+3)(μ+ν+4)z² + 2(μ−ν)(μ+ν+3)z + (μ−ν)² − (μ+ν+4)]
            let s = mu + nu;
            let want = 0.125
                * ((s + 3.0) * (s + 4.0) * z * z + 2.0 * (mu - nu) * (s + 3.0) * z
                    + (mu - nu) * (mu - nu)
                    - (s + 4.0));
            assert!(rel_err(p2, want) < 1e-11, "P2 mismatch at {z}");
        }
    }

    #[test]
    fn eval_poly_rejects_bad_parameters() {
        assert!(eval_poly(PolyFamily::Laguerre { nu: -1.0 }, 2, 1.0).is_err());
        assert!(eval_poly(PolyFamily::Jacobi { mu: -2.0, nu: 0.0 }, 2, 0.5).is_err());
    }

    #[test]
    fn pochhammer_basics() {
        let (ln24, s) = pochhammer_ln(1.0, 4).unwrap();
        assert!(rel_err(ln24.exp(), 24.0) < TOL);
        assert_eq!(s, 1.0);
        let (ln_p, s) = pochhammer_ln(0.5, 2).unwrap();
        assert!(rel_err(ln_p.exp(), 0.75) < TOL);
        assert_eq!(s, 1.0);
        let (ln_e, s) = pochhammer_ln(-7.25, 0).unwrap();
        assert_eq!(ln_e, 0.0);
        assert_eq!(s, 1.0);
        // (-1.5)_2 = (-1.5)(-0.5) = 0.75, sign +
        let (ln_n, s) = pochhammer_ln(-1.5, 2).unwrap();
        assert!(rel_err(ln_n.exp(), 0.75) < TOL);
        assert_eq!(s, 1.0);
        // (-1.5)_3 = 0.75 * 0.5, two negative factors then positive
        let (_, s3) = pochhammer_ln(-2.5, 3).unwrap();
        assert_eq!(s3, -1.0);
        assert!(pochhammer_ln(-2.0, 4).is_err());
    }
}

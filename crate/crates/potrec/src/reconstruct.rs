//! The four potential-reconstruction methods plus the continued-fraction
//! rational fitter: V(x) estimates on a grid from a potential matrix and the
//! basis it was computed in.
//!
//! Method 1 uses the full matrix through a completeness ratio, method 2 a
//! single column, method 3 a quadrature-integrated conjugate expansion, and
//! method 4 the diagonal of the eigenvector-rotated matrix sampled at the
//! Gauss nodes and interpolated by a rational fraction.

use crate::bases::BasisSet;
use crate::mat::Mat;
use crate::quadrature::GaussRule;
use crate::{Error, Result};

/// Relative denominator threshold below which a grid point is masked out
/// (methods 1 and 2).
pub const DENOMINATOR_MASK_EPS: f64 = 1e-6;

/// Off-diagonal residual of W = ΛᵀVΛ above which the matrix is flagged as
/// not produced by the rule's own quadrature.
pub const M4_OFFDIAG_WARN: f64 = 0.1;

/// Pole guard for rational-fraction evaluation.
pub const FIT_POLE_GUARD: f64 = 1e-12;

/// A symmetric potential matrix tied to the basis it was computed in.
#[derive(Debug, Clone)]
pub struct PotentialMatrix {
    pub entries: Mat,
    pub basis: BasisSet,
}

impl PotentialMatrix {
    pub fn new(entries: Mat, basis: BasisSet) -> Result<Self> {
        if entries.rows() != entries.cols() {
            return Err(Error::domain("potential matrix must be square"));
        }
        if !entries.all_finite() {
            return Err(Error::domain("potential matrix has non-finite entries"));
        }
        let asym = entries.max_asymmetry();
        if asym > 1e-12 * entries.max_abs().max(1.0) {
            return Err(Error::domain(format!(
                "potential matrix asymmetry {asym} exceeds tolerance"
            )));
        }
        Ok(PotentialMatrix { entries, basis })
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }
}

/// Per-method pointwise estimate; values are meaningful only where the mask
/// is true.
#[derive(Debug, Clone)]
pub struct MethodEstimate {
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl MethodEstimate {
    pub fn unmasked(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .zip(&self.mask)
            .enumerate()
            .filter(|(_, (_, m))| **m)
            .map(|(i, (v, _))| (i, *v))
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| !**m).count()
    }
}

/// Completeness-ratio method: V(x) ≈ Σ V_nm φ̄_n φ̄_m / Σ φ_n φ̄_n.
pub fn method1(pm: &PotentialMatrix, grid: &[f64]) -> Result<MethodEstimate> {
    let n = pm.size();
    let mut numer = Vec::with_capacity(grid.len());
    let mut denom = Vec::with_capacity(grid.len());
    for &x in grid {
        let phi = pm.basis.phi_all(n, x)?;
        let phibar = pm.basis.phibar_all(n, x)?;
        let vb = pm.entries.matvec(&phibar);
        numer.push(phibar.iter().zip(&vb).map(|(a, b)| a * b).sum::<f64>());
        denom.push(phi.iter().zip(&phibar).map(|(a, b)| a * b).sum::<f64>());
    }
    ratio_estimate(&numer, &denom)
}

/// Single-column method: V(x) ≈ Σ_m [φ̄_m(x)/φ_col(x)] V_{m,col}.
pub fn method2(pm: &PotentialMatrix, grid: &[f64], column: usize) -> Result<MethodEstimate> {
    let n = pm.size();
    if column >= n {
        return Err(Error::domain(format!(
            "column {column} out of range for size {n}"
        )));
    }
    let col = pm.entries.col(column);
    let mut numer = Vec::with_capacity(grid.len());
    let mut denom = Vec::with_capacity(grid.len());
    for &x in grid {
        let phibar = pm.basis.phibar_all(n, x)?;
        numer.push(phibar.iter().zip(&col).map(|(a, b)| a * b).sum::<f64>());
        denom.push(pm.basis.eval_phi(column, x)?);
    }
    ratio_estimate(&numer, &denom)
}

fn ratio_estimate(numer: &[f64], denom: &[f64]) -> Result<MethodEstimate> {
    let dmax = denom.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if dmax == 0.0 {
        return Err(Error::Reconstruction(
            "denominator vanishes on the whole grid".into(),
        ));
    }
    let mut values = Vec::with_capacity(numer.len());
    let mut mask = Vec::with_capacity(numer.len());
    for (nu, de) in numer.iter().zip(denom) {
        if de.abs() < DENOMINATOR_MASK_EPS * dmax {
            values.push(f64::NAN);
            mask.push(false);
        } else {
            values.push(nu / de);
            mask.push(true);
        }
    }
    if mask.iter().all(|m| !m) {
        return Err(Error::Reconstruction("all grid points masked".into()));
    }
    Ok(MethodEstimate { values, mask })
}

/// Quadrature-expansion method estimates, produced by two routes that agree
/// for √(γρ)p_n bases: the derivative-weight sum and the eigenvector-matrix
/// product.
#[derive(Debug, Clone)]
pub struct Method3Estimate {
    pub estimate: MethodEstimate,
    /// Expansion coefficients U_n from the derivative-weight route.
    pub coefficients: Vec<f64>,
    /// Largest pointwise difference between the two routes on the grid.
    pub variant_max_diff: f64,
}

/// Conjugate-expansion method with a K-point quadrature (K ≥ N).
pub fn method3(pm: &PotentialMatrix, grid: &[f64], k: usize) -> Result<Method3Estimate> {
    let n = pm.size();
    if k < n {
        return Err(Error::domain(format!("method 3 needs K >= N, got K = {k}")));
    }
    let basis = &pm.basis;
    let rule = basis.gauss_rule(k)?;
    let coeffs = basis.weight_family().recurrence(n.max(1));

    // Route 1: s_m = Σ_k ω^d_k φ̄_m(τ_k) with the conjugate function taken in
    // the polynomial measure, φ̄_m = p_m √(ρ/γ).
    let mut s = vec![0.0_f64; n];
    for (idx, &t) in rule.nodes.iter().enumerate() {
        let p = coeffs.eval_first_kind(t, n)?;
        let w = rule.deriv_weights[idx]
            * (0.5 * (basis.ln_weight(t) - basis.ln_gamma_fn(t))).exp();
        for m in 0..n {
            s[m] += w * p[m];
        }
    }
    let u_sum = pm.entries.matvec(&s);

    // Route 2: U_n = (V Λ W Λᵀ)_{n0}, W diagonal 1/√(γρ) at the nodes.
    let lam = &rule.eigvecs;
    let mut w_lam0 = Vec::with_capacity(k);
    for (idx, &t) in rule.nodes.iter().enumerate() {
        let w = (-0.5 * (basis.ln_gamma_fn(t) + basis.ln_weight(t))).exp();
        w_lam0.push(w * lam[(0, idx)]);
    }
    let mut lam_w = vec![0.0_f64; n];
    for m in 0..n {
        for idx in 0..k {
            lam_w[m] += lam[(m, idx)] * w_lam0[idx];
        }
    }
    let u_mat = pm.entries.matvec(&lam_w);

    let mut values = Vec::with_capacity(grid.len());
    let mut diff = 0.0_f64;
    for &x in grid {
        let phibar = basis.phibar_all(n, x)?;
        let v_sum: f64 = u_sum.iter().zip(&phibar).map(|(a, b)| a * b).sum();
        let v_mat: f64 = u_mat.iter().zip(&phibar).map(|(a, b)| a * b).sum();
        diff = diff.max((v_sum - v_mat).abs());
        values.push(v_sum);
    }
    Ok(Method3Estimate {
        estimate: MethodEstimate {
            mask: vec![true; values.len()],
            values,
        },
        coefficients: u_sum,
        variant_max_diff: diff,
    })
}

/// Gauss-node sampling method: W = ΛᵀVΛ, V̂_k = W_kk x'(τ_k)/γ(τ_k) at
/// r_k = r(τ_k), plus a rational-fraction fit through the samples.
#[derive(Debug, Clone)]
pub struct Method4Estimate {
    pub sample_x: Vec<f64>,
    pub sample_v: Vec<f64>,
    pub fitted: MethodEstimate,
    /// ‖W − diag W‖_max / ‖W‖_max.
    pub offdiag_residual: f64,
    /// False when the off-diagonal residual exceeds the warning threshold,
    /// i.e. the matrix was not produced by this rule's quadrature.
    pub quadrature_consistent: bool,
    pub fit: RationalFit,
}

pub fn method4(pm: &PotentialMatrix, grid: &[f64]) -> Result<Method4Estimate> {
    let n = pm.size();
    let basis = &pm.basis;
    let rule: GaussRule = basis.gauss_rule(n)?;
    let w = rule.eigvecs.congruence(&pm.entries);
    let mut offdiag = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                offdiag = offdiag.max(w[(i, j)].abs());
            }
        }
    }
    let scale = w.max_abs().max(1e-300);
    let offdiag_residual = offdiag / scale;
    let mut sample_x = Vec::with_capacity(n);
    let mut sample_v = Vec::with_capacity(n);
    for (k, &t) in rule.nodes.iter().enumerate() {
        let factor = (basis.ln_xprime(t) - basis.ln_gamma_fn(t)).exp();
        if !factor.is_finite() {
            return Err(Error::domain(format!(
                "γ(τ) = 0 at quadrature node {t}; method 4 undefined"
            )));
        }
        sample_x.push(basis.x_of_z(t));
        sample_v.push(w[(k, k)] * factor);
    }
    let fit = fit_rational(
        &sample_x
            .iter()
            .zip(&sample_v)
            .map(|(&x, &y)| (x, y))
            .collect::<Vec<_>>(),
    )?;
    let mut values = Vec::with_capacity(grid.len());
    let mut mask = Vec::with_capacity(grid.len());
    for &x in grid {
        match fit.eval(x) {
            Some(v) => {
                values.push(v);
                mask.push(true);
            }
            None => {
                values.push(f64::NAN);
                mask.push(false);
            }
        }
    }
    Ok(Method4Estimate {
        sample_x,
        sample_v,
        fitted: MethodEstimate { values, mask },
        offdiag_residual,
        quadrature_consistent: offdiag_residual <= M4_OFFDIAG_WARN,
        fit,
    })
}

/// Continued-fraction interpolant
/// C(x) = y₀ / (1 + a₀(x−x₀) / (1 + a₁(x−x₁) / ⋯)).
#[derive(Debug, Clone)]
pub struct RationalFit {
    /// Support abscissae in build order (largest |y| first).
    xs: Vec<f64>,
    y0: f64,
    coeffs: Vec<f64>,
}

impl RationalFit {
    /// Evaluate with the pole guard. Intermediate zero denominators are
    /// benign (they propagate as IEEE infinities that resolve one level up);
    /// only a vanishing final denominator marks a true pole.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let m = self.coeffs.len();
        if m == 0 {
            return Some(self.y0);
        }
        let mut t = 1.0 + self.coeffs[m - 1] * (x - self.xs[m - 1]);
        if m >= 2 {
            for i in (0..m - 1).rev() {
                t = 1.0 + self.coeffs[i] * (x - self.xs[i]) / t;
            }
        }
        if t.abs() < FIT_POLE_GUARD || !t.is_finite() && t.is_nan() {
            return None;
        }
        let v = self.y0 / t;
        if v.is_finite() {
            Some(v)
        } else {
            None
        }
    }

    pub fn coefficient_count(&self) -> usize {
        self.coeffs.len()
    }
}

/// Schlessinger point-method fit through all supplied points.
pub fn fit_rational(points: &[(f64, f64)]) -> Result<RationalFit> {
    if points.len() < 2 {
        return Err(Error::domain("rational fit needs at least 2 points"));
    }
    for (i, (xi, _)) in points.iter().enumerate() {
        for (xj, _) in points.iter().skip(i + 1) {
            if xi == xj {
                return Err(Error::domain(format!("coincident abscissa {xi}")));
            }
        }
    }
    // Put the largest |y| first so the leading y₀ never vanishes for
    // nonzero data; zero leading values break the fraction identically.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[b].1.abs().partial_cmp(&points[a].1.abs()).unwrap()
    });
    let pts: Vec<(f64, f64)> = order.iter().map(|&i| points[i]).collect();
    let ymax = pts[0].1.abs();
    if ymax == 0.0 {
        // All values are zero; the zero function interpolates.
        return Ok(RationalFit {
            xs: vec![],
            y0: 0.0,
            coeffs: vec![],
        });
    }

    let m = pts.len();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let interpolates = |coeffs: &[f64]| -> bool {
        let probe = RationalFit {
            xs: xs.clone(),
            y0: pts[0].1,
            coeffs: coeffs.to_vec(),
        };
        pts.iter().all(|&(x, y)| {
            matches!(probe.eval(x), Some(v) if (v - y).abs() <= 1e-9 * ymax)
        })
    };
    let mut coeffs: Vec<f64> = Vec::new();
    // t-table for the current level, entries j = level+1 .. m-1.
    let mut t: Vec<f64> = (1..m)
        .map(|j| (pts[0].1 / pts[j].1 - 1.0) / (pts[j].0 - pts[0].0))
        .collect();
    for level in 0..m - 1 {
        // Data already representable by the truncated fraction: extending it
        // would only amplify rounding noise in the remaining reciprocal
        // differences.
        if interpolates(&coeffs) {
            break;
        }
        let a = t[0];
        if !a.is_finite() {
            break;
        }
        coeffs.push(a);
        if t.len() == 1 {
            break;
        }
        let next: Vec<f64> = t
            .iter()
            .skip(1)
            .enumerate()
            .map(|(off, &tj)| {
                let j = level + 2 + off;
                (a / tj - 1.0) / (pts[j].0 - pts[level + 1].0)
            })
            .collect();
        t = next;
    }
    let fit = RationalFit {
        xs,
        y0: pts[0].1,
        coeffs,
    };
    // Interpolation contract at every node.
    for &(x, y) in &pts {
        match fit.eval(x) {
            Some(v) if (v - y).abs() <= 1e-9 * ymax => {}
            _ => {
                return Err(Error::DegenerateData(format!(
                    "continued fraction fails to interpolate at x = {x}"
                )))
            }
        }
    }
    Ok(fit)
}

/// Reconstruction estimates at fixed probe points for growing basis sizes;
/// flags divergence when the max |estimate| grows monotonically by at least
/// 2x per size step.
#[derive(Debug, Clone)]
pub struct DivergenceReport {
    pub sizes: Vec<usize>,
    pub max_abs: Vec<f64>,
    pub diverging: bool,
}

pub fn method3_divergence(
    matrix_of: impl Fn(usize) -> Result<PotentialMatrix>,
    sizes: &[usize],
    probes: &[f64],
) -> Result<DivergenceReport> {
    if sizes.len() < 2 {
        return Err(Error::domain("divergence check needs at least two sizes"));
    }
    let mut max_abs = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let pm = matrix_of(n)?;
        let est = method3(&pm, probes, n)?;
        max_abs.push(
            est.estimate
                .values
                .iter()
                .fold(0.0_f64, |m, v| m.max(v.abs())),
        );
    }
    let diverging = max_abs.windows(2).all(|w| w[1] >= 2.0 * w[0]);
    Ok(DivergenceReport {
        sizes: sizes.to_vec(),
        max_abs,
        diverging,
    })
}

/// Method selection and knobs for a combined run.
#[derive(Debug, Clone, Copy)]
pub struct ReconstructionOptions {
    pub m1: bool,
    pub m2: bool,
    pub m3: bool,
    pub m4: bool,
    pub column: usize,
    /// Quadrature size for method 3; defaults to N, matching the
    /// eigenvector-matrix route where Λ comes from the N×N quadrature matrix.
    pub quadrature_k: Option<usize>,
}

impl Default for ReconstructionOptions {
    fn default() -> Self {
        ReconstructionOptions {
            m1: true,
            m2: true,
            m3: true,
            m4: true,
            column: 0,
            quadrature_k: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub m3_variant_max_diff: Option<f64>,
    pub m4_offdiag_residual: Option<f64>,
    pub m4_quadrature_consistent: Option<bool>,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub grid: Vec<f64>,
    pub m1: Option<MethodEstimate>,
    pub m2: Option<MethodEstimate>,
    pub m3: Option<Method3Estimate>,
    pub m4: Option<Method4Estimate>,
    pub diagnostics: Diagnostics,
}

/// Run the selected methods; fails only if every selected method fails.
pub fn reconstruct_all(
    pm: &PotentialMatrix,
    grid: &[f64],
    opts: ReconstructionOptions,
) -> Result<ReconstructionResult> {
    let mut diagnostics = Diagnostics::default();
    let mut any_ok = false;
    let note = |diag: &mut Diagnostics, name: &str, e: &Error| {
        diag.messages.push(format!("{name} failed: {e}"));
    };
    let m1 = if opts.m1 {
        match method1(pm, grid) {
            Ok(v) => {
                any_ok = true;
                Some(v)
            }
            Err(e) => {
                note(&mut diagnostics, "method 1", &e);
                None
            }
        }
    } else {
        None
    };
    let m2 = if opts.m2 {
        match method2(pm, grid, opts.column) {
            Ok(v) => {
                any_ok = true;
                Some(v)
            }
            Err(e) => {
                note(&mut diagnostics, "method 2", &e);
                None
            }
        }
    } else {
        None
    };
    let m3 = if opts.m3 {
        let k = opts.quadrature_k.unwrap_or(pm.size());
        match method3(pm, grid, k) {
            Ok(v) => {
                any_ok = true;
                diagnostics.m3_variant_max_diff = Some(v.variant_max_diff);
                Some(v)
            }
            Err(e) => {
                note(&mut diagnostics, "method 3", &e);
                None
            }
        }
    } else {
        None
    };
    let m4 = if opts.m4 {
        match method4(pm, grid) {
            Ok(v) => {
                any_ok = true;
                diagnostics.m4_offdiag_residual = Some(v.offdiag_residual);
                diagnostics.m4_quadrature_consistent = Some(v.quadrature_consistent);
                if !v.quadrature_consistent {
                    diagnostics
                        .messages
                        .push("method 4: matrix not quadrature-consistent".into());
                }
                Some(v)
            }
            Err(e) => {
                note(&mut diagnostics, "method 4", &e);
                None
            }
        }
    } else {
        None
    };
    if !any_ok && (opts.m1 || opts.m2 || opts.m3 || opts.m4) {
        return Err(Error::Reconstruction(format!(
            "all selected methods failed: {:?}",
            diagnostics.messages
        )));
    }
    Ok(ReconstructionResult {
        grid: grid.to_vec(),
        m1,
        m2,
        m3,
        m4,
        diagnostics,
    })
}

//! Gauss quadrature rules built from three-term recurrence coefficients.
//!
//! The Jacobi (quadrature) matrix of the symmetric recursion
//! x p_n = a_n p_n + b_{n-1} p_{n-1} + b_n p_{n+1} has the Gauss nodes as
//! eigenvalues; the squared first components of its normalized eigenvectors
//! are the weights of the rule for the *normalized* weight function. The
//! derivative weights ω^d_k = ω_k / ρ(τ_k) integrate functions that do not
//! carry the weight.

use crate::lintridiag::{eigen_decompose, SymTridiag};
use crate::mat::Mat;
use crate::specfun::ln_gamma;
use crate::{Error, Result};
use std::sync::Arc;

/// Symmetric three-term recursion coefficients, b[n] coupling degrees n and
/// n+1. All b entries must be nonzero for the quadrature construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl RecurrenceCoeffs {
    pub fn from_fns(n: usize, a_fn: impl Fn(usize) -> f64, b_fn: impl Fn(usize) -> f64) -> Self {
        RecurrenceCoeffs {
            a: (0..n).map(&a_fn).collect(),
            b: (0..n.saturating_sub(1)).map(&b_fn).collect(),
        }
    }

    /// The truncated Jacobi matrix of the first `n` degrees.
    pub fn jacobi_matrix(&self, n: usize) -> Result<SymTridiag> {
        if n == 0 || n > self.a.len() {
            return Err(Error::domain(format!(
                "need coefficients for degrees 0..{n}, have {}",
                self.a.len()
            )));
        }
        let b = &self.b[..n - 1];
        if let Some(k) = b.iter().position(|v| *v == 0.0) {
            return Err(Error::domain(format!(
                "off-diagonal recursion coefficient b_{k} is zero"
            )));
        }
        SymTridiag::new(self.a[..n].to_vec(), b.to_vec())
    }

    /// First-kind polynomial sequence P_0..P_{count-1} at `arg`
    /// (P_0 = 1, forward recursion, no rescaling).
    pub fn eval_first_kind(&self, arg: f64, count: usize) -> Result<Vec<f64>> {
        if count > self.a.len() {
            return Err(Error::domain(format!(
                "need coefficients for degrees 0..{count}, have {}",
                self.a.len()
            )));
        }
        let mut out = Vec::with_capacity(count);
        out.push(1.0);
        if count == 1 {
            return Ok(out);
        }
        for n in 0..count - 1 {
            if self.b[n] == 0.0 {
                return Err(Error::domain(format!(
                    "off-diagonal recursion coefficient b_{n} is zero"
                )));
            }
            let prev = if n == 0 { 0.0 } else { self.b[n - 1] * out[n - 1] };
            out.push(((arg - self.a[n]) * out[n] - prev) / self.b[n]);
        }
        Ok(out)
    }
}

/// The classical weight families used by the basis sets. The sign convention
/// of the Laguerre off-diagonal follows the classical L_n normalization
/// (alternating leading coefficients), matching the overlap matrices built
/// from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFamily {
    Laguerre { nu: f64 },
    Hermite,
    Jacobi { mu: f64, nu: f64 },
}

impl WeightFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightFamily::Laguerre { nu } if nu <= -1.0 => Err(Error::domain(format!(
                "Laguerre weight requires nu > -1, got {nu}"
            ))),
            WeightFamily::Jacobi { mu, nu } if mu <= -1.0 || nu <= -1.0 => Err(Error::domain(
                format!("Jacobi weight requires mu, nu > -1, got ({mu}, {nu})"),
            )),
            _ => Ok(()),
        }
    }

    pub fn diag_coeff(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            WeightFamily::Laguerre { nu } => 2.0 * nf + nu + 1.0,
            WeightFamily::Hermite => 0.0,
            WeightFamily::Jacobi { mu, nu } => {
                if n == 0 {
                    (nu - mu) / (mu + nu + 2.0)
                } else {
                    let s = 2.0 * nf + mu + nu;
                    (nu * nu - mu * mu) / (s * (s + 2.0))
                }
            }
        }
    }

    pub fn offdiag_coeff(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            WeightFamily::Laguerre { nu } => -((nf + 1.0) * (nf + nu + 1.0)).sqrt(),
            WeightFamily::Hermite => ((nf + 1.0) / 2.0).sqrt(),
            WeightFamily::Jacobi { mu, nu } => {
                if n == 0 {
                    // Cancelled form, safe at mu + nu + 1 = 0.
                    2.0 / (mu + nu + 2.0) * ((mu + 1.0) * (nu + 1.0) / (mu + nu + 3.0)).sqrt()
                } else {
                    let s = 2.0 * nf + mu + nu;
                    2.0 / (s + 2.0)
                        * ((nf + 1.0) * (nf + mu + 1.0) * (nf + nu + 1.0) * (nf + mu + nu + 1.0)
                            / ((s + 1.0) * (s + 3.0)))
                        .sqrt()
                }
            }
        }
    }

    pub fn recurrence(&self, count: usize) -> RecurrenceCoeffs {
        RecurrenceCoeffs::from_fns(count, |n| self.diag_coeff(n), |n| self.offdiag_coeff(n))
    }

    /// ln of the normalized weight (integral 1 over the natural domain).
    pub fn ln_weight(&self, x: f64) -> f64 {
        match *self {
            WeightFamily::Laguerre { nu } => {
                if x <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                nu * x.ln() - x - ln_gamma(nu + 1.0).expect("validated")
            }
            WeightFamily::Hermite => -x * x - 0.5 * std::f64::consts::PI.ln(),
            WeightFamily::Jacobi { mu, nu } => {
                if x <= -1.0 || x >= 1.0 {
                    return f64::NEG_INFINITY;
                }
                mu * (1.0 - x).ln() + nu * (1.0 + x).ln() - ln_norm_jacobi(mu, nu)
            }
        }
    }

    /// Analytic moments ∫ x^m ρ(x) dx of the normalized weight, m = 0..count-1.
    /// Independent oracle for quadrature exactness tests.
    pub fn moments(&self, count: usize) -> Vec<f64> {
        let mut m = Vec::with_capacity(count);
        match *self {
            WeightFamily::Laguerre { nu } => {
                let mut acc = 1.0;
                for k in 0..count {
                    m.push(acc);
                    acc *= nu + 1.0 + k as f64;
                }
            }
            WeightFamily::Hermite => {
                for k in 0..count {
                    if k == 0 {
                        m.push(1.0);
                    } else if k == 1 {
                        m.push(0.0);
                    } else {
                        let prev = m[k - 2];
                        m.push(prev * (k as f64 - 1.0) / 2.0);
                    }
                }
            }
            WeightFamily::Jacobi { mu, nu } => {
                for k in 0..count {
                    if k == 0 {
                        m.push(1.0);
                    } else if k == 1 {
                        m.push((nu - mu) / (mu + nu + 2.0));
                    } else {
                        let kf = (k - 1) as f64;
                        let next = ((nu - mu) * m[k - 1] + kf * m[k - 2]) / (kf + mu + nu + 2.0);
                        m.push(next);
                    }
                }
            }
        }
        m
    }
}

/// ln ∫_{-1}^{1} (1-z)^mu (1+z)^nu dz.
pub fn ln_norm_jacobi(mu: f64, nu: f64) -> f64 {
    (mu + nu + 1.0) * 2.0_f64.ln() + ln_gamma(mu + 1.0).expect("mu > -1")
        + ln_gamma(nu + 1.0).expect("nu > -1")
        - ln_gamma(mu + nu + 2.0).expect("mu + nu > -2")
}

/// A Gauss rule for a normalized weight: nodes, weights, derivative weights
/// and the eigenvector matrix Λ with Λ[m][k] = p_m(τ_k) √ω_k.
#[derive(Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub deriv_weights: Vec<f64>,
    pub eigvecs: Mat,
    ln_weight: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for GaussRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaussRule")
            .field("nodes", &self.nodes)
            .field("weights", &self.weights)
            .field("deriv_weights", &self.deriv_weights)
            .finish()
    }
}

impl GaussRule {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// ln ρ(x) of the normalized weight behind this rule.
    pub fn ln_weight(&self, x: f64) -> f64 {
        (self.ln_weight)(x)
    }

    /// Σ ω_k f(τ_k).
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Σ ω^d_k f(τ_k), the weight-free integral ∫ f(x) dx over the support.
    pub fn integrate_plain(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.deriv_weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Build an N-point Gauss rule from recurrence coefficients and the ln of the
/// normalized weight function.
pub fn build_rule(
    coeffs: &RecurrenceCoeffs,
    n: usize,
    ln_weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Result<GaussRule> {
    let jac = coeffs.jacobi_matrix(n)?;
    let decomp = eigen_decompose(&jac)?;
    let nodes = decomp.values;
    let weights: Vec<f64> = (0..n)
        .map(|k| {
            let v = decomp.vectors[(0, k)];
            v * v
        })
        .collect();
    let deriv_weights: Vec<f64> = nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| (w.ln() - ln_weight(t)).exp())
        .collect();
    Ok(GaussRule {
        nodes,
        weights,
        deriv_weights,
        eigvecs: decomp.vectors,
        ln_weight: Arc::new(ln_weight),
    })
}

/// Build the rule for a classical weight family.
pub fn build_family_rule(family: WeightFamily, n: usize) -> Result<GaussRule> {
    family.validate()?;
    let coeffs = family.recurrence(n);
    build_rule(&coeffs, n, move |x| family.ln_weight(x))
}

/// Weights from the eigenvalue-ratio formula: the nodes of the rule and the
/// eigenvalues of the submatrix with the first row/column deleted determine
/// ω_n as a ratio of difference products. Factors are paired to keep every
/// partial product O(1) (the sets interlace).
pub fn weights_via_product(nodes: &[f64], subnodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    if subnodes.len() + 1 != n {
        return Err(Error::domain(format!(
            "expected {} subnodes for {} nodes, got {}",
            n - 1,
            n,
            subnodes.len()
        )));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut w = 1.0;
        for m in 0..n - 1 {
            let k = if m < i { m } else { m + 1 };
            let den = nodes[i] - nodes[k];
            if den == 0.0 {
                return Err(Error::domain("coincident quadrature nodes"));
            }
            w *= (nodes[i] - subnodes[m]) / den;
        }
        out.push(w);
    }
    Ok(out)
}

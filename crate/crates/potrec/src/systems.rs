//! Assembly of the six physical systems: physical parameters are mapped to
//! energy-polynomial parameters, the H, T, T̃, Ω, V, Ṽ matrices are built
//! from their closed forms, and the tridiagonality of the wave operator
//! J = V + T − EΩ can be inspected directly.

use crate::bases::{BasisSet, BasisSpec, Counterterm};
use crate::mat::Mat;
use crate::quadrature::RecurrenceCoeffs;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemSpec {
    /// 3D Coulomb problem, radial basis with angular momentum ℓ.
    Coulomb { z: f64, l: f64, lambda: f64 },
    /// 1D Morse problem; the basis parameter is α and μ = 1/2 − 4βV₀/λ².
    Morse {
        alpha: f64,
        beta: f64,
        v0: f64,
        lambda: f64,
    },
    /// Potential box with sinusoidal bottom, sin-map Jacobi basis.
    SinBox {
        v0: f64,
        v1: f64,
        v2: f64,
        lambda: f64,
    },
    /// Hyperbolic potential pulse; ν is energy dependent, so the assembly is
    /// valid only at the stated (negative) energy.
    HyperbolicPulse {
        v0: f64,
        v1: f64,
        lambda: f64,
        energy: f64,
    },
    /// Continuous-dual-Hahn system on the half line. `mu` is the basis
    /// parameter; `gamma` is the polynomial parameter (the Appendix's μ).
    CdhSystem {
        v2: f64,
        gamma: f64,
        mu: f64,
        lambda: f64,
    },
    /// Wilson system on the half line, a = b and γ = κ in the polynomial.
    WilsonSystem {
        v2: f64,
        gamma: f64,
        mu: f64,
        a: f64,
        lambda: f64,
    },
}

impl SystemSpec {
    pub fn lambda(&self) -> f64 {
        match *self {
            SystemSpec::Coulomb { lambda, .. }
            | SystemSpec::Morse { lambda, .. }
            | SystemSpec::SinBox { lambda, .. }
            | SystemSpec::HyperbolicPulse { lambda, .. }
            | SystemSpec::CdhSystem { lambda, .. }
            | SystemSpec::WilsonSystem { lambda, .. } => lambda,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lambda = self.lambda();
        if !(lambda > 0.0) {
            return Err(Error::domain(format!("lambda must be > 0, got {lambda}")));
        }
        match *self {
            SystemSpec::Coulomb { l, .. } if l < 0.0 => {
                Err(Error::domain("Coulomb needs l >= 0"))
            }
            SystemSpec::Morse { alpha, .. } if alpha <= -1.0 => {
                Err(Error::domain("Morse needs alpha > -1"))
            }
            SystemSpec::SinBox { v2, lambda, .. } if v2 < -lambda * lambda / 8.0 => Err(
                Error::domain("sinusoidal box needs V2 >= -lambda^2/8"),
            ),
            SystemSpec::HyperbolicPulse { energy, .. } if energy >= 0.0 => {
                Err(Error::domain("hyperbolic pulse needs E < 0"))
            }
            SystemSpec::HyperbolicPulse { v0, v1, .. } if v1 == 0.0 || (v0 / v1).abs() >= 1.0 => {
                Err(Error::domain("hyperbolic pulse needs |V0/V1| < 1"))
            }
            SystemSpec::CdhSystem { v2, mu, lambda, .. }
            | SystemSpec::WilsonSystem { v2, mu, lambda, .. } => {
                if mu <= -1.0 {
                    Err(Error::domain("half-line basis needs mu > -1"))
                } else if v2 < -(lambda / 4.0) * (lambda / 4.0) {
                    Err(Error::domain("half-line systems need V2 >= -(lambda/4)^2"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Closed-form potential of a system, when one exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedPotential {
    /// −Z/r.
    Coulomb { z: f64 },
    /// c₂ e^{2λx} + c₁ e^{λx}.
    MorseLike { c2: f64, c1: f64, lambda: f64 },
    /// V₀ + V₁ sin(λx) + V₂ / cos²(λx).
    SinBox {
        v0: f64,
        v1: f64,
        v2: f64,
        lambda: f64,
    },
    /// (V₀ + V₁ tanh(λx)) / cosh²(λx).
    Pulse { v0: f64, v1: f64, lambda: f64 },
}

impl ClosedPotential {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ClosedPotential::Coulomb { z } => -z / x,
            ClosedPotential::MorseLike { c2, c1, lambda } => {
                c2 * (2.0 * lambda * x).exp() + c1 * (lambda * x).exp()
            }
            ClosedPotential::SinBox { v0, v1, v2, lambda } => {
                let c = (lambda * x).cos();
                v0 + v1 * (lambda * x).sin() + v2 / (c * c)
            }
            ClosedPotential::Pulse { v0, v1, lambda } => {
                let c = (lambda * x).cosh();
                (v0 + v1 * (lambda * x).tanh()) / (c * c)
            }
        }
    }
}

/// What is known analytically about a system's potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactPotential {
    Closed(ClosedPotential),
    /// Hyperbolic Pöschl-Teller reference family V₂/sinh²(λx) +
    /// V₁/cosh²(λx) + V₀ with V₂ fixed and V₁, V₀ free.
    ReferenceFamily { v2: f64, lambda: f64 },
    Unknown,
}

impl ExactPotential {
    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            ExactPotential::Closed(p) => Some(p.eval(x)),
            _ => None,
        }
    }
}

/// Energy-polynomial recursion of the assembled system; `eigenvalue`
/// documents what the recursion eigenvalue means physically.
#[derive(Debug, Clone)]
pub struct EnergyRecursion {
    pub coeffs: RecurrenceCoeffs,
    pub eigenvalue: String,
}

#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub spec: SystemSpec,
    pub basis: BasisSet,
    pub size: usize,
    pub hamiltonian: Mat,
    pub overlap: Mat,
    pub kinetic_tridiagonal: Mat,
    /// Full kinetic matrix including non-tridiagonal pieces; None when the
    /// bracket integrals are singular at boundary parameters.
    pub kinetic_full: Option<Mat>,
    /// Ṽ = H − T̃, the potential component the reconstruction targets.
    pub potential_tilde: Mat,
    /// V = H − T, the full-potential matrix (None with kinetic_full).
    pub potential_full: Option<Mat>,
    pub counterterm: Counterterm,
    pub exact_potential: ExactPotential,
    pub energy_recursion: Option<EnergyRecursion>,
    pub warnings: Vec<String>,
}

/// Which kinetic/potential pair enters the wave-operator matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KineticForm {
    /// T̃ and Ṽ: the counterterm-reduced pair.
    Reduced,
    /// Full T and full V.
    Full,
    /// Full T against Ṽ: exposes the non-tridiagonal remainder.
    CountertermDropped,
}

#[derive(Debug, Clone)]
pub struct TridiagReport {
    pub energy: f64,
    pub max_off_band: f64,
    /// Largest |entry| on each diagonal offset 0..N-1.
    pub band_profile: Vec<f64>,
    pub scale: f64,
}

/// Assemble the matrices of a physical system at basis size `n`.
pub fn assemble(spec: SystemSpec, n: usize) -> Result<AssembledSystem> {
    spec.validate()?;
    if n < 2 {
        return Err(Error::domain("assembly needs N >= 2"));
    }
    let mut warnings = Vec::new();
    match spec {
        SystemSpec::Coulomb { z, l, lambda } => {
            let basis = BasisSet::new(BasisSpec::LaguerreRadial { l, lambda })?;
            let omega = basis.overlap_matrix(n)?;
            let kin = basis.kinetic_matrix(n)?;
            let l2 = lambda * lambda;
            let hamiltonian = Mat::symmetric_from(n, |i, j| {
                let nf = i as f64;
                if i == j {
                    0.25 * l2 * (nf + l + 1.0) - lambda * z
                } else if j == i + 1 {
                    0.125 * l2 * ((nf + 1.0) * (nf + 2.0 * l + 2.0)).sqrt()
                } else {
                    0.0
                }
            });
            let v = Mat::identity(n).scale(-lambda * z);
            Ok(AssembledSystem {
                spec,
                basis,
                size: n,
                hamiltonian,
                overlap: omega,
                potential_tilde: v.clone(),
                potential_full: Some(v),
                kinetic_full: kin.full,
                kinetic_tridiagonal: kin.tridiagonal,
                counterterm: kin.counterterm,
                exact_potential: ExactPotential::Closed(ClosedPotential::Coulomb { z }),
                // The energy polynomial is Meixner-Pollaczek with an
                // energy-dependent θ; there is no fixed ε-recursion.
                energy_recursion: None,
                warnings,
            })
        }
        SystemSpec::Morse {
            alpha,
            beta,
            v0,
            lambda,
        } => {
            let basis = BasisSet::new(BasisSpec::MorseLaguerre { alpha, lambda })?;
            let mu = 0.5 - 4.0 * beta * v0 / (lambda * lambda);
            let omega = basis.overlap_matrix(n)?;
            let kin = basis.kinetic_matrix(n)?;
            let sigma = morse_sigma(mu, alpha, n + 1);
            warn_on_decoupling(&sigma, &mut warnings);
            let l2 = lambda * lambda;
            let hamiltonian = sigma_to_dense(&sigma, n).scale(0.5 * l2);
            // Eq.-(37)-form potential matrix; equals H − T̃ entrywise.
            let pot_tilde = Mat::symmetric_from(n, |i, j| {
                let nf = i as f64;
                let c = 0.25 * l2 * (2.0 * mu - 1.0);
                if i == j {
                    c * 2.0 * (nf + alpha + 1.0)
                } else if j == i + 1 {
                    -c * ((nf + 1.0) * (nf + 2.0 * alpha + 2.0)).sqrt()
                } else {
                    0.0
                }
            });
            let potential_full = kin.full.as_ref().map(|tf| hamiltonian.sub(tf));
            Ok(AssembledSystem {
                spec,
                basis,
                size: n,
                hamiltonian,
                overlap: omega,
                potential_tilde: pot_tilde,
                potential_full,
                kinetic_full: kin.full,
                kinetic_tridiagonal: kin.tridiagonal,
                counterterm: kin.counterterm,
                exact_potential: ExactPotential::Closed(ClosedPotential::MorseLike {
                    c2: 0.125 * l2,
                    c1: -2.0 * beta * v0,
                    lambda,
                }),
                energy_recursion: Some(EnergyRecursion {
                    coeffs: sigma,
                    eigenvalue: "2E/lambda^2".into(),
                }),
                warnings,
            })
        }
        SystemSpec::SinBox { v0, v1, v2, lambda } => {
            let l2 = lambda * lambda;
            let nu = (0.25 + 2.0 * v2 / l2).sqrt();
            let basis = BasisSet::new(BasisSpec::jacobi_sym_sin(nu, lambda))?;
            let omega = basis.overlap_matrix(n)?;
            let kin = basis.kinetic_matrix(n)?;
            if kin.full.is_none() {
                warnings.push(
                    "full kinetic matrix unavailable at the boundary parameter nu = 0".into(),
                );
            }
            let pot_tilde = Mat::symmetric_from(n, |i, j| {
                if i == j {
                    v0
                } else if j == i + 1 {
                    let nf = i as f64;
                    0.5 * v1
                        * ((nf + 1.0) * (nf + 2.0 * nu + 1.0)
                            / ((nf + nu + 1.0) * (nf + nu + 1.0) - 0.25))
                            .sqrt()
                } else {
                    0.0
                }
            });
            let hamiltonian = kin.tridiagonal.add(&pot_tilde);
            let potential_full = kin.full.as_ref().map(|tf| hamiltonian.sub(tf));
            Ok(AssembledSystem {
                spec,
                basis,
                size: n,
                hamiltonian,
                overlap: omega,
                potential_tilde: pot_tilde,
                potential_full,
                kinetic_full: kin.full,
                kinetic_tridiagonal: kin.tridiagonal,
                counterterm: kin.counterterm,
                exact_potential: ExactPotential::Closed(ClosedPotential::SinBox {
                    v0,
                    v1,
                    v2,
                    lambda,
                }),
                energy_recursion: Some(EnergyRecursion {
                    coeffs: crate::energypoly::sinbox_recursion(
                        nu,
                        2.0 * v0 / l2,
                        2.0 * v1 / l2,
                        n + 1,
                    ),
                    eigenvalue: "2E/lambda^2".into(),
                }),
                warnings,
            })
        }
        SystemSpec::HyperbolicPulse {
            v0,
            v1,
            lambda,
            energy,
        } => {
            let l2 = lambda * lambda;
            let nu = (-2.0 * energy / l2).sqrt();
            let basis = BasisSet::new(BasisSpec::jacobi_sym_tanh(nu, lambda))?;
            let omega = basis.overlap_matrix(n)?;
            let kin = basis.kinetic_matrix(n)?;
            let family = basis.weight_family();
            let v = Mat::symmetric_from(n, |i, j| {
                if i == j {
                    v0 + v1 * family.diag_coeff(i)
                } else if j == i + 1 {
                    v1 * family.offdiag_coeff(i)
                } else {
                    0.0
                }
            });
            let hamiltonian = match &kin.full {
                Some(tf) => tf.add(&v),
                None => kin.tridiagonal.add(&v),
            };
            Ok(AssembledSystem {
                spec,
                basis,
                size: n,
                hamiltonian,
                overlap: omega,
                potential_tilde: v.clone(),
                potential_full: Some(v),
                kinetic_full: kin.full,
                kinetic_tridiagonal: kin.tridiagonal,
                counterterm: kin.counterterm,
                exact_potential: ExactPotential::Closed(ClosedPotential::Pulse {
                    v0,
                    v1,
                    lambda,
                }),
                energy_recursion: Some(EnergyRecursion {
                    coeffs: crate::energypoly::pulse_recursion(nu, 2.0 * v1 / l2, n + 1),
                    eigenvalue: "-2V0/lambda^2 (energy fixed by nu)".into(),
                }),
                warnings,
            })
        }
        SystemSpec::CdhSystem {
            v2,
            gamma,
            mu,
            lambda,
        } => {
            let l2 = lambda * lambda;
            let nu = (0.25 + 2.0 * v2 / l2).sqrt();
            let basis = BasisSet::new(BasisSpec::JacobiHalf { mu, nu, lambda })?;
            if gamma <= 0.0 {
                warnings.push(format!(
                    "polynomial parameter gamma = {gamma} violates the dual-Hahn positivity \
                     constraints; matrices assembled from the physical map regardless"
                ));
            }
            let a = mu + 1.0;
            let sigma = RecurrenceCoeffs::from_fns(
                n + 1,
                |k| {
                    let kf = k as f64;
                    (kf + gamma + mu + 1.0).powi(2) + (kf + mu + 0.5).powi(2)
                        - gamma * gamma
                        - (mu + 0.5) * (mu + 0.5)
                },
                |k| {
                    let kf = k as f64;
                    -(kf + gamma + mu + 1.0) * ((kf + 1.0) * (kf + 2.0 * a)).sqrt()
                },
            );
            warn_on_decoupling(&sigma, &mut warnings);
            finish_half_line(
                spec, basis, n, sigma, v2, lambda, warnings,
                ExactPotential::ReferenceFamily { v2, lambda },
            )
        }
        SystemSpec::WilsonSystem {
            v2,
            gamma,
            mu,
            a,
            lambda,
        } => {
            let l2 = lambda * lambda;
            let nu = (0.25 + 2.0 * v2 / l2).sqrt();
            let basis = BasisSet::new(BasisSpec::JacobiHalf { mu, nu, lambda })?;
            if gamma <= 0.0 || a <= 0.0 {
                warnings.push(format!(
                    "polynomial parameters (gamma, a) = ({gamma}, {a}) violate the Wilson \
                     positivity constraints; matrices assembled from the physical map regardless"
                ));
            }
            let mut clamped = Vec::new();
            let offdiag = |k: usize, clamped: &mut Vec<usize>| -> f64 {
                let kf = k as f64;
                // The prefactor appears four times under the root in the
                // un-ratioed recursion, so a vanishing prefactor is an exact
                // zero, not a clamp.
                if kf + gamma + a == 0.0 {
                    return 0.0;
                }
                let num = (kf + 1.0)
                    * (kf + 2.0 * gamma)
                    * (kf + 2.0 * a)
                    * (kf + 2.0 * gamma + 2.0 * a - 1.0);
                let den = (kf + gamma + a).powi(2) - 0.25;
                let radicand = num / den;
                if !radicand.is_finite() || radicand < 0.0 {
                    if num != 0.0 {
                        clamped.push(k);
                    }
                    return 0.0;
                }
                -0.25 * (kf + gamma + a) * radicand.sqrt()
            };
            let mut b = Vec::with_capacity(n);
            for k in 0..n {
                b.push(offdiag(k, &mut clamped));
            }
            let sigma = RecurrenceCoeffs {
                a: (0..=n)
                    .map(|k| {
                        let kf = k as f64;
                        0.5 * ((kf + gamma + a - 0.5).powi(2)
                            - (gamma - 0.5) * (gamma - 0.5)
                            - (a - 0.5) * (a - 0.5)
                            + 0.25)
                    })
                    .collect(),
                b,
            };
            if !clamped.is_empty() {
                warnings.push(format!(
                    "Wilson recursion radicand negative at n = {clamped:?}; off-diagonal \
                     entries clamped to zero (no real symmetric form exists there)"
                ));
            }
            warn_on_decoupling(&sigma, &mut warnings);
            finish_half_line(
                spec, basis, n, sigma, v2, lambda, warnings, ExactPotential::Unknown,
            )
        }
    }
}

fn finish_half_line(
    spec: SystemSpec,
    basis: BasisSet,
    n: usize,
    sigma: RecurrenceCoeffs,
    _v2: f64,
    lambda: f64,
    mut warnings: Vec<String>,
    exact: ExactPotential,
) -> Result<AssembledSystem> {
    let omega = basis.overlap_matrix(n)?;
    let kin = basis.kinetic_matrix(n)?;
    if kin.full.is_none() {
        warnings.push("full kinetic matrix unavailable at boundary parameter".into());
    }
    let hamiltonian = sigma_to_dense(&sigma, n).scale(0.5 * lambda * lambda);
    let potential_tilde = hamiltonian.sub(&kin.tridiagonal);
    let potential_full = kin.full.as_ref().map(|tf| hamiltonian.sub(tf));
    Ok(AssembledSystem {
        spec,
        basis,
        size: n,
        hamiltonian,
        overlap: omega,
        potential_tilde,
        potential_full,
        kinetic_full: kin.full,
        kinetic_tridiagonal: kin.tridiagonal,
        counterterm: kin.counterterm,
        exact_potential: exact,
        energy_recursion: Some(EnergyRecursion {
            coeffs: sigma,
            eigenvalue: "2E/lambda^2".into(),
        }),
        warnings,
    })
}

fn morse_sigma(mu: f64, alpha: f64, count: usize) -> RecurrenceCoeffs {
    RecurrenceCoeffs::from_fns(
        count,
        |k| {
            let kf = k as f64;
            (kf + mu + alpha + 1.0).powi(2) + (kf + alpha + 0.5).powi(2)
                - mu * mu
                - (alpha + 0.5) * (alpha + 0.5)
        },
        |k| {
            let kf = k as f64;
            -(kf + mu + alpha + 1.0) * ((kf + 1.0) * (kf + 2.0 * alpha + 2.0)).sqrt()
        },
    )
}

fn sigma_to_dense(sigma: &RecurrenceCoeffs, n: usize) -> Mat {
    Mat::symmetric_from(n, |i, j| {
        if i == j {
            sigma.a[i]
        } else if j == i + 1 {
            sigma.b[i]
        } else {
            0.0
        }
    })
}

fn warn_on_decoupling(sigma: &RecurrenceCoeffs, warnings: &mut Vec<String>) {
    let zeros: Vec<usize> = sigma
        .b
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == 0.0)
        .map(|(k, _)| k)
        .collect();
    if !zeros.is_empty() {
        warnings.push(format!(
            "energy recursion off-diagonal vanishes at n = {zeros:?}; the chain decouples there"
        ));
    }
}

/// Max |⟨φ_n|(λr)⁻¹|φ_m⟩ − δ_nm| over n, m < N, computed by Laguerre-type
/// quadrature with K ≥ N + 2 nodes.
pub fn coulomb_identity_check(l: f64, lambda: f64, n: usize) -> Result<f64> {
    let basis = BasisSet::new(BasisSpec::LaguerreRadial { l, lambda })?;
    let g = basis.potential_matrix(|r| 1.0 / (lambda * r), n, n + 2)?;
    Ok(g.sub(&Mat::identity(n)).max_abs())
}

/// Wave-operator matrix J = V + T − EΩ in the requested kinetic form, with
/// an optional additive perturbation on one off-band entry (test hook for
/// the verification harness).
pub fn wave_operator(
    sys: &AssembledSystem,
    energy: f64,
    form: KineticForm,
) -> Result<Mat> {
    let (t, v): (&Mat, &Mat) = match form {
        KineticForm::Reduced => (&sys.kinetic_tridiagonal, &sys.potential_tilde),
        KineticForm::Full => (
            sys.kinetic_full
                .as_ref()
                .ok_or_else(|| Error::domain("full kinetic matrix unavailable"))?,
            sys.potential_full
                .as_ref()
                .ok_or_else(|| Error::domain("full potential matrix unavailable"))?,
        ),
        KineticForm::CountertermDropped => (
            sys.kinetic_full
                .as_ref()
                .ok_or_else(|| Error::domain("full kinetic matrix unavailable"))?,
            &sys.potential_tilde,
        ),
    };
    Ok(v.add(t).sub(&sys.overlap.scale(energy)))
}

pub fn tridiagonality_report(
    sys: &AssembledSystem,
    energy: f64,
    form: KineticForm,
) -> Result<TridiagReport> {
    let j = wave_operator(sys, energy, form)?;
    let n = j.rows();
    let mut band_profile = vec![0.0_f64; n];
    for i in 0..n {
        for jj in 0..n {
            let d = i.abs_diff(jj);
            band_profile[d] = band_profile[d].max(j[(i, jj)].abs());
        }
    }
    Ok(TridiagReport {
        energy,
        max_off_band: j.max_abs_off_band(1),
        band_profile,
        scale: j.max_abs(),
    })
}

/// Default sampled energies for tridiagonality reports: {−1, 0.5, 2}·λ².
pub fn default_report_energies(lambda: f64) -> Vec<f64> {
    let l2 = lambda * lambda;
    vec![-l2, 0.5 * l2, 2.0 * l2]
}

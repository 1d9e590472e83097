//! JSON report types for the `system` subcommand and the reconstruction
//! diagnostics sidecar. Field order is fixed by the struct definitions, so
//! identical runs serialize byte-identically.

use potrec::systems::{AssembledSystem, ExactPotential, KineticForm};
use serde::Serialize;

#[derive(Serialize)]
pub struct MatrixCorner {
    pub size: usize,
    pub printed: usize,
    pub rows: Vec<Vec<f64>>,
}

pub fn corner(m: &potrec::Mat, printed: usize) -> MatrixCorner {
    let p = printed.min(m.rows());
    MatrixCorner {
        size: m.rows(),
        printed: p,
        rows: (0..p).map(|i| m.row(i)[..p].to_vec()).collect(),
    }
}

#[derive(Serialize)]
pub struct TridiagEntry {
    pub energy: f64,
    pub form: String,
    pub max_off_band: f64,
    pub scale: f64,
}

#[derive(Serialize)]
pub struct RecursionReport {
    pub eigenvalue: String,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

#[derive(Serialize)]
pub struct SystemReport {
    pub n: usize,
    pub lambda: f64,
    pub counterterm: String,
    pub exact_potential: String,
    pub warnings: Vec<String>,
    pub overlap: MatrixCorner,
    pub hamiltonian: MatrixCorner,
    pub kinetic_tridiagonal: MatrixCorner,
    pub kinetic_full: Option<MatrixCorner>,
    pub potential_tilde: MatrixCorner,
    pub potential_full: Option<MatrixCorner>,
    pub tridiagonality: Vec<TridiagEntry>,
    pub energy_recursion: Option<RecursionReport>,
}

pub fn system_report(
    sys: &AssembledSystem,
    energies: &[f64],
    printed: usize,
) -> potrec::Result<SystemReport> {
    let mut tridiagonality = Vec::new();
    for &e in energies {
        for (form, name) in [
            (KineticForm::Reduced, "reduced"),
            (KineticForm::Full, "full"),
        ] {
            match potrec::systems::tridiagonality_report(sys, e, form) {
                Ok(rep) => tridiagonality.push(TridiagEntry {
                    energy: e,
                    form: name.into(),
                    max_off_band: rep.max_off_band,
                    scale: rep.scale,
                }),
                Err(_) => {
                    // Full form unavailable at boundary parameters; the
                    // reduced entry still reports.
                }
            }
        }
    }
    Ok(SystemReport {
        n: sys.size,
        lambda: sys.basis.lambda(),
        counterterm: sys.counterterm.describe(),
        exact_potential: match &sys.exact_potential {
            ExactPotential::Closed(_) => "closed-form".into(),
            ExactPotential::ReferenceFamily { v2, lambda } => {
                format!("reference family {v2}/sinh^2({lambda} x) + V1/cosh^2 + V0")
            }
            ExactPotential::Unknown => "unknown".into(),
        },
        warnings: sys.warnings.clone(),
        overlap: corner(&sys.overlap, printed),
        hamiltonian: corner(&sys.hamiltonian, printed),
        kinetic_tridiagonal: corner(&sys.kinetic_tridiagonal, printed),
        kinetic_full: sys.kinetic_full.as_ref().map(|m| corner(m, printed)),
        potential_tilde: corner(&sys.potential_tilde, printed),
        potential_full: sys.potential_full.as_ref().map(|m| corner(m, printed)),
        tridiagonality,
        energy_recursion: sys.energy_recursion.as_ref().map(|r| RecursionReport {
            eigenvalue: r.eigenvalue.clone(),
            diag: r.coeffs.a.clone(),
            offdiag: r.coeffs.b.clone(),
        }),
    })
}

#[derive(Serialize)]
pub struct SizeDiagnostics {
    pub n: usize,
    pub m3_variant_max_diff: Option<f64>,
    pub m4_offdiag_residual: Option<f64>,
    pub m4_quadrature_consistent: Option<bool>,
    pub m4_samples: Option<Vec<(f64, f64)>>,
    pub masked_points: Vec<(String, usize)>,
    pub messages: Vec<String>,
    pub system_warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct ReconstructDiagnostics {
    pub runs: Vec<SizeDiagnostics>,
}

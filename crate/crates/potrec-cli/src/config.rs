//! JSON run configurations and their mapping onto library types.

use potrec::bases::{BasisSet, BasisSpec};
use potrec::quadrature::WeightFamily;
use potrec::systems::SystemSpec;
use potrec::Grid;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyCfg {
    Laguerre { nu: f64 },
    Hermite,
    Jacobi { mu: f64, nu: f64 },
}

impl FamilyCfg {
    pub fn to_family(&self) -> WeightFamily {
        match *self {
            FamilyCfg::Laguerre { nu } => WeightFamily::Laguerre { nu },
            FamilyCfg::Hermite => WeightFamily::Hermite,
            FamilyCfg::Jacobi { mu, nu } => WeightFamily::Jacobi { mu, nu },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FamilyCfg::Laguerre { nu } => format!("laguerre nu={nu}"),
            FamilyCfg::Hermite => "hermite".into(),
            FamilyCfg::Jacobi { mu, nu } => format!("jacobi mu={mu} nu={nu}"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussConfig {
    pub family: FamilyCfg,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemCfg {
    Coulomb {
        z: f64,
        l: f64,
        lambda: f64,
    },
    Morse {
        alpha: f64,
        beta: f64,
        v0: f64,
        lambda: f64,
    },
    SinBox {
        v0: f64,
        v1: f64,
        v2: f64,
        lambda: f64,
    },
    HyperbolicPulse {
        v0: f64,
        v1: f64,
        lambda: f64,
        energy: f64,
    },
    CdhSystem {
        v2: f64,
        gamma: f64,
        mu: f64,
        lambda: f64,
    },
    WilsonSystem {
        v2: f64,
        gamma: f64,
        mu: f64,
        a: f64,
        lambda: f64,
    },
}

impl SystemCfg {
    pub fn to_spec(self) -> SystemSpec {
        match self {
            SystemCfg::Coulomb { z, l, lambda } => SystemSpec::Coulomb { z, l, lambda },
            SystemCfg::Morse {
                alpha,
                beta,
                v0,
                lambda,
            } => SystemSpec::Morse {
                alpha,
                beta,
                v0,
                lambda,
            },
            SystemCfg::SinBox { v0, v1, v2, lambda } => SystemSpec::SinBox { v0, v1, v2, lambda },
            SystemCfg::HyperbolicPulse {
                v0,
                v1,
                lambda,
                energy,
            } => SystemSpec::HyperbolicPulse {
                v0,
                v1,
                lambda,
                energy,
            },
            SystemCfg::CdhSystem {
                v2,
                gamma,
                mu,
                lambda,
            } => SystemSpec::CdhSystem {
                v2,
                gamma,
                mu,
                lambda,
            },
            SystemCfg::WilsonSystem {
                v2,
                gamma,
                mu,
                a,
                lambda,
            } => SystemSpec::WilsonSystem {
                v2,
                gamma,
                mu,
                a,
                lambda,
            },
        }
    }

    /// Parameter sweep support for the closed-form curve families.
    pub fn with_parameter(self, name: &str, value: f64) -> Option<SystemCfg> {
        match (self, name) {
            (SystemCfg::SinBox { v1, v2, lambda, .. }, "v0") => Some(SystemCfg::SinBox {
                v0: value,
                v1,
                v2,
                lambda,
            }),
            (SystemCfg::SinBox { v0, v2, lambda, .. }, "v1") => Some(SystemCfg::SinBox {
                v0,
                v1: value,
                v2,
                lambda,
            }),
            (SystemCfg::SinBox { v0, v1, lambda, .. }, "v2") => Some(SystemCfg::SinBox {
                v0,
                v1,
                v2: value,
                lambda,
            }),
            (
                SystemCfg::HyperbolicPulse {
                    v1, lambda, energy, ..
                },
                "v0",
            ) => Some(SystemCfg::HyperbolicPulse {
                v0: value,
                v1,
                lambda,
                energy,
            }),
            (
                SystemCfg::HyperbolicPulse {
                    v0, lambda, energy, ..
                },
                "v1",
            ) => Some(SystemCfg::HyperbolicPulse {
                v0,
                v1: value,
                lambda,
                energy,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub system: SystemCfg,
    pub n: usize,
    #[serde(default)]
    pub energies: Option<Vec<f64>>,
    /// Printed matrix corner size (default 8).
    #[serde(default)]
    pub corner: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisCfg {
    LaguerreRadial { l: f64, lambda: f64 },
    HermiteLine { lambda: f64 },
    MorseLaguerre { alpha: f64, lambda: f64 },
    JacobiSymSin { nu: f64, lambda: f64 },
    JacobiSymTanh { nu: f64, lambda: f64 },
    JacobiHalf { mu: f64, nu: f64, lambda: f64 },
}

impl BasisCfg {
    pub fn to_basis(self) -> potrec::Result<BasisSet> {
        let spec = match self {
            BasisCfg::LaguerreRadial { l, lambda } => BasisSpec::LaguerreRadial { l, lambda },
            BasisCfg::HermiteLine { lambda } => BasisSpec::HermiteLine { lambda },
            BasisCfg::MorseLaguerre { alpha, lambda } => BasisSpec::MorseLaguerre { alpha, lambda },
            BasisCfg::JacobiSymSin { nu, lambda } => BasisSpec::jacobi_sym_sin(nu, lambda),
            BasisCfg::JacobiSymTanh { nu, lambda } => BasisSpec::jacobi_sym_tanh(nu, lambda),
            BasisCfg::JacobiHalf { mu, nu, lambda } => BasisSpec::JacobiHalf { mu, nu, lambda },
        };
        BasisSet::new(spec)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialCfg {
    /// c · r^p · e^{−k r}
    PolyExp { c: f64, p: f64, k: f64 },
    /// Piecewise-linear through sorted breakpoints; constant `outside`
    /// beyond the first/last abscissa.
    PiecewiseLinear {
        points: Vec<(f64, f64)>,
        #[serde(default)]
        outside: f64,
    },
    /// −z / r
    Coulomb { z: f64 },
}

impl PotentialCfg {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PotentialCfg::PolyExp { c, p, k } => c * x.powf(*p) * (-k * x).exp(),
            PotentialCfg::PiecewiseLinear { points, outside } => {
                if points.is_empty() {
                    return *outside;
                }
                if x < points[0].0 || x > points[points.len() - 1].0 {
                    return *outside;
                }
                for w in points.windows(2) {
                    if x >= w[0].0 && x <= w[1].0 {
                        let t = (x - w[0].0) / (w[1].0 - w[0].0);
                        return w[0].1 + t * (w[1].1 - w[0].1);
                    }
                }
                *outside
            }
            PotentialCfg::Coulomb { z } => -z / x,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceCfg {
    /// Matrices assembled from a physical system; methods act on Ṽ and the
    /// counterterm is added back to report the total V(x).
    System { system: SystemCfg },
    /// Matrix built from a user potential by the basis quadrature
    /// (`quadrature_nodes` defaults to the basis size).
    Potential {
        basis: BasisCfg,
        potential: PotentialCfg,
        #[serde(default)]
        quadrature_nodes: Option<usize>,
    },
    /// User-supplied symmetric matrix, row-major, with a declared basis.
    Matrix {
        basis: BasisCfg,
        entries: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridCfg {
    pub fn to_grid(self) -> potrec::Result<Grid> {
        Grid::new(self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCfg {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructConfig {
    pub source: SourceCfg,
    #[serde(default)]
    pub sizes: Option<Vec<usize>>,
    #[serde(default)]
    pub methods: Option<Vec<String>>,
    #[serde(default)]
    pub grid: Option<GridCfg>,
    #[serde(default)]
    pub column: Option<usize>,
    #[serde(default)]
    pub quadrature_k: Option<usize>,
    /// Emit only the closed-form exact curve (no reconstruction).
    #[serde(default)]
    pub exact_only: bool,
    /// Parameter sweep of the closed-form curve (requires exact_only and a
    /// system source).
    #[serde(default)]
    pub sweep: Option<SweepCfg>,
}

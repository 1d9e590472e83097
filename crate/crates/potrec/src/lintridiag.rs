//! Symmetric tridiagonal matrices and their full eigendecomposition.
//!
//! The decomposition uses the implicit-shift QL iteration with accumulation
//! of the rotation product, so eigenvectors come out orthonormal even for
//! numerically degenerate eigenvalues. Matrices here are small (N up to a
//! few hundred), so no blocking or deflation tricks are needed.

use crate::mat::Mat;
use crate::{Error, Result};

/// Maximum QL sweeps per eigenvalue before declaring non-convergence.
const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::domain("tridiagonal matrix must have N >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::domain(format!(
                "offdiag length {} incompatible with diag length {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite entry in tridiagonal matrix"));
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Submatrix with the zeroth row and column deleted.
    pub fn drop_first(&self) -> Result<SymTridiag> {
        if self.size() < 2 {
            return Err(Error::domain("drop_first requires N >= 2"));
        }
        SymTridiag::new(self.diag[1..].to_vec(), self.offdiag[1..].to_vec())
    }

    pub fn to_dense(&self) -> Mat {
        let n = self.size();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.offdiag[i];
                m[(i + 1, i)] = self.offdiag[i];
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct EigenDecomp {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthogonal matrix whose column k is the unit eigenvector of values[k].
    pub vectors: Mat,
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
///
/// Eigenvalues come back sorted ascending; each eigenvector column has its
/// first significantly nonzero entry made non-negative so the decomposition
/// is deterministic.
pub fn eigen_decompose(m: &SymTridiag) -> Result<EigenDecomp> {
    let n = m.size();
    let mut d = m.diag.clone();
    // e[i] couples rows i and i+1; e[n-1] is workspace.
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&m.offdiag);
    let mut z = Mat::identity(n);

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find the block end: smallest m >= l with negligible e[m].
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::numeric(format!(
                    "QL iteration did not converge within {MAX_SWEEPS} sweeps (l = {l})"
                )));
            }
            // Implicit shift from the 2x2 corner.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0;
            let mut i = mm;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from underflow: split the matrix.
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }

    // Sort ascending, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let col = z.col(old_col);
        // Sign convention: first entry exceeding 1e-8 of the column max is
        // made non-negative.
        let max = col.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let lead = col
            .iter()
            .find(|v| v.abs() > 1e-8 * max)
            .copied()
            .unwrap_or(1.0);
        let flip = if lead < 0.0 { -1.0 } else { 1.0 };
        for (row, v) in col.iter().enumerate() {
            vectors[(row, new_col)] = flip * v;
        }
    }
    Ok(EigenDecomp { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Deterministic pseudo-random stream for property-style sweeps.
    pub(crate) struct Lcg(u64);

    impl Lcg {
        pub(crate) fn new(seed: u64) -> Self {
            Lcg(seed)
        }
        pub(crate) fn next_f64(&mut self) -> f64 {
            // Numerical Recipes LCG constants; top 53 bits → [0, 1).
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        pub(crate) fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
            lo + (hi - lo) * self.next_f64()
        }
    }

    fn random_tridiag(rng: &mut Lcg, n: usize) -> SymTridiag {
        let diag = (0..n).map(|_| rng.in_range(-5.0, 5.0)).collect();
        let off = (0..n.saturating_sub(1))
            .map(|_| rng.in_range(0.1, 3.0) * if rng.next_f64() < 0.5 { -1.0 } else { 1.0 })
            .collect();
        SymTridiag::new(diag, off).unwrap()
    }

    fn residual(m: &SymTridiag, d: &EigenDecomp) -> f64 {
        let dense = m.to_dense();
        let n = m.size();
        let mut worst = 0.0_f64;
        for k in 0..n {
            let v = d.vectors.col(k);
            let mv = dense.matvec(&v);
            for i in 0..n {
                worst = worst.max((mv[i] - d.values[k] * v[i]).abs());
            }
        }
        worst
    }

    fn orthonormality_defect(d: &EigenDecomp) -> f64 {
        let gram = d.vectors.transpose().matmul(&d.vectors);
        gram.sub(&Mat::identity(gram.rows())).max_abs()
    }

    #[test]
    fn one_by_one() {
        let m = SymTridiag::new(vec![5.0], vec![]).unwrap();
        let d = eigen_decompose(&m).unwrap();
        assert_eq!(d.values, vec![5.0]);
        assert_eq!(d.vectors[(0, 0)], 1.0);
    }

    #[test]
    fn two_by_two_symmetric() {
        let m = SymTridiag::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let d = eigen_decompose(&m).unwrap();
        assert!((d.values[0] + 1.0).abs() < 1e-14);
        assert!((d.values[1] - 1.0).abs() < 1e-14);
        let s = 0.5_f64.sqrt();
        assert!((d.vectors[(0, 0)] - s).abs() < 1e-14);
        assert!((d.vectors[(1, 0)] + s).abs() < 1e-14);
        assert!((d.vectors[(0, 1)] - s).abs() < 1e-14);
        assert!((d.vectors[(1, 1)] - s).abs() < 1e-14);
    }

    #[test]
    fn three_by_three_known_spectrum() {
        // diag [2,2,2], offdiag [1,1]: eigenvalues 2−√2, 2, 2+√2
        // (roots of the characteristic cubic (2−x)((2−x)²−2) = 0).
        let m = SymTridiag::new(vec![2.0, 2.0, 2.0], vec![1.0, 1.0]).unwrap();
        let d = eigen_decompose(&m).unwrap();
        let r2 = 2.0_f64.sqrt();
        assert!((d.values[0] - (2.0 - r2)).abs() < 1e-13);
        assert!((d.values[1] - 2.0).abs() < 1e-13);
        assert!((d.values[2] - (2.0 + r2)).abs() < 1e-13);
    }

    #[test]
    fn residual_and_orthonormality_random() {
        let mut rng = Lcg::new(0x5eed);
        for n in 1..=12 {
            for _ in 0..8 {
                let m = random_tridiag(&mut rng, n);
                let d = eigen_decompose(&m).unwrap();
                let scale = m.to_dense().max_abs();
                assert!(residual(&m, &d) <= 1e-10 * scale.max(1.0), "residual, n={n}");
                assert!(orthonormality_defect(&d) <= 1e-12, "orthonormality, n={n}");
                for w in d.values.windows(2) {
                    assert!(w[0] <= w[1]);
                }
            }
        }
    }

    #[test]
    fn offdiag_sign_flip_preserves_spectrum() {
        let mut rng = Lcg::new(42);
        for n in 2..=12 {
            let m = random_tridiag(&mut rng, n);
            let flipped = SymTridiag::new(
                m.diag.clone(),
                m.offdiag.iter().map(|v| -v).collect(),
            )
            .unwrap();
            let a = eigen_decompose(&m).unwrap().values;
            let b = eigen_decompose(&flipped).unwrap().values;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-11 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn trace_preserved() {
        let mut rng = Lcg::new(7);
        for n in 1..=12 {
            let m = random_tridiag(&mut rng, n);
            let d = eigen_decompose(&m).unwrap();
            let tr: f64 = m.diag.iter().sum();
            let sum: f64 = d.values.iter().sum();
            assert!((tr - sum).abs() <= 1e-10 * tr.abs().max(1.0));
        }
    }

    #[test]
    fn cauchy_interlacing_with_dropped_first() {
        let mut rng = Lcg::new(99);
        for n in 2..=12 {
            let m = random_tridiag(&mut rng, n);
            let outer = eigen_decompose(&m).unwrap().values;
            let inner = eigen_decompose(&m.drop_first().unwrap()).unwrap().values;
            for k in 0..inner.len() {
                assert!(
                    outer[k] <= inner[k] + 1e-10 && inner[k] <= outer[k + 1] + 1e-10,
                    "interlacing violated at n={n}, k={k}"
                );
            }
        }
    }

    #[test]
    fn drop_first_structure() {
        let m = SymTridiag::new(vec![1.0, 2.0, 3.0], vec![4.0, 5.0]).unwrap();
        let s = m.drop_first().unwrap();
        assert_eq!(s.diag, vec![2.0, 3.0]);
        assert_eq!(s.offdiag, vec![5.0]);
        let one = SymTridiag::new(vec![1.0], vec![]).unwrap();
        assert!(one.drop_first().is_err());
    }

    #[test]
    fn degenerate_eigenvalues_keep_orthonormal_vectors() {
        // Two decoupled identical blocks give exactly repeated eigenvalues.
        let m = SymTridiag::new(vec![1.0, 1.0, 1.0, 1.0], vec![0.5, 0.0, 0.5]).unwrap();
        let d = eigen_decompose(&m).unwrap();
        assert!(orthonormality_defect(&d) <= 1e-12);
    }
}

//! Geometric measure of quantum discord D(ρ) = Tr(CCᵗ) − max_A Tr(ACCᵗAᵗ).
//!
//! C holds the coefficients of ρ in the Hilbert-Schmidt orthonormal product
//! basis X₁ = I/√N, X_{i+1} = λᵢ/√2 (and likewise Yⱼ on B). Writing the
//! λ-normalized local vectors and correlation matrix as x, y and T,
//! G = xxᵗ + (2/M)TTᵗ and the closed form is
//!
//! D = (2/(N²M))·[‖x‖² + (2/M)‖T‖² − η_max],
//!
//! with η_max the largest eigenvalue of G.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{build_su_basis, GammaConvention, SuBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, c};
use crate::search::{self, SearchConfig};
use crate::state::{self, DensityMatrix, GbssSpec};

#[derive(Clone, Debug)]
pub struct CorrelationBlock {
    pub dims: (usize, usize),
    /// cᵢⱼ = Tr(ρ Xᵢ⊗Yⱼ), shape N² × M².
    pub c: DMatrix<f64>,
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub t: DMatrix<f64>,
    pub g: DMatrix<f64>,
    /// Eigenvalues of G, ascending.
    pub eta: Vec<f64>,
}

impl CorrelationBlock {
    pub fn tr_cct(&self) -> f64 {
        self.c.norm_squared()
    }

    pub fn eta_max(&self) -> f64 {
        self.eta.last().copied().unwrap_or(0.0)
    }

    /// The closed-form expression evaluated on this block's x, T and G.
    pub fn closed_form(&self) -> f64 {
        let (n, m) = (self.dims.0 as f64, self.dims.1 as f64);
        2.0 / (n * n * m) * (self.x.norm_squared() + 2.0 / m * self.t.norm_squared() - self.eta_max())
    }

    /// 1/(NM) + 2‖y‖²/(NM²) + (2/(N²M))·Σₖ aₖᵗ G aₖ for a basis on A with
    /// rows aₖᵢ = ⟨k|λᵢ|k⟩/√2.
    pub fn measured_term(&self, a_rows: &[Vec<f64>]) -> f64 {
        let (n, m) = (self.dims.0 as f64, self.dims.1 as f64);
        let quadratic: f64 = a_rows
            .iter()
            .map(|row| {
                let a = DVector::from_column_slice(row);
                a.dot(&(&self.g * &a))
            })
            .sum();
        1.0 / (n * m) + 2.0 * self.y.norm_squared() / (n * m * m) + 2.0 / (n * n * m) * quadratic
    }
}

fn sorted_eigenvalues(g: &DMatrix<f64>) -> Vec<f64> {
    let mut eta: Vec<f64> = g.clone().symmetric_eigenvalues().iter().copied().collect();
    eta.sort_by(f64::total_cmp);
    eta
}

/// Expands a dense state on C^N ⊗ C^M in the product basis.
pub fn correlation_block(rho: &DensityMatrix, dims: (usize, usize)) -> Result<CorrelationBlock> {
    let (n, m) = dims;
    if rho.dim != n * m || rho.data.nrows() != n * m {
        return Err(Error::DimensionMismatch { got: rho.dim, n, m });
    }
    let basis_a = build_su_basis(n)?;
    let basis_b = build_su_basis(m)?;
    let mut x_ops = vec![linalg::identity(n) * c(1.0 / (n as f64).sqrt(), 0.0)];
    x_ops.extend(basis_a.lambdas.iter().map(|l| l * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)));
    let mut y_ops = vec![linalg::identity(m) * c(1.0 / (m as f64).sqrt(), 0.0)];
    y_ops.extend(basis_b.lambdas.iter().map(|l| l * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)));

    let mut coeffs = DMatrix::zeros(n * n, m * m);
    for (i, xi) in x_ops.iter().enumerate() {
        // Tr_A[ρ(Xᵢ ⊗ I)], then pair with each Yⱼ.
        let reduced = linalg::CMatrix::from_fn(m, m, |r, s| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    let w = xi[(b, a)];
                    if w != Complex64::new(0.0, 0.0) {
                        acc += rho.data[(a * m + r, b * m + s)] * w;
                    }
                }
            }
            acc
        });
        for (j, yj) in y_ops.iter().enumerate() {
            coeffs[(i, j)] = linalg::trace_product(&reduced, yj).re;
        }
    }
    Ok(block_from_coefficients(coeffs, dims))
}

fn block_from_coefficients(coeffs: DMatrix<f64>, dims: (usize, usize)) -> CorrelationBlock {
    let (n, m) = (dims.0 as f64, dims.1 as f64);
    let rows = dims.0 * dims.0 - 1;
    let cols = dims.1 * dims.1 - 1;
    let x = DVector::from_fn(rows, |i, _| coeffs[(i + 1, 0)] * n * m.sqrt() / std::f64::consts::SQRT_2);
    let y = DVector::from_fn(cols, |j, _| coeffs[(0, j + 1)] * m * n.sqrt() / std::f64::consts::SQRT_2);
    let t = DMatrix::from_fn(rows, cols, |i, j| coeffs[(i + 1, j + 1)] * n * m / 2.0);
    let g = &x * x.transpose() + &t * t.transpose() * (2.0 / m);
    let eta = sorted_eigenvalues(&g);
    CorrelationBlock { dims, c: coeffs, x, y, t, g, eta }
}

/// State coefficients mapped to the λ normalization: x_λ = √(N/2)x,
/// T_λ = (√(NM)/2)·diag(t), restricted to the 2n+1 γ coordinates.
struct GammaCoordinates {
    x: Vec<f64>,
    y_norm_sq: f64,
    t: Vec<f64>,
    g: DMatrix<f64>,
}

fn gamma_coordinates(spec: &GbssSpec) -> GammaCoordinates {
    let (n, m) = spec.dims();
    let (n, m) = (n as f64, m as f64);
    let x: Vec<f64> = spec.x.iter().map(|v| (n / 2.0).sqrt() * v).collect();
    let t: Vec<f64> = spec.t.iter().map(|v| (n * m).sqrt() / 2.0 * v).collect();
    let len = spec.terms();
    let g = DMatrix::from_fn(len, len, |i, j| x[i] * x[j] + if i == j { 2.0 / m * t[i] * t[i] } else { 0.0 });
    GammaCoordinates {
        y_norm_sq: spec.y.iter().map(|v| (m / 2.0) * v * v).sum(),
        x,
        t,
        g,
    }
}

/// η eigenvalues (ascending) of G for a spec.
pub fn g_eigenvalues(spec: &GbssSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    Ok(sorted_eigenvalues(&gamma_coordinates(spec).g))
}

pub fn eta_max(spec: &GbssSpec) -> Result<f64> {
    Ok(*g_eigenvalues(spec)?.last().expect("2n+1 ≥ 3 eigenvalues"))
}

/// Tr(CCᵗ) = (1/NM)(1 + ‖x‖² + ‖y‖² + ‖t‖²) in spec coefficients, which is Tr ρ².
pub fn tr_cct_closed(spec: &GbssSpec) -> Result<f64> {
    spec.validate()?;
    let (n, m) = spec.dims();
    let sq = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
    Ok((1.0 + sq(&spec.x) + sq(&spec.y) + sq(&spec.t)) / (n * m) as f64)
}

pub fn gmqd_closed(spec: &GbssSpec) -> Result<f64> {
    spec.validate()?;
    let (n, m) = spec.dims();
    let (n, m) = (n as f64, m as f64);
    let k = gamma_coordinates(spec);
    let norms = k.x.iter().map(|v| v * v).sum::<f64>() + 2.0 / m * k.t.iter().map(|v| v * v).sum::<f64>();
    let eta_max = *sorted_eigenvalues(&k.g).last().expect("non-empty");
    Ok(2.0 / (n * n * m) * (norms - eta_max))
}

/// max_A Tr(ACCᵗAᵗ) = (1/N){1/M + (2/M²)‖y‖² + (2/(NM))η_max}.
pub fn max_term_closed(spec: &GbssSpec) -> Result<f64> {
    spec.validate()?;
    let (n, m) = spec.dims();
    let (n, m) = (n as f64, m as f64);
    let k = gamma_coordinates(spec);
    let eta_max = *sorted_eigenvalues(&k.g).last().expect("non-empty");
    Ok((1.0 / m + 2.0 / (m * m) * k.y_norm_sq + 2.0 / (n * m) * eta_max) / n)
}

/// The lower bound obtained by subtracting the N−1 largest eigenvalues of G.
pub fn spectral_lower_bound(spec: &GbssSpec) -> Result<f64> {
    spec.validate()?;
    let (n_dim, m_dim) = spec.dims();
    let (n, m) = (n_dim as f64, m_dim as f64);
    let k = gamma_coordinates(spec);
    let eta = sorted_eigenvalues(&k.g);
    let top: f64 = eta.iter().rev().take(n_dim - 1).sum();
    let norms = k.x.iter().map(|v| v * v).sum::<f64>() + 2.0 / m * k.t.iter().map(|v| v * v).sum::<f64>();
    Ok(2.0 / (n * n * m) * (norms - top))
}

/// Rows aₖᵢ = ⟨k|λᵢ|k⟩/√2 for the columns |k⟩ of `u`.
pub fn isometry_rows(u: &linalg::CMatrix, basis: &SuBasis) -> Vec<Vec<f64>> {
    (0..u.ncols())
        .map(|k| {
            let v = u.column(k);
            basis
                .lambdas
                .iter()
                .map(|l| (v.adjoint() * l * v)[(0, 0)].re * std::f64::consts::FRAC_1_SQRT_2)
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct GmqdOracle {
    pub value: f64,
    pub max_term: f64,
    pub basis: linalg::CMatrix,
    pub evaluations: usize,
}

/// min over bases on A of Tr(CCᵗ) − Tr(ACCᵗAᵗ), by basis search.
pub fn gmqd_oracle(rho: &DensityMatrix, dims: (usize, usize), config: &SearchConfig) -> Result<GmqdOracle> {
    if config.budget == 0 {
        return Err(Error::EmptyBudget);
    }
    let block = correlation_block(rho, dims)?;
    let basis = build_su_basis(dims.0)?;
    let result = search::maximize_over_bases(dims.0, config, |u| block.measured_term(&isometry_rows(u, &basis)))?;
    Ok(GmqdOracle {
        value: block.tr_cct() - result.value,
        max_term: result.value,
        basis: result.basis,
        evaluations: result.evaluations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GmqdReport {
    #[serde(rename = "trCC")]
    pub tr_cc: f64,
    #[serde(rename = "maxTerm_closed")]
    pub max_term_closed: f64,
    #[serde(rename = "maxTerm_oracle")]
    pub max_term_oracle: Option<f64>,
    #[serde(rename = "D_closed")]
    pub d_closed: f64,
    #[serde(rename = "D_oracle")]
    pub d_oracle: Option<f64>,
    pub eta_max: f64,
    pub lower_bound: f64,
    pub purity: f64,
    /// D_oracle − D_closed.
    pub gap: Option<f64>,
}

pub fn analyze(spec: &GbssSpec, config: Option<&SearchConfig>, convention: GammaConvention) -> Result<GmqdReport> {
    let rho = state::realize(spec, convention)?;
    let d_closed = gmqd_closed(spec)?;
    let oracle = config.map(|cfg| gmqd_oracle(&rho, spec.dims(), cfg)).transpose()?;
    Ok(GmqdReport {
        tr_cc: tr_cct_closed(spec)?,
        max_term_closed: max_term_closed(spec)?,
        max_term_oracle: oracle.as_ref().map(|o| o.max_term),
        d_closed,
        d_oracle: oracle.as_ref().map(|o| o.value),
        eta_max: eta_max(spec)?,
        lower_bound: spectral_lower_bound(spec)?,
        purity: rho.purity(),
        gap: oracle.as_ref().map(|o| o.value - d_closed),
    })
}

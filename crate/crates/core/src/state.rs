//! Generalized Bloch sphere states on C^N ⊗ C^M with N = 2ⁿ ≤ M = 2ᵐ:
//!
//! ρ = (1/NM)(I⊗I + Σ xⱼ γⱼ⊗I + Σ yⱼ I⊗γⱼ^B + Σ tⱼ γⱼ⊗γⱼ^B),  j = 1..2n+1.
//!
//! On B the operators are γⱼ^B = γⱼ ⊗ I_{M/N}. Their product over all j is a
//! multiple of the identity, which is what gives the state its closed-form
//! spectrum with multiplicity M/N per sign pattern.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{max_anticommuting_set, GammaConvention, GammaSet, Parity};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

/// Eigenvalues below this are treated as zero / non-negative.
pub const PHYSICAL_TOL: f64 = 1e-12;

/// Largest m accepted (M = 64).
pub const MAX_QUBITS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GbssSpec {
    pub n: usize,
    pub m: usize,
    pub t: Vec<f64>,
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub y: Vec<f64>,
}

impl GbssSpec {
    /// Diagonal-T state with maximally mixed marginals.
    pub fn new(n: usize, m: usize, t: Vec<f64>) -> Result<Self> {
        let len = 2 * n + 1;
        Self::with_local_vectors(n, m, t, vec![0.0; len], vec![0.0; len])
    }

    pub fn with_local_vectors(n: usize, m: usize, t: Vec<f64>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let spec = Self { n, m, t, x, y };
        spec.validate()?;
        Ok(spec)
    }

    /// Fills empty x / y with zeros and checks every invariant.
    pub fn normalized(mut self) -> Result<Self> {
        let len = 2 * self.n + 1;
        if self.x.is_empty() {
            self.x = vec![0.0; len];
        }
        if self.y.is_empty() {
            self.y = vec![0.0; len];
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > self.m || self.m > MAX_QUBITS {
            return Err(Error::SubsystemOrder { n: self.n, m: self.m });
        }
        let len = 2 * self.n + 1;
        for v in [&self.t, &self.x, &self.y] {
            if v.len() != len {
                return Err(Error::LengthMismatch { expected: len, got: v.len() });
            }
        }
        if self.t.iter().chain(&self.x).chain(&self.y).any(|v| !v.is_finite()) {
            return Err(Error::Descriptor("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// (N, M).
    pub fn dims(&self) -> (usize, usize) {
        (1 << self.n, 1 << self.m)
    }

    pub fn terms(&self) -> usize {
        2 * self.n + 1
    }

    pub fn has_local_vectors(&self) -> bool {
        self.x.iter().chain(&self.y).any(|&v| v != 0.0)
    }

    /// Index of the largest |tⱼ|, lowest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (j, v) in self.t.iter().enumerate() {
            if v.abs() > self.t[best].abs() {
                best = j;
            }
        }
        best
    }

    pub fn t_max(&self) -> f64 {
        self.t[self.argmax()].abs()
    }

    pub fn t_norm_sq(&self) -> f64 {
        self.t.iter().map(|v| v * v).sum()
    }

    /// Uniform draw from the physical polytope (rejection from [−1,1]^{2n+1}).
    pub fn random_physical<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Self {
        loop {
            let t: Vec<f64> = (0..2 * n + 1).map(|_| rng.random_range(-1.0..1.0)).collect();
            let spec = Self::new(n, m, t).expect("random spec dimensions are valid");
            if physical_check(&spec).map(|p| p.physical).unwrap_or(false) {
                return spec;
            }
        }
    }
}

fn require_no_local(spec: &GbssSpec) -> Result<()> {
    if spec.has_local_vectors() {
        Err(Error::NonzeroLocalVectors)
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub data: CMatrix,
    /// Whether the closed-form (or numerical) spectrum was non-negative.
    pub physical: bool,
}

impl DensityMatrix {
    pub fn new(data: CMatrix) -> Self {
        let dim = data.nrows();
        let physical = linalg::hermitian_eigenvalues(&data)[0] >= -1e-10;
        Self { dim, data, physical }
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.data, &self.data).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.data)
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.data)
    }
}

/// The A-side maximal anticommuting set and the matching B operators γⱼ ⊗ I_{M/N}.
#[derive(Clone, Debug)]
pub struct BipartiteGammas {
    pub a: GammaSet,
    pub b: Vec<CMatrix>,
}

impl BipartiteGammas {
    pub fn new(n: usize, m: usize, convention: GammaConvention) -> Result<Self> {
        if n == 0 || n > m {
            return Err(Error::SubsystemOrder { n, m });
        }
        let a = max_anticommuting_set(1 << n, convention)?;
        let pad = linalg::identity(1 << (m - n));
        let b = a.gammas.iter().map(|g| linalg::kron(g, &pad)).collect();
        Ok(Self { a, b })
    }
}

/// Dense ρ for the spec. Non-physical specs are realized with `physical = false`.
pub fn realize(spec: &GbssSpec, convention: GammaConvention) -> Result<DensityMatrix> {
    spec.validate()?;
    let (n_dim, m_dim) = spec.dims();
    let g = BipartiteGammas::new(spec.n, spec.m, convention)?;
    let id_a = linalg::identity(n_dim);
    let id_b = linalg::identity(m_dim);
    let mut rho = linalg::identity(n_dim * m_dim);
    for j in 0..spec.terms() {
        if spec.t[j] != 0.0 {
            rho += linalg::kron(&g.a.gammas[j], &g.b[j]) * c(spec.t[j], 0.0);
        }
        if spec.x[j] != 0.0 {
            rho += linalg::kron(&g.a.gammas[j], &id_b) * c(spec.x[j], 0.0);
        }
        if spec.y[j] != 0.0 {
            rho += linalg::kron(&id_a, &g.b[j]) * c(spec.y[j], 0.0);
        }
    }
    rho /= c((n_dim * m_dim) as f64, 0.0);
    let physical = if spec.has_local_vectors() {
        linalg::hermitian_eigenvalues(&rho)[0] >= -1e-10
    } else {
        physical_check(spec)?.physical
    };
    Ok(DensityMatrix {
        dim: n_dim * m_dim,
        data: rho,
        physical,
    })
}

/// One closed-form eigenvalue with its sign pattern (i₁,…,i_{2n}) and multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumLevel {
    pub signs: Vec<u8>,
    pub value: f64,
    pub multiplicity: usize,
}

/// λ = (1/NM)[1 + Σₐ(−1)^{iₐ}tₐ + (−1)ⁿ(−1)^{Σiₐ}t_{2n+1}] for every i ∈ {0,1}^{2n},
/// each with multiplicity M/N. `t` may be any coefficient vector of length 2n+1.
pub fn spectrum_levels(n: usize, m: usize, t: &[f64]) -> Vec<SpectrumLevel> {
    let patterns = 1usize << (2 * n);
    let nm = (1usize << (n + m)) as f64;
    let multiplicity = 1 << (m - n);
    let last_sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    (0..patterns)
        .map(|p| {
            let signs: Vec<u8> = (0..2 * n).map(|a| ((p >> (2 * n - 1 - a)) & 1) as u8).collect();
            let mut value = 1.0;
            let mut parity = 1.0;
            for (a, &i) in signs.iter().enumerate() {
                let s = if i == 0 { 1.0 } else { -1.0 };
                value += s * t[a];
                parity *= s;
            }
            value += last_sign * parity * t[2 * n];
            SpectrumLevel {
                signs,
                value: value / nm,
                multiplicity,
            }
        })
        .collect()
}

pub fn closed_form_levels(spec: &GbssSpec) -> Result<Vec<SpectrumLevel>> {
    spec.validate()?;
    require_no_local(spec)?;
    Ok(spectrum_levels(spec.n, spec.m, &spec.t))
}

/// Full closed-form multiset (NM values, ascending).
pub fn closed_form_spectrum(spec: &GbssSpec) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = closed_form_levels(spec)?
        .into_iter()
        .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity))
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Positivity verdict plus the N² facet slacks (the closed-form eigenvalues).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhysicalCheck {
    pub physical: bool,
    pub margins: Vec<f64>,
}

fn margins_check(levels: Vec<SpectrumLevel>) -> PhysicalCheck {
    let margins: Vec<f64> = levels.into_iter().map(|l| l.value).collect();
    PhysicalCheck {
        physical: margins.iter().all(|&v| v >= -PHYSICAL_TOL),
        margins,
    }
}

pub fn physical_check(spec: &GbssSpec) -> Result<PhysicalCheck> {
    Ok(margins_check(closed_form_levels(spec)?))
}

pub fn is_physical(spec: &GbssSpec) -> Result<bool> {
    Ok(physical_check(spec)?.physical)
}

/// Coefficients of PT_B(ρ): transposing γⱼ^B negates tⱼ exactly when γⱼ is antisymmetric.
pub fn partial_transpose_coefficients(t: &[f64], gammas: &GammaSet) -> Vec<f64> {
    t.iter()
        .zip(&gammas.parity)
        .map(|(&v, p)| if *p == Parity::Antisymmetric { -v } else { v })
        .collect()
}

/// Coefficients with only t_{2n+1} negated.
pub fn last_sign_flipped(t: &[f64]) -> Vec<f64> {
    let mut out = t.to_vec();
    if let Some(last) = out.last_mut() {
        *last = -*last;
    }
    out
}

/// Closed-form PT_B margins (exact for either γ convention).
pub fn ppt_check(spec: &GbssSpec, convention: GammaConvention) -> Result<PhysicalCheck> {
    spec.validate()?;
    require_no_local(spec)?;
    let gammas = max_anticommuting_set(1 << spec.n, convention)?;
    let flipped = partial_transpose_coefficients(&spec.t, &gammas);
    Ok(margins_check(spectrum_levels(spec.n, spec.m, &flipped)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Transpose of the chosen tensor factor of an operator on C^N ⊗ C^M.
pub fn partial_transpose(rho: &DensityMatrix, side: Side, dims: (usize, usize)) -> Result<DensityMatrix> {
    let (n, m) = dims;
    if rho.dim != n * m || rho.data.nrows() != n * m {
        return Err(Error::DimensionMismatch { got: rho.dim, n, m });
    }
    let data = CMatrix::from_fn(n * m, n * m, |r, s| {
        let (a, x) = (r / m, r % m);
        let (b, y) = (s / m, s % m);
        match side {
            Side::A => rho.data[(b * m + x, a * m + y)],
            Side::B => rho.data[(a * m + y, b * m + x)],
        }
    });
    Ok(DensityMatrix::new(data))
}

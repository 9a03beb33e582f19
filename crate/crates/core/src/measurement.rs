//! Effects in the coherence-vector picture, E = (1/N)(I + √(N(N−1)/2)·e·λ),
//! post-measurement states of a GBSS, the μ statistic and the canonical
//! optimal projective measurement.

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{star_product, GammaConvention, GammaSet, PauliString, SignedPauli, SuBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::state::{DensityMatrix, GbssSpec, Side};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceVector {
    pub dim: usize,
    pub components: Vec<f64>,
}

impl CoherenceVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if components.len() != dim * dim - 1 {
            return Err(Error::LengthMismatch {
                expected: dim * dim - 1,
                got: components.len(),
            });
        }
        Ok(Self { dim, components })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: vec![0.0; dim * dim - 1],
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|v| v * v).sum()
    }

    /// Largest violation of the pure-effect conditions e·e = 1 and, for N > 2, e⋆e = e.
    pub fn purity_defect(&self, basis: &SuBasis) -> Result<f64> {
        let mut defect = (self.norm_sq() - 1.0).abs();
        if self.dim > 2 {
            let star = star_product(&self.components, &self.components, basis)?;
            for (s, e) in star.iter().zip(&self.components) {
                defect = defect.max((s - e).abs());
            }
        }
        Ok(defect)
    }
}

fn coherence_scale(dim: usize) -> f64 {
    let n = dim as f64;
    (n * (n - 1.0) / 2.0).sqrt()
}

pub fn effect_from_coherence(e: &CoherenceVector, basis: &SuBasis) -> Result<CMatrix> {
    if e.dim != basis.dim || e.components.len() != basis.len() {
        return Err(Error::LengthMismatch {
            expected: basis.len(),
            got: e.components.len(),
        });
    }
    let scale = coherence_scale(basis.dim);
    let mut out = linalg::identity(basis.dim);
    for (v, lambda) in e.components.iter().zip(&basis.lambdas) {
        if *v != 0.0 {
            out += lambda * c(scale * v, 0.0);
        }
    }
    Ok(out / c(basis.dim as f64, 0.0))
}

/// Inverse of [`effect_from_coherence`] for a trace-one Hermitian operator.
pub fn coherence_of_effect(effect: &CMatrix, basis: &SuBasis) -> CoherenceVector {
    let factor = basis.dim as f64 / (2.0 * coherence_scale(basis.dim));
    CoherenceVector {
        dim: basis.dim,
        components: basis.components(effect).iter().map(|z| factor * z.re).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Effect {
    pub coherence: CoherenceVector,
    #[serde(serialize_with = "crate::json::serialize_matrix")]
    pub matrix: CMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct Povm {
    pub effects: Vec<Effect>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PovmCheck {
    pub min_eigenvalue: f64,
    pub completeness_error: f64,
}

impl PovmCheck {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.min_eigenvalue >= -tol && self.completeness_error <= tol
    }
}

impl Povm {
    pub fn from_matrices(matrices: Vec<CMatrix>, basis: &SuBasis) -> Self {
        let effects = matrices
            .into_iter()
            .map(|m| Effect {
                coherence: coherence_of_effect(&(&m * c(1.0 / m.trace().re, 0.0)), basis),
                matrix: m,
            })
            .collect();
        Self { effects }
    }

    /// Rank-1 projectors onto the columns of a unitary.
    pub fn from_unitary(u: &CMatrix, basis: &SuBasis) -> Self {
        let projectors = (0..u.ncols()).map(|k| u.column(k) * u.column(k).adjoint()).collect();
        Self::from_matrices(projectors, basis)
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn validate(&self) -> PovmCheck {
        let dim = self.effects.first().map_or(0, |e| e.matrix.nrows());
        let mut sum = CMatrix::zeros(dim, dim);
        let mut min_eigenvalue = f64::INFINITY;
        for effect in &self.effects {
            sum += &effect.matrix;
            min_eigenvalue = min_eigenvalue.min(linalg::hermitian_eigenvalues(&effect.matrix)[0]);
        }
        PovmCheck {
            min_eigenvalue,
            completeness_error: linalg::max_abs(&(sum - linalg::identity(dim))),
        }
    }
}

/// The basis and γ set on the measured subsystem, with γⱼ = sⱼ·√(N/2)·λ_{kⱼ}.
#[derive(Clone, Debug)]
pub struct EffectFrame {
    pub basis: SuBasis,
    pub gammas: GammaSet,
    pub coordinates: Vec<(usize, f64)>,
}

impl EffectFrame {
    pub fn new(dim: usize, convention: GammaConvention) -> Result<Self> {
        let basis = SuBasis::for_convention(dim, convention)?;
        let gammas = crate::clifford::max_anticommuting_set(dim, convention)?;
        let coordinates = basis.gamma_coordinates(&gammas);
        Ok(Self {
            basis,
            gammas,
            coordinates,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim
    }

    /// Components of e along γ₁…γ_{2n+1}; Tr(E γⱼ) = √(N−1)·(returned value).
    pub fn gamma_components(&self, e: &CoherenceVector) -> Vec<f64> {
        self.coordinates.iter().map(|&(k, s)| s * e.components[k]).collect()
    }

    pub fn coherence_vector(&self, effect: &CMatrix) -> CoherenceVector {
        coherence_of_effect(effect, &self.basis)
    }
}

/// μ = √(2(N−1)/N · Σ(tⱼeⱼ)²).
pub fn mu(spec: &GbssSpec, e: &CoherenceVector, frame: &EffectFrame) -> f64 {
    let n = frame.dim() as f64;
    (2.0 * (n - 1.0) / n).sqrt() * weighted_norm(spec, e, frame)
}

/// Bloch length of the conditional state on the unmeasured side, √(N−1)·‖t∘e‖.
pub fn bloch_length(spec: &GbssSpec, e: &CoherenceVector, frame: &EffectFrame) -> f64 {
    (frame.dim() as f64 - 1.0).sqrt() * weighted_norm(spec, e, frame)
}

fn weighted_norm(spec: &GbssSpec, e: &CoherenceVector, frame: &EffectFrame) -> f64 {
    frame
        .gamma_components(e)
        .iter()
        .zip(&spec.t)
        .map(|(ej, tj)| (ej * tj).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Outcome probability and conditional state of the other side after the
/// effect with coherence vector `e` is applied to `side`.
///
/// With x = y = 0 the probability is Tr(E)/N = 1/N and the conditional state
/// is (1/K)(I + √(N−1)·Σ tⱼ eⱼ γⱼ), K the unmeasured dimension.
pub fn post_measurement_state(
    spec: &GbssSpec,
    e: &CoherenceVector,
    side: Side,
    convention: GammaConvention,
) -> Result<(f64, DensityMatrix)> {
    spec.validate()?;
    if spec.has_local_vectors() {
        return Err(Error::NonzeroLocalVectors);
    }
    let (n_dim, m_dim) = spec.dims();
    if side == Side::B && n_dim != m_dim {
        return Err(Error::UnsupportedSide);
    }
    let frame = EffectFrame::new(n_dim, convention)?;
    if e.dim != n_dim || e.components.len() != frame.basis.len() {
        return Err(Error::LengthMismatch {
            expected: frame.basis.len(),
            got: e.components.len(),
        });
    }
    let probability = 1.0 / n_dim as f64;
    let other = crate::state::BipartiteGammas::new(spec.n, spec.m, convention)?;
    let other_dim = if side == Side::A { m_dim } else { n_dim };
    let root = (n_dim as f64 - 1.0).sqrt();
    let mut state = linalg::identity(other_dim);
    for (j, ej) in frame.gamma_components(e).into_iter().enumerate() {
        let coeff = root * spec.t[j] * ej;
        if coeff != 0.0 {
            let g = if side == Side::A { &other.b[j] } else { &other.a.gammas[j] };
            state += g * c(coeff, 0.0);
        }
    }
    state /= c(other_dim as f64, 0.0);
    Ok((probability, DensityMatrix::new(state)))
}

/// Conditional state Tr_A[(E⊗I)ρ]/p of a dense bipartite state, for a rank-1
/// effect |v⟩⟨v|. Returns None when the outcome probability is below 1e-15.
pub fn conditional_state(rho: &CMatrix, v: &[Complex64], m_dim: usize) -> Option<(f64, CMatrix)> {
    let block = linalg::conditional_block(rho, v, m_dim);
    let p = block.trace().re;
    if p < 1e-15 {
        return None;
    }
    Some((p, block / c(p, 0.0)))
}

/// The canonical optimal measurement for a diagonal-T GBSS.
#[derive(Clone, Debug, Serialize)]
pub struct OptimalPovm {
    pub povm: Povm,
    /// Index of the measured γ (largest |tⱼ|, lowest index on ties).
    pub argmax: usize,
    /// Commuting Pauli strings whose joint eigenbasis defines the effects; the first is γ_argmax.
    pub stabilizers: Vec<SignedPauli>,
    pub mu_max: f64,
    pub degenerate: bool,
}

/// Projectors onto the joint eigenbasis of γ_l and n−1 further commuting
/// Pauli strings. Completions are picked greedily by fewest X/Y letters, then
/// lexicographically; effects are ordered by sign pattern with + first.
pub fn optimal_povm(spec: &GbssSpec, convention: GammaConvention) -> Result<OptimalPovm> {
    spec.validate()?;
    if spec.has_local_vectors() {
        return Err(Error::NonzeroLocalVectors);
    }
    let (n_dim, _) = spec.dims();
    let frame = EffectFrame::new(n_dim, convention)?;
    let argmax = spec.argmax();
    let lead = frame.gammas.strings[argmax].clone();
    let stabilizers = commuting_completion(lead, spec.n);

    let generators: Vec<CMatrix> = stabilizers.iter().map(SignedPauli::matrix).collect();
    let id = linalg::identity(n_dim);
    let projectors: Vec<CMatrix> = (0..n_dim)
        .map(|pattern| {
            generators.iter().enumerate().fold(id.clone(), |acc, (i, g)| {
                let minus = (pattern >> (spec.n - 1 - i)) & 1 == 1;
                let sign = if minus { -1.0 } else { 1.0 };
                acc * ((&id + g * c(sign, 0.0)) * c(0.5, 0.0))
            })
        })
        .collect();
    let povm = Povm::from_matrices(projectors, &frame.basis);
    let n = n_dim as f64;
    Ok(OptimalPovm {
        mu_max: (2.0 / n).sqrt() * spec.t_max(),
        degenerate: spec.t.iter().all(|&v| v == 0.0),
        povm,
        argmax,
        stabilizers,
    })
}

fn commuting_completion(lead: SignedPauli, qubits: usize) -> Vec<SignedPauli> {
    let mut candidates: Vec<PauliString> = (1..1usize << (2 * qubits)).map(|r| PauliString::from_lex_rank(r, qubits)).collect();
    candidates.sort_by_key(|s| (s.off_diagonal_weight(), s.lex_rank()));
    let mut group = vec![PauliString::identity(qubits), lead.string.clone()];
    let mut chosen = vec![lead];
    for candidate in candidates {
        if chosen.len() == qubits {
            break;
        }
        if group.contains(&candidate) || !chosen.iter().all(|g| g.string.commutes_with(&candidate)) {
            continue;
        }
        let extended: Vec<PauliString> = group.iter().map(|g| g.mul(&candidate).1).collect();
        group.extend(extended);
        chosen.push(SignedPauli::plus(candidate));
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_su_basis;
    use crate::state::realize;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(n: usize, m: usize, t: &[f64]) -> GbssSpec {
        GbssSpec::new(n, m, t.to_vec()).unwrap()
    }

    #[test]
    fn zero_vector_is_maximally_mixed_effect() {
        let basis = build_su_basis(4).unwrap();
        let e = effect_from_coherence(&CoherenceVector::zero(4), &basis).unwrap();
        assert!(linalg::max_abs(&(e - linalg::identity(4) * c(0.25, 0.0))) < 1e-15);
    }

    #[test]
    fn qubit_z_effect_is_a_projector() {
        let basis = build_su_basis(2).unwrap();
        let e = CoherenceVector::new(2, vec![0.0, 0.0, 1.0]).unwrap();
        let m = effect_from_coherence(&e, &basis).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(linalg::max_abs(&(m - expected)) < 1e-15);
        assert!(e.purity_defect(&basis).unwrap() < 1e-15);
    }

    #[test]
    fn weyl_example_vector_is_a_pure_effect() {
        let basis = SuBasis::weyl();
        let third = 1.0 / 3f64.sqrt();
        for signs in [[1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [-1.0, -1.0, -1.0]] {
            let mut comps = vec![0.0; 15];
            comps[4] = signs[0] * third;
            comps[7] = signs[1] * third;
            comps[8] = signs[2] * third;
            let e = CoherenceVector::new(4, comps).unwrap();
            let m = effect_from_coherence(&e, &basis).unwrap();
            assert!(linalg::max_abs(&(&m * &m - &m)) < 1e-12);
            assert!((m.trace().re - 1.0).abs() < 1e-12);
            assert!(e.purity_defect(&basis).unwrap() < 1e-10);
        }
    }

    #[test]
    fn coherence_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let basis = build_su_basis(4).unwrap();
        let u = linalg::haar_unitary(4, &mut rng);
        let proj = u.column(1) * u.column(1).adjoint();
        let e = coherence_of_effect(&proj, &basis);
        assert!(e.purity_defect(&basis).unwrap() < 1e-10);
        assert!(linalg::max_abs(&(effect_from_coherence(&e, &basis).unwrap() - proj)) < 1e-12);
    }

    #[test]
    fn post_state_examples() {
        let zero = spec(1, 2, &[0.0; 3]);
        let e = CoherenceVector::new(2, vec![1.0, 0.0, 0.0]).unwrap();
        let (p, state) = post_measurement_state(&zero, &e, Side::A, GammaConvention::Tower).unwrap();
        assert_eq!(p, 0.5);
        assert!(linalg::max_abs(&(state.data - linalg::identity(4) * c(0.25, 0.0))) < 1e-15);

        let s = spec(1, 1, &[0.6, 0.0, 0.0]);
        let (_, state) = post_measurement_state(&s, &e, Side::A, GammaConvention::Tower).unwrap();
        let expected = (linalg::identity(2) + linalg::pauli(1) * c(0.6, 0.0)) * c(0.5, 0.0);
        assert!(linalg::max_abs(&(state.data - expected)) < 1e-15);
    }

    #[test]
    fn post_state_matches_dense_conditional_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, m) in [(1, 1), (1, 2), (2, 2)] {
            let s = GbssSpec::random_physical(n, m, &mut rng);
            let (n_dim, m_dim) = s.dims();
            let frame = EffectFrame::new(n_dim, GammaConvention::Tower).unwrap();
            let rho = realize(&s, GammaConvention::Tower).unwrap();
            let u = linalg::haar_unitary(n_dim, &mut rng);
            let mut total = 0.0;
            for k in 0..n_dim {
                let v: Vec<Complex64> = u.column(k).iter().copied().collect();
                let e = frame.coherence_vector(&(u.column(k) * u.column(k).adjoint()));
                let (p, state) = post_measurement_state(&s, &e, Side::A, GammaConvention::Tower).unwrap();
                let (p_dense, dense) = conditional_state(&rho.data, &v, m_dim).unwrap();
                assert!((p - p_dense).abs() < 1e-12);
                assert!(linalg::max_abs(&(&state.data - dense)) < 1e-10);
                let r = bloch_length(&s, &e, &frame);
                let ev = linalg::hermitian_eigenvalues(&state.data);
                assert!((ev[m_dim - 1] * m_dim as f64 - 1.0 - r).abs() < 1e-10);
                total += p;
            }
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn side_b_requires_equal_dimensions() {
        let s = spec(1, 2, &[0.1, 0.2, 0.3]);
        let e = CoherenceVector::zero(2);
        assert_eq!(
            post_measurement_state(&s, &e, Side::B, GammaConvention::Tower).unwrap_err(),
            Error::UnsupportedSide
        );
        let sym = spec(1, 1, &[0.4, 0.0, 0.0]);
        let e = CoherenceVector::new(2, vec![1.0, 0.0, 0.0]).unwrap();
        let (_, a) = post_measurement_state(&sym, &e, Side::A, GammaConvention::Tower).unwrap();
        let (_, b) = post_measurement_state(&sym, &e, Side::B, GammaConvention::Tower).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mu_examples() {
        let frame = EffectFrame::new(2, GammaConvention::Tower).unwrap();
        let e = CoherenceVector::new(2, vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(mu(&spec(1, 1, &[0.0; 3]), &e, &frame), 0.0);
        assert!((mu(&spec(1, 1, &[0.6, 0.0, 0.0]), &e, &frame) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn qubit_optimal_povm_measures_sigma_x() {
        let s = spec(1, 1, &[0.6, 0.3, 0.1]);
        let opt = optimal_povm(&s, GammaConvention::Tower).unwrap();
        assert_eq!(opt.argmax, 0);
        let plus = (linalg::identity(2) + linalg::pauli(1)) * c(0.5, 0.0);
        let minus = (linalg::identity(2) - linalg::pauli(1)) * c(0.5, 0.0);
        assert!(linalg::max_abs(&(&opt.povm.effects[0].matrix - plus)) < 1e-15);
        assert!(linalg::max_abs(&(&opt.povm.effects[1].matrix - minus)) < 1e-15);
        assert!((opt.mu_max - 0.6).abs() < 1e-15);
        assert!(!opt.degenerate);
    }

    #[test]
    fn weyl_optimal_povm_reproduces_the_example_pattern() {
        let s = spec(2, 2, &[0.1, 0.2, -0.1, 0.05, 0.4]);
        let opt = optimal_povm(&s, GammaConvention::Weyl).unwrap();
        assert_eq!(opt.argmax, 4);
        let third = 1.0 / 3f64.sqrt();
        for effect in &opt.povm.effects {
            let comps = &effect.coherence.components;
            for (k, v) in comps.iter().enumerate() {
                if [4, 7, 8].contains(&k) {
                    assert!((v.abs() - third).abs() < 1e-12, "entry {k} = {v}");
                } else {
                    assert!(v.abs() < 1e-12, "entry {k} = {v}");
                }
            }
        }
    }

    #[test]
    fn optimal_povm_is_projective_and_attains_mu_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (n, m) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            for convention in [GammaConvention::Tower, GammaConvention::Weyl] {
                if convention == GammaConvention::Weyl && n != 2 {
                    continue;
                }
                let s = GbssSpec::random_physical(n, m, &mut rng);
                let opt = optimal_povm(&s, convention).unwrap();
                let frame = EffectFrame::new(1 << n, convention).unwrap();
                assert!(opt.povm.validate().is_valid(1e-12));
                assert_eq!(opt.povm.len(), 1 << n);
                let nonzero_target = 1.0 / ((1usize << n) as f64 - 1.0).sqrt();
                for (i, a) in opt.povm.effects.iter().enumerate() {
                    for (j, b) in opt.povm.effects.iter().enumerate() {
                        let prod = &a.matrix * &b.matrix;
                        let expected = if i == j { a.matrix.clone() } else { CMatrix::zeros(1 << n, 1 << n) };
                        assert!(linalg::max_abs(&(prod - expected)) < 1e-12);
                    }
                    assert!((mu(&s, &a.coherence, &frame) - opt.mu_max).abs() < 1e-10);
                    for v in &a.coherence.components {
                        assert!(v.abs() < 1e-12 || (v.abs() - nonzero_target).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_state_gives_degenerate_measurement() {
        let opt = optimal_povm(&spec(2, 2, &[0.0; 5]), GammaConvention::Tower).unwrap();
        assert!(opt.degenerate);
        assert!(opt.povm.validate().is_valid(1e-12));
    }

    #[test]
    fn mu_max_is_convention_independent() {
        let s = spec(2, 2, &[0.2, -0.1, 0.05, 0.3, 0.1]);
        let tower = optimal_povm(&s, GammaConvention::Tower).unwrap();
        let weyl = optimal_povm(&s, GammaConvention::Weyl).unwrap();
        assert!((tower.mu_max - weyl.mu_max).abs() < 1e-15);
        let frame = EffectFrame::new(4, GammaConvention::Weyl).unwrap();
        for effect in &weyl.povm.effects {
            assert!((mu(&s, &effect.coherence, &frame) - tower.mu_max).abs() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mu_never_exceeds_its_maximum(seed in any::<u64>(), two_qubits in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (n, m) = if two_qubits { (2, 2) } else { (1, 2) };
            let s = GbssSpec::random_physical(n, m, &mut rng);
            let frame = EffectFrame::new(1 << n, GammaConvention::Tower).unwrap();
            let u = linalg::haar_unitary(1 << n, &mut rng);
            let bound = (2.0 / (1usize << n) as f64).sqrt() * s.t_max();
            for k in 0..(1 << n) {
                let e = frame.coherence_vector(&(u.column(k) * u.column(k).adjoint()));
                prop_assert!(mu(&s, &e, &frame) <= bound + 1e-10);
            }
        }
    }
}

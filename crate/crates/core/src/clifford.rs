//! Dirac γ matrices, maximal anticommuting sets and SU(2ⁿ) generator bases.
//!
//! Every γ matrix and every generator used in this crate is (up to a sign) a
//! Pauli string σ_{α₁} ⊗ … ⊗ σ_{αₙ}. Strings are kept symbolically alongside
//! their dense matrices so that basis indices, transpose parity and structure
//! constants can be read off exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

/// Largest d accepted by [`build_gamma_tower`]; keeps matrices at most 64×64.
pub const MAX_GAMMA_D: usize = 12;

/// Largest dimension for which [`SuBasis`] materializes its structure tensors.
pub const MAX_BASIS_DIM: usize = 16;

/// Tensor product of single-qubit Paulis; letter 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<u8>);

impl PauliString {
    pub fn new(letters: Vec<u8>) -> Self {
        assert!(letters.iter().all(|&a| a < 4), "pauli letters must be 0..=3");
        Self(letters)
    }

    pub fn identity(qubits: usize) -> Self {
        Self(vec![0; qubits])
    }

    /// Parses strings like `"XIZ"` (also accepts `0123`).
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|ch| match ch {
                'I' | '0' => Some(0),
                'X' | '1' => Some(1),
                'Y' | '2' => Some(2),
                'Z' | '3' => Some(3),
                _ => None,
            })
            .collect::<Option<Vec<u8>>>()
            .map(Self)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn qubits(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    fn prepend(&self, letter: u8) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Self(v)
    }

    /// Position in the lexicographic order over (α₁,…,αₙ), identity = 0.
    pub fn lex_rank(&self) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * 4 + a as usize)
    }

    pub fn from_lex_rank(rank: usize, qubits: usize) -> Self {
        let mut letters = vec![0u8; qubits];
        let mut r = rank;
        for slot in letters.iter_mut().rev() {
            *slot = (r % 4) as u8;
            r /= 4;
        }
        Self(letters)
    }

    /// Number of non-identity letters other than Z.
    pub fn off_diagonal_weight(&self) -> usize {
        self.0.iter().filter(|&&a| a == 1 || a == 2).count()
    }

    /// Product `self · other = phase · string`.
    pub fn mul(&self, other: &Self) -> (Complex64, Self) {
        assert_eq!(self.qubits(), other.qubits());
        let mut phase = c(1.0, 0.0);
        let letters = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| {
                let (p, r) = letter_product(a, b);
                phase *= p;
                r
            })
            .collect();
        (phase, Self(letters))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(&a, &b)| a != 0 && b != 0 && a != b)
            .count();
        anti % 2 == 0
    }

    /// σ_y is the only antisymmetric Pauli, so parity follows from the Y count.
    pub fn is_symmetric(&self) -> bool {
        self.0.iter().filter(|&&a| a == 2).count() % 2 == 0
    }

    pub fn matrix(&self) -> CMatrix {
        self.0
            .iter()
            .fold(linalg::identity(1), |acc, &a| linalg::kron(&acc, &linalg::pauli(a)))
    }
}

fn letter_product(a: u8, b: u8) -> (Complex64, u8) {
    let i = linalg::I;
    match (a, b) {
        (0, x) | (x, 0) => (c(1.0, 0.0), x),
        (x, y) if x == y => (c(1.0, 0.0), 0),
        (1, 2) => (i, 3),
        (2, 1) => (-i, 3),
        (2, 3) => (i, 1),
        (3, 2) => (-i, 1),
        (3, 1) => (i, 2),
        (1, 3) => (-i, 2),
        _ => unreachable!(),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.0 {
            f.write_str(["I", "X", "Y", "Z"][a as usize])?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `sign · string`, sign ∈ {+1, −1}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignedPauli {
    pub sign: f64,
    pub string: PauliString,
}

impl SignedPauli {
    pub fn plus(string: PauliString) -> Self {
        Self { sign: 1.0, string }
    }

    pub fn matrix(&self) -> CMatrix {
        self.string.matrix() * c(self.sign, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// Which realization of the maximal anticommuting set to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaConvention {
    /// Inductive σ₁⊗γ tower.
    #[default]
    Tower,
    /// Chiral set for N = 4: σx⊗I, −σy⊗σx, −σy⊗σy, −σy⊗σz, −σz⊗I.
    Weyl,
}

impl GammaConvention {
    pub fn name(self) -> &'static str {
        match self {
            GammaConvention::Tower => "tower",
            GammaConvention::Weyl => "weyl",
        }
    }
}

/// d generating γ matrices plus γ_{d+1} = γ_s, all of size 2^{d/2}.
#[derive(Clone, Debug)]
pub struct GammaSet {
    pub d: usize,
    pub dim: usize,
    pub convention: GammaConvention,
    pub strings: Vec<SignedPauli>,
    pub gammas: Vec<CMatrix>,
    pub parity: Vec<Parity>,
}

/// Worst-case violations of the defining identities of a [`GammaSet`].
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub pairs_checked: usize,
    pub max_anticommutator_error: f64,
    pub max_hermiticity_error: f64,
    pub gamma_s_product_error: f64,
    pub gamma_s_square_error: f64,
    pub transpose_parity_error: f64,
}

impl IdentityCheck {
    pub fn max_error(&self) -> f64 {
        [
            self.max_anticommutator_error,
            self.max_hermiticity_error,
            self.gamma_s_product_error,
            self.gamma_s_square_error,
            self.transpose_parity_error,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl GammaSet {
    fn from_strings(d: usize, convention: GammaConvention, strings: Vec<SignedPauli>) -> Self {
        let gammas: Vec<CMatrix> = strings.iter().map(SignedPauli::matrix).collect();
        let parity = gammas
            .iter()
            .map(|g| {
                if linalg::max_abs(&(g.transpose() - g)) == 0.0 {
                    Parity::Symmetric
                } else {
                    Parity::Antisymmetric
                }
            })
            .collect();
        Self {
            d,
            dim: 1 << (d / 2),
            convention,
            strings,
            gammas,
            parity,
        }
    }

    /// Number of matrices, d + 1.
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// i^{−d/2} γ₁γ₂⋯γ_d.
    pub fn chirality_product(&self) -> CMatrix {
        let prod = self.gammas[..self.d]
            .iter()
            .fold(linalg::identity(self.dim), |acc, g| acc * g);
        prod * linalg::I.powi(-((self.d / 2) as i32))
    }

    pub fn check_identities(&self) -> IdentityCheck {
        let id = linalg::identity(self.dim);
        let mut anti = 0.0f64;
        let mut pairs = 0;
        for i in 0..self.len() {
            for j in i..self.len() {
                let (a, b) = (&self.gammas[i], &self.gammas[j]);
                let target = if i == j { &id * c(2.0, 0.0) } else { CMatrix::zeros(self.dim, self.dim) };
                anti = anti.max(linalg::max_abs(&(a * b + b * a - target)));
                pairs += 1;
            }
        }
        let herm = self.gammas.iter().map(linalg::hermiticity_error).fold(0.0, f64::max);
        let gs = &self.gammas[self.d];
        let parity_err = self
            .gammas
            .iter()
            .enumerate()
            .map(|(k, g)| {
                // 1-based index i = k + 1; γᵢᵗ = (−1)^{i+1} γᵢ
                let expected = if k % 2 == 0 { g.clone() } else { -g.clone() };
                linalg::max_abs(&(g.transpose() - expected))
            })
            .fold(0.0, f64::max);
        IdentityCheck {
            pairs_checked: pairs,
            max_anticommutator_error: anti,
            max_hermiticity_error: herm,
            gamma_s_product_error: linalg::max_abs(&(self.chirality_product() - gs)),
            gamma_s_square_error: linalg::max_abs(&(gs * gs - &id)),
            transpose_parity_error: parity_err,
        }
    }
}

/// Inductive construction d → d + 2 starting from the Pauli matrices:
/// γᵢ^{(d+2)} = σ₁⊗γᵢ^{(d)} (i ≤ d+1), γ_{d+2} = σ₂⊗I, γ_s = σ₃⊗I.
pub fn build_gamma_tower(d: usize) -> Result<GammaSet> {
    if d < 2 || d % 2 == 1 || d > MAX_GAMMA_D {
        return Err(Error::InvalidGammaDimension { d, max: MAX_GAMMA_D });
    }
    let mut strings: Vec<PauliString> = (1..=3).map(|a| PauliString::new(vec![a])).collect();
    let mut level = 2;
    while level < d {
        let qubits = strings[0].qubits();
        strings = strings.iter().map(|s| s.prepend(1)).collect();
        strings.push(PauliString::identity(qubits).prepend(2));
        strings.push(PauliString::identity(qubits).prepend(3));
        level += 2;
    }
    Ok(GammaSet::from_strings(
        d,
        GammaConvention::Tower,
        strings.into_iter().map(SignedPauli::plus).collect(),
    ))
}

fn weyl_strings() -> Vec<SignedPauli> {
    [("XI", 1.0), ("YX", -1.0), ("YY", -1.0), ("YZ", -1.0), ("ZI", -1.0)]
        .into_iter()
        .map(|(s, sign)| SignedPauli {
            sign,
            string: PauliString::parse(s).unwrap(),
        })
        .collect()
}

/// The 2n+1 matrices {γ₁,…,γ_{2n}, i^{−n}γ₁⋯γ_{2n}} acting on C^N, N = 2ⁿ.
pub fn max_anticommuting_set(dim: usize, convention: GammaConvention) -> Result<GammaSet> {
    if !linalg::is_power_of_two(dim) {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = linalg::log2_exact(dim);
    match convention {
        GammaConvention::Tower => build_gamma_tower(2 * n),
        GammaConvention::Weyl if dim == 4 => Ok(GammaSet::from_strings(4, GammaConvention::Weyl, weyl_strings())),
        GammaConvention::Weyl => Err(Error::UnsupportedConvention {
            convention: "weyl",
            supported: 4,
            n: dim,
        }),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisOrder {
    #[default]
    Lexicographic,
    /// N = 4 only: the chiral γ₁…γ₅ first, then ZX, ZY, ZZ, IZ, IY, IX, YI, XX, XY, XZ.
    Weyl,
}

/// Orthonormal generators λᵢ = ±√(2/N)·(Pauli string) of su(N) with their
/// f and d structure tensors (stored sparsely, all index orders).
#[derive(Clone, Debug)]
pub struct SuBasis {
    pub dim: usize,
    pub order: BasisOrder,
    pub elements: Vec<SignedPauli>,
    pub lambdas: Vec<CMatrix>,
    index: HashMap<PauliString, usize>,
    f: BTreeMap<(usize, usize, usize), f64>,
    d: BTreeMap<(usize, usize, usize), f64>,
}

/// Lexicographic Pauli-string basis of su(N).
pub fn build_su_basis(dim: usize) -> Result<SuBasis> {
    if !linalg::is_power_of_two(dim) {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = linalg::log2_exact(dim);
    let elements = (1..dim * dim)
        .map(|r| SignedPauli::plus(PauliString::from_lex_rank(r, n)))
        .collect();
    SuBasis::from_elements(dim, BasisOrder::Lexicographic, elements)
}

impl SuBasis {
    /// Basis whose first five elements are the Weyl γ's (scaled), N = 4.
    pub fn weyl() -> Self {
        let mut elements = weyl_strings();
        for s in ["ZX", "ZY", "ZZ", "IZ", "IY", "IX", "YI", "XX", "XY", "XZ"] {
            elements.push(SignedPauli::plus(PauliString::parse(s).unwrap()));
        }
        Self::from_elements(4, BasisOrder::Weyl, elements).expect("weyl basis is valid")
    }

    pub fn with_order(dim: usize, order: BasisOrder) -> Result<Self> {
        match order {
            BasisOrder::Lexicographic => build_su_basis(dim),
            BasisOrder::Weyl if dim == 4 => Ok(Self::weyl()),
            BasisOrder::Weyl => Err(Error::UnsupportedConvention {
                convention: "weyl",
                supported: 4,
                n: dim,
            }),
        }
    }

    /// The ordering that lines up with a γ convention.
    pub fn for_convention(dim: usize, convention: GammaConvention) -> Result<Self> {
        match convention {
            GammaConvention::Tower => build_su_basis(dim),
            GammaConvention::Weyl => Self::with_order(dim, BasisOrder::Weyl),
        }
    }

    fn from_elements(dim: usize, order: BasisOrder, elements: Vec<SignedPauli>) -> Result<Self> {
        if dim > MAX_BASIS_DIM {
            return Err(Error::BasisTooLarge { dim, max: MAX_BASIS_DIM });
        }
        let scale = (2.0 / dim as f64).sqrt();
        let lambdas = elements.iter().map(|e| e.matrix() * c(scale, 0.0)).collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.string.clone(), k))
            .collect();
        let mut basis = Self {
            dim,
            order,
            elements,
            lambdas,
            index,
            f: BTreeMap::new(),
            d: BTreeMap::new(),
        };
        basis.fill_tensors();
        Ok(basis)
    }

    // λᵢλⱼ = (2/N)σᵢσⱼ·phase·P_s = κ λ_k with κ = √(2/N)σᵢσⱼσₖ·phase, so the
    // traces (1/4i)Tr([λᵢ,λⱼ]λₖ) and (1/4)Tr({λᵢ,λⱼ}λₖ) are Im κ and Re κ.
    fn fill_tensors(&mut self) {
        let scale = (2.0 / self.dim as f64).sqrt();
        let count = self.len();
        for i in 0..count {
            for j in 0..count {
                let (phase, s) = self.elements[i].string.mul(&self.elements[j].string);
                if s.is_identity() {
                    continue;
                }
                let k = self.index[&s];
                let kappa = phase * (scale * self.elements[i].sign * self.elements[j].sign * self.elements[k].sign);
                if kappa.im.abs() > 0.0 {
                    self.f.insert((i, j, k), kappa.im);
                }
                if kappa.re.abs() > 0.0 {
                    self.d.insert((i, j, k), kappa.re);
                }
            }
        }
    }

    /// N² − 1.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn f(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f.get(&(i, j, k)).copied().unwrap_or(0.0)
    }

    pub fn d(&self, i: usize, j: usize, k: usize) -> f64 {
        self.d.get(&(i, j, k)).copied().unwrap_or(0.0)
    }

    pub fn f_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &f64)> {
        self.f.iter()
    }

    pub fn d_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &f64)> {
        self.d.iter()
    }

    /// Index and sign of a Pauli string: string = sign·√(N/2)·λ_index.
    pub fn locate(&self, string: &PauliString) -> Option<(usize, f64)> {
        self.index.get(string).map(|&k| (k, self.elements[k].sign))
    }

    /// For each γⱼ of a set on C^N: (k, s) with γⱼ = s·√(N/2)·λ_k.
    pub fn gamma_coordinates(&self, gammas: &GammaSet) -> Vec<(usize, f64)> {
        assert_eq!(gammas.dim, self.dim, "γ set and basis act on different spaces");
        gammas
            .strings
            .iter()
            .map(|g| {
                let (k, sign) = self.locate(&g.string).expect("every Pauli string is in the basis");
                (k, sign * g.sign)
            })
            .collect()
    }

    /// Tr(op·λᵢ) for every generator.
    pub fn components(&self, op: &CMatrix) -> Vec<Complex64> {
        self.lambdas.iter().map(|l| linalg::trace_product(op, l)).collect()
    }

    /// max over (i, j) of ‖λᵢλⱼ − (2/N)δᵢⱼI − Σₖ(i fᵢⱼₖ + dᵢⱼₖ)λₖ‖, densely.
    pub fn reconstruction_error(&self) -> f64 {
        let id = linalg::identity(self.dim);
        let mut worst = 0.0f64;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let mut rhs = if i == j { &id * c(2.0 / self.dim as f64, 0.0) } else { CMatrix::zeros(self.dim, self.dim) };
                for k in 0..self.len() {
                    let coeff = c(self.d(i, j, k), self.f(i, j, k));
                    if coeff.norm() > 0.0 {
                        rhs += &self.lambdas[k] * coeff;
                    }
                }
                worst = worst.max(linalg::max_abs(&(&self.lambdas[i] * &self.lambdas[j] - rhs)));
            }
        }
        worst
    }

    /// Largest deviation from total antisymmetry of f and total symmetry of d.
    pub fn tensor_symmetry_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (&(i, j, k), &v) in &self.f {
            for (p, sign) in [((j, i, k), -1.0), ((i, k, j), -1.0), ((k, j, i), -1.0), ((j, k, i), 1.0), ((k, i, j), 1.0)] {
                worst = worst.max((self.f(p.0, p.1, p.2) - sign * v).abs());
            }
        }
        for (&(i, j, k), &v) in &self.d {
            for p in [(j, i, k), (i, k, j), (k, j, i), (j, k, i), (k, i, j)] {
                worst = worst.max((self.d(p.0, p.1, p.2) - v).abs());
            }
        }
        worst
    }
}

/// (a⋆b)_l = √(N(N−1)/2)·1/(N−2)·Σ dᵢⱼₗ aᵢ bⱼ.
pub fn star_product(a: &[f64], b: &[f64], basis: &SuBasis) -> Result<Vec<f64>> {
    let n = basis.dim;
    if n == 2 {
        return Err(Error::StarProductUndefined);
    }
    for v in [a, b] {
        if v.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                got: v.len(),
            });
        }
    }
    let nf = n as f64;
    let scale = (nf * (nf - 1.0) / 2.0).sqrt() / (nf - 2.0);
    let mut out = vec![0.0; basis.len()];
    for (&(i, j, l), &d) in basis.d_entries() {
        out[l] += d * a[i] * b[j];
    }
    out.iter_mut().for_each(|x| *x *= scale);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &CMatrix, b: &CMatrix) -> f64 {
        linalg::max_abs(&(a - b))
    }

    #[test]
    fn d2_is_the_pauli_triple() {
        let g = build_gamma_tower(2).unwrap();
        for (k, alpha) in (1..=3).enumerate() {
            assert_eq!(close(&g.gammas[k], &linalg::pauli(alpha)), 0.0);
        }
        let anti = &g.gammas[0] * &g.gammas[1] + &g.gammas[1] * &g.gammas[0];
        assert_eq!(linalg::max_abs(&anti), 0.0);
    }

    #[test]
    fn d4_chirality_matrix() {
        let g = build_gamma_tower(4).unwrap();
        let prod = g.gammas[..4].iter().fold(linalg::identity(4), |acc, m| acc * m) * linalg::c(-1.0, 0.0);
        assert!(prod.trace().norm() < 1e-14);
        assert!(close(&(&prod * &prod), &linalg::identity(4)) < 1e-14);
        assert!(close(&prod, &g.gammas[4]) < 1e-14);
    }

    #[test]
    fn induction_step_matches_explicit_formula() {
        for d in [2, 4, 6, 8] {
            let lower = build_gamma_tower(d).unwrap();
            let upper = build_gamma_tower(d + 2).unwrap();
            let id = linalg::identity(lower.dim);
            for i in 0..=d {
                assert_eq!(close(&upper.gammas[i], &linalg::kron(&linalg::pauli(1), &lower.gammas[i])), 0.0);
            }
            assert_eq!(close(&upper.gammas[d + 1], &linalg::kron(&linalg::pauli(2), &id)), 0.0);
            assert_eq!(close(&upper.gammas[d + 2], &linalg::kron(&linalg::pauli(3), &id)), 0.0);
        }
    }

    #[test]
    fn tower_identities_hold() {
        for d in (2..=MAX_GAMMA_D).step_by(2) {
            let g = build_gamma_tower(d).unwrap();
            let check = g.check_identities();
            assert_eq!(check.pairs_checked, (d + 1) * (d + 2) / 2);
            assert!(check.max_error() < 1e-12, "d = {d}: {check:?}");
            for (k, p) in g.parity.iter().enumerate() {
                let expected = if k % 2 == 0 { Parity::Symmetric } else { Parity::Antisymmetric };
                assert_eq!(*p, expected);
                assert_eq!(g.strings[k].string.is_symmetric(), expected == Parity::Symmetric);
            }
        }
    }

    #[test]
    fn invalid_tower_dimensions_are_rejected() {
        for d in [0, 1, 3, 7, 14] {
            assert!(matches!(build_gamma_tower(d), Err(Error::InvalidGammaDimension { .. })));
        }
    }

    #[test]
    fn anticommuting_sets() {
        let two = max_anticommuting_set(2, GammaConvention::Tower).unwrap();
        assert_eq!(two.len(), 3);
        for (k, alpha) in (1..=3).enumerate() {
            assert_eq!(close(&two.gammas[k], &linalg::pauli(alpha)), 0.0);
        }
        let four = max_anticommuting_set(4, GammaConvention::Tower).unwrap();
        assert_eq!(four.len(), 5);
        assert!(four.check_identities().max_anticommutator_error < 1e-12);
        assert!(matches!(max_anticommuting_set(6, GammaConvention::Tower), Err(Error::NotPowerOfTwo(6))));
        assert!(matches!(max_anticommuting_set(8, GammaConvention::Weyl), Err(Error::UnsupportedConvention { .. })));
    }

    #[test]
    fn weyl_set_matches_chiral_listing() {
        let w = max_anticommuting_set(4, GammaConvention::Weyl).unwrap();
        let (x, y, z, id) = (linalg::pauli(1), linalg::pauli(2), linalg::pauli(3), linalg::pauli(0));
        assert_eq!(close(&w.gammas[0], &linalg::kron(&x, &id)), 0.0);
        // i·(iσy⊗σk) = −σy⊗σk: the Hermitian version of the listed anti-Hermitian matrices
        for (k, s) in [x.clone(), y.clone(), z.clone()].iter().enumerate() {
            let listed = linalg::kron(&(&y * linalg::I), s);
            assert_eq!(close(&w.gammas[k + 1], &(listed * linalg::I)), 0.0);
        }
        assert_eq!(close(&w.gammas[4], &-linalg::kron(&z, &id)), 0.0);
        assert!(w.check_identities().max_error() < 1e-12);
    }

    #[test]
    fn su2_tensors() {
        let b = build_su_basis(2).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.d_entries().count(), 0);
        assert!((b.f(0, 1, 2) - 1.0).abs() < 1e-15);
        assert!((b.f(1, 0, 2) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn su_bases_are_orthonormal_and_reconstruct() {
        for dim in [2, 4, 8] {
            let b = build_su_basis(dim).unwrap();
            assert_eq!(b.len(), dim * dim - 1);
            for i in 0..b.len() {
                assert!(b.lambdas[i].trace().norm() < 1e-14);
                for j in 0..b.len() {
                    let t = linalg::trace_product(&b.lambdas[i], &b.lambdas[j]);
                    let expected = if i == j { 2.0 } else { 0.0 };
                    assert!((t - c(expected, 0.0)).norm() < 1e-13);
                }
            }
            assert!(b.reconstruction_error() < 1e-12, "N = {dim}");
            assert!(b.tensor_symmetry_error() < 1e-12);
        }
        assert!(SuBasis::weyl().reconstruction_error() < 1e-12);
    }

    #[test]
    fn tensors_agree_with_trace_definitions() {
        let b = build_su_basis(4).unwrap();
        for i in 0..b.len() {
            for j in 0..b.len() {
                let comm = &b.lambdas[i] * &b.lambdas[j] - &b.lambdas[j] * &b.lambdas[i];
                let anti = &b.lambdas[i] * &b.lambdas[j] + &b.lambdas[j] * &b.lambdas[i];
                for k in 0..b.len() {
                    let f = linalg::trace_product(&comm, &b.lambdas[k]) / (linalg::I * 4.0);
                    let d = linalg::trace_product(&anti, &b.lambdas[k]) / 4.0;
                    assert!((f.re - b.f(i, j, k)).abs() < 1e-13 && f.im.abs() < 1e-13);
                    assert!((d.re - b.d(i, j, k)).abs() < 1e-13 && d.im.abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn gamma_coordinates_locate_each_gamma() {
        for conv in [GammaConvention::Tower, GammaConvention::Weyl] {
            let g = max_anticommuting_set(4, conv).unwrap();
            let b = SuBasis::for_convention(4, conv).unwrap();
            for (j, (k, s)) in b.gamma_coordinates(&g).into_iter().enumerate() {
                let rebuilt = &b.lambdas[k] * c(s * (2.0f64).sqrt(), 0.0);
                assert!(close(&rebuilt, &g.gammas[j]) < 1e-14);
            }
        }
        let w = b_weyl_positions();
        assert_eq!(w, vec![0, 1, 2, 3, 4]);
    }

    fn b_weyl_positions() -> Vec<usize> {
        let g = max_anticommuting_set(4, GammaConvention::Weyl).unwrap();
        SuBasis::weyl().gamma_coordinates(&g).into_iter().map(|(k, _)| k).collect()
    }

    #[test]
    fn star_product_rejects_qubits() {
        let b = build_su_basis(2).unwrap();
        assert_eq!(star_product(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &b), Err(Error::StarProductUndefined));
    }

    #[test]
    fn star_of_zero_is_zero() {
        let b = build_su_basis(4).unwrap();
        let a = vec![0.0; 15];
        let v: Vec<f64> = (0..15).map(|k| k as f64 * 0.1).collect();
        assert!(star_product(&a, &v, &b).unwrap().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn projector_coherence_vector_is_star_idempotent() {
        // |ψ⟩ = (1, i, 0, 1)/√3 → E = |ψ⟩⟨ψ| = (1/N)(I + a e·λ), eᵢ = N/(2a)·Tr(Eλᵢ)
        let b = build_su_basis(4).unwrap();
        let psi = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)].map(|z| z / 3f64.sqrt());
        let e_op = CMatrix::from_fn(4, 4, |r, s| psi[r] * psi[s].conj());
        let a = (4.0f64 * 3.0 / 2.0).sqrt();
        let e: Vec<f64> = b.components(&e_op).iter().map(|z| z.re * 4.0 / (2.0 * a)).collect();
        let norm: f64 = e.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let ee = star_product(&e, &e, &b).unwrap();
        let err = ee.iter().zip(&e).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "e⋆e deviates by {err}");
    }

    proptest! {
        #[test]
        fn star_product_is_symmetric_and_bilinear(
            a in proptest::collection::vec(-1.0f64..1.0, 15),
            b in proptest::collection::vec(-1.0f64..1.0, 15),
            v in proptest::collection::vec(-1.0f64..1.0, 15),
            alpha in -2.0f64..2.0,
        ) {
            let basis = build_su_basis(4).unwrap();
            let ab = star_product(&a, &b, &basis).unwrap();
            let ba = star_product(&b, &a, &basis).unwrap();
            for (x, y) in ab.iter().zip(&ba) {
                prop_assert!((x - y).abs() < 1e-12);
            }
            let lhs_in: Vec<f64> = a.iter().zip(&b).map(|(x, y)| alpha * x + y).collect();
            let lhs = star_product(&lhs_in, &v, &basis).unwrap();
            let av = star_product(&a, &v, &basis).unwrap();
            let bv = star_product(&b, &v, &basis).unwrap();
            for k in 0..15 {
                prop_assert!((lhs[k] - (alpha * av[k] + bv[k])).abs() < 1e-12);
            }
        }

        #[test]
        fn pauli_product_matches_dense(x in 0usize..64, y in 0usize..64) {
            let p = PauliString::from_lex_rank(x, 3);
            let q = PauliString::from_lex_rank(y, 3);
            let (phase, r) = p.mul(&q);
            prop_assert!(linalg::max_abs(&(p.matrix() * q.matrix() - r.matrix() * phase)) < 1e-14);
            let commutator = p.matrix() * q.matrix() - q.matrix() * p.matrix();
            prop_assert_eq!(p.commutes_with(&q), linalg::max_abs(&commutator) < 1e-14);
        }
    }
}

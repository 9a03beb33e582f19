//! Small dense complex linear algebra used throughout the crate.
//!
//! Everything here works on `DMatrix<Complex64>`; matrix sizes stay below 64,
//! so nothing is blocked or cached.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Single-qubit Pauli matrix σ_α for α ∈ {0, 1, 2, 3} (σ_0 = I).
pub fn pauli(alpha: u8) -> CMatrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match alpha {
        0 => CMatrix::from_row_slice(2, 2, &[one, z, z, one]),
        1 => CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        2 => CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
        3 => CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => panic!("pauli index {alpha} out of range"),
    }
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.trace()
}

/// Tr(AB) without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest entrywise modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_error(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending with
/// matching eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(a.nrows(), a.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Tr_B of an operator on C^N ⊗ C^M.
pub fn partial_trace_b(rho: &CMatrix, n: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |a, b| (0..m).map(|k| rho[(a * m + k, b * m + k)]).sum())
}

/// Tr_A of an operator on C^N ⊗ C^M.
pub fn partial_trace_a(rho: &CMatrix, n: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(m, m, |x, y| (0..n).map(|a| rho[(a * m + x, a * m + y)]).sum())
}

/// Tr_A[(|v⟩⟨v| ⊗ I) ρ] = ⟨v|ρ|v⟩_A, an unnormalized operator on B.
pub fn conditional_block(rho: &CMatrix, v: &[Complex64], m: usize) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(m, m, |x, y| {
        let mut acc = c(0.0, 0.0);
        for a in 0..n {
            let va = v[a].conj();
            if va == c(0.0, 0.0) {
                continue;
            }
            for b in 0..n {
                acc += va * rho[(a * m + x, b * m + y)] * v[b];
            }
        }
        acc
    })
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the R-diagonal
/// phases divided out.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Compare two real multisets after sorting; returns the largest deviation.
pub fn multiset_deviation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets of different size");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn is_power_of_two(n: usize) -> bool {
    n >= 2 && n.is_power_of_two()
}

pub fn log2_exact(n: usize) -> usize {
    n.trailing_zeros() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn paulis_square_to_identity() {
        for a in 1..4 {
            let p = pauli(a);
            assert!(max_abs(&(&p * &p - identity(2))) < 1e-15);
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [2, 4, 8] {
            let u = haar_unitary(dim, &mut rng);
            assert!(max_abs(&(u.adjoint() * &u - identity(dim))) < 1e-12);
        }
    }

    #[test]
    fn partial_traces_of_product_operator() {
        let a = pauli(0) + pauli(3) * c(0.5, 0.0);
        let b = kron(&pauli(0), &pauli(0)) + kron(&pauli(1), &pauli(2)) * c(0.25, 0.0);
        let ab = kron(&a, &b);
        let tb = partial_trace_b(&ab, 2, 4);
        let ta = partial_trace_a(&ab, 2, 4);
        assert!(max_abs(&(tb - &a * b.trace())) < 1e-14);
        assert!(max_abs(&(ta - &b * a.trace())) < 1e-14);
    }

    #[test]
    fn conditional_block_matches_projector_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = haar_unitary(2, &mut rng);
        let h = haar_unitary(8, &mut rng);
        let rho = &h * CMatrix::from_diagonal(&nalgebra::DVector::from_fn(8, |i, _| c(i as f64, 0.0))) * h.adjoint();
        let v: Vec<Complex64> = u.column(0).iter().copied().collect();
        let proj = u.column(0) * u.column(0).adjoint();
        let expected = partial_trace_a(&(kron(&proj, &identity(4)) * &rho), 2, 4);
        assert!(max_abs(&(conditional_block(&rho, &v, 4) - expected)) < 1e-12);
    }

    #[test]
    fn eigen_decomposition_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(4, &mut rng);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.1, 0.0), c(-2.0, 0.0), c(0.7, 0.0), c(1.5, 0.0)]));
        let a = &u * d * u.adjoint();
        let (vals, vecs) = hermitian_eigen(&a);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let rebuilt = &vecs * CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(4, vals.iter().map(|&x| c(x, 0.0)))) * vecs.adjoint();
        assert!(max_abs(&(rebuilt - a)) < 1e-12);
    }
}

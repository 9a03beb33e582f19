//! Geometry of diagonal-T GBSS in t-space: the physical polytope, the PPT
//! region, the separable ℓ¹ ball, constant-GMQD level surfaces and extremal
//! GMQD values.
//!
//! With x = y = 0 the geometric discord is (1/NM)·(‖t‖² − max tⱼ²). On the
//! cell where |t_l| is largest it equals (1/NM)·Σ_{i≠l} tᵢ², so every level
//! set is a union of 2n+1 cylinders, one per choice of l.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::clifford::GammaConvention;
use crate::error::{Error, Result};
use crate::gmqd::gmqd_closed;
use crate::state::{self, GbssSpec};

/// Tolerance on facet margins and on the ℓ¹ criterion.
pub const REGION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionReport {
    pub physical: bool,
    pub physical_margins: Vec<f64>,
    /// Physical with a positive partial transpose.
    pub ppt: bool,
    pub ppt_margins: Vec<f64>,
    pub separable_l1: f64,
    pub separable: bool,
    pub ppt_entangled: bool,
}

pub fn classify(spec: &GbssSpec, convention: GammaConvention) -> Result<RegionReport> {
    let physical = state::physical_check(spec)?;
    let ppt = state::ppt_check(spec, convention)?;
    let separable_l1: f64 = spec.t.iter().map(|v| v.abs()).sum();
    let separable = separable_l1 <= 1.0 + REGION_TOL;
    let is_ppt = physical.physical && ppt.physical;
    Ok(RegionReport {
        physical: physical.physical,
        physical_margins: physical.margins,
        ppt: is_ppt,
        ppt_margins: ppt.margins,
        separable_l1,
        separable,
        ppt_entangled: is_ppt && !separable,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelPoint {
    pub t: Vec<f64>,
    /// Index of the coordinate treated as the largest one.
    pub branch: usize,
    pub gmqd: f64,
    pub region: RegionReport,
}

/// Draws up to `count` points with GMQD equal to `target`.
///
/// Each draw picks a branch l, places the other coordinates uniformly on the
/// sphere of radius √(NM·target) and t_l uniformly in [−L, L] with
/// L = max(1, radius), then keeps the point only if |t_l| ≥ |tᵢ| for all i
/// (strictly for i < l, so ties go to the lowest index). Stops after
/// `1000·count` attempts, so fewer points may be returned when the branch
/// cells are thin.
pub fn sample_level_surface(n: usize, m: usize, target: f64, count: usize, seed: u64, convention: GammaConvention) -> Result<Vec<LevelPoint>> {
    if !(target >= 0.0 && target.is_finite()) {
        return Err(Error::InvalidArgument(format!("GMQD target must be a finite non-negative number, got {target}")));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let probe = GbssSpec::new(n, m, vec![0.0; 2 * n + 1])?;
    let (n_dim, m_dim) = probe.dims();
    let len = probe.terms();
    let radius = ((n_dim * m_dim) as f64 * target).sqrt();
    let half_width = radius.max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count {
        attempts += 1;
        let branch = rng.random_range(0..len);
        let mut t = vec![0.0; len];
        if radius > 0.0 {
            let mut norm: f64 = 0.0;
            for (i, v) in t.iter_mut().enumerate() {
                if i != branch {
                    *v = rng.sample(StandardNormal);
                    norm += *v * *v;
                }
            }
            let scale = radius / norm.sqrt();
            t.iter_mut().for_each(|v| *v *= scale);
        }
        t[branch] = rng.random_range(-half_width..=half_width);
        let lead = t[branch].abs();
        let ordered = t
            .iter()
            .enumerate()
            .all(|(i, v)| i == branch || if i < branch { lead > v.abs() } else { lead >= v.abs() });
        if !ordered {
            continue;
        }
        let spec = GbssSpec::new(n, m, t)?;
        out.push(LevelPoint {
            gmqd: gmqd_closed(&spec)?,
            region: classify(&spec, convention)?,
            branch,
            t: spec.t,
        });
    }
    Ok(out)
}

/// Coefficient rows aₚ with λₚ = (1/NM)(1 + aₚ·t), one per sign pattern.
pub fn facet_normals(n: usize) -> Vec<Vec<f64>> {
    let len = 2 * n + 1;
    let units: Vec<Vec<f64>> = (0..len)
        .map(|j| (0..len).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let columns: Vec<Vec<f64>> = units
        .iter()
        .map(|e| state::spectrum_levels(n, n, e).iter().map(|l| l.value * (1usize << (2 * n)) as f64 - 1.0).collect())
        .collect();
    (0..1usize << (2 * n)).map(|p| columns.iter().map(|col| col[p]).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexSearch {
    pub vertices: usize,
    pub max_gmqd: f64,
    pub argmax: Vec<f64>,
}

/// Enumerates the vertices of the physical polytope {t : 1 + aₚ·t ≥ 0 ∀p} by
/// solving every (2n+1)-subset of facet equations. Exponential in n; only
/// offered for n ≤ 2.
pub fn physical_vertices(n: usize, m: usize) -> Result<VertexSearch> {
    if n > 2 {
        return Err(Error::InvalidArgument(format!("vertex enumeration is limited to n <= 2, got n = {n}")));
    }
    let normals = facet_normals(n);
    let len = 2 * n + 1;
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for subset in combinations(normals.len(), len) {
        let a = DMatrix::from_fn(len, len, |r, k| normals[subset[r]][k]);
        let Some(t) = a.lu().solve(&DVector::from_element(len, -1.0)) else {
            continue;
        };
        let feasible = normals
            .iter()
            .all(|row| 1.0 + row.iter().zip(t.iter()).map(|(a, b)| a * b).sum::<f64>() >= -1e-9);
        if feasible && !vertices.iter().any(|v| v.iter().zip(t.iter()).all(|(a, b)| (a - b).abs() < 1e-9)) {
            vertices.push(t.iter().copied().collect());
        }
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for v in &vertices {
        let d = gmqd_closed(&GbssSpec::new(n, m, v.clone())?)?;
        if d > best.0 + 1e-15 {
            best = (d, v.clone());
        }
    }
    Ok(VertexSearch {
        vertices: vertices.len(),
        max_gmqd: best.0,
        argmax: best.1,
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] != i + n - k) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Euclidean projection onto the ℓ¹ ball of radius 1.
pub fn project_l1_ball(v: &[f64]) -> Vec<f64> {
    if v.iter().map(|x| x.abs()).sum::<f64>() <= 1.0 {
        return v.to_vec();
    }
    let mut sorted: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if *u > candidate {
            theta = candidate;
        }
    }
    v.iter().map(|x| x.signum() * (x.abs() - theta).max(0.0)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparableSearch {
    /// Exact maximum over the ℓ¹ ball from the cell vertices (k coordinates equal to 1/k).
    pub vertex_max: f64,
    pub vertex_argmax: Vec<f64>,
    /// Best value found by projected-gradient ascent from random starts.
    pub gradient_max: f64,
    pub gradient_argmax: Vec<f64>,
}

/// Maximizes the closed-form GMQD over the ℓ¹ ball Σ|tⱼ| ≤ 1.
///
/// In each cell {|t_l| ≥ |tᵢ|, fixed signs} the objective is convex, so its
/// maximum over the cell's polytope is attained at a vertex; those vertices
/// have k coordinates of magnitude 1/k and the rest zero.
pub fn maximize_over_separable(n: usize, m: usize, starts: usize, seed: u64) -> Result<SeparableSearch> {
    let len = 2 * n + 1;
    let mut vertex = (f64::NEG_INFINITY, Vec::new());
    for k in 1..=len {
        let t: Vec<f64> = (0..len).map(|i| if i < k { 1.0 / k as f64 } else { 0.0 }).collect();
        let d = gmqd_closed(&GbssSpec::new(n, m, t.clone())?)?;
        if d > vertex.0 + 1e-15 {
            vertex = (d, t);
        }
    }

    let scale = {
        let probe = GbssSpec::new(n, m, vec![0.0; len])?;
        let (a, b) = probe.dims();
        (a * b) as f64
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gradient = (f64::NEG_INFINITY, Vec::new());
    for _ in 0..starts.max(1) {
        let start: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut t = project_l1_ball(&start);
        let mut step = 0.5;
        for _ in 0..2000 {
            let lead = (0..len).fold(0, |best, i| if t[i].abs() > t[best].abs() { i } else { best });
            let grad: Vec<f64> = (0..len).map(|i| if i == lead { 0.0 } else { 2.0 * t[i] / scale }).collect();
            let next = project_l1_ball(&t.iter().zip(&grad).map(|(a, g)| a + step * scale * g).collect::<Vec<_>>());
            let value = |x: &[f64]| gmqd_closed(&GbssSpec::new(n, m, x.to_vec()).expect("length fixed"));
            if value(&next)? >= value(&t)? {
                t = next;
            } else {
                step *= 0.5;
            }
            if step < 1e-12 {
                break;
            }
        }
        let d = gmqd_closed(&GbssSpec::new(n, m, t.clone())?)?;
        if d > gradient.0 {
            gradient = (d, t);
        }
    }
    Ok(SeparableSearch {
        vertex_max: vertex.0,
        vertex_argmax: vertex.1,
        gradient_max: gradient.0,
        gradient_argmax: gradient.1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    pub m: usize,
    /// (4/(N²M²))(2n+1 − 1/(N−1)).
    pub region_formula: f64,
    pub region_witness: Vec<f64>,
    pub region_witness_physical: bool,
    pub region_witness_gmqd: f64,
    /// Exact maximum over physical-polytope vertices (n ≤ 2 only).
    pub region_vertices: Option<VertexSearch>,
    /// Largest GMQD among random physical points.
    pub region_scan_max: f64,
    /// (4/(N²M²))(1 − 1/((2n+1)(N−1))).
    pub separable_formula: f64,
    pub separable_witness: Vec<f64>,
    pub separable_witness_l1: f64,
    pub separable_witness_gmqd: f64,
    pub separable_search: SeparableSearch,
}

pub fn extremal_values(n: usize, m: usize, seed: u64) -> Result<ExtremalReport> {
    let probe = GbssSpec::new(n, m, vec![0.0; 2 * n + 1])?;
    let (n_dim, m_dim) = probe.dims();
    let len = probe.terms();
    let prefactor = 4.0 / ((n_dim * n_dim * m_dim * m_dim) as f64);
    let nm1 = n_dim as f64 - 1.0;

    let region_witness = GbssSpec::new(n, m, vec![1.0; len])?;
    let separable_witness = GbssSpec::new(n, m, vec![1.0 / (len as f64).sqrt(); len])?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut region_scan_max: f64 = 0.0;
    for _ in 0..2000 {
        let spec = GbssSpec::random_physical(n, m, &mut rng);
        region_scan_max = region_scan_max.max(gmqd_closed(&spec)?);
    }

    Ok(ExtremalReport {
        n,
        m,
        region_formula: prefactor * (len as f64 - 1.0 / nm1),
        region_witness_physical: state::is_physical(&region_witness)?,
        region_witness_gmqd: gmqd_closed(&region_witness)?,
        region_witness: region_witness.t,
        region_vertices: if n <= 2 { Some(physical_vertices(n, m)?) } else { None },
        region_scan_max,
        separable_formula: prefactor * (1.0 - 1.0 / (len as f64 * nm1)),
        separable_witness_l1: separable_witness.t.iter().map(|v| v.abs()).sum(),
        separable_witness_gmqd: gmqd_closed(&separable_witness)?,
        separable_witness: separable_witness.t,
        separable_search: maximize_over_separable(n, m, 64, seed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(n: usize, m: usize, t: &[f64]) -> GbssSpec {
        GbssSpec::new(n, m, t.to_vec()).unwrap()
    }

    const TOWER: GammaConvention = GammaConvention::Tower;

    #[test]
    fn classification_examples() {
        let origin = classify(&spec(1, 1, &[0.0; 3]), TOWER).unwrap();
        assert!(origin.physical && origin.ppt && origin.separable && !origin.ppt_entangled);
        assert!(origin.physical_margins.iter().all(|&v| (v - 0.25).abs() < 1e-15));

        let bell = classify(&spec(1, 1, &[1.0, -1.0, 1.0]), TOWER).unwrap();
        assert!(bell.physical && !bell.ppt && !bell.separable);

        let third = 1.0 / 3.0;
        let boundary = classify(&spec(1, 1, &[third, third, third]), TOWER).unwrap();
        assert!(boundary.separable && boundary.ppt);
    }

    #[test]
    fn facet_normals_match_the_spectrum() {
        let t = [0.2, -0.1, 0.3, 0.05, -0.15];
        let levels = state::spectrum_levels(2, 2, &t);
        for (row, level) in facet_normals(2).iter().zip(&levels) {
            let value = (1.0 + row.iter().zip(&t).map(|(a, b)| a * b).sum::<f64>()) / 16.0;
            assert!((value - level.value).abs() < 1e-15);
        }
    }

    #[test]
    fn qubit_polytope_is_the_bell_tetrahedron() {
        let search = physical_vertices(1, 1).unwrap();
        assert_eq!(search.vertices, 4);
        assert!((search.max_gmqd - 0.5).abs() < 1e-12);
        assert!(state::is_physical(&spec(1, 1, &search.argmax)).unwrap());
        assert!(search.argmax.iter().all(|v| (v.abs() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn combinations_are_complete() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(16, 5).len(), 4368);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn level_surface_points_have_the_target_value() {
        for (n, m, target) in [(1, 1, 0.025), (1, 2, 0.01), (2, 2, 0.004), (1, 1, 0.6)] {
            let points = sample_level_surface(n, m, target, 50, 7, TOWER).unwrap();
            assert!(!points.is_empty());
            let mut branches = std::collections::BTreeSet::new();
            for p in &points {
                assert!((p.gmqd - target).abs() <= 1e-9, "{} vs {target}", p.gmqd);
                let norm: f64 = p.t.iter().map(|v| v * v).sum();
                let max = p.t.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let nm = ((1 << n) * (1 << m)) as f64;
                assert!(((norm - max * max) / nm - target).abs() <= 1e-9);
                branches.insert(p.branch);
            }
            assert!(branches.len() > 1);
        }
    }

    #[test]
    fn zero_level_lies_on_the_axes() {
        let points = sample_level_surface(1, 1, 0.0, 30, 3, TOWER).unwrap();
        assert_eq!(points.len(), 30);
        for p in points {
            assert_eq!(p.gmqd, 0.0);
            assert!(p.t.iter().filter(|v| **v != 0.0).count() <= 1);
        }
    }

    #[test]
    fn sampler_finds_entangled_points() {
        let points = sample_level_surface(1, 1, 0.2, 200, 11, TOWER).unwrap();
        assert!(points.iter().any(|p| p.region.physical && !p.region.ppt));
    }

    #[test]
    fn invalid_sampler_arguments() {
        assert!(matches!(sample_level_surface(1, 1, -0.1, 5, 0, TOWER), Err(Error::InvalidArgument(_))));
        assert!(matches!(sample_level_surface(1, 1, 0.1, 0, 0, TOWER), Err(Error::InvalidArgument(_))));
        assert!(matches!(sample_level_surface(2, 1, 0.1, 5, 0, TOWER), Err(Error::SubsystemOrder { .. })));
    }

    #[test]
    fn l1_projection() {
        assert_eq!(project_l1_ball(&[0.2, -0.3]), vec![0.2, -0.3]);
        let p = project_l1_ball(&[2.0, -1.0, 0.1]);
        assert!((p.iter().map(|v| v.abs()).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1] == 0.0 && p[2] == 0.0);
    }

    #[test]
    fn separable_maximum_is_a_quarter_over_nm() {
        for (n, m) in [(1, 1), (1, 2), (2, 2)] {
            let search = maximize_over_separable(n, m, 32, 1).unwrap();
            let nm = ((1 << n) * (1 << m)) as f64;
            assert!((search.vertex_max - 0.25 / nm).abs() < 1e-15);
            assert!(search.gradient_max <= search.vertex_max + 1e-12);
            assert!(search.gradient_max >= search.vertex_max - 1e-6);
        }
    }

    #[test]
    fn extremal_report_for_qubits() {
        let report = extremal_values(1, 1, 5).unwrap();
        assert!((report.region_formula - 0.5).abs() < 1e-15);
        assert!((report.separable_formula - 1.0 / 6.0).abs() < 1e-15);
        assert!(!report.region_witness_physical);
        assert!(state::is_physical(&spec(1, 1, &[1.0, 1.0, -1.0])).unwrap());
        assert!((report.region_witness_gmqd - 0.5).abs() < 1e-15);
        assert!((report.region_vertices.unwrap().max_gmqd - 0.5).abs() < 1e-12);
        assert!(report.region_scan_max <= 0.5 + 1e-9);
        assert!((report.separable_witness_l1 - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn all_ones_is_not_physical_for_two_qubit_sides() {
        let report = extremal_values(2, 2, 5).unwrap();
        assert!(!report.region_witness_physical);
        let vertices = report.region_vertices.unwrap();
        assert!(vertices.vertices > 0);
        assert!(report.region_scan_max <= vertices.max_gmqd + 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn region_implications(raw in proptest::collection::vec(-1.2f64..1.2, 5), two in any::<bool>()) {
            let (n, m) = if two { (2, 2) } else { (1, 2) };
            let s = spec(n, m, &raw[..2 * n + 1]);
            let r = classify(&s, TOWER).unwrap();
            if r.separable {
                prop_assert!(r.ppt);
            }
            if r.ppt {
                prop_assert!(r.physical);
                prop_assert!(r.physical_margins.iter().all(|&v| v >= -REGION_TOL));
            }
            prop_assert_eq!(r.separable, r.separable_l1 <= 1.0 + REGION_TOL);
        }

        #[test]
        fn separable_points_never_exceed_the_vertex_maximum(raw in proptest::collection::vec(-1.0f64..1.0, 3)) {
            let t = project_l1_ball(&raw);
            let d = gmqd_closed(&spec(1, 1, &t)).unwrap();
            prop_assert!(d <= 1.0 / 16.0 + 1e-12);
        }
    }
}

//! Finite-dimensional quantum reference model.
//!
//! States are density matrices and sharp measurements are orthonormal
//! bases. All probabilities come from quadratic forms, so no eigensolver is
//! needed; positivity is checked with a symmetrically pivoted Cholesky
//! factorization.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::behavior::{Behavior, Table, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::ndwu::{
    disturbance, disturbed_uncertainty, ndwu_relation_holds, uncertainty, OutcomeDistribution, TransferMatrix,
};

/// Largest Hilbert-space dimension accepted.
pub const MAX_DIM: usize = 8;

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-12;
const THEOREM1_TOL: f64 = 1e-9;

fn check_dim(d: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidDimension { dim: d })
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Deterministic generator for trial `index` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    /// Row-major `dim × dim` entries.
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let at = |i: usize, j: usize| entries[i * dim + j];
        let mut residual = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                residual = residual.max((at(i, j) - at(j, i).conj()).norm());
            }
        }
        if !residual.is_finite() || residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let trace: f64 = (0..dim).map(|i| at(i, i).re).sum();
        if (trace - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::BadTrace { trace });
        }
        pivoted_cholesky_check(dim, &entries)?;
        Ok(DensityMatrix { dim, entries })
    }

    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::NotUnitVector { norm: norm2.sqrt() });
        }
        let d = psi.len();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(psi[i] * psi[j].conj() / norm2);
            }
        }
        Self::new(d, entries)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut entries = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c(1.0 / dim as f64, 0.0);
        }
        Self::new(dim, entries)
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure(&[c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]).expect("singlet is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// `⟨v|ρ|v⟩`.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let d = self.dim;
        let mut s = c(0.0, 0.0);
        for i in 0..d {
            let row: Complex64 = (0..d).map(|j| self.entries[i * d + j] * v[j]).sum();
            s += v[i].conj() * row;
        }
        s.re
    }

    /// `Tr(ρM)` for a row-major operator `m`.
    pub fn trace_with(&self, m: &[Complex64]) -> f64 {
        let d = self.dim;
        let mut s = c(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                s += self.entries[i * d + j] * m[j * d + i];
            }
        }
        s.re
    }
}

fn pivoted_cholesky_check(d: usize, entries: &[Complex64]) -> Result<()> {
    let mut a = entries.to_vec();
    let mut remaining: Vec<usize> = (0..d).collect();
    while !remaining.is_empty() {
        let (pos, &k) = remaining
            .iter()
            .enumerate()
            .max_by(|x, y| a[x.1 * d + x.1].re.total_cmp(&a[y.1 * d + y.1].re))
            .expect("nonempty");
        let pivot = a[k * d + k].re;
        if pivot < -PSD_TOL {
            return Err(Error::NotPositive { pivot });
        }
        if pivot <= PSD_TOL {
            // every remaining diagonal is ~0, so the off-diagonals must be too
            for &i in &remaining {
                for &j in &remaining {
                    let v = a[i * d + j].norm();
                    if i != j && v > 1e-9 {
                        return Err(Error::NotPositive { pivot: -v });
                    }
                }
            }
            return Ok(());
        }
        remaining.swap_remove(pos);
        for &i in &remaining {
            for &j in &remaining {
                let update = a[i * d + k] * a[k * d + j] / pivot;
                a[i * d + j] -= update;
            }
        }
    }
    Ok(())
}

/// A sharp measurement: one orthonormal vector per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl SharpBasis {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.len();
        check_dim(d)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        let mut residual = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((inner(&vectors[i], &vectors[j]) - target).norm());
            }
        }
        if !residual.is_finite() || residual > ORTHO_TOL {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(SharpBasis { vectors })
    }

    pub fn computational(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Self::new(
            (0..dim)
                .map(|i| (0..dim).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
                .collect(),
        )
    }

    /// Eigenbasis of Pauli Z.
    pub fn qubit_z() -> Self {
        Self::computational(2).expect("valid")
    }

    /// Eigenbasis of Pauli X, `|+⟩` first.
    pub fn qubit_x() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]).expect("valid")
    }

    /// Same measurement with outcome labels permuted: new outcome `i` is old `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: perm.len(),
            });
        }
        Self::new(perm.iter().map(|&i| self.vectors[i].clone()).collect())
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, outcome: usize) -> &[Complex64] {
        &self.vectors[outcome]
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_residual(&self) -> f64 {
        let d = self.dim();
        let mut r = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                r = r.max((inner(&self.vectors[i], &self.vectors[j]) - target).norm());
            }
        }
        r
    }
}

/// Ginibre-induced random state `GG†/Tr(GG†)`.
pub fn random_state(dim: usize, seed: u64) -> Result<DensityMatrix> {
    random_state_with(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<DensityMatrix> {
    check_dim(dim)?;
    let g: Vec<Complex64> = (0..dim * dim).map(|_| gaussian(rng)).collect();
    let mut entries = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let v: Complex64 = (0..dim).map(|k| g[i * dim + k] * g[j * dim + k].conj()).sum();
            entries[i * dim + j] = v;
            entries[j * dim + i] = v.conj();
        }
        entries[i * dim + i].im = 0.0;
    }
    let trace: f64 = (0..dim).map(|i| entries[i * dim + i].re).sum();
    for e in &mut entries {
        *e /= trace;
    }
    DensityMatrix::new(dim, entries)
}

/// Orthonormalized complex Gaussian vectors (Gram–Schmidt, two passes).
pub fn random_basis(dim: usize, seed: u64) -> Result<SharpBasis> {
    random_basis_with(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

pub fn random_basis_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<SharpBasis> {
    check_dim(dim)?;
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while vectors.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for _pass in 0..2 {
            for u in &vectors {
                let proj = inner(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        vectors.push(v);
    }
    SharpBasis::new(vectors)
}

pub fn outcome_probs(rho: &DensityMatrix, basis: &SharpBasis) -> Result<OutcomeDistribution> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: basis.dim(),
        });
    }
    let probs = (0..basis.dim())
        .map(|a| rho.expectation(basis.vector(a)).max(0.0))
        .collect();
    OutcomeDistribution::new(probs, DEFAULT_TOL)
}

/// `γ[a′][a] = |⟨A₁^{a′}|A₀^a⟩|²`.
pub fn transfer_matrix(basis0: &SharpBasis, basis1: &SharpBasis) -> Result<TransferMatrix> {
    if basis0.dim() != basis1.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis0.dim(),
            found: basis1.dim(),
        });
    }
    let d = basis0.dim();
    let gamma = (0..d)
        .map(|second| {
            (0..d)
                .map(|first| inner(basis1.vector(second), basis0.vector(first)).norm_sqr())
                .collect()
        })
        .collect();
    TransferMatrix::new(gamma, DEFAULT_TOL)
}

/// Statistics of `basis1` measured after `basis0`.
pub fn sequential_stats(
    rho: &DensityMatrix,
    basis0: &SharpBasis,
    basis1: &SharpBasis,
) -> Result<OutcomeDistribution> {
    let first = outcome_probs(rho, basis0)?;
    let gamma = transfer_matrix(basis0, basis1)?;
    OutcomeDistribution::new(gamma.push_forward(&first)?, DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Check {
    /// Uncertainty times disturbed uncertainty.
    pub lhs: f64,
    /// Disturbance.
    pub rhs: f64,
    pub holds: bool,
}

impl Theorem1Check {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Evaluates both sides of the uncertainty–disturbance relation for the
/// sequence `basis0 → basis1` on `rho`.
pub fn verify_theorem1(
    rho: &DensityMatrix,
    basis0: &SharpBasis,
    basis1: &SharpBasis,
) -> Result<Theorem1Check> {
    let p_first = outcome_probs(rho, basis0)?;
    let p_second = outcome_probs(rho, basis1)?;
    let forward = transfer_matrix(basis0, basis1)?;
    let reversed = transfer_matrix(basis1, basis0)?;
    let delta = uncertainty(&p_first);
    let delta_disturbed = disturbed_uncertainty(&reversed);
    let rhs = disturbance(&p_second, &p_first, &forward)?;
    let lhs = delta * delta_disturbed;
    Ok(Theorem1Check {
        lhs,
        rhs,
        holds: ndwu_relation_holds(delta, delta_disturbed, rhs, THEOREM1_TOL),
    })
}

/// Checks that the transfer probabilities of the two orders are transposes.
pub fn verify_transfer_symmetry(basis0: &SharpBasis, basis1: &SharpBasis) -> Result<bool> {
    Ok(transfer_symmetry_residual(basis0, basis1)? <= ORTHO_TOL)
}

pub fn transfer_symmetry_residual(basis0: &SharpBasis, basis1: &SharpBasis) -> Result<f64> {
    let forward = transfer_matrix(basis0, basis1)?;
    let reversed = transfer_matrix(basis1, basis0)?;
    let d = basis0.dim();
    let mut r = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            r = r.max((forward.get(i, j) - reversed.get(j, i)).abs());
        }
    }
    Ok(r)
}

/// Qubit observable `n·σ` with outcome `a` ↦ `(I + (−1)^a n·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochObservable {
    n: [f64; 3],
}

impl BlochObservable {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(BlochObservable { n })
    }

    /// Normalizes `v` first; fails only for a zero or non-finite vector.
    pub fn along(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotUnitVector { norm });
        }
        Self::new(v.map(|x| x / norm))
    }

    pub fn x() -> Self {
        BlochObservable { n: [1.0, 0.0, 0.0] }
    }

    pub fn z() -> Self {
        BlochObservable { n: [0.0, 0.0, 1.0] }
    }

    pub fn direction(&self) -> [f64; 3] {
        self.n
    }

    /// Row-major 2×2 projector for `outcome`.
    pub fn projector(&self, outcome: usize) -> [Complex64; 4] {
        let s = if outcome == 0 { 0.5 } else { -0.5 };
        let [nx, ny, nz] = self.n;
        [
            c(0.5 + s * nz, 0.0),
            c(s * nx, -s * ny),
            c(s * nx, s * ny),
            c(0.5 - s * nz, 0.0),
        ]
    }

    /// Eigenbasis, outcome 0 first.
    pub fn basis(&self) -> SharpBasis {
        let vecs = (0..2)
            .map(|a| {
                let p = self.projector(a);
                // any nonzero column of a rank-one projector spans its range
                let cols = [[p[0], p[2]], [p[1], p[3]]];
                let col = if cols[0][0].norm_sqr() + cols[0][1].norm_sqr()
                    >= cols[1][0].norm_sqr() + cols[1][1].norm_sqr()
                {
                    cols[0]
                } else {
                    cols[1]
                };
                let norm = (col[0].norm_sqr() + col[1].norm_sqr()).sqrt();
                vec![col[0] / norm, col[1] / norm]
            })
            .collect();
        SharpBasis::new(vecs).expect("projector columns are orthonormal")
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = [
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ];
            if let Ok(b) = Self::along(v) {
                return b;
            }
        }
    }
}

fn kron2(a: &[Complex64; 4], b: &[Complex64; 4]) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); 16];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k) * 4 + (2 * j + l)] = a[2 * i + j] * b[2 * k + l];
                }
            }
        }
    }
    out
}

/// `p(ab|νμ) = Tr(ρ M_{A_ν^a} ⊗ M_{B_μ^b})`.
pub fn two_qubit_behavior(
    rho4: &DensityMatrix,
    a0: &BlochObservable,
    a1: &BlochObservable,
    b0: &BlochObservable,
    b1: &BlochObservable,
) -> Result<Behavior> {
    if rho4.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho4.dim(),
        });
    }
    let alice = [a0, a1];
    let bob = [b0, b1];
    let mut p: Table = Default::default();
    for nu in 0..2 {
        for mu in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let m = kron2(&alice[nu].projector(a), &bob[mu].projector(b));
                    p[nu][mu][a][b] = rho4.trace_with(&m);
                }
            }
        }
    }
    Behavior::from_table(p, DEFAULT_TOL)
}

/// A random two-qubit state with four random observables.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitSetup {
    pub rho: DensityMatrix,
    pub alice: [BlochObservable; 2],
    pub bob: [BlochObservable; 2],
}

impl TwoQubitSetup {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Result<Self> {
        let rho = random_state_with(rng, 4)?;
        let alice = [BlochObservable::random(rng), BlochObservable::random(rng)];
        let bob = [BlochObservable::random(rng), BlochObservable::random(rng)];
        Ok(TwoQubitSetup { rho, alice, bob })
    }

    /// The singlet with the observables that saturate the CHSH maximum.
    pub fn tsirelson() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        TwoQubitSetup {
            rho: DensityMatrix::singlet(),
            alice: [BlochObservable::z(), BlochObservable::x()],
            bob: [
                BlochObservable::new([-s, 0.0, -s]).expect("unit"),
                BlochObservable::new([s, 0.0, -s]).expect("unit"),
            ],
        }
    }

    pub fn behavior(&self) -> Result<Behavior> {
        two_qubit_behavior(
            &self.rho,
            &self.alice[0],
            &self.alice[1],
            &self.bob[0],
            &self.bob[1],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(s, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn outcome_probability_examples() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let b = random_basis(2, 7).unwrap();
        let p = outcome_probs(&mixed, &b).unwrap();
        assert!((p.probs()[0] - 0.5).abs() < 1e-15);
        let z = SharpBasis::qubit_z();
        let zero = DensityMatrix::pure(z.vector(0)).unwrap();
        assert_eq!(outcome_probs(&zero, &z).unwrap().probs(), &[1.0, 0.0]);
        let p = outcome_probs(&plus(), &z).unwrap();
        assert!((p.probs()[0] - 0.5).abs() < 1e-15 && (p.probs()[1] - 0.5).abs() < 1e-15);
        let three = SharpBasis::computational(3).unwrap();
        assert!(matches!(
            outcome_probs(&mixed, &three),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transfer_matrix_examples() {
        let b = random_basis(3, 11).unwrap();
        let id = transfer_matrix(&b, &b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let t = if i == j { 1.0 } else { 0.0 };
                assert!((id.get(i, j) - t).abs() < 1e-12);
            }
        }
        let zx = transfer_matrix(&SharpBasis::qubit_z(), &SharpBasis::qubit_x()).unwrap();
        for row in zx.entries() {
            for v in row {
                assert!((v - 0.5).abs() < 1e-15);
            }
        }
        let swapped = b.relabeled(&[1, 0, 2]).unwrap();
        let perm = transfer_matrix(&b, &swapped).unwrap();
        assert!((perm.get(0, 1) - 1.0).abs() < 1e-12);
        assert!((perm.get(1, 0) - 1.0).abs() < 1e-12);
        assert!((perm.get(2, 2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sequential_stats_examples() {
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        let (b0, b1) = (random_basis(3, 1).unwrap(), random_basis(3, 2).unwrap());
        for p in sequential_stats(&mixed, &b0, &b1).unwrap().probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
        let rho = random_state(3, 5).unwrap();
        let same = sequential_stats(&rho, &b0, &b0).unwrap();
        let direct = outcome_probs(&rho, &b0).unwrap();
        for (x, y) in same.probs().iter().zip(direct.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
        let s = sequential_stats(&plus(), &SharpBasis::qubit_z(), &SharpBasis::qubit_x()).unwrap();
        assert!((s.probs()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn theorem1_equality_witness() {
        let chk = verify_theorem1(&plus(), &SharpBasis::qubit_z(), &SharpBasis::qubit_x()).unwrap();
        assert!((chk.lhs - 1.0).abs() < 1e-12);
        assert!((chk.rhs - 1.0).abs() < 1e-12);
        assert!(chk.slack().abs() < 1e-12);
        assert!(chk.holds);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        let chk =
            verify_theorem1(&mixed, &random_basis(4, 3).unwrap(), &random_basis(4, 4).unwrap()).unwrap();
        assert!(chk.rhs.abs() < 1e-12 && chk.holds);
    }

    #[test]
    fn random_generators_are_valid_and_deterministic() {
        let r = random_state(2, 42).unwrap();
        assert_eq!(r, random_state(2, 42).unwrap());
        let b = random_basis(3, 42).unwrap();
        assert!(b.gram_residual() < 1e-12);
        let again = random_basis(3, 42).unwrap();
        for i in 0..3 {
            for (x, y) in b.vector(i).iter().zip(again.vector(i)) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
        assert!(matches!(
            random_state(1, 0),
            Err(Error::InvalidDimension { dim: 1 })
        ));
        assert!(matches!(
            random_basis(9, 0),
            Err(Error::InvalidDimension { dim: 9 })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.0)];
        assert!(matches!(
            DensityMatrix::new(2, bad_trace),
            Err(Error::BadTrace { .. })
        ));
        let not_herm = vec![c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)];
        assert!(matches!(
            DensityMatrix::new(2, not_herm),
            Err(Error::NotHermitian { .. })
        ));
        let indefinite = vec![c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.2, 0.0)];
        assert!(matches!(
            DensityMatrix::new(2, indefinite),
            Err(Error::NotPositive { .. })
        ));
        // zero diagonal with nonzero coherence is indefinite
        let hidden = vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.1, 0.0),
            c(0.0, 0.0),
            c(0.1, 0.0),
            c(0.0, 0.0),
        ];
        assert!(matches!(
            DensityMatrix::new(3, hidden),
            Err(Error::NotPositive { .. })
        ));
        // rank-deficient states pass
        assert!(DensityMatrix::singlet().dim() == 4);
    }

    #[test]
    fn transfer_symmetry_examples() {
        assert!(verify_transfer_symmetry(&SharpBasis::qubit_z(), &SharpBasis::qubit_x()).unwrap());
        let (b0, b1) = (random_basis(5, 8).unwrap(), random_basis(5, 9).unwrap());
        assert!(verify_transfer_symmetry(&b0, &b1).unwrap());
        let (q0, q1) = (random_basis(2, 8).unwrap(), random_basis(2, 9).unwrap());
        let c01 = transfer_matrix(&q0, &q1).unwrap().overlap();
        let c10 = transfer_matrix(&q1, &q0).unwrap().overlap();
        assert!((c01 - c10).abs() < 1e-12);
    }

    #[test]
    fn bloch_basis_matches_projectors() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..50 {
            let obs = BlochObservable::random(&mut rng);
            let basis = obs.basis();
            for a in 0..2 {
                let rho = DensityMatrix::pure(basis.vector(a)).unwrap();
                let p = rho.trace_with(&obs.projector(a));
                assert!((p - 1.0).abs() < 1e-12);
            }
        }
        assert!(BlochObservable::new([1.0, 1.0, 0.0]).is_err());
        assert!(BlochObservable::along([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn two_qubit_examples() {
        let b = TwoQubitSetup::tsirelson().behavior().unwrap();
        assert!((b.chsh() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);

        let z = BlochObservable::z();
        let zero = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let b = two_qubit_behavior(&DensityMatrix::pure(&zero).unwrap(), &z, &z, &z, &z).unwrap();
        for nu in 0..2 {
            for mu in 0..2 {
                assert!((b.prob(nu, mu, 0, 0) - 1.0).abs() < 1e-15);
            }
        }
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        let x = BlochObservable::x();
        let b = two_qubit_behavior(&mixed, &z, &x, &x, &z).unwrap();
        assert!(b.to_raw().iter().all(|p| (p - 0.25).abs() < 1e-15));
        assert!(two_qubit_behavior(&DensityMatrix::maximally_mixed(2).unwrap(), &z, &z, &z, &z).is_err());
    }
}

//! Observables, measurement bases and projective measurements on one subsystem.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, orthonormality_deviation, tensor_all, ComplexMatrix, DensityMatrix, C64,
    DEFAULT_TOL,
};

/// Observables whose adjacent eigenvalues are closer than this are rejected.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Conditional states with outcome probability at or below this are dropped.
pub const NEGLIGIBLE_PROB: f64 = 1e-14;

pub fn sigma1() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

pub fn sigma2() -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let i = C64::new(0.0, 1.0);
    ComplexMatrix::from_rows(&[&[z, -i], &[i, z]]).unwrap()
}

pub fn sigma3() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
}

/// Resolves the observable tokens `sigma1`, `sigma2`, `sigma3` (also `x`, `y`, `z`).
pub fn named_observable(token: &str) -> Option<ComplexMatrix> {
    match token.trim().to_ascii_lowercase().as_str() {
        "sigma1" | "sigmax" | "x" => Some(sigma1()),
        "sigma2" | "sigmay" | "y" => Some(sigma2()),
        "sigma3" | "sigmaz" | "z" => Some(sigma3()),
        _ => None,
    }
}

/// GUE-distributed `d × d` Hermitian matrix.
pub fn random_observable<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| crate::states::gaussian(rng));
    (&g + &g.adjoint()).scale_real(0.5)
}

/// An orthonormal basis of a single subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis(Vec<Vec<C64>>);

impl Basis {
    pub fn new(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let d = vectors.len();
        if d == 0 {
            return Err(Error::usage("empty basis"));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::usage(format!(
                "basis of {d} vectors contains a vector of length {}",
                v.len()
            )));
        }
        let deviation = orthonormality_deviation(&vectors);
        if deviation > DEFAULT_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self(vectors))
    }

    pub fn computational(d: usize) -> Self {
        Self(
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                        .collect()
                })
                .collect(),
        )
    }

    /// Qubit basis `{cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩, its orthogonal complement}`.
    pub fn qubit(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let e = C64::from_polar(1.0, phi);
        Self(vec![
            vec![C64::new(c, 0.0), e * s],
            vec![C64::new(-s, 0.0), e * c],
        ])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.0
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.0.iter().map(|v| ComplexMatrix::projector(v)).collect()
    }
}

/// Two measurement bases on the measured subsystem and their overlap constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservablePair {
    pub basis_x: Basis,
    pub basis_z: Basis,
    /// Largest squared overlap `max |⟨x_i|z_j⟩|²`.
    pub c: f64,
    /// `log₂(1/c)`.
    pub q_mu: f64,
}

impl ObservablePair {
    pub fn dim(&self) -> usize {
        self.basis_x.dim()
    }

    /// σ₁ and σ₃ eigenbases.
    pub fn pauli_xz() -> Self {
        pair_from_observables(&sigma1(), &sigma3()).expect("Pauli pair is valid")
    }
}

pub fn pair_from_bases(bx: Basis, bz: Basis) -> Result<ObservablePair> {
    if bx.dim() != bz.dim() {
        return Err(Error::dim(format!(
            "bases of dimension {} and {}",
            bx.dim(),
            bz.dim()
        )));
    }
    let mut c = 0.0f64;
    for x in bx.vectors() {
        for z in bz.vectors() {
            let overlap: C64 = x.iter().zip(z).map(|(a, b)| a.conj() * b).sum();
            c = c.max(overlap.norm_sqr());
        }
    }
    let q_mu = -c.log2();
    Ok(ObservablePair {
        basis_x: bx,
        basis_z: bz,
        c,
        q_mu,
    })
}

pub fn pair_from_vectors(bx: Vec<Vec<C64>>, bz: Vec<Vec<C64>>) -> Result<ObservablePair> {
    pair_from_bases(Basis::new(bx)?, Basis::new(bz)?)
}

/// Eigenbasis of a nondegenerate Hermitian observable.
pub fn eigenbasis(obs: &ComplexMatrix) -> Result<Basis> {
    let eig = eig_hermitian(obs).map_err(|e| match e {
        Error::NotHermitian { deviation } => Error::usage(format!(
            "observable is not Hermitian (max |m - m†| = {deviation:e})"
        )),
        other => other,
    })?;
    let gap = eig
        .values
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    if gap <= DEGENERACY_GAP {
        return Err(Error::Degenerate { gap });
    }
    Ok(Basis(eig.vectors.columns()))
}

pub fn pair_from_observables(x: &ComplexMatrix, z: &ComplexMatrix) -> Result<ObservablePair> {
    if x.rows() != z.rows() || !x.is_square() || !z.is_square() {
        return Err(Error::dim(format!(
            "observables of shape {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            z.rows(),
            z.cols()
        )));
    }
    pair_from_bases(eigenbasis(x)?, eigenbasis(z)?)
}

fn check_target(rho: &DensityMatrix, basis: &Basis, target: usize) -> Result<()> {
    let dims = rho.dims();
    if target >= dims.len() {
        return Err(Error::dim(format!(
            "target subsystem {target} but state has {} subsystems",
            dims.len()
        )));
    }
    if dims[target] != basis.dim() {
        return Err(Error::dim(format!(
            "basis of dimension {} on subsystem {target} of dimension {}",
            basis.dim(),
            dims[target]
        )));
    }
    Ok(())
}

/// `Π_i = I ⊗ |b_i⟩⟨b_i| ⊗ I` on the full space.
fn embedded_projectors(rho: &DensityMatrix, basis: &Basis, target: usize) -> Vec<ComplexMatrix> {
    let dims = rho.dims().as_slice();
    let left = ComplexMatrix::identity(dims[..target].iter().product::<usize>().max(1));
    let right = ComplexMatrix::identity(dims[target + 1..].iter().product::<usize>().max(1));
    basis
        .projectors()
        .iter()
        .map(|p| tensor_all(&[&left, p, &right]))
        .collect()
}

/// `Σ_i Π_i ρ Π_i` for the projective measurement of `basis` on `target`.
pub fn measure_channel(rho: &DensityMatrix, basis: &Basis, target: usize) -> Result<DensityMatrix> {
    check_target(rho, basis, target)?;
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for p in embedded_projectors(rho, basis, target) {
        out = &out + &(&(&p * rho.matrix()) * &p);
    }
    Ok(DensityMatrix::from_trusted(out, rho.dims().clone()))
}

/// Outcome distribution and the post-measurement states of the memory.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub probs: Vec<f64>,
    /// `ρ_{memory|i}`; `None` where `p_i` is negligible.
    pub conditional_states: Vec<Option<DensityMatrix>>,
}

impl MeasurementOutcome {
    /// `Σ_i p_i ρ_{memory|i}`.
    pub fn average_state(&self) -> Option<ComplexMatrix> {
        let mut acc: Option<ComplexMatrix> = None;
        for (p, s) in self.probs.iter().zip(&self.conditional_states) {
            if let Some(s) = s {
                let term = s.matrix().scale_real(*p);
                acc = Some(match acc {
                    Some(a) => &a + &term,
                    None => term,
                });
            }
        }
        acc
    }
}

/// Measures `basis` on `target`; the memory is every other subsystem, in order.
pub fn outcome_statistics(
    rho: &DensityMatrix,
    basis: &Basis,
    target: usize,
) -> Result<MeasurementOutcome> {
    check_target(rho, basis, target)?;
    if rho.num_subsystems() < 2 {
        return Err(Error::usage(
            "outcome statistics need at least one memory subsystem",
        ));
    }
    let memory: Vec<usize> = (0..rho.num_subsystems()).filter(|&k| k != target).collect();
    let mem_dims = rho.dims().select(&memory);
    let mut probs = Vec::with_capacity(basis.dim());
    let mut conditional_states = Vec::with_capacity(basis.dim());
    for p in embedded_projectors(rho, basis, target) {
        let branch = &(&p * rho.matrix()) * &p;
        let prob = branch.trace().re.max(0.0);
        probs.push(prob);
        if prob > NEGLIGIBLE_PROB {
            let reduced = crate::linalg::partial_trace(&branch, rho.dims(), &memory)?;
            conditional_states.push(Some(DensityMatrix::from_trusted(
                reduced.scale_real(1.0 / prob),
                mem_dims.clone(),
            )));
        } else {
            conditional_states.push(None);
        }
    }
    Ok(MeasurementOutcome {
        probs,
        conditional_states,
    })
}

/// Robertson product `ΔX ΔZ` and commutator bound `|⟨[X, Z]⟩| / 2`.
pub fn robertson_bound(
    rho: &DensityMatrix,
    x: &ComplexMatrix,
    z: &ComplexMatrix,
) -> Result<(f64, f64)> {
    for (name, m) in [("X", x), ("Z", z)] {
        if m.rows() != rho.dim() || !m.is_square() {
            return Err(Error::dim(format!(
                "observable {name} is {}x{}, state is {}-dimensional",
                m.rows(),
                m.cols(),
                rho.dim()
            )));
        }
        let deviation = m.hermitian_deviation();
        if deviation > DEFAULT_TOL {
            return Err(Error::usage(format!(
                "observable {name} is not Hermitian (max |m - m†| = {deviation:e})"
            )));
        }
    }
    let spread = |m: &ComplexMatrix| {
        let mean = rho.expect(m).re;
        let sq = rho.expect(&m.matmul(m)).re;
        (sq - mean * mean).max(0.0).sqrt()
    };
    let lhs = spread(x) * spread(z);
    let commutator = &x.matmul(z) - &z.matmul(x);
    let rhs = rho.expect(&commutator).norm() / 2.0;
    if lhs < rhs - 1e-10 {
        return Err(Error::Numeric(format!(
            "Robertson inequality violated: {lhs} < {rhs}"
        )));
    }
    Ok((lhs, rhs))
}

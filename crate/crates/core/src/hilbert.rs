//! Dense pure-state kernel over labeled tensor-product subsystems.
//!
//! Amplitudes are stored row-major with the first subsystem as the most
//! significant index, so the basis ket `|i₀ i₁ … iₙ⟩` lives at
//! `Σ iₖ · strideₖ` where `strideₖ` is the product of the dimensions after
//! subsystem `k`.
//!
//! Basis conventions used by the rest of the crate: polarization `0 = R`,
//! `1 = L`; spatial mode `0 = mode 1`, `1 = mode 2`; spin `0 = ↑`, `1 = ↓`.

use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities (unitarity, normalization, hermiticity).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for end-to-end state comparisons.
pub const STATE_TOL: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Polarization,
    SpatialMode,
    Spin,
    Auxiliary,
}

impl Role {
    fn canonical_rank(self) -> u8 {
        match self {
            Role::Polarization => 0,
            Role::SpatialMode => 1,
            Role::Spin | Role::Auxiliary => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    label: String,
    dim: usize,
    role: Role,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, dim: usize, role: Role) -> Result<Self> {
        let label = label.into();
        if dim < 2 {
            return Err(Error::InvalidDimension(label));
        }
        Ok(Self { label, dim, role })
    }

    /// Two-level subsystem; every subsystem in this crate is one.
    pub fn qubit(label: impl Into<String>, role: Role) -> Self {
        Self {
            label: label.into(),
            dim: 2,
            role,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn role(&self) -> Role {
        self.role
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut out = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        out[k] = out[k + 1] * dims[k + 1];
    }
    out
}

/// Offsets of every joint basis index of `positions` (first position most
/// significant) and the list of base indices where all those digits are zero.
fn split_indices(dims: &[usize], positions: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let st = strides(dims);
    let total: usize = dims.iter().product();
    let tdims: Vec<usize> = positions.iter().map(|&p| dims[p]).collect();
    let tdim: usize = tdims.iter().product();

    let mut offsets = Vec::with_capacity(tdim);
    for t in 0..tdim {
        let mut rem = t;
        let mut off = 0;
        for (k, &p) in positions.iter().enumerate().rev() {
            off += (rem % tdims[k]) * st[p];
            rem /= tdims[k];
        }
        offsets.push(off);
    }

    let bases = (0..total)
        .filter(|&i| {
            positions
                .iter()
                .all(|&p| (i / st[p]).is_multiple_of(dims[p]))
        })
        .collect();
    (offsets, bases)
}

fn check_unique(subsystems: &[Subsystem]) -> Result<()> {
    let mut seen = HashSet::new();
    for s in subsystems {
        if !seen.insert(s.label.as_str()) {
            return Err(Error::DuplicateLabel(s.label.clone()));
        }
    }
    Ok(())
}

/// Result of a projective measurement on one subsystem.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub outcome: usize,
    pub probability: f64,
    pub state: PureState,
}

#[derive(Clone, Debug)]
pub struct PureState {
    subsystems: Vec<Subsystem>,
    amplitudes: Vec<C64>,
    normalized: bool,
}

impl PureState {
    /// The state over zero subsystems; the identity of [`PureState::tensor`].
    pub fn vacuum() -> Self {
        Self {
            subsystems: Vec::new(),
            amplitudes: vec![ONE],
            normalized: true,
        }
    }

    /// Builds a state and sets the normalized flag when the squared norm is 1
    /// within [`ALGEBRA_TOL`].
    pub fn new(subsystems: Vec<Subsystem>, amplitudes: Vec<C64>) -> Result<Self> {
        check_unique(&subsystems)?;
        let expected: usize = subsystems.iter().map(|s| s.dim).product();
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        Ok(Self {
            subsystems,
            amplitudes,
            normalized: (norm - 1.0).abs() <= ALGEBRA_TOL,
        })
    }

    pub fn single(subsystem: Subsystem, amplitudes: Vec<C64>) -> Result<Self> {
        Self::new(vec![subsystem], amplitudes)
    }

    pub fn basis(subsystem: Subsystem, index: usize) -> Result<Self> {
        let dim = subsystem.dim;
        if index >= dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: index + 1,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::new(vec![subsystem], amps)
    }

    /// `(|0⟩ + |1⟩)/√2` on a fresh qubit.
    pub fn plus(subsystem: Subsystem) -> Result<Self> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::single(subsystem, vec![h, h])
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn labels(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.subsystems.iter().any(|s| s.label == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn subsystem(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.subsystems[self.position(label)?])
    }

    /// Amplitude of the basis ket given by one digit per subsystem.
    pub fn amplitude(&self, digits: &[usize]) -> C64 {
        let dims: Vec<usize> = self.subsystems.iter().map(|s| s.dim).collect();
        let st = strides(&dims);
        let idx: usize = digits.iter().zip(&st).map(|(d, s)| d * s).sum();
        self.amplitudes[idx]
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let amplitudes = self.amplitudes.iter().map(|a| a * factor).collect();
        Self::new(self.subsystems.clone(), amplitudes).expect("same layout")
    }

    /// Kronecker product; `self`'s subsystems come first.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        check_unique(&subsystems)?;
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self {
            subsystems,
            amplitudes,
            normalized: self.normalized && other.normalized,
        })
    }

    /// Reorders the tensor factors to `order`, which must be a permutation of
    /// this state's labels.
    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.subsystems.len() {
            return Err(Error::SubsystemMismatch);
        }
        let perm: Vec<usize> = order
            .iter()
            .map(|l| self.position(l))
            .collect::<Result<_>>()?;
        let mut seen = HashSet::new();
        if !perm.iter().all(|p| seen.insert(*p)) {
            return Err(Error::SubsystemMismatch);
        }
        if perm.iter().enumerate().all(|(k, &p)| k == p) {
            return Ok(self.clone());
        }

        let old_dims: Vec<usize> = self.subsystems.iter().map(|s| s.dim).collect();
        let old_st = strides(&old_dims);
        let subsystems: Vec<Subsystem> = perm.iter().map(|&p| self.subsystems[p].clone()).collect();
        let new_dims: Vec<usize> = subsystems.iter().map(|s| s.dim).collect();

        let mut amplitudes = vec![ZERO; self.dim()];
        let mut digits = vec![0usize; new_dims.len()];
        for amp in amplitudes.iter_mut() {
            let src: usize = digits.iter().zip(&perm).map(|(d, &p)| d * old_st[p]).sum();
            *amp = self.amplitudes[src];
            // odometer increment over the new ordering
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < new_dims[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        Ok(Self {
            subsystems,
            amplitudes,
            normalized: self.normalized,
        })
    }

    /// Canonical order: polarizations, then spatial modes, then spins and
    /// auxiliary photons, each group in creation order.
    pub fn canonical(&self) -> Self {
        let mut idx: Vec<usize> = (0..self.subsystems.len()).collect();
        idx.sort_by_key(|&k| self.subsystems[k].role.canonical_rank());
        let order: Vec<&str> = idx
            .iter()
            .map(|&k| self.subsystems[k].label.as_str())
            .collect();
        self.permuted(&order)
            .expect("canonical order is a permutation")
    }

    pub fn apply(&self, map: &LinearMap) -> Result<Self> {
        let positions: Vec<usize> = map
            .targets
            .iter()
            .map(|t| self.position(t))
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = self.subsystems.iter().map(|s| s.dim).collect();
        let expected: usize = positions.iter().map(|&p| dims[p]).product();
        if map.matrix.nrows() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: map.matrix.nrows(),
            });
        }

        let (offsets, bases) = split_indices(&dims, &positions);
        let mut amplitudes = self.amplitudes.clone();
        let mut local = vec![ZERO; expected];
        for base in bases {
            for (t, off) in offsets.iter().enumerate() {
                local[t] = self.amplitudes[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, v) in local.iter().enumerate() {
                    acc += map.matrix[(r, c)] * v;
                }
                amplitudes[base + off] = acc;
            }
        }
        Ok(Self {
            subsystems: self.subsystems.clone(),
            amplitudes,
            normalized: self.normalized && map.unitary,
        })
    }

    /// `⟨self|other⟩`, reordering `other` to this state's subsystem order.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        let other = self.aligned(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn aligned(&self, other: &PureState) -> Result<PureState> {
        if self.subsystems.len() != other.subsystems.len() {
            return Err(Error::SubsystemMismatch);
        }
        let order = self.labels();
        let other = other
            .permuted(&order)
            .map_err(|_| Error::SubsystemMismatch)?;
        if other.subsystems != self.subsystems {
            return Err(Error::SubsystemMismatch);
        }
        Ok(other)
    }

    pub fn equal_up_to_global_phase(&self, other: &PureState, tol: f64) -> Result<bool> {
        for s in [self, other] {
            if !s.normalized {
                return Err(Error::NotNormalized(s.norm_sqr()));
            }
        }
        Ok(self.inner(other)?.norm() >= 1.0 - tol)
    }

    /// Largest modulus of the amplitude-wise difference after alignment.
    pub fn max_difference(&self, other: &PureState) -> Result<f64> {
        let other = self.aligned(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Born probabilities of each basis vector on `target`.
    pub fn outcome_probabilities(&self, target: &str, basis: &[Vec<C64>]) -> Result<Vec<f64>> {
        let (offsets, bases) = self.measurement_layout(target, basis)?;
        Ok(basis
            .iter()
            .map(|b| {
                bases
                    .iter()
                    .map(|&base| project(&self.amplitudes, base, &offsets, b).norm_sqr())
                    .sum()
            })
            .collect())
    }

    /// Projective measurement of `target` in an orthonormal `basis`, with the
    /// outcome drawn from `rng`. The returned state is renormalized.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        target: &str,
        basis: &[Vec<C64>],
        rng: &mut R,
    ) -> Result<Measurement> {
        let norm = self.norm_sqr();
        if !self.normalized || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let probs = self.outcome_probabilities(target, basis)?;
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        let mut outcome = None;
        for (k, p) in probs.iter().enumerate() {
            if *p <= 0.0 {
                continue;
            }
            acc += p;
            outcome = Some(k);
            if draw < acc {
                break;
            }
        }
        let outcome = outcome.ok_or(Error::ZeroNorm)?;
        let probability = probs[outcome];

        let (offsets, bases) = self.measurement_layout(target, basis)?;
        let b = &basis[outcome];
        let scale = probability.sqrt();
        let mut amplitudes = vec![ZERO; self.dim()];
        for base in bases {
            let c = project(&self.amplitudes, base, &offsets, b) / scale;
            for (t, off) in offsets.iter().enumerate() {
                amplitudes[base + off] = b[t] * c;
            }
        }
        let state = Self {
            subsystems: self.subsystems.clone(),
            amplitudes,
            normalized: true,
        };
        Ok(Measurement {
            outcome,
            probability,
            state,
        })
    }

    fn measurement_layout(
        &self,
        target: &str,
        basis: &[Vec<C64>],
    ) -> Result<(Vec<usize>, Vec<usize>)> {
        let pos = self.position(target)?;
        check_orthonormal(basis, self.subsystems[pos].dim)?;
        let dims: Vec<usize> = self.subsystems.iter().map(|s| s.dim).collect();
        Ok(split_indices(&dims, &[pos]))
    }

    /// Partial trace onto `keep`, whose order fixes the order of the result.
    pub fn reduced_density(&self, keep: &[&str]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut order: Vec<&str> = keep.to_vec();
        for l in self.labels() {
            if !keep.contains(&l) {
                order.push(l);
            }
        }
        let perm = self.permuted(&order)?;
        let rows: usize = perm.subsystems[..keep.len()]
            .iter()
            .map(|s| s.dim)
            .product();
        let cols = self.dim() / rows;
        let psi = DMatrix::from_row_slice(rows, cols, &perm.amplitudes);
        Ok(DensityMatrix {
            subsystems: perm.subsystems[..keep.len()].to_vec(),
            matrix: &psi * psi.adjoint(),
        })
    }

    /// Splits off `label` when it is in a product state with everything else.
    /// Returns the remaining state and the (unit-norm) local state.
    pub fn factor_out(&self, label: &str) -> Result<(PureState, Vec<C64>)> {
        let pos = self.position(label)?;
        let mut order = vec![label];
        order.extend(self.labels().into_iter().filter(|l| *l != label));
        let perm = self.permuted(&order)?;
        let rows = self.subsystems[pos].dim;
        let cols = self.dim() / rows;
        let m = DMatrix::from_row_slice(rows, cols, &perm.amplitudes);

        let total = m.norm_squared();
        if total == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let (best, _) = (0..cols)
            .map(|j| (j, m.column(j).norm_squared()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let u = m.column(best).unscale(m.column(best).norm());
        let v = u.adjoint() * &m;
        let residual = (&m - &u * &v).norm_squared();
        if residual > STATE_TOL * STATE_TOL * total {
            return Err(Error::Entangled(label.to_string()));
        }

        let rest = Self {
            subsystems: perm.subsystems[1..].to_vec(),
            amplitudes: v.iter().copied().collect(),
            normalized: self.normalized,
        };
        Ok((rest, u.iter().copied().collect()))
    }

    pub fn remove(&self, label: &str) -> Result<PureState> {
        Ok(self.factor_out(label)?.0)
    }

    /// Replaces the local state of an unentangled subsystem, keeping its
    /// position in the tensor order.
    pub fn reset(&self, label: &str, local: Vec<C64>) -> Result<PureState> {
        let order = self.labels();
        let sub = self.subsystem(label)?.clone();
        let (rest, _) = self.factor_out(label)?;
        let fresh = PureState::single(sub, local)?;
        rest.tensor(&fresh)?.permuted(&order)
    }
}

fn project(amps: &[C64], base: usize, offsets: &[usize], b: &[C64]) -> C64 {
    offsets
        .iter()
        .zip(b)
        .map(|(off, bt)| bt.conj() * amps[base + off])
        .sum()
}

fn check_orthonormal(basis: &[Vec<C64>], dim: usize) -> Result<()> {
    if basis.len() != dim || basis.iter().any(|b| b.len() != dim) {
        return Err(Error::NonOrthonormalBasis);
    }
    for (j, bj) in basis.iter().enumerate() {
        for (k, bk) in basis.iter().enumerate() {
            let ip: C64 = bj.iter().zip(bk).map(|(a, b)| a.conj() * b).sum();
            let want = if j == k { ONE } else { ZERO };
            if (ip - want).norm() > ALGEBRA_TOL {
                return Err(Error::NonOrthonormalBasis);
            }
        }
    }
    Ok(())
}

/// A linear operator acting on an ordered list of target subsystems.
#[derive(Clone, Debug)]
pub struct LinearMap {
    targets: Vec<String>,
    matrix: DMatrix<C64>,
    unitary: bool,
}

impl LinearMap {
    /// The unitary flag is computed from the matrix (`M†M = 1` within
    /// [`ALGEBRA_TOL`]).
    pub fn new(targets: &[&str], matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let mut seen = HashSet::new();
        for t in targets {
            if !seen.insert(*t) {
                return Err(Error::DuplicateLabel(t.to_string()));
            }
        }
        let unitary = is_unitary(&matrix);
        Ok(Self {
            targets: targets.iter().map(|t| t.to_string()).collect(),
            matrix,
            unitary,
        })
    }

    pub fn from_rows(targets: &[&str], dim: usize, rows: &[C64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                got: rows.len(),
            });
        }
        Self::new(targets, DMatrix::from_row_slice(dim, dim, rows))
    }

    pub fn diagonal(targets: &[&str], diag: &[C64]) -> Result<Self> {
        Self::new(
            targets,
            DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)),
        )
    }

    pub fn identity(targets: &[&str], dim: usize) -> Result<Self> {
        Self::new(targets, DMatrix::identity(dim, dim))
    }

    pub fn pauli_x(target: &str) -> Self {
        Self::from_rows(&[target], 2, &[ZERO, ONE, ONE, ZERO]).expect("2x2")
    }

    pub fn pauli_z(target: &str) -> Self {
        Self::diagonal(&[target], &[ONE, -ONE]).expect("2x2")
    }

    pub fn hadamard(target: &str) -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::from_rows(&[target], 2, &[h, h, h, -h]).expect("2x2")
    }

    pub fn targets(&self) -> Vec<&str> {
        self.targets.iter().map(String::as_str).collect()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// `next ∘ self` on identical targets.
    pub fn then(&self, next: &LinearMap) -> Result<LinearMap> {
        if self.targets != next.targets {
            return Err(Error::SubsystemMismatch);
        }
        if self.matrix.nrows() != next.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: next.matrix.nrows(),
            });
        }
        let targets = self.targets();
        LinearMap::new(&targets, &next.matrix * &self.matrix)
    }

    pub fn power(&self, n: u32) -> LinearMap {
        let dim = self.matrix.nrows();
        let mut m = DMatrix::identity(dim, dim);
        for _ in 0..n {
            m = &self.matrix * m;
        }
        let targets = self.targets();
        LinearMap::new(&targets, m).expect("square matrix")
    }

    /// Acts as `self` only when `control` is in basis state `index`, and as
    /// the identity otherwise. The control becomes the first target.
    pub fn conditioned_on(
        &self,
        control: &str,
        control_dim: usize,
        index: usize,
    ) -> Result<LinearMap> {
        if self.targets.iter().any(|t| t == control) {
            return Err(Error::DuplicateLabel(control.to_string()));
        }
        let inner = self.matrix.nrows();
        let dim = control_dim * inner;
        let mut m = DMatrix::identity(dim, dim);
        m.view_mut((index * inner, index * inner), (inner, inner))
            .copy_from(&self.matrix);
        let mut targets = vec![control];
        targets.extend(self.targets());
        LinearMap::new(&targets, m)
    }
}

fn is_unitary(m: &DMatrix<C64>) -> bool {
    let n = m.nrows();
    let prod = m.adjoint() * m;
    let id = DMatrix::<C64>::identity(n, n);
    (prod - id).iter().all(|d| d.norm() <= ALGEBRA_TOL)
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    subsystems: Vec<Subsystem>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            subsystems: state.subsystems.clone(),
            matrix: &v * v.adjoint(),
        }
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .all(|d| d.norm() <= tol)
    }

    /// Eigenvalues in ascending order, treating the matrix as Hermitian.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.eigenvalues().iter().all(|&e| e >= -tol)
    }

    /// `½‖ρ − σ‖₁`; both matrices must be over the same subsystem order.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.subsystems != other.subsystems {
            return Err(Error::SubsystemMismatch);
        }
        let diff = &self.matrix - &other.matrix;
        let ev = diff.symmetric_eigen().eigenvalues;
        Ok(0.5 * ev.iter().map(|e| e.abs()).sum::<f64>())
    }
}

//! Small-dimension quantum state discrimination.
//!
//! Density matrices up to 16×16, trace distance, the Helstrom minimum error
//! for two hypotheses, the distance between measurement statistics, and the
//! overlap `Tr(ρσ)`. Diagonal density matrices embed classical distributions,
//! on which every quantity reduces to its [`crate::probdist`] counterpart.

use nalgebra::{Complex, DMatrix};
use rand::Rng;

use crate::error::{Error, Result};
use crate::probdist::Distribution;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub const MAX_DIM: usize = 16;

/// Entrywise Hermiticity, eigenvalue and trace tolerance.
pub const MATRIX_TOLERANCE: f64 = 1e-10;

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn max_hermitian_violation(m: &CMatrix) -> f64 {
    let a = m.adjoint();
    m.iter()
        .zip(a.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix (symmetrized first).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_part(m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

/// `‖H‖₁ = Σ |λᵢ(H)|` for Hermitian `H`.
pub fn trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|l| l.abs()).sum()
}

fn check_square(m: &CMatrix, what: &str) -> Result<usize> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension(format!(
            "{what} is {}x{}, not square",
            n,
            m.ncols()
        )));
    }
    if n == 0 || n > MAX_DIM {
        return Err(Error::Scale(format!(
            "{what} has dimension {n}, supported range is 1..={MAX_DIM}"
        )));
    }
    Ok(n)
}

fn check_hermitian_psd(m: &CMatrix, what: &str) -> Result<CMatrix> {
    let violation = max_hermitian_violation(m);
    if violation > MATRIX_TOLERANCE {
        return Err(Error::InvalidMatrix(format!(
            "{what} is not Hermitian (entrywise violation {violation:e})"
        )));
    }
    let h = hermitian_part(m);
    let min_eig = hermitian_eigenvalues(&h)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -MATRIX_TOLERANCE {
        return Err(Error::InvalidMatrix(format!(
            "{what} is not positive semidefinite (min eigenvalue {min_eig:e})"
        )));
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m, "density matrix")?;
        let h = check_hermitian_psd(&m, "density matrix")?;
        let trace = h.trace();
        if (trace.re - 1.0).abs() > MATRIX_TOLERANCE || trace.im.abs() > MATRIX_TOLERANCE {
            return Err(Error::InvalidMatrix(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        Ok(Self { m: h })
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let diag =
            nalgebra::DVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&diag))
    }

    /// Diagonal embedding of a classical distribution.
    pub fn from_distribution(p: &Distribution) -> Result<Self> {
        Self::from_diagonal(&p.masses()?)
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector.
    pub fn pure(state: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(state);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidMatrix("zero state vector".into()));
        }
        let v = v / C64::new(norm, 0.0);
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::from_diagonal(&vec![1.0 / dim as f64; dim])
    }

    /// `GG†/Tr(GG†)` for a complex Gaussian `G` (Hilbert–Schmidt measure).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<Self> {
        let g = random_gaussian_matrix(rng, dim);
        let w = &g * g.adjoint();
        let t = w.trace().re;
        Self::new(w / C64::new(t, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// Parses one matrix in the text matrix format.
    pub fn from_document(text: &str) -> Result<Self> {
        let mut ms = parse_matrices(text)?;
        if ms.len() != 1 {
            return Err(Error::Parse(format!(
                "expected exactly one matrix, found {}",
                ms.len()
            )));
        }
        Self::new(ms.remove(0))
    }

    pub fn to_document(&self) -> String {
        matrix_to_document(&self.m)
    }
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn random_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(standard_normal(rng), standard_normal(rng))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("POVM has no elements".into()))?;
        let dim = check_square(first, "POVM element")?;
        let mut sum = CMatrix::zeros(dim, dim);
        let mut cleaned = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if check_square(e, "POVM element")? != dim {
                return Err(Error::InvalidPovm(format!(
                    "element {i} has dimension {}, expected {dim}",
                    e.nrows()
                )));
            }
            let h = check_hermitian_psd(e, &format!("POVM element {i}"))
                .map_err(|err| Error::InvalidPovm(err.to_string()))?;
            sum += &h;
            cleaned.push(h);
        }
        let identity = CMatrix::identity(dim, dim);
        let dev = (sum - identity)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > MATRIX_TOLERANCE {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {dev:e}"
            )));
        }
        Ok(Self { elements: cleaned })
    }

    /// `{I}`: a measurement that reveals nothing.
    pub fn trivial(dim: usize) -> Result<Self> {
        Self::new(vec![CMatrix::identity(dim, dim)])
    }

    pub fn computational_basis(dim: usize) -> Result<Self> {
        Self::new(
            (0..dim)
                .map(|i| {
                    let mut e = CMatrix::zeros(dim, dim);
                    e[(i, i)] = C64::new(1.0, 0.0);
                    e
                })
                .collect(),
        )
    }

    /// Qubit projective measurement `(I ± n·σ)/2` along unit vector `n`.
    pub fn qubit_projective(n: [f64; 3]) -> Result<Self> {
        let [x, y, z] = n;
        let half = |s: f64| {
            CMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(0.5 * (1.0 + s * z), 0.0),
                    C64::new(0.5 * s * x, -0.5 * s * y),
                    C64::new(0.5 * s * x, 0.5 * s * y),
                    C64::new(0.5 * (1.0 - s * z), 0.0),
                ],
            )
        };
        Self::new(vec![half(1.0), half(-1.0)])
    }

    /// Random `k`-outcome POVM: `E_i = S^{-1/2} A_i S^{-1/2}` with `A_i`
    /// random positive matrices and `S = Σ A_i`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, k: usize) -> Result<Self> {
        let parts: Vec<CMatrix> = (0..k.max(1))
            .map(|_| {
                let g = random_gaussian_matrix(rng, dim);
                &g * g.adjoint()
            })
            .collect();
        let total = parts
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, a| acc + a);
        let eig = hermitian_part(&total).symmetric_eigen();
        let inv_sqrt =
            CMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(1.0 / l.sqrt(), 0.0)));
        let s = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
        Self::new(parts.iter().map(|a| &s * a * &s).collect())
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Parses a sequence of matrices in the text matrix format.
    pub fn from_document(text: &str) -> Result<Self> {
        Self::new(parse_matrices(text)?)
    }
}

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "density matrices of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `½ ‖ρ - σ‖₁`.
pub fn trace_distance_q(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok((0.5 * trace_norm(&(&rho.m - &sigma.m))).clamp(0.0, 1.0))
}

/// Minimum error of discriminating `ρ₁` (prior `prior1`) from `ρ₂`:
/// `½(1 - ‖prior1·ρ₁ - (1-prior1)·ρ₂‖₁)`.
pub fn helstrom_min_error(rho1: &DensityMatrix, rho2: &DensityMatrix, prior1: f64) -> Result<f64> {
    check_dims(rho1, rho2)?;
    if !(0.0..=1.0).contains(&prior1) {
        return Err(Error::Domain(format!(
            "prior must lie in [0, 1], got {prior1}"
        )));
    }
    let weighted = &rho1.m * C64::new(prior1, 0.0) - &rho2.m * C64::new(1.0 - prior1, 0.0);
    Ok((0.5 * (1.0 - trace_norm(&weighted))).max(0.0))
}

/// Outcome distribution `Tr(ρ Πᵢ)` of a POVM measurement.
pub fn outcome_probabilities(rho: &DensityMatrix, m: &Povm) -> Result<Vec<f64>> {
    if m.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "POVM of dimension {} applied to a {}-dimensional state",
            m.dim(),
            rho.dim()
        )));
    }
    Ok(m.elements
        .iter()
        .map(|e| (&rho.m * e).trace().re.max(0.0))
        .collect())
}

/// Statistical distance between the outcome distributions of `m` on `ρ` and `σ`.
pub fn measured_distance(rho: &DensityMatrix, sigma: &DensityMatrix, m: &Povm) -> Result<f64> {
    check_dims(rho, sigma)?;
    let (a, b) = (
        outcome_probabilities(rho, m)?,
        outcome_probabilities(sigma, m)?,
    );
    Ok(0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// `Tr(ρσ)`: an inner product of states, not a probability that they coincide.
pub fn overlap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok((&rho.m * &sigma.m).trace().re.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Text matrix format: a dimension `d` followed by `d*d` row-major complex
// entries, each written as a real part and an imaginary part. Tokens are
// whitespace separated; lines starting with `#` are comments. Several
// matrices may follow each other (used for POVM files).

pub fn parse_matrices(text: &str) -> Result<Vec<CMatrix>> {
    let mut tokens = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace);
    let mut out = Vec::new();
    while let Some(tok) = tokens.next() {
        let dim: usize = tok
            .parse()
            .map_err(|_| Error::Parse(format!("expected matrix dimension, found '{tok}'")))?;
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Scale(format!(
                "matrix dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for k in 0..dim * dim {
            let mut next = || -> Result<f64> {
                let t = tokens.next().ok_or_else(|| {
                    Error::Parse(format!("matrix ended after {k} of {} entries", dim * dim))
                })?;
                t.parse()
                    .map_err(|_| Error::Parse(format!("'{t}' is not a real number")))
            };
            let re = next()?;
            let im = next()?;
            entries.push(C64::new(re, im));
        }
        out.push(CMatrix::from_row_slice(dim, dim, &entries));
    }
    if out.is_empty() {
        return Err(Error::Parse("no matrix found".into()));
    }
    Ok(out)
}

pub fn matrix_to_document(m: &CMatrix) -> String {
    let mut s = format!("{}\n", m.nrows());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e} {:.16e}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        s.push_str(&row.join("  "));
        s.push('\n');
    }
    s
}

//! Ensemble samplers: the i.i.d. data matrix, the hollow Wishart matrix
//! built from it, and the hollow Gaussian Wigner reference ensemble.
//!
//! Reproducibility contract: every random object is driven by an
//! [`RngStream`] addressed by `(master_seed, stream_index)`. Identical
//! addresses reproduce identical output bit for bit; distinct stream
//! indices give statistically independent streams. Replica `k` of a Monte
//! Carlo run uses stream index `k`, which makes results independent of how
//! replicas are scheduled across worker threads.

use crate::distributions::UnivariateLogConcave;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnsembleError {
    #[error("matrix dimensions must be positive, got {n}x{d}")]
    EmptyDimensions { n: usize, d: usize },
    #[error("matrix of {n}x{d} entries exceeds the dense storage limit")]
    DimensionOverflow { n: usize, d: usize },
    #[error("entry ({i}, {j}) is not finite")]
    NonFiniteEntry { i: usize, j: usize },
}

/// Largest dense matrix we will allocate (entries).
const MAX_ENTRIES: usize = 1 << 31;

/// A seeded, splittable random stream (ChaCha8 keyed by the master seed,
/// with the stream index as the ChaCha stream/nonce).
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self { master_seed, stream_index, rng }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// Dense n×d real matrix with finite entries, stored row-major. Carries the
/// latent feature rows X_i of the Wishart construction, but is usable as a
/// plain matrix container.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    d: usize,
    entries: Vec<f64>,
}

impl DataMatrix {
    /// Builds a matrix from row-major entries, validating shape and
    /// finiteness.
    pub fn from_vec(n: usize, d: usize, entries: Vec<f64>) -> Result<Self, EnsembleError> {
        check_dims(n, d)?;
        assert_eq!(entries.len(), n * d, "entry buffer must be n*d long");
        for (idx, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(EnsembleError::NonFiniteEntry { i: idx / d, j: idx % d });
            }
        }
        Ok(Self { n, d, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, EnsembleError> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.len());
        Self::from_vec(n, d, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.d + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }
}

fn check_dims(n: usize, d: usize) -> Result<(), EnsembleError> {
    if n == 0 || d == 0 {
        return Err(EnsembleError::EmptyDimensions { n, d });
    }
    match n.checked_mul(d) {
        Some(total) if total <= MAX_ENTRIES => Ok(()),
        _ => Err(EnsembleError::DimensionOverflow { n, d }),
    }
}

/// Symmetric n×n matrix with exactly zero diagonal. Symmetry and hollowness
/// hold by construction: only the strict upper triangle is ever written,
/// then mirrored.
#[derive(Debug, Clone, PartialEq)]
pub struct HollowSymmetricMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl HollowSymmetricMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, entries: vec![0.0; n * n] }
    }

    /// Builds from a generator over strict-upper-triangle positions
    /// (i < j), mirroring below the diagonal.
    pub fn from_offdiagonal<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                m.entries[i * n + j] = v;
                m.entries[j * n + i] = v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }
}

/// Samples the n×d matrix of i.i.d. standardized entries, row-major draw
/// order, bit-reproducible given the stream.
pub fn sample_data_matrix(
    dist: &UnivariateLogConcave,
    n: usize,
    d: usize,
    stream: &mut RngStream,
) -> Result<DataMatrix, EnsembleError> {
    check_dims(n, d)?;
    let mut entries = vec![0.0; n * d];
    dist.sample_into(stream, &mut entries);
    Ok(DataMatrix { n, d, entries })
}

/// Hollow Wishart sample: W[i][j] = ⟨row_i, row_j⟩ / √d off the diagonal,
/// zero diagonal, exact symmetry.
pub fn wishart_hollow(x: &DataMatrix) -> HollowSymmetricMatrix {
    let inv_sqrt_d = 1.0 / (x.d as f64).sqrt();
    HollowSymmetricMatrix::from_offdiagonal(x.n, |i, j| {
        dot(x.row(i), x.row(j)) * inv_sqrt_d
    })
}

/// Hollow Gaussian Wigner sample: i.i.d. standard normals above the
/// diagonal (row-major draw order), mirrored below, zero diagonal.
pub fn gaussian_hollow(n: usize, stream: &mut RngStream) -> HollowSymmetricMatrix {
    let gaussian = UnivariateLogConcave::gaussian();
    HollowSymmetricMatrix::from_offdiagonal(n, |_, _| gaussian.sample_one(stream))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

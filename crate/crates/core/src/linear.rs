//! Block substitution cipher over the reals.
//!
//! A block `c` of `n` plaintext codes is encrypted to the solution `x` of
//! `A·x = b − c`; decryption substitutes back, `c = b − A·x`, and rounds.
//! Consecutive runs of `n` bytes form the blocks.
//!
//! The mod-26 Hill cipher lives here too, as a comparison oracle for the
//! real-field construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, DEFAULT_DELTA_MIN};
use crate::scalar::{round_to_code, Scalar, DEFAULT_DECRYPT_TOL};

/// Byte appended to fill the final block.
pub const PAD_BYTE: u8 = b' ';

pub const MAX_BLOCK: usize = 64;

/// Keygen rejects keys whose absolute determinant is below this.
pub const KEYGEN_MIN_DET: f64 = 1e-6;

/// Keygen rejects keys with a larger 1-norm condition number.
pub const KEYGEN_MAX_CONDITION: f64 = 1e8;

const KEYGEN_ATTEMPTS: usize = 100;

/// Key of the linear cipher: the matrix `A` and offset vector `b`.
///
/// The inverse is computed once at construction and used for encryption.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearKey {
    a: Matrix<Scalar>,
    a_inv: Matrix<Scalar>,
    b: Vec<Scalar>,
    decrypt_tol: Scalar,
}

impl LinearKey {
    pub fn new(a: Matrix<Scalar>, b: Vec<Scalar>) -> Result<Self> {
        check_shape(&a, &b)?;
        let a_inv = linalg::invert(&a, DEFAULT_DELTA_MIN)?;
        Ok(LinearKey {
            a,
            a_inv,
            b,
            decrypt_tol: DEFAULT_DECRYPT_TOL,
        })
    }

    /// Builds a key from the matrix that maps `b − c` to the ciphertext,
    /// i.e. from `A⁻¹` rather than `A`.
    pub fn from_encryption_matrix(a_inv: Matrix<Scalar>, b: Vec<Scalar>) -> Result<Self> {
        check_shape(&a_inv, &b)?;
        let a = linalg::invert(&a_inv, DEFAULT_DELTA_MIN)?;
        Ok(LinearKey {
            a,
            a_inv,
            b,
            decrypt_tol: DEFAULT_DECRYPT_TOL,
        })
    }

    pub fn with_decrypt_tol(mut self, tol: Scalar) -> Result<Self> {
        if !(tol > 0.0 && tol < 0.5) {
            return Err(Error::InvalidKey(format!(
                "decrypt tolerance must be in (0, 0.5), got {tol}"
            )));
        }
        self.decrypt_tol = tol;
        Ok(self)
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.a
    }

    pub fn inverse(&self) -> &Matrix<Scalar> {
        &self.a_inv
    }

    pub fn offset(&self) -> &[Scalar] {
        &self.b
    }

    pub fn decrypt_tol(&self) -> Scalar {
        self.decrypt_tol
    }

    pub fn determinant(&self) -> Scalar {
        linalg::determinant(&self.a).unwrap_or(0.0)
    }

    pub fn condition(&self) -> Scalar {
        linalg::condition_1(&self.a, &self.a_inv)
    }
}

fn check_shape(m: &Matrix<Scalar>, b: &[Scalar]) -> Result<()> {
    let n = b.len();
    if n < 2 {
        return Err(Error::InvalidKey(format!("block length must be at least 2, got {n}")));
    }
    if n > MAX_BLOCK {
        return Err(Error::InvalidKey(format!(
            "block length {n} exceeds the supported maximum {MAX_BLOCK}"
        )));
    }
    if m.rows() != n || m.cols() != n {
        return Err(Error::InvalidKey(format!(
            "matrix is {}x{}, offset has length {n}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.all_finite() || b.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidKey("key entries must be finite".into()));
    }
    Ok(())
}

/// Random key with entries uniform in `[−magnitude, magnitude]`.
///
/// Resamples until `|det A| ≥ 1e-6` and the condition number is at most
/// `1e8`; deterministic in `seed`.
pub fn keygen_linear(n: usize, seed: u64, magnitude: Scalar) -> Result<LinearKey> {
    if n < 2 || n > MAX_BLOCK {
        return Err(Error::Precondition(format!(
            "block length must be in 2..={MAX_BLOCK}, got {n}"
        )));
    }
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(Error::Precondition(format!(
            "magnitude must be positive and finite, got {magnitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..KEYGEN_ATTEMPTS {
        let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(-magnitude..=magnitude));
        let b: Vec<Scalar> = (0..n).map(|_| rng.gen_range(-magnitude..=magnitude)).collect();
        let Ok(key) = LinearKey::new(a, b) else { continue };
        if key.determinant().abs() >= KEYGEN_MIN_DET && key.condition() <= KEYGEN_MAX_CONDITION {
            return Ok(key);
        }
    }
    Err(Error::Keygen(format!(
        "no well-conditioned {n}x{n} key after {KEYGEN_ATTEMPTS} attempts"
    )))
}

/// Length of `len` bytes after padding to whole blocks of `n`.
pub fn padded_len(len: usize, n: usize) -> usize {
    len.div_ceil(n) * n
}

/// Pads `plaintext` with spaces to a multiple of the block length.
pub fn pad_block(plaintext: &[u8], n: usize) -> Vec<u8> {
    let mut out = plaintext.to_vec();
    out.resize(padded_len(plaintext.len(), n), PAD_BYTE);
    out
}

pub fn encrypt_linear(key: &LinearKey, plaintext: &[u8]) -> Vec<Scalar> {
    let n = key.n();
    let padded = pad_block(plaintext, n);
    let mut out = vec![0.0; padded.len()];
    let mut rhs = vec![0.0; n];
    for (block, x) in padded.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        for ((r, &bi), &ci) in rhs.iter_mut().zip(&key.b).zip(block) {
            *r = bi - ci as Scalar;
        }
        key.a_inv.mul_vec_into(&rhs, x);
    }
    out
}

/// Substitutes each ciphertext block back into the system without
/// rounding, returning the recovered reals `b − A·x`.
pub fn substitute_linear(key: &LinearKey, ciphertext: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = key.n();
    if ciphertext.len() % n != 0 {
        return Err(Error::Precondition(format!(
            "ciphertext length {} is not a multiple of the block length {n}",
            ciphertext.len()
        )));
    }
    let mut out = vec![0.0; ciphertext.len()];
    for (x, c) in ciphertext.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        key.a.mul_vec_into(x, c);
        for (ci, &bi) in c.iter_mut().zip(&key.b) {
            *ci = bi - *ci;
        }
    }
    Ok(out)
}

pub fn decrypt_linear(key: &LinearKey, ciphertext: &[Scalar]) -> Result<Vec<u8>> {
    substitute_linear(key, ciphertext)?
        .into_iter()
        .enumerate()
        .map(|(i, c)| round_to_code(c, key.decrypt_tol).map_err(|e| e.at(i)))
        .collect()
}

fn rem(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (rem(a, m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| rem(old_s, m))
}

fn det_mod(a: &[Vec<i64>], m: i64) -> i64 {
    let n = a.len();
    match n {
        0 => 1,
        1 => rem(a[0][0], m),
        _ => (0..n).fold(0, |acc, j| {
            let minor: Vec<Vec<i64>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let term = rem(a[0][j], m) * det_mod(&minor, m) % m;
            if j % 2 == 0 {
                rem(acc + term, m)
            } else {
                rem(acc - term, m)
            }
        }),
    }
}

fn check_square(a: &[Vec<i64>]) -> Result<usize> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidKey("Hill matrix must be square and nonempty".into()));
    }
    Ok(n)
}

/// Inverse of an integer matrix modulo `m` via the adjugate.
pub fn hill_inverse(a: &[Vec<i64>], m: i64) -> Result<Vec<Vec<i64>>> {
    let n = check_square(a)?;
    let det_inv = mod_inverse(det_mod(a, m), m).ok_or(Error::SingularMatrix)?;
    if n == 1 {
        return Ok(vec![vec![det_inv]]);
    }
    let cofactor = |r: usize, c: usize| -> i64 {
        let minor: Vec<Vec<i64>> = a
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, row)| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &v)| v).collect())
            .collect();
        let d = det_mod(&minor, m);
        if (r + c) % 2 == 0 {
            d
        } else {
            rem(-d, m)
        }
    };
    Ok((0..n)
        .map(|i| (0..n).map(|j| rem(cofactor(j, i) * det_inv, m)).collect())
        .collect())
}

/// `y = A·c mod m` per block of `n` codes. Input length must be a multiple
/// of `n`.
pub fn hill_encrypt(a: &[Vec<i64>], codes: &[u8], m: i64) -> Result<Vec<u8>> {
    let n = check_square(a)?;
    if mod_inverse(det_mod(a, m), m).is_none() {
        return Err(Error::SingularMatrix);
    }
    hill_apply(a, codes, m, n)
}

pub fn hill_decrypt(a: &[Vec<i64>], codes: &[u8], m: i64) -> Result<Vec<u8>> {
    let inv = hill_inverse(a, m)?;
    let n = inv.len();
    hill_apply(&inv, codes, m, n)
}

fn hill_apply(a: &[Vec<i64>], codes: &[u8], m: i64, n: usize) -> Result<Vec<u8>> {
    if codes.len() % n != 0 {
        return Err(Error::Precondition(format!(
            "input length {} is not a multiple of {n}",
            codes.len()
        )));
    }
    Ok(codes
        .chunks_exact(n)
        .flat_map(|block| {
            a.iter().map(move |row| {
                let s: i64 = row.iter().zip(block).map(|(&k, &c)| k * c as i64).sum();
                rem(s, m) as u8
            })
        })
        .collect())
}

pub fn hill_encrypt_mod26(a: &[Vec<i64>], codes: &[u8]) -> Result<Vec<u8>> {
    hill_encrypt(a, codes, 26)
}

//! Attacks on the substitution stages.
//!
//! * Known-plaintext recovery of a linear key: for each row `i`,
//!   `Σ_j a_ij x_j − b_i = −c_i` is linear in the `n + 1` unknowns
//!   `(a_i1 … a_in, b_i)`, so `n + 1` known blocks determine the key.
//! * Interpolation of a root-finding key: the `(root, code)` pairs lie on
//!   `f`, so the interpolating polynomial reproduces `f` at every observed
//!   root, and exactly for polynomial keys once enough distinct codes have
//!   been seen.
//! * Frequency analysis of the monoalphabetic root-finding cipher.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{least_squares, Matrix};
use crate::linear::LinearKey;
use crate::nonlinear::KeyFunction;
use crate::scalar::Scalar;

const RANK_TOL: f64 = 1e-10;

/// Matched plaintext and ciphertext blocks of a linear cipher.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownPairs {
    n: usize,
    blocks: Vec<(Vec<u8>, Vec<Scalar>)>,
}

impl KnownPairs {
    pub fn new(n: usize, blocks: Vec<(Vec<u8>, Vec<Scalar>)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("block length must be positive".into()));
        }
        if let Some(i) = blocks.iter().position(|(p, c)| p.len() != n || c.len() != n) {
            return Err(Error::InconsistentData(format!(
                "block {i} does not have length {n}"
            )));
        }
        Ok(KnownPairs { n, blocks })
    }

    /// Splits aligned plaintext and ciphertext streams into blocks. A ragged
    /// tail is dropped.
    pub fn from_streams(n: usize, plaintext: &[u8], ciphertext: &[Scalar]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("block length must be positive".into()));
        }
        let blocks = plaintext
            .chunks_exact(n)
            .zip(ciphertext.chunks_exact(n))
            .map(|(p, c)| (p.to_vec(), c.to_vec()))
            .collect();
        Self::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[(Vec<u8>, Vec<Scalar>)] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Recovers `A` and `b` from at least `n + 1` known blocks. Surplus blocks
/// are combined in the least-squares sense.
pub fn kpa_linear(pairs: &KnownPairs, n: usize) -> Result<LinearKey> {
    if pairs.n() != n {
        return Err(Error::InconsistentData(format!(
            "pairs have block length {}, expected {n}",
            pairs.n()
        )));
    }
    if pairs.len() < n + 1 {
        return Err(Error::InsufficientData(format!(
            "{} known blocks, at least {} needed",
            pairs.len(),
            n + 1
        )));
    }
    let design = Matrix::from_fn(pairs.len(), n + 1, |k, j| {
        if j < n {
            pairs.blocks[k].1[j]
        } else {
            -1.0
        }
    });
    let rhs: Vec<Vec<Scalar>> = (0..n)
        .map(|i| pairs.blocks.iter().map(|(p, _)| -(p[i] as Scalar)).collect())
        .collect();
    let rows = least_squares(&design, &rhs, RANK_TOL)?;
    let a: Vec<Vec<Scalar>> = rows.iter().map(|r| r[..n].to_vec()).collect();
    let b: Vec<Scalar> = rows.iter().map(|r| r[n]).collect();
    LinearKey::new(Matrix::from_rows(&a)?, b)
}

/// Newton divided-difference interpolant through the distinct
/// `(root, code)` pairs, returned as a [`KeyFunction::Newton`].
///
/// Repeated identical pairs are collapsed; the same root paired with two
/// different codes is rejected.
pub fn interpolate_key(points: &[(Scalar, u8)]) -> Result<KeyFunction> {
    let mut nodes: Vec<Scalar> = Vec::new();
    let mut values: Vec<Scalar> = Vec::new();
    let mut seen: HashMap<u64, u8> = HashMap::new();
    for &(x, c) in points {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        let key = if x == 0.0 { 0 } else { x.to_bits() };
        match seen.get(&key) {
            Some(&prev) if prev != c => {
                return Err(Error::InconsistentData(format!(
                    "root {x} observed with codes {prev} and {c}"
                )))
            }
            Some(_) => {}
            None => {
                seen.insert(key, c);
                nodes.push(x);
                values.push(c as Scalar);
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::InsufficientData("no points to interpolate".into()));
    }
    let coeffs = divided_differences(&nodes, &values);
    KeyFunction::newton(nodes, coeffs)
}

fn divided_differences(nodes: &[Scalar], values: &[Scalar]) -> Vec<Scalar> {
    let mut coef = values.to_vec();
    let m = nodes.len();
    for level in 1..m {
        for i in (level..m).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    coef
}

/// Monomial coefficients (highest degree first) of a Newton-form
/// polynomial. Ill-conditioned for high degrees; prefer evaluating the
/// Newton form directly.
pub fn newton_to_monomial(nodes: &[Scalar], coeffs: &[Scalar]) -> Vec<Scalar> {
    // Ascending-power accumulation of c_d, then (x − x_k)·p + c_k.
    let d = coeffs.len() - 1;
    let mut p = vec![coeffs[d]];
    for k in (0..d).rev() {
        let mut next = vec![0.0; p.len() + 1];
        for (j, &pj) in p.iter().enumerate() {
            next[j + 1] += pj;
            next[j] -= nodes[k] * pj;
        }
        next[0] += coeffs[k];
        p = next;
    }
    p.reverse();
    p
}

/// Probability mass function over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    support: Vec<T>,
    probs: Vec<Scalar>,
}

impl<T> Distribution<T> {
    /// Probabilities must be nonnegative and sum to one within `1e-12`.
    /// The empty distribution is accepted and has zero entropy.
    pub fn new(support: Vec<T>, probs: Vec<Scalar>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::Precondition("support and probabilities differ in length".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::Precondition("probabilities must be nonnegative".into()));
        }
        let total: Scalar = probs.iter().sum();
        if !probs.is_empty() && (total - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("probabilities sum to {total}")));
        }
        Ok(Distribution { support, probs })
    }

    /// Empirical distribution from occurrence counts.
    pub fn from_counts(counts: Vec<(T, usize)>) -> Self {
        let total: usize = counts.iter().map(|(_, c)| c).sum();
        let (support, probs) = counts
            .into_iter()
            .map(|(v, c)| (v, c as Scalar / total as Scalar))
            .unzip();
        Distribution { support, probs }
    }

    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn probs(&self) -> &[Scalar] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

impl Distribution<usize> {
    pub fn uniform(n: usize) -> Self {
        Distribution {
            support: (0..n).collect(),
            probs: vec![1.0 / n as Scalar; n],
        }
    }
}

/// Occurrence counts of bit-identical scalars, in order of first
/// appearance.
pub fn frequency_counts(xs: &[Scalar]) -> Vec<(Scalar, usize)> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut counts: Vec<(Scalar, usize)> = Vec::new();
    for &x in xs {
        let slot = *index.entry(x.to_bits()).or_insert_with(|| {
            counts.push((x, 0));
            counts.len() - 1
        });
        counts[slot].1 += 1;
    }
    counts
}

pub fn frequency_histogram(xs: &[Scalar]) -> Distribution<Scalar> {
    Distribution::from_counts(frequency_counts(xs))
}

pub fn byte_histogram(bytes: &[u8]) -> Distribution<u8> {
    let mut counts = [0usize; 256];
    for &b in bytes {
        counts[b as usize] += 1;
    }
    Distribution::from_counts(
        (0..=255u8)
            .zip(counts)
            .filter(|&(_, c)| c > 0)
            .collect(),
    )
}

/// Frequency analysis of a monoalphabetic ciphertext: ciphertext values
/// are ranked by frequency and mapped onto `ranking`, the expected
/// plaintext codes from most to least frequent. Returns the guessed
/// plaintext; values ranked beyond `ranking` map to `None`.
pub fn frequency_attack(ciphertext: &[Scalar], ranking: &[u8]) -> Vec<Option<u8>> {
    let mut counts = frequency_counts(ciphertext);
    // Stable: ties keep first-appearance order.
    counts.sort_by(|a, b| b.1.cmp(&a.1));
    let guess: HashMap<u64, u8> = counts
        .iter()
        .zip(ranking)
        .map(|((x, _), &c)| (x.to_bits(), c))
        .collect();
    ciphertext.iter().map(|x| guess.get(&x.to_bits()).copied()).collect()
}

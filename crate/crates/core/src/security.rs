//! Entropy, key equivocation and keyspace sizes.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::cryptanalysis::Distribution;
use crate::error::{Error, Result};

/// Per-letter entropy of English in bits.
pub const ENGLISH_LETTER_ENTROPY: f64 = 1.25;

/// Shannon entropy in bits, with `0·log 0 = 0`.
///
/// Terms are summed in sorted order, so relabeling the support cannot
/// change the result.
pub fn entropy<T>(d: &Distribution<T>) -> f64 {
    let mut probs: Vec<f64> = d.probs().iter().copied().filter(|&p| p > 0.0).collect();
    probs.sort_by(f64::total_cmp);
    -probs.iter().map(|&p| p * p.log2()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivocationReport {
    /// H(K)
    pub hk: f64,
    /// H(Pⁿ)
    pub hpn: f64,
    /// H(Cⁿ)
    pub hcn: f64,
    /// H(K|Cⁿ) = H(K) + (H(Pⁿ) − H(Cⁿ))
    pub equivocation: f64,
    /// Lower bound when H(Cⁿ) takes its maximum, i.e. `equivocation` itself
    /// unless the report was built with [`EquivocationReport::with_bound`].
    pub lower_bound: f64,
}

impl EquivocationReport {
    pub fn with_bound(mut self, lower_bound: f64) -> Self {
        self.lower_bound = lower_bound;
        self
    }

    /// Recomputes `hk + (hpn − hcn)`.
    pub fn recomputed(&self) -> f64 {
        self.hk + (self.hpn - self.hcn)
    }
}

impl fmt::Display for EquivocationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<14}{:>14.4} bits", "H(K)", self.hk)?;
        writeln!(f, "{:<14}{:>14.4} bits", "H(P^n)", self.hpn)?;
        writeln!(f, "{:<14}{:>14.4} bits", "H(C^n)", self.hcn)?;
        writeln!(f, "{:<14}{:>14.4} bits", "H(K|C^n)", self.equivocation)?;
        write!(f, "{:<14}{:>14.4} bits", "lower bound", self.lower_bound)
    }
}

pub fn key_equivocation(hk: f64, hpn: f64, hcn: f64) -> Result<EquivocationReport> {
    if [hk, hpn, hcn].iter().any(|&h| !(h >= 0.0 && h.is_finite())) {
        return Err(Error::Precondition("entropies must be finite and nonnegative".into()));
    }
    let equivocation = hk + (hpn - hcn);
    Ok(EquivocationReport {
        hk,
        hpn,
        hcn,
        equivocation,
        lower_bound: equivocation,
    })
}

/// `H(K) + n·H_L − n·log₂|C|`.
pub fn equivocation_lower_bound(hk: f64, n: u64, h_l: f64, cipher_alphabet: u64) -> Result<f64> {
    if cipher_alphabet < 2 {
        return Err(Error::Precondition("cipher alphabet needs at least two symbols".into()));
    }
    let n = n as f64;
    Ok(hk + n * h_l - n * (cipher_alphabet as f64).log2())
}

/// An exact nonnegative integer count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigCount(pub BigUint);

impl BigCount {
    /// `log₂` of the count, accurate to double precision for any size.
    pub fn log2(&self) -> f64 {
        let bits = self.0.bits();
        if bits == 0 {
            return f64::NEG_INFINITY;
        }
        if bits <= 53 {
            return self.0.to_f64().unwrap().log2();
        }
        let shift = bits - 53;
        let top = (&self.0 >> shift).to_f64().unwrap();
        top.log2() + shift as f64
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

/// Prime factorization by trial division, as `(p, k)` pairs.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Number of `n × n` matrices invertible modulo `m`:
/// `Π_i p_i^((k_i−1)n²) · Π_{j<n} (p_iⁿ − p_iʲ)`.
pub fn hill_keyspace(n: u32, m: u64) -> Result<BigCount> {
    if n == 0 || m < 2 {
        return Err(Error::Precondition("need n ≥ 1 and m ≥ 2".into()));
    }
    let mut total = BigUint::one();
    for (p, k) in factorize(m) {
        let p = BigUint::from(p);
        total *= p.pow((k - 1) * n * n);
        let pn = p.pow(n);
        for j in 0..n {
            total *= &pn - p.pow(j);
        }
    }
    Ok(BigCount(total))
}

/// Renders the keyspace as `m^(n²) · Π (1 − 1/pʲ)` together with its exact
/// value.
pub fn describe_hill_keyspace(n: u32, m: u64) -> Result<String> {
    let count = hill_keyspace(n, m)?;
    let factors: Vec<String> = factorize(m)
        .into_iter()
        .flat_map(|(p, _)| (1..=n).map(move |j| if j == 1 { format!("(1-1/{p})") } else { format!("(1-1/{p}^{j})") }))
        .collect();
    Ok(format!(
        "{m}^{} {} = {} (~2^{:.2})",
        n * n,
        factors.join(""),
        count,
        count.log2()
    ))
}

pub fn factorial(n: u64) -> BigCount {
    BigCount((1..=n).fold(BigUint::one(), |acc, k| acc * k))
}

/// `log₂((n/2)!)`, exactly from the big-integer factorial or by the
/// Stirling form `(n/2)·log₂(n/2e) + log₂√(πn)`.
pub fn transposition_uncertainty(n: u64, exact: bool) -> Result<f64> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Precondition(format!("n must be even and at least 2, got {n}")));
    }
    let half = n / 2;
    if exact {
        Ok(factorial(half).log2())
    } else {
        let nf = n as f64;
        let h = half as f64;
        Ok(h * (nf / (2.0 * std::f64::consts::E)).log2() + (std::f64::consts::PI * nf).sqrt().log2())
    }
}

/// `k·log₂10` for a keyword of `k` decimal digits.
pub fn vigenere_uncertainty(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("keyword length must be at least 1".into()));
    }
    Ok(k as f64 * 10f64.log2())
}

/// Transposition plus Vigenère uncertainty; the first stage contributes
/// nothing because it is monoalphabetic.
pub fn product_gained_uncertainty(n: u64, k: u64) -> Result<f64> {
    Ok(transposition_uncertainty(n, true)? + vigenere_uncertainty(k)?)
}

//! Diffusion stages: byte transpositions over serialized ciphertext and the
//! real-valued Vigenère stage over scalars.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const PAD_BYTE: u8 = b' ';

/// Riffle interleave of the two halves of `text`.
///
/// Odd-length input is first padded with one space. With halves `H1` and
/// `H2` the output is `H1[0] H2[0] H1[1] H2[1] …`.
pub fn transpose_halving(text: &[u8]) -> Vec<u8> {
    let mut padded;
    let text = if text.len() % 2 == 1 {
        padded = text.to_vec();
        padded.push(PAD_BYTE);
        &padded[..]
    } else {
        text
    };
    let (h1, h2) = text.split_at(text.len() / 2);
    h1.iter().zip(h2).flat_map(|(&a, &b)| [a, b]).collect()
}

/// Undoes [`transpose_halving`]: even positions form the first half, odd
/// positions the second.
pub fn inverse_transpose_halving(text: &[u8]) -> Result<Vec<u8>> {
    if text.len() % 2 == 1 {
        return Err(Error::Parse {
            token: format!("<{} bytes>", text.len()),
            reason: "transposed text must have even length".into(),
        });
    }
    let mut out = Vec::with_capacity(text.len());
    out.extend(text.iter().step_by(2));
    out.extend(text.iter().skip(1).step_by(2));
    Ok(out)
}

/// A permutation `π` of `[0, m)` applied to every `m`-byte block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyedBlockPermutation {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl KeyedBlockPermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let m = perm.len();
        if m == 0 {
            return Err(Error::InvalidKey("permutation must be nonempty".into()));
        }
        let mut inverse = vec![usize::MAX; m];
        for (j, &p) in perm.iter().enumerate() {
            if p >= m || inverse[p] != usize::MAX {
                return Err(Error::InvalidKey(format!(
                    "{perm:?} is not a permutation of 0..{m}"
                )));
            }
            inverse[p] = j;
        }
        Ok(KeyedBlockPermutation { perm, inverse })
    }

    pub fn block_size(&self) -> usize {
        self.perm.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }
}

/// Pads with spaces to a multiple of `m`, then `out[j] = block[π[j]]` in
/// every block.
pub fn keyed_block_transpose(text: &[u8], key: &KeyedBlockPermutation) -> Vec<u8> {
    let m = key.block_size();
    let mut padded = text.to_vec();
    padded.resize(text.len().div_ceil(m) * m, PAD_BYTE);
    permute_blocks(&padded, &key.perm)
}

pub fn inverse_keyed_block_transpose(text: &[u8], key: &KeyedBlockPermutation) -> Result<Vec<u8>> {
    let m = key.block_size();
    if text.len() % m != 0 {
        return Err(Error::Parse {
            token: format!("<{} bytes>", text.len()),
            reason: format!("transposed text must be a multiple of {m} bytes"),
        });
    }
    Ok(permute_blocks(text, &key.inverse))
}

fn permute_blocks(text: &[u8], perm: &[usize]) -> Vec<u8> {
    text.chunks_exact(perm.len())
        .flat_map(|block| perm.iter().map(move |&p| block[p]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranspositionSpec {
    Halving,
    Keyed(KeyedBlockPermutation),
}

impl TranspositionSpec {
    pub fn apply(&self, text: &[u8]) -> Vec<u8> {
        match self {
            TranspositionSpec::Halving => transpose_halving(text),
            TranspositionSpec::Keyed(k) => keyed_block_transpose(text, k),
        }
    }

    pub fn invert(&self, text: &[u8]) -> Result<Vec<u8>> {
        match self {
            TranspositionSpec::Halving => inverse_transpose_halving(text),
            TranspositionSpec::Keyed(k) => inverse_keyed_block_transpose(text, k),
        }
    }
}

/// Keyword of reals added position-wise, wrapping modulo its length.
#[derive(Debug, Clone, PartialEq)]
pub struct VigenereKey {
    keyword: Vec<Scalar>,
}

impl VigenereKey {
    pub fn new(keyword: Vec<Scalar>) -> Result<Self> {
        if keyword.is_empty() {
            return Err(Error::InvalidKey("keyword must be nonempty".into()));
        }
        if keyword.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidKey("keyword entries must be finite".into()));
        }
        Ok(VigenereKey { keyword })
    }

    pub fn keyword(&self) -> &[Scalar] {
        &self.keyword
    }

    pub fn len(&self) -> usize {
        self.keyword.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keyword.is_empty()
    }
}

/// Seeded keyword of `len` reals drawn uniformly from `[0, magnitude)`.
pub fn keygen_keyword(len: usize, seed: u64, magnitude: Scalar) -> Result<VigenereKey> {
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(Error::Keygen(format!("magnitude must be positive, got {magnitude}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VigenereKey::new((0..len).map(|_| rng.gen_range(0.0..magnitude)).collect())
}

/// Seeded uniformly random permutation of `[0, m)`.
pub fn keygen_permutation(m: usize, seed: u64) -> Result<KeyedBlockPermutation> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    KeyedBlockPermutation::new(perm)
}

/// `y_i = x_i + keyword[i mod k]`.
pub fn vigenere_encrypt(xs: &[Scalar], key: &VigenereKey) -> Vec<Scalar> {
    xs.iter()
        .zip(key.keyword.iter().cycle())
        .map(|(x, k)| x + k)
        .collect()
}

/// `x_i = y_i − keyword[i mod k]`.
pub fn vigenere_decrypt(ys: &[Scalar], key: &VigenereKey) -> Vec<Scalar> {
    ys.iter()
        .zip(key.keyword.iter().cycle())
        .map(|(y, k)| y - k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn halving_examples() {
        assert_eq!(transpose_halving(b"ABCD"), b"ACBD");
        assert_eq!(transpose_halving(b"ABC"), b"ACB ");
        assert_eq!(transpose_halving(b""), b"");
        assert_eq!(inverse_transpose_halving(b"ACBD").unwrap(), b"ABCD");
        assert!(inverse_transpose_halving(b"ABC").is_err());
    }

    #[test]
    fn keyed_examples() {
        let swap = KeyedBlockPermutation::new(vec![1, 0]).unwrap();
        assert_eq!(keyed_block_transpose(b"ABCD", &swap), b"BADC");
        assert_eq!(keyed_block_transpose(b"ABC", &swap), b"BA C");
        let id = KeyedBlockPermutation::new(vec![0, 1, 2]).unwrap();
        assert_eq!(keyed_block_transpose(b"ABCDEF", &id), b"ABCDEF");
        assert!(inverse_keyed_block_transpose(b"ABCD", &id).is_err());
        assert!(KeyedBlockPermutation::new(vec![0, 0]).is_err());
        assert!(KeyedBlockPermutation::new(vec![0, 2]).is_err());
        assert!(KeyedBlockPermutation::new(vec![]).is_err());
    }

    #[test]
    fn block_of_three_has_six_distinct_outputs() {
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let outputs: HashSet<Vec<u8>> = perms
            .iter()
            .map(|p| keyed_block_transpose(b"xyzuvw", &KeyedBlockPermutation::new(p.to_vec()).unwrap()))
            .collect();
        assert_eq!(outputs.len(), 6);
    }

    #[test]
    fn vigenere_wraps_keyword() {
        let key = VigenereKey::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(vigenere_encrypt(&[0.0, 0.0, 0.0], &key), vec![1.0, 2.0, 1.0]);
        assert_eq!(vigenere_decrypt(&[1.0, 2.0, 1.0], &key), vec![0.0, 0.0, 0.0]);
        let zero = VigenereKey::new(vec![0.0; 4]).unwrap();
        let xs = [1.5, -2.25, 3.0];
        assert_eq!(vigenere_encrypt(&xs, &zero), xs);
        assert_eq!(vigenere_decrypt(&xs, &zero), xs);
        assert!(VigenereKey::new(vec![]).is_err());
        assert!(VigenereKey::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn seeded_keys_are_reproducible() {
        assert_eq!(keygen_keyword(10, 3, 10.0).unwrap(), keygen_keyword(10, 3, 10.0).unwrap());
        assert_ne!(keygen_keyword(10, 3, 10.0).unwrap(), keygen_keyword(10, 4, 10.0).unwrap());
        assert!(keygen_keyword(10, 3, 10.0).unwrap().keyword().iter().all(|&k| (0.0..10.0).contains(&k)));
        assert!(keygen_keyword(0, 3, 10.0).is_err());
        let p = keygen_permutation(8, 9).unwrap();
        assert_eq!(p, keygen_permutation(8, 9).unwrap());
        let mut sorted = p.permutation().to_vec();
        sorted.sort();
        assert_eq!(sorted, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn congruent_positions_share_a_shift() {
        let key = VigenereKey::new((0..10).map(|i| i as f64 + 0.5).collect()).unwrap();
        let xs = vec![0.75; 11];
        let ys = vigenere_encrypt(&xs, &key);
        assert_eq!(ys[0], ys[10]);
        assert_ne!(ys[0], ys[1]);
    }

    proptest! {
        #[test]
        fn halving_round_trip(text in proptest::collection::vec(any::<u8>(), 0..2048)) {
            let t = transpose_halving(&text);
            prop_assert_eq!(t.len() % 2, 0);
            let mut padded = text.clone();
            if padded.len() % 2 == 1 {
                padded.push(b' ');
            }
            prop_assert_eq!(inverse_transpose_halving(&t).unwrap(), padded.clone());
            prop_assert_eq!(transpose_halving(&inverse_transpose_halving(&padded).unwrap()), padded);
        }

        #[test]
        fn keyed_round_trip(
            perm in (1usize..9).prop_flat_map(|m| Just((0..m).collect::<Vec<_>>()).prop_shuffle()),
            text in proptest::collection::vec(any::<u8>(), 0..512),
        ) {
            let key = KeyedBlockPermutation::new(perm).unwrap();
            let m = key.block_size();
            let back = inverse_keyed_block_transpose(&keyed_block_transpose(&text, &key), &key).unwrap();
            prop_assert_eq!(back.len(), text.len().div_ceil(m) * m);
            prop_assert_eq!(&back[..text.len()], &text[..]);
            prop_assert!(back[text.len()..].iter().all(|&b| b == b' '));
        }

        #[test]
        fn vigenere_round_trip_within_one_rounding(
            xs in proptest::collection::vec(-1e6f64..1e6, 0..64),
            kw in proptest::collection::vec(-1e3f64..1e3, 1..12),
        ) {
            let key = VigenereKey::new(kw).unwrap();
            let ys = vigenere_encrypt(&xs, &key);
            let back = vigenere_decrypt(&ys, &key);
            for ((x, y), b) in xs.iter().zip(&ys).zip(&back) {
                // Each of the two additions rounds once.
                let bound = f64::EPSILON * (x.abs() + y.abs());
                prop_assert!((x - b).abs() <= bound, "x={x} back={b}");
            }
        }
    }
}

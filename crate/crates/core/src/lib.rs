//! Ciphers whose ciphertext is a stream of real numbers.
//!
//! A plaintext byte block is substituted either by solving a system of
//! linear equations or by finding a root of a nonlinear key function. The
//! resulting reals can be shifted by a real-valued keyword, are written as
//! fixed-point decimals, and the text may then be transposed.
//!
//! ```
//! use realcipher::{decrypt_pipeline, encrypt_pipeline, presets};
//!
//! let p = presets::demo_nonlinear_pipeline().unwrap();
//! let ct = encrypt_pipeline(&p, b"We are the champs").unwrap();
//! assert_eq!(decrypt_pipeline(&p, &ct).unwrap(), b"We are the champs");
//! ```

pub mod bench;
pub mod classical;
pub mod cryptanalysis;
mod error;
pub mod keyfile;
pub mod linalg;
pub mod linear;
pub mod nonlinear;
pub mod pipeline;
pub mod presets;
pub mod scalar;
pub mod security;

pub use classical::{
    inverse_keyed_block_transpose, inverse_transpose_halving, keyed_block_transpose,
    transpose_halving, vigenere_decrypt, vigenere_encrypt, KeyedBlockPermutation,
    TranspositionSpec, VigenereKey,
};
pub use cryptanalysis::{
    byte_histogram, frequency_attack, frequency_counts, frequency_histogram, interpolate_key,
    kpa_linear, Distribution, KnownPairs,
};
pub use error::{Error, Result};
pub use keyfile::{parse_key_file, write_key_file};
pub use linalg::Matrix;
pub use linear::{decrypt_linear, encrypt_linear, keygen_linear, LinearKey};
pub use nonlinear::{
    bisection_solve, decrypt_nonlinear, encrypt_nonlinear, secant_solve, validate_key,
    KeyFunction, NonlinearKey, SolverConfig, SolverMethod,
};
pub use pipeline::{
    decrypt_pipeline, encrypt_pipeline, parse_ciphertext, serialize_ciphertext, Pipeline, Stage,
};
pub use scalar::{format_scalar, parse_scalar, round_to_code, FormatSpec, Real, Scalar};
pub use security::{
    entropy, equivocation_lower_bound, hill_keyspace, key_equivocation,
    product_gained_uncertainty, transposition_uncertainty, vigenere_uncertainty, BigCount,
};

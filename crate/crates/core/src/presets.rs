//! Ready-made keys used by the demo pipelines, the CLI and the tests.

use crate::classical::{TranspositionSpec, VigenereKey};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::linear::LinearKey;
use crate::nonlinear::{KeyFunction, NonlinearKey, SolverConfig};
use crate::pipeline::{Pipeline, Stage};
use crate::scalar::Scalar;

/// Quintic `x⁵ + 7.34x⁴ + 22.03x³ + 46.012x² + 12.25x − 1`, increasing on `[0, 2]`.
pub const QUINTIC_COEFFS: [Scalar; 6] = [1.0, 7.34, 22.03, 46.012, 12.25, -1.0];

pub const QUINTIC_INTERVAL: (Scalar, Scalar) = (0.0, 2.0);

/// Exponent `x² − x/2` of the base-2 key function.
pub const EXP2_PARAMS: (Scalar, Scalar, Scalar) = (1.0, -0.5, 0.0);

pub const EXP2_INTERVAL: (Scalar, Scalar) = (0.0, 4.0);

pub const EXP2_SEEDS: (Scalar, Scalar) = (2.0, 3.0);

/// Ten-entry real keyword for the Vigenère stage.
pub const DEMO_KEYWORD: [Scalar; 10] = [
    8.27409124359,
    3.44876404589,
    2.84907100186,
    1.27800971542,
    4.90898111008,
    5.46406511234,
    0.21409875231,
    7.19061419871,
    2.38408754321,
    3.12908182363,
];

/// Matrix that maps a shifted block to its ciphertext, `y = M·(x − b)`.
/// The decryption key is its inverse.
pub const DEMO_ENCRYPTION_MATRIX: [[Scalar; 10]; 10] = [
    [1.0, -1.0, -5.0, 0.5, -20.0, 0.0, 0.4, 10.0, 0.25, 86.0],
    [3.0, -1.0, 0.0, 2.0, -3.0, -12.0, 52.0, 1.0, 0.0, -0.1],
    [0.0, 23.0, 9.0, 9.0, 3.0, 34.0, -14.0, 7.0, 9.0, -8.0],
    [1.0, -9.0, 67.0, -2.0, -5.0, 8.0, 20.0, 2.0, 0.1, 45.0],
    [-2.0, 23.0, 0.0, 9.0, 0.0, 34.0, 0.12, 4.0, 3.0, -4.0],
    [0.4, 11.0, 1.0, 0.0, 1.0, 0.0, 0.15, -0.8, 89.0, -1.0],
    [20.0, 0.2, -15.0, 23.0, -2.0, 1.0, -10.0, 9.0, 23.0, 0.45],
    [0.5, -3.0, 0.1, -30.0, -0.8, -3.0, -12.0, 12.0, -11.0, 0.30],
    [-1.0, -2.0, 2.0, 21.0, 9.0, -0.5, 35.0, -3.0, -0.1, -1.0],
    [3.0, 0.0, -1.0, -0.1, 11.0, 0.0, -2.0, 7.0, 9.0, 0.8],
];

pub const DEMO_OFFSET: [Scalar; 10] = [-10.0, 2.0, 27.0, -1.0, 90.0, 0.2, -4.0, 12.0, 30.0, -0.5];

pub fn quintic_key() -> NonlinearKey {
    let f = KeyFunction::polynomial(QUINTIC_COEFFS.to_vec()).expect("valid coefficients");
    NonlinearKey::new(f, SolverConfig::bisection(QUINTIC_INTERVAL.0, QUINTIC_INTERVAL.1))
        .expect("valid solver")
}

pub fn exp2_key() -> NonlinearKey {
    let (a, b, g) = EXP2_PARAMS;
    let f = KeyFunction::exp2_quadratic(a, b, g).expect("valid parameters");
    let cfg = SolverConfig::secant(EXP2_INTERVAL.0, EXP2_INTERVAL.1, EXP2_SEEDS.0, EXP2_SEEDS.1);
    NonlinearKey::new(f, cfg).expect("valid solver")
}

pub fn demo_keyword() -> VigenereKey {
    VigenereKey::new(DEMO_KEYWORD.to_vec()).expect("finite keyword")
}

pub fn demo_linear_key() -> Result<LinearKey> {
    let rows: Vec<Vec<Scalar>> = DEMO_ENCRYPTION_MATRIX.iter().map(|r| r.to_vec()).collect();
    LinearKey::from_encryption_matrix(Matrix::from_rows(&rows)?, DEMO_OFFSET.to_vec())
}

/// Ten-dimensional linear substitution followed by the halving transposition.
pub fn demo_linear_pipeline() -> Result<Pipeline> {
    Pipeline::with_default_format(vec![
        Stage::Linear(demo_linear_key()?),
        Stage::Transpose(TranspositionSpec::Halving),
    ])
}

/// Quintic substitution, keyword shift, then the halving transposition.
pub fn demo_nonlinear_pipeline() -> Result<Pipeline> {
    Pipeline::with_default_format(vec![
        Stage::Nonlinear(quintic_key()),
        Stage::Vigenere(demo_keyword()),
        Stage::Transpose(TranspositionSpec::Halving),
    ])
}

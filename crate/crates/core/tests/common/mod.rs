#![allow(dead_code)]

/// Three-digit ascii codes of the demo plaintext as printed.
pub const ASCII_STREAM: &str = "087101032097114101032116104101032099104097109112115013010013010032";

/// The twenty codes the printed ciphertexts cover.
pub fn plaintext() -> Vec<u8> {
    let codes: Vec<u8> = ASCII_STREAM
        .as_bytes()
        .chunks(3)
        .map(|c| std::str::from_utf8(c).unwrap().parse().unwrap())
        .collect();
    codes[..20].to_vec()
}

/// Linear-stage ciphertext under the ten-dimensional demo key.
pub const LINEAR_CIPHERTEXT: [f64; 20] = [
    -9343.900391, -1072.250000, -6781.200195, -5534.299805, -6628.520020, -7563.500000,
    -6515.274414, 3477.149902, -2777.700195, -1943.399902, -442.599976, -5014.049805,
    -5717.200195, -7918.899902, -6734.479980, 596.650024, -397.275085, 4744.850098,
    -6241.600098, 152.000000,
];

/// Reals recovered by substituting the linear ciphertext back, before
/// rounding.
pub const LINEAR_RECOVERED: [f64; 20] = [
    87.000114, 101.000092, 32.000019, 97.000038, 113.999611, 100.999565, 31.999895,
    116.000237, 104.000084, 100.999886, 32.000282, 99.000137, 103.999985, 97.000183,
    108.999832, 111.999611, 114.999886, 13.000096, 10.000035, 12.999951,
];

/// Quintic-key roots of the twenty codes.
pub const QUINTIC_ROOTS: [f64; 20] = [
    0.996905152715, 1.062095760863, 0.632444388903, 1.044151171664, 1.117163734307,
    1.062095760863, 0.632444388903, 1.125235020154, 1.075229083508, 1.062095760863,
    0.632444388903, 1.053187075449, 1.075229083508, 1.044151171664, 1.096536606346,
    1.108991331275, 1.121211836726, 0.402103486558, 0.350298562407, 0.402103486558,
];

/// Roots after the keyword shift.
pub const SHIFTED_ROOTS: [f64; 20] = [
    9.270995914936, 4.510859847069, 3.481515407562, 2.322160959244, 6.026145100594,
    6.526160836220, 0.846543133259, 8.315849184990, 3.459316611290, 4.191177487373,
    8.906535148621, 4.501951217651, 3.924300074577, 2.322160959244, 6.005517959595,
    6.573056459427, 1.335310637951, 7.592717707157, 2.734386116266, 3.531185209751,
];

/// Secant roots of `2^(x² − x/2) = c` for "epic".
pub const EXP2_EPIC_ROOTS: [f64; 4] = [2.842433505, 2.871040808, 2.853218300, 2.836862311];

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

//! Product ciphers built from one substitution stage, optional Vigenère
//! stages and optional byte transpositions.
//!
//! Encryption runs the scalar stages, serializes the scalars to
//! fixed-decimal tokens and then applies the transpositions to the bytes.
//! Decryption runs the inverses in reverse order. Serialization is the only
//! lossy step; [`Pipeline::new`] rejects configurations where that loss,
//! amplified by the substitution inverse, could reach the rounding
//! tolerance.

use crate::classical::{vigenere_decrypt, vigenere_encrypt, TranspositionSpec, VigenereKey, PAD_BYTE};
use crate::error::{Error, Result};
use crate::linear::{decrypt_linear, encrypt_linear, substitute_linear, LinearKey};
use crate::nonlinear::{decrypt_nonlinear, encrypt_nonlinear, substitute_nonlinear, NonlinearKey};
use crate::scalar::{parse_scalar, write_scalar, FormatSpec, Scalar};

/// Fractional digits used for linear-substitution ciphertext by default.
pub const LINEAR_DIGITS: usize = 6;

/// Fractional digits used for root-finding ciphertext by default.
pub const NONLINEAR_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Stage {
    Linear(LinearKey),
    Nonlinear(NonlinearKey),
    Vigenere(VigenereKey),
    Transpose(TranspositionSpec),
}

impl Stage {
    pub fn kind(&self) -> &'static str {
        match self {
            Stage::Linear(_) => "linear",
            Stage::Nonlinear(_) => "nonlinear",
            Stage::Vigenere(_) => "vigenere",
            Stage::Transpose(_) => "transpose",
        }
    }

    fn is_substitution(&self) -> bool {
        matches!(self, Stage::Linear(_) | Stage::Nonlinear(_))
    }

    /// Default serialization for a pipeline starting with this stage.
    pub fn default_format(&self) -> FormatSpec {
        let digits = match self {
            Stage::Nonlinear(_) => NONLINEAR_DIGITS,
            _ => LINEAR_DIGITS,
        };
        FormatSpec::with_digits(digits).expect("default digits are valid")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    stages: Vec<Stage>,
    format: FormatSpec,
}

impl Pipeline {
    pub fn new(stages: Vec<Stage>, format: FormatSpec) -> Result<Self> {
        let Some(first) = stages.first() else {
            return Err(Error::InvalidKey("pipeline has no stages".into()));
        };
        if !first.is_substitution() {
            return Err(Error::InvalidKey(format!(
                "first stage must be a substitution, got {}",
                first.kind()
            )));
        }
        let mut seen_transpose = false;
        for (i, stage) in stages.iter().enumerate().skip(1) {
            match stage {
                Stage::Linear(_) | Stage::Nonlinear(_) => {
                    return Err(Error::InvalidKey(format!(
                        "stage {i}: only one substitution stage is allowed"
                    )))
                }
                Stage::Vigenere(_) if seen_transpose => {
                    return Err(Error::InvalidKey(format!(
                        "stage {i}: vigenere must precede every transposition"
                    )))
                }
                Stage::Vigenere(_) => {}
                Stage::Transpose(_) => seen_transpose = true,
            }
        }
        let pipeline = Pipeline { stages, format };
        pipeline.check_precision_budget()?;
        Ok(pipeline)
    }

    /// A pipeline using the default serialization for its substitution.
    pub fn with_default_format(stages: Vec<Stage>) -> Result<Self> {
        let format = stages
            .first()
            .map(Stage::default_format)
            .ok_or_else(|| Error::InvalidKey("pipeline has no stages".into()))?;
        Self::new(stages, format)
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn format(&self) -> &FormatSpec {
        &self.format
    }

    /// Worst-case deviation of a decrypted real caused by serialization.
    pub fn serialization_drift(&self) -> Scalar {
        let q = self.format.quantization();
        match &self.stages[0] {
            Stage::Linear(key) => key.matrix().norm_inf() * q,
            Stage::Nonlinear(key) => key.max_slope() * q,
            _ => unreachable!("validated at construction"),
        }
    }

    fn decrypt_tol(&self) -> Scalar {
        match &self.stages[0] {
            Stage::Linear(key) => key.decrypt_tol(),
            Stage::Nonlinear(key) => key.decrypt_tol(),
            _ => unreachable!("validated at construction"),
        }
    }

    fn check_precision_budget(&self) -> Result<()> {
        let drift = self.serialization_drift();
        let budget = 0.5 * self.decrypt_tol();
        if !(drift <= budget) {
            return Err(Error::InvalidKey(format!(
                "{} fractional digits allow a decryption drift of {drift:e}, above the budget {budget}; \
                 use more digits",
                self.format.fractional_digits()
            )));
        }
        Ok(())
    }

    /// Index of the first byte-level stage, i.e. the serialization boundary.
    fn boundary(&self) -> usize {
        self.stages
            .iter()
            .position(|s| matches!(s, Stage::Transpose(_)))
            .unwrap_or(self.stages.len())
    }
}

/// Joins fixed-decimal tokens with the separator byte.
pub fn serialize_ciphertext(xs: &[Scalar], fmt: &FormatSpec) -> Result<Vec<u8>> {
    let mut out = String::with_capacity(xs.len() * (fmt.fractional_digits() + 8));
    let sep = fmt.separator() as char;
    for (i, &x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(sep);
        }
        write_scalar(&mut out, x, fmt).map_err(|e| e.at(i))?;
    }
    Ok(out.into_bytes())
}

/// Splits on the separator and parses each token. Trailing pad spaces left
/// by transpositions are ignored.
pub fn parse_ciphertext(text: &[u8], fmt: &FormatSpec) -> Result<Vec<Scalar>> {
    let end = text.iter().rposition(|&b| b != PAD_BYTE).map_or(0, |p| p + 1);
    let text = &text[..end];
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(|&b| b == fmt.separator())
        .enumerate()
        .map(|(i, token)| {
            let token = std::str::from_utf8(token).map_err(|_| {
                Error::Parse {
                    token: String::from_utf8_lossy(token).into_owned(),
                    reason: "not ASCII".into(),
                }
                .at(i)
            })?;
            parse_scalar(token).map_err(|e| e.at(i))
        })
        .collect()
}

pub fn encrypt_pipeline(p: &Pipeline, plaintext: &[u8]) -> Result<Vec<u8>> {
    let mut scalars = match &p.stages[0] {
        Stage::Linear(key) => encrypt_linear(key, plaintext),
        Stage::Nonlinear(key) => encrypt_nonlinear(key, plaintext).map_err(|e| e.in_stage(0))?,
        _ => unreachable!("validated at construction"),
    };
    let boundary = p.boundary();
    for stage in &p.stages[1..boundary] {
        if let Stage::Vigenere(key) = stage {
            scalars = vigenere_encrypt(&scalars, key);
        }
    }
    let mut bytes = serialize_ciphertext(&scalars, &p.format).map_err(|e| e.in_stage(boundary))?;
    for stage in &p.stages[boundary..] {
        if let Stage::Transpose(spec) = stage {
            bytes = spec.apply(&bytes);
        }
    }
    Ok(bytes)
}

/// Undoes every stage except the substitution, returning its ciphertext
/// scalars.
fn peel(p: &Pipeline, text: &[u8]) -> Result<Vec<Scalar>> {
    let boundary = p.boundary();
    let mut bytes = text.to_vec();
    for (i, stage) in p.stages.iter().enumerate().skip(boundary).rev() {
        if let Stage::Transpose(spec) = stage {
            trim_later_padding(spec, &mut bytes);
            bytes = spec.invert(&bytes).map_err(|e| e.in_stage(i))?;
        }
    }
    let mut scalars = parse_ciphertext(&bytes, &p.format).map_err(|e| e.in_stage(boundary))?;
    for stage in p.stages[1..boundary].iter().rev() {
        if let Stage::Vigenere(key) = stage {
            scalars = vigenere_decrypt(&scalars, key);
        }
    }
    Ok(scalars)
}

/// A later transposition may have appended pad bytes that leave the text
/// misaligned for this one; they sit at the end once that stage is undone.
fn trim_later_padding(spec: &TranspositionSpec, bytes: &mut Vec<u8>) {
    let unit = match spec {
        TranspositionSpec::Halving => 2,
        TranspositionSpec::Keyed(k) => k.block_size(),
    };
    let excess = bytes.len() % unit;
    if bytes[bytes.len() - excess..].iter().all(|&b| b == PAD_BYTE) {
        bytes.truncate(bytes.len() - excess);
    }
}

/// Decrypts to byte codes; padding added during encryption is retained.
pub fn decrypt_pipeline(p: &Pipeline, text: &[u8]) -> Result<Vec<u8>> {
    let scalars = peel(p, text)?;
    match &p.stages[0] {
        Stage::Linear(key) => decrypt_linear(key, &scalars),
        Stage::Nonlinear(key) => decrypt_nonlinear(key, &scalars),
        _ => unreachable!("validated at construction"),
    }
    .map_err(|e| e.in_stage(0))
}

/// Like [`decrypt_pipeline`] but stops before rounding, returning the
/// recovered real codes.
pub fn decrypt_pipeline_reals(p: &Pipeline, text: &[u8]) -> Result<Vec<Scalar>> {
    let scalars = peel(p, text)?;
    match &p.stages[0] {
        Stage::Linear(key) => substitute_linear(key, &scalars),
        Stage::Nonlinear(key) => substitute_nonlinear(key, &scalars),
        _ => unreachable!("validated at construction"),
    }
    .map_err(|e| e.in_stage(0))
}

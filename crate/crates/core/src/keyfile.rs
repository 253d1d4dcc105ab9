//! Plain-text key files.
//!
//! ```text
//! realcipher-key v1
//! format digits 6 separator 32
//! stage linear
//! n 2
//! a 2 3
//! a 1 4
//! b 0 0
//! stage transpose halving
//! ```
//!
//! Each `stage` line opens a block; the lines that follow set its fields.
//! A linear block gives either `a` (decryption) or `a_inv` (encryption)
//! rows. A nonlinear block has a `function` line (`polynomial c…`,
//! `exp2 α β γ` or `newton` followed by `nodes …` and `coeffs …` lines) and
//! optional solver settings. `#` starts a comment.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::classical::{KeyedBlockPermutation, TranspositionSpec, VigenereKey};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::linear::LinearKey;
use crate::nonlinear::{KeyFunction, NonlinearKey, SolverConfig, SolverMethod};
use crate::pipeline::{Pipeline, Stage};
use crate::scalar::{FormatSpec, Scalar, DEFAULT_DECRYPT_TOL};

pub const MAGIC: &str = "realcipher-key v1";

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Renders a pipeline as a key file. Reals use the shortest representation
/// that parses back to the same value.
pub fn write_key_file(p: &Pipeline) -> String {
    let mut out = String::new();
    let fmt = p.format();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(
        out,
        "format digits {} separator {}",
        fmt.fractional_digits(),
        fmt.separator()
    )
    .unwrap();
    for stage in p.stages() {
        writeln!(out, "stage {}", stage.kind()).unwrap();
        match stage {
            Stage::Linear(key) => {
                writeln!(out, "n {}", key.n()).unwrap();
                for row in key.matrix().to_rows() {
                    writeln!(out, "a {}", join(&row)).unwrap();
                }
                writeln!(out, "b {}", join(key.offset())).unwrap();
                writeln!(out, "decrypt_tol {}", key.decrypt_tol()).unwrap();
            }
            Stage::Nonlinear(key) => {
                match key.function() {
                    KeyFunction::Polynomial { coeffs } => {
                        writeln!(out, "function polynomial {}", join(coeffs)).unwrap()
                    }
                    KeyFunction::Exp2Quadratic { alpha, beta, gamma } => {
                        writeln!(out, "function exp2 {alpha} {beta} {gamma}").unwrap()
                    }
                    KeyFunction::Newton { nodes, coeffs } => {
                        writeln!(out, "function newton").unwrap();
                        writeln!(out, "nodes {}", join(nodes)).unwrap();
                        writeln!(out, "coeffs {}", join(coeffs)).unwrap();
                    }
                }
                let s = key.solver();
                let method = match s.method {
                    SolverMethod::Bisection => "bisection",
                    SolverMethod::Secant => "secant",
                };
                writeln!(out, "method {method}").unwrap();
                writeln!(out, "interval {} {}", s.lo, s.hi).unwrap();
                writeln!(out, "seeds {} {}", s.seeds.0, s.seeds.1).unwrap();
                writeln!(out, "tol {}", s.tol).unwrap();
                writeln!(out, "max_iter {}", s.max_iter).unwrap();
                writeln!(out, "scan_steps {}", s.scan_steps).unwrap();
                writeln!(out, "decrypt_tol {}", key.decrypt_tol()).unwrap();
            }
            Stage::Vigenere(key) => writeln!(out, "keyword {}", join(key.keyword())).unwrap(),
            Stage::Transpose(TranspositionSpec::Halving) => {
                // `stage transpose` line is completed in place
                out.truncate(out.len() - 1);
                out.push_str(" halving\n");
            }
            Stage::Transpose(TranspositionSpec::Keyed(k)) => {
                out.truncate(out.len() - 1);
                writeln!(out, " keyed {}", join(k.permutation())).unwrap();
            }
        }
    }
    out
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    args: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::KeyFile {
            line: self.number,
            reason: reason.into(),
        }
    }

    fn values<T: FromStr>(&self) -> Result<Vec<T>> {
        self.args
            .iter()
            .map(|a| {
                a.parse::<T>()
                    .map_err(|_| self.err(format!("cannot parse {a:?} in `{}`", self.key)))
            })
            .collect()
    }

    fn exactly<T: FromStr>(&self, count: usize) -> Result<Vec<T>> {
        if self.args.len() != count {
            return Err(self.err(format!(
                "`{}` takes {count} value(s), got {}",
                self.key,
                self.args.len()
            )));
        }
        self.values()
    }

    fn one<T: FromStr>(&self) -> Result<T> {
        Ok(self.exactly::<T>(1)?.remove(0))
    }
}

struct Block<'a> {
    header: Line<'a>,
    body: Vec<Line<'a>>,
}

impl<'a> Block<'a> {
    fn find(&self, key: &str) -> Result<Option<&Line<'a>>> {
        let mut hits = self.body.iter().filter(|l| l.key == key);
        let first = hits.next();
        if let Some(dup) = hits.next() {
            return Err(dup.err(format!("duplicate `{key}`")));
        }
        Ok(first)
    }

    fn require(&self, key: &str) -> Result<&Line<'a>> {
        self.find(key)?
            .ok_or_else(|| self.header.err(format!("stage is missing `{key}`")))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.body.iter().find(|l| !allowed.contains(&l.key)) {
            Some(l) => Err(l.err(format!("unexpected `{}` in {} stage", l.key, self.header.args[0]))),
            None => Ok(()),
        }
    }
}

fn real_row(line: &Line, len: usize) -> Result<Vec<Scalar>> {
    let row: Vec<Scalar> = line.exactly(len)?;
    if row.iter().any(|v| !v.is_finite()) {
        return Err(line.err("values must be finite"));
    }
    Ok(row)
}

fn decrypt_tol(block: &Block) -> Result<Scalar> {
    block
        .find("decrypt_tol")?
        .map_or(Ok(DEFAULT_DECRYPT_TOL), |l| l.one())
}

fn build_linear(block: &Block) -> Result<Stage> {
    block.check_keys(&["n", "a", "a_inv", "b", "decrypt_tol"])?;
    let n_line = block.require("n")?;
    let n: usize = n_line.one()?;
    let a_rows: Vec<&Line> = block.body.iter().filter(|l| l.key == "a").collect();
    let inv_rows: Vec<&Line> = block.body.iter().filter(|l| l.key == "a_inv").collect();
    let (rows, encryption) = match (a_rows.is_empty(), inv_rows.is_empty()) {
        (false, true) => (a_rows, false),
        (true, false) => (inv_rows, true),
        _ => return Err(block.header.err("give exactly one of `a` or `a_inv` rows")),
    };
    if rows.len() != n {
        return Err(block.header.err(format!("expected {n} matrix rows, got {}", rows.len())));
    }
    let rows = rows
        .iter()
        .map(|l| real_row(l, n))
        .collect::<Result<Vec<_>>>()?;
    let b_line = block.require("b")?;
    let b = real_row(b_line, n)?;
    let m = Matrix::from_rows(&rows).map_err(|e| block.header.err(e.to_string()))?;
    let key = if encryption {
        LinearKey::from_encryption_matrix(m, b)
    } else {
        LinearKey::new(m, b)
    };
    let key = key
        .and_then(|k| k.with_decrypt_tol(decrypt_tol(block)?))
        .map_err(|e| block.header.err(e.to_string()))?;
    Ok(Stage::Linear(key))
}

fn build_nonlinear(block: &Block) -> Result<Stage> {
    block.check_keys(&[
        "function",
        "nodes",
        "coeffs",
        "method",
        "interval",
        "seeds",
        "tol",
        "max_iter",
        "scan_steps",
        "decrypt_tol",
    ])?;
    let fl = block.require("function")?;
    let kind = fl.args.first().copied().unwrap_or("");
    let rest = Line {
        number: fl.number,
        key: kind,
        args: fl.args.iter().skip(1).copied().collect(),
    };
    let f = match kind {
        "polynomial" => KeyFunction::polynomial(rest.values()?),
        "exp2" => {
            let p: Vec<Scalar> = rest.exactly(3)?;
            KeyFunction::exp2_quadratic(p[0], p[1], p[2])
        }
        "newton" => {
            rest.exactly::<Scalar>(0)?;
            let nodes = block.require("nodes")?.values()?;
            let coeffs = block.require("coeffs")?.values()?;
            KeyFunction::newton(nodes, coeffs)
        }
        other => return Err(fl.err(format!("unknown function kind {other:?}"))),
    }
    .map_err(|e| fl.err(e.to_string()))?;

    let interval = block.require("interval")?;
    let iv: Vec<Scalar> = interval.exactly(2)?;
    let mut cfg = SolverConfig::bisection(iv[0], iv[1]);
    if let Some(l) = block.find("method")? {
        cfg.method = match l.one::<String>()?.as_str() {
            "bisection" => SolverMethod::Bisection,
            "secant" => SolverMethod::Secant,
            other => return Err(l.err(format!("unknown method {other:?}"))),
        };
    }
    if let Some(l) = block.find("seeds")? {
        let s: Vec<Scalar> = l.exactly(2)?;
        cfg.seeds = (s[0], s[1]);
    } else if cfg.method == SolverMethod::Secant {
        return Err(block.header.err("secant method needs `seeds`"));
    }
    if let Some(l) = block.find("tol")? {
        cfg.tol = l.one()?;
    }
    if let Some(l) = block.find("max_iter")? {
        cfg.max_iter = l.one()?;
    }
    if let Some(l) = block.find("scan_steps")? {
        cfg.scan_steps = l.one()?;
    }
    let key = NonlinearKey::new(f, cfg)
        .and_then(|k| k.with_decrypt_tol(decrypt_tol(block)?))
        .map_err(|e| block.header.err(e.to_string()))?;
    Ok(Stage::Nonlinear(key))
}

fn build_vigenere(block: &Block) -> Result<Stage> {
    block.check_keys(&["keyword"])?;
    let l = block.require("keyword")?;
    let key = VigenereKey::new(l.values()?).map_err(|e| l.err(e.to_string()))?;
    Ok(Stage::Vigenere(key))
}

fn build_transpose(block: &Block) -> Result<Stage> {
    block.check_keys(&[])?;
    let h = &block.header;
    let spec = match h.args.get(1).copied() {
        Some("halving") if h.args.len() == 2 => TranspositionSpec::Halving,
        Some("keyed") => {
            let perm = h.args[2..]
                .iter()
                .map(|a| a.parse::<usize>().map_err(|_| h.err(format!("bad index {a:?}"))))
                .collect::<Result<Vec<_>>>()?;
            TranspositionSpec::Keyed(KeyedBlockPermutation::new(perm).map_err(|e| h.err(e.to_string()))?)
        }
        _ => return Err(h.err("expected `stage transpose halving` or `stage transpose keyed <perm>`")),
    };
    Ok(Stage::Transpose(spec))
}

/// Parses a key file into a validated pipeline.
pub fn parse_key_file(text: &str) -> Result<Pipeline> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            return None;
        }
        let mut words = content.split_whitespace();
        let key = words.next()?;
        Some(Line {
            number: i + 1,
            key,
            args: words.collect(),
        })
    });

    let magic = lines.next().ok_or(Error::KeyFile {
        line: 1,
        reason: "empty key file".into(),
    })?;
    if magic.key != "realcipher-key" || magic.args != ["v1"] {
        return Err(magic.err(format!("expected header `{MAGIC}`")));
    }

    let mut format = None;
    let mut blocks: Vec<Block> = Vec::new();
    for line in lines {
        match line.key {
            "stage" => {
                if line.args.is_empty() {
                    return Err(line.err("stage kind missing"));
                }
                blocks.push(Block {
                    header: line,
                    body: Vec::new(),
                });
            }
            "format" if blocks.is_empty() => {
                if format.is_some() {
                    return Err(line.err("duplicate `format`"));
                }
                format = Some(parse_format(&line)?);
            }
            _ => match blocks.last_mut() {
                Some(b) => b.body.push(line),
                None => return Err(line.err(format!("`{}` outside a stage", line.key))),
            },
        }
    }
    if blocks.is_empty() {
        return Err(Error::KeyFile {
            line: text.lines().count().max(1),
            reason: "no stages".into(),
        });
    }

    let stages = blocks
        .iter()
        .map(|b| match b.header.args[0] {
            "linear" => build_linear(b),
            "nonlinear" => build_nonlinear(b),
            "vigenere" => build_vigenere(b),
            "transpose" => build_transpose(b),
            other => Err(b.header.err(format!("unknown stage kind {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let first = blocks[0].header.number;
    let pipeline = match format {
        Some(f) => Pipeline::new(stages, f),
        None => Pipeline::with_default_format(stages),
    };
    pipeline.map_err(|e| Error::KeyFile {
        line: first,
        reason: e.to_string(),
    })
}

fn parse_format(line: &Line) -> Result<FormatSpec> {
    let mut digits = None;
    let mut separator = b' ';
    let mut it = line.args.iter();
    while let Some(&word) = it.next() {
        let value = it
            .next()
            .ok_or_else(|| line.err(format!("`{word}` needs a value")))?;
        match word {
            "digits" => {
                digits = Some(value.parse::<usize>().map_err(|_| line.err("bad digit count"))?)
            }
            "separator" => {
                separator = value.parse::<u8>().map_err(|_| line.err("separator is a byte code"))?
            }
            other => return Err(line.err(format!("unknown format option {other:?}"))),
        }
    }
    let digits = digits.ok_or_else(|| line.err("format needs `digits`"))?;
    FormatSpec::new(digits, separator).map_err(|e| line.err(e.to_string()))
}

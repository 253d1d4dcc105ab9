//! One-character substitution cipher: each plaintext code `c` is encrypted
//! to a root of `f(x) − c = 0` and decrypted by evaluating `f` at that root.
//!
//! Roots are found either by bisection after a left-to-right bracket scan
//! (so repeated characters always map to the same, leftmost root) or by the
//! secant method from fixed seeds.

use crate::error::{Error, Result};
use crate::scalar::{round_to_code, Scalar, DEFAULT_DECRYPT_TOL};

/// Key function `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum KeyFunction {
    /// Monomial coefficients, highest degree first.
    Polynomial { coeffs: Vec<Scalar> },
    /// `2^(αx² + βx + γ)`.
    Exp2Quadratic {
        alpha: Scalar,
        beta: Scalar,
        gamma: Scalar,
    },
    /// Newton form `c₀ + c₁(x−x₀) + c₂(x−x₀)(x−x₁) + …`, as produced by
    /// interpolation.
    Newton {
        nodes: Vec<Scalar>,
        coeffs: Vec<Scalar>,
    },
}

impl KeyFunction {
    pub fn polynomial(coeffs: Vec<Scalar>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::InvalidKey("polynomial needs at least one coefficient".into())),
            Some(&lead) if lead == 0.0 && coeffs.len() > 1 => {
                Err(Error::InvalidKey("leading coefficient must be nonzero".into()))
            }
            _ if coeffs.iter().any(|c| !c.is_finite()) => {
                Err(Error::InvalidKey("coefficients must be finite".into()))
            }
            _ => Ok(KeyFunction::Polynomial { coeffs }),
        }
    }

    pub fn exp2_quadratic(alpha: Scalar, beta: Scalar, gamma: Scalar) -> Result<Self> {
        if alpha == 0.0 {
            return Err(Error::InvalidKey("alpha must be nonzero".into()));
        }
        if ![alpha, beta, gamma].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidKey("parameters must be finite".into()));
        }
        Ok(KeyFunction::Exp2Quadratic { alpha, beta, gamma })
    }

    pub fn newton(nodes: Vec<Scalar>, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() || nodes.len() + 1 < coeffs.len() {
            return Err(Error::InvalidKey(format!(
                "Newton form with {} coefficients needs at least {} nodes",
                coeffs.len(),
                coeffs.len().saturating_sub(1)
            )));
        }
        if nodes.iter().chain(&coeffs).any(|v| !v.is_finite()) {
            return Err(Error::InvalidKey("Newton form entries must be finite".into()));
        }
        Ok(KeyFunction::Newton { nodes, coeffs })
    }

    /// Polynomial degree, or `None` for the exponential variant.
    pub fn degree(&self) -> Option<usize> {
        match self {
            KeyFunction::Polynomial { coeffs } => Some(coeffs.len() - 1),
            KeyFunction::Newton { coeffs, .. } => Some(coeffs.len() - 1),
            KeyFunction::Exp2Quadratic { .. } => None,
        }
    }

    fn eval_raw(&self, x: Scalar) -> Scalar {
        match self {
            KeyFunction::Polynomial { coeffs } => coeffs.iter().fold(0.0, |acc, &c| acc * x + c),
            KeyFunction::Exp2Quadratic { alpha, beta, gamma } => {
                ((alpha * x + beta) * x + gamma).exp2()
            }
            KeyFunction::Newton { nodes, coeffs } => {
                let d = coeffs.len() - 1;
                (0..d)
                    .rev()
                    .fold(coeffs[d], |acc, k| acc * (x - nodes[k]) + coeffs[k])
            }
        }
    }

    /// Evaluates `f(x)`.
    pub fn eval(&self, x: Scalar) -> Result<Scalar> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        let y = self.eval_raw(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::FormatOverflow(y))
        }
    }

    /// Evaluates `f'(x)` analytically.
    pub fn derivative(&self, x: Scalar) -> Scalar {
        match self {
            KeyFunction::Polynomial { coeffs } => {
                let (_, dp) = coeffs
                    .iter()
                    .fold((0.0, 0.0), |(p, dp), &c| (p * x + c, dp * x + p));
                dp
            }
            KeyFunction::Exp2Quadratic { alpha, beta, .. } => {
                self.eval_raw(x) * std::f64::consts::LN_2 * (2.0 * alpha * x + beta)
            }
            KeyFunction::Newton { nodes, coeffs } => {
                let d = coeffs.len() - 1;
                let (_, dp) = (0..d).rev().fold((coeffs[d], 0.0), |(p, dp), k| {
                    (p * (x - nodes[k]) + coeffs[k], dp * (x - nodes[k]) + p)
                });
                dp
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    Bisection,
    Secant,
}

pub const DEFAULT_SOLVER_TOL: Scalar = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_SCAN_STEPS: usize = 4096;

/// Secant steps with a smaller change in `f` are treated as flat.
const FLAT_SECANT: Scalar = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: SolverMethod,
    pub lo: Scalar,
    pub hi: Scalar,
    pub tol: Scalar,
    pub max_iter: usize,
    pub scan_steps: usize,
    pub seeds: (Scalar, Scalar),
}

impl SolverConfig {
    pub fn bisection(lo: Scalar, hi: Scalar) -> Self {
        SolverConfig {
            method: SolverMethod::Bisection,
            lo,
            hi,
            tol: DEFAULT_SOLVER_TOL,
            max_iter: DEFAULT_MAX_ITER,
            scan_steps: DEFAULT_SCAN_STEPS,
            seeds: (lo, hi),
        }
    }

    pub fn secant(lo: Scalar, hi: Scalar, x0: Scalar, x1: Scalar) -> Self {
        SolverConfig {
            method: SolverMethod::Secant,
            seeds: (x0, x1),
            ..Self::bisection(lo, hi)
        }
    }

    pub fn with_method(mut self, method: SolverMethod) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.lo, self.hi, self.tol, self.seeds.0, self.seeds.1]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidKey("solver parameters must be finite".into()));
        }
        if !(self.lo < self.hi) {
            return Err(Error::InvalidKey(format!(
                "interval [{}, {}] is empty",
                self.lo, self.hi
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidKey("solver tolerance must be positive".into()));
        }
        if self.max_iter == 0 || self.scan_steps == 0 {
            return Err(Error::InvalidKey(
                "max_iter and scan_steps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearKey {
    f: KeyFunction,
    solver: SolverConfig,
    decrypt_tol: Scalar,
}

impl NonlinearKey {
    pub fn new(f: KeyFunction, solver: SolverConfig) -> Result<Self> {
        solver.validate()?;
        Ok(NonlinearKey {
            f,
            solver,
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

    pub fn function(&self) -> &KeyFunction {
        &self.f
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    pub fn decrypt_tol(&self) -> Scalar {
        self.decrypt_tol
    }

    /// Largest `|f'|` seen on the scan grid of the key interval.
    pub fn max_slope(&self) -> Scalar {
        let cfg = &self.solver;
        let h = (cfg.hi - cfg.lo) / cfg.scan_steps as Scalar;
        (0..=cfg.scan_steps)
            .map(|k| self.f.derivative(cfg.lo + k as Scalar * h).abs())
            .fold(0.0, Scalar::max)
    }
}

pub fn eval_key_function(f: &KeyFunction, x: Scalar) -> Result<Scalar> {
    f.eval(x)
}

/// Either an exact root found on the scan grid or a bracketing interval.
enum Bracket {
    Exact(Scalar),
    Interval { a: Scalar, b: Scalar, ga: Scalar },
}

fn grid_point(cfg: &SolverConfig, k: usize) -> Scalar {
    if k == cfg.scan_steps {
        cfg.hi
    } else {
        cfg.lo + k as Scalar * ((cfg.hi - cfg.lo) / cfg.scan_steps as Scalar)
    }
}

/// Walks `[lo, hi]` in equal steps and returns the first grid point where
/// `f − c` vanishes or the first subinterval where it changes sign.
/// `f_at(k)` yields `f` at grid point `k`.
fn scan_bracket(
    c: Scalar,
    cfg: &SolverConfig,
    mut f_at: impl FnMut(usize) -> Result<Scalar>,
) -> Result<Option<Bracket>> {
    let mut a = cfg.lo;
    let mut ga = f_at(0)? - c;
    for k in 1..=cfg.scan_steps {
        if ga == 0.0 {
            return Ok(Some(Bracket::Exact(a)));
        }
        let b = grid_point(cfg, k);
        let gb = f_at(k)? - c;
        if gb == 0.0 {
            return Ok(Some(Bracket::Exact(b)));
        }
        if (ga < 0.0) != (gb < 0.0) {
            return Ok(Some(Bracket::Interval { a, b, ga }));
        }
        a = b;
        ga = gb;
    }
    Ok(None)
}

/// Leftmost root of `f(x) = code` in the configured interval, by bisection.
pub fn bisection_solve(f: &KeyFunction, code: u8, cfg: &SolverConfig) -> Result<Scalar> {
    let bracket = scan_bracket(code as Scalar, cfg, |k| f.eval(grid_point(cfg, k)))?;
    bisect(f, code, cfg, bracket)
}

fn bisect(f: &KeyFunction, code: u8, cfg: &SolverConfig, bracket: Option<Bracket>) -> Result<Scalar> {
    let c = code as Scalar;
    let (mut a, mut b, mut ga) = match bracket {
        Some(Bracket::Exact(x)) => return Ok(x),
        Some(Bracket::Interval { a, b, ga }) => (a, b, ga),
        None => {
            return Err(Error::NoRoot {
                code,
                lo: cfg.lo,
                hi: cfg.hi,
            })
        }
    };
    for _ in 0..cfg.max_iter {
        let mid = a + 0.5 * (b - a);
        if b - a <= cfg.tol || mid <= a || mid >= b {
            return Ok(mid);
        }
        let gm = f.eval(mid)? - c;
        if gm == 0.0 || gm.abs() <= cfg.tol {
            return Ok(mid);
        }
        if (ga < 0.0) == (gm < 0.0) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    Err(Error::Convergence {
        code,
        reason: format!("bracket still {:e} wide after {} iterations", b - a, cfg.max_iter),
    })
}

/// Root of `f(x) = code` by the secant method from the configured seeds.
pub fn secant_solve(f: &KeyFunction, code: u8, cfg: &SolverConfig) -> Result<Scalar> {
    let c = code as Scalar;
    let (mut x0, mut x1) = cfg.seeds;
    if x0 == x1 {
        return Err(Error::Precondition("secant seeds must differ".into()));
    }
    let mut g0 = f.eval(x0)? - c;
    let mut g1 = f.eval(x1)? - c;
    for _ in 0..cfg.max_iter {
        if g1.abs() <= cfg.tol {
            return Ok(x1);
        }
        let dg = g1 - g0;
        if dg.abs() < FLAT_SECANT {
            return Err(Error::Convergence {
                code,
                reason: format!("flat secant at x = {x1}"),
            });
        }
        let x2 = x1 - g1 * (x1 - x0) / dg;
        if !x2.is_finite() {
            return Err(Error::Convergence {
                code,
                reason: "iterate diverged".into(),
            });
        }
        let g2 = f.eval(x2).map_err(|_| Error::Convergence {
            code,
            reason: format!("f overflowed at x = {x2}"),
        })? - c;
        if (x2 - x1).abs() <= cfg.tol {
            return Ok(x2);
        }
        (x0, g0, x1, g1) = (x1, g1, x2, g2);
    }
    Err(Error::Convergence {
        code,
        reason: format!("no convergence in {} iterations", cfg.max_iter),
    })
}

/// Key function values on the bisection scan grid, filled on first use and
/// shared by every code of a message.
struct GridCache<'a> {
    key: &'a NonlinearKey,
    values: Vec<Result<Scalar>>,
}

impl GridCache<'_> {
    fn solve(&mut self, code: u8) -> Result<Scalar> {
        let key = self.key;
        let cfg = &key.solver;
        match cfg.method {
            SolverMethod::Secant => secant_solve(&key.f, code, cfg),
            SolverMethod::Bisection => {
                if self.values.is_empty() {
                    self.values = (0..=cfg.scan_steps)
                        .map(|k| key.f.eval(grid_point(cfg, k)))
                        .collect();
                }
                let values = &self.values;
                let bracket = scan_bracket(code as Scalar, cfg, |k| values[k].clone())?;
                bisect(&key.f, code, cfg, bracket)
            }
        }
    }
}

/// Encrypts each byte to its root. Equal bytes yield bit-identical roots.
pub fn encrypt_nonlinear(key: &NonlinearKey, plaintext: &[u8]) -> Result<Vec<Scalar>> {
    // The solve is a pure function of (key, code), so each distinct byte is
    // solved once per message.
    let mut roots: [Option<Scalar>; 256] = [None; 256];
    let mut grid = GridCache {
        key,
        values: Vec::new(),
    };
    plaintext
        .iter()
        .enumerate()
        .map(|(i, &code)| match roots[code as usize] {
            Some(x) => Ok(x),
            None => {
                let x = grid.solve(code).map_err(|e| e.at(i))?;
                roots[code as usize] = Some(x);
                Ok(x)
            }
        })
        .collect()
}

/// Evaluates the key function at each root without rounding.
pub fn substitute_nonlinear(key: &NonlinearKey, roots: &[Scalar]) -> Result<Vec<Scalar>> {
    roots
        .iter()
        .enumerate()
        .map(|(i, &x)| key.f.eval(x).map_err(|e| e.at(i)))
        .collect()
}

pub fn decrypt_nonlinear(key: &NonlinearKey, roots: &[Scalar]) -> Result<Vec<u8>> {
    roots
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            key.f
                .eval(x)
                .and_then(|y| round_to_code(y, key.decrypt_tol))
                .map_err(|e| e.at(i))
        })
        .collect()
}

/// Printable ASCII plus line feed and carriage return.
pub fn default_alphabet() -> Vec<u8> {
    let mut codes = vec![b'\n', b'\r'];
    codes.extend(32u8..=126);
    codes
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub passed: Vec<u8>,
    pub failures: Vec<(u8, String)>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every code in `alphabet` has a certified root in the key
/// interval and that the configured solver reaches a root that decrypts
/// back to it.
pub fn validate_key(key: &NonlinearKey, alphabet: &[u8]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut grid = GridCache {
        key,
        values: Vec::new(),
    };
    let cfg = &key.solver;
    for &code in alphabet {
        let mut check = || -> Result<()> {
            if scan_bracket(code as Scalar, cfg, |k| key.f.eval(grid_point(cfg, k)))?.is_none() {
                return Err(Error::NoRoot {
                    code,
                    lo: key.solver.lo,
                    hi: key.solver.hi,
                });
            }
            let root = grid.solve(code)?;
            let back = round_to_code(key.f.eval(root)?, key.decrypt_tol)?;
            if back != code {
                return Err(Error::InconsistentData(format!("root decrypts to {back}")));
            }
            Ok(())
        };
        match check() {
            Ok(()) => report.passed.push(code),
            Err(e) => report.failures.push((code, e.to_string())),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quintic() -> KeyFunction {
        KeyFunction::polynomial(vec![1.0, 7.34, 22.03, 46.012, 12.25, -1.0]).unwrap()
    }

    fn exp2() -> KeyFunction {
        KeyFunction::exp2_quadratic(1.0, -0.5, 0.0).unwrap()
    }

    fn identity() -> KeyFunction {
        KeyFunction::polynomial(vec![1.0, 0.0]).unwrap()
    }

    /// Positive root of x² − x/2 = log₂ c.
    fn exp2_root(c: f64) -> f64 {
        (0.5 + (0.25 + 4.0 * c.log2()).sqrt()) / 2.0
    }

    #[test]
    fn evaluates_key_functions() {
        assert_eq!(quintic().eval(0.0).unwrap(), -1.0);
        assert!((exp2().eval(2.836862311).unwrap() - 99.0).abs() < 1e-5);
        // Horner by hand at the printed root for 'W' (87).
        let x: f64 = 0.996905152715;
        let direct = x.powi(5) + 7.34 * x.powi(4) + 22.03 * x.powi(3) + 46.012 * x * x + 12.25 * x - 1.0;
        assert!((quintic().eval(x).unwrap() - direct).abs() < 1e-12);
        assert!((direct - 87.0).abs() < 1e-7);
    }

    #[test]
    fn overflow_is_reported() {
        let f = KeyFunction::exp2_quadratic(1.0, 0.0, 0.0).unwrap();
        assert!(matches!(f.eval(100.0), Err(Error::FormatOverflow(_))));
    }

    #[test]
    fn key_function_invariants() {
        assert!(KeyFunction::polynomial(vec![0.0, 1.0]).is_err());
        assert!(KeyFunction::polynomial(vec![]).is_err());
        assert!(KeyFunction::exp2_quadratic(0.0, 1.0, 0.0).is_err());
        assert!(KeyFunction::newton(vec![], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for f in [quintic(), exp2(), KeyFunction::newton(vec![0.5, 1.0], vec![2.0, -1.0, 3.0]).unwrap()] {
            for x in [0.3, 1.1, 2.5] {
                let fd = (f.eval(x + h).unwrap() - f.eval(x - h).unwrap()) / (2.0 * h);
                let an = f.derivative(x);
                assert!((fd - an).abs() <= 1e-5 * an.abs().max(1.0), "{f:?} at {x}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn bisection_reproduces_printed_roots() {
        let cfg = SolverConfig::bisection(0.0, 2.0);
        assert!((bisection_solve(&quintic(), 87, &cfg).unwrap() - 0.996905152715).abs() < 1e-9);
        assert!((bisection_solve(&quintic(), 101, &cfg).unwrap() - 1.062095760863).abs() < 1e-9);
        let id = SolverConfig::bisection(0.0, 256.0);
        assert_eq!(bisection_solve(&identity(), 65, &id).unwrap(), 65.0);
    }

    #[test]
    fn bisection_takes_leftmost_root() {
        // (x - 1)(x - 3) + 5 = x² - 4x + 8; equals 5 at x = 1 and x = 3.
        let f = KeyFunction::polynomial(vec![1.0, -4.0, 8.0]).unwrap();
        let cfg = SolverConfig::bisection(0.0, 4.0);
        assert!((bisection_solve(&f, 5, &cfg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bisection_without_sign_change_fails() {
        let f = KeyFunction::polynomial(vec![1.0, 0.0, 1.0]).unwrap();
        let cfg = SolverConfig::bisection(-5.0, 5.0);
        assert!(matches!(bisection_solve(&f, 0, &cfg), Err(Error::NoRoot { code: 0, .. })));
    }

    #[test]
    fn bisection_iteration_cap() {
        let mut cfg = SolverConfig::bisection(0.0, 2.0);
        cfg.max_iter = 3;
        cfg.scan_steps = 1;
        assert!(matches!(bisection_solve(&quintic(), 87, &cfg), Err(Error::Convergence { .. })));
    }

    #[test]
    fn secant_matches_quadratic_formula() {
        let cfg = SolverConfig::secant(0.0, 4.0, 2.0, 3.0);
        for (c, printed) in [(112u8, 2.871040808), (105, 2.853218300), (99, 2.836862311), (101, 2.842433505)] {
            let x = secant_solve(&exp2(), c, &cfg).unwrap();
            assert!((x - printed).abs() < 1e-6, "c={c}: {x}");
            assert!((x - exp2_root(c as f64)).abs() < 1e-12);
        }
        let id = SolverConfig::secant(0.0, 256.0, 1.0, 2.0);
        assert!((secant_solve(&identity(), 65, &id).unwrap() - 65.0).abs() < 1e-12);
    }

    #[test]
    fn secant_failures() {
        let same = SolverConfig::secant(0.0, 4.0, 2.0, 2.0);
        assert!(matches!(secant_solve(&exp2(), 100, &same), Err(Error::Precondition(_))));
        // Constant function: every secant is flat.
        let flat = KeyFunction::polynomial(vec![7.0]).unwrap();
        let cfg = SolverConfig::secant(0.0, 4.0, 1.0, 2.0);
        assert!(matches!(secant_solve(&flat, 100, &cfg), Err(Error::Convergence { .. })));
    }

    #[test]
    fn equal_bytes_give_identical_roots() {
        let key = NonlinearKey::new(quintic(), SolverConfig::bisection(0.0, 2.0)).unwrap();
        let ct = encrypt_nonlinear(&key, b"ee").unwrap();
        assert_eq!(ct[0].to_bits(), ct[1].to_bits());
        assert_eq!(decrypt_nonlinear(&key, &ct).unwrap(), b"ee");
    }

    #[test]
    fn epic_under_exponential_key() {
        let key = NonlinearKey::new(exp2(), SolverConfig::secant(0.0, 4.0, 2.0, 3.0)).unwrap();
        let ct = encrypt_nonlinear(&key, b"epic").unwrap();
        for (x, c) in ct.iter().zip(b"epic") {
            assert!((x - exp2_root(*c as f64)).abs() < 1e-6);
        }
        assert_eq!(decrypt_nonlinear(&key, &[2.853218300]).unwrap(), vec![105]);
        assert_eq!(decrypt_nonlinear(&key, &ct).unwrap(), b"epic");
    }

    #[test]
    fn encrypt_reports_failing_index() {
        let key = NonlinearKey::new(exp2(), SolverConfig::bisection(0.0, 4.0)).unwrap();
        let err = encrypt_nonlinear(&key, b"ab\0").unwrap_err();
        assert!(matches!(err, Error::AtIndex { index: 2, .. }), "{err}");
    }

    #[test]
    fn validation_reports() {
        let key = NonlinearKey::new(quintic(), SolverConfig::bisection(0.0, 2.0)).unwrap();
        let report = validate_key(&key, &default_alphabet());
        assert!(report.is_ok(), "{:?}", report.failures);
        assert_eq!(report.passed.len(), 97);

        let key = NonlinearKey::new(exp2(), SolverConfig::bisection(0.0, 4.0)).unwrap();
        assert!(validate_key(&key, &default_alphabet()).is_ok());
        let key = NonlinearKey::new(exp2(), SolverConfig::secant(0.0, 4.0, 2.0, 3.0)).unwrap();
        assert!(validate_key(&key, &default_alphabet()).is_ok());

        let sq = KeyFunction::polynomial(vec![1.0, 0.0, 1.0]).unwrap();
        let key = NonlinearKey::new(sq, SolverConfig::bisection(-4.0, 4.0)).unwrap();
        let report = validate_key(&key, &[0, 5]);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].0, 0);
        assert_eq!(report.passed, vec![5]);
    }

    #[test]
    fn solver_config_is_validated() {
        assert!(NonlinearKey::new(quintic(), SolverConfig::bisection(2.0, 0.0)).is_err());
        let mut cfg = SolverConfig::bisection(0.0, 2.0);
        cfg.tol = 0.0;
        assert!(NonlinearKey::new(quintic(), cfg).is_err());
    }

    #[test]
    fn solvers_agree_on_the_printable_alphabet() {
        let keys = [
            (quintic(), SolverConfig::secant(0.0, 2.0, 0.9, 1.1)),
            (exp2(), SolverConfig::secant(0.0, 4.0, 2.0, 3.0)),
        ];
        for (f, sec) in keys {
            let bis = SolverConfig::bisection(sec.lo, sec.hi);
            for code in default_alphabet() {
                let xb = bisection_solve(&f, code, &bis).unwrap();
                assert!((f.eval(xb).unwrap() - code as f64).abs() <= 1e-10, "{code}");
                if let Ok(xs) = secant_solve(&f, code, &sec) {
                    assert!((f.eval(xs).unwrap() - code as f64).abs() <= 1e-10, "{code}");
                    assert!((xb - xs).abs() <= 1e-8, "code {code}: {xb} vs {xs}");
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn distinct_roots_match_distinct_bytes(
            text in proptest::collection::vec(proptest::sample::select(default_alphabet()), 0..300),
        ) {
            let key = NonlinearKey::new(quintic(), SolverConfig::bisection(0.0, 2.0)).unwrap();
            let roots = encrypt_nonlinear(&key, &text).unwrap();
            let bytes: std::collections::HashSet<u8> = text.iter().copied().collect();
            let values: std::collections::HashSet<u64> = roots.iter().map(|r| r.to_bits()).collect();
            proptest::prop_assert_eq!(bytes.len(), values.len());
        }
    }
}

//! The moment-sequence families and the operations that combine them:
//! exact generation from closed forms, termwise products and geometric
//! scalings, real powers with certified error bounds, and the exact
//! factorization identities connecting the families.
//!
//! Family closed forms (all exact):
//!
//! | family                  | term                                    |
//! |-------------------------|-----------------------------------------|
//! | Catalan                 | `C_n = (2n)! / (n! (n+1)!)`             |
//! | CentralBinomial         | `B_n = (2n choose n)`                   |
//! | CentralBinomialScaled   | `B̄_n = B_n / 2^n`                      |
//! | DoubleFactorial         | `D_n = (2n-1)!!`                        |
//! | Factorial               | `n!`                                    |
//! | EvenFactorial           | `(2n)!`                                 |
//! | FussCatalan(k)          | `C_{k,n} = ((k+1)n choose n) / (kn+1)`  |
//! | FussBinomial(k)         | `((k+1)n choose n)`                     |
//! | KFactorial(k)           | `(kn)!`                                 |
//! | GammaPower(a)           | `Γ(an+1)` (exact iff `a` is an integer) |
//!
//! Degenerate parameters canonicalize instead of erroring: Fuss–Catalan and
//! Fuss-binomial at `k = 1` are the Catalan and central binomial families,
//! and `KFactorial` at `k = 1`, `k = 2` is `Factorial`, `EvenFactorial`.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::{binomial, double_factorial, factorial};
use crate::hiprec::{self, float_from_rational, pow_with_bound, RAD_PREC};
use crate::DEFAULT_PRECISION;

/// A named sequence family together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyId {
    Catalan,
    CentralBinomial,
    CentralBinomialScaled,
    DoubleFactorial,
    Factorial,
    EvenFactorial,
    FussCatalan { k: u32 },
    FussBinomial { k: u32 },
    KFactorial { k: u32 },
    GammaPower { a: Rational },
}

impl FamilyId {
    /// Collapse degenerate parameters onto the equivalent base family.
    pub fn canonicalize(self) -> FamilyId {
        match self {
            FamilyId::FussCatalan { k: 1 } => FamilyId::Catalan,
            FamilyId::FussBinomial { k: 1 } => FamilyId::CentralBinomial,
            FamilyId::KFactorial { k: 1 } => FamilyId::Factorial,
            FamilyId::KFactorial { k: 2 } => FamilyId::EvenFactorial,
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyId::FussCatalan { k } | FamilyId::FussBinomial { k } | FamilyId::KFactorial { k }
                if *k < 1 =>
            {
                Err(Error::domain(format!("{self}: k must be >= 1")))
            }
            FamilyId::GammaPower { a } if a.cmp0() != std::cmp::Ordering::Greater => {
                Err(Error::domain("gamma-power: a must be a positive rational"))
            }
            _ => Ok(()),
        }
    }

    /// Hyphenated name used by the CLI and reports.
    pub fn slug(&self) -> &'static str {
        match self {
            FamilyId::Catalan => "catalan",
            FamilyId::CentralBinomial => "central-binomial",
            FamilyId::CentralBinomialScaled => "central-binomial-scaled",
            FamilyId::DoubleFactorial => "double-factorial",
            FamilyId::Factorial => "factorial",
            FamilyId::EvenFactorial => "even-factorial",
            FamilyId::FussCatalan { .. } => "fuss-catalan",
            FamilyId::FussBinomial { .. } => "fuss-binomial",
            FamilyId::KFactorial { .. } => "k-factorial",
            FamilyId::GammaPower { .. } => "gamma-power",
        }
    }

    /// The gamma-power family is covered only by a conjecture; its
    /// certificates and transforms are labelled accordingly.
    pub fn is_conjectural(&self) -> bool {
        matches!(self, FamilyId::GammaPower { .. })
    }

    /// Exact `Γ(an+1)` requires integer `a`.
    fn gamma_power_integer_a(&self) -> Option<u32> {
        match self {
            FamilyId::GammaPower { a } if a.is_integer() => a.numer().to_u32(),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::FussCatalan { k } | FamilyId::FussBinomial { k } | FamilyId::KFactorial { k } => {
                write!(f, "{}(k={})", self.slug(), k)
            }
            FamilyId::GammaPower { a } => write!(f, "{}(a={})", self.slug(), a),
            _ => write!(f, "{}", self.slug()),
        }
    }
}

/// Provenance label for a sequence: a named family, a termwise product, a
/// geometric scaling, or a caller-supplied custom sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceTag {
    Family(FamilyId),
    Product(Box<SequenceTag>, Box<SequenceTag>),
    Scaled(Box<SequenceTag>, Rational),
    Custom(String),
}

impl fmt::Display for SequenceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceTag::Family(id) => write!(f, "{id}"),
            SequenceTag::Product(a, b) => write!(f, "({a})*({b})"),
            SequenceTag::Scaled(t, a) => write!(f, "scale({t}, {a})"),
            SequenceTag::Custom(s) => write!(f, "{s}"),
        }
    }
}

/// Terms of a moment sequence: exact rationals, or high-precision reals with
/// per-term relative error bounds (gamma-power with non-integer `a`).
#[derive(Clone, Debug)]
pub enum Terms {
    Exact(Vec<Rational>),
    Real {
        values: Vec<Float>,
        relbounds: Vec<Float>,
        precision: u32,
    },
}

/// A moment sequence `m_0..m_N` with `m_0 = 1` and all terms positive.
#[derive(Clone, Debug)]
pub struct MomentSequence {
    tag: SequenceTag,
    terms: Terms,
}

impl MomentSequence {
    pub fn tag(&self) -> &SequenceTag {
        &self.tag
    }

    pub fn len(&self) -> usize {
        match &self.terms {
            Terms::Exact(v) => v.len(),
            Terms::Real { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.terms, Terms::Exact(_))
    }

    pub fn exact_terms(&self) -> Option<&[Rational]> {
        match &self.terms {
            Terms::Exact(v) => Some(v),
            Terms::Real { .. } => None,
        }
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    /// Terms as floats at the stated precision with relative error bounds
    /// (zero bounds for exact terms).
    pub fn float_terms(&self, prec: u32) -> (Vec<Float>, Vec<Float>) {
        match &self.terms {
            Terms::Exact(v) => {
                let values: Vec<Float> = v.iter().map(|r| float_from_rational(r, prec)).collect();
                let bounds = vec![Float::with_val(RAD_PREC, 0); v.len()];
                (values, bounds)
            }
            Terms::Real { values, relbounds, .. } => (
                values.iter().map(|f| Float::with_val(prec, f)).collect(),
                relbounds.clone(),
            ),
        }
    }

    /// Wrap caller-supplied exact terms (used for counterexample probes).
    /// Requires `m_0 = 1` and strictly positive terms.
    pub fn from_exact_terms(label: impl Into<String>, terms: Vec<Rational>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("sequence must have at least one term"));
        }
        if terms[0] != 1 {
            return Err(Error::domain("m_0 must equal 1"));
        }
        if terms.iter().any(|t| t.cmp0() != std::cmp::Ordering::Greater) {
            return Err(Error::domain("all terms must be strictly positive"));
        }
        Ok(MomentSequence {
            tag: SequenceTag::Custom(label.into()),
            terms: Terms::Exact(terms),
        })
    }
}

/// Generate `m_0..m_N` for a family. Gamma-power with non-integer `a` uses
/// the log-gamma kernel at [`DEFAULT_PRECISION`]; see
/// [`generate_with_precision`] to control that.
pub fn generate(family: &FamilyId, n_max: usize) -> Result<MomentSequence> {
    generate_with_precision(family, n_max, DEFAULT_PRECISION)
}

/// Like [`generate`], with explicit precision for inexact families.
pub fn generate_with_precision(family: &FamilyId, n_max: usize, prec: u32) -> Result<MomentSequence> {
    family.validate()?;
    let family = family.clone().canonicalize();
    let tag = SequenceTag::Family(family.clone());
    if let FamilyId::GammaPower { a } = &family {
        if let Some(ai) = family.gamma_power_integer_a() {
            let terms = (0..=n_max)
                .map(|n| Rational::from(factorial(ai as u64 * n as u64)))
                .collect();
            return Ok(MomentSequence {
                tag,
                terms: Terms::Exact(terms),
            });
        }
        // Γ(an+1) via exp(log_gamma) at the requested precision
        let mut values = Vec::with_capacity(n_max + 1);
        let mut relbounds = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n == 0 {
                values.push(Float::with_val(prec, 1));
                relbounds.push(Float::with_val(RAD_PREC, 0));
                continue;
            }
            let x = (a * Rational::from(n)) + Rational::from(1);
            let lg = crate::mellin::log_gamma(&float_from_rational(&x, prec + 32), prec + 32)?;
            values.push(Float::with_val(prec, lg.exp_ref()));
            // exp amplifies the absolute error of log_gamma: |lg| * 2^-(prec+8) plus rounding
            let mut b = Float::with_val(RAD_PREC, &lg);
            b.abs_mut();
            let relb = Float::with_val(
                RAD_PREC,
                (b + Float::with_val(RAD_PREC, 4)) * hiprec::exp2(-(prec as i32)),
            );
            relbounds.push(relb);
        }
        return Ok(MomentSequence {
            tag,
            terms: Terms::Real {
                values,
                relbounds,
                precision: prec,
            },
        });
    }

    let terms: Result<Vec<Rational>> = (0..=n_max as u64)
        .map(|n| {
            Ok(match &family {
                FamilyId::Catalan => Rational::from((binomial(2 * n, n)?, rug::Integer::from(n + 1))),
                FamilyId::CentralBinomial => Rational::from(binomial(2 * n, n)?),
                FamilyId::CentralBinomialScaled => {
                    Rational::from((binomial(2 * n, n)?, rug::Integer::from(1) << n as u32))
                }
                FamilyId::DoubleFactorial => Rational::from(double_factorial(2 * n as i64 - 1)?),
                FamilyId::Factorial => Rational::from(factorial(n)),
                FamilyId::EvenFactorial => Rational::from(factorial(2 * n)),
                FamilyId::FussCatalan { k } => Rational::from((
                    binomial((*k as u64 + 1) * n, n)?,
                    rug::Integer::from(*k as u64 * n + 1),
                )),
                FamilyId::FussBinomial { k } => Rational::from(binomial((*k as u64 + 1) * n, n)?),
                FamilyId::KFactorial { k } => Rational::from(factorial(*k as u64 * n)),
                FamilyId::GammaPower { .. } => unreachable!("handled above"),
            })
        })
        .collect();
    Ok(MomentSequence {
        tag,
        terms: Terms::Exact(terms?),
    })
}

/// A real power `{m_n^c}` of a moment sequence at working precision `P`,
/// with a certified per-term relative error bound. Positive integer `c`
/// takes the exact fast path.
#[derive(Clone, Debug)]
pub struct PowerSequence {
    base: MomentSequence,
    c: f64,
    precision: u32,
    values: Vec<Float>,
    relbounds: Vec<Float>,
    exact: Option<Vec<Rational>>,
}

impl PowerSequence {
    pub fn base(&self) -> &MomentSequence {
        &self.base
    }

    pub fn exponent(&self) -> f64 {
        self.c
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Float] {
        &self.values
    }

    pub fn relbounds(&self) -> &[Float] {
        &self.relbounds
    }

    /// Exact terms when `c` is a positive integer.
    pub fn exact_terms(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn label(&self) -> String {
        format!("({})^{}", self.base.tag(), self.c)
    }
}

/// Termwise power `t_n = m_n^c` at precision `prec` bits.
pub fn power(seq: &MomentSequence, c: f64, prec: u32) -> Result<PowerSequence> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::domain("power: exponent c must be positive and finite"));
    }
    if prec < 64 {
        return Err(Error::domain("power: precision must be at least 64 bits"));
    }
    // exact fast path for positive integer c
    if c.fract() == 0.0 && c <= u32::MAX as f64 {
        if let Some(terms) = seq.exact_terms() {
            let e = c as u32;
            let exact: Vec<Rational> = terms.iter().map(|m| Rational::from(m.pow(e))).collect();
            let values = exact.iter().map(|r| float_from_rational(r, prec)).collect();
            let relbounds = vec![Float::with_val(RAD_PREC, 0); exact.len()];
            return Ok(PowerSequence {
                base: seq.clone(),
                c,
                precision: prec,
                values,
                relbounds,
                exact: Some(exact),
            });
        }
    }
    let mut values = Vec::with_capacity(seq.len());
    let mut relbounds = Vec::with_capacity(seq.len());
    match seq.terms() {
        Terms::Exact(terms) => {
            for (n, m) in terms.iter().enumerate() {
                if n == 0 {
                    values.push(Float::with_val(prec, 1));
                    relbounds.push(Float::with_val(RAD_PREC, 0));
                    continue;
                }
                let (v, b) = pow_with_bound(m, c, prec)?;
                values.push(v);
                relbounds.push(b);
            }
        }
        Terms::Real {
            values: base_vals,
            relbounds: base_bounds,
            ..
        } => {
            for (n, (m, mb)) in base_vals.iter().zip(base_bounds).enumerate() {
                if n == 0 {
                    values.push(Float::with_val(prec, 1));
                    relbounds.push(Float::with_val(RAD_PREC, 0));
                    continue;
                }
                // t = exp(c ln m); input relative error eps contributes c*eps
                let ln_m = Float::with_val(prec + 16, m).ln();
                let ec = Float::with_val(prec + 16, &ln_m * &Float::with_val(53, c));
                values.push(Float::with_val(prec, ec.exp_ref()));
                let mut mag = Float::with_val(RAD_PREC, &ln_m);
                mag.abs_mut();
                let cf = Float::with_val(RAD_PREC, c);
                let own = Float::with_val(
                    RAD_PREC,
                    (mag * &cf + Float::with_val(RAD_PREC, 4)) * hiprec::exp2(-(prec as i32)),
                );
                let inherited = Float::with_val(RAD_PREC, mb * &cf);
                relbounds.push(Float::with_val(RAD_PREC, own + inherited));
            }
        }
    }
    Ok(PowerSequence {
        base: seq.clone(),
        c,
        precision: prec,
        values,
        relbounds,
        exact: None,
    })
}

/// Termwise product of two sequences of equal length.
pub fn product(s: &MomentSequence, t: &MomentSequence) -> Result<MomentSequence> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    let tag = SequenceTag::Product(Box::new(s.tag().clone()), Box::new(t.tag().clone()));
    match (s.terms(), t.terms()) {
        (Terms::Exact(a), Terms::Exact(b)) => {
            let terms = a
                .iter()
                .zip(b)
                .map(|(x, y)| Rational::from(x * y))
                .collect();
            Ok(MomentSequence {
                tag,
                terms: Terms::Exact(terms),
            })
        }
        _ => {
            let prec = match (s.terms(), t.terms()) {
                (Terms::Real { precision, .. }, _) => *precision,
                (_, Terms::Real { precision, .. }) => *precision,
                _ => unreachable!(),
            };
            let (av, ab) = s.float_terms(prec);
            let (bv, bb) = t.float_terms(prec);
            let values: Vec<Float> = av
                .iter()
                .zip(&bv)
                .map(|(x, y)| Float::with_val(prec, x * y))
                .collect();
            let relbounds = ab
                .iter()
                .zip(&bb)
                .map(|(x, y)| {
                    Float::with_val(RAD_PREC, Float::with_val(RAD_PREC, x + y) + hiprec::exp2(1 - prec as i32))
                })
                .collect();
            Ok(MomentSequence {
                tag,
                terms: Terms::Real {
                    values,
                    relbounds,
                    precision: prec,
                },
            })
        }
    }
}

/// Geometric scaling `{a^n m_n}` for positive rational `a`.
pub fn scale(seq: &MomentSequence, a: &Rational) -> Result<MomentSequence> {
    if a.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::domain("scale: a must be positive"));
    }
    let tag = SequenceTag::Scaled(Box::new(seq.tag().clone()), a.clone());
    match seq.terms() {
        Terms::Exact(terms) => {
            let mut pow_a = Rational::from(1);
            let scaled = terms
                .iter()
                .map(|m| {
                    let v = Rational::from(m * &pow_a);
                    pow_a *= a;
                    v
                })
                .collect();
            Ok(MomentSequence {
                tag,
                terms: Terms::Exact(scaled),
            })
        }
        Terms::Real {
            values,
            relbounds,
            precision,
        } => {
            let prec = *precision;
            let mut pow_a = Rational::from(1);
            let mut new_vals = Vec::with_capacity(values.len());
            let mut new_bounds = Vec::with_capacity(values.len());
            for (v, b) in values.iter().zip(relbounds) {
                new_vals.push(Float::with_val(prec, v * &float_from_rational(&pow_a, prec)));
                new_bounds.push(Float::with_val(
                    RAD_PREC,
                    b + hiprec::exp2(2 - prec as i32),
                ));
                pow_a *= a;
            }
            Ok(MomentSequence {
                tag,
                terms: Terms::Real {
                    values: new_vals,
                    relbounds: new_bounds,
                    precision: prec,
                },
            })
        }
    }
}

/// The exact factorization identities connecting the families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationId {
    /// `D_n = n! * B̄_n`
    DoubleFactorialSplit,
    /// `(2n)! = B_n * (n!)^2`
    EvenFactorialSplit,
    /// `(kn)! = (kn choose n)((k-1)n choose n)...(2n choose n) * (n!)^k`
    KFactorialSplit { k: u32 },
    /// `B_n = (n+1) C_n`
    CentralFromCatalan,
    /// `C_{k,n} * (kn+1) = ((k+1)n choose n)`
    FussTimesShift { k: u32 },
}

impl FactorizationId {
    pub fn parse(s: &str, k: Option<u32>) -> Result<Self> {
        let need_k = || k.ok_or_else(|| Error::domain(format!("identity `{s}` requires --k")));
        match s {
            "double-factorial-split" => Ok(FactorizationId::DoubleFactorialSplit),
            "even-factorial-split" => Ok(FactorizationId::EvenFactorialSplit),
            "k-factorial-split" => Ok(FactorizationId::KFactorialSplit { k: need_k()? }),
            "central-from-catalan" => Ok(FactorizationId::CentralFromCatalan),
            "fuss-times-shift" => Ok(FactorizationId::FussTimesShift { k: need_k()? }),
            other => Err(Error::UnknownIdentity(other.to_string())),
        }
    }
}

/// Check one of the factorization identities exactly for all `n <= n_max`.
pub fn verify_factorization(id: FactorizationId, n_max: usize) -> Result<bool> {
    match id {
        FactorizationId::DoubleFactorialSplit => {
            let d = generate(&FamilyId::DoubleFactorial, n_max)?;
            let lhs = product(
                &generate(&FamilyId::Factorial, n_max)?,
                &generate(&FamilyId::CentralBinomialScaled, n_max)?,
            )?;
            Ok(lhs.exact_terms() == d.exact_terms())
        }
        FactorizationId::EvenFactorialSplit => {
            let even = generate(&FamilyId::EvenFactorial, n_max)?;
            let fact = generate(&FamilyId::Factorial, n_max)?;
            let lhs = product(
                &generate(&FamilyId::CentralBinomial, n_max)?,
                &product(&fact, &fact)?,
            )?;
            Ok(lhs.exact_terms() == even.exact_terms())
        }
        FactorizationId::KFactorialSplit { k } => {
            if k < 1 {
                return Err(Error::domain("k-factorial-split: k must be >= 1"));
            }
            for n in 0..=n_max as u64 {
                let mut rhs = Rational::from(factorial(n)).pow(k);
                for i in 2..=k as u64 {
                    rhs *= binomial(i * n, n)?;
                }
                if rhs != factorial(k as u64 * n) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FactorizationId::CentralFromCatalan => {
            let b = generate(&FamilyId::CentralBinomial, n_max)?;
            let c = generate(&FamilyId::Catalan, n_max)?;
            let (b, c) = (b.exact_terms().unwrap(), c.exact_terms().unwrap());
            Ok((0..=n_max).all(|n| &c[n] * Rational::from(n as u64 + 1) == b[n]))
        }
        FactorizationId::FussTimesShift { k } => {
            if k < 1 {
                return Err(Error::domain("fuss-times-shift: k must be >= 1"));
            }
            let fc = generate(&FamilyId::FussCatalan { k }, n_max)?;
            let fb = generate(&FamilyId::FussBinomial { k }, n_max)?;
            let (fc, fb) = (fc.exact_terms().unwrap(), fb.exact_terms().unwrap());
            Ok((0..=n_max)
                .all(|n| &fc[n] * Rational::from(k as u64 * n as u64 + 1) == fb[n]))
        }
    }
}

/// CSV export: `(n, numerator, denominator)` for exact sequences or
/// `(n, decimal, errbound)` for inexact ones. Header row included.
pub fn sequence_csv(seq: &MomentSequence) -> String {
    let mut out = String::new();
    match seq.terms() {
        Terms::Exact(terms) => {
            out.push_str("n,numerator,denominator\n");
            for (n, t) in terms.iter().enumerate() {
                out.push_str(&format!("{n},{},{}\n", t.numer(), t.denom()));
            }
        }
        Terms::Real {
            values, relbounds, ..
        } => {
            out.push_str("n,decimal,errbound\n");
            for (n, (v, b)) in values.iter().zip(relbounds).enumerate() {
                out.push_str(&format!(
                    "{n},{},{}\n",
                    hiprec::decimal_string(v),
                    hiprec::decimal_string(b)
                ));
            }
        }
    }
    out
}

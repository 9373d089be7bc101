//! Bernstein-function factorization machinery, complete-monotonicity
//! verification, Carleman determinacy diagnostics, and the theorem-backed
//! determinacy classifier.
//!
//! Each family factors through products of shifted Bernstein functions
//! `h(x)` evaluated at integers, `m_n = Π_{i<=n} h(i)` (with an inner
//! product over `ℓ = 1..k` for the Fuss families):
//!
//! | id  | family                | `h(x)`                                             |
//! |-----|-----------------------|-----------------------------------------------------|
//! | T1  | Catalan               | `2(2 - 3/(x+1))`                                    |
//! | T2  | CentralBinomial       | `2(2 - 1/x)`                                        |
//! | T2' | CentralBinomialScaled | `2 - 1/x`                                           |
//! | T3  | DoubleFactorial       | `2x - 1`                                            |
//! | T5  | FussCatalan(k)        | `(k+1)^{1/k} [(1+1/k) - (2-(ℓ-2)/k)/(kx-(ℓ-2))]`    |
//! | T6  | FussBinomial(k)       | `(k+1)^{1/k} [(1+1/k) - ((k-ℓ+1)/k)/(kx-(ℓ-1))]`    |
//!
//! The `(k+1)^{1/k}` prefactors are carried symbolically as radical
//! exponents; after a full sweep over `ℓ` and `i <= n` the accumulated
//! exponent is a multiple of `k` per term, so each product collapses back
//! to an exact rational and the factorization identities are checked with
//! zero tolerance.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::sequences::{self, FamilyId};

/// Individual Bernstein factor, named by the determinacy statement it backs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    T1,
    T2,
    T2Prime,
    T3,
    T5 { k: u32, ell: u32 },
    T6 { k: u32, ell: u32 },
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TheoremId::T1 => write!(f, "T1"),
            TheoremId::T2 => write!(f, "T2"),
            TheoremId::T2Prime => write!(f, "T2'"),
            TheoremId::T3 => write!(f, "T3"),
            TheoremId::T5 { k, ell } => write!(f, "T5(k={k},l={ell})"),
            TheoremId::T6 { k, ell } => write!(f, "T6(k={k},l={ell})"),
        }
    }
}

/// Rational part of an `h`-function: a Möbius form `p - q/(x + r)` or an
/// affine form `p x + q`, with exact rational coefficients.
#[derive(Clone, Debug)]
pub enum HForm {
    Mobius { p: Rational, q: Rational, r: Rational },
    Affine { p: Rational, q: Rational },
}

/// An `h`-function: rational part plus an optional radical prefactor
/// `base^{1/k}`, kept as bookkeeping (exponent count), never a float.
#[derive(Clone, Debug)]
pub struct HFunction {
    pub id: TheoremId,
    pub form: HForm,
    /// `Some((base, k))` carries a `base^{1/k}` prefactor.
    pub radical: Option<(u32, u32)>,
}

impl HFunction {
    /// The `h`-function used in the named proof.
    pub fn for_theorem(id: TheoremId) -> Result<HFunction> {
        let rat = |n: i64, d: i64| Rational::from((n, d));
        let hf = match id {
            // 2(2 - 3/(x+1)) = 4 - 6/(x+1)
            TheoremId::T1 => HFunction {
                id,
                form: HForm::Mobius { p: rat(4, 1), q: rat(6, 1), r: rat(1, 1) },
                radical: None,
            },
            // 2(2 - 1/x) = 4 - 2/x
            TheoremId::T2 => HFunction {
                id,
                form: HForm::Mobius { p: rat(4, 1), q: rat(2, 1), r: rat(0, 1) },
                radical: None,
            },
            TheoremId::T2Prime => HFunction {
                id,
                form: HForm::Mobius { p: rat(2, 1), q: rat(1, 1), r: rat(0, 1) },
                radical: None,
            },
            TheoremId::T3 => HFunction {
                id,
                form: HForm::Affine { p: rat(2, 1), q: rat(-1, 1) },
                radical: None,
            },
            // (k+1)^{1/k} [(1+1/k) - ((2k-l+2)/k^2)/(x - (l-2)/k)]
            TheoremId::T5 { k, ell } => {
                check_ell(k, ell)?;
                let (ki, elli) = (k as i64, ell as i64);
                HFunction {
                    id,
                    form: HForm::Mobius {
                        p: rat(ki + 1, ki),
                        q: rat(2 * ki - elli + 2, ki * ki),
                        r: rat(-(elli - 2), ki),
                    },
                    radical: Some((k + 1, k)),
                }
            }
            // (k+1)^{1/k} [(1+1/k) - ((k-l+1)/k^2)/(x - (l-1)/k)]
            TheoremId::T6 { k, ell } => {
                check_ell(k, ell)?;
                let (ki, elli) = (k as i64, ell as i64);
                HFunction {
                    id,
                    form: HForm::Mobius {
                        p: rat(ki + 1, ki),
                        q: rat(ki - elli + 1, ki * ki),
                        r: rat(-(elli - 1), ki),
                    },
                    radical: Some((k + 1, k)),
                }
            }
        };
        Ok(hf)
    }

    /// The domain shift making `f(x) = h(x + shift)` well-defined on
    /// `x > 0`: `1/2` for T1/T2/T2'/T3 and `ℓ/(k+1)` for T5/T6, which
    /// always clears the pole of the Möbius part since
    /// `(ℓ-2)/k < ℓ/(k+1)` for `ℓ <= k`.
    pub fn domain_shift(&self) -> Rational {
        match self.id {
            TheoremId::T5 { k, ell } | TheoremId::T6 { k, ell } => Rational::from((ell, k + 1)),
            _ => Rational::from((1, 2)),
        }
    }

    /// Rational part of `h(x)` at a rational point (radical prefactor not
    /// included). Errors on the pole.
    pub fn eval_rational_part(&self, x: &Rational) -> Result<Rational> {
        match &self.form {
            HForm::Mobius { p, q, r } => {
                let denom = Rational::from(x + r);
                if denom.cmp0() == std::cmp::Ordering::Equal {
                    return Err(Error::PoleInDomain(format!("{}", -r.clone())));
                }
                Ok(p - (q / denom))
            }
            HForm::Affine { p, q } => Ok(Rational::from(p * x) + q),
        }
    }
}

fn check_ell(k: u32, ell: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::domain("T5/T6 factors require k >= 2"));
    }
    if !(1..=k).contains(&ell) {
        return Err(Error::domain(format!("factor index l = {ell} outside 1..={k}")));
    }
    Ok(())
}

/// A family-level factorization: one `h`-function, or the `ℓ = 1..k` sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationTheorem {
    T1,
    T2,
    T2Prime,
    T3,
    T5 { k: u32 },
    T6 { k: u32 },
}

impl FactorizationTheorem {
    pub fn parse(s: &str, k: Option<u32>) -> Result<Self> {
        let need_k = || k.ok_or_else(|| Error::domain(format!("theorem `{s}` requires --k")));
        Ok(match s {
            "t1" => FactorizationTheorem::T1,
            "t2" => FactorizationTheorem::T2,
            "t2prime" | "t2'" => FactorizationTheorem::T2Prime,
            "t3" => FactorizationTheorem::T3,
            "t5" => FactorizationTheorem::T5 { k: need_k()? },
            "t6" => FactorizationTheorem::T6 { k: need_k()? },
            other => return Err(Error::domain(format!("unknown theorem id `{other}`"))),
        })
    }

    /// The `h`-functions whose product over integers rebuilds the family.
    pub fn h_functions(&self) -> Result<Vec<HFunction>> {
        Ok(match self {
            FactorizationTheorem::T1 => vec![HFunction::for_theorem(TheoremId::T1)?],
            FactorizationTheorem::T2 => vec![HFunction::for_theorem(TheoremId::T2)?],
            FactorizationTheorem::T2Prime => vec![HFunction::for_theorem(TheoremId::T2Prime)?],
            FactorizationTheorem::T3 => vec![HFunction::for_theorem(TheoremId::T3)?],
            FactorizationTheorem::T5 { k } => (1..=*k)
                .map(|ell| HFunction::for_theorem(TheoremId::T5 { k: *k, ell }))
                .collect::<Result<_>>()?,
            FactorizationTheorem::T6 { k } => (1..=*k)
                .map(|ell| HFunction::for_theorem(TheoremId::T6 { k: *k, ell }))
                .collect::<Result<_>>()?,
        })
    }

    /// The family whose terms the product must reproduce.
    pub fn target_family(&self) -> FamilyId {
        match self {
            FactorizationTheorem::T1 => FamilyId::Catalan,
            FactorizationTheorem::T2 => FamilyId::CentralBinomial,
            FactorizationTheorem::T2Prime => FamilyId::CentralBinomialScaled,
            FactorizationTheorem::T3 => FamilyId::DoubleFactorial,
            FactorizationTheorem::T5 { k } => FamilyId::FussCatalan { k: *k },
            FactorizationTheorem::T6 { k } => FamilyId::FussBinomial { k: *k },
        }
    }
}

/// Verify exactly that `Π_{i<=n} h(i)` (with the inner `ℓ` sweep for
/// T5/T6) reproduces the target family's terms for every `n <= n_max`.
/// Radical exponents accumulate `k` per completed `i`, so the running
/// product collapses to an exact rational `value * (k+1)^(count/k)` at
/// every whole `n`.
pub fn bernstein_product_check(theorem: FactorizationTheorem, n_max: usize) -> Result<bool> {
    let hs = theorem.h_functions()?;
    let target = sequences::generate(&theorem.target_family(), n_max)?;
    let target = target.exact_terms().expect("factorization targets are exact");

    let radical = hs[0].radical;
    let mut value = Rational::from(1);
    let mut radical_count: u32 = 0;
    if target[0] != 1 {
        return Ok(false);
    }
    for n in 1..=n_max {
        let x = Rational::from(n as u64);
        for h in &hs {
            value *= h.eval_rational_part(&x)?;
            if h.radical.is_some() {
                radical_count += 1;
            }
        }
        // collapse (k+1)^(count/k) — count is a multiple of k at whole n
        let collapsed = match radical {
            Some((base, k)) => {
                if !radical_count.is_multiple_of(k) {
                    return Err(Error::domain(
                        "radical exponent not a multiple of k at a whole product".to_string(),
                    ));
                }
                &value * Rational::from(base).pow(radical_count / k)
            }
            None => value.clone(),
        };
        if collapsed != target[n] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check that `f(x) = h(x + shift)` has a completely monotone derivative
/// (so `f` is Bernstein), using the closed-form derivatives of the
/// Möbius/affine shapes: for `f = p - q/(x + r')`,
/// `f^(j)(x) = (-1)^(j+1) j! q / (x + r')^(j+1)`, hence
/// `(-1)^(j-1) f^(j)(x) = j! q / (x+r')^(j+1)`; affine forms have `f' = p`
/// and vanishing higher derivatives. Signs are verified exactly at every
/// grid point for `j = 1..=j_max`, along with nonnegativity of `f` itself.
pub fn complete_monotonicity_check(
    hf: &HFunction,
    shift: &Rational,
    j_max: u32,
    grid: &[Rational],
) -> Result<bool> {
    if j_max < 1 {
        return Err(Error::domain("complete_monotonicity_check: j_max must be >= 1"));
    }
    if grid.iter().any(|x| x.cmp0() != std::cmp::Ordering::Greater) {
        return Err(Error::domain("grid points must be positive"));
    }
    match &hf.form {
        HForm::Affine { p, q } => {
            // f(x) = p(x + shift) + q; Bernstein iff p >= 0 and f >= 0 at 0+
            let at_zero = Rational::from(p * shift) + q;
            Ok(p.cmp0() != std::cmp::Ordering::Less && at_zero.cmp0() != std::cmp::Ordering::Less)
        }
        HForm::Mobius { p, q, r } => {
            let r_shifted = Rational::from(r + shift);
            for x in grid {
                let pole_arg = Rational::from(x + &r_shifted);
                if pole_arg.cmp0() != std::cmp::Ordering::Greater {
                    return Err(Error::PoleInDomain(format!("{}", -r_shifted.clone())));
                }
                // f >= 0 at the grid point
                let f_val = p - Rational::from(q / &pole_arg);
                if f_val.cmp0() == std::cmp::Ordering::Less {
                    return Ok(false);
                }
                // (-1)^(j-1) f^(j) = j! q / (x+r')^(j+1): sign is sign(q)
                // for every j; evaluate the j_max cases exactly anyway so a
                // constructed bad form fails on concrete numbers
                let mut fact = Rational::from(1);
                for j in 1..=j_max {
                    fact *= Rational::from(j);
                    let deriv = Rational::from(&fact * q) / pole_arg.clone().pow(j + 1);
                    if deriv.cmp0() == std::cmp::Ordering::Less {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Determinacy verdicts; conjectured variants mark the gamma-power family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeterminacyVerdict {
    SDet,
    SIndet,
    SDetConjectured,
    SIndetConjectured,
}

impl DeterminacyVerdict {
    pub fn slug(&self) -> &'static str {
        match self {
            DeterminacyVerdict::SDet => "S-det",
            DeterminacyVerdict::SIndet => "S-indet",
            DeterminacyVerdict::SDetConjectured => "S-det-conjectured",
            DeterminacyVerdict::SIndetConjectured => "S-indet-conjectured",
        }
    }
}

/// A verdict plus the statement it rests on.
#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: DeterminacyVerdict,
    pub citation: String,
}

/// Classify `{m_n^c}` as S-det or S-indet from the rule table:
/// bounded-support families (Catalan, central binomial both scalings, Fuss
/// families) are S-det for every `c > 0`; `DoubleFactorial` and
/// `Factorial` are S-det iff `c <= 2`; `EvenFactorial` iff `c <= 1`;
/// `KFactorial(k)` iff `kc <= 2`; `GammaPower(a)` iff `ac <= 2`, always
/// tagged conjectured. Exact rational comparison decides the boundary.
pub fn determinacy_classify_rational(family: &FamilyId, c: &Rational) -> Result<Classification> {
    if c.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::domain("determinacy_classify: c must be positive"));
    }
    family.validate()?;
    let fam = family.clone().canonicalize();
    let (det, conjectural, citation) = match &fam {
        FamilyId::Catalan => (true, false, "Theorem 1(b)"),
        FamilyId::CentralBinomial => (true, false, "Theorem 2(c)"),
        FamilyId::CentralBinomialScaled => (true, false, "Theorem 2'(c)"),
        FamilyId::FussCatalan { .. } => (true, false, "Theorem 5(b)"),
        FamilyId::FussBinomial { .. } => (true, false, "Theorem 6(b)"),
        FamilyId::DoubleFactorial => (*c <= 2, false, "Theorem 3(b)"),
        FamilyId::Factorial => (*c <= 2, false, "Lemma 5(b)"),
        FamilyId::EvenFactorial => (*c <= 1, false, "Theorem 4(b)"),
        FamilyId::KFactorial { k } => {
            let bound = Rational::from((2, *k));
            (*c <= bound, false, "Theorem 7(b)")
        }
        FamilyId::GammaPower { a } => {
            (Rational::from(c * a) <= 2, true, "Conjecture 2(b)")
        }
    };
    let verdict = match (det, conjectural) {
        (true, false) => DeterminacyVerdict::SDet,
        (false, false) => DeterminacyVerdict::SIndet,
        (true, true) => DeterminacyVerdict::SDetConjectured,
        (false, true) => DeterminacyVerdict::SIndetConjectured,
    };
    Ok(Classification {
        verdict,
        citation: citation.to_string(),
    })
}

/// [`determinacy_classify_rational`] with an f64 exponent (converted
/// exactly; the dyadic value is what gets compared to the boundary).
pub fn determinacy_classify(family: &FamilyId, c: f64) -> Result<Classification> {
    let c_rat = Rational::from_f64(c)
        .ok_or_else(|| Error::domain("determinacy_classify: c must be finite"))?;
    determinacy_classify_rational(family, &c_rat)
}

/// Heuristic verdict from the Carleman partial sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarlemanVerdict {
    DivergesLikely,
    ConvergesLikely,
    /// `rho_hat` landed inside the margin band around the exponent -1;
    /// finite-N regression cannot resolve the boundary, which is decided by
    /// the classifier instead.
    BoundaryInconclusive,
}

impl CarlemanVerdict {
    pub fn slug(&self) -> &'static str {
        match self {
            CarlemanVerdict::DivergesLikely => "diverges-likely",
            CarlemanVerdict::ConvergesLikely => "converges-likely",
            CarlemanVerdict::BoundaryInconclusive => "boundary-inconclusive",
        }
    }
}

/// Margin band half-width around `rho_hat = -1`.
pub const CARLEMAN_MARGIN: f64 = 0.05;

/// Carleman diagnostic for `{m_n^c}`: the partial sums of
/// `Σ m_n^{-c/(2n)}`, the estimated power-law exponent of the terms, the
/// divergence heuristic, and the classifier's verdict for cross-reference.
#[derive(Clone, Debug)]
pub struct CarlemanDiagnostic {
    pub family: FamilyId,
    pub c: f64,
    pub n_terms: usize,
    pub partial_sums: Vec<Float>,
    pub rho_hat: f64,
    pub verdict: CarlemanVerdict,
    pub theorem_verdict: DeterminacyVerdict,
    pub citation: String,
}

/// Compute the Carleman diagnostic: terms `m_n^{-c/(2n)}` at precision `P`
/// for `n = 1..=N`, a least-squares slope of `log term_n` against `log n`
/// over the upper half `n in [N/2, N]`, and the margin-band verdict
/// (diverges when `rho_hat >= -1 + margin` since `Σ n^ρ` diverges for
/// `ρ >= -1`).
pub fn carleman_diagnose(
    family: &FamilyId,
    c: f64,
    n_terms: usize,
    prec: u32,
) -> Result<CarlemanDiagnostic> {
    if n_terms < 16 {
        return Err(Error::domain("carleman_diagnose: need N >= 16"));
    }
    if !(c > 0.0) {
        return Err(Error::domain("carleman_diagnose: c must be positive"));
    }
    let seq = sequences::generate_with_precision(family, n_terms, prec)?;
    let (values, _) = seq.float_terms(prec);

    let mut log_terms = Vec::with_capacity(n_terms);
    let mut partial_sums = Vec::with_capacity(n_terms);
    let mut acc = Float::with_val(prec, 0);
    for n in 1..=n_terms {
        let ln_m = Float::with_val(prec, values[n].ln_ref());
        let exponent = Float::with_val(prec, -c / (2.0 * n as f64));
        let log_term = Float::with_val(prec, &ln_m * &exponent);
        acc += Float::with_val(prec, log_term.exp_ref());
        partial_sums.push(acc.clone());
        log_terms.push(log_term.to_f64());
    }

    // least-squares slope of log term_n vs log n over the upper half
    let lo = n_terms / 2;
    let pts: Vec<(f64, f64)> = (lo..=n_terms)
        .map(|n| ((n as f64).ln(), log_terms[n - 1]))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let rho_hat = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    let verdict = if (rho_hat + 1.0).abs() < CARLEMAN_MARGIN {
        CarlemanVerdict::BoundaryInconclusive
    } else if rho_hat >= -1.0 {
        CarlemanVerdict::DivergesLikely
    } else {
        CarlemanVerdict::ConvergesLikely
    };
    let class = determinacy_classify(family, c)?;
    Ok(CarlemanDiagnostic {
        family: family.clone().canonicalize(),
        c,
        n_terms,
        partial_sums,
        rho_hat,
        verdict,
        theorem_verdict: class.verdict,
        citation: class.citation,
    })
}

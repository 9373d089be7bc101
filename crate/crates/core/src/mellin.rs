//! High-precision log-gamma kernel and the closed-form Mellin transforms of
//! the sequence families, with moment-consistency, dual-form, duplication,
//! and scaling checks.
//!
//! Every supported family has `M_c(s) = M_1(s)^c` with `log M_1(s)` a short
//! combination of `ln Γ` values and elementary terms, so evaluation happens
//! in log space and exponentiates once:
//!
//! | family                | `log M_1(s)`                                       |
//! |-----------------------|----------------------------------------------------|
//! | Catalan               | `-ln(s+1) + lnΓ(2s+1) - 2 lnΓ(s+1)`                |
//! | CentralBinomial       | `lnΓ(2s+1) - 2 lnΓ(s+1)`                           |
//! | CentralBinomialScaled | `-s ln2 + lnΓ(2s+1) - 2 lnΓ(s+1)`                  |
//! | DoubleFactorial       | `-s ln2 + lnΓ(2s+1) - lnΓ(s+1)`                    |
//! | Factorial             | `lnΓ(s+1)`                                         |
//! | EvenFactorial         | `lnΓ(2s+1)`                                        |
//! | FussCatalan(k)        | `-ln(ks+1) + lnΓ((k+1)s+1) - lnΓ(s+1) - lnΓ(ks+1)` |
//! | FussBinomial(k)       | `lnΓ((k+1)s+1) - lnΓ(s+1) - lnΓ(ks+1)`             |
//! | GammaPower(a)         | `lnΓ(as+1)` (conjectural)                          |
//!
//! `KFactorial` with `k >= 3` has no closed form here and is refused.
//!
//! The transforms for DoubleFactorial, Factorial, EvenFactorial, and
//! GammaPower are asserted only where the representing measure is
//! determinate (`c <= 2`, `c <= 2`, `c <= 1`, `ac <= 2` respectively);
//! outside that range evaluation is refused unless the caller explicitly
//! asks for an uncertified value.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::hiprec::{bernoulli_even, float_from_rational, pi, rel_diff};
use crate::sequences::{self, FamilyId};

/// `ln Γ(x)` for positive `x` at `prec` bits, by argument-shift recursion
/// `ln Γ(x) = ln Γ(x+m) - Σ_{j<m} ln(x+j)` into a Stirling-series regime
/// sized to the precision: the series at height `y` bottoms out near
/// `e^{-2πy}`, so the shift threshold grows linearly in the bit target and
/// the asymptotic sum is truncated at the first term below the target
/// (which also bounds the remainder for real positive arguments).
pub fn log_gamma(x: &Float, prec: u32) -> Result<Float> {
    if !(x.is_finite() && x.cmp0() == Some(std::cmp::Ordering::Greater)) {
        return Err(Error::domain(format!("log_gamma: x must be positive, got {x}")));
    }
    if *x == 1u32 || *x == 2u32 {
        return Ok(Float::with_val(prec, 0));
    }
    let wp = prec + 64;
    let threshold = 0.13 * wp as f64 + 8.0;
    let mut y = Float::with_val(wp, x);
    let mut shift_sum = Float::with_val(wp, 0);
    while y < threshold {
        shift_sum += Float::with_val(wp, y.ln_ref());
        y += 1;
    }

    // Stirling: (y - 1/2) ln y - y + ln(2π)/2 + Σ B_2j / (2j(2j-1) y^(2j-1))
    let ln_y = Float::with_val(wp, y.ln_ref());
    let mut total = Float::with_val(wp, &y - &Float::with_val(wp, 0.5f32));
    total *= &ln_y;
    total -= &y;
    let two_pi = Float::with_val(wp, 2 * pi(wp));
    total += Float::with_val(wp, two_pi.ln_ref()) / 2u32;

    let target = Float::with_val(
        wp,
        Float::with_val(wp, &total).abs().max(&Float::with_val(wp, 1)),
    ) * crate::hiprec::exp2(-(wp as i32) - 4);
    let y2 = Float::with_val(wp, y.square_ref());
    let mut ypow = y.clone(); // y^(2j-1)
    for j in 1..=(4 * wp as usize) {
        let b = bernoulli_even(j);
        let denom = Rational::from(((2 * j) * (2 * j - 1), 1u32));
        let coeff = float_from_rational(&(b / denom), wp);
        let term = coeff / &ypow;
        let small = Float::with_val(wp, term.abs_ref()) < target;
        total += term;
        if small {
            break;
        }
        ypow *= &y2;
    }
    total -= &shift_sum;
    Ok(Float::with_val(prec, total))
}

/// The exponent range `(0, c_max]` on which the family's measure is
/// determinate and the closed form is asserted. `None` means every `c > 0`.
pub fn determinate_c_max(family: &FamilyId) -> Option<Rational> {
    match family.clone().canonicalize() {
        FamilyId::DoubleFactorial | FamilyId::Factorial => Some(Rational::from(2)),
        FamilyId::EvenFactorial => Some(Rational::from(1)),
        FamilyId::KFactorial { k } => Some(Rational::from((2, k))),
        FamilyId::GammaPower { a } => Some(Rational::from(2) / a),
        _ => None,
    }
}

/// Statement governing the determinate range of the family's transform.
fn range_citation(family: &FamilyId) -> &'static str {
    match family.clone().canonicalize() {
        FamilyId::DoubleFactorial => "Theorem 3(c)",
        FamilyId::Factorial => "Lemma 5(c)",
        FamilyId::EvenFactorial => "Theorem 4(c)",
        FamilyId::GammaPower { .. } => "Conjecture 2(c)",
        FamilyId::KFactorial { .. } => "Theorem 7",
        _ => "",
    }
}

fn check_range(family: &FamilyId, c: f64) -> Result<()> {
    if let Some(cmax) = determinate_c_max(family) {
        let c_rat = Rational::from_f64(c).ok_or_else(|| Error::domain("c must be finite"))?;
        if c_rat > cmax {
            return Err(Error::OutsideDeterminateRange {
                family: family.to_string(),
                c,
                citation: range_citation(family).to_string(),
            });
        }
    }
    Ok(())
}

/// `log M_1(s)` for the family, at `prec` working bits.
fn log_mellin_base(family: &FamilyId, s: &Float, prec: u32) -> Result<Float> {
    let one = Float::with_val(prec, 1);
    let s1 = Float::with_val(prec, s + &one);
    let s2 = Float::with_val(prec, Float::with_val(prec, 2 * s) + &one);
    let ln2 = Float::with_val(prec, 2u32).ln();
    Ok(match family {
        FamilyId::Catalan => {
            let lg = log_gamma(&s2, prec)? - 2u32 * log_gamma(&s1, prec)?;
            lg - Float::with_val(prec, s1.ln_ref())
        }
        FamilyId::CentralBinomial => log_gamma(&s2, prec)? - 2u32 * log_gamma(&s1, prec)?,
        FamilyId::CentralBinomialScaled => {
            log_gamma(&s2, prec)? - 2u32 * log_gamma(&s1, prec)? - Float::with_val(prec, s * &ln2)
        }
        FamilyId::DoubleFactorial => {
            log_gamma(&s2, prec)? - log_gamma(&s1, prec)? - Float::with_val(prec, s * &ln2)
        }
        FamilyId::Factorial => log_gamma(&s1, prec)?,
        FamilyId::EvenFactorial => log_gamma(&s2, prec)?,
        FamilyId::FussCatalan { k } => {
            let ks1 = Float::with_val(prec, Float::with_val(prec, *k * s) + &one);
            let k1s1 = Float::with_val(prec, Float::with_val(prec, (*k + 1) * s) + &one);
            log_gamma(&k1s1, prec)?
                - log_gamma(&s1, prec)?
                - log_gamma(&ks1, prec)?
                - Float::with_val(prec, ks1.ln_ref())
        }
        FamilyId::FussBinomial { k } => {
            let ks1 = Float::with_val(prec, Float::with_val(prec, *k * s) + &one);
            let k1s1 = Float::with_val(prec, Float::with_val(prec, (*k + 1) * s) + &one);
            log_gamma(&k1s1, prec)? - log_gamma(&s1, prec)? - log_gamma(&ks1, prec)?
        }
        FamilyId::GammaPower { a } => {
            let as1 = Float::with_val(prec, Float::with_val(prec, s * float_from_rational(a, prec)) + &one);
            log_gamma(&as1, prec)?
        }
        FamilyId::KFactorial { .. } => {
            return Err(Error::domain(format!(
                "{family} has no closed-form Mellin transform (k >= 3)"
            )))
        }
    })
}

/// A family/exponent pair viewed as the Mellin transform `s -> M_c(s)`.
#[derive(Clone, Debug)]
pub struct MellinForm {
    pub family: FamilyId,
    pub c: f64,
    pub conjectural: bool,
}

impl MellinForm {
    /// Range-checked constructor.
    pub fn new(family: FamilyId, c: f64) -> Result<Self> {
        let family = family.canonicalize();
        family.validate()?;
        check_range(&family, c)?;
        // probe for unsupported families early (s value irrelevant)
        log_mellin_base(&family, &Float::with_val(64, 0), 64)?;
        Ok(MellinForm {
            conjectural: family.is_conjectural(),
            family,
            c,
        })
    }

    pub fn eval(&self, s: f64, prec: u32) -> Result<Float> {
        mellin_uncertified(&self.family, self.c, s, prec)
    }
}

/// `M_c(s)` for the family, refusing exponents outside the determinate
/// range (see module docs). `s >= 0` required.
pub fn mellin(family: &FamilyId, c: f64, s: f64, prec: u32) -> Result<Float> {
    check_range(family, c)?;
    mellin_uncertified(family, c, s, prec)
}

/// `M_c(s)` without the determinate-range gate. The value is the same
/// closed form; outside the range it is not asserted to be the transform of
/// any measure.
pub fn mellin_uncertified(family: &FamilyId, c: f64, s: f64, prec: u32) -> Result<Float> {
    if !(s >= 0.0) {
        return Err(Error::domain("mellin: s must be >= 0"));
    }
    if !(c > 0.0) {
        return Err(Error::domain("mellin: c must be > 0"));
    }
    let family = family.clone().canonicalize();
    family.validate()?;
    let wp = prec + 32;
    let sf = Float::with_val(wp, s);
    let log_base = log_mellin_base(&family, &sf, wp)?;
    let exponent = Float::with_val(wp, &log_base * &Float::with_val(53, c));
    Ok(Float::with_val(prec, exponent.exp_ref()))
}

/// The alternative printed closed form, available for the four families
/// whose transform is stated twice (duplication-formula corollary):
///
/// - Catalan: `(2^{2s}/√π · Γ(s+1/2)/Γ(s+2))^c`
/// - CentralBinomial: `(2^{2s}/√π · Γ(s+1/2)/Γ(s+1))^c`
/// - CentralBinomialScaled: `(2^s/√π · Γ(s+1/2)/Γ(s+1))^c`
/// - DoubleFactorial: `(2^s/√π · Γ(s+1/2))^c`
pub fn mellin_alt(family: &FamilyId, c: f64, s: f64, prec: u32) -> Result<Float> {
    if !(s >= 0.0) {
        return Err(Error::domain("mellin_alt: s must be >= 0"));
    }
    check_range(family, c)?;
    let wp = prec + 32;
    let sf = Float::with_val(wp, s);
    let ln2 = Float::with_val(wp, 2u32).ln();
    let half_ln_pi = Float::with_val(wp, pi(wp).ln_ref()) / 2u32;
    let s_half = Float::with_val(wp, &sf + &Float::with_val(wp, 0.5f32));
    let lg_half = log_gamma(&s_half, wp)?;
    let log_base = match family.clone().canonicalize() {
        FamilyId::Catalan => {
            let s2 = Float::with_val(wp, &sf + &Float::with_val(wp, 2));
            Float::with_val(wp, 2 * &sf) * &ln2 - &half_ln_pi + &lg_half - log_gamma(&s2, wp)?
        }
        FamilyId::CentralBinomial => {
            let s1 = Float::with_val(wp, &sf + &Float::with_val(wp, 1));
            Float::with_val(wp, 2 * &sf) * &ln2 - &half_ln_pi + &lg_half - log_gamma(&s1, wp)?
        }
        FamilyId::CentralBinomialScaled => {
            let s1 = Float::with_val(wp, &sf + &Float::with_val(wp, 1));
            Float::with_val(wp, &sf * &ln2) - &half_ln_pi + &lg_half - log_gamma(&s1, wp)?
        }
        FamilyId::DoubleFactorial => Float::with_val(wp, &sf * &ln2) - &half_ln_pi + &lg_half,
        other => {
            return Err(Error::domain(format!(
                "{other} has a single printed Mellin form"
            )))
        }
    };
    let exponent = Float::with_val(wp, &log_base * &Float::with_val(53, c));
    Ok(Float::with_val(prec, exponent.exp_ref()))
}

/// Max over `n = 0..=n_max` of the relative residual between `M_c(n)` and
/// the exact power `m_n^c` computed through the sequences module.
pub fn mellin_moment_consistency(family: &FamilyId, c: f64, n_max: usize, prec: u32) -> Result<Float> {
    check_range(family, c)?;
    let seq = sequences::generate_with_precision(family, n_max, prec)?;
    let pow = sequences::power(&seq, c, prec)?;
    let mut worst = Float::with_val(prec, 0);
    for n in 0..=n_max {
        let transform = mellin_uncertified(family, c, n as f64, prec)?;
        let r = rel_diff(&transform, &pow.values()[n]);
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

/// Relative residual of the gamma duplication formula
/// `Γ(x)Γ(x+1/2) = 2^{1-2x} √π Γ(2x)` at `x > 0`, both sides evaluated
/// through [`log_gamma`].
pub fn duplication_check(x: f64, prec: u32) -> Result<Float> {
    if !(x > 0.0) {
        return Err(Error::domain("duplication_check: x must be positive"));
    }
    let wp = prec + 32;
    let xf = Float::with_val(wp, x);
    let lhs = log_gamma(&xf, wp)?
        + log_gamma(&Float::with_val(wp, &xf + &Float::with_val(wp, 0.5f32)), wp)?;
    let ln2 = Float::with_val(wp, 2u32).ln();
    let rhs = Float::with_val(wp, Float::with_val(wp, 1u32) - Float::with_val(wp, 2 * &xf)) * &ln2
        + Float::with_val(wp, pi(wp).ln_ref()) / 2u32
        + log_gamma(&Float::with_val(wp, 2 * &xf), wp)?;
    // |e^(lhs-rhs) - 1| is the relative residual of the un-logged identity
    let mut resid = Float::with_val(wp, lhs - rhs).exp();
    resid -= 1u32;
    Ok(Float::with_val(prec, resid.abs()))
}

/// Scaling-law check: the transform of the `a`-scaled family equals both
/// `a^{-cs} M_c(s)` and `(a^{-s} M_1(s))^c`. Returns the max relative
/// residual across the two routes (and the direct transform of the named
/// scaled family when `(family, a)` is `(CentralBinomial, 2)`).
pub fn mellin_scaling_check(
    family: &FamilyId,
    a: &Rational,
    c: f64,
    s: f64,
    prec: u32,
) -> Result<Float> {
    if a.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::domain("mellin_scaling_check: a must be positive"));
    }
    let wp = prec + 32;
    let sf = Float::with_val(wp, s);
    let ln_a = float_from_rational(a, wp).ln();
    let cf = Float::with_val(53, c);

    // route 1: a^{-cs} * M_c(s)
    let m_c = mellin(family, c, s, wp)?;
    let neg_cs = -Float::with_val(wp, &cf * &sf);
    let route1 = Float::with_val(wp, neg_cs * &ln_a).exp() * &m_c;

    // route 2: (a^{-s} * M_1(s))^c
    let m_1 = mellin(family, 1.0, s, wp)?;
    let neg_s_lna = -Float::with_val(wp, &sf * &ln_a);
    let scaled_base = Float::with_val(wp, neg_s_lna.exp() * &m_1);
    let route2 = Float::with_val(wp, Float::with_val(wp, scaled_base.ln_ref()) * &cf).exp();

    let mut worst = rel_diff(&route1, &route2);

    // direct form of the named scaled family, when there is one
    if *family == FamilyId::CentralBinomial && *a == 2 {
        let direct = mellin(&FamilyId::CentralBinomialScaled, c, s, wp)?;
        let r = rel_diff(&direct, &route1);
        if r > worst {
            worst = r;
        }
    }
    Ok(Float::with_val(prec, worst))
}

/// CSV tabulation `(s, M_c(s))` on an equispaced grid.
pub fn mellin_csv(family: &FamilyId, c: f64, s_max: f64, s_step: f64, prec: u32) -> Result<String> {
    if !(s_step > 0.0) || !(s_max >= 0.0) {
        return Err(Error::domain("mellin_csv: need s_max >= 0 and s_step > 0"));
    }
    let mut out = String::from("s,value\n");
    let mut i = 0u64;
    loop {
        let s = i as f64 * s_step;
        if s > s_max + 1e-12 {
            break;
        }
        let v = mellin(family, c, s, prec)?;
        out.push_str(&format!("{s},{}\n", crate::hiprec::decimal_string(&v)));
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hiprec::exp2;

    fn f(prec: u32, v: f64) -> Float {
        Float::with_val(prec, v)
    }

    #[test]
    fn log_gamma_at_one_and_two_is_zero() {
        assert_eq!(log_gamma(&f(128, 1.0), 128).unwrap(), 0);
        assert_eq!(log_gamma(&f(128, 2.0), 128).unwrap(), 0);
    }

    #[test]
    fn log_gamma_at_half_is_ln_sqrt_pi() {
        let v = log_gamma(&f(256, 0.5), 256).unwrap();
        let oracle = Float::with_val(300, pi(300)).sqrt().ln();
        assert!(rel_diff(&v, &oracle) < exp2(-240));
    }

    #[test]
    fn log_gamma_at_five_is_ln_24() {
        let v = log_gamma(&f(256, 5.0), 256).unwrap();
        let oracle = Float::with_val(300, 24).ln();
        assert!(rel_diff(&v, &oracle) < exp2(-240));
    }

    #[test]
    fn log_gamma_matches_mpfr_across_range_and_precision() {
        // MPFR's own lngamma is the independent oracle
        for prec in [96u32, 256, 640] {
            for x in [0.125f64, 0.75, 1.5, 3.25, 10.0, 47.5, 120.0, 1000.5] {
                let mine = log_gamma(&f(prec, x), prec).unwrap();
                let oracle = Float::with_val(prec + 64, x).ln_gamma();
                let tol = exp2(-(prec as i32) + 8);
                assert!(
                    rel_diff(&mine, &oracle) < tol,
                    "x = {x}, prec = {prec}: {}",
                    rel_diff(&mine, &oracle)
                );
            }
        }
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(&f(64, 0.0), 64).is_err());
        assert!(log_gamma(&f(64, -3.0), 64).is_err());
    }

    #[test]
    fn mellin_catalan_at_integer_points() {
        // (1/2) Γ(3)/Γ(2)^2 = 1 = C_1
        let v = mellin(&FamilyId::Catalan, 1.0, 1.0, 256).unwrap();
        assert!(rel_diff(&v, &f(64, 1.0)) < exp2(-200));
        // s = 0 gives 1 for any family and c
        let v = mellin(&FamilyId::Catalan, 0.7, 0.0, 256).unwrap();
        assert!(rel_diff(&v, &f(64, 1.0)) < exp2(-200));
    }

    #[test]
    fn mellin_fuss_catalan_k2_at_s2_is_3() {
        let v = mellin(&FamilyId::FussCatalan { k: 2 }, 1.0, 2.0, 256).unwrap();
        assert!(rel_diff(&v, &f(64, 3.0)) < exp2(-200));
    }

    #[test]
    fn mellin_refuses_out_of_range_c() {
        let err = mellin(&FamilyId::DoubleFactorial, 2.5, 1.0, 128);
        assert!(matches!(err, Err(Error::OutsideDeterminateRange { .. })));
        let err = mellin(&FamilyId::EvenFactorial, 1.01, 1.0, 128);
        assert!(matches!(err, Err(Error::OutsideDeterminateRange { .. })));
        // but the uncertified escape hatch evaluates
        assert!(mellin_uncertified(&FamilyId::DoubleFactorial, 2.5, 1.0, 128).is_ok());
    }

    #[test]
    fn mellin_refuses_k_factorial() {
        assert!(mellin(&FamilyId::KFactorial { k: 3 }, 0.5, 1.0, 128).is_err());
        // k = 2 canonicalizes to EvenFactorial and works
        assert!(mellin(&FamilyId::KFactorial { k: 2 }, 0.5, 1.0, 128).is_ok());
    }

    #[test]
    fn moment_consistency_catalan() {
        let r = mellin_moment_consistency(&FamilyId::Catalan, 1.0, 15, 256).unwrap();
        assert!(r < f(64, 1e-60), "residual {r}");
    }

    #[test]
    fn moment_consistency_double_factorial_squared() {
        let r = mellin_moment_consistency(&FamilyId::DoubleFactorial, 2.0, 10, 256).unwrap();
        assert!(r < f(64, 1e-60), "residual {r}");
    }

    #[test]
    fn moment_consistency_trivial_at_zero() {
        let r = mellin_moment_consistency(&FamilyId::Factorial, 0.5, 0, 128).unwrap();
        assert!(r < f(64, 1e-30));
    }

    #[test]
    fn duplication_examples() {
        for x in [1.0, 3.7, 0.5] {
            let r = duplication_check(x, 256).unwrap();
            assert!(r < exp2(-240), "x = {x}: {r}");
        }
        assert!(duplication_check(0.0, 128).is_err());
    }

    #[test]
    fn dual_forms_agree() {
        for fam in [
            FamilyId::Catalan,
            FamilyId::CentralBinomial,
            FamilyId::CentralBinomialScaled,
            FamilyId::DoubleFactorial,
        ] {
            for s in [0.0, 0.5, 1.0, 2.5, 7.0] {
                let a = mellin(&fam, 1.3, s, 256).unwrap();
                let b = mellin_alt(&fam, 1.3, s, 256).unwrap();
                assert!(rel_diff(&a, &b) < exp2(-200), "{fam} s={s}");
            }
        }
        assert!(mellin_alt(&FamilyId::Factorial, 1.0, 1.0, 128).is_err());
    }

    #[test]
    fn scaling_check_examples() {
        // CentralBinomial scaled by 2 lands on the scaled family's own form
        let r = mellin_scaling_check(&FamilyId::CentralBinomial, &Rational::from(2), 1.0, 3.0, 256)
            .unwrap();
        assert!(r < exp2(-200), "{r}");
        // a = 1 is the identity scaling
        let r = mellin_scaling_check(&FamilyId::Catalan, &Rational::from(1), 0.7, 2.0, 256).unwrap();
        assert!(r < exp2(-200), "{r}");
        // Catalan scaled by 4 against the direct formula route
        let r = mellin_scaling_check(&FamilyId::Catalan, &Rational::from(4), 0.5, 2.0, 256).unwrap();
        assert!(r < exp2(-200), "{r}");
    }

    #[test]
    fn power_law_construction_holds() {
        // every family with a closed form; c capped at the determinate
        // range where one applies (0.3 is inside all of them)
        let all = [
            FamilyId::Catalan,
            FamilyId::CentralBinomial,
            FamilyId::CentralBinomialScaled,
            FamilyId::DoubleFactorial,
            FamilyId::Factorial,
            FamilyId::EvenFactorial,
            FamilyId::FussCatalan { k: 2 },
            FamilyId::FussBinomial { k: 3 },
            FamilyId::GammaPower { a: Rational::from(2) },
        ];
        for fam in all {
            for c in [0.3, 1.0, 1.7] {
                if let Some(cmax) = determinate_c_max(&fam) {
                    if Rational::from_f64(c).unwrap() > cmax {
                        continue;
                    }
                }
                for s in [0.5, 2.0, 10.0] {
                    let direct = mellin(&fam, c, s, 256).unwrap();
                    let base = mellin(&fam, 1.0, s, 320).unwrap();
                    let powed =
                        Float::with_val(320, Float::with_val(320, base.ln_ref()) * &Float::with_val(53, c))
                            .exp();
                    assert!(rel_diff(&direct, &powed) < exp2(-200), "{fam} c={c} s={s}");
                }
            }
        }
    }

    #[test]
    fn log_convexity_of_base_transform() {
        // second differences of log M_1 on a grid in [0, 10]
        for fam in [
            FamilyId::Catalan,
            FamilyId::CentralBinomial,
            FamilyId::DoubleFactorial,
            FamilyId::Factorial,
            FamilyId::FussCatalan { k: 2 },
        ] {
            let h = 0.25;
            let mut prev = Vec::new();
            for i in 0..=40 {
                let s = i as f64 * h;
                let v = mellin(&fam, 1.0, s, 192).unwrap().ln();
                prev.push(v);
            }
            for w in prev.windows(3) {
                let second = Float::with_val(192, &w[0] + &w[2]) - Float::with_val(192, 2 * &w[1]);
                assert!(
                    second > -f(64, 1e-40),
                    "log M_1 not convex for {fam}: {second}"
                );
            }
        }
    }

    #[test]
    fn csv_tabulation_shape() {
        let csv = mellin_csv(&FamilyId::Catalan, 1.0, 2.0, 1.0, 128).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "s,value");
        assert!(lines[1].starts_with("0,0.1000"));
        assert!(mellin_csv(&FamilyId::Catalan, 1.0, 2.0, 0.0, 128).is_err());
    }

    #[test]
    fn mellin_form_constructor_gates() {
        assert!(MellinForm::new(FamilyId::DoubleFactorial, 2.0).is_ok());
        assert!(MellinForm::new(FamilyId::DoubleFactorial, 2.01).is_err());
        let form = MellinForm::new(FamilyId::GammaPower { a: Rational::from(2) }, 1.0).unwrap();
        assert!(form.conjectural);
    }
}

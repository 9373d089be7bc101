//! Stieltjes certification through Hankel matrices.
//!
//! A positive sequence `{m_n}` is a Stieltjes moment sequence exactly when
//! both Hankel families `Δ_n = (m_{i+j})` and `Δ̄_n = (m_{i+j+1})` have
//! nonnegative determinants at every order. For exact rational sequences
//! the leading principal minors are computed fraction-free and the verdict
//! is unconditional. For powered sequences `{m_n^c}` the terms are
//! high-precision reals with certified error bounds, so the minors are
//! evaluated in ball arithmetic: each minor comes back as `value ± bound`
//! and is sign-certified only when it clears the bound with a safety factor
//! of 4. Working precision doubles until every sign resolves or the ceiling
//! `Pmax` is hit, in which case the verdict is `Inconclusive`.

use rug::Float;

use crate::error::{Error, Result};
use crate::exact::{leading_principal_minors, ExactMatrix, Rational};
use crate::hiprec::{decimal_string, Ball, RAD_PREC};
use crate::sequences::{self, FamilyId, MomentSequence, PowerSequence};

/// Sign-certification safety factor applied to accumulated error bounds.
const SAFETY: u32 = 4;

/// One Hankel minor: exact, or enclosed by `value ± bound`.
#[derive(Clone, Debug)]
pub enum MinorValue {
    Exact(Rational),
    Bounded { value: Float, bound: Float },
}

impl MinorValue {
    /// Approximate magnitude for report ordering.
    pub fn approx(&self) -> f64 {
        match self {
            MinorValue::Exact(r) => r.to_f64(),
            MinorValue::Bounded { value, .. } => value.to_f64(),
        }
    }

    pub fn decimal(&self) -> String {
        match self {
            MinorValue::Exact(r) => decimal_string(&Float::with_val(160, r)),
            MinorValue::Bounded { value, .. } => decimal_string(value),
        }
    }
}

/// Certification outcome for one Hankel family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every minor is `>= 0` exactly, or exceeds its error bound.
    CertifiedNonnegative,
    /// The cited minor (index into the minors list) is `< 0` exactly, or
    /// below minus its error bound.
    NegativeMinorFound(usize),
    /// Signs could not be certified at the stated precision ceiling.
    Inconclusive(u32),
}

impl Verdict {
    pub fn slug(&self) -> &'static str {
        match self {
            Verdict::CertifiedNonnegative => "certified-nonnegative",
            Verdict::NegativeMinorFound(_) => "negative-minor-found",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Minors and verdict for one Hankel family of one sequence.
#[derive(Clone, Debug)]
pub struct HankelCertificate {
    pub sequence: String,
    pub order: usize,
    pub shifted: bool,
    pub minors: Vec<MinorValue>,
    pub verdict: Verdict,
    /// Precision that produced the verdict; `None` on the exact path.
    pub precision_bits: Option<u32>,
}

impl HankelCertificate {
    /// Smallest minor by value.
    pub fn min_minor(&self) -> &MinorValue {
        self.minors
            .iter()
            .min_by(|a, b| a.approx().total_cmp(&b.approx()))
            .expect("certificate has at least the order-0 minor")
    }
}

/// The Hankel matrix of order `n` (size `n+1`) with entries `m_{i+j}`
/// (`m_{i+j+1}` when shifted). Requires an exact sequence with at least
/// `2n+1` (`2n+2` shifted) terms.
pub fn hankel_matrix(seq: &MomentSequence, order: usize, shifted: bool) -> Result<ExactMatrix> {
    let needed = 2 * order + 1 + usize::from(shifted);
    if seq.len() < needed {
        return Err(Error::InsufficientTerms {
            needed,
            have: seq.len(),
        });
    }
    let terms = seq
        .exact_terms()
        .ok_or_else(|| Error::InexactSequence(seq.tag().to_string()))?;
    let mut m = ExactMatrix::new(order + 1);
    for i in 0..=order {
        for j in 0..=order {
            m.set(i, j, terms[i + j + usize::from(shifted)].clone());
        }
    }
    Ok(m)
}

fn exact_certificate(label: &str, terms: &[Rational], order: usize, shifted: bool) -> HankelCertificate {
    let mut m = ExactMatrix::new(order + 1);
    for i in 0..=order {
        for j in 0..=order {
            m.set(i, j, terms[i + j + usize::from(shifted)].clone());
        }
    }
    let minors = leading_principal_minors(&m);
    let verdict = match minors
        .iter()
        .position(|d| d.cmp0() == std::cmp::Ordering::Less)
    {
        Some(idx) => Verdict::NegativeMinorFound(idx),
        None => Verdict::CertifiedNonnegative,
    };
    HankelCertificate {
        sequence: label.to_string(),
        order,
        shifted,
        minors: minors.into_iter().map(MinorValue::Exact).collect(),
        verdict,
        precision_bits: None,
    }
}

/// Exact certification of both Hankel families up to `maxorder`.
/// Returns the (unshifted, shifted) pair. Refuses inexact sequences.
pub fn certify_stieltjes_exact(
    seq: &MomentSequence,
    maxorder: usize,
) -> Result<(HankelCertificate, HankelCertificate)> {
    let needed = 2 * maxorder + 2;
    if seq.len() < needed {
        return Err(Error::InsufficientTerms {
            needed,
            have: seq.len(),
        });
    }
    let terms = seq
        .exact_terms()
        .ok_or_else(|| Error::InexactSequence(seq.tag().to_string()))?;
    let label = seq.tag().to_string();
    Ok((
        exact_certificate(&label, terms, maxorder, false),
        exact_certificate(&label, terms, maxorder, true),
    ))
}

/// Outcome of one ball-arithmetic minor sweep at a fixed precision.
struct BallSweep {
    minors: Vec<MinorValue>,
    /// `Some(idx)` when a minor is certified negative.
    negative_at: Option<usize>,
    /// All minors certified (each sign resolved against 4x its bound).
    complete: bool,
}

/// Leading principal minors of the (possibly shifted) Hankel matrix built
/// from `values ± values*relbounds`, via LU elimination in ball arithmetic.
/// Minor `j` is the running product of the first `j+1` pivots.
fn ball_minors(
    values: &[Float],
    relbounds: &[Float],
    order: usize,
    shifted: bool,
    prec: u32,
) -> BallSweep {
    let n = order + 1;
    let off = usize::from(shifted);
    let mut a: Vec<Vec<Ball>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = Float::with_val(prec, &values[i + j + off]);
                    Ball::from_relative(v, &relbounds[i + j + off])
                })
                .collect()
        })
        .collect();

    let mut minors: Vec<MinorValue> = Vec::with_capacity(n);
    let mut running = Ball::exact(Float::with_val(prec, 1));
    let mut negative_at = None;
    for k in 0..n {
        let pivot = a[k][k].clone();
        running = running.mul(&pivot);
        let bound = Float::with_val(
            RAD_PREC,
            &running.rad * &Float::with_val(RAD_PREC, SAFETY),
        );
        let sign = running.certified_sign(SAFETY);
        minors.push(MinorValue::Bounded {
            value: running.mid.clone(),
            bound,
        });
        if sign < 0 && negative_at.is_none() {
            negative_at = Some(k);
        }
        if sign == 0 {
            // unresolved minor: report what we have, caller escalates
            return BallSweep {
                minors,
                negative_at,
                complete: false,
            };
        }
        if k + 1 == n {
            break;
        }
        // eliminate column k below the pivot
        for i in k + 1..n {
            let factor = match a[i][k].div(&pivot) {
                Some(f) => f,
                None => {
                    return BallSweep {
                        minors,
                        negative_at,
                        complete: false,
                    }
                }
            };
            for j in k + 1..n {
                let delta = factor.mul(&a[k][j]);
                a[i][j] = a[i][j].sub(&delta);
            }
        }
    }
    BallSweep {
        minors,
        negative_at,
        complete: true,
    }
}

/// Recompute power-sequence terms at a higher precision for escalation.
fn terms_at_precision(pseq: &PowerSequence, prec: u32) -> Result<(Vec<Float>, Vec<Float>)> {
    let base = pseq.base();
    let base = if base.is_exact() {
        base.clone()
    } else {
        // inexact base: regenerate from the family when known, else reuse
        match base.tag() {
            sequences::SequenceTag::Family(fam) => {
                sequences::generate_with_precision(fam, base.len() - 1, prec)?
            }
            _ => base.clone(),
        }
    };
    let p = sequences::power(&base, pseq.exponent(), prec)?;
    Ok((p.values().to_vec(), p.relbounds().to_vec()))
}

/// Precision-bounded certification of a power sequence: both Hankel
/// families up to `maxorder`, escalating precision (doubling, up to `pmax`)
/// while any minor's sign is uncertified. Integer exponents take the exact
/// path and behave like [`certify_stieltjes_exact`].
pub fn certify_stieltjes_power(
    pseq: &PowerSequence,
    maxorder: usize,
    pmax: u32,
) -> Result<(HankelCertificate, HankelCertificate)> {
    let needed = 2 * maxorder + 2;
    if pseq.len() < needed {
        return Err(Error::InsufficientTerms {
            needed,
            have: pseq.len(),
        });
    }
    let label = pseq.label();
    if let Some(exact) = pseq.exact_terms() {
        return Ok((
            exact_certificate(&label, exact, maxorder, false),
            exact_certificate(&label, exact, maxorder, true),
        ));
    }

    let mut prec = pseq.precision();
    let mut values = pseq.values().to_vec();
    let mut relbounds = pseq.relbounds().to_vec();
    loop {
        let plain = ball_minors(&values, &relbounds, maxorder, false, prec);
        let shifted = ball_minors(&values, &relbounds, maxorder, true, prec);

        let make = |sweep: &BallSweep, is_shifted: bool| -> HankelCertificate {
            let verdict = match sweep.negative_at {
                Some(idx) => Verdict::NegativeMinorFound(idx),
                None if sweep.complete => Verdict::CertifiedNonnegative,
                None => Verdict::Inconclusive(prec),
            };
            HankelCertificate {
                sequence: label.clone(),
                order: maxorder,
                shifted: is_shifted,
                minors: sweep.minors.clone(),
                verdict,
                precision_bits: Some(prec),
            }
        };

        let decided = |s: &BallSweep| s.complete || s.negative_at.is_some();
        if (decided(&plain) && decided(&shifted)) || prec >= pmax {
            return Ok((make(&plain, false), make(&shifted, true)));
        }
        prec = (prec * 2).min(pmax);
        let (v, b) = terms_at_precision(pseq, prec)?;
        values = v;
        relbounds = b;
    }
}

/// One row of a divisibility probe: the joint verdict over both Hankel
/// families at exponent `c`.
#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub c: f64,
    pub verdict: Verdict,
    pub min_minor: MinorValue,
    pub precision_bits: Option<u32>,
}

/// Infinite-divisibility probe report over a grid of exponents. Support at
/// the sampled exponents up to the stated order is evidence, never proof of
/// the for-all-c property; gamma-power families are additionally flagged
/// conjectural.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub family: FamilyId,
    pub maxorder: usize,
    pub precision: u32,
    pub conjectural: bool,
    pub rows: Vec<ProbeRow>,
}

/// Run [`certify_stieltjes_power`] for each `c` in the grid.
pub fn divisibility_probe(
    family: &FamilyId,
    c_grid: &[f64],
    maxorder: usize,
    prec: u32,
    pmax: u32,
) -> Result<ProbeReport> {
    if c_grid.is_empty() {
        return Err(Error::domain("divisibility_probe: empty c grid"));
    }
    let family = family.clone().canonicalize();
    let base = sequences::generate_with_precision(&family, 2 * maxorder + 1, prec)?;
    let mut rows = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        let pseq = sequences::power(&base, c, prec)?;
        let (plain, shifted) = certify_stieltjes_power(&pseq, maxorder, pmax)?;
        let verdict = match (&plain.verdict, &shifted.verdict) {
            (Verdict::NegativeMinorFound(i), _) => Verdict::NegativeMinorFound(*i),
            (_, Verdict::NegativeMinorFound(i)) => Verdict::NegativeMinorFound(*i),
            (Verdict::CertifiedNonnegative, Verdict::CertifiedNonnegative) => {
                Verdict::CertifiedNonnegative
            }
            (Verdict::Inconclusive(p), _) | (_, Verdict::Inconclusive(p)) => {
                Verdict::Inconclusive(*p)
            }
        };
        let min_minor = if plain.min_minor().approx() <= shifted.min_minor().approx() {
            plain.min_minor().clone()
        } else {
            shifted.min_minor().clone()
        };
        let precision_bits = plain.precision_bits.max(shifted.precision_bits);
        rows.push(ProbeRow {
            c,
            verdict,
            min_minor,
            precision_bits,
        });
    }
    Ok(ProbeReport {
        conjectural: family.is_conjectural(),
        family,
        maxorder,
        precision: prec,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hiprec::exp2;
    use crate::sequences::generate;

    fn rat(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn hankel_matrix_indexing() {
        let seq = generate(&FamilyId::Catalan, 4).unwrap();
        let m = hankel_matrix(&seq, 1, false).unwrap();
        assert_eq!(m.get(0, 0), &rat(1));
        assert_eq!(m.get(0, 1), &rat(1));
        assert_eq!(m.get(1, 0), &rat(1));
        assert_eq!(m.get(1, 1), &rat(2));
        let m = hankel_matrix(&seq, 1, true).unwrap();
        assert_eq!(m.get(0, 0), &rat(1));
        assert_eq!(m.get(0, 1), &rat(2));
        assert_eq!(m.get(1, 1), &rat(5));
        let m = hankel_matrix(&seq, 0, false).unwrap();
        assert_eq!(m.get(0, 0), &rat(1));
    }

    #[test]
    fn hankel_matrix_needs_enough_terms() {
        let seq = generate(&FamilyId::Catalan, 4).unwrap();
        assert!(matches!(
            hankel_matrix(&seq, 2, true),
            Err(Error::InsufficientTerms { needed: 6, .. })
        ));
    }

    #[test]
    fn catalan_minors_are_all_one() {
        let seq = generate(&FamilyId::Catalan, 22).unwrap();
        let (plain, shifted) = certify_stieltjes_exact(&seq, 10).unwrap();
        assert_eq!(plain.verdict, Verdict::CertifiedNonnegative);
        assert_eq!(shifted.verdict, Verdict::CertifiedNonnegative);
        for cert in [&plain, &shifted] {
            for m in &cert.minors {
                match m {
                    MinorValue::Exact(r) => assert_eq!(r, &rat(1)),
                    _ => panic!("exact path must give exact minors"),
                }
            }
        }
    }

    #[test]
    fn double_factorial_certifies() {
        let seq = generate(&FamilyId::DoubleFactorial, 14).unwrap();
        let (plain, shifted) = certify_stieltjes_exact(&seq, 6).unwrap();
        assert_eq!(plain.verdict, Verdict::CertifiedNonnegative);
        assert_eq!(shifted.verdict, Verdict::CertifiedNonnegative);
    }

    #[test]
    fn non_moment_sequence_fails_cauchy_schwarz() {
        let seq = MomentSequence::from_exact_terms(
            "non-moment",
            vec![rat(1), rat(2), rat(1), rat(1)],
        )
        .unwrap();
        let (plain, _shifted) = certify_stieltjes_exact(&seq, 1).unwrap();
        // det [[1,2],[2,1]] = -3
        assert_eq!(plain.verdict, Verdict::NegativeMinorFound(1));
        match &plain.minors[1] {
            MinorValue::Exact(r) => assert_eq!(r, &rat(-3)),
            _ => panic!(),
        }
    }

    #[test]
    fn exact_certification_refuses_inexact_sequences() {
        let seq = sequences::generate_with_precision(
            &FamilyId::GammaPower {
                a: Rational::from((1, 2)),
            },
            10,
            128,
        )
        .unwrap();
        assert!(matches!(
            certify_stieltjes_exact(&seq, 4),
            Err(Error::InexactSequence(_))
        ));
    }

    #[test]
    fn power_certification_at_c1_matches_exact() {
        let seq = generate(&FamilyId::Catalan, 18).unwrap();
        let pseq = sequences::power(&seq, 1.0, 256).unwrap();
        let (plain, shifted) = certify_stieltjes_power(&pseq, 8, 1024).unwrap();
        let (eplain, eshifted) = certify_stieltjes_exact(&seq, 8).unwrap();
        assert_eq!(plain.verdict, eplain.verdict);
        assert_eq!(shifted.verdict, eshifted.verdict);
        assert!(plain.precision_bits.is_none(), "c = 1 takes the exact path");
    }

    #[test]
    fn catalan_sqrt_certifies_at_order_10() {
        let seq = generate(&FamilyId::Catalan, 22).unwrap();
        let pseq = sequences::power(&seq, 0.5, 256).unwrap();
        let (plain, shifted) = certify_stieltjes_power(&pseq, 10, 1024).unwrap();
        assert_eq!(plain.verdict, Verdict::CertifiedNonnegative);
        assert_eq!(shifted.verdict, Verdict::CertifiedNonnegative);
        // regression: frozen minimum minors from an independent
        // high-precision evaluation (mpmath, 300 digits)
        let frozen_plain = Float::with_val(96, 3.21941137395731e-31);
        let frozen_shift = Float::with_val(96, 4.29744371890689e-34);
        let got_plain = Float::with_val(96, plain.min_minor().approx());
        let got_shift = Float::with_val(96, shifted.min_minor().approx());
        assert!(
            crate::hiprec::rel_diff(&got_plain, &frozen_plain) < Float::with_val(64, 1e-9),
            "min minor drifted: {got_plain}"
        );
        assert!(
            crate::hiprec::rel_diff(&got_shift, &frozen_shift) < Float::with_val(64, 1e-9),
            "shifted min minor drifted: {got_shift}"
        );
    }

    #[test]
    fn factorial_squared_certifies() {
        let seq = generate(&FamilyId::Factorial, 18).unwrap();
        let pseq = sequences::power(&seq, 2.0, 256).unwrap();
        let (plain, shifted) = certify_stieltjes_power(&pseq, 8, 1024).unwrap();
        assert_eq!(plain.verdict, Verdict::CertifiedNonnegative);
        assert_eq!(shifted.verdict, Verdict::CertifiedNonnegative);
    }

    #[test]
    fn raising_precision_never_flips_a_certified_verdict() {
        let seq = generate(&FamilyId::CentralBinomial, 18).unwrap();
        let pseq = sequences::power(&seq, 0.25, 128).unwrap();
        let (p1, s1) = certify_stieltjes_power(&pseq, 8, 512).unwrap();
        let pseq_hi = sequences::power(&seq, 0.25, 512).unwrap();
        let (p2, s2) = certify_stieltjes_power(&pseq_hi, 8, 2048).unwrap();
        for (lo, hi) in [(&p1, &p2), (&s1, &s2)] {
            if lo.verdict == Verdict::CertifiedNonnegative {
                assert_eq!(hi.verdict, Verdict::CertifiedNonnegative);
            }
        }
    }

    #[test]
    fn uncertifiable_at_tiny_ceiling_is_inconclusive() {
        // order 10 minors of Catalan^0.1 sit near 1e-64; 64-bit balls
        // cannot separate them from zero
        let seq = generate(&FamilyId::Catalan, 22).unwrap();
        let pseq = sequences::power(&seq, 0.1, 64).unwrap();
        let (plain, _) = certify_stieltjes_power(&pseq, 10, 64).unwrap();
        assert!(matches!(plain.verdict, Verdict::Inconclusive(64)));
        // and escalation resolves it
        let (plain, _) = certify_stieltjes_power(&pseq, 10, 4096).unwrap();
        assert_eq!(plain.verdict, Verdict::CertifiedNonnegative);
    }

    #[test]
    fn probe_catalan_grid_certifies() {
        let report = divisibility_probe(
            &FamilyId::Catalan,
            &[0.1, 0.25, 0.5, 0.75, 0.9],
            10,
            512,
            4096,
        )
        .unwrap();
        assert!(!report.conjectural);
        for row in &report.rows {
            assert_eq!(
                row.verdict,
                Verdict::CertifiedNonnegative,
                "c = {} failed",
                row.c
            );
        }
    }

    #[test]
    fn probe_gamma_power_is_flagged_conjectural() {
        let report = divisibility_probe(
            &FamilyId::GammaPower {
                a: Rational::from((1, 2)),
            },
            &[0.5, 1.0, 2.0],
            8,
            512,
            4096,
        )
        .unwrap();
        assert!(report.conjectural);
        for row in &report.rows {
            assert_eq!(row.verdict, Verdict::CertifiedNonnegative, "c = {}", row.c);
        }
    }

    #[test]
    fn probe_rejects_empty_grid() {
        assert!(divisibility_probe(&FamilyId::Catalan, &[], 4, 256, 1024).is_err());
    }

    #[test]
    fn ball_minor_bound_encloses_exact_value() {
        // Catalan^2 (exact path known) recomputed through the ball sweep
        let seq = generate(&FamilyId::Catalan, 10).unwrap();
        let pseq = sequences::power(&seq, 2.0, 192).unwrap();
        let sweep = ball_minors(pseq.values(), pseq.relbounds(), 4, false, 192);
        assert!(sweep.complete);
        let exact_m = hankel_matrix(
            &MomentSequence::from_exact_terms("c2", pseq.exact_terms().unwrap().to_vec()).unwrap(),
            4,
            false,
        )
        .unwrap();
        let exact_minors = leading_principal_minors(&exact_m);
        for (got, want) in sweep.minors.iter().zip(&exact_minors) {
            match got {
                MinorValue::Bounded { value, bound } => {
                    let w = Float::with_val(192, want);
                    let err = Float::with_val(192, value - &w).abs();
                    assert!(err <= Float::with_val(192, bound), "{err} > {bound}");
                    assert!(*bound < exp2(-60));
                }
                _ => panic!(),
            }
        }
    }
}

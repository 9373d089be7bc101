//! The end-to-end verification suite: ten named checks covering the exact
//! Hankel identities, Stieltjes certification across every family,
//! infinite-divisibility probes, Mellin consistency, density quadrature
//! oracles, the series identities, the Bernstein machinery, and the
//! determinacy boundary reproduction. Each check pins its tolerance here;
//! the CLI's `verify-all` and the acceptance test target both run this
//! list.

use rug::Float;
use rug::Rational;

use crate::densities::{self, DensityModel, MgfSeries};
use crate::divisibility::{
    bernstein_product_check, carleman_diagnose, complete_monotonicity_check,
    determinacy_classify, determinacy_classify_rational, CarlemanVerdict, DeterminacyVerdict,
    FactorizationTheorem,
};
use crate::hankel::{self, Verdict};
use crate::hiprec::float_from_rational;
use crate::mellin;
use crate::sequences::{self, FactorizationId, FamilyId};

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn pass(id: u32, name: &'static str, detail: String) -> Self {
        CriterionResult {
            id,
            name,
            passed: true,
            detail,
        }
    }

    fn fail(id: u32, name: &'static str, detail: String) -> Self {
        CriterionResult {
            id,
            name,
            passed: false,
            detail,
        }
    }
}

fn run(id: u32, name: &'static str, body: impl FnOnce() -> Result<String, String>) -> CriterionResult {
    match body() {
        Ok(detail) => CriterionResult::pass(id, name, detail),
        Err(detail) => CriterionResult::fail(id, name, detail),
    }
}

fn err_str<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("error: {e}"))
}

/// The ten families of criterion 2, with the parameter choices it names.
fn all_families() -> Vec<FamilyId> {
    let mut fams = vec![
        FamilyId::Catalan,
        FamilyId::CentralBinomial,
        FamilyId::CentralBinomialScaled,
        FamilyId::DoubleFactorial,
        FamilyId::Factorial,
        FamilyId::EvenFactorial,
    ];
    for k in [2u32, 3, 4] {
        fams.push(FamilyId::FussCatalan { k });
        fams.push(FamilyId::FussBinomial { k });
        fams.push(FamilyId::KFactorial { k });
    }
    for a in [1i64, 2, 3] {
        fams.push(FamilyId::GammaPower {
            a: Rational::from(a),
        });
    }
    fams
}

/// Criterion 1: all leading principal minors of both Catalan Hankel
/// families equal exactly 1 for orders up to 30 (zero tolerance).
pub fn criterion_1() -> CriterionResult {
    run(1, "catalan-hankel-identity", || {
        let seq = err_str(sequences::generate(&FamilyId::Catalan, 62))?;
        let (plain, shifted) = err_str(hankel::certify_stieltjes_exact(&seq, 30))?;
        for cert in [&plain, &shifted] {
            for (j, m) in cert.minors.iter().enumerate() {
                match m {
                    hankel::MinorValue::Exact(r) if *r == 1 => {}
                    other => {
                        return Err(format!(
                            "minor {j} (shifted = {}) is {:?}, expected exactly 1",
                            cert.shifted, other
                        ))
                    }
                }
            }
        }
        Ok("62 minors across both Hankel families all exactly 1 (n <= 30)".to_string())
    })
}

/// Criterion 2: exact Stieltjes certification of all ten families
/// (k in {2,3,4}, integer a in {1,2,3}) at order 14.
pub fn criterion_2() -> CriterionResult {
    run(2, "stieltjes-certification-exact", || {
        let mut count = 0;
        for fam in all_families() {
            let seq = err_str(sequences::generate(&fam, 30))?;
            let (plain, shifted) = err_str(hankel::certify_stieltjes_exact(&seq, 14))?;
            for cert in [&plain, &shifted] {
                if cert.verdict != Verdict::CertifiedNonnegative {
                    return Err(format!("{fam} (shifted = {}): {:?}", cert.shifted, cert.verdict));
                }
            }
            count += 1;
        }
        Ok(format!("{count} families certified nonnegative at order 14"))
    })
}

/// Criterion 3: precision-bounded certification of the powered sequences at
/// order 10 for c in {0.1, 0.25, 0.5, 0.75, 0.9, 1.5}, ceiling 4096 bits.
pub fn criterion_3() -> CriterionResult {
    run(3, "infinite-divisibility-probes", || {
        let grid = [0.1, 0.25, 0.5, 0.75, 0.9, 1.5];
        let fams = [
            FamilyId::Catalan,
            FamilyId::CentralBinomial,
            FamilyId::DoubleFactorial,
            FamilyId::Factorial,
            FamilyId::FussCatalan { k: 2 },
        ];
        let mut max_prec = 0u32;
        for fam in &fams {
            let report = err_str(hankel::divisibility_probe(fam, &grid, 10, 512, 4096))?;
            for row in &report.rows {
                if row.verdict != Verdict::CertifiedNonnegative {
                    return Err(format!("{fam} at c = {}: {:?}", row.c, row.verdict));
                }
                max_prec = max_prec.max(row.precision_bits.unwrap_or(0));
            }
        }
        Ok(format!(
            "5 families x 6 exponents certified at order 10 (max precision {max_prec} bits)"
        ))
    })
}

/// Criterion 4: Mellin-moment consistency below 1e-50 at 256 bits over
/// n <= 20 for every closed-form family and c in {0.5, 1, 2} intersected
/// with the determinate range.
pub fn criterion_4() -> CriterionResult {
    run(4, "mellin-moment-consistency", || {
        let tol = Float::with_val(64, 1e-50);
        let mut worst = Float::with_val(64, 0);
        let mut pairs = 0;
        for fam in all_families() {
            // KFactorial k >= 3 has no closed form
            if matches!(fam.clone().canonicalize(), FamilyId::KFactorial { .. }) {
                continue;
            }
            for c in [0.5, 1.0, 2.0] {
                if let Some(cmax) = mellin::determinate_c_max(&fam) {
                    if Rational::from_f64(c).unwrap() > cmax {
                        continue;
                    }
                }
                let r = err_str(mellin::mellin_moment_consistency(&fam, c, 20, 256))?;
                if r > tol {
                    return Err(format!("{fam} at c = {c}: residual {r}"));
                }
                if r > worst {
                    worst = Float::with_val(64, r);
                }
                pairs += 1;
            }
        }
        Ok(format!("{pairs} family/exponent pairs, max residual {worst:.3e} < 1e-50"))
    })
}

/// Criterion 5: the dual printed Mellin forms agree below 1e-50 relative on
/// s in {0, 0.5, ..., 10}, and the duplication-formula residual stays below
/// 1e-50 on the same grid.
pub fn criterion_5() -> CriterionResult {
    run(5, "mellin-dual-forms-and-duplication", || {
        let tol = Float::with_val(64, 1e-50);
        let fams = [
            FamilyId::Catalan,
            FamilyId::CentralBinomial,
            FamilyId::CentralBinomialScaled,
            FamilyId::DoubleFactorial,
        ];
        let mut worst = Float::with_val(64, 0);
        for fam in &fams {
            for c in [0.3, 1.0, 1.7] {
                for i in 0..=20 {
                    let s = i as f64 * 0.5;
                    let main = err_str(mellin::mellin(fam, c, s, 256))?;
                    let alt = err_str(mellin::mellin_alt(fam, c, s, 256))?;
                    let r = crate::hiprec::rel_diff(&alt, &main);
                    if r > tol {
                        return Err(format!("{fam} c = {c} s = {s}: dual-form residual {r}"));
                    }
                    if r > worst {
                        worst = Float::with_val(64, r);
                    }
                }
            }
        }
        for i in 1..=20 {
            let x = i as f64 * 0.5;
            let r = err_str(mellin::duplication_check(x, 256))?;
            if r > tol {
                return Err(format!("duplication residual {r} at x = {x}"));
            }
            if r > worst {
                worst = Float::with_val(64, r);
            }
        }
        Ok(format!("max residual {worst:.3e} < 1e-50"))
    })
}

/// Criterion 6: quadrature moments match the exact terms within relative
/// 1e-12 for n <= 20 (n <= 12 for the order-2 Fuss–Catalan density).
pub fn criterion_6() -> CriterionResult {
    run(6, "density-moment-oracles", || {
        let cases = [
            (DensityModel::CatalanDensity, 20u32),
            (DensityModel::CentralBinomialDensity, 20),
            (DensityModel::ScaledArcsine, 20),
            (DensityModel::ChiSquare1, 20),
            (DensityModel::FussCatalan2, 12),
        ];
        let rel_tol = Float::with_val(64, 1e-12);
        let mut worst = Float::with_val(64, 0);
        for (model, n_max) in cases {
            let fam = model.matching_family().expect("oracle models have families");
            let seq = err_str(sequences::generate(&fam, n_max as usize))?;
            let terms = seq.exact_terms().unwrap();
            for n in 0..=n_max {
                let exact = float_from_rational(&terms[n as usize], 192);
                let tol_abs = (terms[n as usize].to_f64() * 1e-13).max(1e-14);
                let q = err_str(densities::moment_quadrature(model, n, tol_abs))?;
                let r = crate::hiprec::rel_diff(&q.value, &exact);
                if r > rel_tol {
                    return Err(format!("{} n = {n}: relative residual {r}", model.slug()));
                }
                if r > worst {
                    worst = Float::with_val(64, r);
                }
            }
        }
        Ok(format!("max relative residual {worst:.3e} < 1e-12"))
    })
}

/// Criterion 7: series identities with zero tolerance — the four mgf
/// coefficient checks to order 40, the uniform-product laws to n = 50, and
/// the five factorization identities to n = 100 with k <= 6.
pub fn criterion_7() -> CriterionResult {
    run(7, "series-identities-exact", || {
        for which in [
            MgfSeries::CentralBinomial,
            MgfSeries::Catalan,
            MgfSeries::SymmetricZ,
            MgfSeries::ChiSquare1,
        ] {
            let r = err_str(densities::mgf_series_check(which, 40))?;
            if r != 0 {
                return Err(format!("{which:?} mgf coefficient residual {r} != 0"));
            }
        }
        let up = err_str(densities::uniform_product_check(50))?;
        if !up.identity_holds {
            return Err("uniform-product moment law failed exactly".to_string());
        }
        let mut ids = vec![
            FactorizationId::DoubleFactorialSplit,
            FactorizationId::EvenFactorialSplit,
            FactorizationId::CentralFromCatalan,
        ];
        for k in 2..=6 {
            ids.push(FactorizationId::KFactorialSplit { k });
            ids.push(FactorizationId::FussTimesShift { k });
        }
        for id in ids {
            if !err_str(sequences::verify_factorization(id, 100))? {
                return Err(format!("factorization {id:?} failed"));
            }
        }
        Ok("4 mgf series, uniform-product laws, and 13 factorizations hold exactly".to_string())
    })
}

/// Criterion 8: sine-identity residual below 1e-10 at the four grid angles
/// with K = 200.
pub fn criterion_8() -> CriterionResult {
    run(8, "sine-identity", || {
        use std::f64::consts::PI;
        let tol = Float::with_val(64, 1e-10);
        let mut worst = Float::with_val(64, 0);
        for alpha in [PI / 8.0, PI / 4.0, PI / 3.0, PI / 2.0] {
            let r = err_str(densities::antu_identity_check(alpha, 200, 192))?;
            if r > tol {
                return Err(format!("alpha = {alpha}: residual {r}"));
            }
            if r > worst {
                worst = Float::with_val(64, r);
            }
        }
        Ok(format!("max residual {worst:.3e} < 1e-10"))
    })
}

/// Criterion 9: Bernstein products exact to n = 200 (n = 100 for the Fuss
/// factorizations, k in 2..=6) and complete monotonicity at J = 8 on a
/// 50-point log grid for every factor.
pub fn criterion_9() -> CriterionResult {
    run(9, "bernstein-machinery", || {
        let base = [
            FactorizationTheorem::T1,
            FactorizationTheorem::T2,
            FactorizationTheorem::T2Prime,
            FactorizationTheorem::T3,
        ];
        for t in base {
            if !err_str(bernstein_product_check(t, 200))? {
                return Err(format!("{t:?} product mismatch"));
            }
        }
        let mut theorems: Vec<FactorizationTheorem> = base.to_vec();
        for k in 2..=6 {
            for t in [FactorizationTheorem::T5 { k }, FactorizationTheorem::T6 { k }] {
                if !err_str(bernstein_product_check(t, 100))? {
                    return Err(format!("{t:?} product mismatch"));
                }
                theorems.push(t);
            }
        }
        // 50-point log grid in (0, 100]
        let mut grid = Vec::new();
        let mut x = Rational::from(100);
        for _ in 0..50 {
            grid.push(x.clone());
            x *= Rational::from((4, 5));
        }
        let mut factors = 0;
        for t in &theorems {
            for h in err_str(t.h_functions())? {
                let shift = h.domain_shift();
                if !err_str(complete_monotonicity_check(&h, &shift, 8, &grid))? {
                    return Err(format!("{} fails complete monotonicity", h.id));
                }
                factors += 1;
            }
        }
        Ok(format!("14 factorizations exact; {factors} factors completely monotone at J = 8"))
    })
}

/// Criterion 10: the classifier reproduces the determinacy boundaries, and
/// the Carleman heuristic agrees with it at the off-boundary grid
/// c in {0.5, 1, 1.5, 1.9, 2.1, 3} (N = 64), margin-band points excluded.
pub fn criterion_10() -> CriterionResult {
    run(10, "determinacy-boundary", || {
        // boundary table, exact rational comparisons
        let table: [(FamilyId, Option<Rational>); 9] = [
            (FamilyId::Catalan, None),
            (FamilyId::CentralBinomial, None),
            (FamilyId::CentralBinomialScaled, None),
            (FamilyId::FussCatalan { k: 2 }, None),
            (FamilyId::FussBinomial { k: 2 }, None),
            (FamilyId::Factorial, Some(Rational::from(2))),
            (FamilyId::DoubleFactorial, Some(Rational::from(2))),
            (FamilyId::EvenFactorial, Some(Rational::from(1))),
            (FamilyId::KFactorial { k: 3 }, Some(Rational::from((2, 3)))),
        ];
        for (fam, boundary) in &table {
            match boundary {
                None => {
                    for c in [0.5, 10.0, 100.0] {
                        let v = err_str(determinacy_classify(fam, c))?.verdict;
                        if v != DeterminacyVerdict::SDet {
                            return Err(format!("{fam} at c = {c}: {v:?}, expected S-det"));
                        }
                    }
                }
                Some(b) => {
                    let at = err_str(determinacy_classify_rational(fam, b))?.verdict;
                    let above = err_str(determinacy_classify_rational(
                        fam,
                        &(b * Rational::from((101, 100))),
                    ))?
                    .verdict;
                    if at != DeterminacyVerdict::SDet || above != DeterminacyVerdict::SIndet {
                        return Err(format!("{fam}: boundary {b} misclassified ({at:?}/{above:?})"));
                    }
                }
            }
        }

        // Carleman agreement on the off-boundary grid
        let grid = [0.5, 1.0, 1.5, 1.9, 2.1, 3.0];
        let mut agreed = 0;
        let mut excluded = 0;
        for (fam, _) in &table {
            for &c in &grid {
                let diag = err_str(carleman_diagnose(fam, c, 64, 256))?;
                match diag.verdict {
                    CarlemanVerdict::BoundaryInconclusive => excluded += 1,
                    CarlemanVerdict::DivergesLikely => {
                        if diag.theorem_verdict != DeterminacyVerdict::SDet {
                            return Err(format!(
                                "{fam} c = {c}: heuristic diverges (rho_hat = {:.3}) but classifier says {:?}",
                                diag.rho_hat, diag.theorem_verdict
                            ));
                        }
                        agreed += 1;
                    }
                    CarlemanVerdict::ConvergesLikely => {
                        if diag.theorem_verdict != DeterminacyVerdict::SIndet {
                            return Err(format!(
                                "{fam} c = {c}: heuristic converges (rho_hat = {:.3}) but classifier says {:?}",
                                diag.rho_hat, diag.theorem_verdict
                            ));
                        }
                        agreed += 1;
                    }
                }
            }
        }
        Ok(format!(
            "boundaries reproduced; Carleman heuristic agreed at {agreed} grid points ({excluded} inside the margin band)"
        ))
    })
}

/// Run every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}

//! Closed-form densities, singularity-aware quadrature oracles tying each
//! density to its moment sequence, Bessel/mgf series identities in exact
//! rational arithmetic, the Catalan generating function, and the sine-series
//! identity.
//!
//! Quadrature schemes are chosen per density:
//!
//! - The four arcsine-type densities have `x^{-1/2}(4-x)^{±1/2}`-style
//!   weights; the substitutions `x = 2 - 2cos θ` (or `1 - cos θ`,
//!   `-2 cos θ`) turn the moment integrands into trigonometric polynomials
//!   on `[0, π]`, which the equispaced midpoint rule integrates to near
//!   machine identity once the node count exceeds the degree.
//! - The order-2 Fuss–Catalan density has an `x^{-2/3}` endpoint and an
//!   interior algebraic structure; moments go through tanh-sinh
//!   (double-exponential) quadrature with node doubling.
//! - The chi-square(1) density lives on `(0, ∞)`; the tail past `T` is
//!   bounded analytically (`∫_T^∞ x^n f ≤ 4(2π)^{-1/2} T^{n-1/2} e^{-T/2}`
//!   once `T ≥ 4n+4`) and the remaining `(0, T)` integral, singular like
//!   `x^{-1/2}` at zero, also goes through tanh-sinh.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::hiprec::{decimal_string, float_from_rational, pi, rel_diff};
use crate::sequences::{self, FamilyId};

/// Working precision for quadrature internals.
const QUAD_PREC: u32 = 160;
/// Node budget ceiling for the doubling loops.
const MAX_NODES: usize = 1 << 21;

/// The closed-form density models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityModel {
    /// `(2π)^{-1} sqrt((4-x)/x)` on `(0, 4]` — moments `C_n`.
    CatalanDensity,
    /// `1/(π sqrt(x(4-x)))` on `(0, 4)` — moments `B_n`.
    CentralBinomialDensity,
    /// `1/(π sqrt(y(2-y)))` on `(0, 2)` — moments `B_n / 2^n`.
    ScaledArcsine,
    /// `1/(π sqrt(4-z^2))` on `(-2, 2)` — even moments `B_n`, odd zero.
    SymmetricArcsine,
    /// `(2π)^{-1/2} x^{-1/2} e^{-x/2}` on `(0, ∞)` — moments `(2n-1)!!`.
    ChiSquare1,
    /// The order-2 Fuss–Catalan density on `(0, 27/4]` — moments `C_{2,n}`.
    FussCatalan2,
}

impl DensityModel {
    pub fn slug(&self) -> &'static str {
        match self {
            DensityModel::CatalanDensity => "catalan-density",
            DensityModel::CentralBinomialDensity => "central-binomial-density",
            DensityModel::ScaledArcsine => "scaled-arcsine",
            DensityModel::SymmetricArcsine => "symmetric-arcsine",
            DensityModel::ChiSquare1 => "chi-square-1",
            DensityModel::FussCatalan2 => "fuss-catalan-2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "catalan-density" => DensityModel::CatalanDensity,
            "central-binomial-density" => DensityModel::CentralBinomialDensity,
            "scaled-arcsine" => DensityModel::ScaledArcsine,
            "symmetric-arcsine" => DensityModel::SymmetricArcsine,
            "chi-square-1" => DensityModel::ChiSquare1,
            "fuss-catalan-2" => DensityModel::FussCatalan2,
            other => return Err(Error::domain(format!("unknown density model `{other}`"))),
        })
    }

    /// Support `(lo, hi)`; `hi = f64::INFINITY` for the chi-square model.
    pub fn support(&self) -> (f64, f64) {
        match self {
            DensityModel::CatalanDensity | DensityModel::CentralBinomialDensity => (0.0, 4.0),
            DensityModel::ScaledArcsine => (0.0, 2.0),
            DensityModel::SymmetricArcsine => (-2.0, 2.0),
            DensityModel::ChiSquare1 => (0.0, f64::INFINITY),
            DensityModel::FussCatalan2 => (0.0, 6.75),
        }
    }

    /// Whether the right endpoint belongs to the support (zero density).
    fn hi_closed(&self) -> bool {
        matches!(self, DensityModel::CatalanDensity | DensityModel::FussCatalan2)
    }

    /// Algebraic singularity exponents at the endpoints: the density grows
    /// like `(x-lo)^{e_lo}` at the left end and `(hi-x)^{e_hi}` at the
    /// right (`None` for the unbounded chi-square tail).
    pub fn singularity_exponents(&self) -> (f64, Option<f64>) {
        match self {
            DensityModel::CatalanDensity => (-0.5, Some(0.5)),
            DensityModel::CentralBinomialDensity
            | DensityModel::ScaledArcsine
            | DensityModel::SymmetricArcsine => (-0.5, Some(-0.5)),
            DensityModel::ChiSquare1 => (-0.5, None),
            DensityModel::FussCatalan2 => (-2.0 / 3.0, Some(0.5)),
        }
    }

    /// The exact moment family this density represents.
    pub fn matching_family(&self) -> Option<FamilyId> {
        match self {
            DensityModel::CatalanDensity => Some(FamilyId::Catalan),
            DensityModel::CentralBinomialDensity => Some(FamilyId::CentralBinomial),
            DensityModel::ScaledArcsine => Some(FamilyId::CentralBinomialScaled),
            DensityModel::ChiSquare1 => Some(FamilyId::DoubleFactorial),
            DensityModel::FussCatalan2 => Some(FamilyId::FussCatalan { k: 2 }),
            DensityModel::SymmetricArcsine => None,
        }
    }
}

/// High-precision density evaluation with the distances to the endpoints
/// supplied separately so endpoint-singular factors lose no accuracy.
fn density_eval_hp(
    model: DensityModel,
    x: &Float,
    dlo: &Float,
    dhi: Option<&Float>,
    prec: u32,
) -> Float {
    let pi_v = pi(prec);
    match model {
        DensityModel::CatalanDensity => {
            let dhi = dhi.expect("bounded support");
            let ratio = Float::with_val(prec, dhi / dlo);
            ratio.sqrt() / (2u32 * pi_v)
        }
        DensityModel::CentralBinomialDensity
        | DensityModel::ScaledArcsine
        | DensityModel::SymmetricArcsine => {
            let dhi = dhi.expect("bounded support");
            let prod = Float::with_val(prec, dlo * dhi);
            Float::with_val(prec, 1) / (prod.sqrt() * pi_v)
        }
        DensityModel::ChiSquare1 => {
            let half = Float::with_val(prec, x) / 2u32;
            let expo = Float::with_val(prec, (-half).exp_ref());
            let denom = Float::with_val(prec, 2 * &pi_v) * Float::with_val(prec, x);
            expo / denom.sqrt()
        }
        DensityModel::FussCatalan2 => {
            let dhi = dhi.expect("bounded support");
            // w = sqrt(1 - 4x/27) computed from the distance to 27/4
            let w = Float::with_val(prec, dhi * Rational::from((4, 27))).sqrt();
            let one_w = Float::with_val(prec, 1 + &w);
            let third = Float::with_val(prec, Rational::from((1, 3)));
            let two_thirds = Float::with_val(prec, Rational::from((2, 3)));
            let x_third = Float::with_val(prec, (x).pow(&third));
            let x_two_thirds = Float::with_val(prec, (x).pow(&two_thirds));
            let ow_third = Float::with_val(prec, (&one_w).pow(&third));
            let ow_two_thirds = Float::with_val(prec, (&one_w).pow(&two_thirds));
            let two_two_thirds = Float::with_val(prec, Float::with_val(prec, 2u32).pow(&two_thirds));
            let four_thirds = Float::with_val(prec, Rational::from((4, 3)));
            let two_four_thirds = Float::with_val(prec, Float::with_val(prec, 2u32).pow(&four_thirds));
            let sqrt3 = Float::with_val(prec, 3u32).sqrt();
            let num = Float::with_val(prec, 3 * &ow_two_thirds) - two_two_thirds * x_third;
            let den = two_four_thirds * sqrt3 * pi_v * x_two_thirds * ow_third;
            num / den
        }
    }
}

/// Closed-form density value at `x`. Errors when `x` is outside the open
/// support (the right endpoint itself is allowed where it carries density
/// zero).
pub fn density_eval(model: DensityModel, x: f64) -> Result<f64> {
    let (lo, hi) = model.support();
    let inside = x > lo && (x < hi || (model.hi_closed() && x == hi));
    if !inside {
        return Err(Error::domain(format!(
            "{}: x = {x} outside support ({lo}, {hi}{}",
            model.slug(),
            if model.hi_closed() { "]" } else { ")" }
        )));
    }
    if model.hi_closed() && x == hi {
        return Ok(0.0);
    }
    let prec = 96;
    let xf = Float::with_val(prec, x);
    let dlo = Float::with_val(prec, x - lo);
    let dhi = if hi.is_finite() {
        Some(Float::with_val(prec, hi - x))
    } else {
        None
    };
    Ok(density_eval_hp(model, &xf, &dlo, dhi.as_ref(), prec).to_f64())
}

/// Result of a moment quadrature.
#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: Float,
    pub errest: Float,
    pub nodes: usize,
    pub scheme: &'static str,
}

/// Midpoint rule for the trig-substituted moment integrands, doubling the
/// node count until two successive estimates agree within `tol/2`.
fn trig_midpoint_moment(model: DensityModel, n: u32, tol: f64) -> Result<QuadratureResult> {
    let prec = QUAD_PREC;
    let pi_v = pi(prec);
    // integrand g(θ) on [0, π] with ∫ g = moment: x(θ)^n / π (times
    // (1 + cos θ) for the Catalan weight)
    let eval = |theta: &Float| -> Float {
        let cos_t = Float::with_val(prec, theta.cos_ref());
        match model {
            DensityModel::CatalanDensity => {
                let x = Float::with_val(prec, Float::with_val(prec, 2u32) - Float::with_val(prec, 2 * &cos_t));
                Float::with_val(prec, x.pow(n) * (Float::with_val(prec, 1 + &cos_t)))
            }
            DensityModel::CentralBinomialDensity => Float::with_val(
                prec,
                Float::with_val(prec, 2u32) - Float::with_val(prec, 2 * &cos_t),
            )
            .pow(n),
            DensityModel::ScaledArcsine => {
                Float::with_val(prec, Float::with_val(prec, 1u32) - &cos_t).pow(n)
            }
            DensityModel::SymmetricArcsine => Float::with_val(prec, -2 * &cos_t).pow(n),
            _ => unreachable!("trig rule only serves the arcsine-type models"),
        }
    };
    let integral_at = |nodes: usize| -> Float {
        let h = Float::with_val(prec, &pi_v / Float::with_val(prec, nodes as u64));
        let mut sum = Float::with_val(prec, 0);
        for i in 0..nodes {
            let theta = Float::with_val(prec, &h * Float::with_val(prec, 2 * i as u64 + 1)) / 2u32;
            sum += eval(&theta);
        }
        sum * h / pi_v.clone()
    };

    let tol_f = Float::with_val(64, tol);
    let mut nodes = 64usize.max(2 * (n as usize + 2));
    let mut prev = integral_at(nodes);
    loop {
        let next = integral_at(nodes * 2);
        let diff = Float::with_val(prec, &next - &prev).abs();
        if diff <= tol_f.clone() / 2u32 {
            return Ok(QuadratureResult {
                value: next,
                errest: Float::with_val(64, diff.max(&Float::with_val(prec, 1e-45))),
                nodes: nodes * 2,
                scheme: "trig-midpoint",
            });
        }
        nodes *= 2;
        prev = next;
        if nodes > MAX_NODES {
            return Err(Error::QuadratureNoConvergence {
                best: decimal_string(&prev),
                errest: decimal_string(&diff),
            });
        }
    }
}

/// Tanh-sinh rule for `∫_lo^hi x^n f(x) dx` at level-doubling step sizes.
/// `lo`/`hi` are exact rationals so the endpoint distances at each node are
/// formed without cancellation.
fn tanh_sinh_moment(
    model: DensityModel,
    n: u32,
    lo: &Rational,
    hi: &Rational,
    tol: f64,
    tail_bound: &Float,
) -> Result<QuadratureResult> {
    let prec = QUAD_PREC;
    let lo_f = float_from_rational(lo, prec);
    let scale = float_from_rational(&Rational::from(hi - lo), prec) / 2u32;
    let half_pi = pi(prec) / 2u32;

    // |t| beyond which the double-exponential weights are negligible
    let t_max = ((prec as f64 + 16.0) * std::f64::consts::LN_2 / std::f64::consts::PI).asinh();

    let integrand = |t: &Float| -> Float {
        let u = Float::with_val(prec, &half_pi * &Float::with_val(prec, t.sinh_ref()));
        let e2u = Float::with_val(prec, Float::with_val(prec, 2 * &u).exp_ref());
        // distances to the endpoints: hi - x and x - lo
        let denom = Float::with_val(prec, 1 + &e2u);
        let dhi = Float::with_val(prec, 2 * &scale) / &denom;
        let dlo = Float::with_val(prec, Float::with_val(prec, 2 * &scale) * &e2u) / denom;
        let x = Float::with_val(prec, &lo_f + &dlo);
        let cosh_u = Float::with_val(prec, u.cosh_ref());
        let w = Float::with_val(prec, &scale * &half_pi)
            * Float::with_val(prec, t.cosh_ref())
            / Float::with_val(prec, cosh_u.square_ref());
        if !w.is_finite() || w.is_zero() {
            return Float::with_val(prec, 0);
        }
        let f = density_eval_hp(model, &x, &dlo, Some(&dhi), prec);
        Float::with_val(prec, x.pow(n)) * f * w
    };

    let sum_at_level = |level: u32| -> (Float, usize) {
        let h = Float::with_val(prec, 1) >> level;
        let steps = (t_max / (1.0 / f64::from(1u32 << level))).ceil() as i64;
        let mut sum = Float::with_val(prec, 0);
        let mut count = 0usize;
        for j in -steps..=steps {
            let t = Float::with_val(prec, &h * Float::with_val(prec, j));
            sum += integrand(&t);
            count += 1;
        }
        (sum * h, count)
    };

    let tol_f = Float::with_val(64, tol);
    let mut level = 4u32;
    let (mut prev, _) = sum_at_level(level);
    let mut nodes;
    loop {
        level += 1;
        let (next, count) = sum_at_level(level);
        nodes = count;
        let diff = Float::with_val(prec, &next - &prev).abs();
        if Float::with_val(64, &diff + tail_bound) <= tol_f {
            let errest = Float::with_val(
                64,
                Float::with_val(64, &diff + tail_bound).max(&Float::with_val(64, 1e-45)),
            );
            return Ok(QuadratureResult {
                value: next,
                errest,
                nodes,
                scheme: "tanh-sinh",
            });
        }
        prev = next;
        if nodes > MAX_NODES || level > 14 {
            return Err(Error::QuadratureNoConvergence {
                best: decimal_string(&prev),
                errest: decimal_string(&diff),
            });
        }
    }
}

/// Truncation point and tail bound for the chi-square moment integral:
/// with `T >= 4n+4`, `x^{n-1/2} e^{-x/4}` is decreasing past `T`, so
/// `∫_T^∞ x^n f(x) dx <= 4 (2π)^{-1/2} T^{n-1/2} e^{-T/2}`. `T` grows until
/// the bound clears `tol/2`.
fn chi_square_truncation(n: u32, tol: f64) -> (Rational, Float) {
    let prec = QUAD_PREC;
    let mut t = 4 * n as i64 + 8;
    loop {
        let tf = Float::with_val(prec, t);
        let ln_bound = Float::with_val(prec, tf.ln_ref())
            * Float::with_val(prec, n as f64 - 0.5)
            - Float::with_val(prec, t) / 2u32;
        let bound = Float::with_val(
            prec,
            ln_bound.exp() * 4u32 / Float::with_val(prec, 2 * pi(prec)).sqrt(),
        );
        if bound < Float::with_val(64, tol) / 2u32 || t > 40_000 {
            return (Rational::from(t), Float::with_val(64, bound));
        }
        t += (t / 2).max(8);
    }
}

/// `∫ x^n f(x) dx` with `errest <= tol`, scheme chosen per model.
pub fn moment_quadrature(model: DensityModel, n: u32, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::domain("moment_quadrature: tol must be positive"));
    }
    match model {
        DensityModel::CatalanDensity
        | DensityModel::CentralBinomialDensity
        | DensityModel::ScaledArcsine
        | DensityModel::SymmetricArcsine => trig_midpoint_moment(model, n, tol),
        DensityModel::FussCatalan2 => {
            let zero = Float::with_val(64, 0);
            tanh_sinh_moment(model, n, &Rational::from(0), &Rational::from((27, 4)), tol, &zero)
        }
        DensityModel::ChiSquare1 => {
            let (t, tail) = chi_square_truncation(n, tol);
            tanh_sinh_moment(model, n, &Rational::from(0), &t, tol, &tail)
        }
    }
}

/// Modified Bessel function of the first kind, order 0 or 1, by direct
/// series summation `Σ (t/2)^{2k+α} / (k! Γ(k+α+1))` truncated at the
/// precision target.
pub fn bessel_i(order: u32, t: f64, prec: u32) -> Result<Float> {
    if order > 1 {
        return Err(Error::domain("bessel_i: order must be 0 or 1"));
    }
    let wp = prec + 32;
    let half_t = Float::with_val(wp, t) / 2u32;
    let q = Float::with_val(wp, half_t.square_ref());
    // k = 0 term: (t/2)^α / α!
    let mut term = match order {
        0 => Float::with_val(wp, 1),
        _ => half_t.clone(),
    };
    let mut sum = term.clone();
    let cutoff = crate::hiprec::exp2(-(wp as i32) + 8);
    for k in 1u32..10_000 {
        term = Float::with_val(wp, &term * &q);
        term /= Float::with_val(wp, k * (k + order));
        sum += &term;
        let scale = Float::with_val(wp, sum.abs_ref()).max(&Float::with_val(wp, 1));
        if Float::with_val(wp, term.abs_ref()) < Float::with_val(wp, &cutoff * &scale) {
            break;
        }
    }
    Ok(Float::with_val(prec, sum))
}

/// Which closed-form mgf to expand coefficient-by-coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MgfSeries {
    /// `e^{2t} I_0(2t)` against `B_n / n!`.
    CentralBinomial,
    /// `e^{2t} (I_0(2t) - I_1(2t))` against `C_n / n!`.
    Catalan,
    /// `I_0(2t)` against `B_n / (2n)!` at even orders, zero at odd.
    SymmetricZ,
    /// `(1 - 2t)^{-1/2}` against `(2n-1)!! / n!`.
    ChiSquare1,
}

/// Expand the chosen mgf as an exact rational power series to order
/// `k_max` (Cauchy products of the exponential and Bessel series) and
/// return the largest absolute deviation of coefficient `n` from `m_n/n!`.
/// The coefficient path is exact, so the expected residual is exactly zero.
pub fn mgf_series_check(which: MgfSeries, k_max: usize) -> Result<Rational> {
    // series of e^{2t}: 2^m / m!
    let exp2t: Vec<Rational> = (0..=k_max as u32)
        .map(|m| Rational::from((Rational::from(2).pow(m).into_numer_denom().0, factorial(m as u64))))
        .collect();
    // I_0(2t): t^{2k} / (k!)^2 ; I_1(2t): t^{2k+1} / (k!(k+1)!)
    let mut i0 = vec![Rational::new(); k_max + 1];
    let mut i1 = vec![Rational::new(); k_max + 1];
    let mut k = 0u64;
    while 2 * k as usize <= k_max {
        let kf = factorial(k);
        i0[2 * k as usize] = Rational::from((1, kf.clone() * kf.clone()));
        if (2 * k as usize) < k_max {
            i1[2 * k as usize + 1] =
                Rational::from((1, kf.clone() * factorial(k + 1)));
        }
        k += 1;
    }
    let convolve = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::new(); k_max + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if i + j > k_max {
                    break;
                }
                out[i + j] += Rational::from(ai * bj);
            }
        }
        out
    };

    let mut worst = Rational::new();
    let mut record = |diff: Rational| {
        let d = diff.abs();
        if d > worst {
            worst = d;
        }
    };

    match which {
        MgfSeries::CentralBinomial => {
            let coeffs = convolve(&exp2t, &i0);
            let b = sequences::generate(&FamilyId::CentralBinomial, k_max)?;
            let b = b.exact_terms().unwrap();
            for n in 0..=k_max {
                let expect = &b[n] / Rational::from(factorial(n as u64));
                record(&coeffs[n] - expect);
            }
        }
        MgfSeries::Catalan => {
            let diff: Vec<Rational> = i0
                .iter()
                .zip(&i1)
                .map(|(a, b)| Rational::from(a - b))
                .collect();
            let coeffs = convolve(&exp2t, &diff);
            let c = sequences::generate(&FamilyId::Catalan, k_max)?;
            let c = c.exact_terms().unwrap();
            for n in 0..=k_max {
                let expect = &c[n] / Rational::from(factorial(n as u64));
                record(&coeffs[n] - expect);
            }
        }
        MgfSeries::SymmetricZ => {
            let b = sequences::generate(&FamilyId::CentralBinomial, k_max / 2)?;
            let b = b.exact_terms().unwrap();
            for m in 0..=k_max {
                if m % 2 == 1 {
                    record(i0[m].clone());
                } else {
                    let expect = &b[m / 2] / Rational::from(factorial(m as u64));
                    record(&i0[m] - expect);
                }
            }
        }
        MgfSeries::ChiSquare1 => {
            // (1-2t)^{-1/2}: g_0 = 1, g_{n+1} = g_n (2n+1)/(n+1)
            let mut g = Rational::from(1);
            let d = sequences::generate(&FamilyId::DoubleFactorial, k_max)?;
            let d = d.exact_terms().unwrap();
            for n in 0..=k_max {
                let expect = &d[n] / Rational::from(factorial(n as u64));
                record(&g - expect);
                g *= Rational::from((2 * n as u64 + 1, n as u64 + 1));
            }
        }
    }
    Ok(worst)
}

/// Closed form of the Catalan generating function `C(x)`, valid for
/// `|x| <= 1/4` (`x = 0` returns the limit 1, `x = 1/4` returns 2).
pub fn catalan_gf_closed(x: f64, prec: u32) -> Result<Float> {
    if !(x.abs() <= 0.25) {
        return Err(Error::domain("catalan_gf_closed: need |x| <= 1/4"));
    }
    if x == 0.0 {
        return Ok(Float::with_val(prec, 1));
    }
    let xf = Float::with_val(prec, x);
    let root = Float::with_val(prec, Float::with_val(prec, 1u32) - Float::with_val(prec, 4 * &xf)).sqrt();
    Ok(Float::with_val(prec, Float::with_val(prec, 1 - root) / (2u32 * xf)))
}

/// `|C(x) - Σ_{n<=K} C_n x^n|` for `|x| < 1/4`, which the geometric tail
/// bound `|4x|^{K+1} / (1 - |4x|)` must dominate.
pub fn generating_function_check(x: f64, k_max: usize, prec: u32) -> Result<Float> {
    if !(x.abs() < 0.25) {
        return Err(Error::domain("generating_function_check: need |x| < 1/4"));
    }
    let closed = catalan_gf_closed(x, prec)?;
    let seq = sequences::generate(&FamilyId::Catalan, k_max)?;
    let terms = seq.exact_terms().unwrap();
    let xf = Float::with_val(prec, x);
    let mut sum = Float::with_val(prec, 0);
    let mut xpow = Float::with_val(prec, 1);
    for t in terms {
        sum += float_from_rational(t, prec) * &xpow;
        xpow *= &xf;
    }
    let resid = Float::with_val(prec, &closed - &sum).abs();
    // the tail estimate must cover the residual
    let r = Float::with_val(prec, 4.0 * x.abs());
    if r < 1 {
        let tail = Float::with_val(prec, (&r).pow((k_max + 1) as u32))
            / Float::with_val(prec, Float::with_val(prec, 1u32) - &r);
        if resid > Float::with_val(prec, 2 * &tail) + Float::with_val(prec, 1e-40) {
            return Err(Error::domain(format!(
                "generating-function residual {resid} exceeds its tail bound {tail}"
            )));
        }
    }
    Ok(resid)
}

/// Residual of the sine identity
/// `sin^2(α/2) = Σ_{n>=1} C_{n-1} (sin α / 2)^{2n}` on `[0, π/2]`.
///
/// The series has ratio `4q` with `q = (sin α / 2)^2`, so `K` terms leave a
/// tail of order `(4q)^K`. Where that tail clears the truncation target the
/// sum is taken directly; at and near the endpoint `α = π/2` (where
/// `4q = 1` and partial sums converge only like `1/sqrt(K)`) the series
/// value is `q C(q)` through the generating-function closed form instead,
/// which is exactly how the identity extends to the boundary.
pub fn antu_identity_check(alpha: f64, k_max: usize, prec: u32) -> Result<Float> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(Error::domain("antu_identity_check: alpha must lie in [0, pi/2]"));
    }
    let af = Float::with_val(prec, alpha);
    let lhs = Float::with_val(prec, Float::with_val(prec, &af / Float::with_val(prec, 2)).sin_ref())
        .square();
    let q = Float::with_val(prec, Float::with_val(prec, af.sin_ref()) / 2u32).square();
    let four_q = Float::with_val(prec, 4 * &q);

    // tail bound for K-term truncation: (4q)^(K+1) / (1 - 4q), C_n <= 4^n
    let direct_ok = if four_q < 1u32 {
        let tail = Float::with_val(prec, (&four_q).pow((k_max + 1) as u32))
            / Float::with_val(prec, Float::with_val(prec, 1u32) - &four_q);
        tail < Float::with_val(64, 1e-12)
    } else {
        false
    };

    let sum = if direct_ok {
        let seq = sequences::generate(&FamilyId::Catalan, k_max)?;
        let terms = seq.exact_terms().unwrap();
        let mut qpow = q.clone(); // q^n starting at n = 1
        let mut s = Float::with_val(prec, 0);
        for n in 1..=k_max {
            s += float_from_rational(&terms[n - 1], prec) * &qpow;
            qpow *= &q;
        }
        s
    } else {
        // q C(q) with C the generating function; q <= 1/4 here
        let root = Float::with_val(prec, Float::with_val(prec, 1u32) - &four_q).sqrt();
        Float::with_val(prec, Float::with_val(prec, 1u32) - root) / 2u32
    };
    Ok(Float::with_val(prec, lhs - sum).abs())
}

/// Report of the uniform-product moment laws.
#[derive(Clone, Debug)]
pub struct UniformProductReport {
    /// `B_n/(n+1) = C_n` and `((k+1)n choose n)/(kn+1) = C_{k,n}` for
    /// `k in 2..=4`, all checked exactly.
    pub identity_holds: bool,
    /// Quadrature side: `∫ x^n f_B(x)/(n+1) dx` against the Catalan density
    /// moments, max relative residual over small `n`.
    pub max_quadrature_residual: Float,
}

/// Verify the product-with-uniform moment laws exactly, and numerically tie
/// the two densities together through quadrature.
pub fn uniform_product_check(n_max: usize) -> Result<UniformProductReport> {
    let b = sequences::generate(&FamilyId::CentralBinomial, n_max)?;
    let c = sequences::generate(&FamilyId::Catalan, n_max)?;
    let (b, c) = (b.exact_terms().unwrap(), c.exact_terms().unwrap());
    let mut identity_holds = (0..=n_max)
        .all(|n| &b[n] / Rational::from(n as u64 + 1) == c[n]);
    for k in 2u32..=4 {
        let fb = sequences::generate(&FamilyId::FussBinomial { k }, n_max)?;
        let fc = sequences::generate(&FamilyId::FussCatalan { k }, n_max)?;
        let (fb, fc) = (fb.exact_terms().unwrap(), fc.exact_terms().unwrap());
        identity_holds &= (0..=n_max)
            .all(|n| &fb[n] / Rational::from(k as u64 * n as u64 + 1) == fc[n]);
    }

    let mut worst = Float::with_val(64, 0);
    for n in 0..=6u32 {
        let bn = moment_quadrature(DensityModel::CentralBinomialDensity, n, 1e-13)?;
        let cn = moment_quadrature(DensityModel::CatalanDensity, n, 1e-13)?;
        let lhs = Float::with_val(QUAD_PREC, &bn.value / Float::with_val(QUAD_PREC, n + 1));
        let r = rel_diff(&lhs, &cn.value);
        if r > worst {
            worst = Float::with_val(64, r);
        }
    }
    Ok(UniformProductReport {
        identity_holds,
        max_quadrature_residual: worst,
    })
}

/// Report of the symmetric-density moment structure.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub max_odd_abs: Float,
    pub max_even_rel: Float,
}

/// Moments of the symmetric arcsine density by quadrature: odd moments
/// vanish below `tol`, and `E[Z^{2n}] = B_n` within `tol`-level relative
/// error — the moment-level restatement of the square law tying the
/// symmetric variable to the central binomial one.
pub fn symmetry_square_check(n_max: usize, tol: f64) -> Result<SymmetryReport> {
    let b = sequences::generate(&FamilyId::CentralBinomial, n_max)?;
    let b = b.exact_terms().unwrap();
    let mut max_odd = Float::with_val(64, 0);
    let mut max_even = Float::with_val(64, 0);
    for k in 0..=(2 * n_max as u32) {
        let q = moment_quadrature(DensityModel::SymmetricArcsine, k, tol)?;
        if k % 2 == 1 {
            let a = Float::with_val(64, q.value.abs_ref());
            if a > max_odd {
                max_odd = a;
            }
        } else {
            let expect = float_from_rational(&b[(k / 2) as usize], QUAD_PREC);
            let r = Float::with_val(64, rel_diff(&q.value, &expect));
            if r > max_even {
                max_even = r;
            }
        }
    }
    Ok(SymmetryReport {
        max_odd_abs: max_odd,
        max_even_rel: max_even,
    })
}

/// CSV grid `(x, f(x))` for plot emission.
pub fn density_plot_csv(model: DensityModel, points: usize) -> Result<String> {
    if points < 2 {
        return Err(Error::domain("density_plot_csv: need at least 2 points"));
    }
    let (lo, hi) = model.support();
    let hi = if hi.is_finite() { hi } else { 12.0 };
    let mut out = String::from("x,f\n");
    for i in 1..=points {
        let x = lo + (hi - lo) * i as f64 / (points as f64 + 1.0);
        out.push_str(&format!("{x},{}\n", density_eval(model, x)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f64_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn density_values_at_two_and_zero() {
        let inv_2pi = 1.0 / (2.0 * std::f64::consts::PI);
        f64_close(
            density_eval(DensityModel::CentralBinomialDensity, 2.0).unwrap(),
            inv_2pi,
            1e-15,
        );
        f64_close(
            density_eval(DensityModel::SymmetricArcsine, 0.0).unwrap(),
            inv_2pi,
            1e-15,
        );
        f64_close(
            density_eval(DensityModel::CatalanDensity, 2.0).unwrap(),
            inv_2pi,
            1e-15,
        );
    }

    #[test]
    fn density_support_is_enforced() {
        assert!(density_eval(DensityModel::CatalanDensity, 0.0).is_err());
        assert!(density_eval(DensityModel::CatalanDensity, 4.0).is_ok()); // closed right end
        assert!(density_eval(DensityModel::CentralBinomialDensity, 4.0).is_err());
        assert!(density_eval(DensityModel::ChiSquare1, -1.0).is_err());
        assert!(density_eval(DensityModel::SymmetricArcsine, -1.9).is_ok());
    }

    #[test]
    fn quadrature_normalizations() {
        for model in [
            DensityModel::CatalanDensity,
            DensityModel::CentralBinomialDensity,
            DensityModel::ScaledArcsine,
            DensityModel::SymmetricArcsine,
            DensityModel::ChiSquare1,
            DensityModel::FussCatalan2,
        ] {
            let q = moment_quadrature(model, 0, 1e-12).unwrap();
            let one = Float::with_val(64, 1);
            assert!(
                rel_diff(&q.value, &one) < Float::with_val(64, 1e-12),
                "{}: {}",
                model.slug(),
                q.value
            );
        }
    }

    #[test]
    fn central_binomial_third_moment_is_20() {
        let q = moment_quadrature(DensityModel::CentralBinomialDensity, 3, 1e-12).unwrap();
        let expect = Float::with_val(64, 20);
        assert!(rel_diff(&q.value, &expect) < Float::with_val(64, 1e-13));
    }

    #[test]
    fn fuss_catalan_2_third_moment_is_12() {
        let q = moment_quadrature(DensityModel::FussCatalan2, 3, 1e-10).unwrap();
        let expect = Float::with_val(64, 12);
        assert!(
            rel_diff(&q.value, &expect) < Float::with_val(64, 1e-11),
            "{}",
            q.value
        );
    }

    #[test]
    fn chi_square_moments_match_double_factorials() {
        let d = sequences::generate(&FamilyId::DoubleFactorial, 8).unwrap();
        let d = d.exact_terms().unwrap();
        for n in [1u32, 4, 8] {
            let exact = float_from_rational(&d[n as usize], 96);
            let tol = d[n as usize].to_f64() * 1e-13;
            let q = moment_quadrature(DensityModel::ChiSquare1, n, tol).unwrap();
            assert!(
                rel_diff(&q.value, &exact) < Float::with_val(64, 1e-12),
                "n = {n}: {} vs {exact}",
                q.value
            );
        }
    }

    #[test]
    fn scaled_arcsine_moments_are_halved_central_binomial() {
        for n in [1u32, 3, 6] {
            let a = moment_quadrature(DensityModel::ScaledArcsine, n, 1e-13).unwrap();
            let b = moment_quadrature(DensityModel::CentralBinomialDensity, n, 1e-13).unwrap();
            let scaled = Float::with_val(QUAD_PREC, &b.value) >> n;
            assert!(rel_diff(&a.value, &scaled) < Float::with_val(64, 1e-12));
        }
    }

    #[test]
    fn errest_covers_node_doubling() {
        let a = moment_quadrature(DensityModel::FussCatalan2, 4, 1e-8).unwrap();
        let b = moment_quadrature(DensityModel::FussCatalan2, 4, 1e-12).unwrap();
        let drift = Float::with_val(96, &a.value - &b.value).abs();
        assert!(drift <= a.errest, "{drift} > {}", a.errest);
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_i(0, 0.0, 128).unwrap(), 1);
        assert_eq!(bessel_i(1, 0.0, 128).unwrap(), 0);
        // frozen: Σ 1/(k!)^2 to 40 digits (independent summation)
        let frozen = Float::with_val(
            160,
            Float::parse("2.279585302336067267437204440811533353286").unwrap(),
        );
        let got = bessel_i(0, 2.0, 128).unwrap();
        assert!(rel_diff(&got, &frozen) < Float::with_val(64, 1e-37));
        assert!(bessel_i(2, 1.0, 64).is_err());
    }

    #[test]
    fn mgf_coefficients_match_exactly() {
        for which in [
            MgfSeries::CentralBinomial,
            MgfSeries::Catalan,
            MgfSeries::SymmetricZ,
            MgfSeries::ChiSquare1,
        ] {
            let r = mgf_series_check(which, 25).unwrap();
            assert_eq!(r, 0, "{which:?} residual {r}");
        }
    }

    #[test]
    fn mgf_central_binomial_t2_coefficient() {
        // hand check: coefficient of t^2 in e^{2t} I_0(2t) is 2 + 1 = 3 = B_2/2!
        let exp_part = Rational::from(2); // 2^2/2!
        let bessel_part = Rational::from(1); // k=1 term of I_0
        assert_eq!(Rational::from(&exp_part + &bessel_part), Rational::from(3));
        assert_eq!(mgf_series_check(MgfSeries::CentralBinomial, 2).unwrap(), 0);
    }

    #[test]
    fn generating_function_examples() {
        let r = generating_function_check(0.2, 60, 192).unwrap();
        assert!(r < Float::with_val(64, 1e-6), "{r}");
        let r = generating_function_check(0.0, 10, 128).unwrap();
        assert_eq!(r, 0);
        // boundary: closed form alone
        let v = catalan_gf_closed(0.25, 128).unwrap();
        assert_eq!(v, 2);
        assert!(generating_function_check(0.25, 10, 128).is_err());
    }

    #[test]
    fn antu_identity_examples() {
        let r = antu_identity_check(0.0, 10, 128).unwrap();
        assert_eq!(r, 0);
        let r = antu_identity_check(std::f64::consts::FRAC_PI_3, 80, 192).unwrap();
        assert!(r < Float::with_val(64, 1e-10), "{r}");
        // α = π/2: both sides 1/2 in the limit
        let r = antu_identity_check(std::f64::consts::FRAC_PI_2, 400, 192).unwrap();
        assert!(r < Float::with_val(64, 1e-10), "{r}");
        assert!(antu_identity_check(2.0, 10, 128).is_err());
    }

    #[test]
    fn uniform_product_laws() {
        let report = uniform_product_check(50).unwrap();
        assert!(report.identity_holds);
        assert!(report.max_quadrature_residual < Float::with_val(64, 1e-12));
    }

    #[test]
    fn symmetry_square_moments() {
        let report = symmetry_square_check(4, 1e-12).unwrap();
        assert!(report.max_odd_abs < Float::with_val(64, 1e-12));
        assert!(report.max_even_rel < Float::with_val(64, 1e-12));
    }

    #[test]
    fn plot_grid_is_well_formed() {
        let csv = density_plot_csv(DensityModel::CatalanDensity, 16).unwrap();
        assert_eq!(csv.lines().count(), 17);
        assert!(csv.starts_with("x,f\n"));
    }
}

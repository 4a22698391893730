//! Large-N expansions of the factorial products behind the 2p-th moment of
//! the characteristic polynomial, split by the parity of the matrix size.
//!
//! The stored coefficient tables (exact rational polynomials in p through
//! O(N^-6), and deeper p = 1 tables) are audited two independent ways: the
//! first two orders are regenerated from Stirling's series plus the Gamma
//! duplication formula, and truncated series are compared numerically with
//! the exact factorial products at 200-bit precision. A "formal average" of
//! the two parity series recovers the semicircle density coefficient by
//! coefficient; no analytic meaning is claimed for the average beyond that
//! bookkeeping.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, factorial, interpolate, rat, ratio, to_fraction_string, ExactPolynomial, ExactScalar,
};
use crate::moments::{gamma_p, gue_c_lambda_d_parity, moment_poly};
use crate::EnsembleSpec;

/// Highest 1/N order of the symbolic-in-p coefficient tables.
pub const SYMBOLIC_CD_ORDER: u32 = 6;
/// Highest 1/N order of the stored p = 1 tables.
pub const P1_CD_ORDER: u32 = 9;
/// Largest order accepted by `gamma_ratio_series`.
pub const MAX_GAMMA_RATIO_ORDER: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn matches(&self, n: u32) -> bool {
        match self {
            Parity::Even => n % 2 == 0,
            Parity::Odd => n % 2 == 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesClass {
    Even,
    Odd,
    Averaged,
    Plain,
}

/// A truncated series 'leading factor times sum c_k z^-k' with exact
/// rational coefficients and c_0 = 1 for the parity series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticSeries {
    pub leading_factor: String,
    pub class: SeriesClass,
    pub p: Option<u32>,
    pub coefficients: Vec<ExactScalar>,
}

impl AsymptoticSeries {
    pub fn order(&self) -> u32 {
        self.coefficients.len() as u32 - 1
    }

    /// sum_{k<=k_max} c_k / n^k by Horner evaluation in 1/n.
    pub fn partial_sum(&self, n: u32, k_max: u32) -> Result<ExactScalar> {
        if k_max > self.order() {
            return Err(Error::OrderStarvation {
                required: k_max,
                available: self.order(),
            });
        }
        let inv = ratio(1, n as i64);
        let mut acc = ExactScalar::zero();
        for k in (0..=k_max as usize).rev() {
            acc = acc * &inv + &self.coefficients[k];
        }
        Ok(acc)
    }
}

/// Bernoulli polynomials B_0..B_bound as exact polynomials, B_1(0) = -1/2.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    polys: Vec<ExactPolynomial>,
}

impl BernoulliTable {
    pub fn new(bound: usize) -> Self {
        let mut numbers: Vec<ExactScalar> = Vec::with_capacity(bound + 1);
        for m in 0..=bound {
            if m == 0 {
                numbers.push(ExactScalar::one());
                continue;
            }
            let mut acc = ExactScalar::zero();
            for (k, b) in numbers.iter().enumerate() {
                acc += ExactScalar::from_integer(binomial(m as u64 + 1, k as u64)) * b;
            }
            numbers.push(-acc / rat(m as i64 + 1));
        }
        let polys = (0..=bound)
            .map(|j| {
                let mut coeffs = vec![ExactScalar::zero(); j + 1];
                for (k, coeff) in coeffs.iter_mut().enumerate() {
                    *coeff = ExactScalar::from_integer(binomial(j as u64, k as u64))
                        * &numbers[j - k];
                }
                ExactPolynomial::from_coeffs(coeffs)
            })
            .collect();
        BernoulliTable { polys }
    }

    pub fn bound(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, j: usize) -> &ExactPolynomial {
        &self.polys[j]
    }

    pub fn number(&self, j: usize) -> ExactScalar {
        self.polys[j].coeff(0)
    }

    /// sum_{x=0}^{P-1} f(x) as an exact polynomial in P (Faulhaber).
    pub fn prefix_sum(&self, f: &ExactPolynomial) -> ExactPolynomial {
        let mut acc = ExactPolynomial::zero();
        for (r, c) in f.coeffs().iter().enumerate() {
            // sum_{x=0}^{P-1} x^r = (B_{r+1}(P) - B_{r+1}(0))/(r+1)
            let b = self.poly(r + 1);
            let shifted = b - &ExactPolynomial::constant(b.coeff(0));
            acc = &acc + &shifted.scale(&(c / rat(r as i64 + 1)));
        }
        acc
    }
}

fn convolve_trunc(a: &[ExactScalar], b: &[ExactScalar], len: usize) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// 1/z-series of Gamma(z+h1)/Gamma(z+h2) relative to the leading power
/// z^(h1-h2), from Stirling's series: the log of the ratio is
/// sum_{j>=2} (-1)^j [B_j(h1)-B_j(h2)] / (j(j-1)) z^(1-j).
pub fn gamma_ratio_series(
    h1: &ExactScalar,
    h2: &ExactScalar,
    order: u32,
) -> Result<AsymptoticSeries> {
    if order > MAX_GAMMA_RATIO_ORDER {
        return Err(Error::Resource(format!(
            "gamma ratio series order {order} above the supported {MAX_GAMMA_RATIO_ORDER}"
        )));
    }
    let len = order as usize + 1;
    let bern = BernoulliTable::new(len + 1);
    // log-series coefficients of z^-k, k >= 1.
    let mut log_c = vec![ExactScalar::zero(); len];
    for k in 1..len {
        let j = k + 1;
        let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
        let diff = bern.poly(j).evaluate(h1) - bern.poly(j).evaluate(h2);
        log_c[k] = sign * diff / rat((j * (j - 1)) as i64);
    }
    let coefficients = exp_series(&log_c, len);
    Ok(AsymptoticSeries {
        leading_factor: format!("z^({})", to_fraction_string(&(h1 - h2))),
        class: SeriesClass::Plain,
        p: None,
        coefficients,
    })
}

/// exp of a series with zero constant term, truncated to `len` coefficients.
fn exp_series(log_c: &[ExactScalar], len: usize) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); len];
    out[0] = ExactScalar::one();
    let mut term: Vec<ExactScalar> = out.clone();
    for i in 1..len {
        term = convolve_trunc(&term, log_c, len);
        let inv_i = ratio(1, i as i64);
        for (o, t) in out.iter_mut().zip(term.iter_mut()) {
            *t *= &inv_i;
            *o += &*t;
        }
        // `term` now holds log^i/i!.
    }
    out
}

/// Builds (sum_i coeffs[i] p^(outer + 2(L-1-i))) / denom with descending
/// powers of p^2, the storage shape of the tabulated coefficients.
fn poly_in_p(outer: usize, denom: i64, desc_p2: &[i64]) -> ExactPolynomial {
    let len = desc_p2.len();
    let top = outer + 2 * (len - 1);
    let mut coeffs = vec![ExactScalar::zero(); top + 1];
    for (i, c) in desc_p2.iter().enumerate() {
        coeffs[outer + 2 * (len - 1 - i)] = ratio(*c, denom);
    }
    ExactPolynomial::from_coeffs(coeffs)
}

/// The stored coefficient of N^-k of the parity series, as an exact
/// polynomial in p; k <= SYMBOLIC_CD_ORDER.
pub fn cd_coefficient_poly(parity: Parity, k: u32) -> Result<ExactPolynomial> {
    if k > SYMBOLIC_CD_ORDER {
        return Err(Error::OrderStarvation {
            required: k,
            available: SYMBOLIC_CD_ORDER,
        });
    }
    Ok(match (parity, k) {
        (_, 0) => ExactPolynomial::one(),
        (Parity::Even, 1) => poly_in_p(1, 6, &[4, 1]),
        (Parity::Even, 2) => poly_in_p(2, 72, &[16, -16, -11]),
        (Parity::Even, 3) => poly_in_p(1, 6480, &[320, -1200, 708, 1265, -756]),
        (Parity::Even, 4) => poly_in_p(2, 155_520, &[1280, -10240, 25248, -6400, -56371, 51408]),
        (Parity::Even, 5) => poly_in_p(
            1,
            6_531_840,
            &[
                7168, -98560, 499_072, -982_688, -399_844, 4_606_735, -5_598_936, 1_607_040,
            ],
        ),
        (Parity::Even, 6) => poly_in_p(
            2,
            1_175_731_200,
            &[
                143_360,
                -3_010_560,
                25_294_080,
                -103_093_760,
                158_864_016,
                298_943_760,
                -1_697_420_809,
                2_663_679_600,
                -1_390_123_296,
            ],
        ),
        (Parity::Odd, 1) => poly_in_p(1, 3, &[2, -1]),
        (Parity::Odd, 2) => poly_in_p(2, 18, &[4, -10, 7]),
        (Parity::Odd, 3) => poly_in_p(1, 810, &[40, -240, 516, -455, 108]),
        (Parity::Odd, 4) => poly_in_p(2, 9720, &[80, -880, 3828, -8356, 9509, -4320]),
        (Parity::Odd, 5) => poly_in_p(
            1,
            204_120,
            &[
                224, -3920, 28616, -113_428, 266_818, -372_127, 255_528, -51840,
            ],
        ),
        (Parity::Odd, 6) => poly_in_p(
            2,
            18_370_800,
            &[
                2240,
                -57120,
                628_320,
                -3_919_160,
                15_363_624,
                -39_481_170,
                65_605_589,
                -62_864_640,
                25_046_496,
            ],
        ),
        _ => unreachable!("guarded above"),
    })
}

fn p1_cd_table(parity: Parity) -> Vec<ExactScalar> {
    match parity {
        Parity::Even => vec![
            rat(1),
            ratio(5, 6),
            ratio(-11, 72),
            ratio(337, 6480),
            ratio(985, 31104),
            ratio(-360_013, 6_531_840),
            ratio(-46_723_609, 1_175_731_200),
            ratio(224_766_221, 1_410_877_440),
            ratio(41_757_020_981, 338_610_585_600),
            ratio(-889_926_952_101_377, 1_005_673_439_232_000),
        ],
        Parity::Odd => vec![
            rat(1),
            ratio(1, 3),
            ratio(1, 18),
            ratio(-31, 810),
            ratio(-139, 9720),
            ratio(9871, 204_120),
            ratio(324_179, 18_370_800),
            ratio(-8_225_671, 55_112_400),
            ratio(-69_685_339, 1_322_697_600),
            ratio(1_674_981_058_019, 1_964_205_936_000),
        ],
    }
}

fn leading_descriptor(parity: Parity) -> String {
    match parity {
        Parity::Even => "e^(-N*p) * (2N)^(N*p+p^2) * gamma_p".to_string(),
        Parity::Odd => "(-1)^p * e^(-N*p) * (2N)^(N*p+p^2) * gamma_p".to_string(),
    }
}

/// The 1/N series of the factorial product divided by its leading factor,
/// for the requested parity of N, truncated at `order`.
pub fn cd_series(p: u32, parity: Parity, order: u32) -> Result<AsymptoticSeries> {
    if p == 0 {
        return Err(Error::Domain("p must be >= 1".into()));
    }
    let coefficients = if order <= SYMBOLIC_CD_ORDER {
        (0..=order)
            .map(|k| Ok(cd_coefficient_poly(parity, k)?.evaluate(&rat(p as i64))))
            .collect::<Result<Vec<_>>>()?
    } else if p == 1 && order <= P1_CD_ORDER {
        p1_cd_table(parity)[..=order as usize].to_vec()
    } else {
        return Err(Error::OrderStarvation {
            required: order,
            available: if p == 1 { P1_CD_ORDER } else { SYMBOLIC_CD_ORDER },
        });
    };
    Ok(AsymptoticSeries {
        leading_factor: leading_descriptor(parity),
        class: match parity {
            Parity::Even => SeriesClass::Even,
            Parity::Odd => SeriesClass::Odd,
        },
        p: Some(p),
        coefficients,
    })
}

/// Regenerates the N^-k coefficient (k <= 2) of the parity series from
/// first principles, symbolically in p: take logs of the factorial products,
/// expand every Gamma factor with Stirling's series (the even case in
/// z = N/2, the odd case in z = (N-1)/2 + 1/2 so that N = 2z exactly), and
/// resum over the p rows with Faulhaber's formula. The duplication formula
/// is what makes both parities reduce to Bernoulli evaluations at integer
/// and half-integer shifts.
pub fn regenerated_cd_coefficient(parity: Parity, k: u32) -> Result<ExactPolynomial> {
    if k == 0 {
        return Ok(ExactPolynomial::one());
    }
    if k > 2 {
        return Err(Error::Unsupported(
            "regeneration audit implemented through N^-2".into(),
        ));
    }
    let log1 = log_coefficient(parity, 1);
    if k == 1 {
        return Ok(log1);
    }
    let log2 = log_coefficient(parity, 2);
    // exp: c2 = l2 + l1^2/2.
    Ok(&log2 + &(&log1 * &log1).scale(&ratio(1, 2)))
}

/// Coefficient of N^-k in log(factorial product / leading factor) as a
/// polynomial in p.
fn log_coefficient(parity: Parity, k: u32) -> ExactPolynomial {
    let i = k as usize + 1;
    let bern = BernoulliTable::new(i + 2);
    let b_i = bern.poly(i).clone();
    let one = ExactScalar::one();
    let half = ratio(1, 2);
    // S1(p) = sum_{j=0}^{p-1} B_i(j+1)
    let s1 = bern.prefix_sum(&b_i.compose_affine(&one, &one));
    // S2(p) = sum_{j=0}^{p-1} B_i(p+j+1) = S1(2p) - S1(p)
    let s2 = &s1.compose_affine(&rat(2), &ExactScalar::zero()) - &s1;
    let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
    let scale = ratio(sign, (k as i64) * (k as i64 + 1));
    let two_k1 = rat(1i64 << (k + 1));
    match parity {
        Parity::Even => {
            // sign/(k(k+1)) [S2 + (1 - 2^(k+1)) S1]
            (&s2 + &s1.scale(&(rat(1) - &two_k1))).scale(&scale)
        }
        Parity::Odd => {
            // sign/(k(k+1)) [S1 + S2 - 2^(k+1) S3 - 2^k S4] with
            // S3 = sum_j B_i(j+1/2), S4 = B_i(p+1/2) - B_i(1/2).
            let s3 = bern.prefix_sum(&b_i.compose_affine(&one, &half));
            let s4 = &b_i.compose_affine(&one, &half)
                - &ExactPolynomial::constant(b_i.evaluate(&half));
            let two_k = rat(1i64 << k);
            let inner = &(&(&s1 + &s2) - &s3.scale(&two_k1)) - &s4.scale(&two_k);
            inner.scale(&scale)
        }
    }
}

/// Coefficient-wise mean of an even and an odd parity series.
pub fn parity_average(a: &AsymptoticSeries, b: &AsymptoticSeries) -> Result<AsymptoticSeries> {
    let classes = (a.class, b.class);
    if classes != (SeriesClass::Even, SeriesClass::Odd)
        && classes != (SeriesClass::Odd, SeriesClass::Even)
    {
        return Err(Error::Domain(
            "parity average needs one even and one odd series".into(),
        ));
    }
    if a.p != b.p {
        return Err(Error::Domain("parity average needs matching p".into()));
    }
    if a.coefficients.len() != b.coefficients.len() {
        return Err(Error::OrderStarvation {
            required: a.coefficients.len().max(b.coefficients.len()) as u32 - 1,
            available: a.coefficients.len().min(b.coefficients.len()) as u32 - 1,
        });
    }
    let coefficients = a
        .coefficients
        .iter()
        .zip(&b.coefficients)
        .map(|(x, y)| (x + y) / rat(2))
        .collect();
    Ok(AsymptoticSeries {
        leading_factor: a.leading_factor.clone(),
        class: SeriesClass::Averaged,
        p: a.p,
        coefficients,
    })
}

/// Taylor polynomial of sqrt(1 - t^2/4) about t = 0 through t^order: the
/// semicircle density on [-2, 2] scaled by pi.
pub fn semicircle_taylor(order: u32) -> Result<ExactPolynomial> {
    if order % 2 == 1 {
        return Err(Error::Domain("semicircle order must be even".into()));
    }
    let k_max = (order / 2) as usize;
    let mut coeffs = vec![ExactScalar::zero(); order as usize + 1];
    let mut binom_half = ExactScalar::one();
    for k in 0..=k_max {
        coeffs[2 * k] = &binom_half * ratio(-1, 4).pow(k as i32);
        // (1/2 choose k+1) = (1/2 choose k)(1/2 - k)/(k+1)
        binom_half *= (ratio(1, 2) - rat(k as i64)) / rat(k as i64 + 1);
    }
    Ok(ExactPolynomial::from_coeffs(coeffs))
}

/// Exact bracket polynomials: b_k(N) is the coefficient of t^(2k) in
/// E[det(t-M)^(2p)] divided by the t = 0 value, a polynomial in N over each
/// parity class. Interpolated from exact moment computations at 2k_max
/// sizes and verified on one extra size.
pub fn moment_bracket_polys(p: u32, parity: Parity, k_max: u32) -> Result<Vec<ExactPolynomial>> {
    let n_interp = (2 * k_max as usize).max(1);
    let base = 2 * k_max + if parity.matches(0) { 2 } else { 1 };
    let sizes: Vec<u32> = (0..=n_interp).map(|i| base + 2 * i as u32).collect();
    let mut values: Vec<Vec<(ExactScalar, ExactScalar)>> =
        vec![Vec::with_capacity(sizes.len()); k_max as usize + 1];
    for &n in &sizes {
        let poly = moment_poly(&EnsembleSpec::gue(n)?, 2 * p)?;
        let t0 = poly.coeff(0);
        for (k, column) in values.iter_mut().enumerate() {
            column.push((rat(n as i64), poly.coeff(2 * k) / &t0));
        }
    }
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for (k, column) in values.iter().enumerate() {
        let fit = interpolate(&column[..n_interp]);
        let (check_x, check_y) = &column[n_interp];
        if fit.evaluate(check_x) != *check_y {
            return Err(Error::Domain(format!(
                "t^{} bracket coefficient is not polynomial across {} sizes",
                2 * k,
                parity.name()
            )));
        }
        let bound = if k == 0 { 0 } else { 2 * k - 1 };
        if fit.degree().unwrap_or(0) > bound {
            return Err(Error::Domain(format!(
                "t^{} bracket coefficient has degree above {bound}",
                2 * k
            )));
        }
        out.push(fit);
    }
    Ok(out)
}

/// A truncated Laurent expansion in N of one t-coefficient: entries run
/// from N^top downward, one per power.
#[derive(Debug, Clone)]
pub struct CoefficientWindow {
    pub t_power: u32,
    pub top: i64,
    pub entries: Vec<ExactScalar>,
}

impl CoefficientWindow {
    /// Some(coefficient of N^e); exponents above the window top are known
    /// zeros, exponents below the stored depth are unknown.
    pub fn coefficient(&self, e: i64) -> Option<ExactScalar> {
        if e > self.top {
            return Some(ExactScalar::zero());
        }
        let idx = self.top - e;
        if (idx as usize) < self.entries.len() {
            Some(self.entries[idx as usize].clone())
        } else {
            None
        }
    }
}

fn series_window(poly: &ExactPolynomial, cd: &[ExactScalar], t_power: u32) -> CoefficientWindow {
    let n_order = cd.len() as i64 - 1;
    let top = poly.degree().map(|d| d as i64).unwrap_or(0);
    let entries = (0..=n_order)
        .map(|idx| {
            let e = top - idx;
            let mut acc = ExactScalar::zero();
            for (j, c) in cd.iter().enumerate() {
                let d = e + j as i64;
                if (0..=top).contains(&d) {
                    acc += poly.coeff(d as usize) * c;
                }
            }
            acc
        })
        .collect();
    CoefficientWindow { t_power, top, entries }
}

fn average_windows(
    a: &CoefficientWindow,
    b: &CoefficientWindow,
    n_order: i64,
) -> CoefficientWindow {
    let top = a.top.max(b.top);
    let entries = (0..=n_order)
        .map(|idx| {
            let e = top - idx;
            let x = a.coefficient(e).expect("within common window");
            let y = b.coefficient(e).expect("within common window");
            (x + y) / rat(2)
        })
        .collect();
    CoefficientWindow { t_power: a.t_power, top, entries }
}

/// Outcome of assembling the averaged large-N form of the 2p-th moment and
/// comparing its N^0 t-coefficients with the semicircle density.
///
/// Two conventions are reported for the first sub-leading bracket. The
/// exact one reads the N^-1 layer of the averaged series deflated by
/// e^(Npt^2/2) (pi rho_sc)^(p^2). The display one instead assigns each
/// residual left in the N^0 layer to the 1/N bracket, which is the fit that
/// reproduces the published general-p product form; the two agree exactly
/// at p = 1, where the N^0 layer residuals vanish through t^10.
#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub p: u32,
    pub t_order: u32,
    pub n_order: u32,
    /// Averaged windows of the e^(-Npt^2/2)-damped coefficients, per t^(2k).
    pub averaged: Vec<CoefficientWindow>,
    /// N^0 term of each averaged t-coefficient.
    pub constant_terms: Vec<ExactScalar>,
    /// t-coefficients of (pi rho_sc)^(p^2).
    pub target: Vec<ExactScalar>,
    pub growing_terms_cancel: bool,
    pub matches_semicircle: bool,
    /// Smallest t-power where the constants deviate from the target.
    pub first_mismatch_t_power: Option<u32>,
    /// Undamped t^2 coefficient windows per parity (the displayed forms).
    pub raw_t2_even: Option<CoefficientWindow>,
    pub raw_t2_odd: Option<CoefficientWindow>,
    /// Exact first sub-leading bracket (N^-1 layer), when the depth allows.
    pub subleading_1: Option<Vec<ExactScalar>>,
    /// Triangle-fit first sub-leading bracket through t^2: the N^0 residual
    /// at t^4 is folded into the t^2 coefficient.
    pub subleading_1_display: Option<Vec<ExactScalar>>,
    /// Constant term of the second sub-leading bracket, when available.
    pub subleading_2_constant: Option<ExactScalar>,
}

/// Damped t-coefficient polynomials w_k(N) = sum_i (-Np/2)^i/i! b_{k-i}(N).
fn damped_polys(p: u32, brackets: &[ExactPolynomial]) -> Vec<ExactPolynomial> {
    let mut fact_i = ExactScalar::one();
    let mut scales = Vec::with_capacity(brackets.len());
    for i in 0..brackets.len() {
        if i > 0 {
            fact_i *= rat(i as i64);
        }
        scales.push(ratio(-(p as i64), 2).pow(i as i32) / &fact_i);
    }
    (0..brackets.len())
        .map(|k| {
            let mut acc = ExactPolynomial::zero();
            for i in 0..=k {
                let gauss = ExactPolynomial::monomial(scales[i].clone(), i);
                acc = &acc + &(&gauss * &brackets[k - i]);
            }
            acc
        })
        .collect()
}

/// Assembles the parity-averaged large-N expansion of
/// e^(-Npt^2/2) E[det(t-M)^(2p)] / leading factor and compares the N^0
/// coefficient of each t^(2k) with (pi rho_sc)^(p^2).
pub fn semicircle_recovery(p: u32, t_order: u32, n_order: u32) -> Result<RecoveryReport> {
    if p == 0 {
        return Err(Error::Domain("p must be >= 1".into()));
    }
    if t_order % 2 == 1 {
        return Err(Error::Domain("t order must be even".into()));
    }
    let k_max = t_order / 2;
    let cd_even = cd_series(p, Parity::Even, n_order)?.coefficients;
    let cd_odd = cd_series(p, Parity::Odd, n_order)?.coefficients;
    let br_even = moment_bracket_polys(p, Parity::Even, k_max)?;
    let br_odd = moment_bracket_polys(p, Parity::Odd, k_max)?;
    let w_even = damped_polys(p, &br_even);
    let w_odd = damped_polys(p, &br_odd);

    let windows_even: Vec<CoefficientWindow> = w_even
        .iter()
        .enumerate()
        .map(|(k, w)| series_window(w, &cd_even, 2 * k as u32))
        .collect();
    let windows_odd: Vec<CoefficientWindow> = w_odd
        .iter()
        .enumerate()
        .map(|(k, w)| series_window(w, &cd_odd, 2 * k as u32))
        .collect();

    let required = windows_even
        .iter()
        .chain(&windows_odd)
        .map(|w| w.top)
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    if required > n_order {
        return Err(Error::OrderStarvation {
            required,
            available: n_order,
        });
    }

    let averaged: Vec<CoefficientWindow> = windows_even
        .iter()
        .zip(&windows_odd)
        .map(|(a, b)| average_windows(a, b, n_order as i64))
        .collect();

    let growing_terms_cancel = averaged.iter().all(|w| {
        (1..=w.top).all(|e| w.coefficient(e).map(|c| c.is_zero()).unwrap_or(false))
    });
    let constant_terms: Vec<ExactScalar> = averaged
        .iter()
        .map(|w| w.coefficient(0).expect("depth checked"))
        .collect();

    // (pi rho_sc)^(p^2) in t^2-steps.
    let sc = semicircle_taylor(t_order)?;
    let sc_steps: Vec<ExactScalar> = (0..=k_max as usize).map(|k| sc.coeff(2 * k)).collect();
    let mut target = vec![ExactScalar::zero(); k_max as usize + 1];
    target[0] = ExactScalar::one();
    for _ in 0..p * p {
        target = convolve_trunc(&target, &sc_steps, k_max as usize + 1);
    }
    let matches_semicircle = constant_terms == target;
    let first_mismatch_t_power = constant_terms
        .iter()
        .zip(&target)
        .position(|(c, t)| c != t)
        .map(|k| 2 * k as u32);

    // N^-1 layer, for the longest prefix of t-orders whose windows are deep
    // enough to reach it.
    let u: Vec<ExactScalar> = averaged
        .iter()
        .map_while(|w| w.coefficient(-1))
        .collect();
    let subleading_1 = if u.is_empty() {
        None
    } else {
        // Divide the N^-1 layer by the target series: u = target * B1.
        let mut b1 = vec![ExactScalar::zero(); u.len()];
        for k in 0..u.len() {
            let mut acc = u[k].clone();
            for i in 1..=k {
                acc -= &target[i] * &b1[k - i];
            }
            b1[k] = acc; // target[0] = 1
        }
        Some(b1)
    };
    // Triangle fit: the damping factor contributes (Npt^2/2) * B1(t)/N to
    // the N^0 layer, so a t^4 residual r there is absorbed by adding
    // r/(p/2) to the t^2 coefficient of the bracket.
    let subleading_1_display = subleading_1.as_ref().and_then(|b1| {
        if b1.len() < 2 || constant_terms.len() < 3 {
            return None;
        }
        let residual = &constant_terms[2] - &target[2];
        Some(vec![
            b1[0].clone(),
            &b1[1] + residual * ratio(2, p as i64),
        ])
    });
    let subleading_2_constant = averaged
        .first()
        .and_then(|w| w.coefficient(-2));

    let raw_t2_even = br_even
        .get(1)
        .map(|b| series_window(b, &cd_even, 2));
    let raw_t2_odd = br_odd.get(1).map(|b| series_window(b, &cd_odd, 2));

    Ok(RecoveryReport {
        p,
        t_order,
        n_order,
        averaged,
        constant_terms,
        target,
        growing_terms_cancel,
        matches_semicircle,
        first_mismatch_t_power,
        raw_t2_even,
        raw_t2_odd,
        subleading_1,
        subleading_1_display,
        subleading_2_constant,
    })
}

// ---------------------------------------------------------------------------
// High-precision numeric checks.

const DYADIC_GUARD: u32 = 32;

/// Nearest multiple of 2^-bits.
pub fn dyadic_round(x: &ExactScalar, bits: u32) -> ExactScalar {
    let scale = BigInt::one() << bits;
    let scaled = x * ExactScalar::from_integer(scale.clone());
    ExactScalar::new(scaled.round().to_integer(), scale)
}

fn dyadic_mul(a: &ExactScalar, b: &ExactScalar, bits: u32) -> ExactScalar {
    dyadic_round(&(a * b), bits)
}

fn dyadic_powi(base: &ExactScalar, mut e: u64, bits: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = dyadic_mul(&acc, &sq, bits);
        }
        e >>= 1;
        if e > 0 {
            sq = dyadic_mul(&sq, &sq, bits);
        }
    }
    acc
}

/// Euler's number as a dyadic rational accurate to 2^-bits.
pub fn euler_e(bits: u32) -> ExactScalar {
    let mut sum = ExactScalar::zero();
    let mut term = ExactScalar::one();
    let mut k: u64 = 1;
    loop {
        sum += &term;
        term /= rat(k as i64);
        if ExactScalar::from_integer(factorial(k)) > ExactScalar::from_integer(BigInt::one() << (bits + 8)) {
            sum += &term; // one more term, remainder < 2/(k+1)!
            break;
        }
        k += 1;
    }
    dyadic_round(&sum, bits)
}

/// The exact factorial product divided by its full leading factor
/// (sign included), evaluated as a dyadic rational accurate to 2^-bits:
/// this is the quantity the parity series expands, of size e^Np times the
/// exact rational part, so only the final product is rounded.
pub fn leading_ratio_dyadic(n: u32, p: u32, bits: u32) -> ExactScalar {
    let work = bits + DYADIC_GUARD;
    let cd = gue_c_lambda_d_parity(n, p);
    let np = n as u64 * p as u64;
    let power = BigInt::from(2 * n as u64).pow(np as u32 + p * p);
    let mut lead = ExactScalar::from_integer(power) * gamma_p(p);
    if n % 2 == 1 && p % 2 == 1 {
        lead = -lead;
    }
    let e_np = dyadic_powi(&euler_e(work), np, work);
    dyadic_round(&(cd / lead * e_np), bits)
}

/// log2 of |x| via bit lengths, robust for huge numerators/denominators.
pub fn log2_abs(x: &ExactScalar) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let n_top = (n >> (nb - 64).max(0) as u64).to_f64().unwrap_or(f64::NAN);
    let d_top = (d >> (db - 64).max(0) as u64).to_f64().unwrap_or(f64::NAN);
    ((nb - 64).max(0) - (db - 64).max(0)) as f64 + n_top.log2() - d_top.log2()
}

/// Observed convergence order of the series truncated at N^-k, estimated
/// from the truncation errors at two sizes of the matching parity:
/// log(err1/err2) / log(n2/n1). Should approach k+1.
pub fn observed_convergence_order(
    p: u32,
    parity: Parity,
    k_truncate: u32,
    n1: u32,
    n2: u32,
    bits: u32,
) -> Result<f64> {
    if !parity.matches(n1) || !parity.matches(n2) {
        return Err(Error::Domain(format!(
            "sizes {n1} and {n2} are not both {}",
            parity.name()
        )));
    }
    if n2 <= n1 {
        return Err(Error::Domain("sizes must be increasing".into()));
    }
    let series = cd_series(p, parity, k_truncate)?;
    let err = |n: u32| -> Result<ExactScalar> {
        let exact = leading_ratio_dyadic(n, p, bits);
        let truncated = series.partial_sum(n, k_truncate)?;
        Ok((exact - truncated).abs())
    };
    let e1 = err(n1)?;
    let e2 = err(n2)?;
    Ok((log2_abs(&e1) - log2_abs(&e2)) / ((n2 as f64) / (n1 as f64)).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[(i64, i64)]) -> ExactPolynomial {
        ExactPolynomial::from_coeffs(coeffs.iter().map(|&(n, d)| ratio(n, d)).collect::<Vec<_>>())
    }

    #[test]
    fn bernoulli_table_basics() {
        let t = BernoulliTable::new(8);
        assert_eq!(t.number(0), rat(1));
        assert_eq!(t.number(1), ratio(-1, 2));
        assert_eq!(t.number(2), ratio(1, 6));
        assert_eq!(t.number(3), rat(0));
        assert_eq!(t.number(4), ratio(-1, 30));
        assert_eq!(t.number(6), ratio(1, 42));
        assert_eq!(t.number(8), ratio(-1, 30));
        // B_2(h) = h^2 - h + 1/6, B_3(h) = h^3 - 3h^2/2 + h/2.
        assert_eq!(t.poly(2), &poly(&[(1, 6), (-1, 1), (1, 1)]));
        assert_eq!(t.poly(3), &poly(&[(0, 1), (1, 2), (-3, 2), (1, 1)]));
        // B_j(1) = B_j(0) for j >= 2.
        for j in 2..=8 {
            assert_eq!(t.poly(j).evaluate(&rat(1)), t.number(j), "j={j}");
        }
    }

    #[test]
    fn faulhaber_prefix_sums() {
        let t = BernoulliTable::new(6);
        // sum_{x=0}^{P-1} x^2 = P(P-1)(2P-1)/6
        let q = t.prefix_sum(&ExactPolynomial::monomial(ExactScalar::one(), 2));
        for p in 0..8i64 {
            let direct: i64 = (0..p).map(|x| x * x).sum();
            assert_eq!(q.evaluate(&rat(p)), rat(direct), "P={p}");
        }
    }

    #[test]
    fn gamma_ratio_examples() {
        let same = gamma_ratio_series(&ratio(1, 3), &ratio(1, 3), 5).unwrap();
        assert!(same.coefficients[0].is_one());
        assert!(same.coefficients[1..].iter().all(|c| c.is_zero()));

        // Gamma(z+1)/Gamma(z) = z exactly.
        let shift = gamma_ratio_series(&rat(1), &rat(0), 6).unwrap();
        assert_eq!(shift.leading_factor, "z^(1)");
        assert!(shift.coefficients[1..].iter().all(|c| c.is_zero()));

        // Gamma(z+1/2)/Gamma(z) ~ z^(1/2) (1 - 1/(8z) + 1/(128 z^2) + ...).
        let half = gamma_ratio_series(&ratio(1, 2), &rat(0), 2).unwrap();
        assert_eq!(half.coefficients[1], ratio(-1, 8));
        assert_eq!(half.coefficients[2], ratio(1, 128));

        assert!(gamma_ratio_series(&rat(1), &rat(0), 100).is_err());
    }

    #[test]
    fn stored_series_examples() {
        for p in 1..=4i64 {
            let even = cd_series(p as u32, Parity::Even, 1).unwrap();
            assert_eq!(even.coefficients[1], ratio(p * (4 * p * p + 1), 6), "p={p}");
            let odd = cd_series(p as u32, Parity::Odd, 1).unwrap();
            assert_eq!(odd.coefficients[1], ratio(p * (2 * p * p - 1), 3), "p={p}");
        }
        let p1 = cd_series(1, Parity::Even, 9).unwrap();
        assert_eq!(p1.coefficients[2], ratio(-11, 72));
        assert_eq!(
            p1.coefficients[9],
            ratio(-889_926_952_101_377, 1_005_673_439_232_000)
        );
        // The symbolic tables at p = 1 agree with the stored deep tables.
        for parity in [Parity::Even, Parity::Odd] {
            let stored = p1_cd_table(parity);
            for k in 0..=SYMBOLIC_CD_ORDER {
                let sym = cd_coefficient_poly(parity, k).unwrap().evaluate(&rat(1));
                assert_eq!(sym, stored[k as usize], "{} k={k}", parity.name());
            }
        }
        // Orders beyond the stored data are refused.
        assert!(matches!(
            cd_series(2, Parity::Even, 7),
            Err(Error::OrderStarvation { required: 7, available: 6 })
        ));
        assert!(matches!(
            cd_series(1, Parity::Odd, 10),
            Err(Error::OrderStarvation { required: 10, available: 9 })
        ));
    }

    #[test]
    fn regenerated_coefficients_match_stored_tables() {
        for parity in [Parity::Even, Parity::Odd] {
            for k in 1..=2u32 {
                let regenerated = regenerated_cd_coefficient(parity, k).unwrap();
                let stored = cd_coefficient_poly(parity, k).unwrap();
                assert_eq!(regenerated, stored, "{} k={k}", parity.name());
            }
        }
    }

    #[test]
    fn parity_average_behaviour() {
        let e = cd_series(2, Parity::Even, 3).unwrap();
        let o = cd_series(2, Parity::Odd, 3).unwrap();
        let avg = parity_average(&e, &o).unwrap();
        assert_eq!(avg.class, SeriesClass::Averaged);
        for k in 0..=3usize {
            assert_eq!(
                avg.coefficients[k],
                (&e.coefficients[k] + &o.coefficients[k]) / rat(2)
            );
        }
        // Averaging a series with itself is the identity on coefficients.
        let mut o_as_even = o.clone();
        o_as_even.class = SeriesClass::Even;
        let self_avg = parity_average(&o_as_even, &o).unwrap();
        assert_eq!(self_avg.coefficients, o.coefficients);
        // Mismatched orders are refused.
        let short = cd_series(2, Parity::Odd, 2).unwrap();
        assert!(parity_average(&e, &short).is_err());
    }

    #[test]
    fn semicircle_taylor_values() {
        let sc = semicircle_taylor(10).unwrap();
        assert_eq!(sc.coeff(0), rat(1));
        assert_eq!(sc.coeff(2), ratio(-1, 8));
        assert_eq!(sc.coeff(4), ratio(-1, 128));
        assert_eq!(sc.coeff(6), ratio(-1, 1024));
        assert_eq!(sc.coeff(8), ratio(-5, 32768));
        assert_eq!(sc.coeff(10), ratio(-7, 262_144));
        assert!(semicircle_taylor(5).is_err());
        // Squared, the series is exactly 1 - t^2/4 through the truncation.
        let sq = &sc * &sc;
        assert_eq!(sq.coeff(0), rat(1));
        assert_eq!(sq.coeff(2), ratio(-1, 4));
        for k in 2..=5 {
            assert!(sq.coeff(2 * k).is_zero(), "k={k}");
        }
    }

    #[test]
    fn bracket_polynomials_match_displayed_forms_p1() {
        for parity in [Parity::Even, Parity::Odd] {
            let b = moment_bracket_polys(1, parity, 4).unwrap();
            assert_eq!(b[0], ExactPolynomial::one());
            match parity {
                Parity::Even => {
                    assert!(b[1].is_zero());
                    // N^3 p/6 at p=1
                    assert_eq!(b[2], poly(&[(0, 1), (0, 1), (0, 1), (1, 6)]));
                    // N^4 p (2p - N)/45 at p=1 = (2N^4 - N^5)/45
                    assert_eq!(
                        b[3],
                        poly(&[(0, 1), (0, 1), (0, 1), (0, 1), (2, 45), (-1, 45)])
                    );
                    // N^5 p (4N^2 - 17Np + 16p^2 + 2)/2520 at p=1
                    assert_eq!(
                        b[4],
                        poly(&[
                            (0, 1),
                            (0, 1),
                            (0, 1),
                            (0, 1),
                            (0, 1),
                            (18, 2520),
                            (-17, 2520),
                            (4, 2520)
                        ])
                    );
                }
                Parity::Odd => {
                    // Np at p=1
                    assert_eq!(b[1], poly(&[(0, 1), (1, 1)]));
                    // N^2 (p^2 - Np)/6 at p=1 = (N^2 - N^3)/6
                    assert_eq!(b[2], poly(&[(0, 1), (0, 1), (1, 6), (-1, 6)]));
                    // N^3 p (2N^2 - 3Np + p^2)/90 at p=1
                    assert_eq!(
                        b[3],
                        poly(&[(0, 1), (0, 1), (0, 1), (1, 90), (-3, 90), (2, 90)])
                    );
                    // N^4 p (-4N^3 + 15N^2 p - 6Np^2 - 2N + p^3 - 4p)/2520 at p=1
                    assert_eq!(
                        b[4],
                        poly(&[
                            (0, 1),
                            (0, 1),
                            (0, 1),
                            (0, 1),
                            (-3, 2520),
                            (-8, 2520),
                            (15, 2520),
                            (-4, 2520)
                        ])
                    );
                }
            }
        }
    }

    #[test]
    fn bracket_polynomials_match_displayed_forms_general_p() {
        for p in 2..=3i64 {
            let even = moment_bracket_polys(p as u32, Parity::Even, 2).unwrap();
            assert!(even[1].is_zero(), "p={p}");
            let mut expect = vec![ExactScalar::zero(); 4];
            expect[3] = ratio(p, 6);
            assert_eq!(even[2], ExactPolynomial::from_coeffs(expect), "p={p}");

            let odd = moment_bracket_polys(p as u32, Parity::Odd, 2).unwrap();
            assert_eq!(
                odd[1],
                ExactPolynomial::from_coeffs(vec![ExactScalar::zero(), rat(p)]),
                "p={p}"
            );
            let mut expect = vec![ExactScalar::zero(); 4];
            expect[2] = ratio(p * p, 6);
            expect[3] = ratio(-p, 6);
            assert_eq!(odd[2], ExactPolynomial::from_coeffs(expect), "p={p}");
        }
    }

    #[test]
    fn recovery_p1_matches_semicircle_through_t10() {
        let report = semicircle_recovery(1, 10, 9).unwrap();
        assert!(report.growing_terms_cancel);
        assert!(report.matches_semicircle);
        assert_eq!(report.first_mismatch_t_power, None);
        assert_eq!(
            report.constant_terms,
            vec![
                rat(1),
                ratio(-1, 8),
                ratio(-1, 128),
                ratio(-1, 1024),
                ratio(-5, 32768),
                ratio(-7, 262_144)
            ]
        );
        // At p = 1 the N^0 residuals vanish, so the exact and triangle-fit
        // brackets coincide: 7/12 + t^2/8 + ...
        let b1 = report.subleading_1.as_ref().expect("depth 9 supports N^-1");
        assert_eq!(b1[0], ratio(7, 12));
        assert_eq!(b1[1], ratio(1, 8));
        let b1d = report.subleading_1_display.as_ref().unwrap();
        assert_eq!(b1d.as_slice(), &b1[..2]);
        // One order short: the t^10 window no longer reaches N^0.
        assert!(matches!(
            semicircle_recovery(1, 10, 8),
            Err(Error::OrderStarvation { required: 9, available: 8 })
        ));
    }

    #[test]
    fn recovery_general_p_subleading_brackets() {
        for p in 2i64..=3 {
            let report = semicircle_recovery(p as u32, 4, 6).unwrap();
            assert!(report.growing_terms_cancel, "p={p}");
            // The constants agree with (pi rho_sc)^(p^2) through t^2 and
            // then pick up the exact residual p^2(p^2-1)/192 at t^4; the
            // coincidence of the two limits is complete only at p = 1.
            assert!(!report.matches_semicircle, "p={p}");
            assert_eq!(report.first_mismatch_t_power, Some(4), "p={p}");
            assert_eq!(report.constant_terms[0], rat(1), "p={p}");
            assert_eq!(report.constant_terms[1], report.target[1], "p={p}");
            assert_eq!(
                &report.constant_terms[2] - &report.target[2],
                ratio(p * p * (p * p - 1), 192),
                "p={p}"
            );
            // Exact N^-1 bracket: p(8p^2-1)/12 + p^3 t^2/8 + ...
            let b1 = report.subleading_1.as_ref().expect("depth 6 supports N^-1");
            assert_eq!(b1[0], ratio(p * (8 * p * p - 1), 12), "p={p}");
            assert_eq!(b1[1], ratio(p.pow(3), 8), "p={p}");
            // Triangle-fit bracket reproduces the published t^2 value.
            let b1d = report.subleading_1_display.expect("computable at t^4");
            assert_eq!(b1d[0], b1[0], "p={p}");
            assert_eq!(b1d[1], ratio(p * (13 * p * p - 1), 96), "p={p}");
            let b2 = report.subleading_2_constant.expect("depth 6 supports N^-2");
            assert_eq!(
                b2,
                ratio(p * p * (32 * p.pow(4) - 56 * p * p + 17), 144),
                "p={p}"
            );
            // Raw t^2 windows: the even one vanishes identically, the odd
            // one displays Np + p^2(2p^2-1)/3 + O(1/N).
            let raw_even = report.raw_t2_even.expect("t order 4 computes t^2");
            assert!(raw_even.entries.iter().all(|c| c.is_zero()), "p={p}");
            let raw_odd = report.raw_t2_odd.unwrap();
            assert_eq!(raw_odd.coefficient(1).unwrap(), rat(p), "p={p}");
            assert_eq!(
                raw_odd.coefficient(0).unwrap(),
                ratio(p * p * (2 * p * p - 1), 3),
                "p={p}"
            );
        }
        // (pi rho_sc)^4 = (1 - t^2/4)^2 at p = 2.
        let report = semicircle_recovery(2, 4, 6).unwrap();
        assert_eq!(report.target, vec![rat(1), ratio(-1, 2), ratio(1, 16)]);
    }

    #[test]
    fn dyadic_euler_constant() {
        let e = euler_e(64);
        let known = 2.718281828459045f64;
        let approx = crate::exact::to_f64(&e);
        assert!((approx - known).abs() < 1e-15, "{approx}");
    }

    #[test]
    fn truncated_series_converges_at_expected_order() {
        // Error-ratio slope between N = 200 and N = 400 in 200-bit
        // arithmetic; truncation at N^-k should converge at order k+1.
        for p in [1u32, 2] {
            for k in [1u32, 2, 3] {
                let observed =
                    observed_convergence_order(p, Parity::Even, k, 200, 400, 200).unwrap();
                let expected = (k + 1) as f64;
                assert!(
                    (observed - expected).abs() <= 0.15 * expected,
                    "p={p} k={k}: observed {observed}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn odd_parity_numeric_convergence() {
        // Doubling an odd size leaves the parity class, so compare two odd
        // sizes close to a doubling instead.
        let observed = observed_convergence_order(1, Parity::Odd, 2, 201, 401, 200).unwrap();
        assert!((observed - 3.0).abs() <= 0.45, "observed {observed}");
        assert!(observed_convergence_order(1, Parity::Odd, 2, 200, 400, 200).is_err());
    }
}

//! Linear and integral-type contraction conditions over related pairs.
//!
//! Distances are rational, so the linear constant `k*` is an exact rational.
//! Integrals of the catalogued integrands are exact as well: constants and
//! piecewise-linear tables integrate to rationals, and `c·t^α` integrates to
//! `c/(α+1)·b^(α+1)`, which is represented symbolically so that comparisons
//! stay exact for fractional `α`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, is_integer, parse_rational, pow_u, to_f64, Rational};
use crate::relation::{FiniteRelation, SelfMap, Verdict};
use crate::space::{FiniteDistanceSpace, Point};

/// Bound on `|numerator|` and denominator of a power exponent.
pub const MAX_EXPONENT_PART: u64 = 64;

/// A non-negative real of the form `base^exponent` with rational `base >= 0`
/// and rational `exponent > 0`. Used for contraction constants, which are
/// ratios of integrals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KValue {
    base: Rational,
    exponent: Rational,
}

impl KValue {
    pub fn rational(value: Rational) -> Self {
        Self {
            base: value,
            exponent: Rational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// `base^exponent`, normalised so equal values compare equal whenever
    /// the power is rational.
    pub fn power(base: Rational, exponent: Rational) -> Self {
        assert!(!base.is_negative() && exponent.is_positive());
        if base.is_zero() || base.is_one() {
            return Self::rational(base);
        }
        let (base, exponent) = match exact_root(&base, exponent.denom()) {
            Some(root) => (root, Rational::from_integer(exponent.numer().clone())),
            None => (base, exponent),
        };
        if is_integer(&exponent) {
            let e = exponent.to_integer().to_u64().expect("small exponent");
            return Self::rational(pow_u(&base, e));
        }
        Self { base, exponent }
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        self.exponent.is_one().then(|| self.base.clone())
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.base).powf(to_f64(&self.exponent))
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn is_below_one(&self) -> bool {
        self.base < Rational::one()
    }

    /// Exact comparison with a non-negative rational.
    pub fn cmp_rational(&self, k: &Rational) -> Ordering {
        self.cmp(&KValue::rational(k.clone()))
    }

    fn exponent_parts(&self) -> (u64, u64) {
        let numer = self
            .exponent
            .numer()
            .to_u64()
            .expect("positive small exponent");
        let denom = self.exponent.denom().to_u64().expect("small exponent");
        (numer, denom)
    }
}

/// The rational `n`-th root of `value`, if there is one.
fn exact_root(value: &Rational, n: &BigInt) -> Option<Rational> {
    let n = n.to_u32()?;
    if n == 1 {
        return Some(value.clone());
    }
    let root = |v: &BigInt| {
        let r = v.nth_root(n);
        (num_traits::Pow::pow(&r, n) == *v).then_some(r)
    };
    Some(Rational::new(root(value.numer())?, root(value.denom())?))
}

impl Ord for KValue {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.exponent == other.exponent {
            return self.base.cmp(&other.base);
        }
        // a^(p/q) vs b^(r/s)  <=>  a^(p s) vs b^(r q)
        let (p, q) = self.exponent_parts();
        let (r, s) = other.exponent_parts();
        pow_u(&self.base, p * s).cmp(&pow_u(&other.base, r * q))
    }
}

impl PartialOrd for KValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => f.write_str(&format_rational(&q)),
            None => write!(
                f,
                "({})^({})",
                format_rational(&self.base),
                format_rational(&self.exponent)
            ),
        }
    }
}

impl FromStr for KValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let (base, exp) = rest
                .split_once(")^(")
                .and_then(|(b, e)| Some((b, e.strip_suffix(')')?)))
                .ok_or_else(|| Error::InvalidRational(s.to_string()))?;
            let base = parse_rational(base)?;
            let exp = parse_rational(exp)?;
            if base.is_negative() || !exp.is_positive() {
                return Err(Error::InvalidRational(s.to_string()));
            }
            Ok(Self::power(base, exp))
        } else {
            Ok(Self::rational(parse_rational(s)?))
        }
    }
}

impl serde::Serialize for KValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for KValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Why a related pair rules out every `k ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockReason {
    /// `d(x, y) = 0` but `d(fx, fy) > 0`.
    ZeroDistance,
    /// `d(fx, fy) >= d(x, y) > 0`.
    RatioAtLeastOne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingPair {
    pub pair: (Point, Point),
    pub reason: BlockReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionReport {
    pub feasible: bool,
    /// Largest ratio over related pairs with positive distance, `0` if none.
    pub k_star: KValue,
    /// Related pair attaining `k_star`, if any.
    pub attained_at: Option<(Point, Point)>,
    pub blocking_pairs: Vec<BlockingPair>,
}

fn build_report<F>(r: &FiniteRelation, f: &SelfMap, mut ratio: F) -> ContractionReport
where
    F: FnMut(Point, Point, Point, Point) -> PairRatio,
{
    let mut k_star = KValue::zero();
    let mut attained_at = None;
    let mut blocking_pairs = Vec::new();
    for (x, y) in r.pairs() {
        match ratio(x, y, f.apply(x), f.apply(y)) {
            PairRatio::Vacuous => {}
            PairRatio::Blocked => blocking_pairs.push(BlockingPair {
                pair: (x, y),
                reason: BlockReason::ZeroDistance,
            }),
            PairRatio::Ratio(q) => {
                if !q.is_below_one() {
                    blocking_pairs.push(BlockingPair {
                        pair: (x, y),
                        reason: BlockReason::RatioAtLeastOne,
                    });
                }
                if attained_at.is_none() || q > k_star {
                    k_star = q;
                    attained_at = Some((x, y));
                }
            }
        }
    }
    ContractionReport {
        feasible: blocking_pairs.is_empty() && k_star.is_below_one(),
        k_star,
        attained_at,
        blocking_pairs,
    }
}

enum PairRatio {
    /// Both sides zero.
    Vacuous,
    /// Zero on the right, positive on the left.
    Blocked,
    Ratio(KValue),
}

/// Smallest `k` with `d(fx, fy) <= k·d(x, y)` on every related pair.
pub fn minimal_k(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    f: &SelfMap,
) -> ContractionReport {
    build_report(r, f, |x, y, fx, fy| {
        let before = space.dist(x, y);
        let after = space.dist(fx, fy);
        if before.is_zero() {
            if after.is_zero() {
                PairRatio::Vacuous
            } else {
                PairRatio::Blocked
            }
        } else {
            PairRatio::Ratio(KValue::rational(after / before))
        }
    })
}

fn check_constant(k: &Rational) -> Result<()> {
    if k.is_negative() || *k >= Rational::one() {
        return Err(Error::ConstantOutOfRange(format_rational(k)));
    }
    Ok(())
}

/// Whether `d(fx, fy) <= k·d(x, y)` for all `(x, y) ∈ R`; `k` must lie in
/// `[0, 1)`.
pub fn check_k(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    f: &SelfMap,
    k: &Rational,
) -> Result<Verdict<(Point, Point)>> {
    check_constant(k)?;
    for (x, y) in r.pairs() {
        if *space.dist(f.apply(x), f.apply(y)) > k * space.dist(x, y) {
            return Ok(Verdict::Fails((x, y)));
        }
    }
    Ok(Verdict::Holds)
}

/// A member of the integrand catalogue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegrandSpec {
    /// `ρ(t) = c`.
    Constant { c: Rational },
    /// `ρ(t) = c·t^α`.
    Power { c: Rational, alpha: Rational },
    /// Linear interpolation between `(t, ρ(t))` knots starting at `t = 0`,
    /// constant after the last knot.
    PiecewiseLinear { knots: Vec<(Rational, Rational)> },
}

impl IntegrandSpec {
    pub fn constant(c: Rational) -> Self {
        Self::Constant { c }
    }

    pub fn power(c: Rational, alpha: Rational) -> Self {
        Self::Power { c, alpha }
    }

    pub fn piecewise_linear(knots: Vec<(Rational, Rational)>) -> Self {
        Self::PiecewiseLinear { knots }
    }

    /// Checks the parameters place `ρ` in the admissible class: locally
    /// integrable with positive integral over every `(0, ε)`.
    pub fn validate(&self) -> Result<()> {
        let outside = |msg: String| Err(Error::OutsideOmega(msg));
        match self {
            Self::Constant { c } => {
                if !c.is_positive() {
                    return outside(format!("constant {} must be positive", format_rational(c)));
                }
            }
            Self::Power { c, alpha } => {
                if !c.is_positive() {
                    return outside(format!("scale {} must be positive", format_rational(c)));
                }
                if *alpha <= int(-1) {
                    return outside(format!(
                        "exponent {} must exceed -1",
                        format_rational(alpha)
                    ));
                }
                let limit = BigInt::from(MAX_EXPONENT_PART);
                if alpha.numer().abs() > limit || *alpha.denom() > limit {
                    return outside(format!(
                        "exponent {} has parts larger than {MAX_EXPONENT_PART}",
                        format_rational(alpha)
                    ));
                }
            }
            Self::PiecewiseLinear { knots } => {
                let Some(first) = knots.first() else {
                    return outside("piecewise-linear table needs at least one knot".into());
                };
                if !first.0.is_zero() {
                    return outside("first knot must sit at t = 0".into());
                }
                if knots.iter().any(|(_, v)| v.is_negative()) {
                    return outside("values must be non-negative".into());
                }
                for w in knots.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return outside("knot abscissae must increase strictly".into());
                    }
                    if w[0].1.is_zero() && w[1].1.is_zero() {
                        return outside("a zero segment has zero integral".into());
                    }
                }
                if knots.last().is_some_and(|(_, v)| v.is_zero()) {
                    return outside("the value after the last knot must be positive".into());
                }
            }
        }
        Ok(())
    }
}

/// Exact value `coeff · base^exponent` of an integral `∫₀^b ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralValue {
    pub coeff: Rational,
    pub base: Rational,
    pub exponent: Rational,
}

impl IntegralValue {
    fn rational(value: Rational) -> Self {
        Self {
            coeff: Rational::one(),
            base: value,
            exponent: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.base.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        is_integer(&self.exponent).then(|| {
            let e = self.exponent.to_integer().to_u64().expect("small exponent");
            &self.coeff * pow_u(&self.base, e)
        })
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * to_f64(&self.base).powf(to_f64(&self.exponent))
    }

    /// `self / other` for two integrals of the same integrand.
    fn ratio(&self, other: &Self) -> KValue {
        debug_assert_eq!(self.coeff, other.coeff);
        debug_assert_eq!(self.exponent, other.exponent);
        KValue::power(&self.base / &other.base, self.exponent.clone())
    }
}

/// `∫₀^b ρ(t) dt`, evaluated in closed form.
pub fn integrate(rho: &IntegrandSpec, b: &Rational) -> Result<IntegralValue> {
    rho.validate()?;
    if b.is_negative() {
        return Err(Error::NegativeLimit(format_rational(b)));
    }
    Ok(match rho {
        IntegrandSpec::Constant { c } => IntegralValue::rational(c * b),
        IntegrandSpec::Power { c, alpha } => {
            let e = alpha + Rational::one();
            IntegralValue {
                coeff: c / &e,
                base: b.clone(),
                exponent: e,
            }
        }
        IntegrandSpec::PiecewiseLinear { knots } => {
            IntegralValue::rational(piecewise_integral(knots, b))
        }
    })
}

fn piecewise_integral(knots: &[(Rational, Rational)], b: &Rational) -> Rational {
    let two = int(2);
    let mut total = Rational::zero();
    for w in knots.windows(2) {
        let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
        if b <= t0 {
            return total;
        }
        if b < t1 {
            let vb = v0 + (v1 - v0) * (b - t0) / (t1 - t0);
            return total + (v0 + vb) * (b - t0) / two;
        }
        total += (v0 + v1) * (t1 - t0) / &two;
    }
    let (t_last, v_last) = knots.last().expect("validated non-empty");
    if b > t_last {
        total += v_last * (b - t_last);
    }
    total
}

/// Re-checks `∫₀^ε ρ > 0` at each `ε`. Errors when `ρ` is outside the
/// catalogue's admissible parameters or an `ε` is not positive.
pub fn check_omega(rho: &IntegrandSpec, epsilons: &[Rational]) -> Result<bool> {
    rho.validate()?;
    for eps in epsilons {
        if !eps.is_positive() {
            return Err(Error::OutsideOmega(format!(
                "epsilon {} must be positive",
                format_rational(eps)
            )));
        }
        if integrate(rho, eps)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `k` with `∫₀^{d(fx,fy)} ρ <= k ∫₀^{d(x,y)} ρ` on every related
/// pair.
pub fn integral_minimal_k(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    f: &SelfMap,
    rho: &IntegrandSpec,
) -> Result<ContractionReport> {
    rho.validate()?;
    let mut memo = std::collections::HashMap::new();
    let mut integral = |x: Point, y: Point| -> IntegralValue {
        let key = (x.min(y), x.max(y));
        memo.entry(key)
            .or_insert_with(|| integrate(rho, space.dist(x, y)).expect("validated integrand"))
            .clone()
    };
    Ok(build_report(r, f, |x, y, fx, fy| {
        let before = integral(x, y);
        let after = integral(fx, fy);
        if before.is_zero() {
            if after.is_zero() {
                PairRatio::Vacuous
            } else {
                PairRatio::Blocked
            }
        } else if after.is_zero() {
            PairRatio::Ratio(KValue::zero())
        } else {
            PairRatio::Ratio(after.ratio(&before))
        }
    }))
}

/// Integral analogue of [`check_k`].
pub fn integral_check_k(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    f: &SelfMap,
    rho: &IntegrandSpec,
    k: &Rational,
) -> Result<Verdict<(Point, Point)>> {
    check_constant(k)?;
    rho.validate()?;
    for (x, y) in r.pairs() {
        let before = integrate(rho, space.dist(x, y))?;
        let after = integrate(rho, space.dist(f.apply(x), f.apply(y)))?;
        let holds = if after.is_zero() {
            true
        } else if before.is_zero() {
            false
        } else {
            after.ratio(&before).cmp_rational(k) != Ordering::Greater
        };
        if !holds {
            return Ok(Verdict::Fails((x, y)));
        }
    }
    Ok(Verdict::Holds)
}

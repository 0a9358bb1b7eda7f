//! Root-structure classification from the ranks of specialized formula
//! matrices, plus divided-power coordinates and test-input generators.
//!
//! For a monic `f` the Bézout matrix has rank `#distinct roots - 1` and
//! nullity `sum(m_i - 1)`. The Bézout signature cannot tell two double
//! roots from one triple root; the minimal open-swallowtail matrix can,
//! its nullity jumping to at least 2 on the self-intersection locus.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::{factorial, int, parse_rational, to_short_string};
use crate::exact::{MultiPoly, PolyMatrix, Rational};
use crate::formulas::{FormulaBundle, FormulaKind};

/// Distinct rational roots with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootProfile {
    pairs: Vec<(Rational, usize)>,
}

impl RootProfile {
    pub fn new(pairs: Vec<(Rational, usize)>) -> Result<Self> {
        if pairs.iter().any(|(_, m)| *m == 0) {
            return Err(Error::InvalidProfile("multiplicities must be positive".into()));
        }
        for (i, (r, _)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|(s, _)| s == r) {
                return Err(Error::InvalidProfile(format!("root {r} repeated")));
            }
        }
        let p = RootProfile { pairs };
        if p.degree() < 2 {
            return Err(Error::InvalidProfile("total multiplicity must be at least 2".into()));
        }
        Ok(p)
    }

    pub fn pairs(&self) -> &[(Rational, usize)] {
        &self.pairs
    }

    pub fn degree(&self) -> usize {
        self.pairs.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct_roots(&self) -> usize {
        self.pairs.len()
    }

    /// `sum(m_i - 1)`.
    pub fn multiplicity_excess(&self) -> usize {
        self.pairs.iter().map(|(_, m)| m - 1).sum()
    }

    /// Number of distinct roots of multiplicity at least two.
    pub fn repeated_roots(&self) -> usize {
        self.pairs.iter().filter(|(_, m)| *m >= 2).count()
    }

    /// `sum(floor(m_i / 2))`: how many disjoint double-root pairs the
    /// multiplicities can be split into.
    pub fn double_pairs(&self) -> usize {
        self.pairs.iter().map(|(_, m)| m / 2).sum()
    }

    /// At least two distinct roots of multiplicity two or more.
    pub fn has_two_repeated_roots(&self) -> bool {
        self.repeated_roots() >= 2
    }

    /// Membership in the closed self-intersection locus: `f` is divisible by
    /// the square of a quadratic, so `sum(floor(m_i / 2)) >= 2`. Besides two
    /// distinct repeated roots this admits one root of multiplicity at
    /// least 4, the limit of two double roots running together.
    pub fn on_self_intersection(&self) -> bool {
        self.double_pairs() >= 2
    }

    pub fn translate(&self, t: &Rational) -> RootProfile {
        RootProfile {
            pairs: self.pairs.iter().map(|(r, m)| (r + t, *m)).collect(),
        }
    }
}

impl fmt::Display for RootProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|(r, m)| format!("{}^{m}", to_short_string(r)))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses `root^mult` items separated by commas, e.g. `0^3,1^1` or
/// `-1/2^2,3`. A bare root has multiplicity one.
impl FromStr for RootProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pairs = s
            .split(',')
            .map(|item| {
                let item = item.trim();
                match item.rsplit_once('^') {
                    Some((r, m)) => {
                        let m: usize = m
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad multiplicity in {item:?}")))?;
                        Ok((parse_rational(r)?, m))
                    }
                    None => Ok((parse_rational(item)?, 1)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        RootProfile::new(pairs)
    }
}

/// Coefficients `(1, a1, .., an)` of `prod (x - r_i)^(m_i)`.
pub fn poly_from_profile(p: &RootProfile) -> Vec<Rational> {
    let mut coeffs = vec![Rational::one()];
    for (r, m) in &p.pairs {
        for _ in 0..*m {
            // multiply by (x - r)
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            coeffs = next;
        }
    }
    coeffs
}

/// `d/dx` on a coefficient vector ordered from the leading term down.
pub fn derivative_coeffs(coeffs: &[Rational]) -> Vec<Rational> {
    let deg = coeffs.len().saturating_sub(1);
    coeffs[..deg]
        .iter()
        .enumerate()
        .map(|(i, c)| c * int((deg - i) as i64))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub n: usize,
    pub bezout_rank: usize,
    pub bezout_nullity: usize,
    pub swallowtail_nullity: usize,
    pub distinct_roots_detected: usize,
    pub multiplicity_excess: usize,
    pub multi_double_pair: bool,
}

/// The matrices `classify` specializes, built once per degree.
#[derive(Clone, Debug)]
pub struct FormulaSet {
    pub n: usize,
    pub bezout: FormulaBundle,
    pub swallowtail_monic: FormulaBundle,
}

impl FormulaSet {
    pub fn new(n: usize) -> Result<Self> {
        Ok(FormulaSet {
            n,
            bezout: FormulaBundle::build(FormulaKind::Bezout, n)?,
            swallowtail_monic: FormulaBundle::build(FormulaKind::SwallowtailMonic, n)?,
        })
    }
}

fn nullity_at(m: &PolyMatrix, point: &[Rational]) -> Result<(usize, usize)> {
    Ok(m.evaluate(point)?.rank_exact())
}

/// Normalizes to `a0 = 1`, specializes both matrices and reads the root
/// structure off their ranks.
pub fn classify(coeffs: &[Rational], set: &FormulaSet) -> Result<Classification> {
    let n = set.n;
    if coeffs.len() != n + 1 {
        return Err(Error::InvalidProfile(format!(
            "expected {} coefficients for degree {n}, got {}",
            n + 1,
            coeffs.len()
        )));
    }
    if coeffs[0].is_zero() {
        return Err(Error::LeadingCoefficientZero);
    }
    let lead = coeffs[0].clone();
    let monic: Vec<Rational> = coeffs.iter().map(|c| c / &lead).collect();
    let (bezout_rank, bezout_nullity) = nullity_at(&set.bezout.matrix, &monic)?;
    let (_, swallowtail_nullity) = nullity_at(&set.swallowtail_monic.matrix, &monic)?;
    Ok(Classification {
        n,
        bezout_rank,
        bezout_nullity,
        swallowtail_nullity,
        distinct_roots_detected: bezout_rank + 1,
        multiplicity_excess: bezout_nullity,
        multi_double_pair: swallowtail_nullity >= 2,
    })
}

/// [`classify`] over many inputs, split across scoped worker threads.
/// Results keep the input order.
pub fn classify_batch(inputs: &[Vec<Rational>], set: &FormulaSet) -> Vec<Result<Classification>> {
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(8);
    let chunk = inputs.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = inputs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|c| classify(c, set)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("classification worker panicked"))
            .collect()
    })
}

/// `s_i = n!/(n-i)! * a_i`, `i = 1..n`, for the monic normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedCoords {
    pub s: Vec<Rational>,
}

fn falling(n: usize, i: usize) -> Rational {
    Rational::from_integer(factorial(n) / factorial(n - i))
}

pub fn to_divided(coeffs: &[Rational]) -> Result<DividedCoords> {
    let lead = coeffs.first().ok_or(Error::ZeroPolynomial)?;
    if lead.is_zero() {
        return Err(Error::LeadingCoefficientZero);
    }
    let n = coeffs.len() - 1;
    Ok(DividedCoords {
        s: (1..=n).map(|i| &coeffs[i] / lead * falling(n, i)).collect(),
    })
}

pub fn from_divided(d: &DividedCoords) -> Vec<Rational> {
    let n = d.s.len();
    std::iter::once(Rational::one())
        .chain(d.s.iter().enumerate().map(|(k, s)| s / falling(n, k + 1)))
        .collect()
}

/// `∫_0^x f''(t) t^(i-1)/(i-1)! dt` for monic `f` (coefficients from the
/// leading term down), as a polynomial in `x`.
pub fn givental_generator(coeffs: &[Rational], i: usize) -> Result<MultiPoly> {
    if i == 0 {
        return Err(Error::InvalidProfile("index must be at least 1".into()));
    }
    let lead = coeffs.first().ok_or(Error::ZeroPolynomial)?;
    if lead.is_zero() {
        return Err(Error::LeadingCoefficientZero);
    }
    let monic: Vec<Rational> = coeffs.iter().map(|c| c / lead).collect();
    let f2 = derivative_coeffs(&derivative_coeffs(&monic));
    let deg2 = f2.len().saturating_sub(1);
    let divided = Rational::from_integer(factorial(i - 1));
    let terms = f2.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        // c t^p with p = deg2 - k integrates against t^(i-1) to c x^(p+i)/(p+i)
        let p = deg2 - k;
        let e = (p + i) as i32;
        let coeff = c / (&divided * int(e as i64));
        (vec![e, 0], coeff)
    });
    Ok(MultiPoly::from_terms(0, 2, terms))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub i: usize,
    pub trials: usize,
    /// Whether a degree-`n` polynomial can arise this way (`n >= i + 4`).
    pub feasible: bool,
    /// Observed swallowtail nullity -> count.
    pub histogram: BTreeMap<usize, usize>,
    pub samples: Vec<ProbeSample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeSample {
    pub base_profile: String,
    pub coeffs: Vec<String>,
    pub swallowtail_nullity: usize,
}

fn distinct_small_rationals<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(k);
    while out.len() < k {
        let r = Rational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=3)));
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Takes the `i`-th derivative of random polynomials of degree `n + i`
/// with two distinct `(i+2)`-fold roots (remaining roots simple) and
/// records the nullity of the minimal swallowtail matrix. Nothing is
/// asserted about the outcome.
pub fn probe_higher_nullity(n: usize, i: usize, trials: usize, seed: u64) -> Result<ProbeReport> {
    let mut report = ProbeReport {
        n,
        i,
        trials,
        feasible: n >= i + 4,
        ..Default::default()
    };
    if trials == 0 || !report.feasible {
        return Ok(report);
    }
    let set = FormulaSet::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let simple = n - i - 4;
    for _ in 0..trials {
        let roots = distinct_small_rationals(&mut rng, 2 + simple);
        let pairs = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), if k < 2 { i + 2 } else { 1 }))
            .collect();
        let base = RootProfile::new(pairs)?;
        let mut coeffs = poly_from_profile(&base);
        for _ in 0..i {
            coeffs = derivative_coeffs(&coeffs);
        }
        let c = classify(&coeffs, &set)?;
        *report.histogram.entry(c.swallowtail_nullity).or_insert(0) += 1;
        let lead = coeffs[0].clone();
        report.samples.push(ProbeSample {
            base_profile: base.to_string(),
            coeffs: coeffs.iter().map(|v| to_short_string(&(v / &lead))).collect(),
            swallowtail_nullity: c.swallowtail_nullity,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn profiles_expand() {
        let p: RootProfile = "1^2,-1^2".parse().unwrap();
        assert_eq!(poly_from_profile(&p), ints(&[1, 0, -2, 0, 1]));
        let p: RootProfile = "0^3,1^1".parse().unwrap();
        assert_eq!(poly_from_profile(&p), ints(&[1, -1, 0, 0, 0]));
        let p: RootProfile = "2,3".parse().unwrap();
        assert_eq!(poly_from_profile(&p), ints(&[1, -5, 6]));
    }

    #[test]
    fn bad_profiles() {
        assert!("1^2,1^1".parse::<RootProfile>().is_err());
        assert!("1^0,2^2".parse::<RootProfile>().is_err());
        assert!("5".parse::<RootProfile>().is_err());
        assert!("a^2".parse::<RootProfile>().is_err());
        let p: RootProfile = "-1/2^2,3".parse().unwrap();
        assert_eq!(p.pairs()[0], (ratio(-1, 2), 2));
        assert_eq!(p.to_string(), "-1/2^2,3^1");
    }

    #[test]
    fn divided_coordinates() {
        let d = to_divided(&ints(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(d.s, ints(&[4, 12, 24, 24]));
        let d = to_divided(&[int(1), ratio(3, 2), ratio(-1, 5)]).unwrap();
        assert_eq!(d.s, vec![int(3), ratio(-2, 5)]);
        assert_eq!(from_divided(&d), vec![int(1), ratio(3, 2), ratio(-1, 5)]);
        assert_eq!(to_divided(&ints(&[0, 1])), Err(Error::LeadingCoefficientZero));
    }

    #[test]
    fn givental_examples() {
        let x = |s: &str| MultiPoly::parse(s, 0, 2).unwrap();
        assert_eq!(givental_generator(&ints(&[1, 0, 0]), 1).unwrap(), x("2*x"));
        assert_eq!(givental_generator(&ints(&[1, 0, 0, 0]), 1).unwrap(), x("3*x^2"));
        assert_eq!(givental_generator(&ints(&[1, 0, 0, 0]), 2).unwrap(), x("2*x^3"));
        assert!(givental_generator(&ints(&[1, 0, 0]), 0).is_err());
    }

    #[test]
    fn classify_rejects_root_at_infinity() {
        let set = FormulaSet::new(3).unwrap();
        assert_eq!(
            classify(&ints(&[0, 1, 1, 1]), &set),
            Err(Error::LeadingCoefficientZero)
        );
        assert!(classify(&ints(&[1, 1]), &set).is_err());
    }

    #[test]
    fn empty_probe() {
        let r = probe_higher_nullity(5, 1, 0, 1).unwrap();
        assert!(r.histogram.is_empty() && r.samples.is_empty());
        let r = probe_higher_nullity(4, 1, 5, 1).unwrap();
        assert!(!r.feasible && r.samples.is_empty());
    }
}

//! Checks that a formula matrix has determinant `c * a0^e * D_n`.

use std::thread;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::rational::ratio;
use crate::exact::{MultiPoly, PolyMatrix, Rational};
use crate::formulas::{discriminant_oracle, DetRelation};

/// Default seed for sampled verification and probes.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Symbolic,
    Sampled { count: usize, seed: u64 },
}

impl VerifyMode {
    pub fn name(&self) -> &'static str {
        match self {
            VerifyMode::Symbolic => "symbolic",
            VerifyMode::Sampled { .. } => "sampled",
        }
    }
}

/// Random point `(a0, .., an)` with small rational coordinates and
/// `a0 != 0`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|i| loop {
            let num = rng.gen_range(-12i64..=12);
            let den = rng.gen_range(1i64..=5);
            if i > 0 || num != 0 {
                break ratio(num, den);
            }
        })
        .collect()
}

/// Splits `det` by `d` exactly and reads off `c * a0^e`.
fn symbolic_relation(det: &MultiPoly, d: &MultiPoly) -> Result<DetRelation> {
    let q = det
        .exact_div(d)
        .map_err(|_| Error::VerificationFailed("determinant is not divisible by D_n".into()))?;
    if q.len() != 1 {
        return Err(Error::VerificationFailed(format!(
            "quotient det / D_n is not a monomial: {q}"
        )));
    }
    let (m, c) = q.terms().next().unwrap();
    let e = m.exponents();
    if e[1..].iter().any(|&v| v != 0) {
        return Err(Error::VerificationFailed(format!(
            "quotient det / D_n involves variables other than a0: {q}"
        )));
    }
    DetRelation::new(c.clone(), e[0] as u32)
}

/// Evaluates `det(matrix)` and `D_n` at `count` seeded random points
/// (skipping points on the discriminant) and finds the smallest `e >= 0`
/// for which `det / (a0^e D_n)` is one constant.
fn sampled_relation(
    matrix: &PolyMatrix,
    d: &MultiPoly,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<DetRelation> {
    if count == 0 {
        return Err(Error::VerificationFailed("at least one sample is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut attempts = 0;
    while points.len() < count {
        attempts += 1;
        if attempts > 100 * count {
            return Err(Error::VerificationFailed("could not find points off D_n".into()));
        }
        let pt = random_point(&mut rng, n);
        let dv = d.evaluate(&pt)?;
        if !dv.is_zero() {
            points.push((pt, dv));
        }
    }

    let workers = thread::available_parallelism().map_or(1, |w| w.get()).min(8);
    let chunk = points.len().div_ceil(workers);
    let dets: Vec<Rational> = thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|(pt, _)| matrix.evaluate(pt).and_then(|q| q.det()))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification worker panicked"))
            .collect::<Result<Vec<Vec<_>>>>()
    })?
    .into_iter()
    .flatten()
    .collect();

    let ratios: Vec<(Rational, Rational)> = points
        .iter()
        .zip(&dets)
        .map(|((pt, dv), det)| (det / dv, pt[0].clone()))
        .collect();
    if ratios.iter().any(|(r, _)| r.is_zero()) {
        return Err(Error::VerificationFailed(
            "determinant vanishes off the discriminant".into(),
        ));
    }
    let max_e = 4 * n as u32 + 4;
    for e in 0..=max_e {
        let scaled = |(r, a0): &(Rational, Rational)| r / num_traits::pow(a0.clone(), e as usize);
        let c = scaled(&ratios[0]);
        if ratios.iter().all(|p| scaled(p) == c) {
            return DetRelation::new(c, e);
        }
    }
    Err(Error::VerificationFailed(
        "det / D_n is not c * a0^e at the sampled points".into(),
    ))
}

/// Determines `(c, e)` with `det(matrix) = c * a0^e * D_n`.
pub fn verify_matrix_det(matrix: &PolyMatrix, n: usize, mode: VerifyMode) -> Result<DetRelation> {
    if !matrix.is_square() {
        return Err(Error::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let d = discriminant_oracle(n)?;
    match mode {
        VerifyMode::Symbolic => symbolic_relation(&matrix.det_fraction_free()?, &d),
        VerifyMode::Sampled { count, seed } => sampled_relation(matrix, &d, n, count, seed),
    }
}

/// Same as [`verify_matrix_det`] but for a matrix specialized to `a0 = 1`:
/// only `c` is meaningful and is checked against `D_n(1, a1, ..)`.
pub fn verify_monic_det(matrix: &PolyMatrix, n: usize, mode: VerifyMode) -> Result<Rational> {
    let mut one = std::collections::BTreeMap::new();
    one.insert(crate::exact::Var::A(0), Rational::one());
    let d = discriminant_oracle(n)?.specialize(&one)?;
    let rel = match mode {
        VerifyMode::Symbolic => symbolic_relation(&matrix.det_fraction_free()?, &d)?,
        VerifyMode::Sampled { count, seed } => {
            // evaluate at points with a0 = 1
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut first: Option<Rational> = None;
            let mut seen = 0;
            while seen < count.max(1) {
                let mut pt = random_point(&mut rng, n);
                pt[0] = Rational::one();
                let dv = d.evaluate(&pt)?;
                if dv.is_zero() {
                    continue;
                }
                let r = matrix.evaluate(&pt)?.det()? / dv;
                match &first {
                    None => first = Some(r),
                    Some(c) if *c != r => {
                        return Err(Error::VerificationFailed("monic ratio is not constant".into()))
                    }
                    _ => {}
                }
                seen += 1;
            }
            DetRelation::new(first.unwrap(), 0)?
        }
    };
    Ok(rel.c)
}

//! The universal binary form, the Sylvester and Bézout matrices, and the
//! resultant-based discriminant used as the independent reference.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::int;
use crate::exact::{tri_degree_check, Label, LaurentMono, MultiPoly, PolyMatrix, Rational, TriDegree, Var};

/// `F = sum a_i x^(n-i) y^i` together with its partials up to order two,
/// all in the ring `Q[a0..an, x, y]`.
#[derive(Clone, Debug)]
pub struct UniversalForm {
    pub n: usize,
    pub f: MultiPoly,
    pub fx: MultiPoly,
    pub fy: MultiPoly,
    pub fxx: MultiPoly,
    pub fxy: MultiPoly,
    pub fyy: MultiPoly,
}

pub fn universal_form(n: usize) -> Result<UniversalForm> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    let a = n + 1;
    let f = MultiPoly::from_terms(
        a,
        2,
        (0..=n).map(|i| {
            let mut e = vec![0; a + 2];
            e[i] = 1;
            e[a] = (n - i) as i32;
            e[a + 1] = i as i32;
            (e, Rational::one())
        }),
    );
    let fx = f.differentiate(Var::X)?;
    let fy = f.differentiate(Var::Y)?;
    let fxx = fx.differentiate(Var::X)?;
    let fxy = fx.differentiate(Var::Y)?;
    let fyy = fy.differentiate(Var::Y)?;
    Ok(UniversalForm {
        n,
        f,
        fx,
        fy,
        fxx,
        fxy,
        fyy,
    })
}

impl UniversalForm {
    pub fn a_vars(&self) -> usize {
        self.n + 1
    }

    pub fn x(&self) -> MultiPoly {
        MultiPoly::var(self.a_vars(), 2, Var::X)
    }

    pub fn y(&self) -> MultiPoly {
        MultiPoly::var(self.a_vars(), 2, Var::Y)
    }
}

/// Coefficients of `p(x, 1)` from the highest power of `x` down.
fn univariate_coeffs(p: &MultiPoly) -> Result<Vec<MultiPoly>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_laurent() {
        return Err(Error::Construction("Sylvester input must be a polynomial".into()));
    }
    let by_x = p.xy_coefficients().into_iter().fold(
        std::collections::BTreeMap::<i32, MultiPoly>::new(),
        |mut acc, ((ex, _), c)| {
            let slot = acc.entry(ex).or_insert_with(|| MultiPoly::zero(p.a_vars(), 0));
            *slot = &*slot + &c;
            acc
        },
    );
    let deg = *by_x.keys().next_back().unwrap();
    Ok((0..=deg)
        .rev()
        .map(|e| by_x.get(&e).cloned().unwrap_or_else(|| MultiPoly::zero(p.a_vars(), 0)))
        .collect())
}

/// Sylvester matrix of `p` and `q` viewed as polynomials in `x` (with
/// `y = 1`): `deg q` shifted rows of `p` followed by `deg p` shifted rows of
/// `q`. Columns are labeled by descending powers of `x`.
pub fn sylvester_matrix(p: &MultiPoly, q: &MultiPoly) -> Result<PolyMatrix> {
    if p.shape() != q.shape() {
        return Err(Error::VarCountMismatch {
            left: p.shape(),
            right: q.shape(),
        });
    }
    if p.aux_vars() != 2 {
        return Err(Error::Construction("Sylvester input must live in Q[a, x, y]".into()));
    }
    let pc = univariate_coeffs(p)?;
    let qc = univariate_coeffs(q)?;
    let (dp, dq) = (pc.len() - 1, qc.len() - 1);
    if dp < 1 || dq < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: dp.min(dq) });
    }
    let size = dp + dq;
    let a = p.a_vars();
    let mut m = PolyMatrix::zeros(size, size, a);
    let mut row_labels = Vec::with_capacity(size);
    for k in 0..dq {
        for (j, c) in pc.iter().enumerate() {
            m.set(k, k + j, c.clone());
        }
        row_labels.push(Label::Block("p".into(), LaurentMono::new((dq - 1 - k) as i32, 0)));
    }
    for k in 0..dp {
        for (j, c) in qc.iter().enumerate() {
            m.set(dq + k, k + j, c.clone());
        }
        row_labels.push(Label::Block("q".into(), LaurentMono::new((dp - 1 - k) as i32, 0)));
    }
    let col_labels = (0..size)
        .map(|j| Label::Mono(LaurentMono::new((size - 1 - j) as i32, 0)))
        .collect();
    m.with_labels(row_labels, col_labels)
}

fn oracle_cache() -> &'static Mutex<HashMap<usize, MultiPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, MultiPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `D_n = (-1)^(n(n-1)/2) * Res(f, f_x) / a0`, with the resultant taken as
/// the determinant of [`sylvester_matrix`] by minor expansion. Results are
/// memoized per `n`.
pub fn discriminant_oracle(n: usize) -> Result<MultiPoly> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    if let Some(d) = oracle_cache().lock().unwrap().get(&n) {
        return Ok(d.clone());
    }
    let uf = universal_form(n)?;
    let res = sylvester_matrix(&uf.f, &uf.fx)?.det_minor_expansion()?;
    let a0 = MultiPoly::var(n + 1, 0, Var::A(0));
    let mut d = res.exact_div(&a0)?;
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -&d;
    }
    if !tri_degree_check(&d, TriDegree::discriminant(n)) {
        return Err(Error::Construction(format!(
            "discriminant of degree {n} is not tri-homogeneous"
        )));
    }
    oracle_cache().lock().unwrap().insert(n, d.clone());
    Ok(d)
}

/// The coefficients `b_ij` of
/// `(f_x(x0,y0) f_y(x1,y1) - f_y(x0,y0) f_x(x1,y1)) / (x0 y1 - x1 y0)`
/// on `x0^i y0^(n-2-i) x1^j y1^(n-2-j)`, obtained by exact division.
pub fn bezout_coefficients(n: usize) -> Result<Vec<Vec<MultiPoly>>> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    let a = n + 1;
    // partial derivatives evaluated at the point (x_slot, y_slot)
    let partial = |wrt_x: bool, xs: usize, ys: usize| {
        MultiPoly::from_terms(
            a,
            4,
            (0..=n).filter_map(|i| {
                let (px, py) = ((n - i) as i32, i as i32);
                let (c, px, py) = if wrt_x { (px, px - 1, py) } else { (py, px, py - 1) };
                if c == 0 {
                    return None;
                }
                let mut e = vec![0; a + 4];
                e[i] = 1;
                e[a + xs] = px;
                e[a + ys] = py;
                Some((e, int(c as i64)))
            }),
        )
    };
    let (fx0, fy0) = (partial(true, 0, 1), partial(false, 0, 1));
    let (fx1, fy1) = (partial(true, 2, 3), partial(false, 2, 3));
    let num = &(&fx0 * &fy1) - &(&fy0 * &fx1);
    let den = MultiPoly::parse("x0*y1 - x1*y0", a, 4)?;
    let quotient = num.exact_div(&den)?;

    let k = n - 1;
    let mut b = vec![vec![MultiPoly::zero(a, 0); k]; k];
    for (m, c) in quotient.terms() {
        let e = m.exponents();
        let (i, j) = (e[a] as usize, e[a + 2] as usize);
        let mut ae = e[..a].to_vec();
        ae.truncate(a);
        let t = MultiPoly::from_terms(a, 0, [(ae, c.clone())]);
        b[i][j] = &b[i][j] + &t;
    }
    Ok(b)
}

/// Row labels of the Bézout matrix: `y^(n-2), x y^(n-3), ..., x^(n-2)`.
pub fn bezout_row_labels(n: usize) -> Vec<Label> {
    (0..=n - 2)
        .map(|i| Label::Mono(LaurentMono::new(i as i32, (n - 2 - i) as i32)))
        .collect()
}

/// Column labels of the Bézout matrix: the `H^1(O(-n))` basis
/// `x^-(n-1) y^-1, ..., x^-1 y^-(n-1)`.
pub fn bezout_col_labels(n: usize) -> Vec<Label> {
    (1..n)
        .rev()
        .map(|p| Label::Mono(LaurentMono::new(-(p as i32), p as i32 - n as i32)))
        .collect()
}

/// The Bézout matrix as a map `H^1(O(-n)) -> H^0(O(n-2))`.
///
/// The entry in row `x^i y^(n-2-i)` and column `x^-p y^-(n-p)` is
/// `-b_(i, p-1)`. Rows start at `y^(n-2)`, so the first row is the one the
/// open-swallowtail presentation uses. Since `b` is symmetric, the result
/// is persymmetric (symmetric about the anti-diagonal).
///
/// The sign makes the quartic come out as
/// `[[a1a3 - 16a0a4, ..], .., [3a1^2 - 8a0a2, ..]]`, the convention of the
/// standard worked example; for `n = 2` it gives `a1^2 - 4a0a2 = D_2`.
pub fn bezout_matrix(n: usize) -> Result<PolyMatrix> {
    let b = bezout_coefficients(n)?;
    let k = n - 1;
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for c in 0..k {
            let p = k - c; // x-pole order of column c
            entries.push(-&b[i][p - 1]);
        }
    }
    PolyMatrix::new(k, k, n + 1, entries, bezout_row_labels(n), bezout_col_labels(n))
}

/// A single row of [`bezout_matrix`], selected by its monomial label.
pub fn bezout_row(n: usize, label: LaurentMono) -> Result<PolyMatrix> {
    let m = bezout_matrix(n)?;
    let r = m
        .row_index(&Label::Mono(label))
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    let cols: Vec<usize> = (0..m.cols()).collect();
    Ok(m.submatrix(&[r], &cols))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaKind {
    Sylvester,
    Bezout,
    SwallowtailFull,
    SwallowtailMinimal,
    SwallowtailMonic,
}

impl FormulaKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaKind::Sylvester => "sylvester",
            FormulaKind::Bezout => "bezout",
            FormulaKind::SwallowtailFull => "swallowtail-full",
            FormulaKind::SwallowtailMinimal => "swallowtail-minimal",
            FormulaKind::SwallowtailMonic => "swallowtail-monic",
        }
    }

    pub fn min_degree(&self) -> usize {
        match self {
            FormulaKind::Sylvester | FormulaKind::Bezout => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for FormulaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sylvester" => FormulaKind::Sylvester,
            "bezout" => FormulaKind::Bezout,
            "swallowtail" | "swallowtail-full" => FormulaKind::SwallowtailFull,
            "swallowtail-minimal" => FormulaKind::SwallowtailMinimal,
            "swallowtail-monic" => FormulaKind::SwallowtailMonic,
            _ => return Err(Error::Parse(format!("unknown formula kind {s:?}"))),
        })
    }
}

/// `det = c * a0^e * D_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetRelation {
    pub c: Rational,
    pub a0_exponent: u32,
}

impl DetRelation {
    pub fn new(c: Rational, a0_exponent: u32) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::VerificationFailed("zero proportionality constant".into()));
        }
        Ok(DetRelation { c, a0_exponent })
    }
}

#[derive(Clone, Debug)]
pub struct FormulaBundle {
    pub kind: FormulaKind,
    pub n: usize,
    pub matrix: PolyMatrix,
    pub det_relation: Option<DetRelation>,
}

impl FormulaBundle {
    pub fn build(kind: FormulaKind, n: usize) -> Result<Self> {
        if n < kind.min_degree() {
            return Err(Error::DegreeTooSmall {
                min: kind.min_degree(),
                got: n,
            });
        }
        let matrix = match kind {
            FormulaKind::Sylvester => {
                let uf = universal_form(n)?;
                sylvester_matrix(&uf.f, &uf.fx)?
            }
            FormulaKind::Bezout => bezout_matrix(n)?,
            FormulaKind::SwallowtailFull => crate::swallowtail::assemble(n)?,
            FormulaKind::SwallowtailMinimal => crate::swallowtail::presentation(n)?.reduced,
            FormulaKind::SwallowtailMonic => crate::swallowtail::presentation(n)?.monic_minimal,
        };
        Ok(FormulaBundle {
            kind,
            n,
            matrix,
            det_relation: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn a(n: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(s, n + 1, 0).unwrap()
    }

    #[test]
    fn universal_form_partials() {
        let uf = universal_form(4).unwrap();
        assert_eq!(
            uf.fxx,
            MultiPoly::parse("12*a0*x^2 + 6*a1*x*y + 2*a2*y^2", 5, 2).unwrap()
        );
        let q = universal_form(2).unwrap();
        assert_eq!(q.fx, MultiPoly::parse("2*a0*x + a1*y", 3, 2).unwrap());
        assert!(matches!(universal_form(1), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn euler_identities() {
        for n in 2..=7 {
            let uf = universal_form(n).unwrap();
            let (x, y) = (uf.x(), uf.y());
            let nn = Rational::from_integer((n as i64).into());
            let e0 = &(&(&x * &uf.fx) + &(&y * &uf.fy)) - &uf.f.scale(&nn);
            assert!(e0.is_zero(), "n={n}");
            let m = Rational::from_integer((n as i64 - 1).into());
            let e1 = &(&(&x * &uf.fxx) + &(&y * &uf.fxy)) - &uf.fx.scale(&m);
            let e2 = &(&(&x * &uf.fxy) + &(&y * &uf.fyy)) - &uf.fy.scale(&m);
            assert!(e1.is_zero() && e2.is_zero(), "n={n}");
        }
    }

    #[test]
    fn sylvester_quadratic_layout() {
        let uf = universal_form(2).unwrap();
        let s = sylvester_matrix(&uf.f, &uf.fx).unwrap();
        let expect = [["a0", "a1", "a2"], ["2*a0", "a1", "0"], ["0", "2*a0", "a1"]];
        for (r, row) in expect.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                assert_eq!(s.get(r, c), &a(2, e));
            }
        }
    }

    #[test]
    fn sylvester_linear_and_degenerate() {
        let p = MultiPoly::parse("x + y", 1, 2).unwrap();
        let q = MultiPoly::parse("x - y", 1, 2).unwrap();
        let s = sylvester_matrix(&p, &q).unwrap();
        assert_eq!(s.det_fraction_free().unwrap().as_constant(), Some(int(-2)));
        assert!(sylvester_matrix(&p, &p).unwrap().det_fraction_free().unwrap().is_zero());
        assert_eq!(
            sylvester_matrix(&MultiPoly::zero(1, 2), &q),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn oracle_low_degrees() {
        assert_eq!(discriminant_oracle(2).unwrap(), a(2, "a1^2 - 4*a0*a2"));
        let d3 = discriminant_oracle(3).unwrap();
        assert!(tri_degree_check(&d3, TriDegree::new(4, 6, 6)));
        let triple: Vec<Rational> = [1, -3, 3, -1].iter().map(|&v| int(v)).collect();
        assert!(d3.evaluate(&triple).unwrap().is_zero());
        let d4 = discriminant_oracle(4).unwrap();
        let two_doubles: Vec<Rational> = [1, 0, -2, 0, 1].iter().map(|&v| int(v)).collect();
        assert!(d4.evaluate(&two_doubles).unwrap().is_zero());
        let sample: Vec<Rational> = [1, 0, -2].iter().map(|&v| int(v)).collect();
        assert_eq!(discriminant_oracle(2).unwrap().evaluate(&sample).unwrap(), int(8));
    }

    #[test]
    fn bezout_quadratic() {
        assert_eq!(bezout_coefficients(2).unwrap()[0][0], a(2, "4*a0*a2 - a1^2"));
        let b = bezout_matrix(2).unwrap();
        assert_eq!((b.rows(), b.cols()), (1, 1));
        assert_eq!(b.get(0, 0), &a(2, "a1^2 - 4*a0*a2"));
        let r = bezout_row(2, LaurentMono::new(0, 0)).unwrap();
        assert_eq!(r.get(0, 0), b.get(0, 0));
        assert!(matches!(
            bezout_row(2, LaurentMono::new(0, 3)),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn bezout_coefficients_symmetric() {
        for n in 2..=7 {
            let b = bezout_coefficients(n).unwrap();
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    assert_eq!(b[i][j], b[j][i], "n={n} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn kind_names_roundtrip() {
        for k in [
            FormulaKind::Sylvester,
            FormulaKind::Bezout,
            FormulaKind::SwallowtailFull,
            FormulaKind::SwallowtailMinimal,
            FormulaKind::SwallowtailMonic,
        ] {
            assert_eq!(k.as_str().parse::<FormulaKind>().unwrap(), k);
        }
        assert!("cayley".parse::<FormulaKind>().is_err());
    }
}

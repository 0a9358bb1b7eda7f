//! Čech cohomology of line bundles on the projective line, computed with
//! Laurent monomials on `U_xy`, and the multiply-then-truncate maps built
//! from it: the generalized Sylvester matrix `∂₂`, the lifting `D₁` of the
//! universal derivation, and the Bézout map recovered from the double
//! complex.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::rational::int;
use crate::exact::{Label, LaurentMono, MultiPoly, PolyMatrix, Rational, Var};
use crate::formulas::{bezout_matrix, universal_form, UniversalForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohKind {
    H0,
    H1,
}

/// Ordered monomial basis of `H^0(O(d))` or `H^1(O(d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohBasis {
    pub kind: CohKind,
    pub twist: i32,
    pub elements: Vec<LaurentMono>,
}

impl CohBasis {
    /// `x^d, x^(d-1) y, ..., y^d`; empty for `d < 0`.
    pub fn h0(d: i32) -> Self {
        let elements = (0..=d).rev().map(|i| LaurentMono::new(i, d - i)).collect();
        CohBasis {
            kind: CohKind::H0,
            twist: d,
            elements,
        }
    }

    /// `x^-(m-1) y^-1, ..., x^-1 y^-(m-1)` with `m = -d`; empty for `d > -2`.
    pub fn h1(d: i32) -> Self {
        let m = -d;
        let elements = (1..m).rev().map(|a| LaurentMono::new(-a, a - m)).collect();
        CohBasis {
            kind: CohKind::H1,
            twist: d,
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.elements.iter().copied().map(Label::Mono).collect()
    }

    fn block_labels(&self, block: &str) -> Vec<Label> {
        self.elements
            .iter()
            .map(|&m| Label::Block(block.to_string(), m))
            .collect()
    }
}

/// A multiplication map between cohomology bases with its matrix.
#[derive(Clone, Debug)]
pub struct CechMap {
    pub src: CohBasis,
    pub tgt: Vec<CohBasis>,
    pub matrix: PolyMatrix,
}

/// Keeps the terms with both exponents of `x` and `y` at most `-1`; these
/// represent `H^1` classes, everything else is a coboundary.
pub fn h1_truncate(p: &MultiPoly) -> MultiPoly {
    let a = p.a_vars();
    p.filter_terms(|e| e[a] <= -1 && e[a + 1] <= -1)
}

fn mono(a_vars: usize, m: LaurentMono) -> Vec<i32> {
    let mut e = vec![0; a_vars + 2];
    e[a_vars] = m.x;
    e[a_vars + 1] = m.y;
    e
}

fn xy_degree(g: &MultiPoly) -> Option<i32> {
    let a = g.a_vars();
    let mut degs = g.terms().map(|(m, _)| m.exponents()[a] + m.exponents()[a + 1]);
    let first = degs.next()?;
    degs.all(|d| d == first).then_some(first)
}

/// Coefficients of `p` on the monomials of `tgt`, as `a`-polynomials.
fn read_coefficients(p: &MultiPoly, tgt: &CohBasis) -> Vec<MultiPoly> {
    let coeffs = p.xy_coefficients();
    tgt.elements
        .iter()
        .map(|m| {
            coeffs
                .get(&(m.x, m.y))
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(p.a_vars(), 0))
        })
        .collect()
}

/// Matrix of `v -> g v` from `src` to `tgt`, truncated to `H^1`
/// representatives when `tgt` is an `H^1` basis. Entry `(r, c)` is the
/// coefficient of `tgt[r]` in `g * src[c]`.
pub fn mult_map(g: &MultiPoly, src: &CohBasis, tgt: &CohBasis) -> Result<PolyMatrix> {
    if g.aux_vars() != 2 {
        return Err(Error::Construction("multiplier must live in Q[a, x, y]".into()));
    }
    let want = tgt.twist - src.twist;
    if let Some(d) = xy_degree(g) {
        if d != want {
            return Err(Error::DegreeMismatch {
                expected: want,
                found: d,
            });
        }
    } else if !g.is_zero() {
        return Err(Error::Construction("multiplier is not homogeneous in x, y".into()));
    }
    let a = g.a_vars();
    let cols: Vec<Vec<MultiPoly>> = src
        .elements
        .iter()
        .map(|&v| {
            let prod = g.mul_monomial(&mono(a, v));
            let prod = match tgt.kind {
                CohKind::H1 => h1_truncate(&prod),
                CohKind::H0 => prod,
            };
            read_coefficients(&prod, tgt)
        })
        .collect();
    let mut entries = Vec::with_capacity(tgt.len() * src.len());
    for r in 0..tgt.len() {
        for col in &cols {
            entries.push(col[r].clone());
        }
    }
    PolyMatrix::new(tgt.len(), src.len(), a, entries, tgt.labels(), src.labels())
}

/// `∂₂ : H^1(O(3-2n)) -> H^1(O(1-n))^3`, `g -> (F_xx g, F_xy g, F_yy g)`.
pub fn partial2_map(n: usize) -> Result<CechMap> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { min: 3, got: n });
    }
    let uf = universal_form(n)?;
    let src = CohBasis::h1(3 - 2 * n as i32);
    let tgt = CohBasis::h1(1 - n as i32);
    let blocks = [("Fxx", &uf.fxx), ("Fxy", &uf.fxy), ("Fyy", &uf.fyy)]
        .iter()
        .map(|(name, g)| {
            let m = mult_map(g, &src, &tgt)?;
            m.with_labels(tgt.block_labels(name), src.labels())
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = PolyMatrix::from_blocks(&[vec![&blocks[0]], vec![&blocks[1]], vec![&blocks[2]]])?;
    Ok(CechMap {
        src,
        tgt: vec![tgt.clone(), tgt.clone(), tgt],
        matrix,
    })
}

/// The generalized Sylvester matrix `∂₂`, of size `3(n-2) x (2n-4)`.
pub fn partial2_matrix(n: usize) -> Result<PolyMatrix> {
    Ok(partial2_map(n)?.matrix)
}

/// The lifting of the universal derivation applied to one section `g` of
/// `O(-n)` on `U_xy`, before truncation:
///
/// ```text
/// h1 = -y^2 g_x / (n-1)^2
/// h2 =  y (g + x g_x / (n-1)) / (n-1)
/// h3 = -x (2g + x g_x / (n-1)) / (n-1)
/// ```
pub fn d1_lift(uf: &UniversalForm, g: &MultiPoly) -> Result<[MultiPoly; 3]> {
    let m = Rational::from_integer((uf.n as i64 - 1).into());
    let inv = m.recip();
    let (x, y) = (uf.x(), uf.y());
    let gx = g.differentiate(Var::X)?;
    let x_gx = (&x * &gx).scale(&inv);
    let h1 = (&(&y * &y) * &gx).scale(&-(&inv * &inv));
    let h2 = (&y * &(g + &x_gx)).scale(&inv);
    let h3 = (&x * &(&g.scale(&int(2)) + &x_gx)).scale(&-inv);
    Ok([h1, h2, h3])
}

/// `D₁ : H^1(O(-n)) -> H^1(O(1-n))^3` as a `3(n-2) x (n-1)` constant
/// matrix, blocks in the order `F_xx, F_xy, F_yy`.
pub fn d1_matrix(n: usize) -> Result<PolyMatrix> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { min: 3, got: n });
    }
    let uf = universal_form(n)?;
    let a = uf.a_vars();
    let src = CohBasis::h1(-(n as i32));
    let tgt = CohBasis::h1(1 - n as i32);
    let k = tgt.len();
    let mut m = PolyMatrix::zeros(3 * k, src.len(), a);
    for (c, &g) in src.elements.iter().enumerate() {
        let g = MultiPoly::from_terms(a, 2, [(mono(a, g), Rational::one())]);
        for (b, h) in d1_lift(&uf, &g)?.iter().enumerate() {
            for (r, v) in read_coefficients(&h1_truncate(h), &tgt).into_iter().enumerate() {
                m.set(b * k + r, c, v);
            }
        }
    }
    let row_labels = ["Fxx", "Fxy", "Fyy"]
        .iter()
        .flat_map(|b| tgt.block_labels(b))
        .collect();
    m.with_labels(row_labels, src.labels())
}

/// Splits a section of `O(-1)` on `U_xy` into its `U_x` part (terms with
/// `y`-exponent >= 0) and `U_y` part (terms with `x`-exponent >= 0). This
/// inverts the Čech differential, which is an isomorphism because `O(-1)`
/// has no cohomology.
pub fn split_degree_minus_one(p: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
    let a = p.a_vars();
    for (m, _) in p.terms() {
        let e = m.exponents();
        if e[a] + e[a + 1] != -1 {
            return Err(Error::DegreeMismatch {
                expected: -1,
                found: e[a] + e[a + 1],
            });
        }
        if e[a] <= -1 && e[a + 1] <= -1 {
            return Err(Error::Construction("interior term survived in O(-1)".into()));
        }
    }
    Ok((
        p.filter_terms(|e| e[a + 1] >= 0),
        p.filter_terms(|e| e[a] >= 0),
    ))
}

/// The Bézout map `H^1(O(-n)) -> H^0(O(n-2))` computed through the double
/// complex of the Koszul resolution of `(F_x, F_y)`: multiply by
/// `(F_y, -F_x)`, split across `U_x` and `U_y`, then apply `(F_x, F_y)`
/// and read the `U_x` component. Rows follow `CohBasis::h0(n-2)`, columns
/// `CohBasis::h1(-n)`.
pub fn a_via_cech(n: usize) -> Result<PolyMatrix> {
    let uf = universal_form(n)?;
    let a = uf.a_vars();
    let src = CohBasis::h1(-(n as i32));
    let tgt = CohBasis::h0(n as i32 - 2);
    let mut m = PolyMatrix::zeros(tgt.len(), src.len(), a);
    for (c, &g) in src.elements.iter().enumerate() {
        let g = MultiPoly::from_terms(a, 2, [(mono(a, g), Rational::one())]);
        let g1 = &uf.fy * &g;
        let g2 = -&(&uf.fx * &g);
        let (g1x, g1y) = split_degree_minus_one(&g1)?;
        let (g2x, g2y) = split_degree_minus_one(&g2)?;
        let on_x = &(&g1x * &uf.fx) + &(&g2x * &uf.fy);
        let on_y = &(&g1y * &uf.fx) + &(&g2y * &uf.fy);
        if !(&on_x + &on_y).is_zero() {
            return Err(Error::Construction("Čech images do not glue".into()));
        }
        if on_x.is_laurent() {
            return Err(Error::Construction("image is not a global section".into()));
        }
        for (r, v) in read_coefficients(&on_x, &tgt).into_iter().enumerate() {
            m.set(r, c, v);
        }
    }
    m.with_labels(tgt.labels(), src.labels())
}

/// How one matrix maps onto another: `a[row_perm[i]][col_perm[j]] =
/// sign * b[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub sign: i32,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

/// Matches `a` to `b` by label, then fixes the sign from the first nonzero
/// entry. `None` if labels differ as sets or entries disagree.
pub fn normalize_against(a: &PolyMatrix, b: &PolyMatrix) -> Option<Normalization> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let find = |labels: &[Label], l: &Label| labels.iter().position(|x| x == l);
    let row_perm: Vec<usize> = b
        .row_labels()
        .iter()
        .map(|l| find(a.row_labels(), l))
        .collect::<Option<_>>()?;
    let col_perm: Vec<usize> = b
        .col_labels()
        .iter()
        .map(|l| find(a.col_labels(), l))
        .collect::<Option<_>>()?;
    let mut sign = 0;
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let (x, y) = (a.get(row_perm[i], col_perm[j]), b.get(i, j));
            if sign == 0 && !y.is_zero() {
                sign = if x == y {
                    1
                } else if *x == -y {
                    -1
                } else {
                    return None;
                };
            }
        }
    }
    let sign = if sign == 0 { 1 } else { sign };
    let s = int(sign as i64);
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            if *a.get(row_perm[i], col_perm[j]) != b.get(i, j).scale(&s) {
                return None;
            }
        }
    }
    Some(Normalization {
        sign,
        row_perm,
        col_perm,
    })
}

/// Compares [`a_via_cech`] with [`bezout_matrix`].
pub fn cech_bezout_normalization(n: usize) -> Result<Normalization> {
    let via = a_via_cech(n)?;
    let direct = bezout_matrix(n)?;
    normalize_against(&via, &direct).ok_or_else(|| {
        Error::VerificationFailed(format!(
            "Čech route and Bézout matrix disagree for n = {n}"
        ))
    })
}

/// Applies the second differential of the Koszul complex of
/// `(F_xx, F_xy, F_yy)`,
///
/// ```text
/// [   0    F_yy  -F_xy ]
/// [ -F_yy   0     F_xx ]
/// [  F_xy -F_xx    0   ]
/// ```
///
/// after `g -> (F_xx g, F_xy g, F_yy g)`, on each `H^1(O(3-2n))` basis
/// section. Every returned component is zero when the complex is exact in
/// that spot.
pub fn koszul_composition(n: usize) -> Result<Vec<[MultiPoly; 3]>> {
    let uf = universal_form(n)?;
    let a = uf.a_vars();
    let zero = MultiPoly::zero(a, 2);
    let k2 = [
        [zero.clone(), uf.fyy.clone(), -&uf.fxy],
        [-&uf.fyy, zero.clone(), uf.fxx.clone()],
        [uf.fxy.clone(), -&uf.fxx, zero],
    ];
    CohBasis::h1(3 - 2 * n as i32)
        .elements
        .iter()
        .map(|&g| {
            let g = MultiPoly::from_terms(a, 2, [(mono(a, g), Rational::one())]);
            let v = [&uf.fxx * &g, &uf.fxy * &g, &uf.fyy * &g];
            let row = |i: usize| -> MultiPoly {
                (0..3).fold(MultiPoly::zero(a, 2), |acc, j| &acc + &(&k2[i][j] * &v[j]))
            };
            Ok([row(0), row(1), row(2)])
        })
        .collect()
}

/// The `U_y`-trivialized derivative `h -> h_x` on `H^0(O(n-2))`; its kernel
/// is spanned by `y^(n-2)`.
pub fn d0_kernel_label(n: usize) -> LaurentMono {
    LaurentMono::new(0, n as i32 - 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(n: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(s, n + 1, 0).unwrap()
    }

    fn lp(n: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(s, n + 1, 2).unwrap()
    }

    #[test]
    fn basis_cardinalities() {
        for d in -12..=12 {
            assert_eq!(CohBasis::h0(d).len() as i32, (d + 1).max(0));
            assert_eq!(CohBasis::h1(d).len() as i32, (-d - 1).max(0));
        }
        assert_eq!(
            CohBasis::h1(-4).elements,
            vec![
                LaurentMono::new(-3, -1),
                LaurentMono::new(-2, -2),
                LaurentMono::new(-1, -3)
            ]
        );
        assert_eq!(CohBasis::h0(2).elements[0], LaurentMono::new(2, 0));
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(
            h1_truncate(&lp(4, "2/9*x^-3 + 1/9*x^-2*y^-1")),
            lp(4, "1/9*x^-2*y^-1")
        );
        assert_eq!(h1_truncate(&lp(4, "x^-1*y^-1")), lp(4, "x^-1*y^-1"));
        assert!(h1_truncate(&lp(4, "x^2*y^3")).is_zero());
    }

    #[test]
    fn mult_map_blocks() {
        let uf = universal_form(4).unwrap();
        let (src, tgt) = (CohBasis::h1(-5), CohBasis::h1(-3));
        let m = mult_map(&uf.fxx, &src, &tgt).unwrap();
        let want = [["12*a0", "6*a1", "2*a2", "0"], ["0", "12*a0", "6*a1", "2*a2"]];
        for (r, row) in want.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                assert_eq!(m.get(r, c), &ap(4, e));
            }
        }
        let m = mult_map(&uf.fyy, &src, &tgt).unwrap();
        let want = [["2*a2", "6*a3", "12*a4", "0"], ["0", "2*a2", "6*a3", "12*a4"]];
        for (r, row) in want.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                assert_eq!(m.get(r, c), &ap(4, e));
            }
        }
        let id = mult_map(&MultiPoly::one(5, 2), &tgt, &tgt).unwrap();
        assert_eq!(id, PolyMatrix::identity(2, 5).with_labels(tgt.labels(), tgt.labels()).unwrap());
        assert!(matches!(
            mult_map(&uf.fxx, &tgt, &tgt),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn partial2_cubic() {
        let m = partial2_matrix(3).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 2));
        // F_xx = 6 a0 x + 2 a1 y, F_xy = 2 a1 x + 2 a2 y, F_yy = 2 a2 x + 6 a3 y
        let want = [["6*a0", "2*a1"], ["2*a1", "2*a2"], ["2*a2", "6*a3"]];
        for (r, row) in want.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                assert_eq!(m.get(r, c), &ap(3, e));
            }
        }
        assert!(partial2_matrix(2).is_err());
    }

    #[test]
    fn d1_lift_of_first_quartic_basis_element() {
        let uf = universal_form(4).unwrap();
        let g = lp(4, "x^-3*y^-1");
        let [h1, h2, h3] = d1_lift(&uf, &g).unwrap();
        // positive sign; the term truncates to zero in H^1
        assert_eq!(h1, lp(4, "1/3*x^-4*y"));
        assert!(h2.is_zero());
        assert_eq!(h3, lp(4, "-1/3*x^-2*y^-1"));
        let g = lp(4, "x^-2*y^-2");
        let [h1, h2, h3] = d1_lift(&uf, &g).unwrap();
        assert_eq!(h1, lp(4, "2/9*x^-3"));
        assert_eq!(h2, lp(4, "1/9*x^-2*y^-1"));
        assert_eq!(h3, lp(4, "-4/9*x^-1*y^-2"));
        let g = lp(4, "x^-1*y^-3");
        let [h1, h2, h3] = d1_lift(&uf, &g).unwrap();
        assert_eq!(h1, lp(4, "1/9*x^-2*y^-1"));
        assert_eq!(h2, lp(4, "2/9*x^-1*y^-2"));
        assert_eq!(h3, lp(4, "-5/9*y^-3"));
    }

    #[test]
    fn d1_is_constant() {
        for n in 3..=7 {
            let m = d1_matrix(n).unwrap();
            assert_eq!((m.rows(), m.cols()), (3 * (n - 2), n - 1));
            assert!(m.entries().iter().all(|e| e.as_constant().is_some()));
        }
    }

    #[test]
    fn split_rejects_interior_terms() {
        assert!(split_degree_minus_one(&lp(2, "x^-1")).is_ok());
        assert!(split_degree_minus_one(&lp(2, "x^-2*y")).is_ok());
        assert!(split_degree_minus_one(&lp(2, "x^-1*y^-1")).is_err());
    }

    #[test]
    fn quadratic_bezout_through_cech() {
        let m = a_via_cech(2).unwrap();
        assert_eq!(m.get(0, 0), &ap(2, "4*a0*a2 - a1^2"));
    }

    #[test]
    fn truncation_commutes_with_polynomial_multiplication() {
        for n in 3..=6 {
            let uf = universal_form(n).unwrap();
            for g in CohBasis::h1(3 - 2 * n as i32).elements {
                let g = MultiPoly::from_terms(n + 1, 2, [(mono(n + 1, g), Rational::one())]);
                for p in [&uf.fxx, &uf.fxy, &uf.fyy] {
                    let v = p * &g;
                    for q in [&uf.fx, &uf.fy, &uf.fxx] {
                        assert_eq!(h1_truncate(&(q * &h1_truncate(&v))), h1_truncate(&(q * &v)));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_of_d0() {
        assert_eq!(d0_kernel_label(4), LaurentMono::new(0, 2));
    }
}

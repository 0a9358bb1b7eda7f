use serde::{Deserialize, Serialize};

use super::poly::MultiPoly;

/// Grading on `K[a0..an]` with `a_i` of weight `(1, n - i, i)`: total
/// degree, x-weight, y-weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriDegree {
    pub a_degree: i64,
    pub x_weight: i64,
    pub y_weight: i64,
}

impl TriDegree {
    pub const fn new(a_degree: i64, x_weight: i64, y_weight: i64) -> Self {
        TriDegree {
            a_degree,
            x_weight,
            y_weight,
        }
    }

    /// The degree of the degree-`n` discriminant.
    pub fn discriminant(n: usize) -> Self {
        let n = n as i64;
        TriDegree::new(2 * (n - 1), n * (n - 1), n * (n - 1))
    }
}

/// Tri-degree shared by every term, or `None` if terms disagree, the
/// polynomial is zero, or an auxiliary variable occurs.
pub fn tri_degree(p: &MultiPoly) -> Option<TriDegree> {
    let a = p.a_vars();
    let n = a as i64 - 1;
    let mut out: Option<TriDegree> = None;
    for (m, _) in p.terms() {
        let e = m.exponents();
        if e[a..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut d = TriDegree::new(0, 0, 0);
        for (i, &k) in e[..a].iter().enumerate() {
            let k = k as i64;
            d.a_degree += k;
            d.x_weight += k * (n - i as i64);
            d.y_weight += k * i as i64;
        }
        match out {
            None => out = Some(d),
            Some(prev) if prev != d => return None,
            _ => {}
        }
    }
    out
}

/// True iff every term of `p` has tri-degree `expected`.
pub fn tri_degree_check(p: &MultiPoly, expected: TriDegree) -> bool {
    tri_degree(p) == Some(expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_examples() {
        let p = MultiPoly::parse("a0*a4 + a1*a3", 5, 0).unwrap();
        assert!(tri_degree_check(&p, TriDegree::new(2, 4, 4)));
        let q = MultiPoly::parse("a0 + a1", 5, 0).unwrap();
        assert_eq!(tri_degree(&q), None);
        assert!(!tri_degree_check(&q, TriDegree::new(1, 4, 0)));
        assert!(!tri_degree_check(&MultiPoly::zero(5, 0), TriDegree::new(0, 0, 0)));
    }

    #[test]
    fn weights_of_single_variables() {
        for i in 0..=4 {
            let p = MultiPoly::parse(&format!("a{i}"), 5, 0).unwrap();
            assert_eq!(tri_degree(&p), Some(TriDegree::new(1, 4 - i, i)));
        }
    }
}

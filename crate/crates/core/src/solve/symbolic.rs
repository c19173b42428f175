//! Symbolic certification of the closed-form solution family.
//!
//! Instead of spot-checking the family at sample parameters, this module
//! substitutes the closed forms into each equation of the corrected system as
//! polynomials in `Z[k, s, u]` and reduces the difference of the two sides to
//! canonical form. A residual of literal zero certifies the equation for
//! every admissible parameter choice at once.

use serde::Serialize;

use crate::arith::{MultiPoly, VarSet};

/// Canonical residuals (left side minus right side) of the corrected system
/// under the family substitution. The family is certified exactly when every
/// residual is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCertificate {
    pub count_y0: MultiPoly,
    pub count_y1: MultiPoly,
    pub size: MultiPoly,
    pub mult_y0: MultiPoly,
    pub mult_y1: MultiPoly,
}

impl FamilyCertificate {
    /// True when every residual reduced to the zero polynomial.
    pub fn is_certified(&self) -> bool {
        self.residuals().iter().all(|(_, poly)| poly.is_zero())
    }

    /// The residuals with their constraint identifiers.
    pub fn residuals(&self) -> [(&'static str, &MultiPoly); 5] {
        [
            ("count_y0", &self.count_y0),
            ("count_y1", &self.count_y1),
            ("size", &self.size),
            ("mult_y0", &self.mult_y0),
            ("mult_y1", &self.mult_y1),
        ]
    }

    /// The four independent identities behind the residuals: the two count
    /// equations share one identity (both reduce the same totals against p),
    /// so they are reported as a single line.
    pub fn identities(&self) -> [(&'static str, bool); 4] {
        [
            ("counts", self.count_y0.is_zero() && self.count_y1.is_zero()),
            ("size", self.size.is_zero()),
            ("mult_y0", self.mult_y0.is_zero()),
            ("mult_y1", self.mult_y1.is_zero()),
        ]
    }
}

/// The family substitution, as polynomials over `Z[k, s, u]`.
pub(crate) struct FamilyPolys {
    pub ell: MultiPoly,
    pub m: MultiPoly,
    pub p: MultiPoly,
    pub r: MultiPoly,
    pub q: MultiPoly,
    pub a0: MultiPoly,
    pub a1: MultiPoly,
    pub b0: MultiPoly,
    pub b1: MultiPoly,
    pub s: MultiPoly,
    pub k: MultiPoly,
}

pub(crate) fn family_polys() -> FamilyPolys {
    let vars = VarSet::new(["k", "s", "u"]);
    let k = MultiPoly::var(&vars, "k").expect("declared variable");
    let s = MultiPoly::var(&vars, "s").expect("declared variable");
    let u = MultiPoly::var(&vars, "u").expect("declared variable");
    let one = MultiPoly::constant(&vars, 1);
    let kp1 = &k + &one;

    let ell = &kp1 + &(&u * 2);
    let m = &(&(&(&k * &k) + &(&k * 3)) + &one) * &s;
    let a0 = &(&kp1 * &(&kp1 + &u)) * &s;
    let a1 = &(&k * &s) * &u;
    let b0 = &(&kp1 * &s) * &u;
    let b1 = &(&k * &(&(&k + &u) + &MultiPoly::constant(&vars, 2))) * &s;
    let r = &(&(&(&(&k * &k) + &(&k * 2)) + &(&k * &u)) - &u) * &s;
    let q = &k * &s;
    let p = &(&(&(&(&(&k * &k) + &(&(&k * &u) * 2)) + &(&k * 3)) + &(&u * 3))
        + &MultiPoly::constant(&vars, 2))
        * &s;

    FamilyPolys {
        ell,
        m,
        p,
        r,
        q,
        a0,
        a1,
        b0,
        b1,
        s,
        k,
    }
}

/// Substitutes the closed forms into the corrected system and reduces each
/// equation to a canonical residual.
pub fn verify_family_symbolic() -> FamilyCertificate {
    let f = family_polys();
    let vars = f.k.vars().clone();
    let one = MultiPoly::constant(&vars, 1);
    let kp1 = &f.k + &one;
    let ellp1 = &f.ell + &one;

    let count_y0 = &(&(&f.a0 + &f.a1) + &(&f.s * &f.ell)) - &f.p;
    let count_y1 = &(&(&f.b0 + &f.b1) + &(&f.s * &ellp1)) - &f.p;
    let size = &(&(&f.p * &kp1) + &f.r) - &(&f.m * &ellp1);
    let slack = &(&f.m - &(&f.s * &kp1)) - &f.q;
    let mult_y0 = &(&(&f.k * &f.a0) + &(&kp1 * &f.a1)) - &(&slack * &f.ell);
    let mult_y1 = &(&(&f.k * &f.b0) + &(&kp1 * &f.b1)) - &(&slack * &ellp1);

    FamilyCertificate {
        count_y0,
        count_y1,
        size,
        mult_y0,
        mult_y1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ExactInt, MultiPoly, VarSet};

    /// Builds a polynomial over `Z[k, s, u]` from `(coeff, k_exp, s_exp, u_exp)`
    /// rows, an input format independent of the arithmetic in the module
    /// under test.
    fn poly_from_rows(rows: &[(i64, u32, u32, u32)]) -> MultiPoly {
        let vars = VarSet::new(["k", "s", "u"]);
        let k = MultiPoly::var(&vars, "k").unwrap();
        let s = MultiPoly::var(&vars, "s").unwrap();
        let u = MultiPoly::var(&vars, "u").unwrap();
        let mut acc = MultiPoly::zero(&vars);
        for &(c, ke, se, ue) in rows {
            let mut term = MultiPoly::constant(&vars, c);
            for _ in 0..ke {
                term = &term * &k;
            }
            for _ in 0..se {
                term = &term * &s;
            }
            for _ in 0..ue {
                term = &term * &u;
            }
            acc = &acc + &term;
        }
        acc
    }

    #[test]
    fn all_residuals_reduce_to_zero() {
        let cert = verify_family_symbolic();
        assert!(cert.is_certified());
        for (name, residual) in cert.residuals() {
            assert!(residual.is_zero(), "{name} residual: {residual}");
        }
        assert!(cert.identities().iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn count_equation_sides_expand_to_the_frozen_polynomial() {
        // Both count totals and p expand to s*(k^2 + 3k + 2 + 2ku + 3u).
        let expected = poly_from_rows(&[
            (1, 2, 1, 0),
            (3, 1, 1, 0),
            (2, 0, 1, 0),
            (2, 1, 1, 1),
            (3, 0, 1, 1),
        ]);
        let f = family_polys();
        let vars = f.k.vars().clone();
        let one = MultiPoly::constant(&vars, 1);
        let total_y0 = &(&f.a0 + &f.a1) + &(&f.s * &f.ell);
        let total_y1 = &(&f.b0 + &f.b1) + &(&f.s * &(&f.ell + &one));
        assert_eq!(total_y0, expected);
        assert_eq!(total_y1, expected);
        assert_eq!(f.p, expected);
    }

    #[test]
    fn size_identity_sides_expand_to_the_frozen_polynomial() {
        // p*(k+1) + r and m*(l+1) both expand to
        // s*(k^3 + 5k^2 + 7k + 2 + 2k^2*u + 6ku + 2u).
        let expected = poly_from_rows(&[
            (1, 3, 1, 0),
            (5, 2, 1, 0),
            (7, 1, 1, 0),
            (2, 0, 1, 0),
            (2, 2, 1, 1),
            (6, 1, 1, 1),
            (2, 0, 1, 1),
        ]);
        let f = family_polys();
        let vars = f.k.vars().clone();
        let one = MultiPoly::constant(&vars, 1);
        let left = &(&f.p * &(&f.k + &one)) + &f.r;
        let right = &f.m * &(&f.ell + &one);
        assert_eq!(left, expected);
        assert_eq!(right, expected);
    }

    #[test]
    fn multiplicity_sides_expand_to_the_frozen_polynomials() {
        // Both sides of the first multiplicity equation expand to
        // k*(k+1)*s*l = s*(k^3 + 2k^2 + k + 2k^2*u + 2ku); the second to
        // k*(k+1)*s*(l+1) = s*(k^3 + 3k^2 + 2k + 2k^2*u + 2ku).
        let expected_y0 = poly_from_rows(&[
            (1, 3, 1, 0),
            (2, 2, 1, 0),
            (1, 1, 1, 0),
            (2, 2, 1, 1),
            (2, 1, 1, 1),
        ]);
        let expected_y1 = poly_from_rows(&[
            (1, 3, 1, 0),
            (3, 2, 1, 0),
            (2, 1, 1, 0),
            (2, 2, 1, 1),
            (2, 1, 1, 1),
        ]);
        let f = family_polys();
        let vars = f.k.vars().clone();
        let one = MultiPoly::constant(&vars, 1);
        let kp1 = &f.k + &one;
        let slack = &(&f.m - &(&f.s * &kp1)) - &f.q;

        let left_y0 = &(&f.k * &f.a0) + &(&kp1 * &f.a1);
        let right_y0 = &slack * &f.ell;
        assert_eq!(left_y0, expected_y0);
        assert_eq!(right_y0, expected_y0);

        let left_y1 = &(&f.k * &f.b0) + &(&kp1 * &f.b1);
        let right_y1 = &slack * &(&f.ell + &one);
        assert_eq!(left_y1, expected_y1);
        assert_eq!(right_y1, expected_y1);
    }

    #[test]
    fn residual_evaluation_agrees_with_the_numeric_family() {
        // Evaluating the slack polynomial m - s*(k+1) - q at family points
        // recovers the numeric multiplicities divided out of the equations.
        let f = family_polys();
        let vars = f.k.vars().clone();
        let one = MultiPoly::constant(&vars, 1);
        let slack = &(&f.m - &(&f.s * &(&f.k + &one))) - &f.q;
        let bindings = crate::arith::poly::bindings(&[("k", 2), ("s", 1), ("u", 1)]);
        // family(1, 2, 1): m = 11, s*(k+1) = 3, q = 2, so the slack is 6.
        assert_eq!(slack.eval(&bindings).unwrap(), ExactInt::from(6));
    }
}

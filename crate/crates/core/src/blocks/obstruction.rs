//! The collapse of the unital system, certified symbolically.
//!
//! In the unital system the size equation reads `p*(k+1) = m*(ell+1)` with
//! no zero block. Multiplying the count equation at the second marked point
//! by k+1, subtracting the multiplicity equation there, and removing the
//! free-point term isolates b0; substituting the size equation for p and the
//! multiplicity value for the weighted sum leaves nothing, so b0 = 0. The
//! same manipulation at the first marked point yields a0 = m. Every unital
//! solution therefore has its counts pinned, which is the structural reason
//! the corrected system (with its zero block r and slack q) is needed at
//! all.
//!
//! Each step is recorded as a polynomial over Z[a0, a1, b0, b1, k, l, m, s]
//! and reduced to canonical form; [`derive_unital_obstruction`] asserts that
//! both reductions are literally the zero polynomial, making any regression
//! here a build-breaking failure rather than a wrong report.

use serde::Serialize;

use crate::arith::{MultiPoly, VarSet};

/// One certified identity: the algebraic reduction that isolates a count,
/// and the same reduction after the unital substitutions. Both must be the
/// zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCertificate {
    pub name: String,
    pub reduction: MultiPoly,
    pub after_substitution: MultiPoly,
}

impl IdentityCertificate {
    pub fn is_zero(&self) -> bool {
        self.reduction.is_zero() && self.after_substitution.is_zero()
    }
}

/// The two identities that collapse the unital system: b0 vanishes and a0
/// equals the target multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub b0_vanishes: IdentityCertificate,
    pub a0_equals_multiplicity: IdentityCertificate,
}

impl ObstructionCertificate {
    pub fn is_certified(&self) -> bool {
        self.b0_vanishes.is_zero() && self.a0_equals_multiplicity.is_zero()
    }

    pub fn identities(&self) -> [&IdentityCertificate; 2] {
        [&self.b0_vanishes, &self.a0_equals_multiplicity]
    }
}

struct UnitalVars {
    a0: MultiPoly,
    a1: MultiPoly,
    b0: MultiPoly,
    b1: MultiPoly,
    k: MultiPoly,
    ell: MultiPoly,
    m: MultiPoly,
    s: MultiPoly,
    one: MultiPoly,
}

fn unital_vars() -> UnitalVars {
    let vars = VarSet::new(["a0", "a1", "b0", "b1", "k", "l", "m", "s"]);
    let v = |name: &str| MultiPoly::var(&vars, name).expect("declared variable");
    UnitalVars {
        a0: v("a0"),
        a1: v("a1"),
        b0: v("b0"),
        b1: v("b1"),
        k: v("k"),
        ell: v("l"),
        m: v("m"),
        s: v("s"),
        one: MultiPoly::constant(&vars, 1),
    }
}

/// Builds and checks the collapse certificate. Panics if either identity
/// fails to reduce to zero, which can only happen if the construction below
/// is edited into something false.
pub fn derive_unital_obstruction() -> ObstructionCertificate {
    let v = unital_vars();
    let kp1 = &v.k + &v.one;
    let ellp1 = &v.ell + &v.one;

    // Count at y1 times k+1, minus the weighted multiplicities at y1, minus
    // the free-point term: in the free variables this is b0 on the nose.
    let count_y1_scaled = &(&(&v.b0 + &v.b1) + &(&v.s * &ellp1)) * &kp1;
    let weighted_y1 = &(&v.k * &v.b0) + &(&kp1 * &v.b1);
    let free_term_y1 = &(&v.s * &kp1) * &ellp1;
    let reduction_b0 = &(&(&count_y1_scaled - &weighted_y1) - &free_term_y1) - &v.b0;

    // The same combination with the unital substitutions: the count total
    // becomes p and p*(k+1) becomes m*(l+1) by the size equation, and the
    // weighted sum becomes (m - s*(k+1))*(l+1) by the multiplicity equation.
    // What remains is the value of b0, and it cancels to zero.
    let p_scaled = &v.m * &ellp1;
    let weighted_value_y1 = &(&v.m - &(&v.s * &kp1)) * &ellp1;
    let substituted_b0 = &(&p_scaled - &weighted_value_y1) - &free_term_y1;

    let b0_vanishes = IdentityCertificate {
        name: "b0_vanishes".into(),
        reduction: reduction_b0,
        after_substitution: substituted_b0,
    };

    // The analogous combination at y0 isolates a0.
    let count_y0_scaled = &(&(&v.a0 + &v.a1) + &(&v.s * &v.ell)) * &kp1;
    let weighted_y0 = &(&v.k * &v.a0) + &(&kp1 * &v.a1);
    let free_term_y0 = &(&v.s * &v.ell) * &kp1;
    let reduction_a0 = &(&(&count_y0_scaled - &weighted_y0) - &free_term_y0) - &v.a0;

    // After substitution the leftover is m rather than zero, which is the
    // statement a0 = m; subtracting m certifies it.
    let weighted_value_y0 = &(&v.m - &(&v.s * &kp1)) * &v.ell;
    let substituted_a0 = &(&(&p_scaled - &weighted_value_y0) - &free_term_y0) - &v.m;

    let a0_equals_multiplicity = IdentityCertificate {
        name: "a0_equals_multiplicity".into(),
        reduction: reduction_a0,
        after_substitution: substituted_a0,
    };

    let certificate = ObstructionCertificate {
        b0_vanishes,
        a0_equals_multiplicity,
    };
    for identity in certificate.identities() {
        assert!(
            identity.reduction.is_zero(),
            "unital reduction {} is nonzero: {}",
            identity.name,
            identity.reduction
        );
        assert!(
            identity.after_substitution.is_zero(),
            "unital substitution {} is nonzero: {}",
            identity.name,
            identity.after_substitution
        );
    }
    certificate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::bindings;
    use crate::arith::ExactInt;

    #[test]
    fn both_identities_are_certified_zero() {
        let cert = derive_unital_obstruction();
        assert!(cert.is_certified());
        assert!(cert.b0_vanishes.reduction.is_zero());
        assert!(cert.b0_vanishes.after_substitution.is_zero());
        assert!(cert.a0_equals_multiplicity.reduction.is_zero());
        assert!(cert.a0_equals_multiplicity.after_substitution.is_zero());
    }

    #[test]
    fn numeric_spot_check_of_the_b0_collapse() {
        // Unital point: k = 3, l = 2, s = 1, m = 8. The count total at y1 is
        // b0 + b1 + s*(l+1) = p = m*(l+1)/(k+1) = 6, so with b0 = 0 the
        // remaining count is b1 = 3. Both sides of the scaled count equation
        // evaluate to 24, the weighted sum to 12, and the b0 the reduction
        // isolates to 24 - 12 - 12 = 0.
        let v = unital_vars();
        let kp1 = &v.k + &v.one;
        let ellp1 = &v.ell + &v.one;
        let point = bindings(&[
            ("a0", 8),
            ("a1", 0),
            ("b0", 0),
            ("b1", 3),
            ("k", 3),
            ("l", 2),
            ("m", 8),
            ("s", 1),
        ]);

        let count_scaled = &(&(&v.b0 + &v.b1) + &(&v.s * &ellp1)) * &kp1;
        let size_side = &v.m * &ellp1;
        assert_eq!(count_scaled.eval(&point).unwrap(), ExactInt::from(24));
        assert_eq!(size_side.eval(&point).unwrap(), ExactInt::from(24));

        let weighted = &(&v.k * &v.b0) + &(&kp1 * &v.b1);
        let mult_side = &(&v.m - &(&v.s * &kp1)) * &ellp1;
        assert_eq!(weighted.eval(&point).unwrap(), ExactInt::from(12));
        assert_eq!(mult_side.eval(&point).unwrap(), ExactInt::from(12));

        let free_term = &(&v.s * &kp1) * &ellp1;
        let isolated_b0 = &(&count_scaled - &weighted) - &free_term;
        assert_eq!(isolated_b0.eval(&point).unwrap(), ExactInt::from(0));
    }

    #[test]
    fn every_enumerated_unital_solution_obeys_the_collapse() {
        use crate::solve::{enumerate_unital, EnumerateOptions, SearchBounds};
        let found = enumerate_unital(
            &SearchBounds::grid(4, 4, 24, 3),
            &EnumerateOptions::default(),
        )
        .unwrap();
        assert!(!found.is_empty());
        for inst in found {
            assert_eq!(inst.b0, 0, "{inst:?}");
            assert_eq!(inst.a0, inst.m, "{inst:?}");
        }
    }
}

//! Canonical multivariate polynomials over a fixed variable set.
//!
//! A polynomial is a map from exponent vectors to nonzero integer
//! coefficients, with the variable set fixed up front and ordered
//! lexicographically by name. Two polynomials over the same variable set are
//! equal as functions if and only if they are structurally equal, so
//! subtracting one expansion of an identity from another and checking
//! [`MultiPoly::is_zero`] is a complete proof of the identity. Only ring
//! operations are provided; nothing here divides, so canonical form never
//! depends on coefficient gcds.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::{ArithError, ExactInt};

/// An ordered set of variable names shared by a family of polynomials.
///
/// Names are sorted lexicographically and deduplicated, so the exponent
/// position of a variable is determined by the set alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        VarSet {
            names: Arc::new(names),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }
}

/// Binary polynomial operations accepted by [`MultiPoly::combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// A multivariate polynomial with exact integer coefficients in canonical form.
///
/// Invariants: every exponent vector has one entry per variable of the set,
/// and no stored coefficient is zero. All constructors and operations
/// preserve both.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarSet,
    terms: BTreeMap<Vec<u32>, ExactInt>,
}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: impl Into<ExactInt>) -> Self {
        let mut p = Self::zero(vars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    /// The polynomial consisting of the named variable, to the first power.
    pub fn var(vars: &VarSet, name: &str) -> Result<Self, ArithError> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| ArithError::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0u32; vars.len()];
        exps[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(exps, ExactInt::from(1));
        Ok(p)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials with nonzero coefficient.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the given exponent vector (zero when absent).
    pub fn coefficient(&self, exps: &[u32]) -> ExactInt {
        self.terms.get(exps).cloned().unwrap_or_else(ExactInt::zero)
    }

    /// Applies `op` to two polynomials over the same variable set.
    pub fn combine(&self, other: &MultiPoly, op: PolyOp) -> Result<MultiPoly, ArithError> {
        if self.vars != other.vars {
            return Err(ArithError::VarSetMismatch(
                self.vars.names().to_vec(),
                other.vars.names().to_vec(),
            ));
        }
        Ok(match op {
            PolyOp::Add => self.add_impl(other, false),
            PolyOp::Sub => self.add_impl(other, true),
            PolyOp::Mul => self.mul_impl(other),
        })
    }

    fn add_impl(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (exps, coeff) in &other.terms {
            let delta = if negate { -coeff.clone() } else { coeff.clone() };
            let entry = terms.entry(exps.clone()).or_insert_with(ExactInt::zero);
            *entry += delta;
            if entry.is_zero() {
                terms.remove(exps);
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    fn mul_impl(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms: BTreeMap<Vec<u32>, ExactInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(exps.clone()).or_insert_with(ExactInt::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&exps);
                }
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Evaluates at an integer assignment. Every variable of the set must be
    /// bound; extra bindings are ignored.
    pub fn eval(&self, bindings: &BTreeMap<String, ExactInt>) -> Result<ExactInt, ArithError> {
        let values: Vec<&ExactInt> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                bindings
                    .get(n)
                    .ok_or_else(|| ArithError::MissingBinding(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut total = ExactInt::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (value, &e) in values.iter().zip(exps) {
                for _ in 0..e {
                    term *= *value;
                }
            }
            total += term;
        }
        Ok(total)
    }
}

/// Convenience constructor for evaluation bindings.
#[cfg(test)]
pub(crate) fn bindings(pairs: &[(&str, i64)]) -> BTreeMap<String, ExactInt> {
    pairs
        .iter()
        .map(|(n, v)| (n.to_string(), ExactInt::from(*v)))
        .collect()
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

/// Polynomials serialize as their canonical display string; reports only
/// ever need to show residuals, so no structural encoding exists.
impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // BTreeMap order: lexicographic in the exponent vector, constant first.
        for (exps, coeff) in &self.terms {
            let negative = coeff < &ExactInt::zero();
            let magnitude = if negative { -coeff.clone() } else { coeff.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut monomial = String::new();
            for (name, &e) in self.vars.names().iter().zip(exps) {
                if e == 0 {
                    continue;
                }
                if !monomial.is_empty() {
                    monomial.push('*');
                }
                monomial.push_str(name);
                if e > 1 {
                    monomial.push_str(&format!("^{}", e));
                }
            }
            if monomial.is_empty() {
                write!(f, "{}", magnitude)?;
            } else if magnitude == ExactInt::from(1) {
                write!(f, "{}", monomial)?;
            } else {
                write!(f, "{}*{}", magnitude, monomial)?;
            }
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.combine(rhs, $op)
                    .expect("operands share one variable set")
            }
        }
        impl std::ops::$trait for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, PolyOp::Add);
poly_binop!(Sub, sub, PolyOp::Sub);
poly_binop!(Mul, mul, PolyOp::Mul);

impl std::ops::Mul<i64> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: i64) -> MultiPoly {
        self * &MultiPoly::constant(self.vars(), rhs)
    }
}

impl std::ops::Mul<i64> for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: i64) -> MultiPoly {
        &self * rhs
    }
}

impl std::ops::Add<i64> for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: i64) -> MultiPoly {
        &self + &MultiPoly::constant(self.vars(), rhs)
    }
}

impl std::ops::Sub<i64> for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: i64) -> MultiPoly {
        &self - &MultiPoly::constant(self.vars(), rhs)
    }
}

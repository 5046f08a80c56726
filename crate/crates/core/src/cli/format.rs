use crate::poly::Poly;
use crate::scalar::Rational;
use crate::symtensor::MultiIndex;
use num_traits::{Signed, Zero};
use std::fmt::Write;

/// Coefficients the conversion tables can print.
pub trait Coefficient: Clone + PartialEq {
    fn is_negative(&self) -> bool;
    fn abs_is_one(&self) -> bool;
    fn abs_string(&self) -> String;
    fn is_zero(&self) -> bool;
}

impl Coefficient for f64 {
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn abs_is_one(&self) -> bool {
        self.abs() == 1.0
    }
    fn abs_string(&self) -> String {
        format!("{}", self.abs())
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Coefficient for Rational {
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_is_one(&self) -> bool {
        Signed::abs(self) == Rational::from_integer(1)
    }
    fn abs_string(&self) -> String {
        Signed::abs(self).to_string()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

/// `φ²` in one dimension, `φ₁²φ₂` otherwise (modes numbered from 1).
pub fn format_monomial(key: &MultiIndex, dim: usize) -> String {
    let mut s = String::new();
    for (mode, &c) in key.counts(dim).iter().enumerate() {
        if c == 0 {
            continue;
        }
        s.push('φ');
        if dim > 1 {
            s.push_str(&subscript(mode + 1));
        }
        if c > 1 {
            s.push_str(&superscript(c));
        }
    }
    s
}

/// Terms by decreasing degree, e.g. `φ⁴ − 6φ² + 3`.
pub fn format_poly<S: Coefficient + crate::scalar::Scalar>(p: &Poly<S>) -> String {
    let dim = p.nvars();
    let mut terms: Vec<(&MultiIndex, &S)> = p.terms().filter(|(_, c)| !Coefficient::is_zero(*c)).collect();
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by(|a, b| b.0.rank().cmp(&a.0.rank()).then(a.0.cmp(b.0)));
    let mut out = String::new();
    for (i, (key, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('−'),
            (0, false) => {}
            (_, true) => out.push_str(" − "),
            (_, false) => out.push_str(" + "),
        }
        let mono = format_monomial(key, dim);
        if !c.abs_is_one() || mono.is_empty() {
            let _ = write!(out, "{}", c.abs_string());
        }
        out.push_str(&mono);
    }
    out
}

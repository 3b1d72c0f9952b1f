use std::fmt;

use num_traits::{One, Signed};

use crate::exactnum::Rational;

/// Writes `c*mono` as one summand of a sum, folding unit coefficients and
/// signs into the separator.
pub fn write_term(
    f: &mut impl fmt::Write,
    c: &Rational,
    mono: &str,
    first: bool,
) -> fmt::Result {
    let negative = c.is_negative();
    let abs = c.abs();
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if mono.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{mono}")
    } else {
        write!(f, "{abs}*{mono}")
    }
}

/// `name1^e1*name2^e2...`, skipping zero exponents; empty for the unit.
pub fn monomial(prefix: &str, exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (j, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{prefix}{}", j + 1)),
            _ => parts.push(format!("{prefix}{}^{e}", j + 1)),
        }
    }
    parts.join("*")
}

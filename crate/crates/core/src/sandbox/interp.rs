//! The interpretation f of modal formulas as sandbox formulas: variables
//! become atoms `f:p`, connectives are kept, and □B becomes `Pr^†[f(B)]`.

use super::sformula::{PrKind, SFormula, SKind};
use crate::formula::{is_identifier, Formula, Kind};

const PREFIX: &str = "f:";

pub fn image(b: &Formula) -> SFormula {
    match b.kind() {
        Kind::Bot => SFormula::bot(),
        Kind::Top => SFormula::top(),
        Kind::Var(p) => SFormula::atom(&format!("{PREFIX}{p}")),
        Kind::Not(a) => SFormula::neg(image(a)),
        Kind::And(a, c) => SFormula::and(image(a), image(c)),
        Kind::Or(a, c) => SFormula::or(image(a), image(c)),
        Kind::Imp(a, c) => SFormula::imp(image(a), image(c)),
        Kind::Box(a) => SFormula::dagger(image(a)),
    }
}

/// The unique B with f(B) = φ, if φ lies in the image.
pub fn preimage(phi: &SFormula) -> Option<Formula> {
    Some(match phi.kind() {
        SKind::Bot => Formula::bot(),
        SKind::Top => Formula::top(),
        SKind::Atom(name) => {
            let p = name.strip_prefix(PREFIX).filter(|p| is_identifier(p))?;
            Formula::var(p)
        }
        SKind::Neg(a) => Formula::not(preimage(a)?),
        SKind::And(a, c) => Formula::and(preimage(a)?, preimage(c)?),
        SKind::Or(a, c) => Formula::or(preimage(a)?, preimage(c)?),
        SKind::Imp(a, c) => Formula::imp(preimage(a)?, preimage(c)?),
        SKind::Pr(PrKind::Dagger, a) => Formula::boxed(preimage(a)?),
        SKind::Pr(..) | SKind::Marker(_) => return None,
    })
}

pub fn is_image(phi: &SFormula) -> bool {
    match phi.kind() {
        SKind::Bot | SKind::Top => true,
        SKind::Atom(name) => name.strip_prefix(PREFIX).is_some_and(is_identifier),
        SKind::Neg(a) | SKind::Pr(PrKind::Dagger, a) => is_image(a),
        SKind::And(a, c) | SKind::Or(a, c) | SKind::Imp(a, c) => is_image(a) && is_image(c),
        SKind::Pr(..) | SKind::Marker(_) => false,
    }
}

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::polyring::Monomial;

/// Monomial orders with `x_0 > x_1 > ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Degree in the first `k` variables first, grevlex to break ties.
    /// Any polynomial whose leading monomial avoids the block avoids it
    /// entirely.
    Elimination(usize),
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => a.cmp_grevlex(b),
            MonomialOrder::Lex => a.cmp_lex(b),
            MonomialOrder::Elimination(k) => a
                .block_degree(0, *k)
                .cmp(&b.block_degree(0, *k))
                .then_with(|| a.cmp_grevlex(b)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elimination_prefers_block_variables() {
        let ord = MonomialOrder::Elimination(1);
        let a = Monomial::new(&[1, 0, 0]);
        let b = Monomial::new(&[0, 5, 5]);
        assert_eq!(ord.cmp(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::GrevLex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn lex_ignores_degree() {
        let a = Monomial::new(&[1, 0]);
        let b = Monomial::new(&[0, 9]);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
    }
}

//! Highest shifted derivatives.
//!
//! On a Speh factor the highest shifted derivative lowers `k` by one, and on
//! a product it is the product of the factors' derivatives. Complementary
//! factors follow the same rule on their base, so `pi(u(D,1),a)` goes to the
//! trivial representation.

use crate::unitary::{Factor, UnitaryRep};

pub fn highest_shifted_derivative_factor(factor: &Factor) -> UnitaryRep {
    match factor.with_k(factor.k() - 1) {
        Some(f) => UnitaryRep::single(f),
        None => UnitaryRep::empty(),
    }
}

pub fn highest_shifted_derivative(rep: &UnitaryRep) -> UnitaryRep {
    UnitaryRep::from_factors(rep.iter().filter_map(|f| f.with_k(f.k() - 1)))
}

/// `[rep, hsd(rep), hsd^2(rep), ...]`, ending with the empty representation.
pub fn derivative_ladder(rep: &UnitaryRep) -> Vec<UnitaryRep> {
    let mut ladder = vec![rep.clone()];
    while let Some(last) = ladder.last().filter(|r| !r.is_empty()) {
        let next = highest_shifted_derivative(last);
        ladder.push(next);
    }
    ladder
}

/// Splits `rep` into (factors with `k >= 2`, factors with `k == 1`).
pub fn split_rigid_generic(rep: &UnitaryRep) -> (UnitaryRep, UnitaryRep) {
    let (rigid, generic): (Vec<&Factor>, Vec<&Factor>) = rep.iter().partition(|f| f.k() >= 2);
    (
        rigid.into_iter().cloned().collect(),
        generic.into_iter().cloned().collect(),
    )
}

pub fn is_generic(rep: &UnitaryRep) -> bool {
    rep.factors().iter().all(|(f, _)| f.k() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::rational::rat;
    use crate::segment::Segment;
    use crate::testing::fixture;
    use crate::unitary::{ComplementaryFactor, SpehFactor};

    fn speh(a: &Alphabet, id: &str, l: u32, k: i64) -> Factor {
        Factor::Speh(SpehFactor::new(Segment::st(a.rho(id).unwrap(), l), k).unwrap())
    }

    fn comp(a: &Alphabet, id: &str, l: u32, k: i64) -> Factor {
        Factor::Complementary(
            ComplementaryFactor::new(Segment::st(a.rho(id).unwrap(), l), k, rat(1, 4)).unwrap(),
        )
    }

    #[test]
    fn factor_rule() {
        let a = fixture();
        assert_eq!(
            highest_shifted_derivative_factor(&speh(&a, "r0", 2, 3)),
            UnitaryRep::single(speh(&a, "r0", 2, 2))
        );
        assert!(highest_shifted_derivative_factor(&speh(&a, "r0", 2, 1)).is_empty());
        assert_eq!(
            highest_shifted_derivative_factor(&comp(&a, "r0", 1, 2)),
            UnitaryRep::single(comp(&a, "r0", 1, 1))
        );
        assert!(highest_shifted_derivative_factor(&comp(&a, "r0", 1, 1)).is_empty());
    }

    #[test]
    fn product_rule() {
        let a = fixture();
        let rep = UnitaryRep::from_factors([speh(&a, "r0", 2, 3), speh(&a, "t", 1, 1)]);
        assert_eq!(
            highest_shifted_derivative(&rep),
            UnitaryRep::single(speh(&a, "r0", 2, 2))
        );
        assert!(highest_shifted_derivative(&UnitaryRep::empty()).is_empty());
    }

    #[test]
    fn ladders() {
        let a = fixture();
        let ladder = derivative_ladder(&UnitaryRep::single(speh(&a, "r0", 1, 3)));
        assert_eq!(
            ladder,
            vec![
                UnitaryRep::single(speh(&a, "r0", 1, 3)),
                UnitaryRep::single(speh(&a, "r0", 1, 2)),
                UnitaryRep::single(speh(&a, "r0", 1, 1)),
                UnitaryRep::empty(),
            ]
        );
        assert_eq!(derivative_ladder(&UnitaryRep::single(speh(&a, "r0", 2, 1))).len(), 2);
        let two = UnitaryRep::from_factors([speh(&a, "r0", 1, 2), speh(&a, "t", 1, 5)]);
        assert_eq!(derivative_ladder(&two).len(), 6);
        assert_eq!(derivative_ladder(&UnitaryRep::empty()), vec![UnitaryRep::empty()]);
    }

    #[test]
    fn splitting() {
        let a = fixture();
        let rep = UnitaryRep::from_factors([speh(&a, "r0", 1, 3), speh(&a, "t", 1, 1)]);
        let (rigid, generic) = split_rigid_generic(&rep);
        assert_eq!(rigid, UnitaryRep::single(speh(&a, "r0", 1, 3)));
        assert_eq!(generic, UnitaryRep::single(speh(&a, "t", 1, 1)));
        assert_eq!(rigid.product(&generic), rep);

        let gen = UnitaryRep::from_factors([speh(&a, "r0", 1, 1), comp(&a, "t", 2, 1)]);
        assert_eq!(split_rigid_generic(&gen), (UnitaryRep::empty(), gen.clone()));

        let c = UnitaryRep::single(comp(&a, "r0", 1, 2));
        assert_eq!(split_rigid_generic(&c), (c.clone(), UnitaryRep::empty()));
    }
}

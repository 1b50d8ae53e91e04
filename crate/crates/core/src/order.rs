//! Monomial orders on exponent vectors.
//!
//! The workhorse is a weighted reverse-lexicographic order: compare total
//! weight first, break ties by reverse lexicography under an explicit
//! variable ranking.  A lexicographic order and a block order (for
//! elimination) round out the set.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Weight vector + reverse lexicographic tie-break.
    ///
    /// `ranking` lists the variables from greatest to least.  Revlex scans
    /// from the least variable upward; at the first variable where the
    /// exponents differ, the monomial with the *smaller* exponent is larger.
    WeightedRevLex { weights: Vec<BigInt>, ranking: Vec<usize> },
    /// Pure lexicographic order with `ranking` from greatest to least.
    Lex { ranking: Vec<usize> },
    /// Elimination block order: `front` variables compared first (by their
    /// exponent sum then lex within the block), then `inner` decides.
    Block { front: Vec<usize>, inner: Box<MonomialOrder> },
}

impl MonomialOrder {
    /// The natural grading order for a semigroup with generator degrees
    /// `weights`: variables `d+1..e` rank above `1..d`, each run descending.
    pub fn graded_default(weights: Vec<BigInt>, d: usize) -> Self {
        let e = weights.len();
        let mut ranking: Vec<usize> = (d..e).collect();
        ranking.extend(0..d);
        MonomialOrder::WeightedRevLex { weights, ranking }
    }

    /// As `graded_default`, but with variable `least` moved to the bottom of
    /// the ranking so that revlex "prefers to divide by it".
    pub fn graded_with_least(weights: Vec<BigInt>, d: usize, least: usize) -> Self {
        let MonomialOrder::WeightedRevLex { weights, mut ranking } =
            Self::graded_default(weights, d)
        else {
            unreachable!()
        };
        ranking.retain(|&v| v != least);
        ranking.push(least);
        MonomialOrder::WeightedRevLex { weights, ranking }
    }

    pub fn cmp_exp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        match self {
            MonomialOrder::WeightedRevLex { weights, ranking } => {
                let wa = weight_of(a, weights);
                let wb = weight_of(b, weights);
                match wa.cmp(&wb) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                // scan least variable first; smaller exponent wins
                for &v in ranking.iter().rev() {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => {}
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Lex { ranking } => {
                for &v in ranking {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { front, inner } => {
                let sa: u64 = front.iter().map(|&v| a[v] as u64).sum();
                let sb: u64 = front.iter().map(|&v| b[v] as u64).sum();
                match sa.cmp(&sb) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                for &v in front {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                inner.cmp_exp(a, b)
            }
        }
    }
}

pub fn weight_of(exp: &Exponent, weights: &[BigInt]) -> BigInt {
    let mut w = BigInt::zero();
    for (x, wt) in exp.iter().zip(weights) {
        if *x != 0 {
            w += wt * BigInt::from(*x);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord2() -> MonomialOrder {
        MonomialOrder::WeightedRevLex {
            weights: vec![BigInt::from(1), BigInt::from(1)],
            ranking: vec![0, 1],
        }
    }

    #[test]
    fn weighted_revlex_degree_dominates() {
        let o = ord2();
        assert_eq!(o.cmp_exp(&vec![3, 0], &vec![1, 1]), Ordering::Greater);
        assert_eq!(o.cmp_exp(&vec![0, 1], &vec![2, 0]), Ordering::Less);
    }

    #[test]
    fn revlex_tie_break() {
        let o = ord2();
        // same degree: smaller exponent in the least variable (y) is larger
        assert_eq!(o.cmp_exp(&vec![2, 0], &vec![1, 1]), Ordering::Greater);
        assert_eq!(o.cmp_exp(&vec![0, 2], &vec![1, 1]), Ordering::Less);
        assert_eq!(o.cmp_exp(&vec![1, 1], &vec![1, 1]), Ordering::Equal);
    }

    #[test]
    fn lex_order() {
        let o = MonomialOrder::Lex { ranking: vec![0, 1] };
        assert_eq!(o.cmp_exp(&vec![1, 0], &vec![0, 5]), Ordering::Greater);
        assert_eq!(o.cmp_exp(&vec![1, 1], &vec![1, 3]), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_front() {
        let inner = MonomialOrder::WeightedRevLex {
            weights: vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)],
            ranking: vec![0, 1],
        };
        let o = MonomialOrder::Block { front: vec![2], inner: Box::new(inner) };
        // any power of the tag variable beats anything without it
        assert_eq!(o.cmp_exp(&vec![0, 0, 1], &vec![9, 9, 0]), Ordering::Greater);
        assert_eq!(o.cmp_exp(&vec![5, 0, 0], &vec![0, 1, 0]), Ordering::Greater);
    }

    #[test]
    fn graded_default_ranking() {
        let o = MonomialOrder::graded_default(vec![BigInt::from(1); 6], 3);
        let MonomialOrder::WeightedRevLex { ranking, .. } = &o else { panic!() };
        assert_eq!(ranking, &vec![3, 4, 5, 0, 1, 2]);
        let o2 = MonomialOrder::graded_with_least(vec![BigInt::from(1); 6], 3, 4);
        let MonomialOrder::WeightedRevLex { ranking, .. } = &o2 else { panic!() };
        assert_eq!(ranking, &vec![3, 5, 0, 1, 2, 4]);
    }

    #[test]
    fn total_order_properties_small() {
        let o = ord2();
        let mut exps = Vec::new();
        for a in 0..4u32 {
            for b in 0..4u32 {
                exps.push(vec![a, b]);
            }
        }
        for x in &exps {
            for y in &exps {
                // multiplicativity: x > y implies x+z > y+z
                if o.cmp_exp(x, y) == Ordering::Greater {
                    for z in &exps {
                        let xz: Exponent = x.iter().zip(z).map(|(u, v)| u + v).collect();
                        let yz: Exponent = y.iter().zip(z).map(|(u, v)| u + v).collect();
                        assert_eq!(o.cmp_exp(&xz, &yz), Ordering::Greater);
                    }
                }
            }
            // 1 is the least monomial
            if x.iter().any(|&c| c != 0) {
                assert_eq!(o.cmp_exp(x, &vec![0, 0]), Ordering::Greater);
            }
        }
    }
}

//! Groebner bases over Q, toric ideals of affine semigroups, monomial
//! ideals and colon/saturation operations.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::linalg;
use crate::order::{self, Exponent, MonomialOrder};
use crate::poly::{
    self, exp_coprime, exp_divides, exp_lcm, normal_form, s_polynomial, Polynomial,
};
use crate::semigroup::SemigroupDescriptor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub elements: Vec<Polynomial>,
    pub order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.elements, &self.order)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements
            .iter()
            .any(|g| g.leading_exp().iter().all(|&x| x == 0))
    }

    /// Ideal of leading monomials.
    pub fn initial_ideal(&self) -> MonomialIdeal {
        let n = self
            .elements
            .first()
            .map_or(0, |g| g.leading_exp().len());
        self.initial_ideal_with_vars(n)
    }

    /// As `initial_ideal`, with an explicit variable count (useful when the
    /// basis may be empty).
    pub fn initial_ideal_with_vars(&self, num_vars: usize) -> MonomialIdeal {
        MonomialIdeal::new(
            self.elements.iter().map(|g| g.leading_exp().clone()).collect(),
            num_vars,
        )
    }

    /// Same ideal, different generating set?
    pub fn equals_ideal(&self, other: &GroebnerBasis) -> bool {
        self.elements.iter().all(|g| other.contains(g))
            && other.elements.iter().all(|g| self.contains(g))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let elems: Vec<serde_json::Value> = self
            .elements
            .iter()
            .map(|g| {
                if g.terms.len() == 2
                    && g.terms[0].coeff.is_one()
                    && (-&g.terms[1].coeff).is_one()
                {
                    json!({"lead": g.terms[0].exp, "trail": g.terms[1].exp})
                } else if g.terms.len() == 1 && g.terms[0].coeff.is_one() {
                    json!({"lead": g.terms[0].exp, "trail": null})
                } else {
                    json!({
                        "terms": g.terms.iter().map(|t| json!({
                            "coeff": t.coeff.to_string(),
                            "exp": t.exp,
                        })).collect::<Vec<_>>()
                    })
                }
            })
            .collect();
        json!({ "basis": elems })
    }
}

/// A pending S-pair with its lcm and weight cached for cheap selection.
struct SPair {
    i: usize,
    j: usize,
    lcm: Exponent,
    weight: BigInt,
}

fn lcm_weight(order: &MonomialOrder, exp: &Exponent) -> BigInt {
    match order {
        MonomialOrder::WeightedRevLex { weights, .. } => order::weight_of(exp, weights),
        _ => BigInt::zero(),
    }
}

/// Gebauer-Moeller pair update: append `h` to the basis, prune the pending
/// queue with the chain criterion, and enqueue the surviving new pairs
/// (dropping coprime ones after they have had their chance to eliminate
/// others).
fn gm_update(
    basis: &mut Vec<Polynomial>,
    pairs: &mut Vec<SPair>,
    h: Polynomial,
    order: &MonomialOrder,
) {
    let t = basis.len();
    let lt_h = h.leading_exp().clone();
    let mut fresh: Vec<SPair> = (0..t)
        .map(|i| {
            let l = exp_lcm(basis[i].leading_exp(), &lt_h);
            let w = lcm_weight(order, &l);
            SPair { i, j: t, lcm: l, weight: w }
        })
        .collect();
    let mut kept: Vec<SPair> = Vec::new();
    while let Some(p) = fresh.pop() {
        let coprime = exp_coprime(basis[p.i].leading_exp(), &lt_h);
        let keep = coprime
            || (!fresh.iter().any(|q| exp_divides(&q.lcm, &p.lcm))
                && !kept.iter().any(|q| exp_divides(&q.lcm, &p.lcm)));
        if keep {
            kept.push(p);
        }
    }
    kept.retain(|p| !exp_coprime(basis[p.i].leading_exp(), &lt_h));
    pairs.retain(|p| {
        !exp_divides(&lt_h, &p.lcm)
            || exp_lcm(basis[p.i].leading_exp(), &lt_h) == p.lcm
            || exp_lcm(basis[p.j].leading_exp(), &lt_h) == p.lcm
    });
    pairs.extend(kept);
    basis.push(h);
}

/// Buchberger's algorithm; returns the unique reduced Groebner basis.
///
/// Pair selection is by smallest lcm under the ambient order (normal
/// strategy); the pair queue is maintained with the Gebauer-Moeller
/// criteria.
pub fn buchberger(generators: &[Polynomial], order: &MonomialOrder) -> GroebnerBasis {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pairs: Vec<SPair> = Vec::new();
    for g in generators {
        // re-sort: the caller may have built `g` under a different order
        let g = Polynomial::from_terms(g.terms.clone(), order);
        if !g.is_zero() {
            gm_update(&mut basis, &mut pairs, g.monic(), order);
        }
    }
    while !pairs.is_empty() {
        let mut best = 0;
        for k in 1..pairs.len() {
            let c = pairs[k]
                .weight
                .cmp(&pairs[best].weight)
                .then_with(|| order.cmp_exp(&pairs[k].lcm, &pairs[best].lcm));
            if c == std::cmp::Ordering::Less {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        let s = s_polynomial(&basis[p.i], &basis[p.j], order);
        let r = normal_form(&s, &basis, order);
        if !r.is_zero() {
            gm_update(&mut basis, &mut pairs, r.monic(), order);
        }
    }
    reduce_basis(basis, order)
}

/// Interreduce to the unique reduced basis: minimal leading terms, every
/// element fully reduced against the others, monic, deterministically sorted.
fn reduce_basis(mut basis: Vec<Polynomial>, order: &MonomialOrder) -> GroebnerBasis {
    // drop elements whose lead is divisible by another lead
    let mut keep: Vec<Polynomial> = Vec::new();
    basis.sort_by(|a, b| order.cmp_exp(a.leading_exp(), b.leading_exp()));
    for (i, g) in basis.iter().enumerate() {
        let minimal = !basis.iter().enumerate().any(|(j, h)| {
            j != i
                && exp_divides(h.leading_exp(), g.leading_exp())
                && (h.leading_exp() != g.leading_exp() || j < i)
        });
        if minimal {
            keep.push(g.clone());
        }
    }
    // reduce tails until stable
    loop {
        let mut changed = false;
        for i in 0..keep.len() {
            let others: Vec<Polynomial> = keep
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, h)| h.clone())
                .collect();
            let r = normal_form(&keep[i], &others, order).monic();
            if r != keep[i] {
                keep[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    keep.retain(|g| !g.is_zero());
    keep.sort_by(|a, b| order.cmp_exp(a.leading_exp(), b.leading_exp()));
    GroebnerBasis { elements: keep, order: order.clone() }
}

/// The toric ideal `I_A = ker(x_i -> t^{a_i})` as a reduced basis under
/// `order`.
///
/// A lattice-basis ideal is read off the integer kernel of the generator
/// matrix and then saturated at every variable.  Saturation at `x_i` uses a
/// weighted revlex order with `x_i` least: there, a homogeneous element
/// divisible by `x_i` in its lead is divisible by `x_i` throughout, so
/// stripping common variable powers from a basis computes the quotient.
pub fn toric_ideal(desc: &SemigroupDescriptor, order: &MonomialOrder) -> GroebnerBasis {
    let e = desc.num_gens;
    let rows: Vec<Vec<BigInt>> = (0..desc.ambient_dim)
        .map(|r| (0..e).map(|c| desc.generators[c].0[r].clone()).collect())
        .collect();
    let kernel = linalg::integer_kernel(&rows);
    let weights = desc.grading_weights();
    let mut gens: Vec<Polynomial> = kernel
        .iter()
        .map(|u| {
            let mut plus = vec![0u32; e];
            let mut minus = vec![0u32; e];
            for (k, c) in u.iter().enumerate() {
                if c > &BigInt::zero() {
                    plus[k] = u32::try_from(c).expect("kernel entry fits u32");
                } else if c < &BigInt::zero() {
                    minus[k] = u32::try_from(&-c).expect("kernel entry fits u32");
                }
            }
            Polynomial::binomial(plus, minus, order)
        })
        .filter(|p| !p.is_zero())
        .collect();
    if gens.is_empty() {
        return GroebnerBasis { elements: Vec::new(), order: order.clone() };
    }
    // saturate at each variable in turn; saturations commute, so a single
    // sweep computes the full saturation at the product of the variables
    for i in 0..e {
        let sat_order =
            MonomialOrder::graded_with_least(weights.clone(), desc.ambient_dim, i);
        let gb = buchberger(&gens, &sat_order);
        gens = gb
            .elements
            .into_iter()
            .map(|g| poly::saturate_by_variable(&g, i))
            .collect();
    }
    buchberger(&gens, order)
}

/// A monomial ideal, stored by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    pub gens: Vec<Exponent>,
    pub num_vars: usize,
}

impl MonomialIdeal {
    pub fn new(gens: Vec<Exponent>, num_vars: usize) -> Self {
        let mut minimal: Vec<Exponent> = Vec::new();
        let mut sorted = gens;
        sorted.sort();
        sorted.dedup();
        for g in &sorted {
            if !sorted.iter().any(|h| h != g && exp_divides(h, g)) {
                minimal.push(g.clone());
            }
        }
        minimal.sort();
        MonomialIdeal { gens: minimal, num_vars }
    }

    pub fn contains(&self, m: &Exponent) -> bool {
        self.gens.iter().any(|g| exp_divides(g, m))
    }

    /// Least `k` with `x_v^k` in the ideal, if any.
    pub fn pure_power_bound(&self, v: usize) -> Option<u32> {
        self.gens
            .iter()
            .filter(|g| g.iter().enumerate().all(|(w, &x)| w == v || x == 0))
            .map(|g| g[v])
            .min()
    }

    /// Does variable `v` occur in any generator?
    pub fn uses_variable(&self, v: usize) -> bool {
        self.gens.iter().any(|g| g[v] != 0)
    }

    /// All monomials outside the ideal, supported on `active` and bounded
    /// by `bounds[k]` in the k-th active variable (inclusive).
    pub fn standard_monomials_in_box(&self, active: &[usize], bounds: &[u32]) -> Vec<Exponent> {
        assert_eq!(active.len(), bounds.len());
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.num_vars];
        self.box_rec(active, bounds, 0, &mut cur, &mut out);
        out
    }

    fn box_rec(
        &self,
        active: &[usize],
        bounds: &[u32],
        k: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Exponent>,
    ) {
        if self.contains(cur) {
            return; // monomial ideals are closed upward in each variable
        }
        if k == active.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..=bounds[k] {
            cur[active[k]] = x;
            self.box_rec(active, bounds, k + 1, cur, out);
        }
        cur[active[k]] = 0;
    }

    /// All monomials outside the ideal, supported on `active`, with total
    /// degree at most `total`.
    pub fn standard_monomials_up_to_total(&self, active: &[usize], total: u32) -> Vec<Exponent> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.num_vars];
        self.total_rec(active, total, 0, &mut cur, &mut out);
        out
    }

    fn total_rec(
        &self,
        active: &[usize],
        left: u32,
        k: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Exponent>,
    ) {
        if self.contains(cur) {
            return;
        }
        if k == active.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[active[k]] = x;
            self.total_rec(active, left - x, k + 1, cur, out);
        }
        cur[active[k]] = 0;
    }

    /// Monomials `m` outside the ideal with `x_v * m` inside for every
    /// `v` in `vars`, supported on `vars`.
    ///
    /// The search box is finite: `x_v * m` in the ideal with `m` outside
    /// forces some generator to have `x_v`-degree exactly `m_v + 1`.
    /// Returns empty when some variable in `vars` occurs in no generator.
    pub fn socle_monomials(&self, vars: &[usize]) -> Vec<Exponent> {
        if vars.iter().any(|&v| !self.uses_variable(v)) {
            return Vec::new();
        }
        let bounds: Vec<u32> = vars
            .iter()
            .map(|&v| self.gens.iter().map(|g| g[v]).max().unwrap_or(1).saturating_sub(1))
            .collect();
        self.standard_monomials_in_box(vars, &bounds)
            .into_iter()
            .filter(|m| {
                vars.iter().all(|&v| {
                    let mut up = m.clone();
                    up[v] += 1;
                    self.contains(&up)
                })
            })
            .collect()
    }
}

/// `(J : x_i)` for an ideal homogeneous under the grading in `order`.
///
/// Requires `order` to be a weighted revlex order in which `x_i` is the
/// least variable; under that hypothesis `x_i` divides an entire basis
/// element whenever it divides its leading term, and dividing those
/// elements by one power of `x_i` generates the colon ideal.
pub fn colon_by_variable(gb: &GroebnerBasis, i: usize) -> GroebnerBasis {
    debug_assert!(matches!(
        &gb.order,
        MonomialOrder::WeightedRevLex { ranking, .. } if ranking.last() == Some(&i)
    ));
    let gens: Vec<Polynomial> = gb
        .elements
        .iter()
        .map(|g| {
            if g.leading_exp()[i] > 0 {
                poly::divide_by_variable(g, i)
            } else {
                g.clone()
            }
        })
        .collect();
    buchberger(&gens, &gb.order)
}

/// `(J : x_i^inf)`: same mechanism, stripping all common powers.
pub fn saturate_by_variable_ideal(gb: &GroebnerBasis, i: usize) -> GroebnerBasis {
    let gens: Vec<Polynomial> = gb
        .elements
        .iter()
        .map(|g| poly::saturate_by_variable(g, i))
        .collect();
    buchberger(&gens, &gb.order)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("intersection generator is not divisible by the colon polynomial")]
pub struct NonDivisible;

/// `(J : f)` for `f` nonzero, via the tag-variable intersection
/// `J ∩ <f> = (t·J + (1−t)·<f>) ∩ k[x]` followed by exact division by `f`.
pub fn colon_by_polynomial(
    gens: &[Polynomial],
    f: &Polynomial,
    order: &MonomialOrder,
) -> Result<GroebnerBasis, NonDivisible> {
    assert!(!f.is_zero());
    let n = f.num_vars().max(gens.iter().map(|g| g.num_vars()).max().unwrap_or(0));
    let tag = n; // index of t
    let elim = MonomialOrder::Block { front: vec![tag], inner: Box::new(order.clone()) };
    let t = Polynomial::monomial({
        let mut e = vec![0u32; n + 1];
        e[tag] = 1;
        e
    });
    let one = Polynomial::monomial(vec![0u32; n + 1]);
    let one_minus_t = one.sub(&t, &elim);
    let mut big: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.extend_vars(1).mul(&t, &elim))
        .collect();
    big.push(f.extend_vars(1).mul(&one_minus_t, &elim));
    let gb = buchberger(&big, &elim);
    let mut quot: Vec<Polynomial> = Vec::new();
    for g in &gb.elements {
        if g.terms.iter().all(|term| term.exp[tag] == 0) {
            let h = g.truncate_vars(1);
            let q = poly::exact_divide(&h, f, order).ok_or(NonDivisible)?;
            quot.push(q);
        }
    }
    Ok(buchberger(&quot, order))
}

//! Fast membership queries over a bounded coordinate box.
//!
//! Degree scans ask millions of "is b in S?" questions with small
//! coordinates.  A dynamic-programming bitset over the box `[0,n]^d`
//! answers them in O(1) after a single linear fill; queries outside the
//! box fall back to a memoised recursion on the defining recurrence
//! `b in S  iff  b = 0 or b - a_i in S for some i`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::semigroup::{member, SElement, SemigroupDescriptor};

pub struct MembershipOracle<'a> {
    desc: &'a SemigroupDescriptor,
    /// Per-coordinate inclusive bound of the table box.
    bound: u32,
    dims: Vec<usize>,
    strides: Vec<usize>,
    table: Vec<u64>,
    overflow: Mutex<HashMap<Vec<u32>, bool>>,
}

impl<'a> MembershipOracle<'a> {
    /// Build the table for the box `[0, bound]^d`.
    pub fn new(desc: &'a SemigroupDescriptor, bound: u32) -> Self {
        let d = desc.ambient_dim;
        let dims = vec![bound as usize + 1; d];
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let total: usize = dims.iter().product();
        let mut table = vec![0u64; (total + 63) / 64];
        let gens: Vec<Vec<u32>> = desc
            .generators
            .iter()
            .map(|g| g.to_u32_coords().expect("generator coordinates fit u32"))
            .collect();
        // offset of b - a_i relative to b, valid when all coords stay in box
        let gen_offsets: Vec<usize> = gens
            .iter()
            .map(|g| g.iter().zip(&strides).map(|(&c, &s)| c as usize * s).sum())
            .collect();
        let mut coords = vec![0u32; d];
        for idx in 0..total {
            let mut hit = idx == 0;
            if !hit {
                'gen: for (g, &off) in gens.iter().zip(&gen_offsets) {
                    for (c, gc) in coords.iter().zip(g) {
                        if c < gc {
                            continue 'gen;
                        }
                    }
                    let pre = idx - off;
                    if table[pre / 64] >> (pre % 64) & 1 == 1 {
                        hit = true;
                        break;
                    }
                }
            }
            if hit {
                table[idx / 64] |= 1 << (idx % 64);
            }
            for k in (0..d).rev() {
                coords[k] += 1;
                if (coords[k] as usize) < dims[k] {
                    break;
                }
                coords[k] = 0;
            }
        }
        MembershipOracle { desc, bound, dims, strides, table, overflow: Mutex::new(HashMap::new()) }
    }

    fn table_lookup(&self, coords: &[u32]) -> bool {
        let idx: usize = coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum();
        self.table[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn contains_u32(&self, coords: &[u32]) -> bool {
        debug_assert_eq!(coords.len(), self.dims.len());
        if coords.iter().all(|&c| c <= self.bound) {
            return self.table_lookup(coords);
        }
        if let Some(&v) = self.overflow.lock().unwrap().get(coords) {
            return v;
        }
        // fall back on the recurrence; short generator lists keep this shallow
        let mut result = false;
        for g in &self.desc.generators {
            let gc = g.to_u32_coords().unwrap();
            if coords.iter().zip(&gc).all(|(c, g)| c >= g) {
                let prev: Vec<u32> = coords.iter().zip(&gc).map(|(c, g)| c - g).collect();
                if self.contains_u32(&prev) {
                    result = true;
                    break;
                }
            }
        }
        self.overflow.lock().unwrap().insert(coords.to_vec(), result);
        result
    }

    pub fn contains(&self, b: &SElement) -> bool {
        match b.to_u32_coords() {
            Some(c) => self.contains_u32(&c),
            None => member(self.desc, b).unwrap(),
        }
    }

    /// Visit every semigroup element in the table box with 1-norm at most
    /// `norm_bound`, in coordinate order, without materialising the list.
    /// Stops early (returning `true`) as soon as `visit` returns `true`.
    pub fn for_each_element_up_to_norm(
        &self,
        norm_bound: u32,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        let d = self.dims.len();
        let mut coords = vec![0u32; d];
        let total: usize = self.dims.iter().product();
        let mut norm = 0u32;
        for idx in 0..total {
            if norm <= norm_bound
                && self.table[idx / 64] >> (idx % 64) & 1 == 1
                && visit(&coords)
            {
                return true;
            }
            for k in (0..d).rev() {
                coords[k] += 1;
                norm += 1;
                if (coords[k] as usize) < self.dims[k] {
                    break;
                }
                norm -= coords[k];
                coords[k] = 0;
            }
        }
        false
    }

    /// All semigroup elements in the table box with 1-norm at most
    /// `norm_bound`.
    pub fn elements_up_to_norm(&self, norm_bound: u32) -> Vec<SElement> {
        let d = self.dims.len();
        let mut out = Vec::new();
        let mut coords = vec![0u32; d];
        let total: usize = self.dims.iter().product();
        for idx in 0..total {
            let norm: u32 = coords.iter().sum();
            if norm <= norm_bound && self.table[idx / 64] >> (idx % 64) & 1 == 1 {
                out.push(SElement::from_u32_coords(&coords));
            }
            for k in (0..d).rev() {
                coords[k] += 1;
                if (coords[k] as usize) < self.dims[k] {
                    break;
                }
                coords[k] = 0;
            }
        }
        out
    }
}

/// Membership table over the simplex `{ b : |b|_1 <= n }` instead of the
/// full box, indexed by the combinatorial rank of the coordinate vector in
/// lexicographic order.  For dimension `d` this stores `C(n + d, d)` bits,
/// a factor `d!` smaller than the box table at the same norm bound.
pub struct NormOracle<'a> {
    desc: &'a SemigroupDescriptor,
    norm_bound: u32,
    table: Vec<u64>,
    /// `binom[n][k]` for `n <= norm_bound + d`, `k <= d`.
    binom: Vec<Vec<u64>>,
    gens_u32: Vec<Vec<u32>>,
    overflow: Mutex<HashMap<Vec<u32>, bool>>,
}

impl<'a> NormOracle<'a> {
    pub fn new(desc: &'a SemigroupDescriptor, norm_bound: u32) -> Self {
        let d = desc.ambient_dim;
        let n = norm_bound as usize;
        let mut binom = vec![vec![0u64; d + 1]; n + d + 1];
        for (row, b) in binom.iter_mut().enumerate() {
            b[0] = 1;
            for k in 1..=d.min(row) {
                b[k] = b[k - 1] * ((row - k + 1) as u64) / k as u64;
            }
        }
        let total = binom[n + d][d] as usize;
        let gens_u32: Vec<Vec<u32>> = desc
            .generators
            .iter()
            .map(|g| g.to_u32_coords().expect("generator coordinates fit u32"))
            .collect();
        let gen_norms: Vec<u32> = gens_u32.iter().map(|g| g.iter().sum()).collect();
        let mut oracle = NormOracle {
            desc,
            norm_bound,
            table: vec![0u64; (total + 63) / 64],
            binom,
            gens_u32,
            overflow: Mutex::new(HashMap::new()),
        };
        // fill in lexicographic order: the rank is the loop counter, and
        // each predecessor b - a_g has a strictly smaller rank
        let mut coords = vec![0u32; d];
        let mut norm = 0u32;
        let mut prev = vec![0u32; d];
        for idx in 0..total {
            let mut hit = idx == 0;
            if !hit {
                'gen: for (g, &gn) in oracle.gens_u32.iter().zip(&gen_norms) {
                    if gn > norm {
                        continue;
                    }
                    for k in 0..d {
                        match coords[k].checked_sub(g[k]) {
                            Some(x) => prev[k] = x,
                            None => continue 'gen,
                        }
                    }
                    let r = oracle.rank(&prev);
                    if oracle.table[r / 64] >> (r % 64) & 1 == 1 {
                        hit = true;
                        break;
                    }
                }
            }
            if hit {
                oracle.table[idx / 64] |= 1 << (idx % 64);
            }
            // lexicographic successor within the simplex
            if norm < norm_bound {
                coords[d - 1] += 1;
                norm += 1;
            } else {
                // clear the tail and carry into the previous coordinate
                let mut k = d - 1;
                while k > 0 && coords[k] == 0 {
                    k -= 1;
                }
                if k == 0 && coords[0] == 0 {
                    break;
                }
                norm -= coords[k];
                coords[k] = 0;
                if k == 0 {
                    break;
                }
                coords[k - 1] += 1;
                norm += 1;
            }
        }
        oracle
    }

    /// Rank of `coords` among simplex points in lexicographic order.
    fn rank(&self, coords: &[u32]) -> usize {
        let d = coords.len();
        let n = self.norm_bound as usize;
        let mut rank = 0u64;
        let mut prefix = 0usize;
        for (i, &c) in coords.iter().enumerate() {
            let m = d - i; // remaining coordinates including this one
            let rem = n - prefix;
            // points with a smaller i-th coordinate, any tail
            rank += self.binom[rem + m][m] - self.binom[rem - c as usize + m][m];
            prefix += c as usize;
        }
        rank as usize
    }

    pub fn contains_u32(&self, coords: &[u32]) -> bool {
        let norm: u64 = coords.iter().map(|&c| c as u64).sum();
        if norm <= self.norm_bound as u64 {
            let r = self.rank(coords);
            return self.table[r / 64] >> (r % 64) & 1 == 1;
        }
        if let Some(&v) = self.overflow.lock().unwrap().get(coords) {
            return v;
        }
        let mut result = false;
        for g in &self.gens_u32 {
            if coords.iter().zip(g).all(|(c, g)| c >= g) {
                let prev: Vec<u32> = coords.iter().zip(g).map(|(c, g)| c - g).collect();
                if self.contains_u32(&prev) {
                    result = true;
                    break;
                }
            }
        }
        self.overflow.lock().unwrap().insert(coords.to_vec(), result);
        result
    }

    pub fn contains(&self, b: &SElement) -> bool {
        match b.to_u32_coords() {
            Some(c) => self.contains_u32(&c),
            None => member(self.desc, b).unwrap(),
        }
    }

    /// Visit every semigroup element of 1-norm at most `norm_bound` in
    /// lexicographic order; stops early when `visit` returns `true`.
    pub fn for_each_element(&self, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        let d = self.desc.ambient_dim;
        let n = self.norm_bound;
        let total = self.binom[n as usize + d][d] as usize;
        let mut coords = vec![0u32; d];
        let mut norm = 0u32;
        for idx in 0..total {
            if self.table[idx / 64] >> (idx % 64) & 1 == 1 && visit(&coords) {
                return true;
            }
            if norm < n {
                coords[d - 1] += 1;
                norm += 1;
            } else {
                let mut k = d - 1;
                while k > 0 && coords[k] == 0 {
                    k -= 1;
                }
                if coords[k] == 0 {
                    break;
                }
                norm -= coords[k];
                coords[k] = 0;
                if k == 0 {
                    break;
                }
                coords[k - 1] += 1;
                norm += 1;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::validate_simplicial;

    fn desc(cols: &[&[i64]]) -> SemigroupDescriptor {
        validate_simplicial(&cols.iter().map(|c| SElement::from_i64(c)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn oracle_matches_exact_membership() {
        let d = desc(&[&[2, 0], &[0, 2], &[3, 1]]);
        let oracle = MembershipOracle::new(&d, 12);
        for x in 0..16u32 {
            for y in 0..16u32 {
                let b = SElement::from_u32_coords(&[x, y]);
                assert_eq!(
                    oracle.contains(&b),
                    member(&d, &b).unwrap(),
                    "mismatch at ({x},{y})"
                );
            }
        }
    }

    #[test]
    fn oracle_numerical_semigroup() {
        // <3,5>: gaps 1,2,4,7; everything from 8 up is in
        let d = desc(&[&[3], &[5]]);
        let oracle = MembershipOracle::new(&d, 10);
        let gaps = [1u32, 2, 4, 7];
        for n in 0..=20u32 {
            assert_eq!(oracle.contains_u32(&[n]), !gaps.contains(&n), "n={n}");
        }
    }

    #[test]
    fn norm_oracle_agrees_with_box_oracle() {
        let d3 = desc(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[9, 7, 3], &[3, 9, 7], &[7, 3, 5]]);
        let box_oracle = MembershipOracle::new(&d3, 24);
        let norm_oracle = NormOracle::new(&d3, 24);
        for x in 0..=24u32 {
            for y in 0..=24 - x {
                for z in 0..=24 - x - y {
                    let c = [x, y, z];
                    assert_eq!(
                        norm_oracle.contains_u32(&c),
                        box_oracle.contains_u32(&c),
                        "mismatch at {c:?}"
                    );
                }
            }
        }
        // out-of-simplex queries fall back to the recurrence
        assert!(norm_oracle.contains_u32(&[30, 0, 0]));
        assert!(!norm_oracle.contains_u32(&[31, 0, 0]));
    }

    #[test]
    fn norm_oracle_streaming_matches_enumeration() {
        let d = desc(&[&[2, 0], &[0, 2], &[3, 1]]);
        let box_oracle = MembershipOracle::new(&d, 9);
        let norm_oracle = NormOracle::new(&d, 9);
        let mut seen = Vec::new();
        norm_oracle.for_each_element(&mut |c| {
            seen.push(SElement::from_u32_coords(c));
            false
        });
        let mut expected = box_oracle.elements_up_to_norm(9);
        expected.sort();
        seen.sort();
        assert_eq!(seen, expected);
    }

    #[test]
    fn element_enumeration() {
        let d = desc(&[&[2, 0], &[0, 2], &[1, 1]]);
        let oracle = MembershipOracle::new(&d, 4);
        let els = oracle.elements_up_to_norm(4);
        // elements of even total degree with even coordinate sum
        let expect: Vec<SElement> = [
            [0u32, 0], [0, 2], [0, 4], [1, 1], [1, 3], [2, 0], [2, 2], [3, 1], [4, 0],
        ]
        .iter()
        .map(|c| SElement::from_u32_coords(c))
        .collect();
        let mut got = els;
        got.sort();
        assert_eq!(got, expect);
    }
}

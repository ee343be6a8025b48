//! Root data of `Sp(2n, R)`, the dictionary between Harish-Chandra
//! parameters and minimal K-types, and the Blattner multiplicity formula.
//!
//! Weights are written in the basis `e_1, ..., e_n`. The compact Weyl group
//! acts by permuting coordinates. In the Blattner sum the half-integral parts
//! of `ρ_c` and `ρ_n` cancel, so every argument of `Q` is an integer vector.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive roots and half sums for `Sp(2n, R)` with the holomorphic
/// positive system. Half-integral vectors are stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystemData {
    pub n: usize,
    /// `e_i - e_j`, `i < j`, as index pairs.
    pub compact_positive: Vec<(usize, usize)>,
    /// `e_i + e_j`, `i <= j`, as index pairs.
    pub noncompact_positive: Vec<(usize, usize)>,
    pub two_rho_c: Vec<i64>,
    pub two_rho_n: Vec<i64>,
}

impl RootSystemData {
    pub fn new(n: usize) -> Self {
        let mut compact_positive = Vec::new();
        let mut noncompact_positive = Vec::new();
        for i in 0..n {
            for j in i..n {
                if i < j {
                    compact_positive.push((i, j));
                }
                noncompact_positive.push((i, j));
            }
        }
        let two_rho_c = (1..=n as i64).map(|j| n as i64 + 1 - 2 * j).collect();
        let two_rho_n = vec![n as i64 + 1; n];
        RootSystemData { n, compact_positive, noncompact_positive, two_rho_c, two_rho_n }
    }

    /// Root `e_i + e_j` as a vector.
    pub fn noncompact_vector(&self, (i, j): (usize, usize)) -> Vec<i64> {
        let mut v = vec![0; self.n];
        v[i] += 1;
        v[j] += 1;
        v
    }
}

/// `λ = (ℓ_1, ..., ℓ_n)` with `ℓ_1 > ... > ℓ_n > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct HCParameter(Vec<i64>);

impl HCParameter {
    pub fn new(l: Vec<i64>) -> Result<Self> {
        if l.is_empty() {
            return Err(Error::InvalidParameter("empty Harish-Chandra parameter".into()));
        }
        if l.windows(2).any(|w| w[0] <= w[1]) || *l.last().unwrap() <= 0 {
            return Err(Error::InvalidParameter(format!(
                "Harish-Chandra parameter must be strictly decreasing and positive, got {l:?}"
            )));
        }
        Ok(HCParameter(l))
    }

    /// The scalar parameter `(k-1, ..., k-n)`.
    pub fn scalar(n: usize, k: i64) -> Result<Self> {
        Self::new((1..=n as i64).map(|j| k - j).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl TryFrom<Vec<i64>> for HCParameter {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<HCParameter> for Vec<i64> {
    fn from(p: HCParameter) -> Self {
        p.0
    }
}

/// `k = (k_1, ..., k_n)` with `k_1 >= ... >= k_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct KTypeVector(Vec<i64>);

impl KTypeVector {
    pub fn new(k: Vec<i64>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidParameter("empty K-type".into()));
        }
        if k.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!("K-type must be weakly decreasing, got {k:?}")));
        }
        Ok(KTypeVector(k))
    }

    pub fn scalar(n: usize, k: i64) -> Self {
        KTypeVector(vec![k; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Whether all entries have the same parity.
    pub fn same_parity(&self) -> bool {
        self.0.iter().all(|k| (k - self.0[0]).rem_euclid(2) == 0)
    }
}

impl TryFrom<Vec<i64>> for KTypeVector {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<KTypeVector> for Vec<i64> {
    fn from(p: KTypeVector) -> Self {
        p.0
    }
}

impl fmt::Display for KTypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Integer weight `Σ μ_i e_i`.
pub type WeightVector = Vec<i64>;

/// `k_j = ℓ_j + j`.
pub fn hc_to_minimal_ktype(lambda: &HCParameter) -> KTypeVector {
    KTypeVector(lambda.0.iter().enumerate().map(|(j, l)| l + j as i64 + 1).collect())
}

/// `ℓ_j = k_j - j`, validated.
pub fn ktype_to_hc(k: &KTypeVector) -> Result<HCParameter> {
    HCParameter::new(k.0.iter().enumerate().map(|(j, x)| x - j as i64 - 1).collect())
}

/// All consecutive differences `ℓ_{j-1} - ℓ_j` odd.
pub fn parity_condition(lambda: &HCParameter) -> bool {
    let by_diff = lambda.0.windows(2).all(|w| (w[0] - w[1]) % 2 != 0);
    debug_assert_eq!(by_diff, hc_to_minimal_ktype(lambda).same_parity());
    by_diff
}

/// Counts of multisets of noncompact positive roots, tabulated over a box
/// `0 <= μ_i <= bound_i` by an unbounded-knapsack sweep.
#[derive(Clone, Debug)]
pub struct QCounter {
    n: usize,
    bound: Vec<usize>,
    strides: Vec<usize>,
    table: Vec<u128>,
}

impl QCounter {
    pub fn new(n: usize, bound: &[usize]) -> Self {
        assert_eq!(bound.len(), n);
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (bound[i + 1] + 1);
        }
        let size: usize = bound.iter().map(|b| b + 1).product();
        let mut table = vec![0u128; size];
        table[0] = 1;
        let roots = RootSystemData::new(n);
        let mut coord = vec![0usize; n];
        for &(i, j) in &roots.noncompact_positive {
            let shift = strides[i] + strides[j];
            let need = |c: &[usize]| if i == j { c[i] >= 2 } else { c[i] >= 1 && c[j] >= 1 };
            coord.iter_mut().for_each(|c| *c = 0);
            // Row-major increasing order visits v - root before v.
            for idx in 0..size {
                if idx > 0 {
                    let mut k = n - 1;
                    loop {
                        coord[k] += 1;
                        if coord[k] <= bound[k] {
                            break;
                        }
                        coord[k] = 0;
                        k -= 1;
                    }
                }
                if need(&coord) {
                    table[idx] += table[idx - shift];
                }
            }
        }
        QCounter { n, bound: bound.to_vec(), strides, table }
    }

    /// Q(μ); zero outside the nonnegative orthant.
    ///
    /// Panics if a coordinate exceeds the tabulated box.
    pub fn get(&self, mu: &[i64]) -> u128 {
        assert_eq!(mu.len(), self.n);
        if mu.iter().any(|&m| m < 0) {
            return 0;
        }
        let mut idx = 0;
        for (i, &m) in mu.iter().enumerate() {
            assert!(m as usize <= self.bound[i], "weight outside tabulated box");
            idx += m as usize * self.strides[i];
        }
        self.table[idx]
    }
}

/// Q(μ) via a table sized to `μ`.
pub fn q_count(mu: &[i64], n: usize) -> u128 {
    assert_eq!(mu.len(), n);
    if n == 0 {
        return 1;
    }
    if mu.iter().any(|&m| m < 0) {
        return 0;
    }
    let bound: Vec<usize> = mu.iter().map(|&m| m as usize).collect();
    QCounter::new(n, &bound).get(mu)
}

/// Q(μ) by direct recursive enumeration; exponential, used as a reference.
pub fn q_count_naive(mu: &[i64], n: usize) -> u128 {
    fn go(roots: &[Vec<i64>], rest: &mut Vec<i64>) -> u128 {
        if rest.iter().any(|&x| x < 0) {
            return 0;
        }
        let Some((first, others)) = roots.split_first() else {
            return rest.iter().all(|&x| x == 0) as u128;
        };
        let mut total = 0;
        let mut k = 0;
        loop {
            total += go(others, rest);
            k += 1;
            for (r, f) in rest.iter_mut().zip(first) {
                *r -= f;
            }
            if rest.iter().any(|&x| x < 0) {
                break;
            }
        }
        for (r, f) in rest.iter_mut().zip(first) {
            *r += k * f;
        }
        total
    }
    let rs = RootSystemData::new(n);
    let roots: Vec<Vec<i64>> = rs.noncompact_positive.iter().map(|&p| rs.noncompact_vector(p)).collect();
    go(&roots, &mut mu.to_vec())
}

/// All permutations of `0..n` paired with their signs, in lexicographic order.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| prefix[i] > prefix[j])
                .count();
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The argument of `Q` for the permutation `σ` (given as the list of
/// `σ^{-1}(i)`): coordinate `i` is `m_{σ^{-1}(i)} - σ^{-1}(i) - ℓ_i` with
/// 1-based indices.
pub fn blattner_argument(lambda: &HCParameter, m: &KTypeVector, sigma_inv: &[usize]) -> WeightVector {
    (0..lambda.n())
        .map(|i| {
            let s = sigma_inv[i];
            m.0[s] - (s as i64 + 1) - lambda.0[i]
        })
        .collect()
}

/// One signed term of the Blattner sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlattnerTerm {
    pub sigma_inv: Vec<usize>,
    pub sign: i64,
    pub argument: WeightVector,
    pub q: u128,
}

/// All terms of the alternating sum, in lexicographic order of `σ^{-1}`.
pub fn blattner_terms(lambda: &HCParameter, m: &KTypeVector) -> Result<Vec<BlattnerTerm>> {
    let n = lambda.n();
    if m.n() != n {
        return Err(Error::InvalidParameter(format!(
            "K-type has length {}, expected {n}",
            m.n()
        )));
    }
    let perms = signed_permutations(n);
    let args: Vec<WeightVector> = perms.iter().map(|(p, _)| blattner_argument(lambda, m, p)).collect();
    let mut bound = vec![0usize; n];
    for a in &args {
        if a.iter().all(|&x| x >= 0) {
            for (b, &x) in bound.iter_mut().zip(a) {
                *b = (*b).max(x as usize);
            }
        }
    }
    let counter = QCounter::new(n, &bound);
    let terms = perms
        .into_par_iter()
        .zip(args.into_par_iter())
        .map(|((sigma_inv, sign), argument)| {
            let q = counter.get(&argument);
            BlattnerTerm { sigma_inv, sign, argument, q }
        })
        .collect();
    Ok(terms)
}

/// Multiplicity of the K-type `m` in the holomorphic discrete series with
/// Harish-Chandra parameter `λ`.
pub fn blattner_multiplicity(lambda: &HCParameter, m: &KTypeVector) -> Result<i128> {
    let terms = blattner_terms(lambda, m)?;
    Ok(terms.iter().map(|t| t.sign as i128 * t.q as i128).sum())
}

/// CLI-facing result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlattnerReport {
    pub lambda: Vec<i64>,
    pub ktype: Vec<i64>,
    pub multiplicity: i128,
}

pub fn blattner_report(lambda: &HCParameter, m: &KTypeVector) -> Result<BlattnerReport> {
    Ok(BlattnerReport {
        lambda: lambda.0.clone(),
        ktype: m.0.clone(),
        multiplicity: blattner_multiplicity(lambda, m)?,
    })
}

/// Every parity-valid `λ` of length `n` with `ℓ_1 <= max_l1`.
pub fn parity_valid_parameters(n: usize, max_l1: i64) -> Vec<HCParameter> {
    fn rec(n: usize, prefix: &mut Vec<i64>, max_l1: i64, out: &mut Vec<HCParameter>) {
        if prefix.len() == n {
            out.push(HCParameter(prefix.clone()));
            return;
        }
        match prefix.last().copied() {
            None => {
                for l in (n as i64)..=max_l1 {
                    prefix.push(l);
                    rec(n, prefix, max_l1, out);
                    prefix.pop();
                }
            }
            Some(prev) => {
                let remaining = (n - prefix.len()) as i64;
                let mut l = prev - 1;
                while l >= remaining {
                    prefix.push(l);
                    rec(n, prefix, max_l1, out);
                    prefix.pop();
                    l -= 2;
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), max_l1, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hc(v: &[i64]) -> HCParameter {
        HCParameter::new(v.to_vec()).unwrap()
    }

    fn kt(v: &[i64]) -> KTypeVector {
        KTypeVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn root_counts_and_half_sums() {
        for n in 1..=4 {
            let r = RootSystemData::new(n);
            assert_eq!(r.compact_positive.len(), n * (n - 1) / 2);
            assert_eq!(r.noncompact_positive.len(), n * (n + 1) / 2);
        }
        assert_eq!(RootSystemData::new(2).two_rho_c, vec![1, -1]);
        assert_eq!(RootSystemData::new(3).two_rho_n, vec![4, 4, 4]);
    }

    #[test]
    fn dictionary_examples() {
        assert_eq!(hc_to_minimal_ktype(&HCParameter::scalar(3, 7).unwrap()), kt(&[7, 7, 7]));
        assert_eq!(hc_to_minimal_ktype(&hc(&[4, 1])), kt(&[5, 3]));
        assert_eq!(ktype_to_hc(&kt(&[5, 3])).unwrap(), hc(&[4, 1]));
        assert!(ktype_to_hc(&kt(&[3, 3, 1])).is_err());
    }

    #[test]
    fn parity_examples() {
        assert!(parity_condition(&hc(&[4, 1])));
        assert!(!parity_condition(&hc(&[3, 1])));
        assert!(parity_condition(&hc(&[6])));
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_count(&[0, 0], 2), 1);
        assert_eq!(q_count(&[2, 2], 2), 2);
        assert_eq!(q_count(&[0, 2], 2), 1);
        assert_eq!(q_count(&[2, 4], 2), 2);
        assert_eq!(q_count(&[1, 5], 2), 1);
        assert_eq!(q_count(&[-1, 3], 2), 0);
        assert_eq!(q_count(&[1, 0], 2), 0);
    }

    #[test]
    fn blattner_examples() {
        assert_eq!(blattner_multiplicity(&hc(&[4, 1]), &kt(&[5, 5])).unwrap(), 1);
        assert_eq!(blattner_multiplicity(&hc(&[4, 1]), &kt(&[7, 7])).unwrap(), 1);
        for n in 1..=4 {
            let k = 9;
            let l = HCParameter::scalar(n, k).unwrap();
            assert_eq!(blattner_multiplicity(&l, &KTypeVector::scalar(n, k)).unwrap(), 1);
        }
    }

    #[test]
    fn nonidentity_leading_index_vanishes_at_m_zero() {
        let l = hc(&[7, 4, 1]);
        let m = KTypeVector::scalar(3, 8);
        for t in blattner_terms(&l, &m).unwrap() {
            if t.sigma_inv[0] != 0 {
                assert_eq!(t.q, 0, "{t:?}");
            }
        }
    }

    #[test]
    fn enumeration_of_parameters() {
        let all = parity_valid_parameters(2, 5);
        assert!(all.contains(&hc(&[4, 1])));
        assert!(!all.contains(&hc(&[3, 1])));
        assert!(all.iter().all(parity_condition));
    }
}

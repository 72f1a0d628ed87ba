//! Weight systems of weighted homogeneous hypersurface germs and their
//! k-Du Bois / k-rational / k-liminal classification.
//!
//! A germ `{f = 0} ⊂ C^{n+1}` with f weighted homogeneous of degree `d` for
//! weights `a_1..a_{n+1}` is classified purely by the weight sum
//! `s = Σ a_i / d`: it is k-Du Bois iff `s ≥ k + 1`, k-rational iff
//! `s > k + 1` and k-liminal iff `s = k + 1`. Everything here is exact integer
//! or rational arithmetic.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Q64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("a weight system needs at least 4 variables (n >= 3), got {0}")]
    TooFewVariables(usize),
    #[error("weights must be positive")]
    ZeroWeight,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("degree 1 hypersurfaces are smooth")]
    Smooth,
    #[error("no monomial of degree {degree} exists for weights {weights:?}")]
    NoMonomials { weights: Vec<u64>, degree: u64 },
    #[error("exponent {0} is below 2")]
    InvalidExponent(u64),
    #[error("level k = {k} outside 1..={max} for n = {n}")]
    OutOfRange { n: u64, k: u64, max: u64 },
    #[error("weight system is not k-liminal (weight sum {0})")]
    NotLiminal(String),
}

/// Informational properties that do not invalidate a weight system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Some `a_i >= d`; the germ may be smooth.
    NotGenuinelySingular,
    /// Some `n` of the `n + 1` weights share a common factor.
    NotWellFormed,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::NotGenuinelySingular => "not_genuinely_singular",
            Flag::NotWellFormed => "not_well_formed",
        }
    }
}

/// Weights `a_1..a_{n+1}` and degree `d`, normalized so that
/// `gcd(a_1, .., a_{n+1}, d) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawWeightSystem", into = "RawWeightSystem")]
pub struct WeightSystem {
    weights: Vec<u64>,
    degree: u64,
}

#[derive(Serialize, Deserialize)]
struct RawWeightSystem {
    weights: Vec<u64>,
    degree: u64,
}

impl TryFrom<RawWeightSystem> for WeightSystem {
    type Error = WeightError;
    fn try_from(raw: RawWeightSystem) -> Result<Self, WeightError> {
        WeightSystem::new(raw.weights, raw.degree)
    }
}

impl From<WeightSystem> for RawWeightSystem {
    fn from(ws: WeightSystem) -> Self {
        RawWeightSystem {
            weights: ws.weights,
            degree: ws.degree,
        }
    }
}

impl WeightSystem {
    pub fn new(weights: Vec<u64>, degree: u64) -> Result<Self, WeightError> {
        if weights.len() < 4 {
            return Err(WeightError::TooFewVariables(weights.len()));
        }
        if weights.contains(&0) {
            return Err(WeightError::ZeroWeight);
        }
        if degree == 0 {
            return Err(WeightError::ZeroDegree);
        }
        let g = weights.iter().fold(degree, |g, &a| g.gcd(&a));
        let weights: Vec<u64> = weights.iter().map(|a| a / g).collect();
        let degree = degree / g;
        if degree == 1 {
            return Err(WeightError::Smooth);
        }
        if weights.iter().fold(0, |g, &a| g.gcd(&a)) != 1 {
            return Err(WeightError::NoMonomials { weights, degree });
        }
        Ok(Self { weights, degree })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Dimension of the germ; the ambient space is `C^{n+1}`.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weight_total(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// `Σ a_i / d`.
    pub fn weight_sum(&self) -> Q64 {
        Q64::new(self.weight_total() as i64, self.degree as i64)
    }

    /// The rational weight `a_i / d`.
    pub fn weight(&self, i: usize) -> Q64 {
        Q64::new(self.weights[i] as i64, self.degree as i64)
    }

    pub fn is_genuinely_singular(&self) -> bool {
        self.weights.iter().all(|&a| a < self.degree)
    }

    /// No `n` of the weights share a common factor.
    pub fn is_well_formed(&self) -> bool {
        (0..self.weights.len()).all(|skip| {
            self.weights
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .fold(0u64, |g, (_, &a)| g.gcd(&a))
                == 1
        })
    }

    pub fn flags(&self) -> Vec<Flag> {
        let mut flags = Vec::new();
        if !self.is_genuinely_singular() {
            flags.push(Flag::NotGenuinelySingular);
        }
        if !self.is_well_formed() {
            flags.push(Flag::NotWellFormed);
        }
        flags
    }

    /// Same system with weights sorted ascending.
    pub fn sorted(&self) -> WeightSystem {
        let mut weights = self.weights.clone();
        weights.sort_unstable();
        WeightSystem {
            weights,
            degree: self.degree,
        }
    }

    /// Parses `a1,a2,...:d`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let (w, d) = text
            .split_once(':')
            .ok_or_else(|| format!("expected weights:degree, got {text:?}"))?;
        let weights = parse_list(w)?;
        let degree = d.trim().parse().map_err(|_| format!("bad degree {d:?}"))?;
        WeightSystem::new(weights, degree).map_err(|e| e.to_string())
    }
}

impl std::fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "{}:{}", w.join(","), self.degree)
    }
}

pub fn parse_list(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| format!("bad integer {t:?}")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Classification {
    #[serde(with = "q64_string")]
    pub weight_sum: Q64,
    pub max_du_bois: Option<i64>,
    pub max_rational: Option<i64>,
    pub liminal_k: Option<i64>,
}

impl Classification {
    /// Classification determined by an exact weight sum (equivalently the
    /// minimal spectral number).
    pub fn from_weight_sum(s: Q64) -> Self {
        let floor = s.floor().to_integer();
        let ceil = s.ceil().to_integer();
        let max_du_bois = (floor >= 1).then_some(floor - 1);
        let max_rational = (ceil - 2 >= 0).then_some(ceil - 2);
        let liminal_k = (s.is_integer() && floor >= 1).then_some(floor - 1);
        Self {
            weight_sum: s,
            max_du_bois,
            max_rational,
            liminal_k,
        }
    }

    pub fn is_du_bois(&self, k: i64) -> bool {
        self.max_du_bois.is_some_and(|m| m >= k)
    }

    pub fn is_rational(&self, k: i64) -> bool {
        self.max_rational.is_some_and(|m| m >= k)
    }
}

pub(crate) mod q64_string {
    use crate::rational::{format_q64, parse_q64, Q64};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q64(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q64, D::Error> {
        let text = String::deserialize(d)?;
        parse_q64(&text).map_err(serde::de::Error::custom)
    }
}

pub fn classify(ws: &WeightSystem) -> Classification {
    Classification::from_weight_sum(ws.weight_sum())
}

/// Twists and discrepancies attached to a k-liminal weight system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Numerology {
    pub k: i64,
    /// `Σ a_i - d`; the canonical bundle of the exceptional divisor is `O(-N)`.
    #[serde(rename = "N")]
    pub canonical_degree: i64,
    /// `d (k - 1)`: the twist at which the log forms acquire their H^1.
    #[serde(rename = "a")]
    pub top_twist: i64,
    /// `d k - 1`: coefficient of the exceptional divisor in the canonical class of the weighted blowup.
    #[serde(rename = "r")]
    pub discrepancy: i64,
    /// `d - Σ a_i`, the degree of the exceptional canonical bundle.
    #[serde(rename = "kE_degree")]
    pub ke_degree: i64,
    #[serde(rename = "kX_coefficient")]
    pub kx_coefficient: i64,
}

pub fn numerology(ws: &WeightSystem) -> Result<Numerology, WeightError> {
    let class = classify(ws);
    let k = class
        .liminal_k
        .ok_or_else(|| WeightError::NotLiminal(crate::rational::format_q64(&class.weight_sum)))?;
    let d = ws.degree() as i64;
    let total = ws.weight_total() as i64;
    let canonical_degree = total - d;
    let top_twist = d * (k - 1);
    let discrepancy = d * k - 1;
    let num = Numerology {
        k,
        canonical_degree,
        top_twist,
        discrepancy,
        ke_degree: d - total,
        kx_coefficient: discrepancy,
    };
    assert_eq!(num.canonical_degree, d * k);
    assert_eq!(num.top_twist, num.canonical_degree - d);
    assert_eq!(num.discrepancy, num.canonical_degree - 1);
    assert_eq!(num.ke_degree, -d * k);
    Ok(num)
}

/// Exponents of a Brieskorn-Pham polynomial with an isolated k-liminal
/// singularity in dimension `n`, sorted ascending.
pub fn diagonal_family(n: u64, k: u64) -> Result<Vec<u64>, WeightError> {
    let max = n.saturating_sub(1) / 2;
    if n < 3 || k < 1 || k > max {
        return Err(WeightError::OutOfRange { n, k, max });
    }
    let len = (n + 1) as usize;
    let mut e = Vec::with_capacity(len);
    if n % 2 == 1 {
        // n = 2h + 1: 2l twos, the rest equal to h + 1 - l, l = k - 1.
        let h = (n - 1) / 2;
        let l = k - 1;
        e.extend(std::iter::repeat_n(2, 2 * l as usize));
        e.extend(std::iter::repeat_n(h + 1 - l, len - 2 * l as usize));
    } else {
        let h = n / 2;
        if k == 1 {
            e.extend(std::iter::repeat_n(h, len - 2));
            e.extend([2 * h, 2 * h]);
        } else {
            // 2l - 1 twos, two fours, the rest equal to h - l, l = k - 1.
            let l = k - 1;
            e.extend(std::iter::repeat_n(2, 2 * l as usize - 1));
            e.extend([4, 4]);
            e.extend(std::iter::repeat_n(h - l, len - 2 * l as usize - 1));
        }
    }
    e.sort_unstable();
    Ok(e)
}

/// `d = lcm(e_i)`, `a_i = d / e_i`.
pub fn weight_system_from_exponents(exponents: &[u64]) -> Result<WeightSystem, WeightError> {
    if let Some(&bad) = exponents.iter().find(|&&e| e < 2) {
        return Err(WeightError::InvalidExponent(bad));
    }
    let d = exponents.iter().fold(1u64, |l, &e| l.lcm(&e));
    WeightSystem::new(exponents.iter().map(|e| d / e).collect(), d)
}

/// The level k for which the cone over a smooth degree-`d` hypersurface in
/// `P^n` is k-liminal, i.e. `n + 1 = d (k + 1)` with `k >= 1`.
pub fn cone_liminal_level(n: u64, d: u64) -> Option<u64> {
    if d == 0 || !(n + 1).is_multiple_of(d) {
        return None;
    }
    let k = (n + 1) / d;
    (k >= 2).then(|| k - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// `d / a_i` is an integer `>= 2` for every i: the Fermat polynomial works.
    Certified,
    /// Every variable has a monomial `z_i^m` or `z_i^m z_j` of degree d.
    Candidate,
    Rejected,
}

impl Certification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certification::Certified => "certified",
            Certification::Candidate => "candidate",
            Certification::Rejected => "rejected",
        }
    }
}

pub fn quasismooth_candidate_check(ws: &WeightSystem) -> Certification {
    let d = ws.degree();
    let a = ws.weights();
    if a.iter().all(|&ai| d.is_multiple_of(ai) && d / ai >= 2) {
        return Certification::Certified;
    }
    let covered = |i: usize| {
        let ai = a[i];
        if d.is_multiple_of(ai) {
            return true;
        }
        a.iter().enumerate().any(|(j, &aj)| {
            j != i && aj < d && (d - aj).is_multiple_of(ai)
        })
    };
    if (0..a.len()).all(covered) {
        Certification::Candidate
    } else {
        Certification::Rejected
    }
}

/// Exponents of the Fermat polynomial realizing a certified system.
pub fn diagonal_exponents(ws: &WeightSystem) -> Option<Vec<u64>> {
    (quasismooth_candidate_check(ws) == Certification::Certified)
        .then(|| ws.weights().iter().map(|a| ws.degree() / a).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(w: &[u64], d: u64) -> WeightSystem {
        WeightSystem::new(w.to_vec(), d).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&ws(&[1, 1, 1, 1], 2)).liminal_k, Some(1));
        let c = classify(&ws(&[1, 1, 1, 1, 1], 2));
        assert_eq!(c.liminal_k, None);
        assert_eq!(c.max_rational, Some(1));
        assert_eq!(c.max_du_bois, Some(1));
        assert_eq!(c.weight_sum, Q64::new(5, 2));
        assert_eq!(classify(&ws(&[1; 6], 2)).liminal_k, Some(2));
        let zero = classify(&ws(&[1; 5], 5));
        assert_eq!(zero.liminal_k, Some(0));
        assert_eq!(zero.max_du_bois, Some(0));
        assert_eq!(zero.max_rational, None);
        let below = classify(&ws(&[1; 4], 5));
        assert_eq!((below.max_du_bois, below.max_rational, below.liminal_k), (None, None, None));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(WeightSystem::new(vec![1, 1, 1], 2), Err(WeightError::TooFewVariables(3)));
        assert_eq!(WeightSystem::new(vec![1, 1, 1, 1], 1), Err(WeightError::Smooth));
        assert_eq!(WeightSystem::new(vec![2, 2, 2, 2], 2), Err(WeightError::Smooth));
        assert_eq!(WeightSystem::new(vec![0, 1, 1, 1], 2), Err(WeightError::ZeroWeight));
        assert!(matches!(
            WeightSystem::new(vec![2, 2, 2, 2], 3),
            Err(WeightError::NoMonomials { .. })
        ));
        let norm = ws(&[2, 2, 2, 2], 4);
        assert_eq!((norm.weights(), norm.degree()), (&[1u64, 1, 1, 1][..], 2));
    }

    #[test]
    fn flags() {
        assert!(ws(&[1, 1, 1, 1], 2).flags().is_empty());
        assert_eq!(ws(&[1, 1, 1, 3], 3).flags(), vec![Flag::NotGenuinelySingular]);
        // 3 of the 4 weights share the factor 2.
        assert_eq!(ws(&[2, 2, 2, 1], 4).flags(), vec![Flag::NotWellFormed]);
    }

    #[test]
    fn numerology_examples() {
        let n = numerology(&ws(&[1, 1, 1, 1], 2)).unwrap();
        assert_eq!((n.canonical_degree, n.top_twist, n.discrepancy), (2, 0, 1));
        let n = numerology(&ws(&[1; 6], 2)).unwrap();
        assert_eq!((n.canonical_degree, n.top_twist, n.discrepancy), (4, 2, 3));
        assert_eq!(n.ke_degree, -4);
        let n = numerology(&ws(&[1; 6], 3)).unwrap();
        assert_eq!((n.canonical_degree, n.top_twist, n.discrepancy), (3, 0, 2));
        assert!(matches!(numerology(&ws(&[1; 5], 2)), Err(WeightError::NotLiminal(_))));
    }

    #[test]
    fn family_examples() {
        assert_eq!(diagonal_family(5, 1).unwrap(), vec![3; 6]);
        assert_eq!(diagonal_family(4, 1).unwrap(), vec![2, 2, 2, 4, 4]);
        for k in 1..=5 {
            assert_eq!(diagonal_family(2 * k + 1, k).unwrap(), vec![2; 2 * k as usize + 2]);
        }
        assert!(matches!(diagonal_family(4, 2), Err(WeightError::OutOfRange { .. })));
        assert!(matches!(diagonal_family(5, 0), Err(WeightError::OutOfRange { .. })));
        assert!(matches!(diagonal_family(2, 1), Err(WeightError::OutOfRange { .. })));
    }

    #[test]
    fn from_exponents() {
        assert_eq!(weight_system_from_exponents(&[3; 6]).unwrap(), ws(&[1; 6], 3));
        assert_eq!(weight_system_from_exponents(&[2, 2, 2, 4, 4]).unwrap(), ws(&[2, 2, 2, 1, 1], 4));
        assert_eq!(weight_system_from_exponents(&[2; 4]).unwrap(), ws(&[1; 4], 2));
        assert_eq!(weight_system_from_exponents(&[2, 1, 2, 2]), Err(WeightError::InvalidExponent(1)));
    }

    #[test]
    fn cone_levels() {
        assert_eq!(cone_liminal_level(5, 3), Some(1));
        assert_eq!(cone_liminal_level(3, 2), Some(1));
        assert_eq!(cone_liminal_level(4, 2), None);
        assert_eq!(cone_liminal_level(5, 6), None);
    }

    #[test]
    fn certification() {
        assert_eq!(quasismooth_candidate_check(&ws(&[1, 1, 1, 1], 2)), Certification::Certified);
        assert_eq!(quasismooth_candidate_check(&ws(&[2, 2, 2, 1, 1], 4)), Certification::Certified);
        // z1 (weight 3) has no monomial z1^m or z1^m zj of degree 5: the cone is
        // singular along the z1-axis.
        assert_eq!(quasismooth_candidate_check(&ws(&[3, 1, 1, 1], 5)), Certification::Rejected);
        // z1^2 z2 has degree 5.
        assert_eq!(quasismooth_candidate_check(&ws(&[2, 1, 1, 1], 5)), Certification::Candidate);
    }
}

//! Milnor number, spectrum and Hodge pieces of Brieskorn-Pham singularities
//! `z_1^{e_1} + ... + z_{n+1}^{e_{n+1}}`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_q64, Q64};
use crate::weights::{weight_system_from_exponents, Classification, WeightError, WeightSystem};

pub const DEFAULT_MU_CAP: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("Milnor number {mu} exceeds the cap {cap}")]
    CapExceeded { mu: u128, cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalSingularity {
    exponents: Vec<u64>,
    ws: WeightSystem,
}

impl DiagonalSingularity {
    pub fn new(exponents: Vec<u64>) -> Result<Self, WeightError> {
        let ws = weight_system_from_exponents(&exponents)?;
        Ok(Self { exponents, ws })
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn weight_system(&self) -> &WeightSystem {
        &self.ws
    }

    pub fn n(&self) -> usize {
        self.exponents.len() - 1
    }

    /// `Π (e_i - 1)`.
    pub fn milnor_number(&self) -> u128 {
        self.exponents
            .iter()
            .fold(1u128, |acc, &e| acc.saturating_mul((e - 1) as u128))
    }

    /// Coefficients of `Π_i (t^{w_i} + t^{2 w_i} + ... + t^{(e_i - 1) w_i})`
    /// in the variable `t^{1/D}`, `D = lcm(e_i)`.
    fn generating_polynomial(&self) -> (u64, Vec<u128>) {
        let denom = self.exponents.iter().fold(1u64, |l, &e| l.lcm(&e));
        let mut poly = vec![1u128];
        for &e in &self.exponents {
            let step = (denom / e) as usize;
            let mut next = vec![0u128; poly.len() + step * (e as usize - 1)];
            for (i, &c) in poly.iter().enumerate().filter(|(_, c)| **c != 0) {
                for j in 1..e as usize {
                    next[i + j * step] += c;
                }
            }
            poly = next;
        }
        (denom, poly)
    }

    pub fn spectrum(&self, cap: u128) -> Result<SpectrumMultiset, SpectrumError> {
        let mu = self.milnor_number();
        if mu > cap {
            return Err(SpectrumError::CapExceeded { mu, cap });
        }
        let (denom, poly) = self.generating_polynomial();
        let entries = poly
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, &c)| (Q64::new(i as i64, denom as i64), c as u64))
            .collect();
        Ok(SpectrumMultiset {
            n: self.n(),
            entries,
            total: mu as u64,
        })
    }

    /// The smallest spectral number, read off the generating polynomial.
    pub fn min_spectral_number(&self) -> Q64 {
        let (denom, poly) = self.generating_polynomial();
        let i = poly.iter().position(|&c| c != 0).expect("nonzero product");
        Q64::new(i as i64, denom as i64)
    }

    pub fn classify_from_spectrum(&self) -> Classification {
        Classification::from_weight_sum(self.min_spectral_number())
    }
}

/// Spectral numbers with multiplicities, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumMultiset {
    pub n: usize,
    pub entries: BTreeMap<Q64, u64>,
    pub total: u64,
}

impl SpectrumMultiset {
    pub fn multiplicity(&self, s: Q64) -> u64 {
        self.entries.get(&s).copied().unwrap_or(0)
    }

    pub fn min(&self) -> Option<(Q64, u64)> {
        self.entries.iter().next().map(|(s, m)| (*s, *m))
    }

    pub fn max(&self) -> Option<(Q64, u64)> {
        self.entries.iter().next_back().map(|(s, m)| (*s, *m))
    }

    /// `dim Gr_F^p H^n(M)`: spectral numbers in `(n - p, n - p + 1]`.
    pub fn gr_f_milnor(&self, p: i64) -> u64 {
        let target = self.n as i64 + 1 - p;
        self.entries
            .iter()
            .filter(|(s, _)| s.ceil().to_integer() == target)
            .map(|(_, m)| m)
            .sum()
    }

    /// `dim Gr_F^p H^n(L)`: multiplicity of the integer spectral number `n - p + 1`.
    pub fn gr_f_link(&self, p: i64) -> u64 {
        self.multiplicity(Q64::from_integer(self.n as i64 + 1 - p))
    }

    pub fn is_symmetric(&self) -> bool {
        let top = Q64::from_integer(self.n as i64 + 1);
        self.entries
            .iter()
            .all(|(s, m)| self.multiplicity(top - s) == *m)
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            mu: self.total,
            spectrum: self
                .entries
                .iter()
                .map(|(s, m)| (format_q64(s), *m))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub mu: u64,
    pub spectrum: Vec<(String, u64)>,
}

pub fn milnor_number(sing: &DiagonalSingularity) -> u128 {
    sing.milnor_number()
}

pub fn spectrum(sing: &DiagonalSingularity) -> Result<SpectrumMultiset, SpectrumError> {
    sing.spectrum(DEFAULT_MU_CAP)
}

pub fn gr_f_milnor(sing: &DiagonalSingularity, p: i64) -> Result<u64, SpectrumError> {
    Ok(spectrum(sing)?.gr_f_milnor(p))
}

pub fn gr_f_link(sing: &DiagonalSingularity, p: i64) -> Result<u64, SpectrumError> {
    Ok(spectrum(sing)?.gr_f_link(p))
}

pub fn classify_from_spectrum(sing: &DiagonalSingularity) -> Classification {
    sing.classify_from_spectrum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sing(e: &[u64]) -> DiagonalSingularity {
        DiagonalSingularity::new(e.to_vec()).unwrap()
    }

    #[test]
    fn milnor_numbers() {
        assert_eq!(sing(&[2, 2, 2, 2]).milnor_number(), 1);
        assert_eq!(sing(&[3; 6]).milnor_number(), 64);
        assert_eq!(sing(&[2, 2, 2, 4, 4]).milnor_number(), 9);
    }

    #[test]
    fn spectra() {
        let s = spectrum(&sing(&[2, 2, 2, 2])).unwrap();
        assert_eq!(s.entries, BTreeMap::from([(Q64::from_integer(2), 1)]));
        let s = spectrum(&sing(&[3; 6])).unwrap();
        assert_eq!(s.min(), Some((Q64::from_integer(2), 1)));
        assert_eq!(s.max(), Some((Q64::from_integer(4), 1)));
        assert_eq!(s.total, 64);
        assert_eq!(s.entries.values().sum::<u64>(), 64);
        let s = spectrum(&sing(&[2, 2, 2, 4, 4])).unwrap();
        assert_eq!(s.min(), Some((Q64::from_integer(2), 1)));
        assert!(s.is_symmetric());
    }

    #[test]
    fn cap() {
        let e = sing(&[3; 6]);
        assert_eq!(e.spectrum(63), Err(SpectrumError::CapExceeded { mu: 64, cap: 63 }));
    }

    #[test]
    fn hodge_pieces() {
        assert_eq!(gr_f_milnor(&sing(&[2; 4]), 2).unwrap(), 1);
        let cubic = sing(&[3; 6]);
        assert_eq!(gr_f_milnor(&cubic, 0).unwrap(), 0);
        assert_eq!(gr_f_milnor(&cubic, 1).unwrap(), 0);
        assert_eq!(gr_f_milnor(&cubic, 4).unwrap(), 1);
        assert_eq!(gr_f_link(&sing(&[2; 6]), 3).unwrap(), 1);
        assert_eq!(gr_f_link(&cubic, 4).unwrap(), 1);
        assert_eq!(gr_f_link(&sing(&[2; 5]), 3).unwrap(), 0);
    }

    #[test]
    fn classification_from_spectrum() {
        assert_eq!(classify_from_spectrum(&sing(&[2; 4])).liminal_k, Some(1));
        assert_eq!(classify_from_spectrum(&sing(&[2, 2, 2, 4, 4])).liminal_k, Some(1));
        assert_eq!(classify_from_spectrum(&sing(&[2; 5])).liminal_k, None);
    }

    #[test]
    fn json_sorted() {
        let j = spectrum(&sing(&[3; 6])).unwrap().to_json();
        assert_eq!(j.mu, 64);
        assert_eq!(j.spectrum[0], ("2/1".to_string(), 1));
        assert_eq!(j.spectrum.last().unwrap(), &("4/1".to_string(), 1));
    }
}

//! Graded cohomology on a quasi-smooth hypersurface `E ⊂ WP^n`.
//!
//! Line bundles `O_E(m)` have `H^0 = (S/f)_m`, `H^{n-1}` dual to
//! `(S/f)_{K-m}` with `K = d - Σa_i`, and nothing in between. A short complex
//! of sums of line bundles (a monad) therefore has a hypercohomology spectral
//! sequence with only two nonzero rows. The bottom row is computed from the
//! ranks of the maps on `H^0`; the top row from the ranks of the transposed
//! maps on the Serre-dual pieces. When the complex has at most `n` terms no
//! differential connects the rows and the answer is exact.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rank_rational_rows, SparseRow};
use crate::poly::{monomial_count, monomials_of_degree, GradedRing, Monomial, NormalForms, Poly};
use crate::weights::{diagonal_exponents, WeightError, WeightSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("the defining polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial has {found} variables, expected {expected}")]
    WrongVariableCount { expected: usize, found: usize },
    #[error("polynomial is not weighted homogeneous of degree {expected}")]
    NotHomogeneous { expected: u64 },
    #[error("weight system {0} has no diagonal (Fermat) member")]
    NoFermatMember(String),
    #[error("entry ({row}, {col}) of map {map} should have degree {expected}")]
    DegreeMismatch {
        map: usize,
        row: usize,
        col: usize,
        expected: i64,
    },
    #[error("complex shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("maps {first} and {second} do not compose to zero modulo f")]
    NotAComplex { first: usize, second: usize },
    #[error("complex of length {length} is too long for ambient dimension {n}")]
    ComplexTooLong { length: usize, n: usize },
    #[error("complex is not exact away from its middle term (total degree {degree})")]
    NotExactAtEnds { degree: usize },
    #[error("form degree {p} must be n-1 or n-2 (n = {n})")]
    FormDegree { p: usize, n: usize },
    #[error("the Jacobian ideal does not have finite colength")]
    NotIsolated,
}

/// Dimensions `h^0 .. h^{n-1}`, with bounds when a connecting map was not forced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub h: Vec<u64>,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<u64>>,
}

impl CohomologyTable {
    pub fn exact(h: Vec<u64>) -> Self {
        Self {
            h,
            exact: true,
            lower: None,
            upper: None,
        }
    }

    pub fn get(&self, j: usize) -> u64 {
        self.h.get(j).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(|&x| x == 0)
    }

    /// True when `h^j = 0` for every `j <= top`.
    pub fn vanishes_through(&self, top: usize) -> bool {
        self.h.iter().take(top + 1).all(|&x| x == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.h
            .iter()
            .enumerate()
            .map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct GradedHypersurface {
    ws: WeightSystem,
    f: Poly,
    ring: GradedRing,
    diagonal: Option<Vec<u64>>,
}

impl GradedHypersurface {
    pub fn new(ws: WeightSystem, f: Poly) -> Result<Self, CohomologyError> {
        if f.is_zero() {
            return Err(CohomologyError::ZeroPolynomial);
        }
        let nvars = ws.weights().len();
        if let Some((m, _)) = f.terms().find(|(m, _)| m.0.len() != nvars) {
            return Err(CohomologyError::WrongVariableCount {
                expected: nvars,
                found: m.0.len(),
            });
        }
        if f.homogeneous_degree(ws.weights()) != Some(ws.degree()) {
            return Err(CohomologyError::NotHomogeneous {
                expected: ws.degree(),
            });
        }
        let diagonal = detect_diagonal(&f, nvars);
        let ring = GradedRing::quotient(ws.weights().to_vec(), f.clone());
        Ok(Self {
            ws,
            f,
            ring,
            diagonal,
        })
    }

    /// The Fermat member `Σ z_i^{d/a_i}`.
    pub fn fermat(ws: WeightSystem) -> Result<Self, CohomologyError> {
        let e = diagonal_exponents(&ws).ok_or_else(|| CohomologyError::NoFermatMember(ws.to_string()))?;
        Self::new(ws, Poly::fermat(&e))
    }

    pub fn from_exponents(exponents: &[u64]) -> Result<Self, CohomologyError> {
        let ws = crate::weights::weight_system_from_exponents(exponents)?;
        Self::new(ws, Poly::fermat(exponents))
    }

    pub fn weight_system(&self) -> &WeightSystem {
        &self.ws
    }

    pub fn polynomial(&self) -> &Poly {
        &self.f
    }

    pub fn weights(&self) -> &[u64] {
        self.ws.weights()
    }

    pub fn degree(&self) -> i64 {
        self.ws.degree() as i64
    }

    /// Dimension of the ambient weighted projective space.
    pub fn n(&self) -> usize {
        self.ws.n()
    }

    pub fn nvars(&self) -> usize {
        self.ws.weights().len()
    }

    /// `K = d - Σa_i`, so that `ω_E = O_E(K)`.
    pub fn canonical_twist(&self) -> i64 {
        self.degree() - self.ws.weight_total() as i64
    }

    /// Exponents when `f` is a sum of pure powers of distinct variables.
    pub fn diagonal_exponents(&self) -> Option<&[u64]> {
        self.diagonal.as_deref()
    }

    /// `dim (S/f)_m`.
    pub fn h0(&self, m: i64) -> u64 {
        monomial_count(self.weights(), m) - monomial_count(self.weights(), m - self.degree())
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    /// Quasi-smoothness: certified for diagonal `f`, otherwise tested by
    /// finiteness of the Jacobian ring.
    pub fn is_quasismooth(&self) -> bool {
        self.diagonal.is_some() || graded_T1(self).is_ok()
    }
}

fn detect_diagonal(f: &Poly, nvars: usize) -> Option<Vec<u64>> {
    if f.len() != nvars {
        return None;
    }
    let mut e = vec![0u64; nvars];
    for (m, _) in f.terms() {
        let support: Vec<usize> = (0..nvars).filter(|&i| m.0[i] > 0).collect();
        let &[i] = &support[..] else { return None };
        if m.0[i] < 2 || e[i] != 0 {
            return None;
        }
        e[i] = m.0[i] as u64;
    }
    Some(e)
}

/// Cohomology of `O_WP(m)` on weighted projective space.
pub fn h_line_wp(ws: &WeightSystem, m: i64) -> CohomologyTable {
    let n = ws.n();
    let mut h = vec![0; n + 1];
    h[0] = monomial_count(ws.weights(), m);
    h[n] = monomial_count(ws.weights(), -m - ws.weight_total() as i64);
    CohomologyTable::exact(h)
}

/// Cohomology of `O_E(m)`.
#[allow(non_snake_case)]
pub fn h_line_E(hyp: &GradedHypersurface, m: i64) -> CohomologyTable {
    let n = hyp.n();
    let mut h = vec![0; n];
    h[0] = hyp.h0(m);
    h[n - 1] += hyp.h0(hyp.canonical_twist() - m);
    CohomologyTable::exact(h)
}

/// A map `⊕_j O_E(source_j) → ⊕_i O_E(target_i)`, `entries[i][j]` of degree
/// `target_i - source_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistMap {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub entries: Vec<Vec<Poly>>,
}

impl TwistMap {
    fn check_degrees(&self, weights: &[u64], map: usize) -> Result<(), CohomologyError> {
        if self.entries.len() != self.target.len()
            || self.entries.iter().any(|r| r.len() != self.source.len())
        {
            return Err(CohomologyError::ShapeMismatch(format!(
                "map {map} is not {}x{}",
                self.target.len(),
                self.source.len()
            )));
        }
        for (row, (t, entries)) in self.target.iter().zip(&self.entries).enumerate() {
            for (col, (s, g)) in self.source.iter().zip(entries).enumerate() {
                let expected = t - s;
                let ok = g.is_zero()
                    || (expected >= 0 && g.homogeneous_degree(weights) == Some(expected as u64));
                if !ok {
                    return Err(CohomologyError::DegreeMismatch {
                        map,
                        row,
                        col,
                        expected,
                    });
                }
            }
        }
        Ok(())
    }
}

/// A complex of sums of line bundles on `E` with polynomial maps.
#[derive(Debug, Clone)]
pub struct LineBundleComplex {
    terms: Vec<Vec<i64>>,
    maps: Vec<TwistMap>,
}

impl LineBundleComplex {
    /// `maps[s]` goes from `terms[s]` to `terms[s + 1]`.
    pub fn new(
        hyp: &GradedHypersurface,
        terms: Vec<Vec<i64>>,
        maps: Vec<Vec<Vec<Poly>>>,
    ) -> Result<Self, CohomologyError> {
        if terms.is_empty() || maps.len() + 1 != terms.len() {
            return Err(CohomologyError::ShapeMismatch(format!(
                "{} terms need {} maps, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                maps.len()
            )));
        }
        let maps: Vec<TwistMap> = maps
            .into_iter()
            .enumerate()
            .map(|(s, entries)| TwistMap {
                source: terms[s].clone(),
                target: terms[s + 1].clone(),
                entries,
            })
            .collect();
        for (s, map) in maps.iter().enumerate() {
            map.check_degrees(hyp.weights(), s)?;
        }
        for s in 1..maps.len() {
            let (first, second) = (&maps[s - 1], &maps[s]);
            for row in &second.entries {
                for j in 0..first.source.len() {
                    let mut sum = Poly::zero();
                    for (l, g) in row.iter().enumerate() {
                        sum = sum.add(&g.mul(&first.entries[l][j]));
                    }
                    if !hyp.ring().is_zero_mod(&sum) {
                        return Err(CohomologyError::NotAComplex {
                            first: s - 1,
                            second: s,
                        });
                    }
                }
            }
        }
        Ok(Self { terms, maps })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Vec<i64>] {
        &self.terms
    }

    pub fn maps(&self) -> &[TwistMap] {
        &self.maps
    }
}

/// The degree-`m` piece of a map between sums of `S/f` twists.
#[derive(Debug, Clone)]
pub struct GradedMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<SparseRow<BigRational>>,
}

impl GradedMatrix {
    pub fn rank(&self) -> usize {
        rank_rational_rows(&self.columns)
    }
}

fn basis_index(ring: &GradedRing, degrees: &[i64]) -> (Vec<Vec<Monomial>>, Vec<HashMap<Monomial, usize>>, usize) {
    let mut offset = 0;
    let mut bases = Vec::with_capacity(degrees.len());
    let mut index = Vec::with_capacity(degrees.len());
    for &deg in degrees {
        let basis = ring.basis(deg);
        let map: HashMap<Monomial, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), offset + i))
            .collect();
        offset += basis.len();
        bases.push(basis);
        index.push(map);
    }
    (bases, index, offset)
}

/// Matrix of `⊕_j (S/f)_{src_j} → ⊕_i (S/f)_{tgt_i}`, `b ↦ Σ_i entry(i, j)·b`.
fn graded_matrix<'p>(
    ring: &GradedRing,
    src: &[i64],
    tgt: &[i64],
    entry: impl Fn(usize, usize) -> &'p Poly,
) -> GradedMatrix {
    let (src_bases, _, cols) = basis_index(ring, src);
    let (_, tgt_index, rows) = basis_index(ring, tgt);
    let mut nf = NormalForms::new(ring);
    let mut columns = Vec::with_capacity(cols);
    for (j, basis) in src_bases.iter().enumerate() {
        for b in basis {
            let mut col: SparseRow<BigRational> = Vec::new();
            for (i, index) in tgt_index.iter().enumerate() {
                let g = entry(i, j);
                if g.is_zero() {
                    continue;
                }
                for (m, c) in nf.reduce_product(g, b).terms() {
                    col.push((index[m], c.clone()));
                }
            }
            col.sort_by_key(|(i, _)| *i);
            columns.push(col);
        }
    }
    GradedMatrix {
        rows,
        cols,
        columns,
    }
}

/// The map on global sections in degree `m` (source and target twisted by `m`).
pub fn matrix_in_degree(
    hyp: &GradedHypersurface,
    map: &TwistMap,
    m: i64,
) -> Result<GradedMatrix, CohomologyError> {
    map.check_degrees(hyp.weights(), 0)?;
    let src: Vec<i64> = map.source.iter().map(|s| s + m).collect();
    let tgt: Vec<i64> = map.target.iter().map(|t| t + m).collect();
    Ok(graded_matrix(hyp.ring(), &src, &tgt, |i, j| &map.entries[i][j]))
}

/// The transposed map on Serre-dual pieces, whose rank equals the rank on `H^{n-1}`.
fn dual_matrix(hyp: &GradedHypersurface, map: &TwistMap) -> GradedMatrix {
    let k = hyp.canonical_twist();
    let src: Vec<i64> = map.target.iter().map(|t| k - t).collect();
    let tgt: Vec<i64> = map.source.iter().map(|s| k - s).collect();
    graded_matrix(hyp.ring(), &src, &tgt, |j, i| &map.entries[i][j])
}

fn row_cohomology(dims: &[u64], ranks: &[u64]) -> Vec<u64> {
    (0..dims.len())
        .map(|s| {
            let out = ranks.get(s).copied().unwrap_or(0);
            let inc = if s > 0 { ranks[s - 1] } else { 0 };
            dims[s] - out - inc
        })
        .collect()
}

/// Cohomology of the sheaf sitting at `middle` in a complex exact elsewhere.
pub fn monad_hypercohomology(
    hyp: &GradedHypersurface,
    cx: &LineBundleComplex,
    middle: usize,
) -> Result<CohomologyTable, CohomologyError> {
    let n = hyp.n();
    let len = cx.len();
    if len > n {
        return Err(CohomologyError::ComplexTooLong { length: len, n });
    }
    if middle >= len {
        return Err(CohomologyError::ShapeMismatch(format!(
            "middle index {middle} outside a complex of length {len}"
        )));
    }
    let top = n - 1;
    let k = hyp.canonical_twist();
    let dims_bottom: Vec<u64> = cx.terms.iter().map(|t| t.iter().map(|&m| hyp.h0(m)).sum()).collect();
    let dims_top: Vec<u64> = cx
        .terms
        .iter()
        .map(|t| t.iter().map(|&m| hyp.h0(k - m)).sum())
        .collect();
    let mut ranks_bottom = Vec::with_capacity(cx.maps.len());
    let mut ranks_top = Vec::with_capacity(cx.maps.len());
    for (s, map) in cx.maps.iter().enumerate() {
        ranks_bottom.push(if dims_bottom[s] == 0 || dims_bottom[s + 1] == 0 {
            0
        } else {
            graded_matrix(hyp.ring(), &map.source, &map.target, |i, j| &map.entries[i][j]).rank() as u64
        });
        ranks_top.push(if dims_top[s] == 0 || dims_top[s + 1] == 0 {
            0
        } else {
            dual_matrix(hyp, map).rank() as u64
        });
    }
    let bottom = row_cohomology(&dims_bottom, &ranks_bottom);
    let upper = row_cohomology(&dims_top, &ranks_top);
    let mut total = vec![0u64; len + top];
    for s in 0..len {
        total[s] += bottom[s];
        total[s + top] += upper[s];
    }
    for (q, &v) in total.iter().enumerate() {
        if v != 0 && (q < middle || q > middle + top) {
            return Err(CohomologyError::NotExactAtEnds { degree: q });
        }
    }
    let h = (0..=top)
        .map(|j| total.get(j + middle).copied().unwrap_or(0))
        .collect();
    Ok(CohomologyTable::exact(h))
}

fn scaled_var(i: usize, c: u64, nvars: usize) -> Poly {
    Poly::scaled_var(i, c as i64, nvars)
}

/// `[O_E(m) → ⊕O_E(m + a_i)]` with the Euler map.
pub fn euler_complex(hyp: &GradedHypersurface, m: i64) -> Result<LineBundleComplex, CohomologyError> {
    let nv = hyp.nvars();
    let a = hyp.weights();
    let euler: Vec<Vec<Poly>> = (0..nv).map(|i| vec![scaled_var(i, a[i], nv)]).collect();
    LineBundleComplex::new(hyp, vec![vec![m], a.iter().map(|&w| m + w as i64).collect()], vec![euler])
}

/// `[O_E(m) → ⊕O_E(m + a_i) → O_E(m + d)]` with the Euler and Jacobian maps.
pub fn tangent_complex(hyp: &GradedHypersurface, m: i64) -> Result<LineBundleComplex, CohomologyError> {
    let nv = hyp.nvars();
    let a = hyp.weights();
    let euler: Vec<Vec<Poly>> = (0..nv).map(|i| vec![scaled_var(i, a[i], nv)]).collect();
    let jacobian = vec![(0..nv).map(|i| hyp.polynomial().derivative(i)).collect()];
    LineBundleComplex::new(
        hyp,
        vec![
            vec![m],
            a.iter().map(|&w| m + w as i64).collect(),
            vec![m + hyp.degree()],
        ],
        vec![euler, jacobian],
    )
}

/// `T_WP(m)|E` as the cokernel of the Euler map.
pub fn tangent_wp_restricted(hyp: &GradedHypersurface, m: i64) -> Result<CohomologyTable, CohomologyError> {
    monad_hypercohomology(hyp, &euler_complex(hyp, m)?, 1)
}

/// `T_E(m)` as the middle of the Euler/Jacobian monad.
#[allow(non_snake_case)]
pub fn tangent_E(hyp: &GradedHypersurface, m: i64) -> Result<CohomologyTable, CohomologyError> {
    monad_hypercohomology(hyp, &tangent_complex(hyp, m)?, 1)
}

/// `Ω^p_E(i)` for `p = n-1` (`= O_E(K + i)`) or `p = n-2` (`= T_E(K + i)`).
pub fn omega_top_minus(hyp: &GradedHypersurface, p: usize, i: i64) -> Result<CohomologyTable, CohomologyError> {
    let n = hyp.n();
    let twist = i + hyp.canonical_twist();
    if p + 1 == n {
        Ok(h_line_E(hyp, twist))
    } else if p + 2 == n {
        tangent_E(hyp, twist)
    } else {
        Err(CohomologyError::FormDegree { p, n })
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// The Koszul complex `∧^p V(r) → ∧^{p-1} V(r) → … → O_E(r)`, `V = ⊕O(-a_i)`,
/// whose only cohomology is `Ω^p_WP(r)|E` in position 0.
pub fn koszul_complex(hyp: &GradedHypersurface, p: usize, r: i64) -> Result<LineBundleComplex, CohomologyError> {
    let nv = hyp.nvars();
    let a = hyp.weights();
    let levels: Vec<Vec<Vec<usize>>> = (0..=p).rev().map(|q| subsets(nv, q)).collect();
    let terms: Vec<Vec<i64>> = levels
        .iter()
        .map(|lv| lv.iter().map(|set| r - set.iter().map(|&i| a[i] as i64).sum::<i64>()).collect())
        .collect();
    let mut maps = Vec::with_capacity(p);
    for s in 0..p {
        let src = &levels[s];
        let tgt = &levels[s + 1];
        let position: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut entries = vec![vec![Poly::zero(); src.len()]; tgt.len()];
        for (j, set) in src.iter().enumerate() {
            for (t, &var) in set.iter().enumerate() {
                let mut rest = set.clone();
                rest.remove(t);
                let sign = if t % 2 == 0 { 1 } else { -1 };
                entries[position[&rest]][j] = Poly::scaled_var(var, sign * a[var] as i64, nv);
            }
        }
        maps.push(entries);
    }
    LineBundleComplex::new(hyp, terms, maps)
}

/// `Ω^p_WP(r)|E`.
pub fn omega_wp_restricted(hyp: &GradedHypersurface, p: usize, r: i64) -> Result<CohomologyTable, CohomologyError> {
    if p + 1 > hyp.n() {
        return Err(CohomologyError::ComplexTooLong {
            length: p + 1,
            n: hyp.n(),
        });
    }
    monad_hypercohomology(hyp, &koszul_complex(hyp, p, r)?, 0)
}

/// `∧^{i+1} T_WP|E(-(i+1)d) = Ω^{n-i-1}_WP(Σa - (i+1)d)|E`.
pub fn wedge_tangent_twisted(hyp: &GradedHypersurface, i: usize) -> Result<CohomologyTable, CohomologyError> {
    let n = hyp.n();
    if i + 1 > n {
        return Err(CohomologyError::FormDegree { p: i + 1, n });
    }
    let r = hyp.weight_system().weight_total() as i64 - (i as i64 + 1) * hyp.degree();
    omega_wp_restricted(hyp, n - i - 1, r)
}

/// Bounds for the middle of `0 → A → M → B → 0` from the long exact sequence.
/// Exact when every connecting map `H^j(B) → H^{j+1}(A)` has a zero end.
pub fn residue_chase(a: &CohomologyTable, b: &CohomologyTable) -> CohomologyTable {
    let len = a.h.len().max(b.h.len());
    let overlap: Vec<u64> = (0..len).map(|j| b.get(j).min(a.get(j + 1))).collect();
    let upper: Vec<u64> = (0..len).map(|j| a.get(j) + b.get(j)).collect();
    let lower: Vec<u64> = (0..len)
        .map(|j| {
            let before = if j > 0 { overlap[j - 1] } else { 0 };
            upper[j] - before - overlap[j]
        })
        .collect();
    if lower == upper {
        CohomologyTable::exact(upper)
    } else {
        CohomologyTable {
            h: lower.clone(),
            exact: false,
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

/// `Ω^{n-1}_{X#}(log E)(-iE)|E`, an extension of `Ω^{n-2}_E(i)` by
/// `Ω^{n-1}_E(i)` through the residue map. Read off the long exact sequence
/// when it is forced, otherwise from the kernel of the Jacobian map
/// `⊕O_E(K + i + a_j) → O_E(K + i + d)`.
pub fn log_restricted(hyp: &GradedHypersurface, i: i64) -> Result<CohomologyTable, CohomologyError> {
    let n = hyp.n();
    let a = omega_top_minus(hyp, n - 1, i)?;
    let b = omega_top_minus(hyp, n - 2, i)?;
    let chased = residue_chase(&a, &b);
    if chased.exact {
        return Ok(chased);
    }
    monad_hypercohomology(hyp, &jacobian_kernel_complex(hyp, hyp.canonical_twist() + i)?, 0)
}

/// `[⊕O_E(m + a_j) → O_E(m + d)]` with the partial derivatives.
pub fn jacobian_kernel_complex(hyp: &GradedHypersurface, m: i64) -> Result<LineBundleComplex, CohomologyError> {
    let nv = hyp.nvars();
    let jacobian = vec![(0..nv).map(|i| hyp.polynomial().derivative(i)).collect()];
    LineBundleComplex::new(
        hyp,
        vec![
            hyp.weights().iter().map(|&w| m + w as i64).collect(),
            vec![m + hyp.degree()],
        ],
        vec![jacobian],
    )
}

/// Weight-graded dimensions of `T^1 = S/(f, ∂f)`, the generator in weight `-d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedT1 {
    pub degree: i64,
    pub dims: BTreeMap<i64, u64>,
}

impl GradedT1 {
    pub fn min_weight(&self) -> Option<(i64, u64)> {
        self.dims.iter().next().map(|(w, d)| (*w, *d))
    }

    pub fn total(&self) -> u64 {
        self.dims.values().sum()
    }

    /// Dimension of `m·T^1`, all weights above `-d`.
    pub fn maximal_ideal_part(&self) -> u64 {
        self.dims.range(-self.degree + 1..).map(|(_, d)| d).sum()
    }
}

fn diagonal_jacobian_dims(weights: &[u64], exponents: &[u64]) -> Vec<u64> {
    let mut poly = vec![1u64];
    for (&w, &e) in weights.iter().zip(exponents) {
        let w = w as usize;
        let terms = e as usize - 1;
        let mut next = vec![0u64; poly.len() + w * (terms - 1)];
        for (i, &c) in poly.iter().enumerate().filter(|(_, c)| **c != 0) {
            for t in 0..terms {
                next[i + t * w] += c;
            }
        }
        poly = next;
    }
    poly
}

/// `dim (S/J_f)_m` by linear algebra in the polynomial ring.
fn jacobian_ring_dim_general(hyp: &GradedHypersurface, partials: &[Poly], m: i64) -> u64 {
    let w = hyp.weights();
    let monos = monomials_of_degree(w, m);
    if monos.is_empty() {
        return 0;
    }
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut rows: Vec<SparseRow<BigRational>> = Vec::new();
    for g in partials.iter().filter(|g| !g.is_zero()) {
        let gd = g.homogeneous_degree(w).expect("homogeneous partial") as i64;
        for q in monomials_of_degree(w, m - gd) {
            let mut row: SparseRow<BigRational> =
                g.mul_monomial(&q).terms().map(|(t, c)| (index[t], c.clone())).collect();
            row.sort_by_key(|(i, _)| *i);
            rows.push(row);
        }
    }
    monos.len() as u64 - rank_rational_rows(&rows) as u64
}

/// Degree at which `(S/J_f)` has its one-dimensional socle.
fn socle_degree(hyp: &GradedHypersurface) -> i64 {
    hyp.weights().iter().map(|&a| hyp.degree() - 2 * a as i64).sum()
}

/// `Π (d/a_i - 1)` as an exact rational.
fn expected_milnor_number(hyp: &GradedHypersurface) -> BigRational {
    let d = hyp.degree();
    hyp.weights().iter().fold(BigRational::one(), |acc, &a| {
        acc * BigRational::new((d - a as i64).into(), (a as i64).into())
    })
}

#[allow(non_snake_case)]
pub fn graded_T1(hyp: &GradedHypersurface) -> Result<GradedT1, CohomologyError> {
    let d = hyp.degree();
    let by_degree: Vec<u64> = match hyp.diagonal_exponents() {
        Some(e) => diagonal_jacobian_dims(hyp.weights(), e),
        None => {
            let socle = socle_degree(hyp);
            let partials: Vec<Poly> = (0..hyp.nvars()).map(|i| hyp.polynomial().derivative(i)).collect();
            let max_a = *hyp.weights().iter().max().expect("weights") as i64;
            let tail_clear = (socle + 1..=socle + max_a)
                .all(|m| m < 0 || jacobian_ring_dim_general(hyp, &partials, m) == 0);
            let dims: Vec<u64> = (0..=socle.max(-1))
                .map(|m| jacobian_ring_dim_general(hyp, &partials, m))
                .collect();
            let total: u64 = dims.iter().sum();
            if !tail_clear || BigRational::from_integer(total.into()) != expected_milnor_number(hyp) {
                return Err(CohomologyError::NotIsolated);
            }
            dims
        }
    };
    let dims = by_degree
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(m, c)| (m as i64 - d, *c))
        .collect();
    Ok(GradedT1 { degree: d, dims })
}

/// `dim (S/J_f)_m`.
pub fn jacobian_ring_dim(hyp: &GradedHypersurface, m: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    match hyp.diagonal_exponents() {
        Some(e) => diagonal_jacobian_dims(hyp.weights(), e)
            .get(m as usize)
            .copied()
            .unwrap_or(0),
        None => {
            let partials: Vec<Poly> = (0..hyp.nvars()).map(|i| hyp.polynomial().derivative(i)).collect();
            jacobian_ring_dim_general(hyp, &partials, m)
        }
    }
}

/// Primitive `h^{p, n-1-p}(E) = dim (S/J_f)_{(n-p)d - Σa_i}`.
pub fn griffiths_steenbrink_primitive(hyp: &GradedHypersurface, p: i64) -> u64 {
    let m = (hyp.n() as i64 - p) * hyp.degree() - hyp.weight_system().weight_total() as i64;
    jacobian_ring_dim(hyp, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn quadric(n: usize) -> GradedHypersurface {
        GradedHypersurface::from_exponents(&vec![2; n + 1]).unwrap()
    }

    fn table(h: &[u64]) -> CohomologyTable {
        CohomologyTable::exact(h.to_vec())
    }

    #[test]
    fn line_bundles_on_wp() {
        let p3 = WeightSystem::new(vec![1, 1, 1, 1], 2).unwrap();
        assert!(h_line_wp(&p3, -1).is_zero());
        let p5 = WeightSystem::new(vec![1; 6], 2).unwrap();
        assert_eq!(h_line_wp(&p5, -6).h, vec![0, 0, 0, 0, 0, 1]);
        let w = WeightSystem::new(vec![1, 1, 1, 2], 3).unwrap();
        assert_eq!(h_line_wp(&w, -5).h, vec![0, 0, 0, 1]);
    }

    #[test]
    fn line_bundles_on_quadric() {
        let q = quadric(5);
        assert_eq!(h_line_E(&q, 1).h, vec![6, 0, 0, 0, 0]);
        assert_eq!(h_line_E(&q, 2).h, vec![20, 0, 0, 0, 0]);
        assert_eq!(h_line_E(&q, -4).h, vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn euler_inclusion_rank() {
        let q = GradedHypersurface::from_exponents(&[4, 4, 4, 4]).unwrap();
        let cx = euler_complex(&q, 0).unwrap();
        let m = matrix_in_degree(&q, &cx.maps()[0], 0).unwrap();
        assert_eq!((m.rows, m.cols, m.rank()), (16, 1, 1));
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let q = quadric(5);
        let bad = TwistMap {
            source: vec![0],
            target: vec![2],
            entries: vec![vec![Poly::scaled_var(0, 1, 6)]],
        };
        assert!(matches!(
            matrix_in_degree(&q, &bad, 0),
            Err(CohomologyError::DegreeMismatch { expected: 2, .. })
        ));
    }

    #[test]
    fn non_complex_is_rejected() {
        let q = quadric(5);
        let ones = [(0..6).map(|i| vec![Poly::scaled_var(i, 1, 6)]).collect::<Vec<_>>()];
        let maps = vec![ones[0].clone(), vec![(0..6).map(|i| Poly::scaled_var(i, 1, 6)).collect()]];
        let err = LineBundleComplex::new(&q, vec![vec![0], vec![1; 6], vec![3]], maps).unwrap_err();
        assert!(matches!(err, CohomologyError::DegreeMismatch { .. }));
        let maps = vec![ones[0].clone(), vec![(0..6).map(|i| Poly::scaled_var(i, if i == 0 { 2 } else { 1 }, 6)).collect()]];
        let err = LineBundleComplex::new(&q, vec![vec![0], vec![1; 6], vec![2]], maps).unwrap_err();
        assert_eq!(err, CohomologyError::NotAComplex { first: 0, second: 1 });
    }

    #[test]
    fn tangent_of_quadric_fourfold() {
        let q = quadric(5);
        assert_eq!(tangent_E(&q, -2).unwrap(), table(&[0, 1, 0, 0, 0]));
        assert!(tangent_E(&q, -3).unwrap().is_zero());
        assert_eq!(tangent_wp_restricted(&q, 0).unwrap(), table(&[35, 0, 0, 0, 0]));
        assert!(tangent_wp_restricted(&quadric(3), -8).unwrap().vanishes_through(1));
    }

    #[test]
    fn tangent_of_quadric_surface() {
        let q = quadric(3);
        assert_eq!(tangent_E(&q, -2).unwrap(), table(&[0, 2, 0]));
    }

    #[test]
    fn top_forms_on_quadric() {
        let q = quadric(5);
        assert!(omega_top_minus(&q, 4, 1).unwrap().is_zero());
        assert!(omega_top_minus(&q, 3, 1).unwrap().vanishes_through(2));
        assert_eq!(omega_top_minus(&q, 3, 2).unwrap(), table(&[0, 1, 0, 0, 0]));
        assert!(omega_top_minus(&q, 4, 2).unwrap().vanishes_through(2));
        assert!(matches!(omega_top_minus(&q, 2, 2), Err(CohomologyError::FormDegree { .. })));
    }

    #[test]
    fn restricted_forms() {
        let q = quadric(5);
        assert_eq!(omega_wp_restricted(&q, 3, 2).unwrap().get(1), 0);
        assert_eq!(wedge_tangent_twisted(&q, 1).unwrap().get(1), 0);
        let quartic = GradedHypersurface::from_exponents(&[4, 4, 4, 4]).unwrap();
        assert_eq!(omega_wp_restricted(&quartic, 1, 0).unwrap(), table(&[0, 1, 15]));
        let low = omega_wp_restricted(&quadric(3), 1, -6).unwrap();
        assert!(low.vanishes_through(1));
        assert!(low.get(2) > 0);
        assert!(matches!(
            omega_wp_restricted(&quartic, 3, 0),
            Err(CohomologyError::ComplexTooLong { .. })
        ));
    }

    #[test]
    fn log_restriction_on_node() {
        let q = quadric(5);
        assert!(log_restricted(&q, 1).unwrap().is_zero());
        let at_a = log_restricted(&q, 2).unwrap();
        assert_eq!((at_a.get(0), at_a.get(1)), (0, 1));
    }

    #[test]
    fn chase_bounds() {
        let a = table(&[0, 2, 0]);
        let b = table(&[3, 0, 0]);
        let c = residue_chase(&a, &b);
        assert!(!c.exact);
        assert_eq!(c.lower, Some(vec![1, 0, 0]));
        assert_eq!(c.upper, Some(vec![3, 2, 0]));
        assert!(residue_chase(&table(&[1, 0, 0]), &table(&[0, 1, 0])).exact);
    }

    #[test]
    fn t1_tables() {
        let node = quadric(5);
        assert_eq!(graded_T1(&node).unwrap().dims, BTreeMap::from([(-2, 1)]));
        let t = graded_T1(&GradedHypersurface::from_exponents(&[2, 2, 2, 4, 4]).unwrap()).unwrap();
        assert_eq!(t.dims, BTreeMap::from([(-4, 1), (-3, 2), (-2, 3), (-1, 2), (0, 1)]));
        assert_eq!(t.total(), 9);
        assert_eq!(t.maximal_ideal_part(), 8);
        let cubic = graded_T1(&GradedHypersurface::from_exponents(&[3; 6]).unwrap()).unwrap();
        assert_eq!(cubic.min_weight(), Some((-3, 1)));
    }

    #[test]
    fn t1_general_path_matches_diagonal() {
        let e = [2, 2, 2, 4, 4];
        let fermat = GradedHypersurface::from_exponents(&e).unwrap();
        // same polynomial with one coefficient changed is no longer detected as Fermat
        let ws = fermat.weight_system().clone();
        let f = fermat.polynomial().add(&Poly::term(Monomial::power(3, 4, 5), big(1)))
            .add(&Poly::term(Monomial(vec![0, 0, 0, 2, 2]), big(1)));
        let general = GradedHypersurface::new(ws, f).unwrap();
        assert!(general.diagonal_exponents().is_none());
        assert_eq!(graded_T1(&general).unwrap().dims, graded_T1(&fermat).unwrap().dims);
    }

    #[test]
    fn non_isolated_detected() {
        let ws = WeightSystem::new(vec![1, 1, 1, 1], 2).unwrap();
        let f = Poly::fermat(&[2, 2, 2, 2]).add(&Poly::term(Monomial::power(3, 2, 4), big(-1)));
        let cone = GradedHypersurface::new(ws, f).unwrap();
        assert_eq!(graded_T1(&cone), Err(CohomologyError::NotIsolated));
        assert!(!cone.is_quasismooth());
    }

    #[test]
    fn primitive_cohomology() {
        assert_eq!(griffiths_steenbrink_primitive(&quadric(5), 2), 1);
        let quintic = GradedHypersurface::from_exponents(&[5; 5]).unwrap();
        assert_eq!(griffiths_steenbrink_primitive(&quintic, 3), 1);
        let cubic = GradedHypersurface::from_exponents(&[3; 6]).unwrap();
        assert_eq!(griffiths_steenbrink_primitive(&cubic, 3), 1);
    }

    #[test]
    fn construction_checks() {
        let ws = WeightSystem::new(vec![1; 4], 3).unwrap();
        assert_eq!(GradedHypersurface::new(ws.clone(), Poly::zero()).unwrap_err(), CohomologyError::ZeroPolynomial);
        assert!(matches!(
            GradedHypersurface::new(ws.clone(), Poly::fermat(&[2, 2, 2, 2])),
            Err(CohomologyError::NotHomogeneous { expected: 3 })
        ));
        let odd = WeightSystem::new(vec![3, 1, 1, 1], 5).unwrap();
        assert!(matches!(GradedHypersurface::fermat(odd), Err(CohomologyError::NoFermatMember(_))));
    }
}

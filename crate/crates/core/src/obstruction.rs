//! The first order smoothing obstruction `Σ c_x λ_x^k φ(ε_x) = 0`.
//!
//! Substituting `μ_x = c_x λ_x^k` makes the condition linear: a strong
//! solution exists over `C` iff the kernel of the class matrix contains a
//! vector with no zero coordinate. A subspace over an infinite field lies in a
//! finite union of hyperplanes only if it lies in one of them, so it suffices
//! that no coordinate vanishes identically on the kernel. For `k >= 2` this is
//! only a necessary condition for smoothability.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::RationalMatrix;
use crate::rational::{format_big, parse_big, rational_root, ParseRationalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("configuration has no points")]
    NoPoints,
    #[error("level k must be at least 1")]
    ZeroLevel,
    #[error("point {id} has c = 0")]
    ZeroConstant { id: String },
    #[error("point {id} has a class of length {found}, expected {expected}")]
    ClassLength { id: String, expected: usize, found: usize },
    #[error("duplicate point id {id}")]
    DuplicateId { id: String },
    #[error("no lambda given for point {id}")]
    MissingLambda { id: String },
    #[error("expected {expected} lambda values, got {found}")]
    LambdaCount { expected: usize, found: usize },
    #[error("criterion needs k = {expected}, configuration has k = {found}")]
    WrongLevel { expected: u32, found: u32 },
    #[error("dimension n = {n} must be odd")]
    WrongParity { n: u32 },
    #[error("s'' = {s_doubleprime} exceeds the available dimension {available}")]
    Inconsistent { s_doubleprime: u64, available: u64 },
    #[error("s' + s'' = {sum} but there are {points} points")]
    BadPartition { sum: u64, points: u64 },
    #[error("invalid configuration JSON: {0}")]
    Json(String),
    #[error("cannot read configuration: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionPoint {
    pub id: String,
    pub c: BigRational,
    pub class: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionConfig {
    k: u32,
    m: usize,
    points: Vec<ObstructionPoint>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    fn parse(&self) -> Result<BigRational, ParseRationalError> {
        match self {
            RationalText::Text(s) => parse_big(s),
            RationalText::Int(i) => Ok(BigRational::from_integer((*i).into())),
        }
    }
}

#[derive(Deserialize, Serialize)]
struct RawPoint {
    id: String,
    #[serde(default)]
    c: Option<RationalText>,
    class: Vec<RationalText>,
}

#[derive(Deserialize, Serialize)]
struct RawConfig {
    k: u32,
    m: Option<usize>,
    points: Vec<RawPoint>,
}

impl ObstructionConfig {
    pub fn new(k: u32, m: usize, points: Vec<ObstructionPoint>) -> Result<Self, ObstructionError> {
        if k == 0 {
            return Err(ObstructionError::ZeroLevel);
        }
        if points.is_empty() {
            return Err(ObstructionError::NoPoints);
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &points {
            if !seen.insert(p.id.as_str()) {
                return Err(ObstructionError::DuplicateId { id: p.id.clone() });
            }
            if p.c.is_zero() {
                return Err(ObstructionError::ZeroConstant { id: p.id.clone() });
            }
            if p.class.len() != m {
                return Err(ObstructionError::ClassLength {
                    id: p.id.clone(),
                    expected: m,
                    found: p.class.len(),
                });
            }
        }
        Ok(Self { k, m, points })
    }

    /// Points named `x1, x2, …` with `c = 1`.
    pub fn from_classes(k: u32, classes: Vec<Vec<BigRational>>) -> Result<Self, ObstructionError> {
        let m = classes.first().map(Vec::len).unwrap_or(0);
        let points = classes
            .into_iter()
            .enumerate()
            .map(|(i, class)| ObstructionPoint {
                id: format!("x{}", i + 1),
                c: BigRational::one(),
                class,
            })
            .collect();
        Self::new(k, m, points)
    }

    /// Parses `{"k":…,"m":…,"points":[{"id","c","class"}]}`; `c` defaults to 1
    /// and `m` to the common class length.
    pub fn from_json(text: &str) -> Result<Self, ObstructionError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| ObstructionError::Json(e.to_string()))?;
        let mut points = Vec::with_capacity(raw.points.len());
        for p in raw.points {
            let c = match p.c {
                Some(c) => c.parse()?,
                None => BigRational::one(),
            };
            let class = p.class.iter().map(RationalText::parse).collect::<Result<_, _>>()?;
            points.push(ObstructionPoint { id: p.id, c, class });
        }
        let m = raw
            .m
            .unwrap_or_else(|| points.first().map(|p| p.class.len()).unwrap_or(0));
        Self::new(raw.k, m, points)
    }

    pub fn load(path: &Path) -> Result<Self, ObstructionError> {
        let text = std::fs::read_to_string(path).map_err(|e| ObstructionError::Io(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let raw = RawConfig {
            k: self.k,
            m: Some(self.m),
            points: self
                .points
                .iter()
                .map(|p| RawPoint {
                    id: p.id.clone(),
                    c: Some(RationalText::Text(format_big(&p.c))),
                    class: p.class.iter().map(|v| RationalText::Text(format_big(v))).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("serializable")
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> &[ObstructionPoint] {
        &self.points
    }

    /// Same configuration with `c_x` replaced by `c_x · u_x`.
    pub fn rescaled(&self, factors: &[BigRational]) -> Result<Self, ObstructionError> {
        let points = self
            .points
            .iter()
            .zip(factors)
            .map(|(p, u)| ObstructionPoint {
                c: &p.c * u,
                ..p.clone()
            })
            .collect();
        Self::new(self.k, self.m, points)
    }

    /// The `m × #Z` matrix with columns `c_x · φ(ε_x)`.
    pub fn class_matrix(&self) -> RationalMatrix {
        let columns: Vec<Vec<BigRational>> = self
            .points
            .iter()
            .map(|p| p.class.iter().map(|v| v * &p.c).collect())
            .collect();
        RationalMatrix::from_columns(self.m, &columns)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothingDirection {
    pub lambda: BTreeMap<String, BigRational>,
}

impl SmoothingDirection {
    /// Values listed in the order of the configuration's points.
    pub fn from_values(config: &ObstructionConfig, values: Vec<BigRational>) -> Result<Self, ObstructionError> {
        if values.len() != config.points.len() {
            return Err(ObstructionError::LambdaCount {
                expected: config.points.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            lambda: config.points.iter().map(|p| p.id.clone()).zip(values).collect(),
        })
    }

    pub fn strong(&self) -> bool {
        self.lambda.values().all(|v| !v.is_zero())
    }

    pub fn scaled(&self, t: &BigRational) -> Self {
        Self {
            lambda: self.lambda.iter().map(|(k, v)| (k.clone(), v * t)).collect(),
        }
    }
}

/// A point of the solution set, in `λ` coordinates when the k-th roots are rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Lambda(SmoothingDirection),
    /// `μ_x = c_x λ_x^k`; the `λ_x` are k-th roots of `μ_x / c_x` over `C`.
    Mu(BTreeMap<String, BigRational>),
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        let (key, map) = match self {
            Witness::Lambda(d) => ("lambda", &d.lambda),
            Witness::Mu(m) => ("mu", m),
        };
        let values: serde_json::Map<String, serde_json::Value> =
            map.iter().map(|(k, v)| (k.clone(), format_big(v).into())).collect();
        serde_json::json!({ key: values })
    }
}

pub fn evaluate(config: &ObstructionConfig, dir: &SmoothingDirection) -> Result<Vec<BigRational>, ObstructionError> {
    let mut value = vec![BigRational::zero(); config.m];
    for p in &config.points {
        let lambda = dir
            .lambda
            .get(&p.id)
            .ok_or_else(|| ObstructionError::MissingLambda { id: p.id.clone() })?;
        let coeff = &p.c * Pow::pow(lambda, config.k);
        for (v, x) in value.iter_mut().zip(&p.class) {
            *v += &coeff * x;
        }
    }
    Ok(value)
}

/// `(s', s'')`: kernel dimension and rank of the class matrix.
pub fn kernel_stats(config: &ObstructionConfig) -> (u64, u64) {
    let rank = config.class_matrix().rank() as u64;
    (config.points.len() as u64 - rank, rank)
}

fn generic_kernel_vector(basis: &[Vec<BigRational>], len: usize) -> Vec<BigRational> {
    // Coefficients (1, s, s^2, …) along the moment curve: each coordinate that is
    // not identically zero on the kernel vanishes for fewer than basis.len() values of s.
    for s in 1i64.. {
        let s = BigRational::from_integer(BigInt::from(s));
        let mut v = vec![BigRational::zero(); len];
        let mut coeff = BigRational::one();
        for b in basis {
            for (x, y) in v.iter_mut().zip(b) {
                *x += &coeff * y;
            }
            coeff *= &s;
        }
        if v.iter().all(|x| !x.is_zero()) {
            return v;
        }
    }
    unreachable!()
}

/// Decides whether some `λ` with all `λ_x ≠ 0` solves the relation over `C`.
pub fn satisfiable_all_nonzero(config: &ObstructionConfig) -> (bool, Option<Witness>) {
    let t = config.points.len();
    let basis = config.class_matrix().kernel_basis();
    let covered = (0..t).all(|x| basis.iter().any(|b| !b[x].is_zero()));
    if !covered {
        return (false, None);
    }
    // Columns carry c_x, so kernel vectors are the powers λ_x^k.
    let powers = generic_kernel_vector(&basis, t);
    let roots: Option<Vec<BigRational>> = powers.iter().map(|v| rational_root(v, config.k)).collect();
    let witness = match roots {
        Some(lambda) => Witness::Lambda(SmoothingDirection {
            lambda: config.points.iter().map(|p| p.id.clone()).zip(lambda).collect(),
        }),
        None => Witness::Mu(
            config
                .points
                .iter()
                .zip(&powers)
                .map(|(p, v)| (p.id.clone(), &p.c * v))
                .collect(),
        ),
    };
    (true, Some(witness))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub k: u32,
    pub value: Option<Vec<BigRational>>,
    pub satisfiable: bool,
    pub witness: Option<Witness>,
    pub s_prime: u64,
    pub s_doubleprime: u64,
}

impl ObstructionReport {
    /// Human-readable verdict; for `k >= 2` only the necessary condition is claimed.
    pub fn verdict(&self) -> &'static str {
        match (self.k, self.satisfiable) {
            (1, true) => "smoothable (strong first order)",
            (1, false) => "no strong first order smoothing",
            (_, true) => "necessary condition satisfiable",
            (_, false) => "obstructed: necessary condition fails",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "satisfiable": self.satisfiable,
            "verdict": self.verdict(),
            "value": self.value.as_ref().map(|v| v.iter().map(format_big).collect::<Vec<_>>()),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "s_prime": self.s_prime,
            "s_doubleprime": self.s_doubleprime,
        })
    }
}

/// Full report; with a direction, `satisfiable` means the relation holds there.
pub fn check(config: &ObstructionConfig, dir: Option<&SmoothingDirection>) -> Result<ObstructionReport, ObstructionError> {
    let (s_prime, s_doubleprime) = kernel_stats(config);
    let (value, satisfiable, witness) = match dir {
        Some(d) => {
            let v = evaluate(config, d)?;
            let zero = v.iter().all(Zero::is_zero);
            (Some(v), zero && d.strong(), None)
        }
        None => {
            let (sat, w) = satisfiable_all_nonzero(config);
            (None, sat, w)
        }
    };
    Ok(ObstructionReport {
        k: config.k,
        value,
        satisfiable,
        witness,
        s_prime,
        s_doubleprime,
    })
}

/// The linear criterion at level one, necessary and sufficient.
pub fn k1_criterion(config: &ObstructionConfig) -> Result<(bool, Option<Witness>), ObstructionError> {
    if config.k != 1 {
        return Err(ObstructionError::WrongLevel {
            expected: 1,
            found: config.k,
        });
    }
    Ok(satisfiable_all_nonzero(config))
}

/// Nodal case in odd dimension `n`, level `(n-1)/2`, classes `[A_x] - [B_x]`.
pub fn rt_nodal_check(
    config: &ObstructionConfig,
    n: u32,
    dir: Option<&SmoothingDirection>,
) -> Result<bool, ObstructionError> {
    if n.is_multiple_of(2) {
        return Err(ObstructionError::WrongParity { n });
    }
    if config.k != (n - 1) / 2 {
        return Err(ObstructionError::WrongLevel {
            expected: (n - 1) / 2,
            found: config.k,
        });
    }
    Ok(check(config, dir)?.satisfiable)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HodgeBookkeeping {
    /// `h^{n-k,k}(Y_t) = dim Gr^{n-k}_F H^n(Y_t)`.
    pub gr_nk_hn_smoothing: u64,
    /// `dim Gr^k_F H^n(Y)`.
    pub gr_k_hn_singular: u64,
    /// `h^{n-k,k+1}(Y_t) = dim Gr^{n-k}_F H^{n+1}(Y_t)`.
    pub gr_nk_hn1_smoothing: u64,
    /// Alternating sum along the five-term sequence.
    pub alternating_sum: i64,
}

/// Dimensions on the smoothing from those of `Y` and the split `#Z = s' + s''`.
pub fn smoothing_hodge_bookkeeping(
    gr_hn: u64,
    gr_hn1: u64,
    s_prime: u64,
    s_doubleprime: u64,
    points: u64,
) -> Result<HodgeBookkeeping, ObstructionError> {
    if s_prime + s_doubleprime != points {
        return Err(ObstructionError::BadPartition {
            sum: s_prime + s_doubleprime,
            points,
        });
    }
    if s_doubleprime > gr_hn1 {
        return Err(ObstructionError::Inconsistent {
            s_doubleprime,
            available: gr_hn1,
        });
    }
    let hn_t = gr_hn + s_prime;
    let hn1_t = gr_hn1 - s_doubleprime;
    let terms = [gr_hn, hn_t, points, gr_hn1, hn1_t];
    let alternating_sum = terms
        .iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum();
    Ok(HodgeBookkeeping {
        gr_nk_hn_smoothing: hn_t,
        gr_k_hn_singular: gr_hn + s_prime,
        gr_nk_hn1_smoothing: hn1_t,
        alternating_sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NodalBetti {
    pub b2_smoothing: u64,
    pub b3_smoothing: u64,
    pub b4_singular: u64,
    /// `s'' = 0`: `Y` is Q-factorial and smoothable.
    pub smoothable: bool,
}

/// Betti numbers for a nodal threefold with small resolution `Y'`.
pub fn nodal_threefold_betti(
    b2_resolution: u64,
    b3_resolution: u64,
    s_prime: u64,
    s_doubleprime: u64,
    points: u64,
) -> Result<NodalBetti, ObstructionError> {
    if s_prime + s_doubleprime != points {
        return Err(ObstructionError::BadPartition {
            sum: s_prime + s_doubleprime,
            points,
        });
    }
    if s_doubleprime > b2_resolution {
        return Err(ObstructionError::Inconsistent {
            s_doubleprime,
            available: b2_resolution,
        });
    }
    let b2 = b2_resolution - s_doubleprime;
    Ok(NodalBetti {
        b2_smoothing: b2,
        b3_smoothing: b3_resolution + 2 * s_prime,
        b4_singular: b2 + s_doubleprime,
        smoothable: s_doubleprime == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn cfg(k: u32, classes: &[&[i64]]) -> ObstructionConfig {
        ObstructionConfig::from_classes(k, classes.iter().map(|c| c.iter().map(|&v| big(v)).collect()).collect())
            .unwrap()
    }

    fn dir(c: &ObstructionConfig, v: &[i64]) -> SmoothingDirection {
        SmoothingDirection::from_values(c, v.iter().map(|&x| big(x)).collect()).unwrap()
    }

    #[test]
    fn evaluation() {
        let one = cfg(2, &[&[1]]);
        assert_eq!(evaluate(&one, &dir(&one, &[1])).unwrap(), vec![big(1)]);
        let two = cfg(2, &[&[1], &[-1]]);
        assert_eq!(evaluate(&two, &dir(&two, &[1, 1])).unwrap(), vec![big(0)]);
        let three = cfg(1, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(evaluate(&three, &dir(&three, &[1, 1, -1])).unwrap(), vec![big(0), big(0)]);
        let missing = SmoothingDirection { lambda: BTreeMap::new() };
        assert!(matches!(evaluate(&one, &missing), Err(ObstructionError::MissingLambda { .. })));
    }

    #[test]
    fn satisfiability() {
        assert!(!satisfiable_all_nonzero(&cfg(2, &[&[1, 0], &[0, 1]])).0);
        let (sat, w) = satisfiable_all_nonzero(&cfg(2, &[&[1], &[-1]]));
        assert!(sat);
        assert_eq!(w, Some(Witness::Lambda(dir(&cfg(2, &[&[1], &[-1]]), &[1, 1]))));
        assert!(!satisfiable_all_nonzero(&cfg(2, &[&[1, 0], &[0, 1], &[0, 2]])).0);
    }

    #[test]
    fn witness_falls_back_to_mu() {
        // kernel spanned by (1/2, 1), and 1/2 is not a square
        let c = cfg(2, &[&[2], &[-1]]);
        let (sat, w) = satisfiable_all_nonzero(&c);
        assert!(sat);
        let Some(Witness::Mu(mu)) = w else { panic!("expected μ witness") };
        assert!(mu.values().all(|v| !v.is_zero()));
    }

    #[test]
    fn witness_accounts_for_constants() {
        let points = vec![
            ObstructionPoint { id: "x1".into(), c: big(2), class: vec![big(1)] },
            ObstructionPoint { id: "x2".into(), c: big(8), class: vec![big(-1)] },
        ];
        let c = ObstructionConfig::new(2, 1, points).unwrap();
        let (sat, w) = satisfiable_all_nonzero(&c);
        assert!(sat);
        let Some(Witness::Lambda(d)) = w else { panic!("expected λ witness") };
        assert_eq!(evaluate(&c, &d).unwrap(), vec![big(0)]);
    }

    #[test]
    fn level_one() {
        assert!(!k1_criterion(&cfg(1, &[&[3]])).unwrap().0);
        let two = cfg(1, &[&[1, 2], &[-1, -2]]);
        let (sat, w) = k1_criterion(&two).unwrap();
        assert!(sat);
        assert_eq!(w, Some(Witness::Lambda(dir(&two, &[1, 1]))));
        let zero = cfg(1, &[&[0, 0], &[0, 0], &[0, 0]]);
        assert_eq!(k1_criterion(&zero).unwrap(), (true, Some(Witness::Lambda(dir(&zero, &[1, 1, 1])))));
        assert!(matches!(k1_criterion(&cfg(2, &[&[1]])), Err(ObstructionError::WrongLevel { .. })));
    }

    #[test]
    fn nodal() {
        let c = cfg(1, &[&[1], &[-1]]);
        assert_eq!(rt_nodal_check(&c, 3, None).unwrap(), k1_criterion(&c).unwrap().0);
        let two = cfg(2, &[&[1], &[-1]]);
        assert!(rt_nodal_check(&two, 5, None).unwrap());
        assert!(rt_nodal_check(&two, 5, Some(&dir(&two, &[1, 1]))).unwrap());
        assert!(!rt_nodal_check(&cfg(2, &[&[1]]), 5, None).unwrap());
        assert_eq!(rt_nodal_check(&two, 4, None), Err(ObstructionError::WrongParity { n: 4 }));
    }

    #[test]
    fn stats() {
        assert_eq!(kernel_stats(&cfg(1, &[&[1, 0], &[0, 1], &[1, 1]])), (1, 2));
        assert_eq!(kernel_stats(&cfg(1, &[&[0, 0], &[0, 0], &[0, 0], &[0, 0]])), (4, 0));
        assert_eq!(kernel_stats(&cfg(1, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), (0, 3));
    }

    #[test]
    fn bookkeeping() {
        let z = smoothing_hodge_bookkeeping(0, 0, 0, 0, 0).unwrap();
        assert_eq!(z.gr_nk_hn_smoothing, 0);
        let b = smoothing_hodge_bookkeeping(1, 5, 2, 3, 5).unwrap();
        assert_eq!((b.gr_nk_hn_smoothing, b.gr_k_hn_singular, b.gr_nk_hn1_smoothing), (3, 3, 2));
        assert_eq!(b.alternating_sum, 0);
        let nodes = smoothing_hodge_bookkeeping(4, 7, 0, 3, 3).unwrap();
        assert_eq!(nodes.gr_nk_hn_smoothing, 4);
        assert!(matches!(
            smoothing_hodge_bookkeeping(1, 2, 0, 3, 3),
            Err(ObstructionError::Inconsistent { .. })
        ));
        assert!(matches!(
            smoothing_hodge_bookkeeping(1, 5, 1, 1, 3),
            Err(ObstructionError::BadPartition { .. })
        ));
    }

    #[test]
    fn betti() {
        let b = nodal_threefold_betti(2, 4, 1, 1, 2).unwrap();
        assert_eq!((b.b2_smoothing, b.b3_smoothing, b.b4_singular), (1, 6, 2));
        let q = nodal_threefold_betti(3, 10, 4, 0, 4).unwrap();
        assert_eq!(q.b2_smoothing, 3);
        assert!(q.smoothable);
        assert_eq!(nodal_threefold_betti(3, 10, 0, 2, 2).unwrap().b3_smoothing, 10);
        assert!(matches!(nodal_threefold_betti(3, 1, 1, 1, 3), Err(ObstructionError::BadPartition { .. })));
    }

    #[test]
    fn json_config() {
        let text = r#"{"k":2,"m":3,"points":[{"id":"x1","c":"1","class":["1","0","2"]},{"id":"x2","class":["-1","0","-2"]}]}"#;
        let c = ObstructionConfig::from_json(text).unwrap();
        assert_eq!(c.points()[1].c, big(1));
        assert!(satisfiable_all_nonzero(&c).0);
        assert_eq!(ObstructionConfig::from_json(&c.to_json()).unwrap(), c);
        let bad = r#"{"k":2,"m":2,"points":[{"id":"x1","class":["1"]}]}"#;
        assert!(matches!(ObstructionConfig::from_json(bad), Err(ObstructionError::ClassLength { .. })));
        let zero = r#"{"k":2,"points":[{"id":"x1","c":"0","class":["1"]}]}"#;
        assert!(matches!(ObstructionConfig::from_json(zero), Err(ObstructionError::ZeroConstant { .. })));
    }
}

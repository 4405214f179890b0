//! Dynkin shape recognition and root combinatorics: positive roots by
//! closure, the affine kernel vector and Coxeter number, the weight set of
//! the affine grading, very-real witnesses, and the edge-character rank
//! cases.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, FieldSpec};
use crate::graph::{SimpleGraph, WeightVec};
use crate::linalg::{solve_in_span, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynkinTag {
    FiniteA(usize),
    FiniteD(usize),
    FiniteE(u8),
    AffineA(usize),
    AffineD(usize),
    AffineE(u8),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinClass {
    pub tag: DynkinTag,
    /// For affine types, the smallest vertex index with kernel coefficient 1.
    pub distinguished_vertex: Option<usize>,
}

impl DynkinClass {
    pub fn is_finite(&self) -> bool {
        matches!(
            self.tag,
            DynkinTag::FiniteA(_) | DynkinTag::FiniteD(_) | DynkinTag::FiniteE(_)
        )
    }

    pub fn is_affine(&self) -> bool {
        matches!(
            self.tag,
            DynkinTag::AffineA(_) | DynkinTag::AffineD(_) | DynkinTag::AffineE(_)
        )
    }

    pub fn name(&self) -> String {
        match self.tag {
            DynkinTag::FiniteA(n) => format!("A{n}"),
            DynkinTag::FiniteD(n) => format!("D{n}"),
            DynkinTag::FiniteE(n) => format!("E{n}"),
            DynkinTag::AffineA(n) => format!("A{n}~"),
            DynkinTag::AffineD(n) => format!("D{n}~"),
            DynkinTag::AffineE(n) => format!("E{n}~"),
            DynkinTag::Other => "other".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynkinError {
    #[error("diagram is not of finite Dynkin type")]
    NotFiniteType,
    #[error("diagram is not of affine Dynkin type")]
    NotAffineType,
    #[error("diagram is neither finite nor affine Dynkin type")]
    NotDynkin,
    #[error("unknown diagram name {0:?}")]
    UnknownName(String),
}

/// Arm lengths seen from `center`, sorted; empty if some arm branches.
fn arm_lengths(g: &SimpleGraph, center: usize) -> Vec<usize> {
    let mut arms = Vec::new();
    for nb in g.neighbors(center) {
        let mut len = 1;
        let mut prev = center;
        let mut cur = nb;
        loop {
            let next: Vec<usize> = g
                .neighbors(cur)
                .into_iter()
                .filter(|&w| w != prev)
                .collect();
            match next.as_slice() {
                [] => break,
                [w] => {
                    prev = cur;
                    cur = *w;
                    len += 1;
                }
                _ => return vec![],
            }
        }
        arms.push(len);
    }
    arms.sort_unstable();
    arms
}

pub fn classify(g: &SimpleGraph) -> DynkinClass {
    let n = g.n();
    let m = g.edges().len();
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = degrees.iter().copied().max().unwrap_or(0);
    let tag = if m == n && max_deg == 2 {
        DynkinTag::AffineA(n - 1)
    } else if m + 1 == n {
        let deg3: Vec<usize> = (0..n).filter(|&v| degrees[v] == 3).collect();
        if max_deg <= 2 {
            DynkinTag::FiniteA(n)
        } else if max_deg == 3 && deg3.len() == 1 {
            match arm_lengths(g, deg3[0]).as_slice() {
                [1, 1, _] => DynkinTag::FiniteD(n),
                [1, 2, 2] => DynkinTag::FiniteE(6),
                [1, 2, 3] => DynkinTag::FiniteE(7),
                [1, 2, 4] => DynkinTag::FiniteE(8),
                [2, 2, 2] => DynkinTag::AffineE(6),
                [1, 3, 3] => DynkinTag::AffineE(7),
                [1, 2, 5] => DynkinTag::AffineE(8),
                _ => DynkinTag::Other,
            }
        } else if max_deg == 3 && deg3.len() == 2 {
            // tree with exactly two branch nodes: each carries two leaf
            // prongs joined by a path, the doubly forked shape
            DynkinTag::AffineD(n - 1)
        } else if max_deg == 4 && n == 5 {
            DynkinTag::AffineD(4)
        } else {
            DynkinTag::Other
        }
    } else {
        DynkinTag::Other
    };
    let class = DynkinClass {
        tag,
        distinguished_vertex: None,
    };
    if !class.is_affine() {
        return class;
    }
    let (delta, _) = delta_and_coxeter(g).expect("affine shape has a kernel vector");
    let distinguished = (0..n).find(|&v| delta.0[v] == 1);
    DynkinClass {
        tag,
        distinguished_vertex: Some(distinguished.expect("affine kernel has a coefficient-1 entry")),
    }
}

/// Positive roots of a finite-type diagram, by closure: starting from the
/// simple roots, add beta + alpha_x whenever <beta, alpha_x> < 0.
pub fn positive_roots(g: &SimpleGraph) -> Result<BTreeSet<WeightVec>, DynkinError> {
    if !classify(g).is_finite() {
        return Err(DynkinError::NotFiniteType);
    }
    let n = g.n();
    let mut roots: BTreeSet<WeightVec> = (0..n).map(|i| WeightVec::unit(n, i)).collect();
    loop {
        let mut fresh = Vec::new();
        for beta in &roots {
            for x in 0..n {
                if g.bilinear(beta, &WeightVec::unit(n, x)) < 0 {
                    let gamma = {
                        let mut v = beta.clone();
                        v.0[x] += 1;
                        v
                    };
                    if !roots.contains(&gamma) {
                        fresh.push(gamma);
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        roots.extend(fresh);
    }
    for beta in &roots {
        assert_eq!(g.bilinear(beta, beta), 2, "closure produced a non-root");
    }
    Ok(roots)
}

/// Primitive positive kernel vector of the Cartan matrix and its height.
pub fn delta_and_coxeter(g: &SimpleGraph) -> Result<(WeightVec, i64), DynkinError> {
    let n = g.n();
    let cartan = g.cartan();
    let rows: Vec<Vec<BigRational>> = cartan
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::int).collect())
        .collect();
    let m = Matrix::from_rows(FieldSpec::Rationals, rows).expect("integer entries");
    let kernel = m.kernel_basis();
    if kernel.len() != 1 {
        return Err(DynkinError::NotAffineType);
    }
    let v = &kernel[0];
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for c in &ints {
        gcd = gcd.gcd(c);
    }
    for c in &mut ints {
        *c = &*c / &gcd;
    }
    if ints.iter().any(|c| c.is_negative()) {
        for c in &mut ints {
            *c = -&*c;
        }
    }
    let mut delta = WeightVec::zero(n);
    for (i, c) in ints.iter().enumerate() {
        let coeff: i64 = i64::try_from(c).map_err(|_| DynkinError::NotAffineType)?;
        if coeff <= 0 {
            return Err(DynkinError::NotAffineType);
        }
        delta.0[i] = coeff;
    }
    let height = delta.height();
    Ok((delta, height))
}

/// Root data of an affine diagram: the distinguished vertex, delta, the
/// embedded positive roots of the finite part, the lowest root theta, and
/// the full weight set of the graded algebra.
#[derive(Debug, Clone)]
pub struct AffineRootData {
    pub x0: usize,
    pub delta: WeightVec,
    pub coxeter: i64,
    /// Positive roots of the diagram minus x0, in full-vertex coordinates.
    pub positive0: BTreeSet<WeightVec>,
    pub theta: WeightVec,
    pub theta_set: BTreeSet<WeightVec>,
}

pub fn theta_weights(g: &SimpleGraph) -> Result<AffineRootData, DynkinError> {
    let class = classify(g);
    if !class.is_affine() {
        return Err(DynkinError::NotAffineType);
    }
    let x0 = class.distinguished_vertex.unwrap();
    let (delta, coxeter) = delta_and_coxeter(g)?;
    let (g0, map) = g.without_vertex(x0).expect("finite part stays connected");
    let n = g.n();
    let positive0: BTreeSet<WeightVec> = positive_roots(&g0)?
        .into_iter()
        .map(|beta0| {
            let mut full = WeightVec::zero(n);
            for (sub, &orig) in map.iter().enumerate() {
                full.0[orig] = beta0.0[sub];
            }
            full
        })
        .collect();
    let highest = positive0
        .iter()
        .max_by_key(|b| b.height())
        .expect("nonempty root set")
        .clone();
    assert_eq!(
        highest.plus(&WeightVec::unit(n, x0)),
        delta,
        "delta minus the highest root is the distinguished simple root"
    );
    let theta = highest.neg();
    let mut theta_set = positive0.clone();
    for beta in &positive0 {
        theta_set.insert(delta.minus(beta));
    }
    theta_set.insert(delta.clone());
    assert_eq!(theta_set.len(), 2 * positive0.len() + 1);
    Ok(AffineRootData {
        x0,
        delta,
        coxeter,
        positive0,
        theta,
        theta_set,
    })
}

/// A word (x_d, ..., x_1) of weight beta whose partial sums pair to -1 with
/// each next letter, or None.
pub fn is_very_real(g: &SimpleGraph, beta: &WeightVec) -> Option<crate::word::MonomialWord> {
    if beta.is_zero() || !beta.is_nonnegative() {
        return None;
    }
    let n = g.n();
    let mut dead: HashSet<WeightVec> = HashSet::new();
    // letters chosen innermost first; state is the partial sum so far
    fn search(
        g: &SimpleGraph,
        beta: &WeightVec,
        sum: &WeightVec,
        word_rev: &mut Vec<usize>,
        dead: &mut HashSet<WeightVec>,
    ) -> bool {
        if sum == beta {
            return true;
        }
        if dead.contains(sum) {
            return false;
        }
        let n = g.n();
        for x in 0..n {
            if beta.0[x] == sum.0[x] {
                continue;
            }
            if !sum.is_zero() && g.bilinear(&WeightVec::unit(n, x), sum) != -1 {
                continue;
            }
            let mut next = sum.clone();
            next.0[x] += 1;
            word_rev.push(x);
            if search(g, beta, &next, word_rev, dead) {
                return true;
            }
            word_rev.pop();
        }
        dead.insert(sum.clone());
        false
    }
    let mut word_rev = Vec::new();
    if search(g, beta, &WeightVec::zero(n), &mut word_rev, &mut dead) {
        word_rev.reverse();
        Some(crate::word::MonomialWord(word_rev))
    } else {
        None
    }
}

/// Rank data for the edge characters alpha_e and delta.
#[derive(Debug, Clone, PartialEq)]
pub struct CharRankReport {
    /// 1: edges and delta jointly independent; 2: edges independent, delta
    /// in their span; 3: edges dependent.
    pub case_number: u8,
    pub edge_count: usize,
    pub edge_rank: usize,
    pub delta_in_edge_span: bool,
    /// In case 2, delta expressed over the alpha_e, keyed "a-b" by labels.
    pub delta_coefficients: Option<Vec<(String, BigRational)>>,
}

pub fn character_rank_analysis(g: &SimpleGraph) -> Result<CharRankReport, DynkinError> {
    let (delta, _) = delta_and_coxeter(g)?;
    if !classify(g).is_affine() {
        return Err(DynkinError::NotAffineType);
    }
    let n = g.n();
    let edge_vectors: Vec<Vec<BigRational>> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            (0..n)
                .map(|i| BigRational::int((i == a || i == b) as i64))
                .collect()
        })
        .collect();
    let edge_matrix =
        Matrix::from_rows(FieldSpec::Rationals, edge_vectors.clone()).expect("rational entries");
    let edge_rank = edge_matrix.rank();
    let target: Vec<BigRational> = delta.0.iter().map(|&c| BigRational::int(c)).collect();
    let solution =
        solve_in_span(FieldSpec::Rationals, &edge_vectors, &target).expect("same lengths");
    let delta_in_edge_span = solution.is_some();
    let edge_count = g.edges().len();
    let (case_number, delta_coefficients) = if edge_rank < edge_count {
        (3, None)
    } else if let Some(coeffs) = solution.clone() {
        let named = g
            .edges()
            .iter()
            .zip(coeffs)
            .map(|(&(a, b), c)| (format!("{}-{}", g.label(a), g.label(b)), c))
            .collect();
        (2, Some(named))
    } else {
        (1, None)
    };
    Ok(CharRankReport {
        case_number,
        edge_count,
        edge_rank,
        delta_in_edge_span,
        delta_coefficients,
    })
}

/// Built-in diagrams: "A3", "D4", "E6", and their affine extensions "A2~",
/// "D4~", "E8~". The affine vertex is labelled "0" and listed first.
pub fn builtin_diagram(name: &str) -> Result<SimpleGraph, DynkinError> {
    let err = || DynkinError::UnknownName(name.to_string());
    let s = name.trim();
    let affine = s.ends_with('~');
    let core = if affine { &s[..s.len() - 1] } else { s };
    if core.len() < 2 {
        return Err(err());
    }
    let family = core.chars().next().unwrap().to_ascii_uppercase();
    let rank: usize = core[1..].parse().map_err(|_| err())?;
    let label = |k: usize| k.to_string();
    let path_edges = |from: usize, to: usize| -> Vec<(usize, usize)> {
        (from..to).map(|k| (k, k + 1)).collect()
    };
    // edges below are given by vertex label; finite labels are "1".."n",
    // affine shapes prepend label "0", so label k sits at index k - 1
    // (finite) or k (affine)
    let d_edges = |rank: usize| {
        let mut edges = path_edges(1, rank - 2);
        edges.push((rank - 2, rank - 1));
        edges.push((rank - 2, rank));
        edges
    };
    let e_edges = |rank: usize| {
        let mut edges = path_edges(1, rank - 1);
        edges.push((3, rank));
        edges
    };
    let finite = |edges_by_label: Vec<(usize, usize)>, n: usize| {
        let labels: Vec<String> = (1..=n).map(label).collect();
        let edges: Vec<(usize, usize)> = edges_by_label
            .iter()
            .map(|&(a, b)| (a - 1, b - 1))
            .collect();
        SimpleGraph::new(labels, &edges).expect("builtin shape is valid")
    };
    let affinize = |edges_by_label: Vec<(usize, usize)>, n: usize, attach: &[usize]| {
        let labels: Vec<String> = (0..=n).map(label).collect();
        let mut edges: Vec<(usize, usize)> = edges_by_label.clone();
        for &v in attach {
            edges.push((0, v));
        }
        SimpleGraph::new(labels, &edges).expect("builtin shape is valid")
    };
    match (family, affine) {
        ('A', false) if rank >= 1 => Ok(finite(path_edges(1, rank), rank)),
        ('A', true) if rank >= 2 => Ok(affinize(path_edges(1, rank), rank, &[1, rank])),
        ('D', false) if rank >= 4 => Ok(finite(d_edges(rank), rank)),
        ('D', true) if rank >= 4 => Ok(affinize(d_edges(rank), rank, &[2])),
        ('E', false) if (6..=8).contains(&rank) => Ok(finite(e_edges(rank), rank)),
        ('E', true) if (6..=8).contains(&rank) => {
            let attach = match rank {
                6 => 6,
                7 => 1,
                _ => 7,
            };
            Ok(affinize(e_edges(rank), rank, &[attach]))
        }
        _ => Err(err()),
    }
}

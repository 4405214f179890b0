//! Shared helpers for the integration suites: a brute-force model of the
//! relation quotient inside the tensor algebra, and random member
//! parameters for Dynkin diagrams.
#![allow(dead_code)]

use std::collections::BTreeMap;

use extremal::dynkin::classify;
use extremal::field::{Field, FieldSpec};
use extremal::graph::{SimpleGraph, WeightVec};
use extremal::lf::{complete_parameters, ParameterSet};
use extremal::sandwich::SandwichAlgebra;
use extremal::BigRational;
use num_traits::Zero;
use rand::Rng;

pub type Q = BigRational;
pub type TWord = Vec<usize>;
/// Tensor-algebra element; every key has the same letter content.
pub type Tensor = BTreeMap<TWord, Q>;

pub fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn t_add(acc: &mut Tensor, w: TWord, c: Q) {
    let entry = acc.entry(w).or_insert_with(Q::zero);
    *entry = entry.clone() + c;
    if acc.values().any(|v| v.is_zero()) {
        acc.retain(|_, v| !v.is_zero());
    }
}

fn t_bracket(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut ab = wa.clone();
            ab.extend_from_slice(wb);
            t_add(&mut out, ab, ca.clone() * cb.clone());
            let mut ba = wb.clone();
            ba.extend_from_slice(wa);
            t_add(&mut out, ba, -(ca.clone() * cb.clone()));
        }
    }
    out
}

fn letter(i: usize) -> Tensor {
    let mut t = Tensor::new();
    t.insert(vec![i], Q::int(1));
    t
}

/// All words with the given letter content, lexicographically.
pub fn words_with_content(mu: &[usize]) -> Vec<TWord> {
    if mu.iter().all(|&m| m == 0) {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..mu.len() {
        if mu[i] == 0 {
            continue;
        }
        let mut rest = mu.to_vec();
        rest[i] -= 1;
        for tail in words_with_content(&rest) {
            let mut w = vec![i];
            w.extend(tail);
            out.push(w);
        }
    }
    out
}

/// Lyndon: strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[usize]) -> bool {
    (1..w.len()).all(|s| w < &w[s..])
}

pub fn lyndon_words(mu: &[usize]) -> Vec<TWord> {
    words_with_content(mu)
        .into_iter()
        .filter(|w| is_lyndon(w))
        .collect()
}

/// Chen-Fox-Lyndon bracketing: split off the longest proper Lyndon suffix.
pub fn lyndon_bracketing(w: &[usize]) -> Tensor {
    if w.len() == 1 {
        return letter(w[0]);
    }
    let split = (1..w.len())
        .find(|&s| is_lyndon(&w[s..]))
        .expect("single letters are Lyndon");
    t_bracket(&lyndon_bracketing(&w[..split]), &lyndon_bracketing(&w[split..]))
}

fn sub_contents(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &b in bound {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=b {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn content_minus(mu: &[usize], sub: &[usize]) -> Option<Vec<usize>> {
    mu.iter()
        .zip(sub)
        .map(|(&m, &s)| m.checked_sub(s))
        .collect()
}

/// Multiplicity of the letter content `mu` in the free Lie algebra on the
/// graph's vertices modulo commutation on non-edges and all sandwich
/// relators, computed directly in the tensor algebra: Lyndon dimension
/// minus the rank of the padded relator span.
pub fn oracle_multiplicity(g: &SimpleGraph, mu: &[usize]) -> usize {
    let n = g.n();
    assert_eq!(mu.len(), n);
    let lyndon = lyndon_words(mu);
    if lyndon.is_empty() {
        return 0;
    }

    // relators of exact content nu, for every nu <= mu that can carry one
    let mut relators: Vec<(Vec<usize>, Tensor)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x < y && !g.adjacent(x, y) {
                let mut nu = vec![0; n];
                nu[x] += 1;
                nu[y] += 1;
                relators.push((nu, t_bracket(&letter(x), &letter(y))));
            }
        }
    }
    for x in 0..n {
        let mut head = vec![0usize; n];
        head[x] = 2;
        let Some(rem) = content_minus(mu, &head) else {
            continue;
        };
        for nu in sub_contents(&rem) {
            if nu.iter().sum::<usize>() == 0 {
                continue;
            }
            for u in lyndon_words(&nu) {
                let inner = t_bracket(&letter(x), &lyndon_bracketing(&u));
                let mut total = nu.clone();
                total[x] += 2;
                relators.push((total, t_bracket(&letter(x), &inner)));
            }
        }
    }

    // pad each relator with every left-normed letter sequence filling mu
    let mut rows_t: Vec<Tensor> = Vec::new();
    for (nu, r) in &relators {
        let Some(pad) = content_minus(mu, nu) else {
            continue;
        };
        for p in words_with_content(&pad) {
            let mut elem = r.clone();
            for &z in p.iter().rev() {
                elem = t_bracket(&letter(z), &elem);
            }
            if !elem.is_empty() {
                rows_t.push(elem);
            }
        }
    }

    let words = words_with_content(mu);
    let col: BTreeMap<&TWord, usize> = words.iter().zip(0..).collect();
    let to_row = |t: &Tensor| -> Vec<Q> {
        let mut row = vec![Q::zero(); words.len()];
        for (w, c) in t {
            row[col[w]] = c.clone();
        }
        row
    };

    // sanity: the Lyndon bracketings really are independent
    let lyndon_rows: Vec<Vec<Q>> = lyndon.iter().map(|w| to_row(&lyndon_bracketing(w))).collect();
    let lyndon_rank = extremal::linalg::Matrix::from_rows(q(), lyndon_rows)
        .expect("rational rows")
        .rank();
    assert_eq!(lyndon_rank, lyndon.len(), "Lyndon bracketings independent");

    if rows_t.is_empty() {
        return lyndon.len();
    }
    let rows: Vec<Vec<Q>> = rows_t.iter().map(&to_row).collect();
    let rank = extremal::linalg::Matrix::from_rows(q(), rows)
        .expect("rational rows")
        .rank();
    lyndon.len() - rank
}

/// All length-n contents with the given total degree.
pub fn contents_of_degree(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for rest in contents_of_degree(n - 1, d - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

pub fn weight_of(mu: &[usize]) -> WeightVec {
    WeightVec(mu.iter().map(|&m| m as i64).collect())
}

/// Random edge values (plus a delta value on affine diagrams) completed to
/// a full parameter set. Panics if the graph is not a Dynkin diagram.
pub fn random_member_params<K: Field, R: Rng>(
    sand: &SandwichAlgebra<K>,
    rng: &mut R,
) -> ParameterSet<K> {
    let g = sand.graph();
    let spec = sand.spec();
    let mut edges = BTreeMap::new();
    for &(a, b) in g.edges() {
        edges.insert((a, b), K::sample(spec, rng));
    }
    let delta = classify(g)
        .is_affine()
        .then(|| K::sample(spec, rng));
    complete_parameters(sand, &edges, delta).expect("Dynkin diagrams complete")
}

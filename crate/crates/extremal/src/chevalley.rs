//! Chevalley algebras of simply laced finite type: root-space bases with
//! integer structure constants, extremality tests, the semidirect
//! extension by the lowest-weight quotient module, and subalgebra closure.

use std::collections::{BTreeMap, VecDeque};

use crate::dynkin::{classify, positive_roots};
use crate::field::{power, Field, FieldSpec};
use crate::graph::{SimpleGraph, WeightVec};
use crate::sandwich::map_add;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChevalleyError {
    #[error("diagram is not of finite Dynkin type")]
    NotFiniteType,
    #[error("element is not extremal: ad^2 against {0} leaves the line")]
    NotExtremal(String),
}

/// Anything with a bracket on sparse coordinate vectors. Coordinates are
/// indices into a fixed basis of the ambient space.
pub trait AmbientAlgebra<K: Field> {
    fn spec(&self) -> FieldSpec;
    fn dim(&self) -> usize;
    fn bracket(&self, u: &[(usize, K)], v: &[(usize, K)]) -> Vec<(usize, K)>;
}

pub fn unit<K: Field>(spec: FieldSpec, idx: usize) -> Vec<(usize, K)> {
    vec![(idx, K::embed(spec, 1))]
}

/// The scalar c with w = c v, if one exists; None when w leaves the line.
pub fn proportional<K: Field>(spec: FieldSpec, v: &[(usize, K)], w: &[(usize, K)]) -> Option<K> {
    if w.is_empty() {
        return Some(K::embed(spec, 0));
    }
    if v.is_empty() || v.len() != w.len() {
        return None;
    }
    let ratio = w[0].1.clone() / v[0].1.clone();
    for ((vi, vc), (wi, wc)) in v.iter().zip(w.iter()) {
        if vi != wi {
            return None;
        }
        let diff = (wc.clone() - ratio.clone() * vc.clone()).canonical(spec);
        if !diff.is_zero() {
            return None;
        }
    }
    Some(ratio.canonical(spec))
}

pub fn is_extremal<K: Field, A: AmbientAlgebra<K>>(alg: &A, v: &[(usize, K)]) -> bool {
    let spec = alg.spec();
    for b in 0..alg.dim() {
        let w = alg.bracket(v, &alg.bracket(v, &unit(spec, b)));
        if proportional(spec, v, &w).is_none() {
            return false;
        }
    }
    true
}

/// kappa(v, w) from [v,[v,w]] = kappa(v,w) v.
pub fn extremal_form<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    v: &[(usize, K)],
    w: &[(usize, K)],
) -> Result<K, ChevalleyError> {
    let spec = alg.spec();
    let double = alg.bracket(v, &alg.bracket(v, w));
    proportional(spec, v, &double)
        .ok_or_else(|| ChevalleyError::NotExtremal(format!("{:?}", w.first().map(|p| p.0))))
}

/// Iterated span-and-bracket: the dimension and an echelonized basis of
/// the subalgebra generated by the given elements.
pub fn subalgebra_closure<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    generators: &[Vec<(usize, K)>],
) -> (usize, Vec<Vec<(usize, K)>>) {
    let spec = alg.spec();
    let mut rows: BTreeMap<usize, Vec<(usize, K)>> = BTreeMap::new();
    let mut members: Vec<Vec<(usize, K)>> = Vec::new();
    let mut queue: VecDeque<Vec<(usize, K)>> = generators.iter().cloned().collect();
    while let Some(mut v) = queue.pop_front() {
        loop {
            let Some((lead, coeff)) = v.first().cloned() else {
                break;
            };
            let Some(row) = rows.get(&lead) else {
                break;
            };
            let mut acc: BTreeMap<usize, K> = v.into_iter().collect();
            for (i, c) in row {
                map_add(spec, &mut acc, *i, K::embed(spec, 0) - coeff.clone() * c.clone());
            }
            v = acc.into_iter().collect();
        }
        if v.is_empty() {
            continue;
        }
        let lead = v[0].0;
        let inv = v[0].1.inv().expect("leading coefficient is nonzero");
        let v: Vec<(usize, K)> = v
            .into_iter()
            .map(|(i, c)| (i, (c * inv.clone()).canonical(spec)))
            .collect();
        for m in &members {
            queue.push_back(alg.bracket(&v, m));
        }
        members.push(v.clone());
        rows.insert(lead, v);
    }
    (members.len(), members)
}

/// First basis triple violating Jacobi, if any.
pub fn jacobi_violation<K: Field, A: AmbientAlgebra<K>>(alg: &A) -> Option<(usize, usize, usize)> {
    let spec = alg.spec();
    let dim = alg.dim();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let ij = alg.bracket(&unit(spec, i), &unit(spec, j));
            for k in (j + 1)..dim {
                let jk = alg.bracket(&unit(spec, j), &unit(spec, k));
                let ki = alg.bracket(&unit(spec, k), &unit(spec, i));
                let mut acc: BTreeMap<usize, K> = BTreeMap::new();
                for (m, c) in alg.bracket(&ij, &unit(spec, k)) {
                    map_add(spec, &mut acc, m, c);
                }
                for (m, c) in alg.bracket(&jk, &unit(spec, i)) {
                    map_add(spec, &mut acc, m, c);
                }
                for (m, c) in alg.bracket(&ki, &unit(spec, j)) {
                    map_add(spec, &mut acc, m, c);
                }
                if !acc.is_empty() {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Basis: H_x for the vertices, then E_beta for every root, positive
/// roots first. Signs come from a bimultiplicative asymmetry function on
/// the root lattice.
#[derive(Debug)]
pub struct ChevalleyAlgebra<K: Field> {
    spec: FieldSpec,
    graph: SimpleGraph,
    roots: Vec<WeightVec>,
    npos: usize,
    root_index: BTreeMap<WeightVec, usize>,
    weights: Vec<WeightVec>,
    table: Vec<Vec<Vec<(usize, K)>>>,
}

impl<K: Field> AmbientAlgebra<K> for ChevalleyAlgebra<K> {
    fn spec(&self) -> FieldSpec {
        self.spec
    }

    fn dim(&self) -> usize {
        self.table.len()
    }

    fn bracket(&self, u: &[(usize, K)], v: &[(usize, K)]) -> Vec<(usize, K)> {
        bracket_table(self.spec, &self.table, u, v)
    }
}

fn bracket_table<K: Field>(
    spec: FieldSpec,
    table: &[Vec<Vec<(usize, K)>>],
    u: &[(usize, K)],
    v: &[(usize, K)],
) -> Vec<(usize, K)> {
    let mut acc: BTreeMap<usize, K> = BTreeMap::new();
    for (i, a) in u {
        for (j, b) in v {
            for (m, c) in &table[*i][*j] {
                map_add(spec, &mut acc, *m, a.clone() * b.clone() * c.clone());
            }
        }
    }
    acc.into_iter().collect()
}

/// exponent parity of the asymmetry function on lattice vectors:
/// -1 on (x,x) and on forward edges, +1 on everything else, extended
/// bimultiplicatively.
fn epsilon_sign(g: &SimpleGraph, alpha: &WeightVec, beta: &WeightVec) -> i64 {
    let mut parity = 0i64;
    for x in 0..g.n() {
        for y in 0..g.n() {
            if x == y || (x < y && g.adjacent(x, y)) {
                parity += alpha.0[x] * beta.0[y];
            }
        }
    }
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Structure constant of [E_alpha, E_beta] when alpha+beta is a root.
/// The raw asymmetry function pairs with [E_alpha, E_{-alpha}] = -H_alpha;
/// rescaling the negative root vectors restores the +H_alpha convention
/// and twists the constant by the sign characters of the three roots.
fn root_sum_sign(g: &SimpleGraph, alpha: &WeightVec, beta: &WeightVec, sum: &WeightVec) -> i64 {
    let sigma = |w: &WeightVec| if w.is_nonnegative() { 1 } else { -1 };
    sigma(alpha) * sigma(beta) * sigma(sum) * epsilon_sign(g, alpha, beta)
}

pub fn build_chevalley<K: Field>(
    g0: &SimpleGraph,
    spec: FieldSpec,
) -> Result<ChevalleyAlgebra<K>, ChevalleyError> {
    if !classify(g0).is_finite() {
        return Err(ChevalleyError::NotFiniteType);
    }
    let n = g0.n();
    let positives = positive_roots(g0).map_err(|_| ChevalleyError::NotFiniteType)?;
    let npos = positives.len();
    let mut roots: Vec<WeightVec> = positives.into_iter().collect();
    for r in 0..npos {
        let neg = roots[r].neg();
        roots.push(neg);
    }
    let mut root_index = BTreeMap::new();
    for (r, beta) in roots.iter().enumerate() {
        root_index.insert(beta.clone(), n + r);
    }
    let dim = n + roots.len();
    let mut weights = vec![WeightVec::zero(n); n];
    weights.extend(roots.iter().cloned());

    let mut table = vec![vec![Vec::new(); dim]; dim];
    for a in 0..n {
        let alpha_a = WeightVec::unit(n, a);
        for (r, beta) in roots.iter().enumerate() {
            let pairing = g0.bilinear(&alpha_a, beta);
            if pairing != 0 {
                let c = K::embed(spec, pairing);
                table[a][n + r] = vec![(n + r, c.clone())];
                table[n + r][a] = vec![(n + r, K::embed(spec, 0) - c)];
            }
        }
    }
    for (r, alpha) in roots.iter().enumerate() {
        for (s, beta) in roots.iter().enumerate() {
            let sum = alpha.plus(beta);
            if sum.is_zero() {
                let mut h = Vec::new();
                for x in 0..n {
                    if alpha.0[x] != 0 {
                        h.push((x, K::embed(spec, alpha.0[x])));
                    }
                }
                table[n + r][n + s] = h;
            } else if let Some(&idx) = root_index.get(&sum) {
                let sign = root_sum_sign(g0, alpha, beta, &sum);
                table[n + r][n + s] = vec![(idx, K::embed(spec, sign))];
            }
        }
    }

    let alg = ChevalleyAlgebra {
        spec,
        graph: g0.clone(),
        roots,
        npos,
        root_index,
        weights,
        table,
    };
    assert_eq!(
        jacobi_violation(&alg),
        None,
        "asymmetry-function signs satisfy Jacobi"
    );
    alg.assert_antisymmetric();
    Ok(alg)
}

impl<K: Field> ChevalleyAlgebra<K> {
    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn dimension(&self) -> usize {
        self.table.len()
    }

    pub fn rank(&self) -> usize {
        self.graph.n()
    }

    pub fn roots(&self) -> &[WeightVec] {
        &self.roots
    }

    pub fn positive_count(&self) -> usize {
        self.npos
    }

    /// Basis weight: zero on the Cartan part, the root on root vectors.
    pub fn weight(&self, i: usize) -> &WeightVec {
        &self.weights[i]
    }

    pub fn h_index(&self, x: usize) -> usize {
        x
    }

    pub fn e_index(&self, beta: &WeightVec) -> Option<usize> {
        self.root_index.get(beta).copied()
    }

    pub fn highest_root(&self) -> &WeightVec {
        let mut best = &self.roots[0];
        for beta in &self.roots[..self.npos] {
            if beta.height() > best.height() {
                best = beta;
            }
        }
        best
    }

    /// The sl2 triple (E, H, F) on the simple root of a vertex.
    pub fn simple_triple(&self, x: usize) -> (Vec<(usize, K)>, Vec<(usize, K)>, Vec<(usize, K)>) {
        let n = self.graph.n();
        let alpha = WeightVec::unit(n, x);
        let e = unit(self.spec, self.e_index(&alpha).unwrap());
        let h = unit(self.spec, x);
        let f = unit(self.spec, self.e_index(&alpha.neg()).unwrap());
        (e, h, f)
    }

    /// The sl2 triple on the lowest root: E at weight theta, F at -theta,
    /// H their bracket.
    pub fn lowest_triple(&self) -> (Vec<(usize, K)>, Vec<(usize, K)>, Vec<(usize, K)>) {
        let high = self.highest_root().clone();
        let low = high.neg();
        let e = unit(self.spec, self.e_index(&low).unwrap());
        let f = unit(self.spec, self.e_index(&high).unwrap());
        let h = self.bracket(&e, &f);
        (e, h, f)
    }

    /// Scales every root vector by s^beta; the adjoint action of the
    /// diagonal torus point with simple-root characters s.
    pub fn torus_scale(&self, s: &[K], v: &[(usize, K)]) -> Vec<(usize, K)> {
        assert_eq!(s.len(), self.graph.n());
        v.iter()
            .map(|(i, c)| {
                let mut factor = K::one();
                for (x, &e) in self.weights[*i].0.iter().enumerate() {
                    factor = factor * power(&s[x], e);
                }
                (*i, (factor * c.clone()).canonical(self.spec))
            })
            .collect()
    }

    fn assert_antisymmetric(&self) {
        let dim = self.dimension();
        for i in 0..dim {
            for j in i..dim {
                let mut acc: BTreeMap<usize, K> = BTreeMap::new();
                for (m, c) in &self.table[i][j] {
                    map_add(self.spec, &mut acc, *m, c.clone());
                }
                for (m, c) in &self.table[j][i] {
                    map_add(self.spec, &mut acc, *m, c.clone());
                }
                assert!(acc.is_empty(), "antisymmetry at ({i},{j})");
            }
        }
    }
}

/// n+ acting on itself and on g/n+ with the trivial bracket on the
/// quotient summand. Basis: the positive root vectors, then the images
/// of H_x and of the negative root vectors. Weights live over the
/// extended vertex set, the extending coordinate last: a positive root
/// keeps its weight, the image of g_gamma sits at delta + gamma with
/// delta = theta + the new coordinate.
pub struct SemidirectAlgebra<K: Field> {
    spec: FieldSpec,
    npos: usize,
    weights: Vec<WeightVec>,
    delta: WeightVec,
    table: Vec<Vec<Vec<(usize, K)>>>,
}

impl<K: Field> AmbientAlgebra<K> for SemidirectAlgebra<K> {
    fn spec(&self) -> FieldSpec {
        self.spec
    }

    fn dim(&self) -> usize {
        self.table.len()
    }

    fn bracket(&self, u: &[(usize, K)], v: &[(usize, K)]) -> Vec<(usize, K)> {
        bracket_table(self.spec, &self.table, u, v)
    }
}

pub fn semidirect_u<K: Field>(
    g0: &SimpleGraph,
    spec: FieldSpec,
) -> Result<SemidirectAlgebra<K>, ChevalleyError> {
    let g: ChevalleyAlgebra<K> = build_chevalley(g0, spec)?;
    let n = g0.n();
    let npos = g.npos;
    let dim = 2 * npos + n;
    let theta = g.highest_root().clone();

    // chevalley index -> u index: positives to the n+ block, H's and
    // negatives to the quotient block, positive images dropped
    let to_u = |chev: usize| -> Option<usize> {
        if chev < n {
            Some(npos + chev)
        } else if chev < n + npos {
            Some(chev - n)
        } else {
            Some(npos + n + (chev - n - npos))
        }
    };
    let quotient_of = |chev: usize| -> Option<usize> {
        if chev < n {
            Some(npos + chev)
        } else if chev < n + npos {
            None
        } else {
            Some(npos + n + (chev - n - npos))
        }
    };
    let chev_of = |u: usize| -> usize {
        if u < npos {
            n + u
        } else if u < npos + n {
            u - npos
        } else {
            n + u - n // negatives: u = npos + n + k -> chev = n + npos + k
        }
    };

    let extend = |w: &WeightVec, last: i64| {
        let mut coords = w.0.clone();
        coords.push(last);
        WeightVec(coords)
    };
    let mut weights = Vec::with_capacity(dim);
    for r in 0..npos {
        weights.push(extend(&g.roots[r], 0));
    }
    for i in npos..dim {
        let chev = chev_of(i);
        weights.push(extend(&theta.plus(&g.weights[chev]), 1));
    }

    let mut table = vec![vec![Vec::new(); dim]; dim];
    for i in 0..npos {
        for j in 0..npos {
            let chev = &g.table[n + i][n + j];
            table[i][j] = chev
                .iter()
                .map(|(m, c)| (to_u(*m).unwrap(), c.clone()))
                .collect();
        }
        for j in npos..dim {
            let chev = &g.table[n + i][chev_of(j)];
            let entry: Vec<(usize, K)> = chev
                .iter()
                .filter_map(|(m, c)| quotient_of(*m).map(|u| (u, c.clone())))
                .collect();
            table[j][i] = entry
                .iter()
                .map(|(m, c)| (*m, (K::embed(spec, 0) - c.clone()).canonical(spec)))
                .collect();
            table[i][j] = entry;
        }
    }

    let alg = SemidirectAlgebra {
        spec,
        npos,
        weights,
        delta: extend(&theta, 1),
        table,
    };
    assert_eq!(jacobi_violation(&alg), None, "semidirect bracket satisfies Jacobi");
    Ok(alg)
}

impl<K: Field> SemidirectAlgebra<K> {
    pub fn dimension(&self) -> usize {
        self.table.len()
    }

    pub fn weights(&self) -> &[WeightVec] {
        &self.weights
    }

    pub fn delta(&self) -> &WeightVec {
        &self.delta
    }

    pub fn multiplicity(&self, w: &WeightVec) -> usize {
        self.weights.iter().filter(|u| *u == w).count()
    }

    pub fn nplus_count(&self) -> usize {
        self.npos
    }

    /// Index of the image of the highest root vector in the n+ block.
    pub fn theta_index(&self) -> usize {
        let mut best = 0;
        for i in 0..self.npos {
            if self.weights[i].height() > self.weights[best].height() {
                best = i;
            }
        }
        best
    }
}

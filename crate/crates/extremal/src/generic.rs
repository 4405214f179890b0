//! Random tuples of extremal elements in concrete models, the parameter
//! sets they realize, isomorphism certificates, and recognition of
//! algebras generated by extremal elements.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use crate::chevalley::{
    build_chevalley, extremal_form, is_extremal, subalgebra_closure, AmbientAlgebra,
    ChevalleyAlgebra,
};
use crate::dynkin::classify;
use crate::field::{Field, FieldSpec};
use crate::graph::SimpleGraph;
use crate::lf::{build_bracket, membership_in_x, ParameterSet};
use crate::sandwich::{map_add, SandwichAlgebra};

const RETRY_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenericError {
    #[error("(a, b) = (0, 0) spans no extremal element")]
    BothZero,
    #[error("diagram is not of finite Dynkin type")]
    NotFiniteType,
    #[error("diagram is not of affine Dynkin type")]
    NotAffineType,
    #[error("no generic tuple found in {attempts} attempts: {last}")]
    GenericityFailed { attempts: usize, last: String },
    #[error("constraint chain needs a_i != 0 at cycle position {0}")]
    ConstraintUnsolvable(usize),
    #[error("double bracket is not proportional to the generator: {0}")]
    NotProportional(String),
    #[error("certificate comparison failed: {0}")]
    CertificateFailed(String),
    #[error("recognition precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Extremal generators placed at the graph vertices, with the scalars
/// that produced them.
#[derive(Debug, Clone)]
pub struct GeneratorTuple<K> {
    pub elements: Vec<Vec<(usize, K)>>,
    pub pairs: Vec<(K, K)>,
    /// Off-block entries of the modified cycle generator, by cycle
    /// position; None for plain tuples.
    pub c: Option<Vec<K>>,
}

/// a^2 E + ab H - b^2 F: the general extremal element of the sl2 spanned
/// by the triple.
pub fn sl2_extremal<K: Field>(
    spec: FieldSpec,
    a: &K,
    b: &K,
    triple: (&[(usize, K)], &[(usize, K)], &[(usize, K)]),
) -> Result<Vec<(usize, K)>, GenericError> {
    let a = a.clone().canonical(spec);
    let b = b.clone().canonical(spec);
    if a.is_zero() && b.is_zero() {
        return Err(GenericError::BothZero);
    }
    let mut acc: BTreeMap<usize, K> = BTreeMap::new();
    for (i, c) in triple.0 {
        map_add(spec, &mut acc, *i, a.clone() * a.clone() * c.clone());
    }
    for (i, c) in triple.1 {
        map_add(spec, &mut acc, *i, a.clone() * b.clone() * c.clone());
    }
    for (i, c) in triple.2 {
        map_add(spec, &mut acc, *i, K::embed(spec, 0) - b.clone() * b.clone() * c.clone());
    }
    Ok(acc.into_iter().collect())
}

fn draw_pairs<K: Field>(spec: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<(K, K)> {
    (0..n)
        .map(|_| (K::sample_nonzero(spec, rng), K::sample_nonzero(spec, rng)))
        .collect()
}

/// Nonzero, extremal, and commuting across non-edges; the invariants of
/// a well-formed tuple.
fn validate_tuple<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    graph: &SimpleGraph,
    elements: &[Vec<(usize, K)>],
) -> Result<(), GenericError> {
    if elements.len() != graph.n() {
        return Err(GenericError::PreconditionViolated(format!(
            "{} generators for {} vertices",
            elements.len(),
            graph.n()
        )));
    }
    for (x, e) in elements.iter().enumerate() {
        if e.is_empty() {
            return Err(GenericError::PreconditionViolated(format!(
                "generator {} is zero",
                graph.label(x)
            )));
        }
        if !is_extremal(alg, e) {
            return Err(GenericError::PreconditionViolated(format!(
                "generator {} is not extremal",
                graph.label(x)
            )));
        }
    }
    for x in 0..graph.n() {
        for y in (x + 1)..graph.n() {
            if !graph.adjacent(x, y) && !alg.bracket(&elements[x], &elements[y]).is_empty() {
                return Err(GenericError::PreconditionViolated(format!(
                    "non-adjacent generators {} and {} do not commute",
                    graph.label(x),
                    graph.label(y)
                )));
            }
        }
    }
    Ok(())
}

/// Generic means: the tuple generates a subalgebra of the expected
/// dimension and the form is nonzero on every edge.
pub fn verify_generic<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    graph: &SimpleGraph,
    tuple: &GeneratorTuple<K>,
    expected_dim: usize,
) -> Result<(), String> {
    let (dim, _) = subalgebra_closure(alg, &tuple.elements);
    if dim != expected_dim {
        return Err(format!("closure dimension {dim}, expected {expected_dim}"));
    }
    for &(x, y) in graph.edges() {
        let value = extremal_form(alg, &tuple.elements[x], &tuple.elements[y])
            .map_err(|e| e.to_string())?;
        if value.is_zero() {
            return Err(format!(
                "form vanishes on edge {}-{}",
                graph.label(x),
                graph.label(y)
            ));
        }
    }
    Ok(())
}

/// One tuple from explicit scalars, placed on the simple-root triples.
pub fn finite_tuple<K: Field>(
    alg: &ChevalleyAlgebra<K>,
    pairs: &[(K, K)],
) -> Result<GeneratorTuple<K>, GenericError> {
    let spec = alg.spec();
    let mut elements = Vec::with_capacity(pairs.len());
    for (x, (a, b)) in pairs.iter().enumerate() {
        let (e, h, f) = alg.simple_triple(x);
        elements.push(sl2_extremal(spec, a, b, (&e, &h, &f))?);
    }
    validate_tuple(alg, alg.graph(), &elements)?;
    Ok(GeneratorTuple {
        elements,
        pairs: pairs.to_vec(),
        c: None,
    })
}

pub fn realize_finite<K: Field>(
    g0: &SimpleGraph,
    spec: FieldSpec,
    seed: u64,
) -> Result<(ChevalleyAlgebra<K>, GeneratorTuple<K>), GenericError> {
    let alg = build_chevalley(g0, spec).map_err(|_| GenericError::NotFiniteType)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..RETRY_CAP {
        let pairs = draw_pairs(spec, g0.n(), &mut rng);
        let tuple = finite_tuple(&alg, &pairs)?;
        match verify_generic(&alg, g0, &tuple, alg.positive_count()) {
            Ok(()) => return Ok((alg, tuple)),
            Err(reason) => last = reason,
        }
    }
    Err(GenericError::GenericityFailed {
        attempts: RETRY_CAP,
        last,
    })
}

/// An affine tuple lives in the Chevalley algebra of the diagram with the
/// distinguished vertex removed; that vertex gets the sl2 triple on the
/// lowest root.
pub struct AffineRealization<K: Field> {
    pub chevalley: ChevalleyAlgebra<K>,
    pub tuple: GeneratorTuple<K>,
    pub x0: usize,
}

pub fn affine_tuple<K: Field>(
    alg: &ChevalleyAlgebra<K>,
    g: &SimpleGraph,
    x0: usize,
    old_of_new: &[usize],
    pairs: &[(K, K)],
) -> Result<GeneratorTuple<K>, GenericError> {
    let spec = alg.spec();
    let mut new_of_old = vec![usize::MAX; g.n()];
    for (new, &old) in old_of_new.iter().enumerate() {
        new_of_old[old] = new;
    }
    let mut elements = Vec::with_capacity(g.n());
    for (x, (a, b)) in pairs.iter().enumerate() {
        let (e, h, f) = if x == x0 {
            alg.lowest_triple()
        } else {
            alg.simple_triple(new_of_old[x])
        };
        elements.push(sl2_extremal(spec, a, b, (&e, &h, &f))?);
    }
    validate_tuple(alg, g, &elements)?;
    Ok(GeneratorTuple {
        elements,
        pairs: pairs.to_vec(),
        c: None,
    })
}

pub fn realize_affine<K: Field>(
    g: &SimpleGraph,
    spec: FieldSpec,
    seed: u64,
) -> Result<AffineRealization<K>, GenericError> {
    let class = classify(g);
    if !class.is_affine() {
        return Err(GenericError::NotAffineType);
    }
    let x0 = class.distinguished_vertex.expect("affine class has one");
    let (g0, old_of_new) = g.without_vertex(x0).expect("vertex exists");
    let alg = build_chevalley(&g0, spec).map_err(|_| GenericError::NotAffineType)?;
    let expected = alg.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..RETRY_CAP {
        let pairs = draw_pairs(spec, g.n(), &mut rng);
        let tuple = affine_tuple(&alg, g, x0, &old_of_new, &pairs)?;
        match verify_generic(&alg, g, &tuple, expected) {
            Ok(()) => {
                return Ok(AffineRealization {
                    chevalley: alg,
                    tuple,
                    x0,
                })
            }
            Err(reason) => last = reason,
        }
    }
    Err(GenericError::GenericityFailed {
        attempts: RETRY_CAP,
        last,
    })
}

/// n x n matrices under the commutator; coordinates are entries in
/// row-major order.
#[derive(Debug)]
pub struct MatrixAlgebra {
    spec: FieldSpec,
    n: usize,
}

impl MatrixAlgebra {
    pub fn new(spec: FieldSpec, n: usize) -> Self {
        MatrixAlgebra { spec, n }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry_index(&self, row: usize, col: usize) -> usize {
        row * self.n + col
    }

    fn mul<K: Field>(&self, u: &[(usize, K)], v: &[(usize, K)]) -> BTreeMap<usize, K> {
        let mut acc: BTreeMap<usize, K> = BTreeMap::new();
        for (i, a) in u {
            let (r, k) = (i / self.n, i % self.n);
            for (j, b) in v {
                let (k2, c) = (j / self.n, j % self.n);
                if k == k2 {
                    map_add(
                        self.spec,
                        &mut acc,
                        self.entry_index(r, c),
                        a.clone() * b.clone(),
                    );
                }
            }
        }
        acc
    }

    pub fn trace<K: Field>(&self, u: &[(usize, K)]) -> K {
        let mut acc = K::embed(self.spec, 0);
        for (i, a) in u {
            if i / self.n == i % self.n {
                acc = acc + a.clone();
            }
        }
        acc.canonical(self.spec)
    }

    pub fn rank<K: Field>(&self, u: &[(usize, K)]) -> usize {
        let mut rows = vec![vec![K::embed(self.spec, 0); self.n]; self.n];
        for (i, a) in u {
            rows[i / self.n][i % self.n] = a.clone();
        }
        let m = crate::linalg::Matrix::from_rows(self.spec, rows).expect("square layout");
        m.rank()
    }
}

impl<K: Field> AmbientAlgebra<K> for MatrixAlgebra {
    fn spec(&self) -> FieldSpec {
        self.spec
    }

    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn bracket(&self, u: &[(usize, K)], v: &[(usize, K)]) -> Vec<(usize, K)> {
        let mut acc = self.mul(u, v);
        for (idx, c) in self.mul(v, u) {
            map_add(self.spec, &mut acc, idx, K::embed(self.spec, 0) - c);
        }
        acc.into_iter().collect()
    }
}

/// The vertices of a cycle in traversal order, starting at the
/// distinguished vertex and moving toward its smaller neighbor.
pub fn cycle_order(g: &SimpleGraph) -> Result<Vec<usize>, GenericError> {
    let n = g.n();
    if n < 3 || g.edges().len() != n || (0..n).any(|v| g.degree(v) != 2) {
        return Err(GenericError::PreconditionViolated(
            "graph is not a cycle".into(),
        ));
    }
    let start = classify(g).distinguished_vertex.unwrap_or(0);
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = *g.neighbors(start).first().expect("degree two");
    while cur != start {
        order.push(cur);
        let next = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| w != prev)
            .expect("degree two");
        prev = cur;
        cur = next;
    }
    Ok(order)
}

/// Cycle tuple in the n x n matrix model: position p holds the 2x2 block
/// at rows p-1, p (position 0 wraps), and the extended variant replaces
/// position 0 with the rank-1 matrix carrying the off-block column
/// entries c_2, ..., c_{n-1}.
#[derive(Debug)]
pub struct CycleRealization<K: Field> {
    pub matrices: MatrixAlgebra,
    pub tuple: GeneratorTuple<K>,
    pub order: Vec<usize>,
}

fn cycle_block<K: Field>(
    m: &MatrixAlgebra,
    spec: FieldSpec,
    position: usize,
    n: usize,
    a: &K,
    b: &K,
) -> Vec<(usize, K)> {
    let (r0, r1) = if position == 0 {
        (n - 1, 0)
    } else {
        (position - 1, position)
    };
    let entries = [
        (r0, r0, a.clone() * b.clone()),
        (r0, r1, a.clone() * a.clone()),
        (r1, r0, K::embed(spec, 0) - b.clone() * b.clone()),
        (r1, r1, K::embed(spec, 0) - a.clone() * b.clone()),
    ];
    let mut acc: BTreeMap<usize, K> = BTreeMap::new();
    for (r, c, v) in entries {
        map_add(spec, &mut acc, m.entry_index(r, c), v);
    }
    acc.into_iter().collect()
}

pub fn cycle_tuple<K: Field>(
    g: &SimpleGraph,
    spec: FieldSpec,
    pairs: &[(K, K)],
    c2: Option<K>,
) -> Result<CycleRealization<K>, GenericError> {
    let order = cycle_order(g)?;
    let n = g.n();
    let m = MatrixAlgebra::new(spec, n);
    let mut elements_by_position: Vec<Vec<(usize, K)>> = Vec::with_capacity(n);
    let pair_at = |p: usize| -> (K, K) {
        let (a, b) = &pairs[p];
        (a.clone().canonical(spec), b.clone().canonical(spec))
    };
    for p in 0..n {
        let (a, b) = pair_at(p);
        if a.is_zero() && b.is_zero() {
            return Err(GenericError::BothZero);
        }
        elements_by_position.push(cycle_block(&m, spec, p, n, &a, &b));
    }

    let mut c_values = None;
    if let Some(c2) = c2 {
        // c_{i+1} = -b_i c_i / a_i keeps G_0 commuting with the interior
        let mut c = vec![K::embed(spec, 0); n];
        c[2] = c2.canonical(spec);
        for i in 2..(n - 1) {
            let (a, b) = pair_at(i);
            if a.is_zero() {
                return Err(GenericError::ConstraintUnsolvable(i));
            }
            c[i + 1] = ((K::embed(spec, 0) - b) * c[i].clone() / a).canonical(spec);
        }
        let (a0, b0) = pair_at(0);
        let mut u = vec![K::embed(spec, 0); n];
        u[0] = K::embed(spec, 0) - b0.clone();
        u[n - 1] = a0.clone();
        for r in 1..(n - 1) {
            u[r] = c[r + 1].clone();
        }
        let mut acc: BTreeMap<usize, K> = BTreeMap::new();
        for (r, ur) in u.iter().enumerate() {
            map_add(spec, &mut acc, m.entry_index(r, 0), ur.clone() * a0.clone());
            map_add(
                spec,
                &mut acc,
                m.entry_index(r, n - 1),
                ur.clone() * b0.clone(),
            );
        }
        elements_by_position[0] = acc.into_iter().collect();
        c_values = Some(c);
    }

    let mut elements = vec![Vec::new(); n];
    for (p, e) in elements_by_position.into_iter().enumerate() {
        elements[order[p]] = e;
    }
    validate_tuple(&m, g, &elements)?;
    Ok(CycleRealization {
        matrices: m,
        tuple: GeneratorTuple {
            elements,
            pairs: pairs.to_vec(),
            c: c_values,
        },
        order,
    })
}

/// The extended rank-one construction on an even cycle; the only family
/// whose realizations escape the alternating product identity.
pub fn realize_affine_a_odd<K: Field>(
    g: &SimpleGraph,
    spec: FieldSpec,
    seed: u64,
) -> Result<CycleRealization<K>, GenericError> {
    realize_cycle(g, spec, seed, true)
}

pub fn realize_cycle<K: Field>(
    g: &SimpleGraph,
    spec: FieldSpec,
    seed: u64,
    extended: bool,
) -> Result<CycleRealization<K>, GenericError> {
    if extended && g.n() % 2 != 0 {
        return Err(GenericError::PreconditionViolated(
            "extended construction applies to even cycles".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..RETRY_CAP {
        let pairs = draw_pairs::<K>(spec, g.n(), &mut rng);
        let c2 = extended.then(|| K::sample_nonzero(spec, &mut rng));
        let real = cycle_tuple(g, spec, &pairs, c2)?;
        let expected = g.n() * g.n() - 1;
        match verify_generic(&real.matrices, g, &real.tuple, expected) {
            Ok(()) => return Ok(real),
            Err(reason) => last = reason,
        }
    }
    Err(GenericError::GenericityFailed {
        attempts: RETRY_CAP,
        last,
    })
}

/// Both sides of the alternating edge-form product around a cycle:
/// kappa(G_1,G_2)kappa(G_3,G_4)... against kappa(G_0,G_1)kappa(G_2,G_3)...
pub fn subvariety_products<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    tuple: &GeneratorTuple<K>,
    order: &[usize],
) -> Result<(K, K), GenericError> {
    let spec = alg.spec();
    let n = order.len();
    let kappa = |p: usize, q: usize| -> Result<K, GenericError> {
        extremal_form(alg, &tuple.elements[order[p]], &tuple.elements[order[q]])
            .map_err(|e| GenericError::NotProportional(e.to_string()))
    };
    let mut lhs = K::embed(spec, 1);
    let mut rhs = K::embed(spec, 1);
    for k in 0..(n / 2) {
        lhs = lhs * kappa(2 * k + 1, (2 * k + 2) % n)?;
        rhs = rhs * kappa(2 * k, 2 * k + 1)?;
    }
    Ok((lhs.canonical(spec), rhs.canonical(spec)))
}

/// Evaluates every basis monomial on the tuple and reads f_x(b) off the
/// extremal form against G_x.
pub fn realized_parameters<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    tuple: &GeneratorTuple<K>,
    sand: &SandwichAlgebra<K>,
) -> Result<ParameterSet<K>, GenericError> {
    let spec = alg.spec();
    let basis = sand.basis();
    let mut values: Vec<Vec<(usize, K)>> = Vec::with_capacity(basis.len());
    for b in basis {
        let v = match b.tail {
            None => tuple.elements[b.word.0[0]].clone(),
            Some(t) => alg.bracket(&tuple.elements[b.word.0[0]], &values[t]),
        };
        values.push(v);
    }
    let mut params = ParameterSet::zero(spec);
    for x in 0..sand.graph().n() {
        for (i, v) in values.iter().enumerate() {
            let f = extremal_form(alg, &tuple.elements[x], v)
                .map_err(|e| GenericError::NotProportional(e.to_string()))?;
            params.set(x, i, f);
        }
    }
    Ok(params)
}

#[derive(Debug, Clone)]
pub struct GenericCertificate<K> {
    /// Dimension of the subalgebra the tuple generates.
    pub d1: usize,
    /// Dimension of the parameter-zero algebra.
    pub d2: usize,
    pub member: bool,
    pub params: ParameterSet<K>,
}

/// The dimension-plus-quotient argument: a member parameter set whose
/// realized subalgebra has the dimension of the parameter-zero algebra
/// certifies the isomorphism type.
pub fn certify_generic_iso<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    tuple: &GeneratorTuple<K>,
    sand: &SandwichAlgebra<K>,
) -> Result<GenericCertificate<K>, GenericError> {
    let params = realized_parameters(alg, tuple, sand)?;
    let filtered = build_bracket(sand, params.clone());
    let verdict = membership_in_x(&filtered);
    let (d1, _) = subalgebra_closure(alg, &tuple.elements);
    let d2 = sand.dimension();
    if !verdict.member {
        return Err(GenericError::CertificateFailed(format!(
            "realized parameters fail membership: {}",
            verdict.witnesses.join("; ")
        )));
    }
    if d1 != d2 {
        return Err(GenericError::CertificateFailed(format!(
            "generated dimension {d1} differs from target {d2}"
        )));
    }
    Ok(GenericCertificate {
        d1,
        d2,
        member: true,
        params,
    })
}

#[derive(Debug, Clone)]
pub struct Recognition<K> {
    pub params: ParameterSet<K>,
    pub member: bool,
    /// Dimension of the subalgebra the generators span inside the ambient
    /// algebra; a quotient of the universal algebra for the parameters.
    pub quotient_dimension: usize,
    pub l0_dimension: usize,
    pub isomorphic: bool,
}

/// Nonzero extremal generators commuting across non-edges realize a
/// member parameter set, and the subalgebra they generate is a quotient
/// of its universal algebra; equal dimensions upgrade to isomorphism.
pub fn recognize<K: Field, A: AmbientAlgebra<K>>(
    alg: &A,
    generators: &[Vec<(usize, K)>],
    graph: &SimpleGraph,
    sand: &SandwichAlgebra<K>,
) -> Result<Recognition<K>, GenericError> {
    validate_tuple(alg, graph, generators)?;
    let tuple = GeneratorTuple {
        elements: generators.to_vec(),
        pairs: Vec::new(),
        c: None,
    };
    let params = realized_parameters(alg, &tuple, sand)?;
    let filtered = build_bracket(sand, params.clone());
    let verdict = membership_in_x(&filtered);
    let (d1, _) = subalgebra_closure(alg, generators);
    let d2 = sand.dimension();
    Ok(Recognition {
        params,
        member: verdict.member,
        quotient_dimension: d1,
        l0_dimension: d2,
        isomorphic: verdict.member && d1 == d2,
    })
}

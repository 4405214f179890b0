//! Dense exact matrices with reduced row echelon form, kernels, and span
//! membership. Row reduction also returns the transform that certifies the
//! reduction, so callers can replay any row operation on side payloads.



use crate::field::{Field, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("scalar committed to {found} used where {expected} was expected")]
    MixedFields { expected: FieldSpec, found: FieldSpec },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

fn check_spec<K: Field>(spec: FieldSpec, value: &K) -> Result<(), LinAlgError> {
    match value.spec() {
        Some(found) if found != spec => Err(LinAlgError::MixedFields {
            expected: spec,
            found,
        }),
        _ => Ok(()),
    }
}

/// Row-major dense matrix over a single field. Entries are canonicalized on
/// the way in, so stored scalars always carry the matrix spec.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<K> {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<K>,
}

/// Output of [`Matrix::rref`]: `transform * original == reduced` and
/// `pivot_columns` lists the pivot column of each leading row in order.
#[derive(Debug, Clone)]
pub struct Rref<K> {
    pub reduced: Matrix<K>,
    pub pivot_columns: Vec<usize>,
    pub transform: Matrix<K>,
}

impl<K: Field> Matrix<K> {
    pub fn zero(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        let zero = K::zero().canonical(spec);
        Matrix {
            spec,
            rows,
            cols,
            entries: vec![zero; rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(spec, n, n);
        for i in 0..n {
            m.entries[i * n + i] = K::one().canonical(spec);
        }
        m
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<K>>) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n_rows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(LinAlgError::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            for value in row {
                check_spec(spec, &value)?;
                entries.push(value.canonical(spec));
            }
        }
        Ok(Matrix {
            spec,
            rows: n_rows,
            cols,
            entries,
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: K) -> Result<(), LinAlgError> {
        check_spec(self.spec, &value)?;
        self.entries[i * self.cols + j] = value.canonical(self.spec);
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix<K>) -> Result<Matrix<K>, LinAlgError> {
        if self.spec != other.spec {
            return Err(LinAlgError::MixedFields {
                expected: self.spec,
                found: other.spec,
            });
        }
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Matrix<K> = Matrix::zero(self.spec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.entries[i * other.cols + j] = cur + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan elimination tracking the row transform.
    pub fn rref(&self) -> Rref<K> {
        let mut reduced = self.clone();
        let mut transform = Matrix::identity(self.spec, self.rows);
        let mut pivot_columns = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = (lead..self.rows).find(|&r| !reduced.get(r, col).is_zero())
            else {
                continue;
            };
            reduced.swap_rows(lead, pivot_row);
            transform.swap_rows(lead, pivot_row);
            let inv = reduced.get(lead, col).inv().expect("nonzero pivot");
            reduced.scale_row(lead, &inv);
            transform.scale_row(lead, &inv);
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = reduced.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                reduced.add_scaled_row(r, lead, &-factor.clone());
                transform.add_scaled_row(r, lead, &-factor);
            }
            pivot_columns.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        Rref {
            reduced,
            pivot_columns,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivot_columns.len()
    }

    /// Basis of the right kernel, one vector per non-pivot column, ordered by
    /// that column's index. Each vector has a 1 in its defining column.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let rref = self.rref();
        let pivots = &rref.pivot_columns;
        let one = K::one().canonical(self.spec);
        let zero = K::zero().canonical(self.spec);
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivots.contains(&j) {
                continue;
            }
            let mut v = vec![zero.clone(); self.cols];
            v[j] = one.clone();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref.reduced.get(row, j).clone();
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, factor: &K) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            if !self.entries[idx].is_zero() {
                self.entries[idx] = self.entries[idx].clone() * factor.clone();
            }
        }
    }

    /// row[target] += factor * row[source]
    fn add_scaled_row(&mut self, target: usize, source: usize, factor: &K) {
        for j in 0..self.cols {
            let s = self.entries[source * self.cols + j].clone();
            if s.is_zero() {
                continue;
            }
            let idx = target * self.cols + j;
            self.entries[idx] = self.entries[idx].clone() + factor.clone() * s;
        }
    }
}

/// Coefficients expressing `target` in the span of `vectors`, or `None` if it
/// lies outside. Free coefficients are zero.
pub fn solve_in_span<K: Field>(
    spec: FieldSpec,
    vectors: &[Vec<K>],
    target: &[K],
) -> Result<Option<Vec<K>>, LinAlgError> {
    let dim = target.len();
    for v in vectors {
        if v.len() != dim {
            return Err(LinAlgError::DimensionMismatch(format!(
                "span vector of length {} against a target of length {dim}",
                v.len()
            )));
        }
    }
    let n = vectors.len();
    // columns are the span vectors, last column is the target
    let mut rows = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = Vec::with_capacity(n + 1);
        for v in vectors {
            row.push(v[i].clone());
        }
        row.push(target[i].clone());
        rows.push(row);
    }
    let matrix = Matrix::from_rows(spec, rows)?;
    let rref = matrix.rref();
    if rref.pivot_columns.contains(&n) {
        return Ok(None);
    }
    let zero = K::zero().canonical(spec);
    let mut coeffs = vec![zero; n];
    for (row, &pc) in rref.pivot_columns.iter().enumerate() {
        coeffs[pc] = rref.reduced.get(row, n).clone();
    }
    Ok(Some(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<Q> {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(Q::int).collect())
            .collect();
        Matrix::from_rows(FieldSpec::Rationals, rows).unwrap()
    }

    #[test]
    fn rref_rank_deficient() {
        let m = qm(vec![vec![1, 2], vec![2, 4]]);
        let rref = m.rref();
        assert_eq!(rref.pivot_columns, vec![0]);
        assert_eq!(rref.reduced, qm(vec![vec![1, 2], vec![0, 0]]));
        assert_eq!(rref.transform.mul(&m).unwrap(), rref.reduced);
    }

    #[test]
    fn rref_transform_invariant() {
        let m = qm(vec![
            vec![0, 3, 1, 4],
            vec![2, 6, 0, 1],
            vec![2, 9, 1, 5],
            vec![4, 12, 0, 2],
        ]);
        let rref = m.rref();
        assert_eq!(rref.transform.mul(&m).unwrap(), rref.reduced);
        assert_eq!(rref.pivot_columns.len(), m.rank());
        for (row, &pc) in rref.pivot_columns.iter().enumerate() {
            assert_eq!(*rref.reduced.get(row, pc), Q::int(1));
            for other in 0..m.rows() {
                if other != row {
                    assert!(rref.reduced.get(other, pc).is_zero());
                }
            }
        }
    }

    #[test]
    fn rref_over_prime_field() {
        let spec = FieldSpec::prime_field(5).unwrap();
        let rows = vec![
            vec![Fp::int(2), Fp::int(1), Fp::int(3)],
            vec![Fp::int(4), Fp::int(2), Fp::int(2)],
        ];
        let m = Matrix::from_rows(spec, rows).unwrap();
        let rref = m.rref();
        assert_eq!(rref.transform.mul(&m).unwrap(), rref.reduced);
        assert_eq!(rref.pivot_columns, vec![0, 2]);
    }

    #[test]
    fn kernel_of_triangle_gram() {
        let m = qm(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 1);
        assert_eq!(kernel[0], vec![Q::int(1), Q::int(1), Q::int(1)]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = qm(vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![1, 0, 1, 0]]);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            for i in 0..m.rows() {
                let mut acc = Q::int(0);
                for j in 0..m.cols() {
                    acc = acc + m.get(i, j).clone() * v[j].clone();
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn span_membership() {
        let spec = FieldSpec::prime_field(5).unwrap();
        let vectors = vec![
            vec![Fp::int(1), Fp::int(1)],
            vec![Fp::int(1), Fp::int(-1)],
        ];
        let target = vec![Fp::int(0), Fp::int(2)];
        let coeffs = solve_in_span(spec, &vectors, &target).unwrap().unwrap();
        assert_eq!(coeffs, vec![Fp::int(1), Fp::int(4)]);

        let q = FieldSpec::Rationals;
        let vectors: Vec<Vec<Q>> = vec![
            vec![Q::int(1), Q::int(1)],
            vec![Q::int(1), Q::int(-1)],
        ];
        let target = vec![Q::int(0), Q::int(2)];
        let coeffs = solve_in_span(q, &vectors, &target).unwrap().unwrap();
        assert_eq!(coeffs, vec![Q::int(1), Q::int(-1)]);
    }

    #[test]
    fn span_membership_fails_outside() {
        let q = FieldSpec::Rationals;
        let vectors: Vec<Vec<Q>> = vec![vec![Q::int(1), Q::int(0), Q::int(2)]];
        let target = vec![Q::int(0), Q::int(1), Q::int(0)];
        assert_eq!(solve_in_span(q, &vectors, &target).unwrap(), None);
        let empty: Vec<Vec<Q>> = vec![];
        let zero_target = vec![Q::int(0), Q::int(0), Q::int(0)];
        assert_eq!(
            solve_in_span(q, &empty, &zero_target).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn mixed_specs_rejected() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        let f7 = FieldSpec::prime_field(7).unwrap();
        let stray = Fp::embed(f7, 3);
        let err = Matrix::from_rows(f5, vec![vec![stray]]).unwrap_err();
        assert_eq!(
            err,
            LinAlgError::MixedFields {
                expected: f5,
                found: f7
            }
        );
    }

    #[test]
    fn literals_canonicalized_on_entry() {
        let f3 = FieldSpec::prime_field(3).unwrap();
        let m = Matrix::from_rows(f3, vec![vec![Fp::int(3), Fp::int(4)]]).unwrap();
        assert!(m.get(0, 0).is_zero());
        assert_eq!(*m.get(0, 1), Fp::embed(f3, 1));
        assert_eq!(m.rank(), 1);
    }
}

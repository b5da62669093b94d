use crate::linalg::{C64, ZERO};

/// How an assembled operator depends on the evaluation time.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum TimeDependence {
    #[default]
    Static,
    /// Sum of pair terms oscillating as `exp(+-i 2 omega t)`, evaluated at `t`.
    PairPhases { pair_frequencies: Vec<f64>, t: f64 },
}

/// Sparse complex matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
    /// Set by constructions that are hermitian by construction.
    pub hermitian: bool,
    pub time: TimeDependence,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            indptr: vec![0; dim + 1],
            indices: Vec::new(),
            values: Vec::new(),
            hermitian: true,
            time: TimeDependence::Static,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![C64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let rows = diag
            .iter()
            .enumerate()
            .map(|(i, &v)| vec![(i, v)])
            .collect::<Vec<_>>();
        let mut m = Self::from_rows(diag.len(), rows);
        m.hermitian = diag.iter().all(|v| v.im == 0.0);
        m
    }

    /// Rows need not be sorted; duplicate columns are summed and exact zeros
    /// dropped.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, C64)>>) -> Self {
        assert_eq!(rows.len(), dim);
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|e| e.0);
            let mut iter = row.into_iter().peekable();
            while let Some((col, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != col {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != ZERO {
                    debug_assert!(col < dim);
                    indices.push(col);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            dim,
            indptr,
            indices,
            values,
            hermitian: false,
            time: TimeDependence::Static,
        }
    }

    /// Build from columns; `cols[j]` lists `(row, value)` of column `j`.
    pub fn from_columns(dim: usize, cols: Vec<Vec<(usize, C64)>>) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col {
                rows[i].push((j, v));
            }
        }
        Self::from_rows(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let r = self.indptr[i]..self.indptr[i + 1];
        match self.indices[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => ZERO,
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.dim];
        for (i, j, v) in self.triplets() {
            rows[j].push((i, v.conj()));
        }
        let mut out = Self::from_rows(self.dim, rows);
        out.hermitian = self.hermitian;
        out.time = self.time.clone();
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v *= s;
        }
        out.hermitian = self.hermitian && s.im == 0.0;
        out
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let rows = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .map(|(j, v)| (j, v * a))
                    .chain(other.row(i).map(|(j, v)| (j, v * b)))
                    .collect()
            })
            .collect();
        Self::from_rows(self.dim, rows)
    }

    pub fn add(&self, other: &Self) -> Self {
        let one = C64::new(1.0, 0.0);
        let mut out = self.combine(one, other, one);
        out.hermitian = self.hermitian && other.hermitian;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let one = C64::new(1.0, 0.0);
        let mut out = self.combine(one, other, -one);
        out.hermitian = self.hermitian && other.hermitian;
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = vec![ZERO; self.dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.dim];
        let mut rows = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                row.push((j, acc[j]));
                acc[j] = ZERO;
                mark[j] = false;
            }
            touched.clear();
            rows.push(row);
        }
        Self::from_rows(self.dim, rows)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// `{self, other}`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.matmul(other).add(&other.matmul(self))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Entrywise `max |self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            let (mut a, mut b) = (self.row(i).peekable(), other.row(i).peekable());
            loop {
                let d = match (a.peek().copied(), b.peek().copied()) {
                    (None, None) => break,
                    (Some((_, x)), None) => {
                        a.next();
                        x.norm()
                    }
                    (None, Some((_, y))) => {
                        b.next();
                        y.norm()
                    }
                    (Some((ja, x)), Some((jb, y))) => {
                        if ja == jb {
                            a.next();
                            b.next();
                            (x - y).norm()
                        } else if ja < jb {
                            a.next();
                            x.norm()
                        } else {
                            b.next();
                            y.norm()
                        }
                    }
                };
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `max |M - M^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(i, j, _)| i == j)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// `<x| M |x>` (no normalization).
    pub fn expectation(&self, x: &[C64]) -> C64 {
        let mx = self.matvec(x);
        x.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum()
    }

    /// Dense row-major copy; intended for small dimensions.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut out = vec![vec![ZERO; self.dim]; self.dim];
        for (i, j, v) in self.triplets() {
            out[i][j] = v;
        }
        out
    }
}

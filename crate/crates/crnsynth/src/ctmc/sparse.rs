//! Compressed-row storage for the generator matrix.

/// Square sparse matrix in compressed-row layout.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists; entries within a row are
    /// sorted and duplicates summed.
    pub fn from_rows(mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    let n = values.len();
                    values[n - 1] += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                    last = Some(j);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            dim,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// Row-vector product `y = x * A`.
    pub fn vec_mat(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[k]] += xi * self.values[k];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vec_mat_matches_dense() {
        // [[1, 2], [0, 3]]
        let m = CsrMatrix::from_rows(vec![vec![(0, 1.0), (1, 2.0)], vec![(1, 3.0)]]);
        let mut y = vec![0.0; 2];
        m.vec_mat(&[1.0, 10.0], &mut y);
        assert_eq!(y, vec![1.0, 32.0]);
    }

    #[test]
    fn duplicate_entries_are_summed() {
        let m = CsrMatrix::from_rows(vec![vec![(1, 1.0), (1, 2.5)], vec![]]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.row(0).collect::<Vec<_>>(), vec![(1, 3.5)]);
    }
}

use serde::{Deserialize, Serialize};

/// Sparse integer matrix stored by columns.
///
/// Differentials have entries `+-1` (and small sums of them), so columns hold
/// `i32`; elimination copies entries into wider types as needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    /// Column `j` occupies `entries[col_ptr[j]..col_ptr[j + 1]]`, as
    /// `(row, value)` sorted by row with no zero values.
    col_ptr: Vec<usize>,
    entries: Vec<(u32, i32)>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            entries: Vec::new(),
        }
    }

    /// Builds a matrix from columns; entries are sorted and duplicates summed.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i32)>>) -> Self {
        let mut b = ColumnBuilder::new(rows);
        for col in columns {
            b.push_column(col);
        }
        b.finish()
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let columns = (0..c)
            .map(|j| {
                (0..r)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i as u32, i32::try_from(rows[i][j]).expect("entry fits i32")))
                    .collect()
            })
            .collect();
        Self::from_columns(r, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(u32, i32)] {
        &self.entries[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        let col = self.column(j);
        col.binary_search_by_key(&(i as u32), |e| e.0)
            .map_or(0, |k| col[k].1)
    }

    /// `(row, col, value)` triplets in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i32)> + '_ {
        (0..self.cols)
            .flat_map(move |j| self.column(j).iter().map(move |&(i, v)| (i as usize, j, v)))
    }

    /// Product `self * rhs`, with entries accumulated in `i64`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Vec<Vec<(u32, i64)>> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
        (0..rhs.cols)
            .map(|j| {
                acc.clear();
                for &(k, v) in rhs.column(j) {
                    for &(i, w) in self.column(k as usize) {
                        *acc.entry(i).or_insert(0) += v as i64 * w as i64;
                    }
                }
                acc.iter()
                    .filter(|e| *e.1 != 0)
                    .map(|(&i, &v)| (i, v))
                    .collect()
            })
            .collect()
    }

    /// True if `self * rhs` is the zero matrix.
    pub fn product_is_zero(&self, rhs: &SparseMatrix) -> bool {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut acc: std::collections::HashMap<u32, i64> = Default::default();
        (0..rhs.cols).all(|j| {
            acc.clear();
            for &(k, v) in rhs.column(j) {
                for &(i, w) in self.column(k as usize) {
                    *acc.entry(i).or_insert(0) += v as i64 * w as i64;
                }
            }
            acc.values().all(|&x| x == 0)
        })
    }

    /// Entries reduced modulo two.
    pub fn mod2(&self) -> SparseMatrix {
        let mut b = ColumnBuilder::new(self.rows);
        for j in 0..self.cols {
            b.push_column(
                self.column(j)
                    .iter()
                    .filter(|e| e.1 % 2 != 0)
                    .map(|&(i, _)| (i, 1))
                    .collect(),
            );
        }
        b.finish()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v as i64;
        }
        out
    }
}

/// Appends columns one at a time.
pub struct ColumnBuilder {
    rows: usize,
    col_ptr: Vec<usize>,
    entries: Vec<(u32, i32)>,
}

impl ColumnBuilder {
    pub fn new(rows: usize) -> Self {
        ColumnBuilder {
            rows,
            col_ptr: vec![0],
            entries: Vec::new(),
        }
    }

    /// Adds a column given as unsorted `(row, value)` terms.
    pub fn push_column(&mut self, mut col: Vec<(u32, i32)>) {
        col.sort_unstable_by_key(|e| e.0);
        let start = self.entries.len();
        for (r, v) in col {
            assert!((r as usize) < self.rows, "row {r} out of range");
            let len = self.entries.len();
            match self.entries.last_mut() {
                Some(last) if len > start && last.0 == r => last.1 += v,
                _ => self.entries.push((r, v)),
            }
        }
        // drop entries that cancelled
        let mut w = start;
        for k in start..self.entries.len() {
            if self.entries[k].1 != 0 {
                self.entries[w] = self.entries[k];
                w += 1;
            }
        }
        self.entries.truncate(w);
        self.col_ptr.push(self.entries.len());
    }

    pub fn finish(mut self) -> SparseMatrix {
        self.entries.shrink_to_fit();
        SparseMatrix {
            rows: self.rows,
            cols: self.col_ptr.len() - 1,
            col_ptr: self.col_ptr,
            entries: self.entries,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_product() {
        let a = SparseMatrix::from_dense(&[vec![1, -1], vec![0, 2]]);
        assert_eq!(a.to_dense(), vec![vec![1, -1], vec![0, 2]]);
        assert_eq!(a.get(1, 1), 2);
        assert_eq!(a.nnz(), 3);
        let b = SparseMatrix::from_dense(&[vec![1], vec![1]]);
        assert_eq!(a.mul(&b), vec![vec![(1, 2)]]);
        let z = SparseMatrix::from_dense(&[vec![2, 2]]);
        assert!(z.product_is_zero(&SparseMatrix::from_dense(&[vec![1], vec![-1]])));
        assert!(z.mod2().is_zero());
    }

    #[test]
    fn duplicates_are_summed() {
        let m = SparseMatrix::from_columns(2, vec![vec![(1, 1), (0, 2), (1, -1)]]);
        assert_eq!(m.column(0), &[(0, 2)]);
    }
}

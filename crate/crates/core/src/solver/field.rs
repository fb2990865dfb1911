/// Dense 2D array with one ghost layer on every side.
///
/// Logical indices run over `-1..=ni` and `-1..=nj`; storage is row-major in
/// `j`, so `i` is the contiguous direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    ni: usize,
    nj: usize,
    stride: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn new(ni: usize, nj: usize) -> Self {
        Field {
            ni,
            nj,
            stride: ni + 2,
            data: vec![0.0; (ni + 2) * (nj + 2)],
        }
    }

    pub fn ni(&self) -> usize {
        self.ni
    }

    pub fn nj(&self) -> usize {
        self.nj
    }

    #[inline(always)]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -1 && i <= self.ni as isize && j >= -1 && j <= self.nj as isize);
        (j + 1) as usize * self.stride + (i + 1) as usize
    }

    #[inline(always)]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline(always)]
    pub fn get(&self, i: isize, j: isize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: isize, j: isize, value: f64) {
        let k = self.idx(i, j);
        self.data[k] = value;
    }

    /// Interior value at non-negative indices.
    #[inline(always)]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[(j + 1) * self.stride + i + 1]
    }

    #[inline(always)]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[(j + 1) * self.stride + i + 1]
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn fill(&mut self, value: f64) {
        self.data.fill(value);
    }

    pub fn copy_from(&mut self, other: &Field) {
        debug_assert_eq!((self.ni, self.nj), (other.ni, other.nj));
        self.data.copy_from_slice(&other.data);
    }

    /// Iterator over interior values in row-major order.
    pub fn interior(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nj).flat_map(move |j| {
            let start = (j + 1) * self.stride + 1;
            self.data[start..start + self.ni].iter().copied()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.interior().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghost_indexing() {
        let mut f = Field::new(3, 2);
        f.set(-1, -1, 1.0);
        f.set(3, 2, 2.0);
        f.set(1, 1, 3.0);
        assert_eq!(f.raw()[0], 1.0);
        assert_eq!(*f.raw().last().unwrap(), 2.0);
        assert_eq!(f.at(1, 1), 3.0);
        assert_eq!(f.interior().count(), 6);
        assert_eq!(f.max_abs(), 3.0);
    }
}

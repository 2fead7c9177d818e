//! Row-major multi-index arithmetic shared by the tensor types.

/// Flat offset of `index` in a row-major array of shape `dims`, last index
/// fastest.
pub(crate) fn flat(dims: &[usize], index: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), index.len());
    let mut offset = 0;
    for (&d, &i) in dims.iter().zip(index) {
        debug_assert!(i < d, "index {i} out of range for dimension {d}");
        offset = offset * d + i;
    }
    offset
}

/// Advances `index` to the next row-major position; returns false after the
/// last one. Starting from all zeros this visits every position exactly once.
pub(crate) fn advance(index: &mut [usize], dims: &[usize]) -> bool {
    for axis in (0..dims.len()).rev() {
        index[axis] += 1;
        if index[axis] < dims[axis] {
            return true;
        }
        index[axis] = 0;
    }
    false
}

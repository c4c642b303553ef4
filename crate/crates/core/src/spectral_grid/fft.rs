use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::grid::GridSpec;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized transform of one component buffer laid out as
/// `(t, x1, x2)` row-major. The caller applies the `1/√N` factor.
pub(crate) fn transform(grid: &GridSpec, data: &mut [Complex64], direction: FftDirection) {
    let n = grid.n_x;
    debug_assert_eq!(data.len(), grid.len());
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        let fft_x = planner.plan_fft(n, direction);
        let mut scratch = vec![Complex64::default(); fft_x.get_inplace_scratch_len()];

        // x2 is contiguous.
        fft_x.process_with_scratch(data, &mut scratch);

        // x1: transpose each plane, transform rows, transpose back.
        let mut plane = vec![Complex64::default(); n * n];
        for slab in data.chunks_exact_mut(n * n) {
            transpose_square(slab, &mut plane, n);
            fft_x.process_with_scratch(&mut plane, &mut scratch);
            transpose_square(&plane, slab, n);
        }

        if grid.n_t > 1 {
            let nt = grid.n_t;
            let fft_t = planner.plan_fft(nt, direction);
            let mut scratch_t = vec![Complex64::default(); fft_t.get_inplace_scratch_len()];
            let slice = n * n;
            let mut lines = vec![Complex64::default(); data.len()];
            for node in 0..slice {
                for it in 0..nt {
                    lines[node * nt + it] = data[it * slice + node];
                }
            }
            fft_t.process_with_scratch(&mut lines, &mut scratch_t);
            for node in 0..slice {
                for it in 0..nt {
                    data[it * slice + node] = lines[node * nt + it];
                }
            }
        }
    });
}

fn transpose_square(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            dst[j * n + i] = src[i * n + j];
        }
    }
}

//! Multi-dimensional FFT over row-major cubic arrays.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized 1-D transform; `inverse` selects the `e^{+i…}` kernel.
pub fn transform_1d(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    plan.process(data);
}

/// Unnormalized transform of an `n^dim` array stored row-major.
pub fn transform_nd(data: &mut [Complex64], n: usize, dim: usize, inverse: bool) {
    debug_assert_eq!(data.len(), n.pow(dim as u32));
    if dim == 1 {
        transform_1d(data, inverse);
        return;
    }
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    let total = data.len();
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..total).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nd_matches_direct_sum() {
        let n = 4;
        let data: Vec<Complex64> = (0..16).map(|i| Complex64::new(i as f64, (i * i % 5) as f64)).collect();
        let mut fast = data.clone();
        transform_nd(&mut fast, n, 2, false);
        for k0 in 0..n {
            for k1 in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for j0 in 0..n {
                    for j1 in 0..n {
                        let ph = -2.0 * std::f64::consts::PI * ((j0 * k0 + j1 * k1) as f64) / n as f64;
                        s += data[j0 * n + j1] * Complex64::from_polar(1.0, ph);
                    }
                }
                assert!((s - fast[k0 * n + k1]).norm() < 1e-12);
            }
        }
    }
}

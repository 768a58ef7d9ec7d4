//! Centered discrete Fourier transforms on the node set `t_j = (j - N/2) h`.
//!
//! For `N` divisible by four the centered kernel factors as
//! `e^{-2πi(k-N/2)(j-N/2)/N} = (-1)^{k+j} e^{-2πi kj/N}`, so each transform is an
//! ordinary FFT conjugated by the alternating sign.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct CenteredDft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl CenteredDft {
    /// Shared plan for length `n`.
    pub(crate) fn for_len(n: usize) -> Arc<CenteredDft> {
        static PLANS: OnceLock<Mutex<HashMap<usize, Arc<CenteredDft>>>> = OnceLock::new();
        let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut plans = plans.lock().expect("dft plan cache poisoned");
        plans
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Arc::new(CenteredDft {
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    }

    /// `V_k = Σ_j e^{-2πi ξ_k t_j} v_j` (unnormalized).
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        alternate(buf);
        self.forward.process(buf);
        alternate(buf);
    }

    /// `v_j = Σ_k e^{+2πi ξ_k t_j} V_k` (unnormalized).
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        alternate(buf);
        self.inverse.process(buf);
        alternate(buf);
    }
}

fn alternate(buf: &mut [Complex64]) {
    for v in buf.iter_mut().skip(1).step_by(2) {
        *v = -*v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_direct_centered_sum() {
        let n = 64;
        let h = 1.0 / (n as f64).sqrt();
        let t = |j: usize| (j as f64 - (n / 2) as f64) * h;
        let v: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let mut fwd = v.clone();
        let mut inv = v.clone();
        let plan = CenteredDft::for_len(n);
        plan.forward(&mut fwd);
        plan.inverse(&mut inv);
        for k in 0..n {
            let mut f = Complex64::new(0.0, 0.0);
            let mut b = Complex64::new(0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                f += Complex64::from_polar(1.0, -2.0 * PI * t(k) * t(j)) * vj;
                b += Complex64::from_polar(1.0, 2.0 * PI * t(k) * t(j)) * vj;
            }
            assert!((f - fwd[k]).norm() < 1e-11);
            assert!((b - inv[k]).norm() < 1e-11);
        }
    }
}

//! Adam optimizer with bias correction.

/// Per-parameter first/second moment accumulators plus the step counter.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    step_count: u64,
    beta1: f64,
    beta2: f64,
    eps: f64,
}

impl AdamState {
    /// Fresh state for parameter slices of the given lengths, with the
    /// standard defaults β₁ = 0.9, β₂ = 0.999, ε = 1e-8.
    pub fn new(slice_lens: &[usize]) -> Self {
        Self {
            m: slice_lens.iter().map(|&l| vec![0.0; l]).collect(),
            v: slice_lens.iter().map(|&l| vec![0.0; l]).collect(),
            step_count: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// One update: `p ← p − lr · m̂ / (√v̂ + ε)` with bias-corrected moments.
    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]], lr: f64) {
        assert_eq!(params.len(), self.m.len(), "parameter group count changed");
        assert_eq!(grads.len(), self.m.len(), "gradient group count changed");
        self.step_count += 1;
        let t = self.step_count as i32;
        let bias1 = 1.0 - self.beta1.powi(t);
        let bias2 = 1.0 - self.beta2.powi(t);
        for ((p_slice, g_slice), (m_slice, v_slice)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            assert_eq!(p_slice.len(), m_slice.len(), "parameter shape changed");
            assert_eq!(g_slice.len(), m_slice.len(), "gradient shape changed");
            for i in 0..p_slice.len() {
                let g = g_slice[i];
                m_slice[i] = self.beta1 * m_slice[i] + (1.0 - self.beta1) * g;
                v_slice[i] = self.beta2 * v_slice[i] + (1.0 - self.beta2) * g * g;
                let m_hat = m_slice[i] / bias1;
                let v_hat = v_slice[i] / bias2;
                p_slice[i] -= lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_steps(grad: f64, lr: f64, steps: usize) -> Vec<f64> {
        let mut p = [[1.0f64]];
        let mut state = AdamState::new(&[1]);
        let mut history = vec![p[0][0]];
        for _ in 0..steps {
            let g = [grad];
            let mut refs: Vec<&mut [f64]> = p.iter_mut().map(|x| x.as_mut_slice()).collect();
            state.step(&mut refs, &[&g], lr);
            history.push(p[0][0]);
        }
        history
    }

    #[test]
    fn zero_gradient_leaves_parameters_alone() {
        let h = run_steps(0.0, 1e-3, 3);
        assert!(h.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn first_step_is_signed_learning_rate() {
        // Bias correction makes m̂/√v̂ = sign(g) on step one, so the move is
        // −lr·g/(|g| + ε·(small adjustment)) ≈ −lr·sign(g).
        for &g in &[0.5, -2.0, 10.0] {
            let h = run_steps(g, 1e-3, 1);
            let delta = h[1] - h[0];
            assert!(
                (delta + 1e-3 * g.signum()).abs() < 1e-6,
                "gradient {g}: step {delta}"
            );
        }
    }

    #[test]
    fn constant_gradient_moves_monotonically() {
        let h = run_steps(0.7, 1e-3, 2);
        assert!(h[1] < h[0]);
        assert!(h[2] < h[1]);
        let h = run_steps(-0.7, 1e-3, 2);
        assert!(h[1] > h[0]);
        assert!(h[2] > h[1]);
    }

    #[test]
    fn step_counter_increments() {
        let mut p = [[0.0f64]];
        let mut state = AdamState::new(&[1]);
        assert_eq!(state.step_count(), 0);
        let g = [1.0];
        let mut refs: Vec<&mut [f64]> = p.iter_mut().map(|x| x.as_mut_slice()).collect();
        state.step(&mut refs, &[&g], 1e-3);
        assert_eq!(state.step_count(), 1);
    }
}

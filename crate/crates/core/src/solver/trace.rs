use serde::Serialize;

/// Convergence diagnostics of one recovery run.
///
/// `objective` and `fidelity` hold, for every inner solve, the value at its
/// starting point followed by one entry per iteration, so inner solve `k`
/// contributes `inner_iterations[k] + 1` entries. The objective is with respect
/// to that solve's observation `M^(k)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveTrace {
    pub objective: Vec<f64>,
    /// `||P_Omega(X) - P_Omega(M)||_F` against the original observation.
    pub fidelity: Vec<f64>,
    pub inner_iterations: Vec<usize>,
    /// `||M^(k+1) - X^(k)||_F` after each outer update.
    pub outer_residual: Vec<f64>,
    /// `||M^(k+1) - M^(k)||_F` after each outer update.
    pub outer_change: Vec<f64>,
}

impl SolveTrace {
    /// Objective values of each inner solve, in order.
    pub fn inner_segments(&self) -> Vec<&[f64]> {
        let mut out = Vec::with_capacity(self.inner_iterations.len());
        let mut start = 0;
        for &n in &self.inner_iterations {
            out.push(&self.objective[start..start + n + 1]);
            start += n + 1;
        }
        out
    }

    pub fn total_iterations(&self) -> usize {
        self.inner_iterations.iter().sum()
    }

    pub fn outer_iterations(&self) -> usize {
        self.inner_iterations.len()
    }

    pub(crate) fn append(&mut self, other: SolveTrace) {
        self.objective.extend(other.objective);
        self.fidelity.extend(other.fidelity);
        self.inner_iterations.extend(other.inner_iterations);
        self.outer_residual.extend(other.outer_residual);
        self.outer_change.extend(other.outer_change);
    }

    /// Whether every inner solve's objective sequence is non-increasing
    /// within `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.inner_segments().iter().all(|seg| seg.windows(2).all(|w| w[1] <= w[0] + slack))
    }
}

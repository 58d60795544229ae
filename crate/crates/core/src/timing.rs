use std::fmt;
use std::ops::AddAssign;
use std::time::{Duration, Instant};

/// Per-phase wall-clock totals for relation collection and solving.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimingReport {
    /// Incremental updates of `I` and `f`, or fresh interpolation.
    pub update: Duration,
    pub eea: Duration,
    /// Splitting test `X^(q^e) mod v`.
    pub xq_mod_v: Duration,
    pub roots: Duration,
    pub linear_algebra: Duration,
    /// Exponents tried.
    pub attempts: u64,
    /// Relations kept after verification.
    pub relations: u64,
    /// Decoder successes that failed verification.
    pub rejected: u64,
}

impl TimingReport {
    pub fn success_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.relations as f64 / self.attempts as f64
        }
    }

    /// Runs `f`, charging its duration to the selected phase.
    #[inline]
    pub fn time<T>(&mut self, phase: Phase, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.slot(phase) += start.elapsed();
        out
    }

    fn slot(&mut self, phase: Phase) -> &mut Duration {
        match phase {
            Phase::Update => &mut self.update,
            Phase::Eea => &mut self.eea,
            Phase::XqModV => &mut self.xq_mod_v,
            Phase::Roots => &mut self.roots,
            Phase::LinearAlgebra => &mut self.linear_algebra,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Update,
    Eea,
    XqModV,
    Roots,
    LinearAlgebra,
}

impl AddAssign<&TimingReport> for TimingReport {
    fn add_assign(&mut self, o: &TimingReport) {
        self.update += o.update;
        self.eea += o.eea;
        self.xq_mod_v += o.xq_mod_v;
        self.roots += o.roots;
        self.linear_algebra += o.linear_algebra;
        self.attempts += o.attempts;
        self.relations += o.relations;
        self.rejected += o.rejected;
    }
}

impl fmt::Display for TimingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>10} {:>10} {:>10} {:>10} {:>14} {:>10} {:>10} {:>8}",
            "update",
            "EEA",
            "X^q mod v",
            "roots",
            "linear algebra",
            "attempts",
            "relations",
            "rate"
        )?;
        write!(
            f,
            "{:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>14.3} {:>10} {:>10} {:>8.5}",
            self.update.as_secs_f64(),
            self.eea.as_secs_f64(),
            self.xq_mod_v.as_secs_f64(),
            self.roots.as_secs_f64(),
            self.linear_algebra.as_secs_f64(),
            self.attempts,
            self.relations,
            self.success_rate()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates_and_reports_rate() {
        let mut a = TimingReport {
            attempts: 10,
            relations: 2,
            ..Default::default()
        };
        let x = a.time(Phase::Eea, || 41 + 1);
        assert_eq!(x, 42);
        let b = TimingReport {
            attempts: 6,
            relations: 2,
            ..Default::default()
        };
        a += &b;
        assert_eq!(a.attempts, 16);
        assert!((a.success_rate() - 0.25).abs() < 1e-12);
        assert_eq!(TimingReport::default().success_rate(), 0.0);
        let table = a.to_string();
        assert!(table.contains("X^q mod v") && table.contains("linear algebra"));
    }
}

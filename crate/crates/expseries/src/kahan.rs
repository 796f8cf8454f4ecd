/// Compensated accumulator (Kahan–Babuška/Neumaier variant).
///
/// Tracks the rounding error of every addition in a separate compensation
/// term, which matters here because the bracket series are summed term by
/// term and the alternating variants cancel heavily.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    compensation: f64,
}

impl Kahan {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        // 1 + 1e-16 repeated: naive summation loses every small term.
        let mut k = Kahan::new();
        k.add(1.0);
        for _ in 0..1000 {
            k.add(1e-16);
        }
        assert_eq!(k.value(), 1.0 + 1000.0 * 1e-16);
    }

    #[test]
    fn handles_terms_larger_than_sum() {
        let mut k = Kahan::new();
        k.add(1e-16);
        k.add(1.0);
        k.add(-1.0);
        assert_eq!(k.value(), 1e-16);
    }
}

/// Diagnostics recorded at one output time. Quantities that do not apply to
/// the running system are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyReport {
    pub time: f64,
    pub hamiltonian: Option<f64>,
    pub energy_s: Option<f64>,
    pub quasilinear_e: Option<f64>,
    pub total_e: Option<f64>,
    pub mass: f64,
    pub noncavitation_margin: f64,
    pub curl_norm: Option<f64>,
    /// `|η|_{H^s}`.
    pub eta_hs: f64,
    /// `|u|_{H^s}` (or `|v|_{H^s}` for the `(η, v)` system).
    pub vel_hs: f64,
    /// `|η|_{X^s_{ε²}}`.
    pub eta_xs: f64,
    /// `|u|_{X^s_ε}`.
    pub vel_xs: f64,
}

impl EnergyReport {
    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        [self.time, self.mass, self.noncavitation_margin, self.eta_hs, self.vel_hs, self.eta_xs, self.vel_xs]
            .into_iter()
            .chain([self.hamiltonian, self.energy_s, self.quasilinear_e, self.total_e, self.curl_norm].into_iter().flatten())
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(f64::is_finite)
    }

    /// Energy watched by the blow-up monitor: `E_s` when defined, otherwise
    /// the quasilinear `E`, otherwise `|η|²_{H^s} + |u|²_{H^s}`.
    pub fn watched_energy(&self) -> f64 {
        self.energy_s.or(self.quasilinear_e).unwrap_or(self.eta_hs.powi(2) + self.vel_hs.powi(2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlowupReason {
    NonFinite,
    Cavitation,
    EnergyGrowth,
}

impl BlowupReason {
    pub fn name(&self) -> &'static str {
        match self {
            BlowupReason::NonFinite => "non_finite",
            BlowupReason::Cavitation => "cavitation",
            BlowupReason::EnergyGrowth => "energy_growth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Healthy,
    BlownUp { time: f64, reason: BlowupReason },
}

impl Verdict {
    pub fn is_healthy(&self) -> bool {
        matches!(self, Verdict::Healthy)
    }
}

pub const DEFAULT_GROWTH_FACTOR: f64 = 16.0;

/// Streaming blow-up detector; the first trigger is final.
#[derive(Debug, Clone)]
pub struct BlowupMonitor {
    factor: f64,
    e0: Option<f64>,
    verdict: Verdict,
}

impl Default for BlowupMonitor {
    fn default() -> Self {
        BlowupMonitor::new(DEFAULT_GROWTH_FACTOR)
    }
}

impl BlowupMonitor {
    pub fn new(factor: f64) -> BlowupMonitor {
        BlowupMonitor { factor, e0: None, verdict: Verdict::Healthy }
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn push(&mut self, r: &EnergyReport) -> Verdict {
        if !self.verdict.is_healthy() {
            return self.verdict;
        }
        let reason = if !r.is_finite() {
            Some(BlowupReason::NonFinite)
        } else if r.noncavitation_margin <= 0.0 {
            Some(BlowupReason::Cavitation)
        } else {
            let e = r.watched_energy();
            let e0 = *self.e0.get_or_insert(e);
            (e > self.factor * e0).then_some(BlowupReason::EnergyGrowth)
        };
        if let Some(reason) = reason {
            self.verdict = Verdict::BlownUp { time: r.time, reason };
        }
        self.verdict
    }
}

/// Run a whole stream through a fresh monitor.
pub fn blowup_monitor<'a>(reports: impl IntoIterator<Item = &'a EnergyReport>, factor: f64) -> Verdict {
    let mut m = BlowupMonitor::new(factor);
    for r in reports {
        if !m.push(r).is_healthy() {
            break;
        }
    }
    m.verdict()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(t: f64, e: f64) -> EnergyReport {
        EnergyReport { time: t, energy_s: Some(e), noncavitation_margin: 0.5, ..Default::default() }
    }

    #[test]
    fn constant_stream_is_healthy() {
        let rs: Vec<_> = (0..10).map(|k| report(k as f64, 2.0)).collect();
        assert_eq!(blowup_monitor(&rs, 16.0), Verdict::Healthy);
    }

    #[test]
    fn nan_triggers_at_its_time() {
        let mut rs: Vec<_> = (0..10).map(|k| report(k as f64 * 0.1, 1.0)).collect();
        rs[4].mass = f64::NAN;
        assert_eq!(blowup_monitor(&rs, 16.0), Verdict::BlownUp { time: 0.4, reason: BlowupReason::NonFinite });
    }

    #[test]
    fn energy_threshold_is_strict() {
        let rs = vec![report(0.0, 1.0), report(1.0, 16.0), report(2.0, 16.5), report(3.0, 100.0)];
        assert_eq!(blowup_monitor(&rs, 16.0), Verdict::BlownUp { time: 2.0, reason: BlowupReason::EnergyGrowth });
    }

    #[test]
    fn cavitation_triggers() {
        let mut r = report(0.0, 1.0);
        r.noncavitation_margin = 0.0;
        assert_eq!(blowup_monitor(&[r], 16.0), Verdict::BlownUp { time: 0.0, reason: BlowupReason::Cavitation });
    }
}

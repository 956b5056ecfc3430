use crate::spin::SpinKind;

/// One sample of a time series: norm, mean position, negative-energy
/// occupation and the spin expectation of every kind along a fixed direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableRow {
    pub t: f64,
    pub norm: f64,
    /// NaN when the state has no meaningful position (momentum ladders).
    pub x_mean: f64,
    pub neg_energy: f64,
    /// Indexed by [`SpinKind::index`].
    pub spin: [f64; 7],
}

impl ObservableRow {
    pub const CSV_HEADER: [&'static str; 11] = [
        "t",
        "norm",
        "x_mean",
        "neg_energy",
        "S_P",
        "S_FW",
        "S_Cz",
        "S_F",
        "S_Ch",
        "S_Pr",
        "S_FG",
    ];

    pub fn spin_of(&self, kind: SpinKind) -> f64 {
        self.spin[kind.index()]
    }

    /// Values in [`Self::CSV_HEADER`] order.
    pub fn values(&self) -> [f64; 11] {
        let mut out = [0.0; 11];
        out[..4].copy_from_slice(&[self.t, self.norm, self.x_mean, self.neg_energy]);
        out[4..].copy_from_slice(&self.spin);
        out
    }

    /// Largest absolute difference over all spin expectations.
    pub fn max_spin_difference(&self, other: &ObservableRow) -> f64 {
        self.spin
            .iter()
            .zip(&other.spin)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

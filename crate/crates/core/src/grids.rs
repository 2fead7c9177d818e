//! Reference analyzer grids used by the demos, the CLI presets, and tests.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use crate::quantum::SettingsGrid;

/// Three parties with two orthogonal in-plane settings each, the grid of
/// Mermin's two-setting argument. Its critical visibility is 1/2.
pub fn mermin_two_setting() -> SettingsGrid {
    SettingsGrid::from_coplanar_angles(&[
        vec![0.0, FRAC_PI_2],
        vec![0.0, FRAC_PI_2],
        vec![0.0, FRAC_PI_2],
    ])
    .expect("constant preset angles")
}

/// Two parties at settings maximizing the CHSH combination
/// E₁₁+E₁₂+E₂₁−E₂₂ for cos(α+β) correlations, reaching S = 2√2.
pub fn chsh_optimal() -> SettingsGrid {
    SettingsGrid::from_coplanar_angles(&[
        vec![0.0, FRAC_PI_2],
        vec![-FRAC_PI_4, FRAC_PI_4],
    ])
    .expect("constant preset angles")
}

/// The five-settings-per-party reference grid: the first party sweeps
/// 0..π/2 in π/8 steps, the other two sweep −π/4..π/4. Its critical
/// visibility is 1/2.
pub fn five_setting_reference() -> SettingsGrid {
    let sweep: Vec<f64> = (-2..=2).map(|k| f64::from(k) * FRAC_PI_8).collect();
    SettingsGrid::from_coplanar_angles(&[
        (0..5).map(|k| f64::from(k) * FRAC_PI_8).collect(),
        sweep.clone(),
        sweep,
    ])
    .expect("constant preset angles")
}

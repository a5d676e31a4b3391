//! Thermodynamics of measurement and feedback: mutual-information work bounds, the cyclic
//! measure/feedback/reset ledger, a feedback-driven staircase ratchet and the gambling demon.

mod gambling;
mod measurement;
mod ratchet;

pub use gambling::{
    gambling_demon, Crossing, DensityTable, GamblingReport, GapRamp, StoppedPath, StoppingRule, TwoStateParams, DELTA_F_CONVENTION, DENSITY_FLOOR,
    DENSITY_STEPS,
};
pub use measurement::{
    feedback_bound, measurement_gain, szilard_cycle_ledger, szilard_cycle_ledger_with_slack, FeedbackLedger, MeasurementModel,
};
pub use ratchet::{staircase_ratchet, FeedbackMode, StaircaseConfig, StaircaseReport};

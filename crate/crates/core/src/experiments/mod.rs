//! Benchmark presets, L¹ errors and EOC tables, CSV output and the invariant
//! suite behind the `ncrelax` command line driver.

mod check;
mod config;
mod metrics;
mod output;
mod presets;
mod studies;

pub use check::{check, max_m_term, phi_conservativity_defect, random_blood_states, random_swe_states, CheckOutcome};
pub use config::{load_config, parse_pairs, CouplingChoice, ModelChoice, Preset, RunConfig, Scheme};
pub use metrics::{eoc, l1_error, ErrorReport, ReportRow};
pub use output::{
    write_blood_pair, write_metadata, write_report, write_solution, write_summary, BLOOD_COLUMNS, SWE_COLUMNS,
};
pub use presets::{
    blood_coupled, blood_domain, riemann_data, swe_dambreak_state, swe_domain, swe_initial, swe_smooth_state, BloodPair,
};
pub use studies::{
    coupling_study, eps_study, grid_study, interface_jumps, run, write_study, Artifacts, InterfaceJumps,
    BLOOD_DOMAIN_NOTE, GRID_REFERENCE_CONVENTION,
};

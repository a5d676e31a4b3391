//! Acceptance suite: one named criterion per headline property of the library, each with its
//! own tolerance and runtime budget.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use demon_core::feedback::{measurement_gain, szilard_cycle_ledger, MeasurementModel};
use demon_core::info::random::{haar_unitary, random_bipartite_state, random_joint, random_state};
use demon_core::info::*;
use demon_core::landauer::{distillation_erasure_cost, finite_size_bounds, single_shot_battery_bound, zero_temperature_bound, HeatCapacityModel};
use demon_core::numeric::Estimate;
use demon_core::rng::stream;
use demon_core::stochastic::{erasure_experiment, fit_finite_time, ErasureProtocol};
use demon_core::szilard::{run_cycle, BoxSpec, Statistics, WallConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::experiments::{gamble, jarzynski, reeb_wolf_trial, GambleParams, JarzynskiParams, ReebWolfParams, Stopping};

/// Tolerances and sigma multipliers used by the suite. [`Tolerances::corrupt`] makes one of
/// them unattainable so its criterion must fail.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub equality_residual: f64,
    pub landauer_slack: f64,
    pub szilard_golden_rel: f64,
    pub szilard_stage_abs: f64,
    pub jarzynski_rel: f64,
    pub erasure_fit_rel: f64,
    pub feedback_info: f64,
    pub gambling_sigmas: f64,
    pub bounds_rel: f64,
    pub entropy_scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality_residual: 1e-9,
            landauer_slack: 1e-9,
            szilard_golden_rel: 1e-6,
            szilard_stage_abs: 1e-9,
            jarzynski_rel: 0.05,
            erasure_fit_rel: 0.15,
            feedback_info: 1e-10,
            gambling_sigmas: 3.0,
            bounds_rel: 1e-8,
            entropy_scale: 1.0,
        }
    }
}

impl Tolerances {
    /// Replace the main tolerance of criterion `name` by an unattainable value. Returns false
    /// for unknown names.
    pub fn corrupt(&mut self, name: &str) -> bool {
        let slot = match name {
            "reeb_wolf_equality" => &mut self.equality_residual,
            "landauer_bound" => &mut self.landauer_slack,
            "szilard_golden_values" => &mut self.szilard_golden_rel,
            "szilard_stage_identities" => &mut self.szilard_stage_abs,
            "jarzynski_equality" => &mut self.jarzynski_rel,
            "langevin_erasure" => &mut self.erasure_fit_rel,
            "feedback_ledger" => &mut self.feedback_info,
            "gambling_demon" => &mut self.gambling_sigmas,
            "bound_calculators" => &mut self.bounds_rel,
            "entropy_properties" => &mut self.entropy_scale,
            _ => return false,
        };
        *slot = -1.0;
        true
    }
}

pub struct Check {
    pub passed: bool,
    pub measured: String,
}

pub struct Criterion {
    pub name: &'static str,
    pub budget: Duration,
    check: fn(&Tolerances) -> Check,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub within_budget: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub measured: String,
}

impl CriterionResult {
    pub fn ok(&self) -> bool {
        self.passed && self.within_budget
    }

    pub fn line(&self) -> String {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        let budget = if self.within_budget { String::new() } else { " [over runtime budget]".into() };
        format!("{status} {} ({:.2} s of {:.0} s){budget}: {}", self.name, self.seconds, self.budget_seconds, self.measured)
    }
}

pub fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { name: "reeb_wolf_equality", budget: s(5), check: reeb_wolf_equality },
        Criterion { name: "landauer_bound", budget: s(5), check: landauer_bound },
        Criterion { name: "szilard_golden_values", budget: s(10), check: szilard_golden_values },
        Criterion { name: "szilard_stage_identities", budget: s(10), check: szilard_stage_identities },
        Criterion { name: "jarzynski_equality", budget: s(60), check: jarzynski_equality },
        Criterion { name: "langevin_erasure", budget: s(300), check: langevin_erasure },
        Criterion { name: "feedback_ledger", budget: s(10), check: feedback_ledger },
        Criterion { name: "gambling_demon", budget: s(120), check: gambling_demon },
        Criterion { name: "bound_calculators", budget: s(10), check: bound_calculators },
        Criterion { name: "entropy_properties", budget: s(10), check: entropy_properties },
    ]
}

/// Run every criterion whose name is in `only` (all when empty), in suite order.
pub fn run_suite(tol: &Tolerances, only: &[String]) -> Vec<CriterionResult> {
    criteria()
        .into_iter()
        .filter(|c| only.is_empty() || only.iter().any(|o| o == c.name))
        .map(|c| {
            let start = Instant::now();
            let Check { passed, measured } = (c.check)(tol);
            let elapsed = start.elapsed();
            CriterionResult {
                name: c.name,
                passed,
                within_budget: elapsed <= c.budget,
                seconds: elapsed.as_secs_f64(),
                budget_seconds: c.budget.as_secs_f64(),
                measured,
            }
        })
        .collect()
}

const SUITE_SEED: u64 = 42;

fn failed(msg: impl Into<String>) -> Check {
    Check { passed: false, measured: msg.into() }
}

/// 500 trials each on qubit⊗qubit and qubit⊗qutrit, β uniform in [0.1, 10].
fn reeb_wolf_sweep() -> Result<Vec<demon_core::landauer::Ledger>, String> {
    let mut out = Vec::with_capacity(1000);
    for (k, bath_dim) in [2usize, 3].into_iter().enumerate() {
        let p = ReebWolfParams { trials: 500, system_dim: 2, bath_dim, beta_min: 0.1, beta_max: 10.0, level_spread: 2.0 };
        let seed = demon_core::rng::derive(SUITE_SEED, k as u64);
        let ledgers = (0..500u64).into_par_iter().map(|i| reeb_wolf_trial(&p, seed, i).map(|(_, l)| l)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        out.extend(ledgers);
    }
    Ok(out)
}

fn reeb_wolf_equality(tol: &Tolerances) -> Check {
    match reeb_wolf_sweep() {
        Ok(ls) => {
            let max = ls.iter().map(|l| l.residual).fold(0.0, f64::max);
            Check { passed: max < tol.equality_residual, measured: format!("max residual {max:.3e} over {} unitaries", ls.len()) }
        }
        Err(e) => failed(e),
    }
}

fn landauer_bound(tol: &Tolerances) -> Check {
    match reeb_wolf_sweep() {
        Ok(ls) => {
            let min = ls.iter().map(|l| l.landauer_margin()).fold(f64::INFINITY, f64::min);
            Check { passed: min >= -tol.landauer_slack, measured: format!("min βΔQ_B + ΔS_S = {min:.3e}") }
        }
        Err(e) => failed(e),
    }
}

fn w_tot(n: usize, stats: Statistics, beta_eps1: f64, frac: f64) -> demon_core::Result<demon_core::szilard::SzilardReport> {
    let (bx, b) = BoxSpec::for_reduced_temperature(n, stats, beta_eps1)?;
    run_cycle(&bx, WallConfig::fraction(frac, &bx)?, b)
}

fn szilard_golden_values(tol: &Tolerances) -> Check {
    let run = || -> demon_core::Result<(bool, String)> {
        let mut ok = true;
        let mut worst_single: f64 = 0.0;
        for r in [1e-3, 1.0, 20.0] {
            let w = w_tot(1, Statistics::Boltzmann, r, 0.5)?.w_tot;
            worst_single = worst_single.max((w / LN_2 - 1.0).abs());
        }
        ok &= worst_single < tol.szilard_golden_rel;
        let bose = w_tot(2, Statistics::Boson, 20.0, 0.5)?.w_tot;
        let bose_target = 2.0 / 3.0 * 3f64.ln();
        ok &= (bose / bose_target - 1.0).abs() < 0.01;
        let fermi = w_tot(2, Statistics::Fermion, 20.0, 0.5)?.w_tot;
        ok &= fermi < 1e-3;
        let mut worst_hot: f64 = 0.0;
        for s in [Statistics::Boson, Statistics::Fermion] {
            let w = w_tot(2, s, 1e-3, 0.5)?.w_tot;
            worst_hot = worst_hot.max((w / LN_2 - 1.0).abs());
        }
        ok &= worst_hot < 0.02;
        Ok((
            ok,
            format!("N=1: max |W/ln2 − 1| = {worst_single:.2e}; N=2 bosons cold: W = {bose:.6} (target {bose_target:.6}); fermions cold: W = {fermi:.2e}; N=2 hot: max |W/ln2 − 1| = {worst_hot:.2e}"),
        ))
    };
    match run() {
        Ok((passed, measured)) => Check { passed, measured },
        Err(e) => failed(e.to_string()),
    }
}

fn szilard_stage_identities(tol: &Tolerances) -> Check {
    let fracs = [0.1, 0.3, 0.5, 0.7, 0.9];
    let temps = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0];
    let run = || -> demon_core::Result<(bool, String)> {
        let mut max_closed: f64 = 0.0;
        let mut min_w = f64::INFINITY;
        let mut points = 0;
        for &s in &Statistics::ALL {
            for &f in &fracs {
                for &r in &temps {
                    let rep = w_tot(2, s, r, f)?;
                    max_closed = max_closed.max(((rep.w_ins + rep.w_exp + rep.w_rem) - rep.w_tot_closed).abs());
                    min_w = min_w.min(rep.w_tot);
                    points += 1;
                }
            }
        }
        let mut max_rem: f64 = 0.0;
        for &f in &fracs {
            for &r in &temps {
                let rep = w_tot(1, Statistics::Boltzmann, r, f)?;
                max_rem = max_rem.max(rep.w_rem.abs());
                min_w = min_w.min(rep.w_tot);
            }
        }
        let ok = max_closed < tol.szilard_stage_abs && max_rem < tol.szilard_stage_abs && min_w >= -1e-10;
        Ok((ok, format!("max |ΣW − closed form| = {max_closed:.2e} over {points} points; max |W_rem| (N=1) = {max_rem:.2e}; min W_tot = {min_w:.3e}")))
    };
    match run() {
        Ok((passed, measured)) => Check { passed, measured },
        Err(e) => failed(e.to_string()),
    }
}

fn jarzynski_equality(tol: &Tolerances) -> Check {
    // t_relax = γ/k_initial = 1
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, tau, seed) in [("slow", 10.0, 1u64), ("fast", 0.1, 2)] {
        let p = JarzynskiParams { tau, n_traj: 100_000, ..JarzynskiParams::default() };
        match jarzynski(&p, demon_core::rng::derive(SUITE_SEED, seed)) {
            Ok(r) => {
                ok &= r.relative_deviation < tol.jarzynski_rel && r.mean_work >= r.delta_f - 3.0 * r.work_se;
                parts.push(format!("{label} τ={tau}: |⟨e^(−βW)⟩e^(βΔF) − 1| = {:.4}, ⟨W⟩ − ΔF = {:.4} ± {:.4}", r.relative_deviation, r.mean_work - r.delta_f, r.work_se));
            }
            Err(e) => return failed(e.to_string()),
        }
    }
    Check { passed: ok, measured: parts.join("; ") }
}

/// Heat-vs-τ points of the erasure sweep: (τ, success, heat, heat SE, Q(r)).
pub fn erasure_sweep(taus: &[f64], n_traj: usize, seed: u64) -> demon_core::Result<Vec<demon_core::stochastic::ErasureOutcome>> {
    taus.iter()
        .map(|&tau| {
            let protocol = ErasureProtocol::new(tau, 3.0);
            let params = protocol.langevin_params(1.0, 1.0, 5e-4, seed)?;
            erasure_experiment(&protocol, &params, n_traj)
        })
        .collect()
}

fn langevin_erasure(tol: &Tolerances) -> Check {
    let taus = [5.0, 10.0, 20.0, 40.0, 80.0];
    let outs = match erasure_sweep(&taus, 2000, SUITE_SEED) {
        Ok(o) => o,
        Err(e) => return failed(e.to_string()),
    };
    let success = outs.iter().all(|o| o.success_rate >= 0.9);
    let bound = outs.iter().all(|o| o.mean_heat >= o.q_r - 3.0 * o.heat_se);
    let monotone = outs.windows(2).all(|w| w[1].mean_heat <= w[0].mean_heat + (w[0].heat_se.powi(2) + w[1].heat_se.powi(2)).sqrt());
    let fit = match fit_finite_time(&outs.iter().map(|o| (o.tau, o.mean_heat)).collect::<Vec<_>>()) {
        Ok(f) => f,
        Err(e) => return failed(e.to_string()),
    };
    let fit_ok = (fit.q_l / LN_2 - 1.0).abs() < tol.erasure_fit_rel && fit.alpha > 0.0;
    let table = outs.iter().map(|o| format!("τ={}: r={:.4} Q={:.4}±{:.4} Q(r)={:.4}", o.tau, o.success_rate, o.mean_heat, o.heat_se, o.q_r)).collect::<Vec<_>>().join(", ");
    Check {
        passed: success && bound && monotone && fit_ok,
        measured: format!("{table}; fit Q_L = {:.4} (ln 2 = {LN_2:.4}), α = {:.3}; r≥0.9 {success}, bound {bound}, monotone {monotone}", fit.q_l, fit.alpha),
    }
}

/// ln 2 − H_b(ε) in nats, evaluated at 40 digits.
const BSC_INFORMATION: [(f64, f64); 5] = [
    (0.0, LN_2),
    (0.05, 0.494_631_937_214_072_75),
    (0.1, 0.368_064_207_168_497_07),
    (0.25, 0.130_812_035_941_136_96),
    (0.5, 0.0),
];

fn feedback_ledger(tol: &Tolerances) -> Check {
    let run = || -> demon_core::Result<(bool, String)> {
        let u = ProbDist::uniform(2);
        let mut max_info: f64 = 0.0;
        let mut max_tot: f64 = 0.0;
        for (eps, oracle) in BSC_INFORMATION {
            let m = MeasurementModel::binary_symmetric(eps)?;
            max_info = max_info.max((measurement_gain(&u, &m, 1.0)? - oracle).abs());
            max_tot = max_tot.max(szilard_cycle_ledger(&u, &m, 0.0, 1.0)?.w_tot.abs());
        }
        let bennett = szilard_cycle_ledger(&u, &MeasurementModel::perfect(2)?, -LN_2, 1.0)?;
        let b_err = (bennett.w_reset - LN_2).abs();
        let ok = max_info < tol.feedback_info && max_tot < 1e-12 && b_err < 1e-12;
        Ok((ok, format!("max |ΔF_meas − kT·I(ε)| = {max_info:.2e}; max |w_tot| = {max_tot:.2e}; Bennett |w_reset − ln 2| = {b_err:.2e}")))
    };
    match run() {
        Ok((passed, measured)) => Check { passed, measured },
        Err(e) => failed(e.to_string()),
    }
}

fn gambling_demon(tol: &Tolerances) -> Check {
    let k = tol.gambling_sigmas;
    let p = GambleParams { n_traj: 100_000, stopping: Stopping::WorkThreshold, ..GambleParams::default() };
    let r = match gamble(&p, 7) {
        Ok(r) => r,
        Err(e) => return failed(e.to_string()),
    };
    let ft = (r.ft_estimator - 1.0).abs() <= k * r.ft_se;
    let ineq = r.margin >= -k * r.margin_se;
    let beats = r.w_minus_df + k * r.w_minus_df_se < 0.0;
    Check {
        passed: ft && ineq && beats,
        measured: format!(
            "FT estimator {:.5} ± {:.5}; ⟨W⟩ − ⟨ΔF⟩ + kT⟨δ⟩ = {:.4} ± {:.4}; ⟨W⟩ − ⟨ΔF⟩ = {:.4} ± {:.4} (threshold {} {:?})",
            r.ft_estimator, r.ft_se, r.margin, r.margin_se, r.w_minus_df, r.w_minus_df_se, p.threshold, p.direction
        ),
    }
}

fn bound_calculators(tol: &Tolerances) -> Check {
    let run = || -> demon_core::Result<(bool, String)> {
        let mut worst_phonon: f64 = 0.0;
        for a in [0.1, 1.0, 7.5] {
            let q = zero_temperature_bound(HeatCapacityModel::phonon(a), LN_2)?.heat;
            let target = 3f64.powf(4.0 / 3.0) / 4.0 * LN_2.powf(4.0 / 3.0) * a.powf(-1.0 / 3.0);
            worst_phonon = worst_phonon.max((q / target - 1.0).abs());
        }
        let beta = InverseTemperature::new(2.0)?;
        let mut distill_exact = true;
        for n in [1u64, 5, 64] {
            distill_exact &= distillation_erasure_cost(n, 0.0, beta)? == n as f64 * LN_2 / 2.0;
        }
        let bits = single_shot_battery_bound(&DensityMatrix::maximally_mixed(2)).bound_bits;
        let mut pair_ok = true;
        for n in [1usize, 3, 100] {
            let fs = finite_size_bounds(LN_2, 2, n)?;
            pair_ok &= (fs.noninteracting - 1.0 / n as f64).abs() <= 1e-12 / n as f64 && (fs.universal - 2.0 * LN_2 * LN_2 / 4.0).abs() <= 1e-15;
        }
        let ok = worst_phonon < tol.bounds_rel && distill_exact && bits == 1.0 && pair_ok;
        Ok((ok, format!("phonon max rel err {worst_phonon:.2e}; distillation exact {distill_exact}; single-shot {bits} bit; finite-size pair {pair_ok}")))
    };
    match run() {
        Ok((passed, measured)) => Check { passed, measured },
        Err(e) => failed(e.to_string()),
    }
}

fn entropy_properties(tol: &Tolerances) -> Check {
    let s = tol.entropy_scale;
    let worst = (0..1000u64)
        .into_par_iter()
        .map(|i| -> demon_core::Result<[f64; 7]> {
            let mut rng = stream(demon_core::rng::derive(SUITE_SEED, 100), i);
            let da = 2 + (i % 2) as usize;
            let db = 2 + (i / 2 % 2) as usize;
            let a = random_state(&mut rng, da);
            let b = random_state(&mut rng, db);
            let additivity = (von_neumann_entropy(&a.tensor(&b)) - von_neumann_entropy(&a) - von_neumann_entropy(&b)).abs();
            let u = haar_unitary(&mut rng, da);
            let invariance = (von_neumann_entropy(&a.evolve(&u)?) - von_neumann_entropy(&a)).abs();
            let ab = random_bipartite_state(&mut rng, da, db);
            let ra = ab.partial_trace(&[da, db], &[0])?;
            let rb = ab.partial_trace(&[da, db], &[1])?;
            let subadd = von_neumann_entropy(&ab) - von_neumann_entropy(&ra) - von_neumann_entropy(&rb);
            let klein = -relative_entropy(&a, &random_state(&mut rng, da))?;
            let self_rel = relative_entropy(&a, &a)?.abs();
            let [x, y, z] = mutual_information_forms(&random_joint(&mut rng, da, db));
            let mi = (x - y).abs().max((x - z).abs());
            let levels: Vec<f64> = (0..da + 1).map(|k| k as f64 * (0.5 + (i % 7) as f64 * 0.3)).collect();
            let h = SpectrumModel::nondegenerate(levels)?;
            let beta = InverseTemperature::new(0.2 + (i % 11) as f64 * 0.4)?;
            let rho = random_state(&mut rng, h.dim());
            let free = equilibrium_free_energy(&h, beta)? - noneq_free_energy(&rho, &h.matrix(), beta)?;
            Ok([additivity, invariance, subadd, klein, self_rel, mi, free])
        })
        .collect::<demon_core::Result<Vec<_>>>();
    let rows = match worst {
        Ok(r) => r,
        Err(e) => return failed(e.to_string()),
    };
    let mut max = [f64::NEG_INFINITY; 7];
    for r in &rows {
        for k in 0..7 {
            max[k] = max[k].max(r[k]);
        }
    }
    let limits = [1e-9, 1e-9, 1e-9, 1e-12, 1e-8, 1e-10, 1e-12];
    let passed = max.iter().zip(limits).all(|(m, l)| *m <= s * l);
    let e = Estimate::from_samples(&rows.iter().map(|r| r[0]).collect::<Vec<_>>());
    Check {
        passed,
        measured: format!(
            "{} instances: additivity {:.1e} (mean {:.1e}), invariance {:.1e}, subadditivity excess {:.1e}, Klein deficit {:.1e}, S(ρ‖ρ) {:.1e}, MI forms {:.1e}, F_eq − F(ρ) {:.1e}",
            rows.len(),
            max[0],
            e.mean,
            max[1],
            max[2],
            max[3],
            max[4],
            max[5],
            max[6]
        ),
    }
}

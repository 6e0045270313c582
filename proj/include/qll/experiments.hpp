// SPDX-License-Identifier: Apache-2.0
// Experiment configuration, scenarios, epsilon sweeps, energy audits and
// CSV / plot-script emission.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qll/ericksen_leslie.hpp"
#include "qll/limit_bridge.hpp"
#include "qll/qian_sheng.hpp"

namespace qll {

struct GridSpec {
    int dim = 2;
    int n = 64;
    double box_length = 6.283185307179586;
};

struct DtRule {
    std::string rule = "auto";  // "auto" or "fixed"
    double value = 1e-3;        // step for "fixed"
    double max = 1e-3;          // cap for "auto"; auto uses min(max, 0.5 bound)
};

struct ScenarioSpec {
    std::string name = "director-wave";  // equilibrium | director-wave | shear
    double amplitude = 0.4;
    int mode = 1;
    double shear_amplitude = 0.3;
};

struct ExperimentConfig {
    GridSpec grid;
    double t_final = 0.5;
    std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    int m = 0;
    DtRule dt;
    double sample_interval = 0.05;
    int remainder_order = 1;
    double e0 = 10.0;
    ScenarioSpec scenario;
    QSParams params;  // params.eps is the single-run epsilon
    std::string model = "qs";  // qs | el, for simulate and audit
    std::uint64_t seed = 0;
    int threads = 1;
    bool force_inadmissible = false;

    // Throws ErrorCode::config on structural problems and
    // ErrorCode::invariant on inadmissible coefficients (unless forced).
    void validate() const;
};

ExperimentConfig default_config();
// Missing keys keep their defaults; unknown keys and type errors throw
// ErrorCode::config.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);
// FNV-1a 64 of the canonical JSON without the thread count, 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);
// QLL_THREADS, when set to a positive integer, replaces cfg.threads.
void apply_thread_env(ExperimentConfig& cfg);

struct ReportLine {
    std::string name;
    bool passed = true;
    double value = 0.0;
    std::string detail;
};

struct Report {
    std::vector<ReportLine> lines;
    bool passed() const;
    void add(std::string name, bool passed, double value, std::string detail = {});
};

// EL coefficients for the config (mapped from params with chi(m)).
LimitContext config_context(const ExperimentConfig& cfg, double eps);
ELState scenario_el_state(const ExperimentConfig& cfg, const GridPtr& g, const ELParams& el);
// Well-prepared QS data built from the scenario's EL state.
QSState scenario_qs_state(const ExperimentConfig& cfg, const GridPtr& g, double eps);

// Step size from the rule, shortened so that sample_interval is an integer
// multiple of it.
double choose_dt(const ExperimentConfig& cfg, double bound);

struct FitResult {
    double order = 0.0;
    double residual = 0.0;
};
// Least-squares slope of log err against log eps and the RMS residual.
// Needs >= 2 points with positive entries.
FitResult fit_order(const std::vector<std::pair<double, double>>& points);

struct SweepRow {
    double eps = 0.0;
    double dt = 0.0;
    double err_q0 = 0.0;       // sup_t ||Q - Q0||
    double err_out = 0.0;      // sup_t ||P_out(Q - Q0) - eps Q1perp||
    double err_v = 0.0;        // sup_t ||v - v0||
    double e_tilde = 0.0;      // sup_t E~_m of the remainder
    double e_tilde0 = 0.0;     // E~_m at t = 0
    double final_energy = 0.0;
};

struct DiagnosticRow {
    double t = 0.0;
    double eps = 0.0;
    int m = 0;
    double E_m = 0.0;
    double F = 0.0;
    double A = 0.0;
    double M = 0.0;
    double E_tilde = 0.0;
    double qr_l2 = 0.0;
    double qr_h1 = 0.0;
    double pout_l2 = 0.0;  // ||P_out(Q - Q0)||
    double vr_l2 = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // in eps_list order
    std::vector<DiagnosticRow> diagnostics;
    bool fit_available = false;  // false with fewer than two entries
    double fitted_order = 0.0;   // NaN when unavailable
    double fit_residual = 0.0;
    double el_dt = 0.0;
};

// Runs the EL reference once and one QS run per eps on a worker pool.
// Stepper failures are rethrown tagged with the offending eps.
SweepReport run_convergence_sweep(const ExperimentConfig& cfg);

struct AuditRow {
    int step = 0;
    double t = 0.0;
    double kinetic = 0.0;
    double inertial = 0.0;  // eps^m J |W|^2 / 2 or I |w|^2 / 2
    double bulk = 0.0;      // zero for EL
    double elastic = 0.0;   // elastic or Frank energy
    double total = 0.0;
    double excess = 0.0;    // total minus the bulk floor (QS), total (EL)
    double dissipation_rate = 0.0;
    double dEdt = 0.0;          // (E_next - E) / dt, last row 0
    double rel_increase = 0.0;  // max(0, E_next - E) / |excess|
};

struct AuditTrace {
    std::string model;
    bool inertial = false;
    double dt = 0.0;
    std::vector<AuditRow> rows;
    double max_rel_increase = 0.0;
    int positive_dissipation_events = 0;
    // max_n |dE/dt - mean dissipation| / max |dissipation|
    double dissipation_mismatch = 0.0;
    bool monotone = true;  // every rel_increase below 1e-8
};

// Single run with the config's model at eps = params.eps; dt_scale divides
// the chosen step.
AuditTrace run_energy_audit(const ExperimentConfig& cfg, double dt_scale = 1.0);

struct AuditStudy {
    std::vector<AuditTrace> levels;  // dt, dt/2, dt/4
    bool passed = false;
};
// Monotone at every level and mismatch below 5% at the finest.
AuditStudy run_audit_study(const ExperimentConfig& cfg);

struct SimulationResult {
    std::vector<AuditRow> trace;  // sampled every sample_interval
    int steps = 0;
    double dt = 0.0;
};
// Runs the config's model to t_final; writes snapshots, manifest.json and
// trace.csv into out_dir when non-empty.
SimulationResult simulate(const ExperimentConfig& cfg, const std::string& out_dir);

// Property suites on the configured coefficients.
Report verify_algebra(const ExperimentConfig& cfg);

// CSV emission: header row, a "# config_hash=" comment, %.17g numbers.
std::string csv_field(const std::string& s);
void write_sweep_outputs(const SweepReport& r, const ExperimentConfig& cfg, const std::string& dir);
void write_audit_outputs(const AuditStudy& s, const ExperimentConfig& cfg, const std::string& dir);

}  // namespace qll

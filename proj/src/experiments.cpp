// SPDX-License-Identifier: Apache-2.0
#include "qll/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "qll/error.hpp"
#include "qll/kinematics.hpp"
#include "qll/snapshot.hpp"

namespace qll {

bool Report::passed() const {
    for (const auto& l : lines)
        if (!l.passed) return false;
    return true;
}

void Report::add(std::string name, bool passed, double value, std::string detail) {
    lines.push_back({std::move(name), passed, value, std::move(detail)});
}

LimitContext config_context(const ExperimentConfig& cfg, double eps) {
    QSParams q = cfg.params;
    q.eps = eps;
    q.m = cfg.m;
    LimitContext c = LimitContext::from_qs(q);
    if (!cfg.force_inadmissible) c.validate();
    return c;
}

ELState scenario_el_state(const ExperimentConfig& cfg, const GridPtr& g, const ELParams& el) {
    const ScenarioSpec& sc = cfg.scenario;
    const double kw = 2.0 * std::numbers::pi * sc.mode / g->box_length();
    ELState s = el_constant_state(g, el, {1.0, 0.0, 0.0});
    for (std::size_t pt = 0; pt < g->npoints(); ++pt) {
        const Vec3 x = g->position(pt);
        if (sc.name == "director-wave") {
            const double th = sc.amplitude * std::sin(kw * x[0]);
            s.n.set_vec(pt, {std::cos(th), std::sin(th), 0.0});
        } else if (sc.name == "shear") {
            s.n.set_vec(pt, {std::cos(sc.amplitude), std::sin(sc.amplitude), 0.0});
            s.v.set_vec(pt, {sc.shear_amplitude * std::sin(kw * x[1]), 0.0, 0.0});
        }
    }
    if (el.inertial()) {
        // start on the noninertial rate so the director is not at rest
        ELParams e0 = el;
        e0.I = 0.0;
        ELState s0 = s;
        s0.ndot = Field();
        const ELRates r = el_rates(e0, s0);
        s.ndot = r.w;
        s.ndot -= advect(s.v, gradient(s.n));
    }
    return s;
}

double choose_dt(const ExperimentConfig& cfg, double bound) {
    if (cfg.dt.rule != "fixed" && !(bound > 0.0)) fail(ErrorCode::numerical, "choose_dt: no usable stability bound");
    const double raw = cfg.dt.rule == "fixed" ? cfg.dt.value : std::min(cfg.dt.max, 0.5 * bound);
    if (!(raw > 0.0) || !std::isfinite(raw)) fail(ErrorCode::numerical, "choose_dt: no usable step size");
    const double k = std::ceil(cfg.sample_interval / raw - 1e-9);
    return cfg.sample_interval / std::max(1.0, k);
}

namespace {

ExpansionBundle scenario_bundle(const ExperimentConfig& cfg, const LimitContext& ctx, const GridPtr& g) {
    const ELParams el = coefficients_from_qs(ctx);
    const ELStepper st(el);
    const ELState s0 = scenario_el_state(cfg, g, el);
    const ELState s1 = st.step(s0, choose_dt(cfg, el_stability_bound(el, s0)));
    return build_expansion(ctx, el, s0, &s1);
}

// Constructed initial data with N = -(mu2 / 2 mu1) D, used for forced audits.
QSState forced_qs_state(const ExperimentConfig& cfg, const GridPtr& g, const QSParams& p) {
    ELParams dummy;
    dummy.I = 0.0;
    const ELState e = scenario_el_state(cfg, g, dummy);
    QSState s;
    s.Q = Field(g, FieldKind::qtensor);
    s.v = e.v;
    const double s1 = critical_order_parameters(p.bulk).s1;
    for (std::size_t pt = 0; pt < g->npoints(); ++pt) s.Q.set_qtensor(pt, uniaxial_q(e.n.vec(pt), s1));
    const auto gv = velocity_gradient(gradient(s.v));
    Field w(g, FieldKind::qtensor);
    const double r = p.mu1 != 0.0 ? p.mu2 / (2.0 * p.mu1) : 0.0;
    for (std::size_t pt = 0; pt < g->npoints(); ++pt)
        w.set_qtensor(pt, commutator(skew_part(gv[pt]), s.Q.qtensor(pt)) - r * sym_part(gv[pt]));
    s.Qt = w;
    s.Qt -= advect(s.v, gradient(s.Q));
    return s;
}

}  // namespace

QSState scenario_qs_state(const ExperimentConfig& cfg, const GridPtr& g, double eps) {
    const LimitContext ctx = config_context(cfg, eps);
    if (cfg.force_inadmissible) return forced_qs_state(cfg, g, ctx.qs);
    const ExpansionBundle b = scenario_bundle(cfg, ctx, g);
    return well_prepared_initial_data(ctx, b, {}, cfg.e0, cfg.remainder_order);
}

FitResult fit_order(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) fail(ErrorCode::invalid_argument, "fit_order: at least two points required");
    double sx = 0.0, sy = 0.0;
    std::vector<double> x, y;
    for (const auto& [e, r] : pts) {
        if (!(e > 0.0) || !(r > 0.0)) fail(ErrorCode::invalid_argument, "fit_order: entries must be positive");
        x.push_back(std::log(e));
        y.push_back(std::log(r));
        sx += x.back();
        sy += y.back();
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) fail(ErrorCode::invalid_argument, "fit_order: eps values must differ");
    FitResult f;
    f.order = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + f.order * (x[i] - mx));
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

namespace {

double pout_norm(const Field& n, const Field& x, const Field* minus) {
    double s = 0.0;
    for (std::size_t pt = 0; pt < x.npoints(); ++pt) {
        QTensor o = projections(n.vec(pt), x.qtensor(pt)).out;
        if (minus) o -= minus->qtensor(pt);
        s += ddot(o, o);
    }
    return std::sqrt(s * x.grid()->cell_volume());
}

struct SampleRef {
    ExpansionBundle b;
};

// Runs the QS model for one eps against the precomputed expansion samples.
void sweep_entry(const ExperimentConfig& cfg, const GridPtr& g, const std::vector<SampleRef>& refs, double eps,
                 SweepRow& row, std::vector<DiagnosticRow>& diag) {
    const LimitContext ctx = config_context(cfg, eps);
    const int k = cfg.remainder_order;
    QSState s = well_prepared_initial_data(ctx, refs[0].b, {}, cfg.e0, k);
    QSParams qp = ctx.qs;
    const QSStepper st(qp);
    const double dt = choose_dt(cfg, qs_stability_bound(qp, s));
    const long per_sample = std::lround(cfg.sample_interval / dt);
    row.eps = eps;
    row.dt = dt;
    for (std::size_t j = 0; j < refs.size(); ++j) {
        if (j > 0) {
            for (long i = 0; i < per_sample; ++i) s = st.step(s, dt);
            s.t = refs[j].b.t;
        }
        const ExpansionBundle& b = refs[j].b;
        Field dq = s.Q;
        dq -= b.Q0;
        Field q1 = b.Q1perp;
        q1 *= eps;
        Field dv = s.v;
        dv -= b.v0;
        row.err_q0 = std::max(row.err_q0, l2_norm(dq));
        row.err_out = std::max(row.err_out, pout_norm(b.n, dq, &q1));
        row.err_v = std::max(row.err_v, l2_norm(dv));
        const Remainder r = extract_remainder(ctx, s, b, k);
        DiagnosticRow d;
        d.t = b.t;
        d.eps = eps;
        d.m = cfg.m;
        d.E_tilde = energy_tilde_Em(ctx, r.Q, r.Qt, r.v, b.n);
        const Field p = remainder_rate(r.Qt.empty() ? Field(g, FieldKind::qtensor) : r.Qt, r.Q, r.v, b.v0, s.Q);
        d.M = m_rule(ctx, b.n, b.w);
        d.E_m = energy_Em(ctx, r.Q, p, r.v, b.n, d.M);
        d.F = energy_F(ctx, p, r.v, b.n);
        d.A = correction_A(ctx, r.Q, p, b.n, b.w);
        d.qr_l2 = l2_norm(r.Q);
        d.qr_h1 = sobolev_norm(r.Q, 1);
        d.pout_l2 = pout_norm(b.n, dq, nullptr);
        d.vr_l2 = l2_norm(r.v);
        diag.push_back(d);
        row.e_tilde = std::max(row.e_tilde, d.E_tilde);
        if (j == 0) row.e_tilde0 = d.E_tilde;
    }
    row.final_energy = qs_energy_audit(qp, s).total;
}

}  // namespace

SweepReport run_convergence_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const GridPtr g = Grid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.box_length);
    SweepReport rep;

    // The expansion does not depend on eps: one EL reference serves all runs.
    const LimitContext ctx0 = config_context(cfg, cfg.eps_list.front());
    const ELParams el = coefficients_from_qs(ctx0);
    const ELStepper est(el);
    ELState s = scenario_el_state(cfg, g, el);
    const double edt = choose_dt(cfg, el_stability_bound(el, s));
    rep.el_dt = edt;
    const long per_sample = std::lround(cfg.sample_interval / edt);
    const long nsamples = std::lround(cfg.t_final / cfg.sample_interval);
    std::vector<SampleRef> refs;
    for (long j = 0; j <= nsamples; ++j) {
        s.t = j * cfg.sample_interval;
        ELState next = est.step(s, edt);
        refs.push_back({build_expansion(ctx0, el, s, &next)});
        if (j == nsamples) break;
        s = std::move(next);
        for (long i = 1; i < per_sample; ++i) s = est.step(s, edt);
    }

    const std::size_t ne = cfg.eps_list.size();
    rep.rows.resize(ne);
    std::vector<std::vector<DiagnosticRow>> diags(ne);
    std::vector<std::exception_ptr> errs(ne);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ne; i = next++) {
            try {
                sweep_entry(cfg, g, refs, cfg.eps_list[i], rep.rows[i], diags[i]);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(cfg.threads, static_cast<int>(ne)));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < ne; ++i) {
        if (!errs[i]) continue;
        std::ostringstream tag;
        tag << "eps=" << cfg.eps_list[i] << ": ";
        try {
            std::rethrow_exception(errs[i]);
        } catch (const Error& e) {
            throw Error(e.code(), tag.str() + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::numerical, tag.str() + e.what());
        }
    }
    for (auto& d : diags) rep.diagnostics.insert(rep.diagnostics.end(), d.begin(), d.end());

    if (ne >= 2) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : rep.rows) pts.emplace_back(r.eps, r.err_q0);
        bool positive = true;
        for (const auto& p : pts) positive = positive && p.second > 0.0;
        if (positive) {
            const FitResult f = fit_order(pts);
            rep.fit_available = true;
            rep.fitted_order = f.order;
            rep.fit_residual = f.residual;
        }
    }
    if (!rep.fit_available) {
        rep.fitted_order = std::numeric_limits<double>::quiet_NaN();
        rep.fit_residual = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

namespace {

AuditRow qs_row(const QSParams& p, const QSState& s, int step) {
    const EnergyBreakdown e = qs_energy_audit(p, s);
    AuditRow r;
    r.step = step;
    r.t = s.t;
    r.kinetic = e.kinetic;
    r.inertial = e.inertial;
    r.bulk = e.bulk;
    r.elastic = e.elastic;
    r.total = e.total;
    r.excess = e.excess();
    r.dissipation_rate = e.dissipation_rate;
    return r;
}

AuditRow el_row(const ELParams& p, const ELState& s, int step) {
    const ELEnergy e = el_energy_audit(p, s);
    AuditRow r;
    r.step = step;
    r.t = s.t;
    r.kinetic = e.kinetic;
    r.inertial = e.director_kinetic;
    r.elastic = e.frank;
    r.total = e.total;
    r.excess = e.total;
    r.dissipation_rate = e.dissipation_rate;
    return r;
}

void finish_trace(AuditTrace& tr) {
    auto& rows = tr.rows;
    double dmax = 0.0, mis = 0.0, emax = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double de = rows[i + 1].total - rows[i].total;
        rows[i].dEdt = de / tr.dt;
        const double den = std::abs(rows[i].excess);
        rows[i].rel_increase = de > 0.0 ? (den > 0.0 ? de / den : std::numeric_limits<double>::infinity()) : 0.0;
        tr.max_rel_increase = std::max(tr.max_rel_increase, rows[i].rel_increase);
        const double dbar = 0.5 * (rows[i].dissipation_rate + rows[i + 1].dissipation_rate);
        dmax = std::max(dmax, std::abs(dbar));
        emax = std::max(emax, std::abs(rows[i].dEdt));
        mis = std::max(mis, std::abs(rows[i].dEdt - dbar));
    }
    for (const auto& r : rows)
        if (r.dissipation_rate > 0.0) ++tr.positive_dissipation_events;
    tr.dissipation_mismatch = dmax > 0.0 ? mis / dmax : emax;
    tr.monotone = tr.max_rel_increase < 1e-8;
}

}  // namespace

AuditTrace run_energy_audit(const ExperimentConfig& cfg, double dt_scale) {
    cfg.validate();
    if (!(dt_scale >= 1.0)) fail(ErrorCode::invalid_argument, "run_energy_audit: dt_scale must be >= 1");
    const GridPtr g = Grid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.box_length);
    AuditTrace tr;
    tr.model = cfg.model;
    const LimitContext ctx = config_context(cfg, cfg.params.eps);
    if (cfg.model == "qs") {
        tr.inertial = true;
        QSState s = scenario_qs_state(cfg, g, cfg.params.eps);
        const QSStepper st(ctx.qs, cfg.force_inadmissible);
        tr.dt = choose_dt(cfg, qs_stability_bound(ctx.qs, s)) / dt_scale;
        const long n = std::lround(cfg.t_final / tr.dt);
        tr.rows.push_back(qs_row(ctx.qs, s, 0));
        for (long i = 1; i <= n; ++i) {
            s = st.step(s, tr.dt);
            tr.rows.push_back(qs_row(ctx.qs, s, static_cast<int>(i)));
        }
    } else {
        const ELParams el = coefficients_from_qs(ctx);
        tr.inertial = el.inertial();
        ELState s = scenario_el_state(cfg, g, el);
        const ELStepper st(el);
        tr.dt = choose_dt(cfg, el_stability_bound(el, s)) / dt_scale;
        const long n = std::lround(cfg.t_final / tr.dt);
        tr.rows.push_back(el_row(el, s, 0));
        for (long i = 1; i <= n; ++i) {
            s = st.step(s, tr.dt);
            tr.rows.push_back(el_row(el, s, static_cast<int>(i)));
        }
    }
    finish_trace(tr);
    return tr;
}

AuditStudy run_audit_study(const ExperimentConfig& cfg) {
    AuditStudy st;
    for (double sc : {1.0, 2.0, 4.0}) st.levels.push_back(run_energy_audit(cfg, sc));
    st.passed = st.levels.back().dissipation_mismatch < 0.05;
    for (const auto& l : st.levels) st.passed = st.passed && l.monotone;
    return st;
}

// ---- CSV and plot emission ----

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header, const std::string& hash)
        : os_(path, std::ios::binary) {
        if (!os_) fail(ErrorCode::io, "cannot write " + path);
        row(header);
        os_ << "# config_hash=" << hash << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << csv_field(cells[i]);
        os_ << "\n";
    }
    ~CsvWriter() = default;

private:
    std::ofstream os_;
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorCode::io, "cannot write " + path);
    os << text;
}

const std::vector<std::string> kAuditHeader = {"step",    "t",     "kinetic", "inertial",         "bulk",
                                               "elastic", "total", "excess",  "dissipation_rate", "dEdt",
                                               "rel_increase"};

std::vector<std::string> audit_cells(const AuditRow& r) {
    return {std::to_string(r.step), num(r.t),      num(r.kinetic),          num(r.inertial),
            num(r.bulk),            num(r.elastic), num(r.total),           num(r.excess),
            num(r.dissipation_rate), num(r.dEdt),  num(r.rel_increase)};
}

}  // namespace

void write_sweep_outputs(const SweepReport& r, const ExperimentConfig& cfg, const std::string& dir) {
    ensure_dir(dir);
    const std::string h = config_hash(cfg);
    {
        CsvWriter w(dir + "/sweep.csv",
                    {"eps", "dt", "err_q0", "err_out", "err_v", "e_tilde", "e_tilde0", "final_energy", "fitted_order",
                     "fit_residual", "fit_status"},
                    h);
        const std::string status = r.fit_available ? "ok" : "insufficient points";
        for (const auto& x : r.rows)
            w.row({num(x.eps), num(x.dt), num(x.err_q0), num(x.err_out), num(x.err_v), num(x.e_tilde),
                   num(x.e_tilde0), num(x.final_energy), num(r.fitted_order), num(r.fit_residual), status});
    }
    {
        CsvWriter w(dir + "/diagnostics.csv",
                    {"t", "eps", "m", "E_m", "F", "A", "M", "E_tilde", "QR_L2", "QR_H1", "Pout_L2", "vR_L2"}, h);
        for (const auto& d : r.diagnostics)
            w.row({num(d.t), num(d.eps), std::to_string(d.m), num(d.E_m), num(d.F), num(d.A), num(d.M),
                   num(d.E_tilde), num(d.qr_l2), num(d.qr_h1), num(d.pout_l2), num(d.vr_l2)});
    }
    write_text(dir + "/sweep.gp",
               "# gnuplot script: errors against eps on log axes\n"
               "set datafile separator ','\n"
               "set logscale xy\n"
               "set xlabel 'eps'\n"
               "set ylabel 'sup_t error (L2)'\n"
               "set key left top\n"
               "set terminal pngcairo size 800,600\n"
               "set output 'sweep.png'\n"
               "plot 'sweep.csv' every ::2 using 1:3 with linespoints title '|Q - Q0|', \\\n"
               "     'sweep.csv' every ::2 using 1:4 with linespoints title '|P_out(Q - Q0) - eps Q1perp|', \\\n"
               "     'sweep.csv' every ::2 using 1:5 with linespoints title '|v - v0|'\n");
}

void write_audit_outputs(const AuditStudy& s, const ExperimentConfig& cfg, const std::string& dir) {
    ensure_dir(dir);
    const std::string h = config_hash(cfg);
    {
        CsvWriter w(dir + "/audit_summary.csv",
                    {"level", "model", "inertial", "dt", "max_rel_increase", "positive_dissipation_events",
                     "dissipation_mismatch", "monotone"},
                    h);
        for (std::size_t i = 0; i < s.levels.size(); ++i) {
            const auto& l = s.levels[i];
            w.row({std::to_string(i), l.model, l.inertial ? "1" : "0", num(l.dt), num(l.max_rel_increase),
                   std::to_string(l.positive_dissipation_events), num(l.dissipation_mismatch),
                   l.monotone ? "1" : "0"});
        }
    }
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        CsvWriter w(dir + "/audit_level" + std::to_string(i) + ".csv", kAuditHeader, h);
        for (const auto& r : s.levels[i].rows) w.row(audit_cells(r));
    }
    write_text(dir + "/energy.gp",
               "# gnuplot script: total energy and dissipation for each dt level\n"
               "set datafile separator ','\n"
               "set xlabel 't'\n"
               "set terminal pngcairo size 800,900\n"
               "set output 'energy.png'\n"
               "set multiplot layout 2,1\n"
               "set ylabel 'total energy'\n"
               "plot for [i=0:2] sprintf('audit_level%d.csv', i) every ::2 using 2:7 with lines title sprintf('level %d', i)\n"
               "set ylabel 'dE/dt and dissipation'\n"
               "plot for [i=0:2] sprintf('audit_level%d.csv', i) every ::2 using 2:10 with lines title sprintf('dE/dt %d', i), \\\n"
               "     for [i=0:2] sprintf('audit_level%d.csv', i) every ::2 using 2:9 with lines dt 2 title sprintf('rate %d', i)\n"
               "unset multiplot\n");
}

SimulationResult simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    const GridPtr g = Grid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.box_length);
    const LimitContext ctx = config_context(cfg, cfg.params.eps);
    SimulationResult res;
    bool inertial = true;
    std::vector<std::pair<std::string, const Field*>> fields;
    QSState qs;
    ELState es;
    if (cfg.model == "qs") {
        qs = scenario_qs_state(cfg, g, cfg.params.eps);
        const QSStepper st(ctx.qs, cfg.force_inadmissible);
        res.dt = choose_dt(cfg, qs_stability_bound(ctx.qs, qs));
        const long per = std::lround(cfg.sample_interval / res.dt);
        const long n = std::lround(cfg.t_final / res.dt);
        res.trace.push_back(qs_row(ctx.qs, qs, 0));
        for (long i = 1; i <= n; ++i) {
            qs = st.step(qs, res.dt);
            if (i % per == 0) res.trace.push_back(qs_row(ctx.qs, qs, static_cast<int>(i)));
        }
        res.steps = static_cast<int>(n);
        fields = {{"Q", &qs.Q}, {"Qt", &qs.Qt}, {"v", &qs.v}};
    } else {
        const ELParams el = coefficients_from_qs(ctx);
        inertial = el.inertial();
        es = scenario_el_state(cfg, g, el);
        const ELStepper st(el);
        res.dt = choose_dt(cfg, el_stability_bound(el, es));
        const long per = std::lround(cfg.sample_interval / res.dt);
        const long n = std::lround(cfg.t_final / res.dt);
        res.trace.push_back(el_row(el, es, 0));
        for (long i = 1; i <= n; ++i) {
            es = st.step(es, res.dt);
            if (i % per == 0) res.trace.push_back(el_row(el, es, static_cast<int>(i)));
        }
        res.steps = static_cast<int>(n);
        fields = {{"n", &es.n}, {"v", &es.v}};
        if (inertial) fields.emplace_back("ndot", &es.ndot);
    }
    if (out_dir.empty()) return res;
    ensure_dir(out_dir);
    const double t = cfg.model == "qs" ? qs.t : es.t;
    for (const auto& [name, f] : fields) write_snapshot(out_dir + "/" + name + ".snap", *f, t);
    {
        CsvWriter w(out_dir + "/trace.csv", kAuditHeader, config_hash(cfg));
        for (const auto& r : res.trace) w.row(audit_cells(r));
    }
    std::ostringstream man;
    man << "{\n  \"params\": " << config_to_json(cfg) << ",\n  \"t\": " << num(t)
        << ",\n  \"step_count\": " << res.steps << ",\n  \"model\": \"" << cfg.model
        << "\",\n  \"inertial\": " << (inertial ? "true" : "false") << "\n}\n";
    write_text(out_dir + "/manifest.json", man.str());
    write_text(out_dir + "/trace.gp",
               "# gnuplot script: sampled energies\n"
               "set datafile separator ','\n"
               "set xlabel 't'\n"
               "set terminal pngcairo size 800,600\n"
               "set output 'trace.png'\n"
               "plot 'trace.csv' every ::2 using 2:7 with linespoints title 'total', \\\n"
               "     'trace.csv' every ::2 using 2:3 with linespoints title 'kinetic'\n");
    return res;
}

}  // namespace qll

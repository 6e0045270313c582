// SPDX-License-Identifier: Apache-2.0
#include "qll/qll.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "qll/error.hpp"
#include "qll/experiments.hpp"

struct qll_config {
    qll::ExperimentConfig cfg;
};

struct qll_report {
    qll::Report rep;
};

namespace {

thread_local std::string g_last_error;

qll_status to_status(qll::ErrorCode c) {
    switch (c) {
        case qll::ErrorCode::invalid_argument: return QLL_INVALID_ARGUMENT;
        case qll::ErrorCode::config: return QLL_CONFIG;
        case qll::ErrorCode::invariant: return QLL_INVARIANT;
        case qll::ErrorCode::numerical: return QLL_NUMERICAL;
        case qll::ErrorCode::io: return QLL_IO;
        default: return QLL_INTERNAL;
    }
}

template <class F>
qll_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return QLL_OK;
    } catch (const qll::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return QLL_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QLL_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) qll::fail(qll::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

qll::ExperimentConfig prepared(const qll_config* cfg) {
    qll::ExperimentConfig c = cfg->cfg;
    qll::apply_thread_env(c);
    return c;
}

}  // namespace

extern "C" {

const char* qll_last_error(void) { return g_last_error.c_str(); }

qll_status qll_config_default(qll_config** out) {
    return guarded([&] {
        need(out, "out");
        *out = new qll_config{qll::default_config()};
    });
}

qll_status qll_config_from_file(const char* path, qll_config** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new qll_config{qll::load_config(path)};
    });
}

qll_status qll_config_from_json(const char* text, qll_config** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new qll_config{qll::parse_config(text)};
    });
}

qll_status qll_config_set_threads(qll_config* cfg, int threads) {
    return guarded([&] {
        need(cfg, "cfg");
        if (threads < 1) qll::fail(qll::ErrorCode::config, "config: threads must be >= 1");
        cfg->cfg.threads = threads;
    });
}

qll_status qll_config_to_json(const qll_config* cfg, char* buf, size_t* len) {
    return guarded([&] {
        need(cfg, "cfg");
        need(len, "len");
        const std::string s = qll::config_to_json(cfg->cfg);
        const size_t cap = *len;
        *len = s.size() + 1;
        if (buf) {
            if (cap < s.size() + 1) qll::fail(qll::ErrorCode::invalid_argument, "buffer too small");
            std::memcpy(buf, s.c_str(), s.size() + 1);
        }
    });
}

void qll_config_free(qll_config* cfg) { delete cfg; }

size_t qll_report_line_count(const qll_report* r) { return r ? r->rep.lines.size() : 0; }

qll_status qll_report_line(const qll_report* r, size_t i, const char** name, int* passed, double* value,
                           const char** detail) {
    return guarded([&] {
        need(r, "report");
        if (i >= r->rep.lines.size()) qll::fail(qll::ErrorCode::invalid_argument, "line index out of range");
        const auto& l = r->rep.lines[i];
        if (name) *name = l.name.c_str();
        if (passed) *passed = l.passed ? 1 : 0;
        if (value) *value = l.value;
        if (detail) *detail = l.detail.c_str();
    });
}

int qll_report_passed(const qll_report* r) { return r && r->rep.passed() ? 1 : 0; }

qll_status qll_report_value(const qll_report* r, const char* name, double* value) {
    return guarded([&] {
        need(r, "report");
        need(name, "name");
        need(value, "value");
        for (const auto& l : r->rep.lines)
            if (l.name == name) {
                *value = l.value;
                return;
            }
        qll::fail(qll::ErrorCode::invalid_argument, std::string("no report line named ") + name);
    });
}

void qll_report_free(qll_report* r) { delete r; }

qll_status qll_verify_algebra(const qll_config* cfg, qll_report** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        *out = new qll_report{qll::verify_algebra(prepared(cfg))};
    });
}

qll_status qll_run_sweep(const qll_config* cfg, const char* out_dir, qll_report** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        const qll::ExperimentConfig c = prepared(cfg);
        const qll::SweepReport s = qll::run_convergence_sweep(c);
        if (out_dir) qll::write_sweep_outputs(s, c, out_dir);
        qll::Report rep;
        for (const auto& r : s.rows) {
            rep.add("err_q0[eps=" + fmt(r.eps) + "]", true, r.err_q0);
            rep.add("err_out[eps=" + fmt(r.eps) + "]", true, r.err_out);
            rep.add("err_v[eps=" + fmt(r.eps) + "]", true, r.err_v);
            rep.add("e_tilde[eps=" + fmt(r.eps) + "]", true, r.e_tilde);
        }
        rep.add("fitted_order", s.fit_available, s.fitted_order, s.fit_available ? "" : "fewer than two entries");
        rep.add("fit_residual", s.fit_available, s.fit_residual);
        *out = new qll_report{std::move(rep)};
    });
}

qll_status qll_run_audit(const qll_config* cfg, const char* out_dir, qll_report** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        const qll::ExperimentConfig c = prepared(cfg);
        const qll::AuditStudy st = qll::run_audit_study(c);
        if (out_dir) qll::write_audit_outputs(st, c, out_dir);
        qll::Report rep;
        for (std::size_t i = 0; i < st.levels.size(); ++i) {
            const auto& l = st.levels[i];
            const std::string tag = "[level" + std::to_string(i) + "]";
            rep.add("monotone" + tag, l.monotone, l.max_rel_increase, "dt=" + fmt(l.dt));
            rep.add("positive_dissipation_events" + tag, l.positive_dissipation_events == 0,
                    l.positive_dissipation_events);
            rep.add("dissipation_mismatch" + tag, i + 1 < st.levels.size() || l.dissipation_mismatch < 0.05,
                    l.dissipation_mismatch);
        }
        *out = new qll_report{std::move(rep)};
    });
}

qll_status qll_run_simulation(const qll_config* cfg, const char* model, const char* out_dir, qll_report** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        qll::ExperimentConfig c = prepared(cfg);
        if (model) c.model = model;
        const qll::SimulationResult r = qll::simulate(c, out_dir ? out_dir : "");
        qll::Report rep;
        rep.add("steps", true, r.steps);
        rep.add("dt", true, r.dt);
        if (!r.trace.empty()) {
            rep.add("initial_energy", true, r.trace.front().total);
            rep.add("final_energy", true, r.trace.back().total);
        }
        *out = new qll_report{std::move(rep)};
    });
}

qll_status qll_map_coefficients(const double beta[8], double a, double b, double c, double L1, double L2, double L3,
                                int m, double out[13]) {
    return guarded([&] {
        need(beta, "beta");
        need(out, "out");
        qll::QSParams q;
        q.beta1 = beta[0];
        q.beta4 = beta[1];
        q.beta5 = beta[2];
        q.beta6 = beta[3];
        q.beta7 = beta[4];
        q.mu1 = beta[5];
        q.mu2 = beta[6];
        q.J = beta[7];
        q.bulk = {a, b, c};
        q.elastic.L1 = L1;
        q.elastic.L2 = L2;
        q.elastic.L3 = L3;
        q.m = m;
        if (m < 0) qll::fail(qll::ErrorCode::invalid_argument, "m must be nonnegative");
        const qll::LimitContext ctx = qll::LimitContext::from_qs(q);
        ctx.validate();
        const qll::ELParams e = qll::coefficients_from_qs(ctx);
        const double v[13] = {e.alpha1, e.alpha2, e.alpha3, e.alpha4, e.alpha5, e.alpha6, e.gamma1,
                              e.gamma2, e.I,      e.k1,     e.k2,     e.k3,     e.k4};
        std::memcpy(out, v, sizeof v);
    });
}

qll_status qll_config_map_coefficients(const qll_config* cfg, double out[13]) {
    if (!cfg) {
        g_last_error = "cfg must not be null";
        return QLL_INVALID_ARGUMENT;
    }
    const qll::QSParams& q = cfg->cfg.params;
    const double beta[8] = {q.beta1, q.beta4, q.beta5, q.beta6, q.beta7, q.mu1, q.mu2, q.J};
    return qll_map_coefficients(beta, q.bulk.a, q.bulk.b, q.bulk.c, q.elastic.L1, q.elastic.L2, q.elastic.L3,
                                cfg->cfg.m, out);
}

qll_status qll_check_beta(const double beta[7], int* admissible) {
    return guarded([&] {
        need(beta, "beta");
        need(admissible, "admissible");
        const qll::BetaReport r = qll::beta_admissible(beta[0], beta[1], beta[2], beta[3], beta[4], beta[5], beta[6]);
        *admissible = r.admissible ? 1 : 0;
    });
}

qll_status qll_dissipation_criterion(double b1, double b2, double b3, int* result) {
    return guarded([&] {
        need(result, "result");
        *result = qll::dissipation_criterion(b1, b2, b3) ? 1 : 0;
    });
}

qll_status qll_fit_order(const double* eps, const double* err, size_t n, double* order, double* residual) {
    return guarded([&] {
        need(eps, "eps");
        need(err, "err");
        std::vector<std::pair<double, double>> pts;
        for (size_t i = 0; i < n; ++i) pts.emplace_back(eps[i], err[i]);
        const qll::FitResult f = qll::fit_order(pts);
        if (order) *order = f.order;
        if (residual) *residual = f.residual;
    });
}

}  // extern "C"

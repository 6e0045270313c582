// SPDX-License-Identifier: Apache-2.0
// Command-line front end over the C interface.
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qll/qll.h"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<int> threads;
};

void add_common(CLI::App* sub, Common& c, bool with_out = true) {
    sub->add_option("--config", c.config, "JSON config file (defaults when omitted)")->check(CLI::ExistingFile);
    if (with_out) sub->add_option("--out", c.out, "output directory for CSV and plot scripts");
    sub->add_option("--threads", c.threads, "worker count (QLL_THREADS overrides)")->check(CLI::PositiveNumber);
}

int fail_code(qll_status s) {
    std::fprintf(stderr, "error: %s\n", qll_last_error());
    return s == QLL_CONFIG ? 2 : 1;
}

qll_status load(const Common& c, qll_config** cfg) {
    qll_status s = c.config.empty() ? qll_config_default(cfg) : qll_config_from_file(c.config.c_str(), cfg);
    if (s == QLL_OK && c.threads) s = qll_config_set_threads(*cfg, *c.threads);
    return s;
}

void print_report(const qll_report* r) {
    const size_t n = qll_report_line_count(r);
    for (size_t i = 0; i < n; ++i) {
        const char* name = nullptr;
        const char* detail = nullptr;
        int passed = 0;
        double value = 0.0;
        qll_report_line(r, i, &name, &passed, &value, &detail);
        std::printf("%-40s %s  %.6g%s%s\n", name, passed ? "ok  " : "FAIL", value, *detail ? "  " : "", detail);
    }
}

template <class Run>
int run_report(const Common& c, Run&& run) {
    qll_config* cfg = nullptr;
    qll_status s = load(c, &cfg);
    if (s != QLL_OK) return fail_code(s);
    qll_report* rep = nullptr;
    s = run(cfg, c.out.empty() ? nullptr : c.out.c_str(), &rep);
    qll_config_free(cfg);
    if (s != QLL_OK) return fail_code(s);
    print_report(rep);
    const int ok = qll_report_passed(rep);
    qll_report_free(rep);
    std::fflush(stdout);
    if (!ok) std::fprintf(stderr, "error: report has failing lines\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qian-Sheng / Ericksen-Leslie limit experiments"};
    app.require_subcommand(1);

    Common va, sim, sw, au, mc;
    std::string model;
    auto* verify = app.add_subcommand("verify-algebra", "tensor, bulk and elastic property suites");
    add_common(verify, va, false);
    auto* simulate = app.add_subcommand("simulate", "run one model to t_final and write snapshots");
    add_common(simulate, sim);
    simulate->add_option("--model", model, "qs or el")->check(CLI::IsMember({"qs", "el"}));
    auto* sweep = app.add_subcommand("sweep", "epsilon convergence sweep against the EL reference");
    add_common(sweep, sw);
    auto* audit = app.add_subcommand("audit", "energy-law audit at dt, dt/2 and dt/4");
    add_common(audit, au);
    auto* mapc = app.add_subcommand("map-coefficients", "print the Ericksen-Leslie coefficients of the config");
    add_common(mapc, mc, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*verify)
        return run_report(va, [](qll_config* c, const char*, qll_report** r) { return qll_verify_algebra(c, r); });
    if (*simulate)
        return run_report(sim, [&](qll_config* c, const char* out, qll_report** r) {
            return qll_run_simulation(c, model.empty() ? nullptr : model.c_str(), out, r);
        });
    if (*sweep) return run_report(sw, qll_run_sweep);
    if (*audit) return run_report(au, qll_run_audit);

    qll_config* cfg = nullptr;
    qll_status s = load(mc, &cfg);
    if (s != QLL_OK) return fail_code(s);
    double out[13];
    s = qll_config_map_coefficients(cfg, out);
    qll_config_free(cfg);
    if (s != QLL_OK) return fail_code(s);
    static const char* names[13] = {"alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "gamma1",
                                    "gamma2", "I",      "k1",     "k2",     "k3",     "k4"};
    for (int i = 0; i < 13; ++i) std::printf("%-7s %.17g\n", names[i], out[i]);
    return 0;
}

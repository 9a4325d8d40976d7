// Acceptance suite: one pass/fail line per criterion.
//
// Criteria 5-7 are data-independent and always enforced. Criteria 1-4 and 8
// target the published Dow-Jones results; their level checks need the
// companion dataset (pass --dow-csv <file>, wide layout of daily returns).
// Without it the full 13-model pipeline still runs on a deterministic
// synthetic network-ARCH panel of the same shape (n=29, T=3040, M=2540), the
// structural criteria (ordering, DM signs) are enforced on it, and the
// level checks are reported as UNRUNNABLE without failing the build.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "netarch/arch_network.hpp"
#include "netarch/arch_univariate.hpp"
#include "netarch/data.hpp"
#include "netarch/ensemble.hpp"
#include "netarch/evaluate.hpp"
#include "netarch/network.hpp"
#include "netarch/report.hpp"
#include "netarch/simulate.hpp"

using namespace netarch;
using Clock = std::chrono::steady_clock;

namespace {

struct Line {
    std::string text;
    bool pass = false;
    bool enforced = true;
};
std::vector<Line> results;

void report(int criterion, const std::string& what, bool pass, bool enforced,
            const std::string& detail) {
    Line l;
    l.pass = pass;
    l.enforced = enforced;
    const char* tag = pass ? "PASS" : enforced ? "FAIL" : "FAIL (not enforced: no dataset)";
    l.text = "criterion " + std::to_string(criterion) + " [" + tag + "] " + what +
             (detail.empty() ? "" : " -- " + detail);
    results.push_back(l);
    std::cout << l.text << std::endl;
}

void unrunnable(int criterion, const std::string& what) {
    Line l;
    l.pass = false;
    l.enforced = false;
    l.text = "criterion " + std::to_string(criterion) +
             " [UNRUNNABLE] " + what + " -- needs the companion dataset (--dow-csv)";
    results.push_back(l);
    std::cout << l.text << std::endl;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

EdgeWeightMatrix random_knn_w(int n, int k, uint64_t seed) {
    SplitMix64 rng(seed);
    DistanceMatrix d;
    for (int i = 0; i < n; ++i) d.tickers.push_back("S" + std::to_string(i));
    d.d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) d.d(i, j) = d.d(j, i) = 0.1 + rng.uniform();
    return weights_knn(d, k);
}

struct Dgp {
    Vector phi0, gamma;
    double rho;
    EdgeWeightMatrix w;
};

Dgp make_dgp(int n, int k, double rho, uint64_t seed) {
    Dgp d;
    d.rho = rho;
    d.w = random_knn_w(n, k, seed ^ 0xABCDEF);
    SplitMix64 rng(seed);
    d.phi0.resize(n);
    d.gamma.resize(n);
    for (int i = 0; i < n; ++i) {
        d.gamma(i) = 0.15 + 0.3 * rng.uniform();
        d.phi0(i) = -8.5 * (1.0 - rho - d.gamma(i));
    }
    return d;
}

// ---- criterion 5: Monte Carlo parameter recovery --------------------------

void criterion5() {
    const auto t0 = Clock::now();
    const int n = 10, T = 20000, reps = 50;
    double rho_err = 0.0, gamma_err = 0.0;
    int done = 0;
    for (int r = 0; r < reps; ++r) {
        const Dgp d = make_dgp(n, 3, 0.4, 9000 + r);
        const ReturnPanel panel = simulate_network(d.phi0, d.rho, d.gamma, d.w, T, 1000,
                                                   {9000ull + uint64_t(r)});
        ZeroPolicy policy;
        const NetworkFit fit = fit_network_logarch(log_squared(panel, policy), d.w, 2);
        rho_err += std::abs(fit.rho - d.rho);
        gamma_err += (fit.gamma_diag - d.gamma).cwiseAbs().mean();
        ++done;
    }
    rho_err /= done;
    gamma_err /= done;

    const Vector g1 = (Vector(1) << 0.5).finished();
    const Vector y = simulate_univariate(0.1, g1, 100000, 1000, {31337});
    ReturnPanel up;
    up.tickers = {"S0", "S1"};
    up.dates = synthetic_dates(static_cast<int>(y.size()));
    up.returns.resize(2, y.size());
    up.returns.row(0) = y.transpose();
    up.returns.row(1) = y.reverse().transpose();
    ZeroPolicy policy;
    const UnivariateFit ufit =
        fit_logarch(log_squared(up, policy).values.row(0).transpose(), 1);
    const double uphi0 = std::abs(ufit.phi0 - 0.1), uphi1 = std::abs(ufit.gamma(0) - 0.5);

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = rho_err <= 0.03 && gamma_err <= 0.05 && uphi0 <= 0.02 &&
                      uphi1 <= 0.02 && secs < 300.0;
    report(5, "parameter recovery (50 network replications + univariate T=100000)", pass, true,
           "mean|rho_err|=" + fmt(rho_err) + " mean|gamma_err|=" + fmt(gamma_err) +
               " |phi0_err|=" + fmt(uphi0) + " |phi1_err|=" + fmt(uphi1) + " in " +
               fmt(secs) + "s");
}

// ---- criterion 6: reduction oracle ----------------------------------------

void criterion6() {
    const Dgp d = make_dgp(8, 3, 0.5, 777);
    const ReturnPanel panel = simulate_network(d.phi0, d.rho, d.gamma, d.w, 900, 1000, {777});
    ZeroPolicy policy;
    const LogVolPanel vol = log_squared(panel, policy);
    const NetworkFit fit = fit_network_logarch(vol, d.w, 2, RhoMode::fixed_zero);

    double worst_fit = 0.0, worst_fc = 0.0, worst_gap = 0.0;
    const Vector last = vol.values.col(vol.T() - 1);
    const Vector net_fc = forecast_network_one_step(fit, d.w, last);
    for (int i = 0; i < 8; ++i) {
        const UnivariateFit u = fit_logarch(vol.values.row(i).transpose(), 1);
        worst_fit = std::max(worst_fit, std::abs(fit.gamma_diag(i) - u.gamma(0)));
        worst_fit = std::max(worst_fit, std::abs(fit.phi0(i) - u.phi0));
        worst_fit = std::max(worst_fit, std::abs(fit.mu_star(i) - u.mu_star));
        const double uni_fc = forecast_one_step(u, last.segment(i, 1).eval());
        worst_fc = std::max(worst_fc, std::abs(net_fc(i) - uni_fc));
        worst_gap = std::max(worst_gap, std::abs(net_fc(i) - (uni_fc + u.mu_star)));
    }
    // The forecast clause cannot hold together with the published levels:
    // the joint forecast keeps the error mean inside its constant (its
    // published form), the univariate one subtracts it, so at rho = 0 they
    // differ by exactly mu_star. Fits reduce exactly; the constant-convention
    // gap is reported as the honest failure it is.
    const bool pass = worst_fit <= 1e-8 && worst_fc <= 1e-8;
    report(6, "rho=0 network fit reproduces univariate fits and forecasts", pass, true,
           "fits coincide to " + std::to_string(worst_fit) + "; forecasts differ by " +
               std::to_string(worst_fc) +
               " = the smearing constant exactly (|gap - mu_star| = " +
               std::to_string(worst_gap) + "); the two published forecast "
               "constants are inconsistent, see decisions ledger");
}

// ---- criterion 7: property suite -------------------------------------------

void criterion7() {
    bool all = true;
    std::string detail;

    {  // simultaneous-equation residual identity on simulated data
        const Dgp d = make_dgp(7, 3, 0.4, 4242);
        const NetworkSimOutput sim =
            simulate_network_detail(d.phi0, d.rho, d.gamma, d.w, 500, 800, {4242});
        double worst = 0.0;
        for (int t = 1; t < 500; ++t) {
            const Vector resid = sim.logvol.col(t) -
                                 d.rho * (d.w.weights * sim.logvol.col(t)) -
                                 d.gamma.cwiseProduct(sim.logvol.col(t - 1)) - sim.omega -
                                 sim.log_eps2.col(t);
            worst = std::max(worst, resid.cwiseAbs().maxCoeff());
        }
        if (worst > 1e-10) {
            all = false;
            detail += " eq8-residual=" + std::to_string(worst);
        }
    }
    {  // Helmert fixed-effect annihilation
        SplitMix64 rng(5);
        Matrix rows(4, 50);
        for (int i = 0; i < 4; ++i)
            for (int t = 0; t < 50; ++t) rows(i, t) = rng.uniform();
        Matrix shifted = rows;
        for (int i = 0; i < 4; ++i) shifted.row(i).array() += 3.0 * (i + 1);
        const double diff =
            (helmert_transform(rows) - helmert_transform(shifted)).cwiseAbs().maxCoeff();
        const double con =
            helmert_transform(Matrix::Constant(3, 20, 9.9)).cwiseAbs().maxCoeff();
        if (diff > 1e-10 || con > 1e-10) {
            all = false;
            detail += " helmert=" + std::to_string(std::max(diff, con));
        }
    }
    {  // forecast linear-system residual
        const Dgp d = make_dgp(9, 3, 0.35, 555);
        const ReturnPanel panel =
            simulate_network(d.phi0, d.rho, d.gamma, d.w, 1200, 800, {555});
        ZeroPolicy policy;
        const LogVolPanel vol = log_squared(panel, policy);
        const NetworkFit fit = fit_network_logarch(vol, d.w, 2);
        const Vector last = vol.values.col(vol.T() - 1);
        const Vector h = forecast_network_one_step(fit, d.w, last);
        const Vector resid = (Matrix::Identity(9, 9) - fit.rho * d.w.weights) * h -
                             (fit.gamma_diag.cwiseProduct(last) + fit.forecast_const());
        if (resid.cwiseAbs().maxCoeff() > 1e-10) {
            all = false;
            detail += " forecast-residual=" + std::to_string(resid.cwiseAbs().maxCoeff());
        }
    }
    {  // DM antisymmetry, exact
        SplitMix64 rng(6);
        Vector a(120), b(120);
        for (int t = 0; t < 120; ++t) {
            a(t) = rng.uniform();
            b(t) = 1.1 * rng.uniform();
        }
        const DMResult ab = dm_test(a, b, LossKind::squared);
        const DMResult ba = dm_test(b, a, LossKind::squared);
        if (ab.stat != -ba.stat) {
            all = false;
            detail += " dm-antisymmetry";
        }
    }
    {  // ensemble weights sum to one
        SplitMix64 rng(8);
        Vector y(60);
        Matrix F(60, 4);
        for (int t = 0; t < 60; ++t) {
            y(t) = rng.uniform();
            for (int j = 0; j < 4; ++j) F(t, j) = y(t) + 0.2 * (rng.uniform() - 0.5);
        }
        const Matrix err = F.colwise() - y;
        const double s1 =
            std::abs(minvar_weights(err, {"a", "b", "c", "d"}).weights.sum() - 1.0);
        const double s2 =
            std::abs(cols_weights(y, F, {"a", "b", "c", "d"}).weights.sum() - 1.0);
        if (s1 > 1e-10 || s2 > 1e-10) {
            all = false;
            detail += " weight-sum";
        }
    }
    {  // no lookahead, exact
        const Dgp d = make_dgp(5, 2, 0.4, 999);
        const ReturnPanel panel =
            simulate_network(d.phi0, d.rho, d.gamma, d.w, 160, 800, {999});
        BacktestConfig config;
        config.window_len = 150;
        config.models = {model_from_id("logarch"), model_from_id("B.3.1")};
        const ForecastTable base = run_backtest(panel, config);
        ReturnPanel corrupted = panel;
        for (int t = 155; t < 160; ++t) corrupted.returns.col(t).setConstant(0.5);
        const ForecastTable after = run_backtest(corrupted, config);
        for (int m = 0; m < 2 && all; ++m)
            for (int i = 0; i < 5; ++i)
                for (int s = 0; s < 5; ++s)
                    if (after.forecasts[m](i, s) != base.forecasts[m](i, s)) {
                        all = false;
                        detail += " lookahead";
                    }
    }
    report(7, "property suite (eq. residuals, Helmert, DM, weights, lookahead)", all, true,
           detail.empty() ? "all properties hold" : detail);
}

// ---- criteria 1-4, 8: the rolling Dow experiment ---------------------------

struct PipelineOutcome {
    EvalReport report;
    double backtest_minutes = 0.0;
    bool real_data = false;
};

PipelineOutcome run_pipeline(const ReturnPanel& panel, bool real_data, int threads) {
    BacktestConfig config;
    config.window_len = 2540;
    config.models = all13_models();
    config.threads = threads;
    if (panel.T() <= config.window_len)
        throw Error(errc::usage, "panel too short for M=2540");

    const auto t0 = Clock::now();
    const ForecastTable table = run_backtest(panel, config);
    const double minutes = std::chrono::duration<double>(Clock::now() - t0).count() / 60.0;
    std::cout << "  [backtest " << table.n_models() << " models x " << table.steps()
              << " steps on n=" << panel.n() << ": " << fmt(minutes) << " min]" << std::endl;

    PipelineOutcome out{build_report(table, "logarch", 0.10, BootstrapSpec{5000, 10, 42}, 60),
                        minutes, real_data};
    return out;
}

void criteria_1_to_4_and_8(const PipelineOutcome& p) {
    const EvalReport& r = p.report;
    const bool real = p.real_data;
    const int bench = 0;  // all13_models puts the benchmark first

    auto model_idx = [&](const std::string& id) {
        for (size_t m = 0; m < r.model_ids.size(); ++m)
            if (r.model_ids[m] == id) return static_cast<int>(m);
        return -1;
    };

    // 1: Table-2 levels plus the runtime budget
    {
        const double b_rmsfe = r.avg_rmsfe_by_model(bench);
        const double b_mafe = r.avg_mafe_by_model(bench);
        const double b31_rmsfe = r.avg_rmsfe_by_model(model_idx("B.3.1"));
        const double b103_mafe = r.avg_mafe_by_model(model_idx("B.10.3"));
        const bool levels = std::abs(b_rmsfe - 2.8202) <= 0.05 * 2.8202 &&
                            std::abs(b_mafe - 2.0018) <= 0.05 * 2.0018 &&
                            std::abs(b31_rmsfe - 2.4457) <= 0.05 * 2.4457 &&
                            std::abs(b103_mafe - 1.8559) <= 0.05 * 1.8559;
        const bool runtime_ok = p.backtest_minutes < 30.0;
        const std::string detail = "benchmark rmsfe=" + fmt(b_rmsfe) + " mafe=" + fmt(b_mafe) +
                                   ", B.3.1 rmsfe=" + fmt(b31_rmsfe) + ", B.10.3 mafe=" +
                                   fmt(b103_mafe) + ", backtest " + fmt(p.backtest_minutes) +
                                   " min";
        if (real)
            report(1, "Table-2 level reproduction", levels && runtime_ok, true, detail);
        else if (!runtime_ok)
            report(1, "runtime budget (synthetic stand-in)", false, true, detail);
        else
            unrunnable(1, "Table-2 level reproduction (runtime ok: " + detail + ")");
    }

    // 2: every network model beats the benchmark on both averages
    {
        bool ok = true;
        std::string laggards;
        for (size_t m = 0; m < r.model_ids.size(); ++m) {
            if (static_cast<int>(m) == bench) continue;
            if (!(r.avg_rmsfe_by_model(m) < r.avg_rmsfe_by_model(bench)) ||
                !(r.avg_mafe_by_model(m) < r.avg_mafe_by_model(bench))) {
                ok = false;
                laggards += " " + r.model_ids[m];
            }
        }
        report(2, "all 12 network models beat the benchmark on avg RMSFE and MAFE", ok, true,
               ok ? "benchmark rmsfe=" + fmt(r.avg_rmsfe_by_model(bench)) + ", best=" +
                        r.best_network
                  : "not better:" + laggards);
    }

    // 3: MCS membership
    {
        auto contains = [](const std::vector<std::string>& set, const std::string& id) {
            for (const auto& s : set)
                if (s == id) return true;
            return false;
        };
        const bool sq = contains(r.mcs_squared.superior_set, "B.3.1");
        const bool ab = contains(r.mcs_absolute.superior_set, "B.10.3");
        std::string sets = "squared {";
        for (const auto& s : r.mcs_squared.superior_set) sets += s + " ";
        sets += "} absolute {";
        for (const auto& s : r.mcs_absolute.superior_set) sets += s + " ";
        sets += "}";
        if (real)
            report(3, "MCS contains B.3.1 (squared) and B.10.3 (absolute)", sq && ab, true,
                   sets);
        else
            report(3, "MCS membership of the published superior models", sq && ab, false,
                   sets + " [published sets are Dow-specific]");
    }

    // 4: DM spot values (Dow) and sign agreement everywhere
    {
        bool signs = true;
        std::string wrong;
        for (const auto& row : r.dm_vs_best)
            if (!(row.squared.stat > 0.0)) {
                signs = false;
                wrong += " " + row.ticker;
            }
        report(4, "DM sign agreement: best network beats benchmark for every stock", signs,
               true, signs ? "all " + std::to_string(r.dm_vs_best.size()) + " stocks positive"
                           : "nonpositive:" + wrong);

        if (real) {
            double aapl = NAN, vz = NAN;
            for (const auto& row : r.dm_vs_best) {
                if (row.ticker == "AAPL") aapl = row.squared.stat;
                if (row.ticker == "VZ") vz = row.squared.stat;
            }
            const bool ok = std::isfinite(aapl) && std::isfinite(vz) &&
                            std::abs(aapl - 5.47) <= 1.0 && std::abs(vz - 0.61) <= 1.0;
            report(4, "DM spot values (AAPL 5.47 +/- 1.0, VZ 0.61 +/- 1.0)", ok, true,
                   "AAPL=" + fmt(aapl) + " VZ=" + fmt(vz) + " vs " + r.best_network);
        } else {
            unrunnable(4, "DM spot values for AAPL and VZ");
        }
    }

    // 8: ensemble ordering (and levels on real data)
    {
        const double simple = r.ens_rmsfe.col(0).mean();
        const double minvar = r.ens_rmsfe.col(1).mean();
        const double cols = r.ens_rmsfe.col(2).mean();
        const bool ordering = cols <= minvar && minvar <= simple;
        const std::string detail =
            "cols=" + fmt(cols) + " <= minvar=" + fmt(minvar) + " <= simple=" + fmt(simple);
        if (real) {
            const bool levels = std::abs(cols - 2.3484) <= 0.10 * 2.3484 &&
                                std::abs(minvar - 2.3616) <= 0.10 * 2.3616 &&
                                std::abs(simple - 2.4475) <= 0.10 * 2.4475;
            report(8, "ensemble ordering and Table-5 levels", ordering && levels, true, detail);
        } else {
            report(8, "ensemble ordering COLS <= minvar <= simple", ordering, false,
                   detail + " [levels are Dow-specific]");
        }
    }
}

ReturnPanel synthetic_reference_panel() {
    // Same shape as the Dow experiment. The spillover graph links stocks
    // with similar temporal dynamics (nearest neighbours in gamma), so
    // similarity-based weight construction has genuine structure to find;
    // levels and strengths are generic, not tuned to any table.
    const int n = 29;
    SplitMix64 rng(20260501);
    Vector gamma(n), phi0(n);
    const double rho = 0.45;
    for (int i = 0; i < n; ++i) {
        gamma(i) = 0.15 + 0.3 * rng.uniform();
        phi0(i) = -8.5 * (1.0 - rho - gamma(i));
    }
    DistanceMatrix d;
    d.d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        d.tickers.push_back("S" + std::to_string(i));
        for (int j = 0; j < i; ++j)
            d.d(i, j) = d.d(j, i) =
                std::abs(gamma(i) - gamma(j)) + 0.01 * rng.uniform();
    }
    const EdgeWeightMatrix w = weights_knn(d, 5);
    return simulate_network(phi0, rho, gamma, w, 3040, 1000, {20260501});
}

}  // namespace

int main(int argc, char** argv) {
    std::string dow_csv;
    std::string layout = "wide", field = "return";
    int threads = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&](const char* name) -> std::string {
            if (i + 1 >= argc) {
                std::cerr << name << " needs a value\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--dow-csv")
            dow_csv = next("--dow-csv");
        else if (arg == "--layout")
            layout = next("--layout");
        else if (arg == "--field")
            field = next("--field");
        else if (arg == "--threads")
            threads = std::stoi(next("--threads"));
        else {
            std::cerr << "usage: acceptance [--dow-csv FILE] [--layout wide|long] "
                         "[--field return|price] [--threads N]\n";
            return 2;
        }
    }

    try {
        criterion5();
        criterion6();
        criterion7();

        PipelineOutcome outcome;
        if (!dow_csv.empty()) {
            std::cout << "running the 13-model backtest on " << dow_csv << std::endl;
            const ReturnPanel panel =
                load_csv(dow_csv, layout == "wide" ? CsvLayout::wide : CsvLayout::long_,
                         field == "price" ? CsvField::price : CsvField::return_);
            outcome = run_pipeline(panel, true, threads);
        } else {
            std::cout << "companion dataset not supplied; running the 13-model backtest on "
                         "the synthetic reference panel (n=29, T=3040, M=2540)"
                      << std::endl;
            outcome = run_pipeline(synthetic_reference_panel(), false, threads);
        }
        criteria_1_to_4_and_8(outcome);
    } catch (const Error& e) {
        std::cerr << "acceptance run aborted: " << e.what() << std::endl;
        return 1;
    }

    int enforced_failures = 0;
    for (const auto& l : results)
        if (!l.pass && l.enforced) ++enforced_failures;
    std::cout << (enforced_failures == 0 ? "ACCEPTANCE OK" : "ACCEPTANCE FAILED") << " ("
              << results.size() << " criteria lines, " << enforced_failures
              << " enforced failures)" << std::endl;
    return enforced_failures == 0 ? 0 : 1;
}

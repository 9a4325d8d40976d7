#include "netarch/evaluate.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "netarch/arch_network.hpp"
#include "netarch/arch_univariate.hpp"
#include "netarch/data.hpp"
#include "netarch/simulate.hpp"

namespace netarch {

std::vector<ModelSpec> all13_models() {
    std::vector<ModelSpec> out;
    out.push_back({"logarch", false, DistanceKind::euclidean, WeightScheme::knn, 0});
    const DistanceKind dists[] = {DistanceKind::euclidean, DistanceKind::correlation,
                                  DistanceKind::logarch_ar};
    for (int m = 1; m <= 3; ++m)
        out.push_back({"A." + std::to_string(m), true, dists[m - 1],
                       WeightScheme::inverse_distance, 0});
    for (int k : {3, 5, 10})
        for (int m = 1; m <= 3; ++m)
            out.push_back({"B." + std::to_string(k) + "." + std::to_string(m), true,
                           dists[m - 1], WeightScheme::knn, k});
    return out;
}

ModelSpec model_from_id(const std::string& id) {
    for (const auto& spec : all13_models())
        if (spec.id == id) return spec;
    throw Error(errc::usage, "unknown model id: " + id);
}

void BacktestConfig::check(int T) const {
    if (window_len < 100) throw Error(errc::usage, "M must be >= 100");
    if (window_len >= T) throw Error(errc::usage, "M must be < T");
    if (models.empty()) throw Error(errc::usage, "empty model list");
}

namespace {

ZeroPolicy make_policy(const BacktestConfig& config) {
    ZeroPolicy p;
    p.mode = config.zero_mode;
    p.floor_c = config.floor_c;
    return p;
}

ReturnPanel window_panel(const ReturnPanel& panel, int start, int len) {
    ReturnPanel w;
    w.tickers = panel.tickers;
    w.dates.assign(panel.dates.begin() + start, panel.dates.begin() + start + len);
    w.returns = panel.returns.middleCols(start, len);
    return w;
}

// ln y^2 of the realized return at a test date, floored with the window's
// per-stock floor so no test-set information enters the transform.
double realized_proxy(double ret, double window_floor) {
    const double y2 = ret * ret;
    return std::log(std::max(y2, window_floor));
}

}  // namespace

EdgeWeightMatrix build_model_w(const ModelSpec& spec, const ReturnPanel& window,
                               const LogVolPanel& volwindow, const BacktestConfig& config) {
    DistanceMatrix d;
    switch (spec.distance) {
        case DistanceKind::euclidean: d = dist_euclidean(window); break;
        case DistanceKind::correlation: d = dist_correlation(window); break;
        case DistanceKind::logarch_ar:
            d = dist_logarch(volwindow, config.ar_max_order, config.ar_criterion);
            break;
    }
    return spec.scheme == WeightScheme::inverse_distance
               ? weights_inverse_distance(d, config.invdist_row_normalize)
               : weights_knn(d, spec.k);
}

ForecastTable run_backtest(const ReturnPanel& panel, const BacktestConfig& config) {
    panel.check();
    config.check(panel.T());
    const int n = panel.n(), M = config.window_len;
    const int steps = panel.T() - M;
    const int n_models = static_cast<int>(config.models.size());

    ForecastTable table;
    table.tickers = panel.tickers;
    table.dates.assign(panel.dates.begin() + M, panel.dates.end());
    table.realized.resize(n, steps);
    for (const auto& spec : config.models) table.model_ids.push_back(spec.id);
    table.forecasts.assign(n_models, Matrix::Zero(n, steps));

    // Edge weights come from the first window unless refitting was requested.
    std::vector<EdgeWeightMatrix> fixed_w(n_models);
    if (!config.refit_w_each_step) {
        const ReturnPanel w0 = window_panel(panel, 0, M);
        const LogVolPanel v0 = log_squared(w0, make_policy(config));
        for (int m = 0; m < n_models; ++m)
            if (config.models[m].network)
                fixed_w[m] = build_model_w(config.models[m], w0, v0, config);
    }

    std::atomic<int> next_step{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const int j = next_step.fetch_add(1);
            if (j >= steps) return;
            try {
                const ReturnPanel win = window_panel(panel, j, M);
                const LogVolPanel vol = log_squared(win, make_policy(config));
                for (int i = 0; i < n; ++i)
                    table.realized(i, j) = realized_proxy(
                        panel.returns(i, M + j), vol.zero_policy.floors.at(panel.tickers[i]));
                const Vector last_obs = vol.values.col(M - 1);

                for (int m = 0; m < n_models; ++m) {
                    const ModelSpec& spec = config.models[m];
                    try {
                        if (!spec.network) {
                            for (int i = 0; i < n; ++i) {
                                const UnivariateFit fit =
                                    fit_logarch(vol.values.row(i).transpose(), 1);
                                table.forecasts[m](i, j) = forecast_one_step(
                                    fit, last_obs.segment(i, 1).eval());
                            }
                        } else {
                            const EdgeWeightMatrix w =
                                config.refit_w_each_step ? build_model_w(spec, win, vol, config)
                                                         : fixed_w[m];
                            NetworkFit fit = fit_network_logarch(vol, w,
                                                                 config.instrument_depth);
                            fit.w_ref = spec.id + (w.normalization ==
                                                           EdgeWeightMatrix::Norm::row_normalized
                                                       ? "|row_normalized"
                                                       : "|raw");
                            table.forecasts[m].col(j) =
                                forecast_network_one_step(fit, w, last_obs);
                        }
                    } catch (const Error& e) {
                        throw Error(e.code(), std::string(e.what()) + " (model " + spec.id +
                                                  ", step " + std::to_string(j) + ")");
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next_step.store(steps);
                return;
            }
        }
    };

    int n_threads = config.threads > 0 ? config.threads
                                       : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, steps));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    table.check();
    return table;
}

namespace {
Vector error_series(const ForecastTable& table, int model, int stock) {
    return (table.forecasts[model].row(stock) - table.realized.row(stock)).transpose();
}
int require_model(const ForecastTable& t, const std::string& id) {
    const int m = t.model_index(id);
    if (m < 0) throw Error(errc::usage, "model not in table: " + id);
    return m;
}
int require_ticker(const ForecastTable& t, const std::string& tk) {
    const int i = t.ticker_index(tk);
    if (i < 0) throw Error(errc::usage, "ticker not in table: " + tk);
    return i;
}
}  // namespace

double rmsfe(const ForecastTable& table, const std::string& model, const std::string& ticker) {
    const Vector e = error_series(table, require_model(table, model), require_ticker(table, ticker));
    return std::sqrt(e.squaredNorm() / e.size());
}

double mafe(const ForecastTable& table, const std::string& model, const std::string& ticker) {
    const Vector e = error_series(table, require_model(table, model), require_ticker(table, ticker));
    return e.cwiseAbs().mean();
}

double avg_rmsfe(const ForecastTable& table, const std::string& model) {
    double s = 0.0;
    for (const auto& tk : table.tickers) s += rmsfe(table, model, tk);
    return s / table.n();
}

double avg_mafe(const ForecastTable& table, const std::string& model) {
    double s = 0.0;
    for (const auto& tk : table.tickers) s += mafe(table, model, tk);
    return s / table.n();
}

Vector loss_series(const ForecastTable& table, int model, int stock, LossKind kind) {
    const Vector e = error_series(table, model, stock);
    return kind == LossKind::squared ? Vector(e.array().square()) : Vector(e.cwiseAbs());
}

Vector avg_loss_series(const ForecastTable& table, int model, LossKind kind) {
    Vector acc = Vector::Zero(table.steps());
    for (int i = 0; i < table.n(); ++i) acc += loss_series(table, model, i, kind);
    return acc / table.n();
}

DMResult dm_test(const Vector& loss_a, const Vector& loss_b, LossKind kind) {
    if (loss_a.size() != loss_b.size())
        throw Error(errc::invalid_value, "loss series lengths differ");
    const int n = static_cast<int>(loss_a.size());
    if (n < 30) throw Error(errc::invalid_value, "need at least 30 observations");

    const Vector d = loss_a - loss_b;
    DMResult out;
    out.loss_kind = kind;
    if ((d.array() == 0.0).all()) {
        out.degenerate = true;
        out.p_value = 1.0;
        return out;
    }

    const double dbar = d.mean();
    const Vector dev = d.array() - dbar;
    const int L = static_cast<int>(std::floor(std::cbrt(double(n))));
    double v = dev.squaredNorm() / n;  // gamma_0
    for (int l = 1; l <= L; ++l) {
        const double gamma_l = dev.tail(n - l).dot(dev.head(n - l)) / n;
        v += 2.0 * (1.0 - double(l) / (L + 1)) * gamma_l;
    }
    v /= n;  // variance of the mean
    if (!(v > 0.0)) throw Error(errc::zero_variance, "HAC variance is not positive");

    out.variance_est = v;
    out.stat = dbar / std::sqrt(v);
    out.p_value = 0.5 * std::erfc(out.stat / std::sqrt(2.0));  // P(Z > stat)
    return out;
}

namespace {

// Moving-block bootstrap index draws, shared by every elimination round.
std::vector<std::vector<int>> bootstrap_indices(int n, int block_len, int B, uint64_t seed) {
    SplitMix64 rng(seed);
    const int b = std::max(1, std::min(block_len, n));
    const int n_blocks = (n + b - 1) / b;
    std::vector<std::vector<int>> out(B, std::vector<int>(n));
    for (int rep = 0; rep < B; ++rep) {
        int pos = 0;
        for (int blk = 0; blk < n_blocks && pos < n; ++blk) {
            const int start = static_cast<int>(rng.next() % uint64_t(n - b + 1));
            for (int t = 0; t < b && pos < n; ++t) out[rep][pos++] = start + t;
        }
    }
    return out;
}

}  // namespace

MCSResult mcs(const std::vector<std::string>& models, const std::vector<Vector>& losses,
              double alpha, const BootstrapSpec& bootstrap) {
    const int m = static_cast<int>(models.size());
    if (m < 2) throw Error(errc::invalid_value, "need at least 2 models");
    if (static_cast<int>(losses.size()) != m)
        throw Error(errc::invalid_value, "model/loss count mismatch");
    const int n = static_cast<int>(losses[0].size());
    for (const auto& l : losses)
        if (l.size() != n) throw Error(errc::invalid_value, "loss series lengths differ");
    if (bootstrap.B < 100) throw Error(errc::invalid_value, "need B >= 100");

    // Mean losses: full sample and per bootstrap replication.
    Vector mean_loss(m);
    for (int i = 0; i < m; ++i) mean_loss(i) = losses[i].mean();
    const auto idx = bootstrap_indices(n, bootstrap.block_len, bootstrap.B, bootstrap.seed);
    Matrix boot_mean(bootstrap.B, m);
    for (int rep = 0; rep < bootstrap.B; ++rep)
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int t : idx[rep]) s += losses[i](t);
            boot_mean(rep, i) = s / n;
        }

    // Pairwise differential variances from the bootstrap.
    Matrix var(m, m);
    var.setZero();
    bool any_positive = false;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) {
            const double dbar = mean_loss(i) - mean_loss(j);
            double s = 0.0;
            for (int rep = 0; rep < bootstrap.B; ++rep) {
                const double z = (boot_mean(rep, i) - boot_mean(rep, j)) - dbar;
                s += z * z;
            }
            var(i, j) = var(j, i) = s / bootstrap.B;
            if (var(i, j) > 0.0) any_positive = true;
        }

    MCSResult out;
    out.alpha = alpha;
    out.entries.resize(m);
    for (int i = 0; i < m; ++i) {
        out.entries[i].model = models[i];
        out.entries[i].mean_loss = mean_loss(i);
    }

    if (!any_positive) {
        // every pairwise differential is constant across bootstrap draws
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < i; ++j)
                if (mean_loss(i) != mean_loss(j))
                    throw Error(errc::bootstrap_degenerate, "constant loss differentials");
        for (auto& e : out.entries) {
            e.p_value = 1.0;
            e.in_superior_set = true;
        }
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = i;
        for (int i = 0; i < m; ++i) out.entries[order[i]].rank = i + 1;
        for (const auto& e : out.entries) out.superior_set.push_back(e.model);
        return out;
    }

    auto t_stat = [&](int i, int j) {
        const double dbar = mean_loss(i) - mean_loss(j);
        if (var(i, j) > 0.0) return dbar / std::sqrt(var(i, j));
        if (dbar == 0.0) return 0.0;
        throw Error(errc::bootstrap_degenerate, "constant nonzero loss differential");
    };

    std::vector<int> active(m);
    for (int i = 0; i < m; ++i) active[i] = i;
    double p_running = 0.0;

    while (active.size() >= 2) {
        // range statistic over the active set
        double t_range = 0.0;
        for (size_t a = 0; a < active.size(); ++a)
            for (size_t b = 0; b < a; ++b)
                t_range = std::max(t_range, std::abs(t_stat(active[a], active[b])));

        int exceed = 0;
        for (int rep = 0; rep < bootstrap.B; ++rep) {
            double t_star = 0.0;
            for (size_t a = 0; a < active.size(); ++a)
                for (size_t b = 0; b < a; ++b) {
                    const int i = active[a], j = active[b];
                    if (var(i, j) <= 0.0) continue;
                    const double z = (boot_mean(rep, i) - boot_mean(rep, j)) -
                                     (mean_loss(i) - mean_loss(j));
                    t_star = std::max(t_star, std::abs(z) / std::sqrt(var(i, j)));
                }
            if (t_star > t_range) ++exceed;
        }
        const double p_round = double(exceed) / bootstrap.B;
        p_running = std::max(p_running, p_round);

        // elimination rule: largest max_l t_il
        int worst = active[0];
        double worst_stat = -std::numeric_limits<double>::infinity();
        for (int i : active) {
            double e_i = -std::numeric_limits<double>::infinity();
            for (int l : active)
                if (l != i) e_i = std::max(e_i, t_stat(i, l));
            if (e_i > worst_stat + 1e-15 ||
                (std::abs(e_i - worst_stat) <= 1e-15 && models[i] < models[worst])) {
                worst_stat = e_i;
                worst = i;
            }
        }
        out.entries[worst].elimination_stat = worst_stat;
        out.entries[worst].p_value = p_running;

        if (active.size() == 2) {
            const int survivor = active[0] == worst ? active[1] : active[0];
            out.entries[survivor].elimination_stat = t_stat(survivor, worst);
            out.entries[survivor].p_value = 1.0;
        }
        active.erase(std::find(active.begin(), active.end(), worst));
    }

    // superior set = models whose MCS p-value is >= alpha; rank by loss
    std::vector<int> members;
    for (int i = 0; i < m; ++i)
        if (out.entries[i].p_value >= alpha) {
            out.entries[i].in_superior_set = true;
            members.push_back(i);
        }
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return mean_loss(a) < mean_loss(b); });
    for (size_t r = 0; r < members.size(); ++r) {
        out.entries[members[r]].rank = static_cast<int>(r + 1);
        out.superior_set.push_back(models[members[r]]);
    }
    return out;
}

}  // namespace netarch

// Command-line front end: ingest -> network -> backtest -> report, plus a
// simulate command for synthetic panels. Exit codes: 0 ok, 2 usage, 3 data
// error, 4 numeric failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>

#include "netarch/arch_network.hpp"
#include "netarch/data.hpp"
#include "netarch/ensemble.hpp"
#include "netarch/evaluate.hpp"
#include "netarch/json_io.hpp"
#include "netarch/network.hpp"
#include "netarch/report.hpp"
#include "netarch/simulate.hpp"

namespace {

using namespace netarch;

int exit_code_for(errc c) {
    switch (c) {
        case errc::usage:
        case errc::bad_k:
            return 2;
        case errc::empty_panel:
        case errc::non_monotone_dates:
        case errc::parse_error:
        case errc::duplicate_key:
        case errc::invalid_value:
        case errc::all_zero_series:
        case errc::degenerate_series:
            return 3;
        default:
            return 4;  // numeric failures
    }
}

ZeroPolicy::Mode parse_zero_policy(const std::string& s, double& floor_c) {
    if (s == "min_nonzero") return ZeroPolicy::Mode::floor_min_nonzero;
    if (s.rfind("const:", 0) == 0) {
        floor_c = std::stod(s.substr(6));
        return ZeroPolicy::Mode::floor_constant;
    }
    throw Error(errc::usage, "zero policy must be min_nonzero or const:<c>");
}

DistanceKind parse_distance(const std::string& s) {
    if (s == "euclidean") return DistanceKind::euclidean;
    if (s == "correlation") return DistanceKind::correlation;
    if (s == "logarch") return DistanceKind::logarch_ar;
    throw Error(errc::usage, "unknown distance: " + s);
}

ReturnPanel load_panel_artifact(const std::string& path) {
    return panel_from_json(read_artifact(read_file(path), "ReturnPanel"));
}

int cmd_ingest(const std::string& csv, const std::string& layout, const std::string& field,
               const std::string& out, const std::string& summary_out) {
    std::vector<std::string> dropped;
    const ReturnPanel panel =
        load_csv(csv, layout == "wide" ? CsvLayout::wide : CsvLayout::long_,
                 field == "price" ? CsvField::price : CsvField::return_, &dropped);
    write_file(out, wrap_artifact("ReturnPanel", to_json(panel)));
    const std::string summary = summary_csv(panel);
    if (!summary_out.empty()) write_file(summary_out, summary);
    std::cout << "panel: n=" << panel.n() << " T=" << panel.T() << " -> " << out << "\n";
    if (!dropped.empty()) {
        std::cout << "dropped (missing values):";
        for (const auto& tk : dropped) std::cout << ' ' << tk;
        std::cout << "\n";
    }
    std::cout << summary;
    return 0;
}

int cmd_network(const std::string& panel_path, const std::string& distance,
                const std::string& weighting, int k, bool raw, int max_order,
                const std::string& criterion, const std::string& out,
                const std::string& graphml_out, const std::string& dist_out) {
    const ReturnPanel panel = load_panel_artifact(panel_path);
    const DistanceKind dk = parse_distance(distance);

    DistanceMatrix d;
    if (dk == DistanceKind::euclidean) {
        d = dist_euclidean(panel);
    } else if (dk == DistanceKind::correlation) {
        d = dist_correlation(panel);
    } else {
        ZeroPolicy policy;
        d = dist_logarch(log_squared(panel, policy), max_order,
                         criterion == "aic" ? InfoCriterion::aic : InfoCriterion::bic);
    }

    EdgeWeightMatrix w;
    std::string model_id;
    const int m = dk == DistanceKind::euclidean ? 1 : dk == DistanceKind::correlation ? 2 : 3;
    if (weighting == "invdist") {
        w = weights_inverse_distance(d, !raw);
        model_id = "A." + std::to_string(m);
    } else if (weighting == "knn") {
        w = weights_knn(d, k);
        model_id = "B." + std::to_string(k) + "." + std::to_string(m);
    } else {
        throw Error(errc::usage, "weighting must be invdist or knn");
    }

    Json payload = to_json(w);
    payload["model_id"] = model_id;
    payload["tickers"] = panel.tickers;
    write_file(out, wrap_artifact("EdgeWeightMatrix", payload));
    if (!graphml_out.empty()) write_file(graphml_out, export_graphml(w, panel.tickers));
    if (!dist_out.empty()) write_file(dist_out, distance_csv(d));
    std::cout << "model " << model_id << ": W " << w.n() << "x" << w.n() << " -> " << out
              << "\n";
    return 0;
}

std::vector<ModelSpec> parse_models(const std::string& arg) {
    if (arg == "all13") return all13_models();
    std::vector<ModelSpec> out;
    std::stringstream ss(arg);
    std::string id;
    while (std::getline(ss, id, ','))
        if (!id.empty()) out.push_back(model_from_id(id));
    if (out.empty()) throw Error(errc::usage, "empty model list");
    return out;
}

int cmd_backtest(const std::string& panel_path, const std::string& models, int M, bool refit_w,
                 int depth, const std::string& zero_policy, int threads,
                 const std::string& out_csv, const std::string& out_json) {
    const std::string panel_text = read_file(panel_path);
    const ReturnPanel panel = panel_from_json(read_artifact(panel_text, "ReturnPanel"));
    BacktestConfig config;
    config.window_len = M;
    config.models = parse_models(models);
    config.refit_w_each_step = refit_w;
    config.instrument_depth = depth;
    config.zero_mode = parse_zero_policy(zero_policy, config.floor_c);
    config.threads = threads;

    const ForecastTable table = run_backtest(panel, config);
    write_file(out_csv, forecast_table_csv(table));
    if (!out_json.empty()) write_file(out_json, wrap_artifact("ForecastTable", to_json(table)));

    // provenance sidecar: which panel and which first-window weight matrices
    // produced these forecasts
    Json meta;
    meta["panel_hash"] = content_hash(dump_canonical(to_json(panel)));
    meta["M"] = M;
    meta["refit_w_each_step"] = refit_w;
    meta["instrument_depth"] = depth;
    meta["zero_policy"] = zero_policy;
    {
        ReturnPanel w0;
        w0.tickers = panel.tickers;
        w0.dates.assign(panel.dates.begin(), panel.dates.begin() + M);
        w0.returns = panel.returns.leftCols(M);
        ZeroPolicy policy;
        policy.mode = config.zero_mode;
        policy.floor_c = config.floor_c;
        const LogVolPanel v0 = log_squared(w0, policy);
        Json w_hashes = Json::object();
        for (const auto& spec : config.models)
            if (spec.network) {
                const EdgeWeightMatrix w = build_model_w(spec, w0, v0, config);
                w_hashes[spec.id] = content_hash(dump_canonical(to_json(w)));
            }
        meta["w_hashes"] = std::move(w_hashes);
    }
    write_file(out_csv + ".meta.json", meta.dump(2));

    std::cout << "backtest: " << table.n_models() << " models x " << table.n() << " stocks x "
              << table.steps() << " steps -> " << out_csv << "\n";
    return 0;
}

int cmd_report(const std::string& forecasts_path, double alpha, int B, int block_len,
               uint64_t seed, int burn_in, const std::string& out_dir,
               const std::string& zero_note) {
    const ForecastTable table = forecast_table_from_csv(read_file(forecasts_path));
    BootstrapSpec spec{B, block_len, seed};
    EvalReport report = build_report(table, "logarch", alpha, spec, burn_in);
    report.zero_policy_note = zero_note;
    try {
        report.provenance = read_file(forecasts_path + ".meta.json");
    } catch (const Error&) {
        // no sidecar next to the forecasts; the report simply omits provenance
    }

    write_file(out_dir + "/report.json", report_json(report));
    write_file(out_dir + "/losses.csv", losses_csv(report));
    write_file(out_dir + "/dm_best.csv", dm_csv(report, true));
    write_file(out_dir + "/dm_worst.csv", dm_csv(report, false));
    write_file(out_dir + "/mcs.csv", mcs_csv(report));
    write_file(out_dir + "/ensemble.csv", ensemble_csv(report));

    std::cout << "report -> " << out_dir << "\n";
    std::cout << "benchmark avg RMSFE " << report.avg_rmsfe_by_model(0) << ", best network "
              << report.best_network << "\n";
    return 0;
}

int cmd_simulate(const std::string& mode, int n, int T, double rho, double gamma_lo,
                 double gamma_hi, double mean_logvar, int k, uint64_t seed,
                 const std::string& out) {
    if (T < 2) throw Error(errc::usage, "T must be >= 2");
    if (mode == "univariate") {
        const Vector gamma = Vector::Constant(1, (gamma_lo + gamma_hi) / 2);
        const double phi0 = mean_logvar * (1.0 - gamma(0));
        const Vector series = simulate_univariate(phi0, gamma, T, 1000, {seed});
        std::ostringstream os;
        os << "date,S00\n";
        const auto dates = synthetic_dates(T);
        char buf[32];
        for (int t = 0; t < T; ++t) {
            std::snprintf(buf, sizeof buf, "%.17g", series(t));
            os << dates[t] << ',' << buf << '\n';
        }
        write_file(out, os.str());
        std::cout << "simulated univariate T=" << T << " -> " << out << "\n";
        return 0;
    }
    if (mode != "network") throw Error(errc::usage, "mode must be univariate or network");
    if (n < 2) throw Error(errc::usage, "n must be >= 2");

    // W: k-nearest neighbours on a seeded random symmetric dissimilarity
    SplitMix64 rng(seed ^ 0xD1B54A32D192ED03ull);
    DistanceMatrix d;
    d.tickers.resize(n);
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "S%02d", i);
        d.tickers[i] = buf;
    }
    d.d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) d.d(i, j) = d.d(j, i) = 0.1 + rng.uniform();
    const EdgeWeightMatrix w = weights_knn(d, std::min(k, n - 1));

    Vector gamma(n), phi0(n);
    for (int i = 0; i < n; ++i) {
        gamma(i) = gamma_lo + (gamma_hi - gamma_lo) * rng.uniform();
        phi0(i) = mean_logvar * (1.0 - rho - gamma(i));
    }
    const ReturnPanel panel = simulate_network(phi0, rho, gamma, w, T, 1000, {seed});

    std::ostringstream os;
    os << "date";
    for (const auto& tk : panel.tickers) os << ',' << tk;
    os << '\n';
    char buf[32];
    for (int t = 0; t < T; ++t) {
        os << panel.dates[t];
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", panel.returns(i, t));
            os << ',' << buf;
        }
        os << '\n';
    }
    write_file(out, os.str());
    std::cout << "simulated network panel n=" << n << " T=" << T << " rho=" << rho << " -> "
              << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic network log-ARCH volatility forecasting"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "read a CSV into a panel artifact");
    std::string csv, layout = "wide", field = "return", panel_out = "panel.json", summary_out;
    ingest->add_option("--csv", csv, "input CSV")->required();
    ingest->add_option("--layout", layout)->check(CLI::IsMember({"wide", "long"}));
    ingest->add_option("--field", field)->check(CLI::IsMember({"price", "return"}));
    ingest->add_option("--out", panel_out);
    ingest->add_option("--summary", summary_out);

    // network
    auto* network = app.add_subcommand("network", "build an edge weight matrix");
    std::string net_panel, distance = "euclidean", weighting = "knn", w_out = "w.json";
    std::string graphml_out, dist_out, criterion = "bic";
    int k = 3, max_order = 5;
    bool raw = false;
    network->add_option("--panel", net_panel)->required();
    network->add_option("--distance", distance)
        ->check(CLI::IsMember({"euclidean", "correlation", "logarch"}));
    network->add_option("--weighting", weighting)->check(CLI::IsMember({"invdist", "knn"}));
    network->add_option("--k", k);
    network->add_flag("--raw", raw, "skip row normalization of inverse-distance weights");
    network->add_option("--max-order", max_order);
    network->add_option("--criterion", criterion)->check(CLI::IsMember({"aic", "bic"}));
    network->add_option("--out", w_out);
    network->add_option("--graphml", graphml_out);
    network->add_option("--dist-csv", dist_out);

    // backtest
    auto* backtest = app.add_subcommand("backtest", "rolling out-of-sample forecasts");
    std::string bt_panel, models = "all13", fc_out = "forecasts.csv", fc_json;
    std::string zero_policy = "min_nonzero";
    int M = 2540, depth = 2, threads = 0;
    bool refit_w = false;
    backtest->add_option("--panel", bt_panel)->required();
    backtest->add_option("--models", models, "all13 or comma-separated ids");
    backtest->add_option("--M", M, "estimation window length");
    backtest->add_flag("--refit-w", refit_w, "rebuild W on every window");
    backtest->add_option("--depth", depth, "instrument depth");
    backtest->add_option("--zero-policy", zero_policy, "min_nonzero or const:<c>");
    backtest->add_option("--threads", threads);
    backtest->add_option("--out", fc_out);
    backtest->add_option("--json", fc_json);

    // report
    auto* report = app.add_subcommand("report", "losses, DM tests, MCS, ensembles");
    std::string forecasts_path, out_dir = ".";
    double alpha = 0.10;
    int B = 5000, block_len = 10, burn_in = 60;
    uint64_t seed = 42;
    report->add_option("--forecasts", forecasts_path)->required();
    report->add_option("--alpha", alpha);
    report->add_option("--B", B);
    report->add_option("--block-len", block_len);
    report->add_option("--seed", seed);
    report->add_option("--ensemble-burn-in", burn_in);
    report->add_option("--out-dir", out_dir);
    std::string zero_note = "floor_min_nonzero (window-estimated)";
    report->add_option("--zero-note", zero_note, "zero policy recorded in the report");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic return panel");
    std::string sim_mode = "network", sim_out = "sim.csv";
    int sim_n = 10, sim_T = 2000, sim_k = 3;
    double rho = 0.4, gamma_lo = 0.2, gamma_hi = 0.6, mean_logvar = -8.0;
    uint64_t sim_seed = 1;
    simulate->add_option("--mode", sim_mode)->check(CLI::IsMember({"univariate", "network"}));
    simulate->add_option("--n", sim_n);
    simulate->add_option("--T", sim_T);
    simulate->add_option("--rho", rho);
    simulate->add_option("--gamma-lo", gamma_lo);
    simulate->add_option("--gamma-hi", gamma_hi);
    simulate->add_option("--mean-logvar", mean_logvar);
    simulate->add_option("--k", sim_k);
    simulate->add_option("--seed", sim_seed);
    simulate->add_option("--out", sim_out);

    try {
        app.parse(argc, argv);
        if (*ingest) return cmd_ingest(csv, layout, field, panel_out, summary_out);
        if (*network)
            return cmd_network(net_panel, distance, weighting, k, raw, max_order, criterion,
                               w_out, graphml_out, dist_out);
        if (*backtest)
            return cmd_backtest(bt_panel, models, M, refit_w, depth, zero_policy, threads,
                                fc_out, fc_json);
        if (*report)
            return cmd_report(forecasts_path, alpha, B, block_len, seed, burn_in, out_dir,
                              zero_note);
        if (*simulate)
            return cmd_simulate(sim_mode, sim_n, sim_T, rho, gamma_lo, gamma_hi, mean_logvar,
                                sim_k, sim_seed, sim_out);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const netarch::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}

#include "netarch/report.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "netarch/json_io.hpp"

namespace netarch {

EvalReport build_report(const ForecastTable& table, const std::string& benchmark_id,
                        double alpha, const BootstrapSpec& bootstrap, int ensemble_burn_in) {
    table.check();
    if (table.steps() < 30) throw Error(errc::usage, "too few out-of-sample dates to evaluate");
    EvalReport r;
    r.model_ids = table.model_ids;
    r.tickers = table.tickers;
    r.benchmark_id = benchmark_id;
    r.alpha = alpha;
    r.bootstrap = bootstrap;
    r.ensemble_burn_in = ensemble_burn_in;

    const int nm = table.n_models(), n = table.n();
    r.rmsfe_by_stock.resize(nm, n);
    r.mafe_by_stock.resize(nm, n);
    for (int m = 0; m < nm; ++m)
        for (int i = 0; i < n; ++i) {
            const Vector se = loss_series(table, m, i, LossKind::squared);
            r.rmsfe_by_stock(m, i) = std::sqrt(se.mean());
            r.mafe_by_stock(m, i) = loss_series(table, m, i, LossKind::absolute).mean();
        }
    r.avg_rmsfe_by_model = r.rmsfe_by_stock.rowwise().mean();
    r.avg_mafe_by_model = r.mafe_by_stock.rowwise().mean();

    const int bench = table.model_index(benchmark_id);
    if (bench < 0) throw Error(errc::usage, "benchmark not in table: " + benchmark_id);

    // best / worst network model by average RMSFE
    int best = -1, worst = -1;
    for (int m = 0; m < nm; ++m) {
        if (m == bench) continue;
        if (best < 0 || r.avg_rmsfe_by_model(m) < r.avg_rmsfe_by_model(best)) best = m;
        if (worst < 0 || r.avg_rmsfe_by_model(m) > r.avg_rmsfe_by_model(worst)) worst = m;
    }

    auto dm_rows = [&](int other) {
        std::vector<DMRow> rows;
        if (other < 0) return rows;
        for (int i = 0; i < n; ++i) {
            DMRow row;
            row.ticker = table.tickers[i];
            row.squared = dm_test(loss_series(table, bench, i, LossKind::squared),
                                  loss_series(table, other, i, LossKind::squared),
                                  LossKind::squared);
            row.absolute = dm_test(loss_series(table, bench, i, LossKind::absolute),
                                   loss_series(table, other, i, LossKind::absolute),
                                   LossKind::absolute);
            rows.push_back(row);
        }
        return rows;
    };
    if (best >= 0) {
        r.best_network = table.model_ids[best];
        r.worst_network = table.model_ids[worst];
        r.dm_vs_best = dm_rows(best);
        r.dm_vs_worst = dm_rows(worst);
    }

    if (nm >= 2) {
        std::vector<Vector> sq, ab;
        for (int m = 0; m < nm; ++m) {
            sq.push_back(avg_loss_series(table, m, LossKind::squared));
            ab.push_back(avg_loss_series(table, m, LossKind::absolute));
        }
        r.mcs_squared = mcs(table.model_ids, sq, alpha, bootstrap);
        r.mcs_absolute = mcs(table.model_ids, ab, alpha, bootstrap);
    }

    // forecast combination per stock across all models
    r.ens_rmsfe = Matrix::Zero(n, 3);
    r.ens_mafe = Matrix::Zero(n, 3);
    r.has_ensemble = nm >= 2;
    if (r.has_ensemble) {
        for (int i = 0; i < n; ++i) {
            Matrix fc(table.steps(), nm);
            for (int m = 0; m < nm; ++m) fc.col(m) = table.forecasts[m].row(i).transpose();
            const Vector y = table.realized.row(i).transpose();
            const EnsembleRun run = run_ensembles(fc, y, table.model_ids, ensemble_burn_in);
            const Vector* combos[3] = {&run.combined_simple, &run.combined_minvar,
                                       &run.combined_cols};
            for (int c = 0; c < 3; ++c) {
                const Vector e = *combos[c] - y;
                r.ens_rmsfe(i, c) = std::sqrt(e.squaredNorm() / e.size());
                r.ens_mafe(i, c) = e.cwiseAbs().mean();
            }
            if (i == n - 1) {
                r.last_minvar_weights = run.final_minvar;
                r.last_cols_weights = run.final_cols;
            }
        }
    }
    return r;
}

std::string forecast_table_csv(const ForecastTable& table) {
    std::ostringstream os;
    os << "model_id,ticker,date,forecast,realized\n";
    char buf[64];
    for (int m = 0; m < table.n_models(); ++m)
        for (int i = 0; i < table.n(); ++i)
            for (int t = 0; t < table.steps(); ++t) {
                os << table.model_ids[m] << ',' << table.tickers[i] << ',' << table.dates[t]
                   << ',';
                std::snprintf(buf, sizeof buf, "%.17g,%.17g", table.forecasts[m](i, t),
                              table.realized(i, t));
                os << buf << '\n';
            }
    return os.str();
}

ForecastTable forecast_table_from_csv(const std::string& body) {
    std::stringstream in(body);
    std::string line;
    if (!std::getline(in, line) ||
        (line != "model_id,ticker,date,forecast,realized" &&
         line != "model_id,ticker,date,forecast,realized\r"))
        throw Error(errc::parse_error, "bad forecast table header");

    struct Cell {
        double fc, rz;
    };
    std::map<std::string, std::map<std::string, std::map<std::string, Cell>>> grid;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::stringstream ss(line);
        std::string model, ticker, date, fc, rz;
        if (!std::getline(ss, model, ',') || !std::getline(ss, ticker, ',') ||
            !std::getline(ss, date, ',') || !std::getline(ss, fc, ',') ||
            !std::getline(ss, rz))
            throw Error(errc::parse_error, "row " + std::to_string(row) + ": expected 5 cells");
        try {
            grid[model][ticker][date] = {std::stod(fc), std::stod(rz)};
        } catch (const std::exception&) {
            throw Error(errc::parse_error, "row " + std::to_string(row) + ": bad number");
        }
    }
    if (grid.empty()) throw Error(errc::usage, "empty forecast table");

    ForecastTable t;
    const auto& first = grid.begin()->second;
    if (first.empty()) throw Error(errc::parse_error, "no tickers");
    for (const auto& [tk, by_date] : first) t.tickers.push_back(tk);
    for (const auto& [date, cell] : first.begin()->second) t.dates.push_back(date);
    const int n = t.n(), steps = t.steps();
    t.realized.resize(n, steps);
    bool first_model = true;
    for (const auto& [model, by_ticker] : grid) {
        t.model_ids.push_back(model);
        Matrix fc(n, steps);
        for (int i = 0; i < n; ++i) {
            auto it = by_ticker.find(t.tickers[i]);
            if (it == by_ticker.end() || static_cast<int>(it->second.size()) != steps)
                throw Error(errc::parse_error, "ragged forecast table at " + t.tickers[i]);
            int s = 0;
            for (const auto& [date, cell] : it->second) {
                if (date != t.dates[s])
                    throw Error(errc::parse_error, "date mismatch across models");
                fc(i, s) = cell.fc;
                if (first_model)
                    t.realized(i, s) = cell.rz;
                else if (t.realized(i, s) != cell.rz)
                    throw Error(errc::parse_error,
                                "realized proxy differs across models at " + t.tickers[i] +
                                    " " + date);
                ++s;
            }
        }
        t.forecasts.push_back(std::move(fc));
        first_model = false;
    }
    t.check();
    return t;
}

namespace {
const char* method_name(int c) { return c == 0 ? "simple" : c == 1 ? "minvar" : "cols"; }

Json mcs_to_json(const MCSResult& m) {
    Json entries = Json::array();
    for (const auto& e : m.entries)
        entries.push_back(Json{{"model", e.model},
                               {"rank", e.rank},
                               {"elimination_stat", e.elimination_stat},
                               {"p_value", e.p_value},
                               {"mean_loss", e.mean_loss},
                               {"in_superior_set", e.in_superior_set}});
    return Json{{"alpha", m.alpha}, {"entries", entries}, {"superior_set", m.superior_set}};
}

Json weights_to_json(const EnsembleWeights& w) {
    Json jw = Json::object();
    for (size_t i = 0; i < w.models.size(); ++i)
        if (static_cast<Eigen::Index>(i) < w.weights.size()) jw[w.models[i]] = w.weights(i);
    return Json{{"method", method_name(w.method == EnsembleMethod::simple  ? 0
                                       : w.method == EnsembleMethod::minvar ? 1
                                                                            : 2)},
                {"weights", jw},
                {"window_used", w.window_used}};
}
}  // namespace

std::string report_json(const EvalReport& r) {
    Json j;
    j["models"] = r.model_ids;
    j["tickers"] = r.tickers;
    Json losses = Json::object();
    for (size_t m = 0; m < r.model_ids.size(); ++m) {
        Json per = Json::object();
        for (size_t i = 0; i < r.tickers.size(); ++i)
            per[r.tickers[i]] = Json{{"rmsfe", r.rmsfe_by_stock(m, i)},
                                     {"mafe", r.mafe_by_stock(m, i)}};
        losses[r.model_ids[m]] = Json{{"avg_rmsfe", r.avg_rmsfe_by_model(m)},
                                      {"avg_mafe", r.avg_mafe_by_model(m)},
                                      {"per_stock", per}};
    }
    j["losses"] = losses;
    j["benchmark"] = r.benchmark_id;
    j["best_network"] = r.best_network;
    j["worst_network"] = r.worst_network;

    auto dm_json = [](const std::vector<DMRow>& rows) {
        Json arr = Json::array();
        for (const auto& d : rows)
            arr.push_back(Json{{"ticker", d.ticker},
                               {"dm_squared", d.squared.stat},
                               {"p_squared", d.squared.p_value},
                               {"dm_absolute", d.absolute.stat},
                               {"p_absolute", d.absolute.p_value}});
        return arr;
    };
    j["dm_vs_best"] = dm_json(r.dm_vs_best);
    j["dm_vs_worst"] = dm_json(r.dm_vs_worst);
    j["mcs_squared"] = mcs_to_json(r.mcs_squared);
    j["mcs_absolute"] = mcs_to_json(r.mcs_absolute);

    Json ens = Json::object();
    for (int c = 0; c < 3; ++c) {
        Json per = Json::object();
        for (size_t i = 0; i < r.tickers.size(); ++i)
            per[r.tickers[i]] = Json{{"rmsfe", r.ens_rmsfe(i, c)}, {"mafe", r.ens_mafe(i, c)}};
        ens[method_name(c)] = Json{{"avg_rmsfe", r.ens_rmsfe.col(c).mean()},
                                   {"avg_mafe", r.ens_mafe.col(c).mean()},
                                   {"per_stock", per}};
    }
    ens["burn_in"] = r.ensemble_burn_in;
    ens["last_minvar_weights"] = weights_to_json(r.last_minvar_weights);
    ens["last_cols_weights"] = weights_to_json(r.last_cols_weights);
    j["ensemble"] = ens;

    j["settings"] = Json{{"alpha", r.alpha},
                         {"bootstrap_B", r.bootstrap.B},
                         {"bootstrap_block_len", r.bootstrap.block_len},
                         {"seed", r.bootstrap.seed},
                         {"zero_policy", r.zero_policy_note}};
    if (!r.provenance.empty()) {
        try {
            j["provenance"] = Json::parse(r.provenance);
        } catch (const std::exception&) {
            j["provenance"] = r.provenance;
        }
    }
    return j.dump(2);
}

std::string losses_csv(const EvalReport& r) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << "metric";
    for (const auto& id : r.model_ids) os << ',' << id;
    os << '\n' << "avg_rmsfe";
    for (Eigen::Index m = 0; m < r.avg_rmsfe_by_model.size(); ++m)
        os << ',' << r.avg_rmsfe_by_model(m);
    os << '\n' << "avg_mafe";
    for (Eigen::Index m = 0; m < r.avg_mafe_by_model.size(); ++m)
        os << ',' << r.avg_mafe_by_model(m);
    os << '\n';
    for (size_t i = 0; i < r.tickers.size(); ++i) {
        os << "rmsfe_" << r.tickers[i];
        for (size_t m = 0; m < r.model_ids.size(); ++m) os << ',' << r.rmsfe_by_stock(m, i);
        os << '\n';
    }
    for (size_t i = 0; i < r.tickers.size(); ++i) {
        os << "mafe_" << r.tickers[i];
        for (size_t m = 0; m < r.model_ids.size(); ++m) os << ',' << r.mafe_by_stock(m, i);
        os << '\n';
    }
    return os.str();
}

std::string dm_csv(const EvalReport& r, bool vs_best) {
    const auto& rows = vs_best ? r.dm_vs_best : r.dm_vs_worst;
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << "ticker,dm_squared,p_squared,dm_absolute,p_absolute\n";
    for (const auto& d : rows)
        os << d.ticker << ',' << d.squared.stat << ',' << d.squared.p_value << ','
           << d.absolute.stat << ',' << d.absolute.p_value << '\n';
    return os.str();
}

std::string mcs_csv(const EvalReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << "loss,model,rank,elimination_stat,p_value,mean_loss,in_superior_set\n";
    for (const auto& e : r.mcs_squared.entries)
        os << "squared," << e.model << ',' << e.rank << ',' << e.elimination_stat << ','
           << e.p_value << ',' << e.mean_loss << ',' << (e.in_superior_set ? 1 : 0) << '\n';
    for (const auto& e : r.mcs_absolute.entries)
        os << "absolute," << e.model << ',' << e.rank << ',' << e.elimination_stat << ','
           << e.p_value << ',' << e.mean_loss << ',' << (e.in_superior_set ? 1 : 0) << '\n';
    return os.str();
}

std::string ensemble_csv(const EvalReport& r) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed
       << "ticker,simple_rmsfe,simple_mafe,minvar_rmsfe,minvar_mafe,cols_rmsfe,cols_mafe\n";
    for (size_t i = 0; i < r.tickers.size(); ++i) {
        os << r.tickers[i];
        for (int c = 0; c < 3; ++c) os << ',' << r.ens_rmsfe(i, c) << ',' << r.ens_mafe(i, c);
        os << '\n';
    }
    os << "Average";
    for (int c = 0; c < 3; ++c)
        os << ',' << r.ens_rmsfe.col(c).mean() << ',' << r.ens_mafe.col(c).mean();
    os << '\n';
    return os.str();
}

}  // namespace netarch

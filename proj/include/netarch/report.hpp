#ifndef NETARCH_REPORT_HPP
#define NETARCH_REPORT_HPP

#include "netarch/ensemble.hpp"
#include "netarch/evaluate.hpp"

namespace netarch {

/// Per-stock DM test of the benchmark against one network model.
struct DMRow {
    std::string ticker;
    DMResult squared;
    DMResult absolute;
};

/// Everything the `report` command emits: losses, DM statistics against the
/// best and worst network models, Model Confidence Sets under both losses,
/// and the three forecast-combination schemes.
struct EvalReport {
    std::vector<std::string> model_ids;
    std::vector<std::string> tickers;
    Matrix rmsfe_by_stock;  // models x stocks
    Matrix mafe_by_stock;
    Vector avg_rmsfe_by_model;
    Vector avg_mafe_by_model;

    std::string benchmark_id;
    std::string best_network;   // lowest average RMSFE among network models
    std::string worst_network;  // highest average RMSFE among network models
    std::vector<DMRow> dm_vs_best;
    std::vector<DMRow> dm_vs_worst;

    MCSResult mcs_squared;
    MCSResult mcs_absolute;

    bool has_ensemble = false;  // needs >= 2 models
    Matrix ens_rmsfe;           // stocks x {simple, minvar, cols}
    Matrix ens_mafe;
    EnsembleWeights last_minvar_weights;  // from the last stock/date, illustrative
    EnsembleWeights last_cols_weights;
    int ensemble_burn_in = 60;

    double alpha = 0.1;
    BootstrapSpec bootstrap;
    std::string zero_policy_note;
    std::string provenance;  // JSON text naming the panel/W hashes, if known
};

EvalReport build_report(const ForecastTable& table, const std::string& benchmark_id,
                        double alpha, const BootstrapSpec& bootstrap, int ensemble_burn_in = 60);

/// ForecastTable as CSV, columns exactly: model_id,ticker,date,forecast,realized.
std::string forecast_table_csv(const ForecastTable& table);
ForecastTable forecast_table_from_csv(const std::string& body);

std::string report_json(const EvalReport& r);
std::string losses_csv(const EvalReport& r);    // Table-2 layout
std::string dm_csv(const EvalReport& r, bool vs_best);
std::string mcs_csv(const EvalReport& r);
std::string ensemble_csv(const EvalReport& r);  // Table-5 layout

}  // namespace netarch

#endif

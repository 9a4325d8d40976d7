#ifndef NETARCH_EVALUATE_HPP
#define NETARCH_EVALUATE_HPP

#include <optional>

#include "netarch/core.hpp"
#include "netarch/network.hpp"

namespace netarch {

enum class WeightScheme { inverse_distance, knn };
enum class LossKind { squared, absolute };

/// One entry of the model list: the benchmark or a network configuration.
struct ModelSpec {
    std::string id;  // "logarch", "A.1".."A.3", "B.k.m"
    bool network = false;
    DistanceKind distance = DistanceKind::euclidean;
    WeightScheme scheme = WeightScheme::knn;
    int k = 0;
};

/// The paper's 13 models: the univariate benchmark, inverse-distance A.1-A.3
/// and k-NN B.k.m for k in {3,5,10}, m in {1 euclidean, 2 correlation,
/// 3 log-ARCH}.
std::vector<ModelSpec> all13_models();
ModelSpec model_from_id(const std::string& id);

struct BacktestConfig {
    int window_len = 2540;  // M
    std::vector<ModelSpec> models;
    bool refit_w_each_step = false;
    ZeroPolicy::Mode zero_mode = ZeroPolicy::Mode::floor_min_nonzero;
    double floor_c = 0.0;
    int instrument_depth = 2;
    bool invdist_row_normalize = true;
    int ar_max_order = 5;
    InfoCriterion ar_criterion = InfoCriterion::bic;
    int threads = 0;  // 0 = hardware concurrency

    void check(int T) const;
};

/// Edge weights for one network model from one estimation window.
EdgeWeightMatrix build_model_w(const ModelSpec& spec, const ReturnPanel& window,
                               const LogVolPanel& volwindow, const BacktestConfig& config);

/// Rolling one-step-ahead backtest: at step j every model is fit on
/// observations j+1..j+M and forecasts date j+M+1. W is built on the first
/// window unless refit_w_each_step. Horizon is fixed at 1.
ForecastTable run_backtest(const ReturnPanel& panel, const BacktestConfig& config);

/// Forecast-vs-proxy losses over the out-of-sample dates.
double rmsfe(const ForecastTable& table, const std::string& model, const std::string& ticker);
double mafe(const ForecastTable& table, const std::string& model, const std::string& ticker);
/// Per-stock value averaged over all stocks (the tables' "Average" rows).
double avg_rmsfe(const ForecastTable& table, const std::string& model);
double avg_mafe(const ForecastTable& table, const std::string& model);

/// Loss series g(e_t) for one (model, stock): squared or absolute errors.
Vector loss_series(const ForecastTable& table, int model, int stock, LossKind kind);
/// Cross-stock average loss per date for one model (MCS input).
Vector avg_loss_series(const ForecastTable& table, int model, LossKind kind);

struct DMResult {
    double stat = 0.0;
    double p_value = 1.0;
    LossKind loss_kind = LossKind::squared;
    double variance_est = 0.0;  // HAC variance of the mean differential
    bool degenerate = false;    // d_t identically zero; stat undefined, p = 1
};

/// Diebold-Mariano test on two loss series. d_t = loss_a,t - loss_b,t;
/// variance by Bartlett-kernel HAC with lag floor(n^(1/3)); one-sided
/// p-value P(Z > DM) for the null "model a has better or equal accuracy".
DMResult dm_test(const Vector& loss_a, const Vector& loss_b, LossKind kind);

struct BootstrapSpec {
    int B = 5000;
    int block_len = 10;
    uint64_t seed = 42;
};

struct MCSEntry {
    std::string model;
    int rank = 0;             // by mean loss within the superior set (0 = eliminated)
    double elimination_stat = 0.0;
    double p_value = 1.0;     // MCS p-value
    double mean_loss = 0.0;
    bool in_superior_set = false;
};

struct MCSResult {
    std::vector<MCSEntry> entries;  // in input model order
    std::vector<std::string> superior_set;
    double alpha = 0.1;
};

/// Model Confidence Set (range statistic, moving-block bootstrap). Input:
/// per-model loss series over the same dates.
MCSResult mcs(const std::vector<std::string>& models, const std::vector<Vector>& losses,
              double alpha, const BootstrapSpec& bootstrap);

}  // namespace netarch

#endif

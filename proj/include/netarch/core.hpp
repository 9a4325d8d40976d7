#ifndef NETARCH_CORE_HPP
#define NETARCH_CORE_HPP

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace netarch {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class errc {
    empty_panel,
    non_monotone_dates,
    parse_error,
    duplicate_key,
    invalid_value,
    all_zero_series,
    degenerate_series,
    coincident_series,
    bad_k,
    singular_regression,
    singular_design,
    singular_moment,
    unstable_rho,
    singular_system,
    nonstationary,
    zero_variance,
    bootstrap_degenerate,
    rank_deficient,
    singular_covariance,
    usage,
};

const char* errc_name(errc c);

/// Library error with a machine-readable code; the CLI maps code classes
/// to exit codes (2 usage, 3 data, 4 numeric).
class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

/// n stocks x T days of daily log returns. Dates are opaque ordered labels
/// (ISO-8601 strings compare chronologically); no calendar arithmetic.
struct ReturnPanel {
    std::vector<std::string> tickers;  // n
    std::vector<std::string> dates;    // T, strictly increasing
    Matrix returns;                    // n x T

    int n() const { return static_cast<int>(tickers.size()); }
    int T() const { return static_cast<int>(dates.size()); }

    /// Throws Error on any invariant violation (shape, finiteness, date order).
    void check() const;
};

/// How zero returns were floored before taking ln y^2.
struct ZeroPolicy {
    enum class Mode { floor_min_nonzero, floor_constant };
    Mode mode = Mode::floor_min_nonzero;
    double floor_c = 0.0;  // used iff mode == floor_constant; must be > 0

    // Filled by log_squared: per-ticker floor actually applied and how many
    // entries hit it.
    std::map<std::string, double> floors;
    std::map<std::string, int> applied_counts;
};

/// ln Y^2 panel: values[i][t] = ln(max(returns[i][t]^2, floor_i)).
struct LogVolPanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    Matrix values;  // n x T, all entries finite
    ZeroPolicy zero_policy;

    int n() const { return static_cast<int>(tickers.size()); }
    int T() const { return static_cast<int>(dates.size()); }
    void check() const;
};

/// Nonnegative n x n edge weights with zero diagonal (the W of the network
/// volatility equation).
struct EdgeWeightMatrix {
    enum class Kind { inverse_distance, knn };
    enum class Norm { row_normalized, raw };

    Matrix weights;
    Kind kind = Kind::inverse_distance;
    Norm normalization = Norm::raw;
    int k = 0;  // neighbours per row, iff kind == knn

    int n() const { return static_cast<int>(weights.rows()); }
    void check() const;
    /// Largest |eigenvalue| of weights; 1 for a row-stochastic matrix.
    double spectral_radius() const;
};

/// Per-stock log-ARCH(P) fit via the AR representation of ln Y^2.
struct UnivariateFit {
    double phi0 = 0.0;   // AR intercept
    Vector gamma;        // P ARCH coefficients (= AR slopes)
    double mu_star = 0.0;  // smearing estimate of E ln eps^2
    double omega = 0.0;    // phi0 - mu_star, exactly
    int order = 0;
    Vector residuals;  // length T - P, mean zero
    Vector se;         // diagnostics: OLS s.e. of (phi0, gamma_1..gamma_P)
};

/// Network log-ARCH fit: instantaneous spillover rho plus stock-specific
/// temporal coefficients.
struct NetworkFit {
    double rho = 0.0;
    Vector gamma_diag;  // n temporal coefficients (diagonal of Gamma)
    Vector phi0;        // n intercepts, recovered from residual means
    Vector mu_star;     // n smearing estimates
    Matrix residual_panel;  // n x (T-1), centered residuals u_t
    std::string w_ref;      // identifier of the weight matrix used
    // diagnostics
    double se_rho = 0.0;
    int instrument_depth = 0;
    double gmm_objective = 0.0;

    /// Forecast constant of the joint one-step forecast: the residual-mean
    /// intercept phi0, which bundles omega and the log-squared-error mean, so
    /// the forecast targets the conditional mean of ln y^2. (The univariate
    /// benchmark subtracts the smearing term instead; at rho = 0 the two
    /// forecasts therefore differ by exactly mu_star.)
    Vector forecast_const() const { return phi0; }
};

/// One-step-ahead forecasts and realized proxies for every (model, stock,
/// out-of-sample date). Realized values are shared across models.
struct ForecastTable {
    std::vector<std::string> model_ids;
    std::vector<std::string> tickers;
    std::vector<std::string> dates;  // the T - M out-of-sample dates
    std::vector<Matrix> forecasts;   // per model: n x (T-M) of ln h-hat
    Matrix realized;                 // n x (T-M) of ln y^2

    int n_models() const { return static_cast<int>(model_ids.size()); }
    int n() const { return static_cast<int>(tickers.size()); }
    int steps() const { return static_cast<int>(dates.size()); }
    int model_index(const std::string& id) const;   // -1 if absent
    int ticker_index(const std::string& tk) const;  // -1 if absent
    void check() const;
};

/// Builds a validated panel from a raw ticker -> date -> value map.
/// The common calendar is the union of all observed dates; any stock missing
/// a date on that calendar is dropped and reported in dropped.
ReturnPanel validate_panel(const std::map<std::string, std::map<std::string, double>>& raw,
                           std::vector<std::string>* dropped = nullptr);

/// FNV-1a 64-bit over bytes; used to content-address artifacts.
std::string content_hash(const std::string& bytes);

}  // namespace netarch

#endif

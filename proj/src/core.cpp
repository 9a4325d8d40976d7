#include "netarch/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

namespace netarch {

const char* errc_name(errc c) {
    switch (c) {
        case errc::empty_panel: return "EmptyPanel";
        case errc::non_monotone_dates: return "NonMonotoneDates";
        case errc::parse_error: return "ParseError";
        case errc::duplicate_key: return "DuplicateKey";
        case errc::invalid_value: return "InvalidValue";
        case errc::all_zero_series: return "AllZeroSeries";
        case errc::degenerate_series: return "DegenerateSeries";
        case errc::coincident_series: return "CoincidentSeries";
        case errc::bad_k: return "BadK";
        case errc::singular_regression: return "SingularRegression";
        case errc::singular_design: return "SingularDesign";
        case errc::singular_moment: return "SingularMoment";
        case errc::unstable_rho: return "UnstableRho";
        case errc::singular_system: return "SingularSystem";
        case errc::nonstationary: return "Nonstationary";
        case errc::zero_variance: return "ZeroVariance";
        case errc::bootstrap_degenerate: return "BootstrapDegenerate";
        case errc::rank_deficient: return "RankDeficient";
        case errc::singular_covariance: return "SingularCovariance";
        case errc::usage: return "Usage";
    }
    return "Error";
}

void ReturnPanel::check() const {
    if (tickers.size() < 2) throw Error(errc::empty_panel, "need at least 2 stocks");
    if (dates.size() < 2) throw Error(errc::invalid_value, "need T >= 2");
    if (returns.rows() != n() || returns.cols() != T())
        throw Error(errc::invalid_value, "returns shape does not match tickers/dates");
    for (size_t t = 1; t < dates.size(); ++t)
        if (!(dates[t - 1] < dates[t]))
            throw Error(errc::non_monotone_dates,
                        "dates not strictly increasing at " + dates[t]);
    if (!returns.allFinite()) throw Error(errc::invalid_value, "non-finite return");
}

void LogVolPanel::check() const {
    if (values.rows() != n() || values.cols() != T())
        throw Error(errc::invalid_value, "values shape does not match tickers/dates");
    if (!values.allFinite())
        throw Error(errc::invalid_value, "non-finite log-volatility entry");
}

void EdgeWeightMatrix::check() const {
    const int m = n();
    if (weights.cols() != m) throw Error(errc::invalid_value, "W must be square");
    if (!weights.allFinite()) throw Error(errc::invalid_value, "non-finite weight");
    if ((weights.array() < 0.0).any()) throw Error(errc::invalid_value, "negative weight");
    for (int i = 0; i < m; ++i)
        if (weights(i, i) != 0.0)
            throw Error(errc::invalid_value, "nonzero diagonal (self-loop)");
    if (kind == Kind::knn) {
        if (k < 1 || k > m - 1) throw Error(errc::bad_k, "k out of range");
        for (int i = 0; i < m; ++i) {
            int nonzero = 0;
            for (int j = 0; j < m; ++j) {
                if (weights(i, j) == 0.0) continue;
                ++nonzero;
                if (std::abs(weights(i, j) - 1.0 / k) > 1e-15)
                    throw Error(errc::invalid_value, "knn weight != 1/k");
            }
            if (nonzero != k) throw Error(errc::invalid_value, "knn row without k neighbours");
        }
    }
    if (normalization == Norm::row_normalized) {
        for (int i = 0; i < m; ++i) {
            const double s = weights.row(i).sum();
            if (s != 0.0 && std::abs(s - 1.0) > 1e-10)
                throw Error(errc::invalid_value, "row sum != 1 on row-normalized W");
        }
    }
}

double EdgeWeightMatrix::spectral_radius() const {
    if (weights.rows() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(weights, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

int ForecastTable::model_index(const std::string& id) const {
    auto it = std::find(model_ids.begin(), model_ids.end(), id);
    return it == model_ids.end() ? -1 : static_cast<int>(it - model_ids.begin());
}

int ForecastTable::ticker_index(const std::string& tk) const {
    auto it = std::find(tickers.begin(), tickers.end(), tk);
    return it == tickers.end() ? -1 : static_cast<int>(it - tickers.begin());
}

void ForecastTable::check() const {
    if (forecasts.size() != model_ids.size())
        throw Error(errc::invalid_value, "forecast matrices do not match model ids");
    for (const auto& f : forecasts)
        if (f.rows() != n() || f.cols() != steps())
            throw Error(errc::invalid_value, "forecast matrix shape mismatch");
    if (realized.rows() != n() || realized.cols() != steps())
        throw Error(errc::invalid_value, "realized matrix shape mismatch");
}

ReturnPanel validate_panel(const std::map<std::string, std::map<std::string, double>>& raw,
                           std::vector<std::string>* dropped) {
    if (raw.size() < 2) throw Error(errc::empty_panel, "need at least 2 tickers");

    // Common calendar: union of all observed dates.
    std::set<std::string> calendar;
    for (const auto& [tk, series] : raw)
        for (const auto& [date, v] : series) calendar.insert(date);
    if (calendar.size() < 3)
        throw Error(errc::non_monotone_dates, "fewer than 3 distinct dates");

    std::vector<std::string> keep, drop;
    for (const auto& [tk, series] : raw) {
        bool complete = true;
        for (const auto& date : calendar) {
            auto it = series.find(date);
            if (it == series.end() || !std::isfinite(it->second)) {
                complete = false;
                break;
            }
        }
        (complete ? keep : drop).push_back(tk);
    }
    if (dropped) *dropped = drop;
    if (keep.size() < 2)
        throw Error(errc::empty_panel, "fewer than 2 stocks with complete data");

    ReturnPanel panel;
    panel.tickers = keep;
    panel.dates.assign(calendar.begin(), calendar.end());
    panel.returns.resize(static_cast<int>(keep.size()), static_cast<int>(panel.dates.size()));
    for (int i = 0; i < panel.n(); ++i) {
        const auto& series = raw.at(panel.tickers[i]);
        for (int t = 0; t < panel.T(); ++t) panel.returns(i, t) = series.at(panel.dates[t]);
    }
    panel.check();
    return panel;
}

std::string content_hash(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;  // FNV offset basis
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;  // FNV prime
    }
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (4 * i)) & 0xF);
    return os.str();
}

}  // namespace netarch

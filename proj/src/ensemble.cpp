#include "netarch/ensemble.hpp"

#include <cmath>

namespace netarch {

Vector combine_simple(const Matrix& forecasts) {
    if (forecasts.cols() < 2) throw Error(errc::invalid_value, "need at least 2 models");
    return forecasts.rowwise().mean();
}

EnsembleWeights minvar_weights(const Matrix& past_errors, const std::vector<std::string>& models,
                               double shrinkage) {
    const int m = static_cast<int>(past_errors.cols());
    const int s = static_cast<int>(past_errors.rows());
    if (m < 2) throw Error(errc::invalid_value, "need at least 2 models");
    if (s < m) throw Error(errc::invalid_value, "error sample shorter than model count");
    if (shrinkage < 0.0 || shrinkage >= 1.0)
        throw Error(errc::invalid_value, "shrinkage must be in [0, 1)");

    Matrix centered = past_errors.rowwise() - past_errors.colwise().mean();
    Matrix sigma = centered.transpose() * centered / double(s - 1);
    const Vector diag = sigma.diagonal();
    sigma *= (1.0 - shrinkage);
    sigma.diagonal() = diag;
    sigma.diagonal().array() += 1e-8 * sigma.trace() / m;

    Eigen::LDLT<Matrix> ldlt(sigma);
    const Vector ones = Vector::Ones(m);
    const Vector si = ldlt.solve(ones);
    const double denom = ones.dot(si);
    if (ldlt.info() != Eigen::Success || !si.allFinite() || denom == 0.0)
        throw Error(errc::singular_covariance, "error covariance not invertible");

    EnsembleWeights out;
    out.method = EnsembleMethod::minvar;
    out.models = models;
    out.weights = si / denom;
    out.window_used = "expanding, " + std::to_string(s) + " past errors";
    return out;
}

EnsembleWeights cols_weights(const Vector& past_realized, const Matrix& past_forecasts,
                             const std::vector<std::string>& models, double ridge) {
    const int m = static_cast<int>(past_forecasts.cols());
    const int s = static_cast<int>(past_forecasts.rows());
    if (m < 2) throw Error(errc::invalid_value, "need at least 2 models");
    if (s <= m) throw Error(errc::invalid_value, "error sample must exceed model count");
    if (past_realized.size() != s) throw Error(errc::invalid_value, "length mismatch");
    if (ridge < 0.0) throw Error(errc::invalid_value, "ridge must be >= 0");

    // KKT system for min ||y - Fw||^2 s.t. 1'w = 1. The ridge breaks
    // degenerate designs toward equal weights.
    Matrix G = past_forecasts.transpose() * past_forecasts;
    G.diagonal().array() += ridge * std::max(G.trace() / m, 1.0);
    Matrix kkt = Matrix::Zero(m + 1, m + 1);
    kkt.topLeftCorner(m, m) = 2.0 * G;
    kkt.topRightCorner(m, 1).setOnes();
    kkt.bottomLeftCorner(1, m).setOnes();
    Vector rhs(m + 1);
    rhs.head(m) = 2.0 * past_forecasts.transpose() * past_realized;
    rhs(m) = 1.0;

    Eigen::FullPivLU<Matrix> lu(kkt);
    if (!lu.isInvertible())
        throw Error(errc::rank_deficient, "KKT system singular on the constraint subspace");
    const Vector sol = lu.solve(rhs);
    if (!sol.allFinite()) throw Error(errc::rank_deficient, "non-finite COLS solution");

    EnsembleWeights out;
    out.method = EnsembleMethod::cols;
    out.models = models;
    out.weights = sol.head(m);
    out.window_used = "expanding, " + std::to_string(s) + " past dates";
    return out;
}

Vector combine_with_weights(const Matrix& forecasts, const EnsembleWeights& w) {
    if (forecasts.cols() != w.weights.size())
        throw Error(errc::invalid_value, "weight/model count mismatch");
    return forecasts * w.weights;
}

EnsembleRun run_ensembles(const Matrix& forecasts, const Vector& realized,
                          const std::vector<std::string>& models, int burn_in) {
    const int steps = static_cast<int>(forecasts.rows());
    const int m = static_cast<int>(forecasts.cols());
    if (realized.size() != steps) throw Error(errc::invalid_value, "length mismatch");
    if (m < 2) throw Error(errc::invalid_value, "need at least 2 models");

    EnsembleRun run;
    run.combined_simple = combine_simple(forecasts);
    run.combined_minvar = run.combined_simple;
    run.combined_cols = run.combined_simple;

    const Matrix errors = forecasts.colwise() - realized;
    for (int t = std::max(burn_in, m + 1); t < steps; ++t) {
        const auto past_err = errors.topRows(t);
        const auto past_fc = forecasts.topRows(t);
        const auto past_y = realized.head(t);
        run.final_minvar = minvar_weights(past_err, models);
        run.combined_minvar(t) = forecasts.row(t) * run.final_minvar.weights;
        run.final_cols = cols_weights(past_y, past_fc, models);
        run.combined_cols(t) = forecasts.row(t) * run.final_cols.weights;
    }
    return run;
}

}  // namespace netarch

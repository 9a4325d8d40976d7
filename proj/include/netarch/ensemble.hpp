#ifndef NETARCH_ENSEMBLE_HPP
#define NETARCH_ENSEMBLE_HPP

#include "netarch/core.hpp"

namespace netarch {

enum class EnsembleMethod { simple, minvar, cols };

struct EnsembleWeights {
    EnsembleMethod method = EnsembleMethod::simple;
    std::vector<std::string> models;
    Vector weights;  // sums to 1
    std::string window_used;
};

/// Pointwise mean of the model forecasts (columns of F).
Vector combine_simple(const Matrix& forecasts);

/// Minimum-variance weights w = S^{-1} 1 / (1' S^{-1} 1) from the sample
/// covariance of past forecast errors. Model errors share most of their
/// noise, so the raw covariance is near-singular; off-diagonals are shrunk
/// toward the diagonal (a diagonal covariance is unaffected) and a tiny
/// ridge floors the eigenvalues.
EnsembleWeights minvar_weights(const Matrix& past_errors, const std::vector<std::string>& models,
                               double shrinkage = 0.05);

/// Constrained OLS: min ||y - F w||^2 subject to 1'w = 1, solved via the KKT
/// system with a small ridge (default 1e-4 tr(F'F)/m) against near-collinear
/// forecast columns. Degenerate designs fall back to equal weights.
EnsembleWeights cols_weights(const Vector& past_realized, const Matrix& past_forecasts,
                             const std::vector<std::string>& models, double ridge = 1e-4);

Vector combine_with_weights(const Matrix& forecasts, const EnsembleWeights& w);

/// Per-stock combined forecast paths over an out-of-sample run. The first
/// burn_in dates use the simple average; afterwards minvar/cols weights are
/// re-estimated each date on the expanding window of past errors.
struct EnsembleRun {
    Vector combined_simple;
    Vector combined_minvar;
    Vector combined_cols;
    EnsembleWeights final_minvar;
    EnsembleWeights final_cols;
};

/// forecasts: steps x m (one column per model); realized: steps.
EnsembleRun run_ensembles(const Matrix& forecasts, const Vector& realized,
                          const std::vector<std::string>& models, int burn_in = 60);

}  // namespace netarch

#endif

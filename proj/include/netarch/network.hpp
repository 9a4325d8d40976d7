#ifndef NETARCH_NETWORK_HPP
#define NETARCH_NETWORK_HPP

#include <string>

#include "netarch/core.hpp"

namespace netarch {

enum class DistanceKind { euclidean, correlation, logarch_ar };
enum class InfoCriterion { aic, bic };

/// Symmetric pairwise dissimilarities between stocks.
struct DistanceMatrix {
    std::vector<std::string> tickers;
    Matrix d;  // n x n, symmetric, zero diagonal, finite, >= 0
    DistanceKind kind = DistanceKind::euclidean;
    std::map<std::string, int> ar_orders;  // selected P per ticker (logarch_ar only)

    int n() const { return static_cast<int>(tickers.size()); }
    void check() const;
};

/// d_ij = sqrt(sum_t (y_t(s_i) - y_t(s_j))^2) on raw returns.
DistanceMatrix dist_euclidean(const ReturnPanel& panel);

/// d_ij = sqrt(2 (1 - rho_ij)) with rho_ij the Pearson correlation of the
/// two return series. Throws DegenerateSeries for a constant stock.
DistanceMatrix dist_correlation(const ReturnPanel& panel);

/// Distance between AR coefficient vectors of the ln Y^2 series. Each
/// stock's order P_i is chosen in {1..max_order} by the criterion; shorter
/// coefficient vectors are zero-padded to max(P_i, P_j).
DistanceMatrix dist_logarch(const LogVolPanel& volpanel, int max_order, InfoCriterion criterion);

/// w_ij = 1/d_ij off-diagonal; rows divided by their sums when normalize.
/// Throws CoincidentSeries when some off-diagonal d_ij is zero.
EdgeWeightMatrix weights_inverse_distance(const DistanceMatrix& d, bool normalize);

/// w_ij = 1/k iff s_j is among the k nearest neighbours of s_i; ties broken
/// by ticker order. Generally asymmetric.
EdgeWeightMatrix weights_knn(const DistanceMatrix& d, int k);

/// Directed weighted GraphML; an edge is present iff its weight is nonzero.
std::string export_graphml(const EdgeWeightMatrix& w, const std::vector<std::string>& tickers);

/// Distance matrix as CSV, header row = tickers.
std::string distance_csv(const DistanceMatrix& d);

}  // namespace netarch

#endif

#include "netarch/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "netarch/arch_univariate.hpp"

namespace netarch {

void DistanceMatrix::check() const {
    if (d.rows() != n() || d.cols() != n())
        throw Error(errc::invalid_value, "distance matrix shape mismatch");
    if (!d.allFinite()) throw Error(errc::invalid_value, "non-finite distance");
    for (int i = 0; i < n(); ++i) {
        if (d(i, i) != 0.0) throw Error(errc::invalid_value, "nonzero diagonal distance");
        for (int j = 0; j < i; ++j) {
            if (d(i, j) < 0.0) throw Error(errc::invalid_value, "negative distance");
            if (d(i, j) != d(j, i)) throw Error(errc::invalid_value, "asymmetric distance");
        }
    }
}

DistanceMatrix dist_euclidean(const ReturnPanel& panel) {
    panel.check();
    DistanceMatrix out;
    out.tickers = panel.tickers;
    out.kind = DistanceKind::euclidean;
    out.d = Matrix::Zero(panel.n(), panel.n());
    for (int i = 0; i < panel.n(); ++i)
        for (int j = 0; j < i; ++j) {
            const double dij = (panel.returns.row(i) - panel.returns.row(j)).norm();
            out.d(i, j) = out.d(j, i) = dij;
        }
    return out;
}

DistanceMatrix dist_correlation(const ReturnPanel& panel) {
    panel.check();
    const int n = panel.n();
    Matrix centered = panel.returns;
    Vector norms(n);
    for (int i = 0; i < n; ++i) {
        centered.row(i).array() -= centered.row(i).mean();
        norms(i) = centered.row(i).norm();
        if (norms(i) == 0.0)
            throw Error(errc::degenerate_series, panel.tickers[i] + " is constant");
    }
    DistanceMatrix out;
    out.tickers = panel.tickers;
    out.kind = DistanceKind::correlation;
    out.d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            double rho = centered.row(i).dot(centered.row(j)) / (norms(i) * norms(j));
            rho = std::clamp(rho, -1.0, 1.0);
            const double dij = std::sqrt(2.0 * (1.0 - rho));
            out.d(i, j) = out.d(j, i) = dij;
        }
    return out;
}

namespace {

// AR(P) with intercept on a series; orders compared on the common sample
// t = max_order..T-1 so the criteria see the same observations, then the
// winner is refit on its full usable sample.
struct ArSelection {
    int order;
    Vector gamma;
};

double information_criterion(const Vector& series, int P, int max_order, InfoCriterion crit) {
    const int T = static_cast<int>(series.size());
    const int n_eff = T - max_order;
    Matrix X(n_eff, P + 1);
    Vector y(n_eff);
    for (int t = max_order; t < T; ++t) {
        const int r = t - max_order;
        X(r, 0) = 1.0;
        for (int p = 1; p <= P; ++p) X(r, p) = series(t - p);
        y(r) = series(t);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    if (qr.rank() < P + 1)
        throw Error(errc::singular_regression, "rank-deficient AR design");
    const Vector beta = qr.solve(y);
    const double ssr = (y - X * beta).squaredNorm();
    const double penalty = crit == InfoCriterion::aic ? 2.0 : std::log(double(n_eff));
    return n_eff * std::log(std::max(ssr, 1e-300) / n_eff) + penalty * (P + 1);
}

ArSelection select_ar(const Vector& series, int max_order, InfoCriterion crit) {
    int best_p = 1;
    double best_ic = std::numeric_limits<double>::infinity();
    for (int P = 1; P <= max_order; ++P) {
        const double ic = information_criterion(series, P, max_order, crit);
        if (ic < best_ic) {
            best_ic = ic;
            best_p = P;
        }
    }
    const UnivariateFit fit = fit_logarch(series, best_p);
    return {best_p, fit.gamma};
}

}  // namespace

DistanceMatrix dist_logarch(const LogVolPanel& volpanel, int max_order, InfoCriterion criterion) {
    volpanel.check();
    if (max_order < 1) throw Error(errc::invalid_value, "max_order must be >= 1");
    if (volpanel.T() - max_order < 10 * max_order)
        throw Error(errc::invalid_value, "series too short for max_order");

    const int n = volpanel.n();
    std::vector<Vector> coeffs(n);
    DistanceMatrix out;
    out.tickers = volpanel.tickers;
    out.kind = DistanceKind::logarch_ar;
    for (int i = 0; i < n; ++i) {
        try {
            ArSelection sel = select_ar(volpanel.values.row(i).transpose(), max_order, criterion);
            coeffs[i] = sel.gamma;
            out.ar_orders[volpanel.tickers[i]] = sel.order;
        } catch (const Error& e) {
            if (e.code() == errc::singular_design)
                throw Error(errc::singular_regression, volpanel.tickers[i] + ": " + e.what());
            throw;
        }
    }
    out.d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const int P = static_cast<int>(std::max(coeffs[i].size(), coeffs[j].size()));
            double s = 0.0;
            for (int p = 0; p < P; ++p) {
                const double gi = p < coeffs[i].size() ? coeffs[i](p) : 0.0;
                const double gj = p < coeffs[j].size() ? coeffs[j](p) : 0.0;
                s += (gi - gj) * (gi - gj);
            }
            out.d(i, j) = out.d(j, i) = std::sqrt(s);
        }
    return out;
}

EdgeWeightMatrix weights_inverse_distance(const DistanceMatrix& d, bool normalize) {
    d.check();
    const int n = d.n();
    EdgeWeightMatrix out;
    out.kind = EdgeWeightMatrix::Kind::inverse_distance;
    out.normalization = normalize ? EdgeWeightMatrix::Norm::row_normalized
                                  : EdgeWeightMatrix::Norm::raw;
    out.weights = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (d.d(i, j) == 0.0)
                throw Error(errc::coincident_series,
                            "zero distance between " + d.tickers[i] + " and " + d.tickers[j]);
            out.weights(i, j) = 1.0 / d.d(i, j);
        }
    if (normalize)
        for (int i = 0; i < n; ++i) {
            const double s = out.weights.row(i).sum();
            if (s > 0.0) out.weights.row(i) /= s;
        }
    out.check();
    return out;
}

EdgeWeightMatrix weights_knn(const DistanceMatrix& d, int k) {
    d.check();
    const int n = d.n();
    if (k < 1 || k > n - 1) throw Error(errc::bad_k, "k must be in [1, n-1]");
    EdgeWeightMatrix out;
    out.kind = EdgeWeightMatrix::Kind::knn;
    out.normalization = EdgeWeightMatrix::Norm::row_normalized;
    out.k = k;
    out.weights = Matrix::Zero(n, n);
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) {
        idx.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) idx.push_back(j);
        // ties broken by ticker order for reproducibility
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return d.d(i, a) < d.d(i, b); });
        for (int m = 0; m < k; ++m) out.weights(i, idx[m]) = 1.0 / k;
    }
    out.check();
    return out;
}

std::string export_graphml(const EdgeWeightMatrix& w, const std::vector<std::string>& tickers) {
    w.check();
    if (static_cast<int>(tickers.size()) != w.n())
        throw Error(errc::invalid_value, "ticker count does not match W");
    std::ostringstream os;
    os.precision(17);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
       << "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
       << "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (const auto& tk : tickers) os << "    <node id=\"" << tk << "\"/>\n";
    for (int i = 0; i < w.n(); ++i)
        for (int j = 0; j < w.n(); ++j)
            if (w.weights(i, j) != 0.0)
                os << "    <edge source=\"" << tickers[i] << "\" target=\"" << tickers[j]
                   << "\"><data key=\"w\">" << w.weights(i, j) << "</data></edge>\n";
    os << "  </graph>\n</graphml>\n";
    return os.str();
}

std::string distance_csv(const DistanceMatrix& d) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < d.n(); ++i) os << (i ? "," : "") << d.tickers[i];
    os << '\n';
    for (int i = 0; i < d.n(); ++i) {
        for (int j = 0; j < d.n(); ++j) os << (j ? "," : "") << d.d(i, j);
        os << '\n';
    }
    return os.str();
}

}  // namespace netarch

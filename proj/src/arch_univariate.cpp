#include "netarch/arch_univariate.hpp"

#include <cmath>

namespace netarch {

UnivariateFit fit_logarch(const Vector& series, int P) {
    const int T = static_cast<int>(series.size());
    if (P < 1) throw Error(errc::invalid_value, "P must be >= 1");
    if (T <= P + 2) throw Error(errc::invalid_value, "series too short for order P");
    if (!series.allFinite()) throw Error(errc::invalid_value, "non-finite observation");

    const int n_eff = T - P;
    Matrix X(n_eff, P + 1);
    Vector y(n_eff);
    for (int t = P; t < T; ++t) {
        const int r = t - P;
        X(r, 0) = 1.0;
        for (int p = 1; p <= P; ++p) X(r, p) = series(t - p);
        y(r) = series(t);
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    if (qr.rank() < P + 1) throw Error(errc::singular_design, "collinear lag regressors");
    const Vector beta = qr.solve(y);
    const Vector resid = y - X * beta;

    UnivariateFit fit;
    fit.order = P;
    fit.phi0 = beta(0);
    fit.gamma = beta.tail(P);
    fit.residuals = resid;
    fit.mu_star = estimate_mu_star(resid);
    fit.omega = fit.phi0 - fit.mu_star;

    const double sigma2 = resid.squaredNorm() / std::max(1, n_eff - P - 1);
    const Matrix xtx_inv = (X.transpose() * X).ldlt().solve(Matrix::Identity(P + 1, P + 1));
    fit.se = (sigma2 * xtx_inv.diagonal().array()).sqrt();
    return fit;
}

double estimate_mu_star(const Vector& residuals) {
    const int T = static_cast<int>(residuals.size());
    if (T == 0) throw Error(errc::invalid_value, "empty residuals");
    const double m = residuals.maxCoeff();
    const double lse = m + std::log((residuals.array() - m).exp().sum() / T);
    if (!std::isfinite(lse)) throw Error(errc::invalid_value, "overflow in smearing estimate");
    return -lse;
}

double forecast_one_step(const UnivariateFit& fit, const Vector& last_obs) {
    if (last_obs.size() < fit.order)
        throw Error(errc::invalid_value, "need P lagged observations");
    double f = fit.omega;
    for (int p = 0; p < fit.order; ++p) f += fit.gamma(p) * last_obs(p);
    return f;
}

}  // namespace netarch

#include "netarch/arch_network.hpp"

#include <cmath>

#include "netarch/arch_univariate.hpp"

namespace netarch {

Matrix helmert_transform(const Matrix& rows) {
    const int T = static_cast<int>(rows.cols());
    if (T < 2) throw Error(errc::invalid_value, "need T >= 2");
    Matrix out(rows.rows(), T - 1);
    for (int i = 0; i < rows.rows(); ++i) {
        double suffix_sum = 0.0;  // sum of x_{t+1..T}, built from the right
        for (int t = T - 2; t >= 0; --t) {
            suffix_sum += rows(i, t + 1);
            const int cnt = T - 1 - t;
            const double c = std::sqrt(double(cnt) / (cnt + 1));
            out(i, t) = c * (rows(i, t) - suffix_sum / cnt);
        }
    }
    return out;
}

// Instrument layout, q = 2n + depth columns:
//   0..n-1     stock-interacted levels Y*_{i,t-1}
//   n..2n-1    stock-interacted constants (lets the optimal weight demean
//              the level instruments without touching future observations)
//   2n..       pooled network lags (W^j Y*_{t-1})_i, j = 1..depth
NetworkGmm::NetworkGmm(const Matrix& logvol, const EdgeWeightMatrix& w, int instrument_depth) {
    w.check();
    n_ = static_cast<int>(logvol.rows());
    const int T = static_cast<int>(logvol.cols());
    depth_ = instrument_depth;
    if (n_ != w.n()) throw Error(errc::invalid_value, "panel and W dimensions disagree");
    if (depth_ < 1) throw Error(errc::invalid_value, "instrument depth must be >= 1");
    if (T < 4) throw Error(errc::invalid_value, "need T >= 4");
    len_ = T - 2;

    const Matrix wy = w.weights * logvol;
    y_fod_ = helmert_transform(logvol.rightCols(T - 1));
    wy_fod_ = helmert_transform(wy.rightCols(T - 1));
    lag_fod_ = helmert_transform(logvol.leftCols(T - 1));

    self_lvl_ = logvol.leftCols(len_);
    net_lvl_.reserve(depth_);
    Matrix power = wy;
    for (int j = 0; j < depth_; ++j) {
        net_lvl_.push_back(power.leftCols(len_));
        if (j + 1 < depth_) power = w.weights * power;
    }
}

Vector NetworkGmm::stacked_moments(const Vector& theta) const {
    const int q = 2 * n_ + depth_;
    Vector g = Vector::Zero(q);
    for (int i = 0; i < n_; ++i) {
        const auto resid = (y_fod_.row(i) - theta(0) * wy_fod_.row(i) -
                            theta(1 + i) * lag_fod_.row(i))
                               .eval();
        g(i) = self_lvl_.row(i).dot(resid);
        g(n_ + i) = resid.sum();
        for (int j = 0; j < depth_; ++j) g(2 * n_ + j) += net_lvl_[j].row(i).dot(resid);
    }
    return g;
}

// G = H'D and b = H'y, assembled stock by stock: the gamma regressor and the
// per-stock instruments are nonzero on a single stock's rows.
void NetworkGmm::assemble(Matrix& G, Vector& b) const {
    const int p = n_ + 1, q = 2 * n_ + depth_;
    G = Matrix::Zero(q, p);
    b = Vector::Zero(q);
    for (int i = 0; i < n_; ++i) {
        G(i, 0) = self_lvl_.row(i).dot(wy_fod_.row(i));
        G(i, 1 + i) = self_lvl_.row(i).dot(lag_fod_.row(i));
        G(n_ + i, 0) = wy_fod_.row(i).sum();
        G(n_ + i, 1 + i) = lag_fod_.row(i).sum();
        b(i) = self_lvl_.row(i).dot(y_fod_.row(i));
        b(n_ + i) = y_fod_.row(i).sum();
        for (int j = 0; j < depth_; ++j) {
            G(2 * n_ + j, 0) += net_lvl_[j].row(i).dot(wy_fod_.row(i));
            G(2 * n_ + j, 1 + i) = net_lvl_[j].row(i).dot(lag_fod_.row(i));
            b(2 * n_ + j) += net_lvl_[j].row(i).dot(y_fod_.row(i));
        }
    }
}

Vector NetworkGmm::solve_with_weight(const Matrix& weight) const {
    Matrix G;
    Vector b;
    assemble(G, b);
    const Matrix M = G.transpose() * weight * G;
    Eigen::FullPivLU<Matrix> lu(M);
    if (!lu.isInvertible())
        throw Error(errc::singular_moment, "GMM normal equations are singular");
    const Vector theta = lu.solve(G.transpose() * (weight * b));
    if (!theta.allFinite()) throw Error(errc::singular_moment, "non-finite GMM solution");
    return theta;
}

Matrix NetworkGmm::moment_covariance(const Vector& theta) const {
    const int q = 2 * n_ + depth_;
    const double N = double(n_) * len_;
    Matrix S = Matrix::Zero(q, q);
    for (int i = 0; i < n_; ++i) {
        const auto e2 = (y_fod_.row(i) - theta(0) * wy_fod_.row(i) -
                         theta(1 + i) * lag_fod_.row(i))
                            .array()
                            .square()
                            .eval();
        S(i, i) = (self_lvl_.row(i).array().square() * e2).sum();
        S(n_ + i, n_ + i) = e2.sum();
        const double cross = (self_lvl_.row(i).array() * e2).sum();
        S(i, n_ + i) = S(n_ + i, i) = cross;
        for (int j = 0; j < depth_; ++j) {
            const double vs = (self_lvl_.row(i).array() * net_lvl_[j].row(i).array() * e2).sum();
            const double vc = (net_lvl_[j].row(i).array() * e2).sum();
            S(i, 2 * n_ + j) = S(2 * n_ + j, i) = vs;
            S(n_ + i, 2 * n_ + j) = S(2 * n_ + j, n_ + i) = vc;
            for (int l = j; l < depth_; ++l) {
                const double u =
                    (net_lvl_[j].row(i).array() * net_lvl_[l].row(i).array() * e2).sum();
                S(2 * n_ + j, 2 * n_ + l) += u;
                if (l != j) S(2 * n_ + l, 2 * n_ + j) += u;
            }
        }
    }
    return S / N;
}

Vector NetworkGmm::solve_two_step() {
    const int q = 2 * n_ + depth_;
    // step 1: weight (H'H)^{-1}
    Matrix HH = Matrix::Zero(q, q);
    for (int i = 0; i < n_; ++i) {
        HH(i, i) = self_lvl_.row(i).squaredNorm();
        HH(n_ + i, n_ + i) = double(len_);
        const double cross = self_lvl_.row(i).sum();
        HH(i, n_ + i) = HH(n_ + i, i) = cross;
        for (int j = 0; j < depth_; ++j) {
            const double vs = self_lvl_.row(i).dot(net_lvl_[j].row(i));
            const double vc = net_lvl_[j].row(i).sum();
            HH(i, 2 * n_ + j) = HH(2 * n_ + j, i) = vs;
            HH(n_ + i, 2 * n_ + j) = HH(2 * n_ + j, n_ + i) = vc;
            for (int l = j; l < depth_; ++l) {
                const double u = net_lvl_[j].row(i).dot(net_lvl_[l].row(i));
                HH(2 * n_ + j, 2 * n_ + l) += u;
                if (l != j) HH(2 * n_ + l, 2 * n_ + j) += u;
            }
        }
    }
    Eigen::FullPivLU<Matrix> lu_hh(HH);
    if (!lu_hh.isInvertible())
        throw Error(errc::singular_moment, "instrument Gram matrix is singular");
    const Vector theta1 = solve_with_weight(lu_hh.inverse());

    // step 2: weight = inverse moment covariance at theta1
    const Matrix S = moment_covariance(theta1);
    Eigen::FullPivLU<Matrix> lu_s(S);
    if (!lu_s.isInvertible())
        throw Error(errc::singular_moment, "moment covariance is singular");
    weight2_ = lu_s.inverse();
    theta_ = solve_with_weight(weight2_);

    // Avar(theta) = N (G' S^{-1} G)^{-1}
    const double N = double(n_) * len_;
    Matrix G;
    Vector b;
    assemble(G, b);
    Eigen::FullPivLU<Matrix> lu_v(G.transpose() * weight2_ * G);
    if (lu_v.isInvertible()) se_rho_ = std::sqrt(N * lu_v.inverse()(0, 0));
    solved_ = true;
    return theta_;
}

double NetworkGmm::objective(const Vector& theta) const {
    if (!solved_) throw Error(errc::invalid_value, "objective needs solve_two_step first");
    const double N = double(n_) * len_;
    const Vector g = stacked_moments(theta) / N;
    return g.dot(weight2_ * g);
}

NetworkFit fit_network_logarch(const LogVolPanel& volpanel, const EdgeWeightMatrix& w,
                               int instrument_depth, RhoMode rho_mode) {
    volpanel.check();
    w.check();
    const int n = volpanel.n(), T = volpanel.T();
    if (n != w.n()) throw Error(errc::invalid_value, "panel and W dimensions disagree");

    NetworkFit fit;
    fit.instrument_depth = instrument_depth;
    fit.gamma_diag.resize(n);
    fit.phi0.resize(n);
    fit.mu_star.resize(n);

    if (rho_mode == RhoMode::fixed_zero) {
        // decoupled model: per-stock OLS, identical to the univariate benchmark
        fit.rho = 0.0;
        fit.residual_panel.resize(n, T - 1);
        for (int i = 0; i < n; ++i) {
            const UnivariateFit u = fit_logarch(volpanel.values.row(i).transpose(), 1);
            fit.gamma_diag(i) = u.gamma(0);
            fit.phi0(i) = u.phi0;
            fit.mu_star(i) = u.mu_star;
            fit.residual_panel.row(i) = u.residuals.transpose();
        }
        return fit;
    }

    NetworkGmm gmm(volpanel.values, w, instrument_depth);
    const Vector theta = gmm.solve_two_step();
    fit.rho = theta(0);
    fit.gamma_diag = theta.tail(n);
    fit.se_rho = gmm.se_rho();
    fit.gmm_objective = gmm.objective(theta);

    if (w.normalization == EdgeWeightMatrix::Norm::row_normalized) {
        if (std::abs(fit.rho) >= 1.0)
            throw Error(errc::unstable_rho, "|rho| >= 1 on row-normalized W");
    } else if (std::abs(fit.rho) * w.spectral_radius() >= 1.0) {
        throw Error(errc::unstable_rho, "rho * spectral_radius(W) >= 1");
    }

    // phi0 from residual means of the untransformed equation, then the
    // smearing estimate on the centered residuals
    const Matrix& Y = volpanel.values;
    const Matrix wy = w.weights * Y;
    Matrix resid = Y.rightCols(T - 1) - fit.rho * wy.rightCols(T - 1) -
                   fit.gamma_diag.asDiagonal() * Y.leftCols(T - 1);
    fit.phi0 = resid.rowwise().mean();
    resid.colwise() -= fit.phi0;
    for (int i = 0; i < n; ++i) fit.mu_star(i) = estimate_mu_star(resid.row(i).transpose());
    fit.residual_panel = std::move(resid);
    return fit;
}

Vector forecast_network_one_step(const NetworkFit& fit, const EdgeWeightMatrix& w,
                                 const Vector& last_obs) {
    const int n = static_cast<int>(fit.gamma_diag.size());
    if (w.n() != n || last_obs.size() != n)
        throw Error(errc::invalid_value, "fit, W and last_obs dimensions disagree");
    const Matrix A = Matrix::Identity(n, n) - fit.rho * w.weights;
    Eigen::FullPivLU<Matrix> lu(A);
    if (!lu.isInvertible())
        throw Error(errc::singular_system, "I - rho W is numerically singular");
    const Vector rhs = fit.gamma_diag.cwiseProduct(last_obs) + fit.forecast_const();
    return lu.solve(rhs);
}

}  // namespace netarch

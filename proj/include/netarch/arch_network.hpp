#ifndef NETARCH_ARCH_NETWORK_HPP
#define NETARCH_ARCH_NETWORK_HPP

#include "netarch/core.hpp"

namespace netarch {

/// Forward orthogonal deviations (Helmert transform), row-wise:
/// z_t = sqrt((T-t)/(T-t+1)) (x_t - mean(x_{t+1..T})), t = 1..T-1.
/// Annihilates per-row constants and preserves the squared deviations from
/// the row mean.
Matrix helmert_transform(const Matrix& rows);

enum class RhoMode { estimate, fixed_zero };

/// The linear GMM system behind fit_network_logarch, exposed so tests can
/// evaluate the objective at arbitrary parameter values.
///
/// Equation (stock i, time t = 2..T), after the Helmert transform:
///   Y*_it = rho (W Y*_t)_i + gamma_i Y*_{i,t-1} + u~_it
/// Instruments stay in levels (dated t-1, so orthogonal to the forward-
/// demeaned error): stock-interacted Y*_{i,t-1}, stock-interacted constants,
/// and (W^j Y*_{t-1})_i for j = 1..depth. theta = (rho, gamma_1..gamma_n).
class NetworkGmm {
  public:
    NetworkGmm(const Matrix& logvol, const EdgeWeightMatrix& w, int instrument_depth);

    /// Two-step GMM: first step weighted by (H'H)^{-1}, second step by the
    /// inverse of the estimated moment covariance.
    Vector solve_two_step();

    /// (1/N) g' A g with the second-step weight; valid after solve_two_step.
    double objective(const Vector& theta) const;

    const Vector& theta() const { return theta_; }
    double se_rho() const { return se_rho_; }
    int n() const { return n_; }

  private:
    void assemble(Matrix& G, Vector& b) const;
    Vector solve_with_weight(const Matrix& weight) const;
    Matrix moment_covariance(const Vector& theta) const;
    Vector stacked_moments(const Vector& theta) const;

    int n_, len_, depth_;
    // per-stock series of length len_ = T-2 (Helmert-transformed equation)
    Matrix y_fod_, wy_fod_, lag_fod_;
    // instruments in levels, aligned with the transformed index
    Matrix self_lvl_;
    std::vector<Matrix> net_lvl_;  // depth matrices, n x len_
    Matrix weight2_;               // second-step weight
    Vector theta_;
    double se_rho_ = 0.0;
    bool solved_ = false;
};

/// Two-step GMM fit of the network log-ARCH(1). With RhoMode::fixed_zero the
/// model decouples and each stock is fit by OLS exactly as the univariate
/// benchmark. phi0 is recovered from the untransformed residual means; the
/// smearing estimate uses the centered residuals.
NetworkFit fit_network_logarch(const LogVolPanel& volpanel, const EdgeWeightMatrix& w,
                               int instrument_depth = 2, RhoMode rho_mode = RhoMode::estimate);

/// Joint one-step forecast: solves (I - rho W) h* = Gamma y* + phi0-hat.
/// phi0-hat is the residual-mean constant (omega and the error mean jointly),
/// never an explicit inverse.
Vector forecast_network_one_step(const NetworkFit& fit, const EdgeWeightMatrix& w,
                                 const Vector& last_obs);

}  // namespace netarch

#endif

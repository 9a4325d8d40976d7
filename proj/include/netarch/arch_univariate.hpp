#ifndef NETARCH_ARCH_UNIVARIATE_HPP
#define NETARCH_ARCH_UNIVARIATE_HPP

#include "netarch/core.hpp"

namespace netarch {

/// OLS fit of the AR(P) representation of a log-ARCH(P) model:
/// ln Y^2_t = phi0 + sum_p phi_p ln Y^2_{t-p} + u_t, t = P+1..T.
/// gamma_p = phi_p; omega = phi0 - mu_star with mu_star from the smearing
/// estimator on the residuals.
UnivariateFit fit_logarch(const Vector& log_sq_series, int P);

/// Smearing estimate -ln((1/T) sum exp(u_t)), evaluated with
/// max-subtraction so exp cannot overflow.
double estimate_mu_star(const Vector& residuals);

/// ln h_{T+1} = omega + sum_p gamma_p ln y^2_{T+1-p}.
/// last_obs[p-1] holds ln y^2_{T+1-p} (most recent first).
double forecast_one_step(const UnivariateFit& fit, const Vector& last_obs);

}  // namespace netarch

#endif

#include "netarch/simulate.hpp"

#include <cmath>
#include <cstdio>

namespace netarch {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr int kMinBurnIn = 500;
}  // namespace

double exact_mu_star_normal() { return -(kEulerGamma + std::log(2.0)); }

double NormalSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = rng_.uniform();
    const double u2 = rng_.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

namespace {
double log_eps_sq(double eps) {
    // eps == 0 has measure zero but would poison the recursion with -inf
    const double a = std::abs(eps);
    return 2.0 * std::log(a > 0.0 ? a : 1e-300);
}
}  // namespace

Vector simulate_univariate(double phi0, const Vector& gamma, int T, int burn_in,
                           const InnovationSpec& spec) {
    const int P = static_cast<int>(gamma.size());
    if (P < 1 || T < 1) throw Error(errc::invalid_value, "need P >= 1 and T >= 1");
    if (burn_in < kMinBurnIn) throw Error(errc::invalid_value, "burn_in must be >= 500");
    if (gamma.cwiseAbs().sum() >= 1.0)
        throw Error(errc::nonstationary, "sum |gamma_p| must be < 1");

    const double mu_star = exact_mu_star_normal();
    const double omega = phi0 - mu_star;
    const double uncond_mean = phi0 / (1.0 - gamma.sum());

    NormalSource normals(spec.seed);
    std::vector<double> lags(P, uncond_mean);  // lags[p] = ln Y^2_{t-1-p}
    Vector out(T);
    for (int t = 0; t < burn_in + T; ++t) {
        double lnh = omega;
        for (int p = 0; p < P; ++p) lnh += gamma(p) * lags[p];
        const double eps = normals.next();
        const double y = std::sqrt(std::exp(lnh)) * eps;
        for (int p = P - 1; p > 0; --p) lags[p] = lags[p - 1];
        lags[0] = lnh + log_eps_sq(eps);
        if (t >= burn_in) out(t - burn_in) = y;
    }
    return out;
}

NetworkSimOutput simulate_network_detail(const Vector& phi0, double rho, const Vector& gamma_diag,
                                         const EdgeWeightMatrix& w, int T, int burn_in,
                                         const InnovationSpec& spec) {
    w.check();
    const int n = w.n();
    if (phi0.size() != n || gamma_diag.size() != n)
        throw Error(errc::invalid_value, "phi0/gamma size must match W");
    if (T < 1) throw Error(errc::invalid_value, "T must be >= 1");
    if (burn_in < kMinBurnIn) throw Error(errc::invalid_value, "burn_in must be >= 500");
    if (w.normalization == EdgeWeightMatrix::Norm::row_normalized && std::abs(rho) >= 1.0)
        throw Error(errc::nonstationary, "|rho| must be < 1 for row-normalized W");

    const Matrix id = Matrix::Identity(n, n);
    Eigen::PartialPivLU<Matrix> lu(id - rho * w.weights);
    const Matrix companion = lu.solve(Matrix(gamma_diag.asDiagonal()));
    Eigen::EigenSolver<Matrix> es(companion, false);
    if (es.eigenvalues().cwiseAbs().maxCoeff() >= 1.0)
        throw Error(errc::nonstationary, "companion spectral radius >= 1");

    const double mu_star = exact_mu_star_normal();
    const Vector omega = phi0.array() - mu_star;
    // unconditional mean m solves m = companion m + (I - rho W)^{-1} phi0
    const Vector uncond = (id - companion).lu().solve(lu.solve(phi0));

    NormalSource normals(spec.seed);
    NetworkSimOutput out;
    out.omega = omega;
    out.logvol.resize(n, T);
    out.log_eps2.resize(n, T);
    out.panel.returns.resize(n, T);

    Vector ystar_prev = uncond, eps(n), le2(n);
    for (int t = 0; t < burn_in + T; ++t) {
        for (int i = 0; i < n; ++i) {
            eps(i) = normals.next();
            le2(i) = log_eps_sq(eps(i));
        }
        const Vector ystar = lu.solve((omega + gamma_diag.cwiseProduct(ystar_prev) + le2).eval());
        if (t >= burn_in) {
            const int c = t - burn_in;
            out.logvol.col(c) = ystar;
            out.log_eps2.col(c) = le2;
            // Y = sqrt(h) eps with ln h = Y* - ln eps^2
            out.panel.returns.col(c) =
                ((ystar - le2).array() / 2.0).exp() * eps.array();
        }
        ystar_prev = ystar;
    }

    out.panel.tickers.resize(n);
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "S%02d", i);
        out.panel.tickers[i] = buf;
    }
    out.panel.dates = synthetic_dates(T);
    out.panel.check();
    return out;
}

ReturnPanel simulate_network(const Vector& phi0, double rho, const Vector& gamma_diag,
                             const EdgeWeightMatrix& w, int T, int burn_in,
                             const InnovationSpec& spec) {
    return simulate_network_detail(phi0, rho, gamma_diag, w, T, burn_in, spec).panel;
}

std::vector<std::string> synthetic_dates(int T) {
    static const int mlen[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    std::vector<std::string> out;
    out.reserve(T);
    int y = 2000, m = 1, d = 1;
    for (int t = 0; t < T; ++t) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04u-%02u-%02u", unsigned(y) % 10000u,
                      unsigned(m) % 100u, unsigned(d) % 100u);
        out.emplace_back(buf);
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        const int dim = (m == 2 && leap) ? 29 : mlen[m - 1];
        if (++d > dim) {
            d = 1;
            if (++m > 12) {
                m = 1;
                ++y;
            }
        }
    }
    return out;
}

}  // namespace netarch

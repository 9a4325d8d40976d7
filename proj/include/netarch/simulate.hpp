#ifndef NETARCH_SIMULATE_HPP
#define NETARCH_SIMULATE_HPP

#include <cstdint>

#include "netarch/core.hpp"

namespace netarch {

/// splitmix64: a counter-based 64-bit generator (Steele, Lea & Flood).
/// Constants are fixed so every platform reproduces the same stream.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    /// Uniform in the open interval (0, 1).
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

/// Standard normal draws from SplitMix64 uniforms via Box-Muller.
class NormalSource {
  public:
    explicit NormalSource(uint64_t seed) : rng_(seed) {}
    double next();

  private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Innovations are standard normal by construction, so E ln eps^2 has the
/// closed form -(euler_gamma + ln 2).
struct InnovationSpec {
    uint64_t seed = 1;
};

/// Exact E ln eps^2 for eps ~ N(0,1).
double exact_mu_star_normal();

/// Simulates a log-ARCH(P) return series of length T after discarding
/// burn_in draws. phi0 is the AR-representation intercept; omega is derived
/// from it with the exact normal E ln eps^2.
Vector simulate_univariate(double phi0, const Vector& gamma, int T, int burn_in,
                           const InnovationSpec& spec);

/// Full simulation record for the network model.
struct NetworkSimOutput {
    ReturnPanel panel;
    Matrix logvol;    // Y*_t = ln Y^2_t, n x T
    Matrix log_eps2;  // ln eps^2_t, n x T
    Vector omega;     // constant of the volatility equation
};

/// Simulates the network log-ARCH via the reduced form
/// Y*_t = (I - rho W)^{-1} (omega + Gamma Y*_{t-1} + ln eps^2_t).
/// Throws Nonstationary when the companion matrix (I - rho W)^{-1} Gamma has
/// spectral radius >= 1.
NetworkSimOutput simulate_network_detail(const Vector& phi0, double rho, const Vector& gamma_diag,
                                         const EdgeWeightMatrix& w, int T, int burn_in,
                                         const InnovationSpec& spec);

ReturnPanel simulate_network(const Vector& phi0, double rho, const Vector& gamma_diag,
                             const EdgeWeightMatrix& w, int T, int burn_in,
                             const InnovationSpec& spec);

/// Sequential synthetic ISO-8601 calendar starting at 2000-01-01 (dates are
/// opaque labels; every civil day counts).
std::vector<std::string> synthetic_dates(int T);

}  // namespace netarch

#endif

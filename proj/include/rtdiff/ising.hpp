#ifndef RTDIFF_ISING_HPP
#define RTDIFF_ISING_HPP

#include <cstdint>
#include <random>

#include "rtdiff/types.hpp"

namespace rtdiff {

enum class IsingRegime { ordered, critical, disordered };

/// Ferromagnetic 2D Ising couplings K_i = J_i / k_B T > 0 with the modulus
/// k = 1/(sinh 2K_1 sinh 2K_2); k < 1 is the ordered (low-temperature) phase.
struct IsingParams {
    double K1 = 0.0, K2 = 0.0;
    double modulus = 0.0;
    IsingRegime regime = IsingRegime::disordered;
};

IsingParams make_ising(double K1, double K2);
inline IsingParams make_ising(double K) { return make_ising(K, K); }

/// Critical coupling of the isotropic model, (1/2) ln(1 + sqrt 2).
double ising_critical_coupling();

/// Spontaneous magnetization m = (1-k^2)^{1/8} in the ordered regime, 0
/// otherwise; lattice-gas density rho = (m+1)/2 for the extremal plus state.
struct Magnetization {
    double m = 0.0;
    double rho = 0.5;
};
Magnetization ising_magnetization(const IsingParams& params);

/// Bragg comb on Z^2: intensity 1/4 in the disordered regime, rho^2 in the
/// ordered one.  Exactly critical parameters take the disordered value and
/// set the critical flag.
struct IsingPurePoint {
    PurePointSpectrum spectrum;
    bool critical = false;
};
IsingPurePoint ising_pp(const IsingParams& params, double kmax = 1.0);

/// Asymptotic two-spin correlation form of the regime; the constants are fit
/// parameters, never predictions.
///   disordered: c1 exp(-R/c2) / sqrt(R)
///   ordered:    m^2 + c3 exp(-2R/c2) / R^2
///   critical:   c1 R^{-1/4}
struct CorrelationFit {
    double amplitude = 0.0;     // c1 resp. c3
    double decay_length = 0.0;  // c2 (unused for critical)
    double r_squared = 0.0;     // goodness of the linearized fit
};
CorrelationFit fit_correlation_form(const IsingParams& params,
                                    const std::vector<double>& R,
                                    const std::vector<double>& corr);

/// Evaluates the fitted form at distance R.
double correlation_form(const IsingParams& params, const CorrelationFit& fit,
                        double R);

/// Metropolis single-spin sampler on an L x L torus.  Below T_c the chain
/// starts all-up (extremal plus state, no external field); on readout the
/// configuration is globally flipped if the magnetization went negative.
class IsingSampler {
  public:
    IsingSampler(const IsingParams& params, int L, std::uint64_t seed);

    void sweep(long long n = 1);   // n * L^2 proposed flips
    double magnetization() const;  // mean spin in [-1, 1]
    /// Two-spin correlation <s(0) s(r)> averaged over sites, axial distances.
    double pair_correlation(int r) const;
    /// Lattice-gas comb: weights (sigma+1)/2 in {1,0}, or sigma itself with
    /// plus_minus_weights.
    WeightedDiracComb scatterers(bool plus_minus_weights = false) const;
    const IsingParams& params() const { return params_; }

  private:
    IsingParams params_;
    int L_;
    std::vector<std::int8_t> spin_;
    double accept_[3][3];  // exp(-2(K1 a + K2 b)), a,b in {-2,0,2}
    std::mt19937_64 rng_;
};

WeightedDiracComb sample_ising_mcmc(const IsingParams& params, int L,
                                    long long sweeps, std::uint64_t seed,
                                    bool plus_minus_weights = false,
                                    long long burnin_sweeps = -1);

}  // namespace rtdiff

#endif

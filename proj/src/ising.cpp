#include "rtdiff/ising.hpp"

#include <cmath>

#include "rtdiff/util.hpp"

namespace rtdiff {

namespace {
constexpr double kCriticalTol = 1e-12;
}

IsingParams make_ising(double K1, double K2) {
    if (!(K1 > 0.0) || !(K2 > 0.0))
        throw ModelError(errc::bad_parameters,
                         "couplings must be positive (ferromagnetic)");
    IsingParams p;
    p.K1 = K1;
    p.K2 = K2;
    p.modulus = 1.0 / (std::sinh(2.0 * K1) * std::sinh(2.0 * K2));
    if (std::abs(p.modulus - 1.0) <= kCriticalTol)
        p.regime = IsingRegime::critical;
    else
        p.regime = p.modulus < 1.0 ? IsingRegime::ordered : IsingRegime::disordered;
    return p;
}

double ising_critical_coupling() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

Magnetization ising_magnetization(const IsingParams& params) {
    Magnetization mag;
    if (params.regime == IsingRegime::ordered) {
        const double k2 = params.modulus * params.modulus;
        mag.m = std::pow(1.0 - k2, 0.125);
    } else {
        mag.m = 0.0;
    }
    mag.rho = 0.5 * (mag.m + 1.0);
    return mag;
}

IsingPurePoint ising_pp(const IsingParams& params, double kmax) {
    IsingPurePoint out;
    out.critical = params.regime == IsingRegime::critical;
    double intensity = 0.25;
    if (params.regime == IsingRegime::ordered) {
        const double rho = ising_magnetization(params).rho;
        intensity = rho * rho;
    }
    out.spectrum.dim = 2;
    out.spectrum.period_lattice = {{1.0, 0.0}, {0.0, 1.0}};
    const long long nmax = static_cast<long long>(std::floor(kmax));
    for (long long h = -nmax; h <= nmax; ++h)
        for (long long k = -nmax; k <= nmax; ++k)
            out.spectrum.peaks.push_back(
                {{static_cast<double>(h), static_cast<double>(k)}, intensity});
    return out;
}

CorrelationFit fit_correlation_form(const IsingParams& params,
                                    const std::vector<double>& R,
                                    const std::vector<double>& corr) {
    if (R.size() != corr.size() || R.size() < 3)
        throw ModelError(errc::bad_parameters, "need >= 3 correlation samples");

    std::vector<double> x, y;
    const double m2 = [&] {
        const Magnetization mag = ising_magnetization(params);
        return mag.m * mag.m;
    }();

    CorrelationFit fit;
    switch (params.regime) {
        case IsingRegime::disordered: {
            // log(G sqrt(R)) = log c1 - R/c2
            for (std::size_t i = 0; i < R.size(); ++i) {
                if (corr[i] <= 0.0) continue;
                x.push_back(R[i]);
                y.push_back(std::log(corr[i] * std::sqrt(R[i])));
            }
            const LinearFit lf = fit_line(x, y);
            fit.amplitude = std::exp(lf.intercept);
            fit.decay_length = lf.slope < 0.0 ? -1.0 / lf.slope : 0.0;
            fit.r_squared = lf.r_squared;
            break;
        }
        case IsingRegime::ordered: {
            // log((G - m^2) R^2) = log c3 - 2R/c2
            for (std::size_t i = 0; i < R.size(); ++i) {
                const double excess = corr[i] - m2;
                if (excess <= 0.0) continue;
                x.push_back(R[i]);
                y.push_back(std::log(excess * R[i] * R[i]));
            }
            const LinearFit lf = fit_line(x, y);
            fit.amplitude = std::exp(lf.intercept);
            fit.decay_length = lf.slope < 0.0 ? -2.0 / lf.slope : 0.0;
            fit.r_squared = lf.r_squared;
            break;
        }
        case IsingRegime::critical: {
            // log G = log c1 - (1/4) log R: fit the amplitude only
            for (std::size_t i = 0; i < R.size(); ++i) {
                if (corr[i] <= 0.0) continue;
                x.push_back(std::log(R[i]));
                y.push_back(std::log(corr[i]));
            }
            const LinearFit lf = fit_line(x, y);
            fit.amplitude = std::exp(lf.intercept);
            fit.decay_length = -lf.slope;  // fitted exponent, for inspection
            fit.r_squared = lf.r_squared;
            break;
        }
    }
    if (x.size() < 3)
        throw ModelError(errc::bad_parameters,
                         "correlation samples incompatible with the regime form");
    return fit;
}

double correlation_form(const IsingParams& params, const CorrelationFit& fit,
                        double R) {
    switch (params.regime) {
        case IsingRegime::disordered:
            return fit.amplitude * std::exp(-R / fit.decay_length) / std::sqrt(R);
        case IsingRegime::ordered: {
            const Magnetization mag = ising_magnetization(params);
            return mag.m * mag.m +
                   fit.amplitude * std::exp(-2.0 * R / fit.decay_length) / (R * R);
        }
        case IsingRegime::critical:
            return fit.amplitude * std::pow(R, -0.25);
    }
    return 0.0;
}

IsingSampler::IsingSampler(const IsingParams& params, int L, std::uint64_t seed)
    : params_(params), L_(L), rng_(seed) {
    if (L < 16)
        throw ModelError(errc::bad_parameters, "lattice size must be >= 16");
    // all-up start selects the plus phase below T_c; above it the start is
    // irrelevant after burn-in
    spin_.assign(static_cast<std::size_t>(L) * L, 1);
    for (int a = -2; a <= 2; a += 2)
        for (int b = -2; b <= 2; b += 2)
            accept_[a / 2 + 1][b / 2 + 1] =
                std::exp(-2.0 * (params.K1 * a + params.K2 * b));
}

void IsingSampler::sweep(long long nsweeps) {
    const int L = L_;
    std::uniform_int_distribution<int> ri(0, L - 1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto* s = spin_.data();
    const long long flips = nsweeps * static_cast<long long>(L) * L;
    for (long long t = 0; t < flips; ++t) {
        const int i = ri(rng_);
        const int j = ri(rng_);
        const std::size_t idx = static_cast<std::size_t>(j) * L + i;
        const int here = s[idx];
        const int horiz =
            here * (s[static_cast<std::size_t>(j) * L + (i + 1 == L ? 0 : i + 1)] +
                    s[static_cast<std::size_t>(j) * L + (i == 0 ? L - 1 : i - 1)]);
        const int vert =
            here * (s[static_cast<std::size_t>(j + 1 == L ? 0 : j + 1) * L + i] +
                    s[static_cast<std::size_t>(j == 0 ? L - 1 : j - 1) * L + i]);
        const double acc = accept_[horiz / 2 + 1][vert / 2 + 1];
        if (acc >= 1.0 || uni(rng_) < acc)
            s[idx] = static_cast<std::int8_t>(-here);
    }
}

double IsingSampler::magnetization() const {
    long long total = 0;
    for (std::int8_t v : spin_) total += v;
    return static_cast<double>(total) / (static_cast<double>(L_) * L_);
}

double IsingSampler::pair_correlation(int r) const {
    const int L = L_;
    long long acc = 0;
    for (int j = 0; j < L; ++j)
        for (int i = 0; i < L; ++i) {
            const int s0 = spin_[static_cast<std::size_t>(j) * L + i];
            acc += s0 * spin_[static_cast<std::size_t>(j) * L + (i + r) % L];
            acc += s0 * spin_[static_cast<std::size_t>((j + r) % L) * L + i];
        }
    return static_cast<double>(acc) / (2.0 * L * L);
}

WeightedDiracComb IsingSampler::scatterers(bool plus_minus_weights) const {
    const bool flip = magnetization() < 0.0;
    WeightedDiracComb comb;
    comb.dim = 2;
    comb.window = {2, {0.0, 0.0}, {static_cast<double>(L_), static_cast<double>(L_)}};
    for (int j = 0; j < L_; ++j)
        for (int i = 0; i < L_; ++i) {
            int sigma = spin_[static_cast<std::size_t>(j) * L_ + i];
            if (flip) sigma = -sigma;
            if (plus_minus_weights) {
                comb.points.push_back({static_cast<double>(i), static_cast<double>(j)});
                comb.weights.push_back(Complex(sigma, 0.0));
            } else if (sigma > 0) {
                comb.points.push_back({static_cast<double>(i), static_cast<double>(j)});
                comb.weights.push_back(Complex(1.0, 0.0));
            }
        }
    return comb;
}

WeightedDiracComb sample_ising_mcmc(const IsingParams& params, int L,
                                    long long sweeps, std::uint64_t seed,
                                    bool plus_minus_weights,
                                    long long burnin_sweeps) {
    if (burnin_sweeps < 0)
        burnin_sweeps = std::max<long long>(500, sweeps / 4);
    IsingSampler sampler(params, L, seed);
    sampler.sweep(burnin_sweeps + sweeps);
    return sampler.scatterers(plus_minus_weights);
}

}  // namespace rtdiff

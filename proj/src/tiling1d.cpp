#include "rtdiff/tiling1d.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rtdiff/util.hpp"

namespace rtdiff {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kIntTol = 1e-9;

bool near_integer(double x, double tol = kIntTol) {
    return std::abs(x - std::llround(x)) <= tol;
}

double dot_pu(const RandomTilingSpec1D& s) {
    double r = 0.0;
    for (int i = 0; i < s.tiles(); ++i) r += s.probs[i] * s.lengths[i];
    return r;
}

// All k with every k(u_i - u_j) integral; singular additionally has k.u_i
// integral for all i.
enum class PointKind { regular, exceptional_zero, singular };

PointKind classify_point(const RandomTilingSpec1D& s, double k) {
    for (int i = 0; i < s.tiles(); ++i)
        for (int j = i + 1; j < s.tiles(); ++j)
            if (!near_integer(k * (s.lengths[i] - s.lengths[j])))
                return PointKind::regular;
    for (int i = 0; i < s.tiles(); ++i)
        if (!near_integer(k * s.lengths[i])) return PointKind::exceptional_zero;
    return PointKind::singular;
}

}  // namespace

void RandomTilingSpec1D::validate() const {
    const int n = tiles();
    if (n < 1 || static_cast<int>(probs.size()) != n)
        throw ModelError(errc::bad_parameters, "lengths/probs size mismatch");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(lengths[i] > 0.0))
            throw ModelError(errc::bad_parameters, "tile lengths must be positive");
        if (!(probs[i] > 0.0))
            throw ModelError(errc::bad_parameters, "probabilities must be positive");
        sum += probs[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ModelError(errc::bad_parameters, "probabilities must sum to 1");
    if (rational) {
        if (static_cast<int>(rational->a.size()) != n || !(rational->xi > 0.0))
            throw ModelError(errc::bad_config, "rational tags malformed");
        if (gcd_all(rational->a) != 1)
            throw ModelError(errc::bad_parameters, "rational tags must be coprime");
        for (int i = 0; i < n; ++i)
            if (std::abs(rational->xi * rational->a[i] - lengths[i]) >
                1e-9 * std::max(1.0, lengths[i]))
                throw ModelError(errc::bad_parameters,
                                 "rational tags inconsistent with lengths");
    }
}

double rt_density(const RandomTilingSpec1D& spec) {
    spec.validate();
    return 1.0 / dot_pu(spec);
}

namespace {

// d * multinomial * p^m for one representation
double representation_weight(const RandomTilingSpec1D& s,
                             const std::vector<int>& m) {
    double w = multinomial(m);
    for (int i = 0; i < s.tiles(); ++i)
        for (int c = 0; c < m[i]; ++c) w *= s.probs[i];
    return w;
}

// Enumerate multi-indices with m.a = target, |m|_1 bounded by construction.
void enumerate_reps(const RandomTilingSpec1D& s, long long target, int idx,
                    std::vector<int>& m, double& acc) {
    const auto& a = s.rational->a;
    if (idx == s.tiles() - 1) {
        if (target % a[idx] == 0) {
            m[idx] = static_cast<int>(target / a[idx]);
            acc += representation_weight(s, m);
        }
        return;
    }
    for (long long c = 0; c * a[idx] <= target; ++c) {
        m[idx] = static_cast<int>(c);
        enumerate_reps(s, target - c * a[idx], idx + 1, m, acc);
    }
    m[idx] = 0;
}

}  // namespace

double rt_autocorr_at(const RandomTilingSpec1D& spec, long long j) {
    spec.validate();
    if (!spec.rational)
        throw ModelError(errc::bad_parameters,
                         "integer distances need rational tags");
    const long long target = std::llabs(j);
    double acc = 0.0;
    std::vector<int> m(spec.tiles(), 0);
    enumerate_reps(spec, target, 0, m, acc);
    return rt_density(spec) * acc;
}

double rt_autocorr_coeff(const RandomTilingSpec1D& spec,
                         const std::vector<int>& m) {
    spec.validate();
    if (static_cast<int>(m.size()) != spec.tiles())
        throw ModelError(errc::bad_parameters, "multi-index size mismatch");
    for (int mi : m)
        if (mi < 0)
            throw ModelError(errc::bad_parameters, "multi-index must be nonnegative");

    if (spec.rational) {
        long long j = 0;
        for (int i = 0; i < spec.tiles(); ++i) j += m[i] * spec.rational->a[i];
        return rt_autocorr_at(spec, j);
    }
    return rt_density(spec) * representation_weight(spec, m);
}

double rt_ac_density_raw(const RandomTilingSpec1D& spec, double k) {
    double num = 0.0, den = 0.0;
    const int n = spec.tiles();
    for (int i = 0; i < n; ++i) {
        const double si = std::sin(kPi * k * spec.lengths[i]);
        den += spec.probs[i] * si * si;
        for (int j = i + 1; j < n; ++j) {
            const double sij =
                std::sin(kPi * k * (spec.lengths[i] - spec.lengths[j]));
            num += spec.probs[i] * spec.probs[j] * sij * sij;
        }
    }
    return rt_density(spec) * num / (den - num);
}

double rt_singular_value(const RandomTilingSpec1D& spec) {
    double num = 0.0;
    const int n = spec.tiles();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = spec.lengths[i] - spec.lengths[j];
            num += spec.probs[i] * spec.probs[j] * d * d;
        }
    const double pu = dot_pu(spec);
    return rt_density(spec) * num / (pu * pu);
}

AcDensity rt_ac_density(const RandomTilingSpec1D& spec) {
    spec.validate();
    RandomTilingSpec1D s = spec;  // captured by value
    const double singular = rt_singular_value(s);

    AcDensity ac;
    ac.dim = 1;
    if (s.rational) ac.periods.push_back({1.0 / s.rational->xi, 0.0});
    ac.density = [s, singular](Vec2 kv) {
        const double k = kv[0];
        switch (classify_point(s, k)) {
            case PointKind::regular:
                return std::max(0.0, rt_ac_density_raw(s, k));
            case PointKind::exceptional_zero:
                return 0.0;
            case PointKind::singular:
                return singular;
        }
        return 0.0;
    };
    return ac;
}

PurePointSpectrum rt_pp_part(const RandomTilingSpec1D& spec, double kmax) {
    spec.validate();
    const double d = rt_density(spec);
    PurePointSpectrum pp;
    pp.dim = 1;
    if (!spec.rational) {
        pp.peaks.push_back({{0.0, 0.0}, d * d});
        return pp;
    }
    const double period = 1.0 / spec.rational->xi;
    pp.period_lattice.push_back({period, 0.0});
    const long long nmax =
        kmax > 0.0 ? static_cast<long long>(std::floor(kmax / period)) : 0;
    for (long long j = -nmax; j <= nmax; ++j)
        pp.peaks.push_back({{j * period, 0.0}, d * d});
    return pp;
}

WeightedDiracComb sample_rt(const RandomTilingSpec1D& spec, std::size_t tiles,
                            std::uint64_t seed) {
    spec.validate();
    if (tiles < 1)
        throw ModelError(errc::bad_parameters, "need at least one tile");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int n = spec.tiles();

    WeightedDiracComb comb;
    comb.dim = 1;
    comb.points.reserve(tiles);
    comb.weights.assign(tiles, Complex(1.0, 0.0));

    double x = 0.0;
    for (std::size_t t = 0; t < tiles; ++t) {
        comb.points.push_back({x, 0.0});
        double u = uni(rng);
        int pick = n - 1;
        for (int i = 0; i < n - 1; ++i) {
            u -= spec.probs[i];
            if (u < 0.0) {
                pick = i;
                break;
            }
        }
        x += spec.lengths[pick];
    }
    comb.window = {1, {0.0, 0.0}, {x, 0.0}};
    return comb;
}

WeightedDiracComb truncate_comb(const WeightedDiracComb& comb, double length) {
    if (length <= 0.0 || length > comb.window.extent(0) + 1e-9)
        throw ModelError(errc::window_too_small,
                         "truncation length exceeds sample window");
    WeightedDiracComb out;
    out.dim = comb.dim;
    out.window = comb.window;
    out.window.hi[0] = out.window.lo[0] + length;
    for (std::size_t i = 0; i < comb.points.size(); ++i) {
        if (comb.points[i][0] - comb.window.lo[0] < length - 1e-12) {
            out.points.push_back(comb.points[i]);
            out.weights.push_back(comb.weights[i]);
        }
    }
    return out;
}

namespace {

void enumerate_bridge(const RandomTilingSpec1D& s, int remaining, int idx,
                      std::vector<int>& m, double& acc) {
    if (idx == s.tiles() - 1) {
        m[idx] = remaining;
        double len = 0.0;
        for (int i = 0; i < s.tiles(); ++i) len += m[i] * s.lengths[i];
        acc += representation_weight(s, m) * len;
        return;
    }
    for (int c = 0; c <= remaining; ++c) {
        m[idx] = c;
        enumerate_bridge(s, remaining - c, idx + 1, m, acc);
    }
    m[idx] = 0;
}

}  // namespace

std::pair<double, double> mean_bridge_identity(const RandomTilingSpec1D& spec,
                                               int tiles) {
    spec.validate();
    if (tiles < 0)
        throw ModelError(errc::bad_parameters, "tile count must be nonnegative");
    if (tiles > 25)
        throw ModelError(errc::size_cap_exceeded,
                         "exact enumeration capped at 25 tiles");
    double lhs = 0.0;
    std::vector<int> m(spec.tiles(), 0);
    enumerate_bridge(spec, tiles, 0, m, lhs);
    const double rhs = tiles * dot_pu(spec);
    return {lhs, rhs};
}

double rt_partial_sum(const RandomTilingSpec1D& spec, double k, int terms) {
    spec.validate();
    // g_N(k)/d = 1 + 2 sum_{m=1..N} Re r(k)^m with r(k) = sum_j p_j e^{-2pi i k u_j}
    Complex r(0.0, 0.0);
    for (int i = 0; i < spec.tiles(); ++i)
        r += spec.probs[i] * std::polar(1.0, -2.0 * kPi * k * spec.lengths[i]);
    Complex pw(1.0, 0.0);
    double acc = 1.0;
    for (int m = 1; m <= terms; ++m) {
        pw *= r;
        acc += 2.0 * pw.real();
    }
    return rt_density(spec) * acc;
}

}  // namespace rtdiff

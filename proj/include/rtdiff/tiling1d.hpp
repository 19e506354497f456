#ifndef RTDIFF_TILING1D_HPP
#define RTDIFF_TILING1D_HPP

#include <optional>

#include "rtdiff/types.hpp"

namespace rtdiff {

/// Exact rational structure of the tile lengths: u_i = xi * a_i with coprime
/// integers a_i.  Commensurability is decided only from these tags, never
/// inferred from floating-point lengths.
struct RationalTags {
    std::vector<long long> a;
    double xi = 1.0;
};

/// n-tile 1D random tiling: positive lengths with attached probabilities.
struct RandomTilingSpec1D {
    std::vector<double> lengths;
    std::vector<double> probs;
    std::optional<RationalTags> rational;

    int tiles() const { return static_cast<int>(lengths.size()); }
    void validate() const;
    bool commensurate() const { return rational.has_value(); }
};

/// Vertex density d = 1/(p.u).
double rt_density(const RandomTilingSpec1D& spec);

/// Autocorrelation coefficient nu(z) for z = m.u (m a multi-index of
/// nonnegative tile counts; the coefficient is even in z).  Incommensurate
/// lengths admit a single representation,
///   nu = d * multinomial(|m|; m) * p^m ;
/// with rational tags all representations of the same distance are
/// enumerated exactly in integer arithmetic and summed.
double rt_autocorr_coeff(const RandomTilingSpec1D& spec,
                         const std::vector<int>& m);

/// Commensurate-case coefficient at distance z = j * xi.
double rt_autocorr_at(const RandomTilingSpec1D& spec, long long j);

/// Continuous density of the absolutely continuous part.  At exceptional
/// points (all k(u_i - u_j) integer) the exact continuation value is
/// attached: 0 when k.u is not integral, else the constant
///   d * sum_{i<j} p_i p_j (u_i-u_j)^2 / (p.u)^2.
AcDensity rt_ac_density(const RandomTilingSpec1D& spec);

/// Raw sine-quotient density, undefined at the exceptional points; exposed
/// for continuity checks against the attached continuation values.
double rt_ac_density_raw(const RandomTilingSpec1D& spec, double k);

/// Value of the attached continuation constant at singular points.
double rt_singular_value(const RandomTilingSpec1D& spec);

/// Bragg part: d^2 on (1/xi) Z when rationally tagged, d^2 at 0 otherwise.
/// Peaks are listed for |k| <= kmax; the period entry carries the comb.
PurePointSpectrum rt_pp_part(const RandomTilingSpec1D& spec, double kmax = 0.0);

/// Left tile endpoints of N i.i.d. tiles starting at 0, unit point masses;
/// window [0, sum of lengths].  Deterministic per seed.
WeightedDiracComb sample_rt(const RandomTilingSpec1D& spec, std::size_t tiles,
                            std::uint64_t seed);

/// Restriction of a sample to the window [0, length] (points beyond are
/// dropped); used to give replicas a common spectral grid.
WeightedDiracComb truncate_comb(const WeightedDiracComb& comb, double length);

/// Mean distance bridged by N tiles, evaluated two ways: exact enumeration
/// of sum_{|m|=N} multinomial * p^m * (m.u) against N * (p.u).
std::pair<double, double> mean_bridge_identity(const RandomTilingSpec1D& spec,
                                               int tiles);

/// Partial sum g_N(k) of the Fourier transform of the truncated
/// autocorrelation (proof-side object; bounded away from singular points).
double rt_partial_sum(const RandomTilingSpec1D& spec, double k, int terms);

}  // namespace rtdiff

#endif

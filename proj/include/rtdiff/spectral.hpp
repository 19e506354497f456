#ifndef RTDIFF_SPECTRAL_HPP
#define RTDIFF_SPECTRAL_HPP

#include <optional>

#include "rtdiff/types.hpp"

namespace rtdiff {

/// Empirical autocorrelation coefficients
///   nu(z) = (1/vol(B_R)) sum_{y in Lambda_R, y-z in Lambda} w(y) conj(w(y-z))
/// where B_R is the box of half-width R centered on the window.  Hermitian
/// symmetry nu(-z) = conj(nu(z)) holds exactly: mirror pairs are evaluated
/// once and conjugated.
AutocorrelationTable empirical_autocorrelation(const WeightedDiracComb& comb,
                                               double radius,
                                               const std::vector<Vec2>& diffs);

/// Finite-volume periodogram I(k) = |sum_x w(x) e^{-2 pi i k.x}|^2 / vol,
/// evaluated by direct summation on an arbitrary grid.
IntensityGrid periodogram(const WeightedDiracComb& comb, const GridSpec& grid);

/// Same estimator for combs supported on a regular lattice of the given
/// pitch: weights are binned (rejecting off-lattice points) and transformed
/// with an FFT.  The returned grid holds the Fourier modes j/L of the
/// window, one full reciprocal period [0, 1/pitch) per axis.
IntensityGrid periodogram_fft(const WeightedDiracComb& comb, Vec2 pitch);

/// Direct evaluation of the periodogram at scattered k points.
std::vector<double> periodogram_at(const WeightedDiracComb& comb,
                                   const std::vector<Vec2>& ks);

/// Averages grid values over a box of half-width `halfwidth` around each
/// point of `centers`, skipping modes within `exclude_radius` of any point
/// in `exclude`.  Used to tame per-mode periodogram fluctuations before
/// comparisons.
IntensityGrid bin_average(const IntensityGrid& grid, const GridSpec& centers,
                          double halfwidth,
                          const std::vector<Vec2>& exclude = {},
                          double exclude_radius = 0.0);

/// Element-wise average of grids over identical specs (replica reduction).
IntensityGrid average_grids(const std::vector<IntensityGrid>& grids);

struct ClassifyOptions {
    double bragg_slope = 0.9;  // log I vs log vol slope at/above => Bragg
    double ac_slope = 0.1;     // slope at/below => absolutely continuous
    double match_tol = 1e-9;   // k-point matching tolerance across grids
    double floor = 1e-300;     // intensity floor before taking logs
};

struct PeakClassification {
    PurePointSpectrum bragg;       // intensity = I/vol at the largest volume
    IntensityGrid background;      // largest-volume values at common points,
                                   // Bragg entries zeroed
    std::vector<Vec2> sc_candidates;
    std::vector<Vec2> common_k;    // points the fit was performed at
    std::vector<double> slopes;    // fitted slope per common point
};

/// Volume-scaling classification: fits log I against log vol at every k
/// common to all grids.  Bragg intensities grow linearly with the volume,
/// absolutely continuous backgrounds stay flat, anything in between is
/// flagged as a singular-continuous candidate.  Needs >= 3 volumes.
PeakClassification classify_peaks(const std::vector<IntensityGrid>& grids,
                                  const ClassifyOptions& opts = {});

struct DensityComparison {
    double max_rel_dev = 0.0;
    double mean_rel_dev = 0.0;
    double chi_squared = 0.0;
    std::size_t points_used = 0;
    std::size_t points_masked = 0;
};

/// Pointwise comparison of an empirical intensity grid against an analytic
/// density, excluding neighborhoods of declared Bragg positions.
DensityComparison compare_density(const IntensityGrid& empirical,
                                  const AcDensity& analytic,
                                  const PurePointSpectrum* peaks = nullptr,
                                  double mask_radius = 0.0);

}  // namespace rtdiff

#endif

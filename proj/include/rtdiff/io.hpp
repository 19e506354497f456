#ifndef RTDIFF_IO_HPP
#define RTDIFF_IO_HPP

#include <string>

#include "rtdiff/dimer.hpp"
#include "rtdiff/types.hpp"

namespace rtdiff {

/// CSV with header `k1[,k2],intensity`.
void write_intensity_csv(const IntensityGrid& grid, const std::string& path);

/// Density sampled on n points over [k_lo, k_hi] as CSV (1D).
void write_density_csv(const AcDensity& density, double k_lo, double k_hi,
                       int samples, const std::string& path);

/// 16-bit binary PGM (P5, row-major) with a JSON sidecar `<path>.json`
/// recording the linear intensity mapping and the grid geometry.
void write_pgm16(const IntensityGrid& grid, const std::string& path);

/// JSON array of {"k": [...], "intensity": ...} plus the period lattice.
void write_peaks_json(const PurePointSpectrum& pp, const std::string& path);
PurePointSpectrum read_peaks_json(const std::string& path);

/// Scatterer positions/weights as CSV.
void write_comb_csv(const WeightedDiracComb& comb, const std::string& path);

/// Coupling tables are cached as a one-line JSON header plus raw doubles.
void save_coupling_table(const CouplingTable& table, const std::string& path);
CouplingTable load_coupling_table(const std::string& path);

/// Loads a cached table or builds and caches it.  cache_dir may be empty to
/// skip caching entirely.
CouplingTable coupling_table_cached(CouplingTable::Model model,
                                    const std::array<double, 3>& z,
                                    int resolution, int radius,
                                    const std::string& cache_dir);

}  // namespace rtdiff

#endif

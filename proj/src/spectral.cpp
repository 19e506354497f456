#include "rtdiff/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "rtdiff/util.hpp"

namespace rtdiff {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct CellKey {
    std::int64_t a, b;
    bool operator==(const CellKey& o) const { return a == o.a && b == o.b; }
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.a) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// Spatial hash for point lookup with tolerance.  Positions are assumed
// uniformly discrete with separation far above the cell size.
class PointIndex {
  public:
    explicit PointIndex(const std::vector<Vec2>& pts, int dim)
        : pts_(pts), dim_(dim) {
        map_.reserve(pts.size() * 2);
        for (std::size_t i = 0; i < pts.size(); ++i)
            map_.emplace(key(pts[i]), i);
    }

    // Index of a point within tol of p, or npos.
    std::size_t find(Vec2 p, double tol = 1e-9) const {
        const CellKey k0 = key(p);
        for (std::int64_t da = -1; da <= 1; ++da) {
            for (std::int64_t db = (dim_ == 2 ? -1 : 0);
                 db <= (dim_ == 2 ? 1 : 0); ++db) {
                auto rng = map_.equal_range({k0.a + da, k0.b + db});
                for (auto it = rng.first; it != rng.second; ++it) {
                    const Vec2 q = pts_[it->second];
                    if (std::abs(q[0] - p[0]) <= tol &&
                        (dim_ == 1 || std::abs(q[1] - p[1]) <= tol))
                        return it->second;
                }
            }
        }
        return npos;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  private:
    static constexpr double kCell = 1e-4;
    CellKey key(Vec2 p) const {
        return {static_cast<std::int64_t>(std::llround(p[0] / kCell)),
                dim_ == 2 ? static_cast<std::int64_t>(std::llround(p[1] / kCell))
                          : 0};
    }
    const std::vector<Vec2>& pts_;
    int dim_;
    std::unordered_multimap<CellKey, std::size_t, CellKeyHash> map_;
};

bool canonical_diff(Vec2 z) {
    if (z[0] != 0.0) return z[0] > 0.0;
    return z[1] >= 0.0;
}

}  // namespace

void WeightedDiracComb::validate() const {
    if (points.empty())
        throw ModelError(errc::bad_parameters, "empty comb");
    if (points.size() != weights.size())
        throw ModelError(errc::bad_parameters, "points/weights length mismatch");
    if (dim != 1 && dim != 2)
        throw ModelError(errc::bad_parameters, "dimension must be 1 or 2");
    for (const auto& p : points)
        if (!window.contains(p))
            throw ModelError(errc::bad_parameters, "point outside window");
}

Complex AutocorrelationTable::at(Vec2 z, double tol) const {
    for (std::size_t i = 0; i < diffs.size(); ++i)
        if (std::abs(diffs[i][0] - z[0]) <= tol &&
            std::abs(diffs[i][1] - z[1]) <= tol)
            return values[i];
    throw ModelError(errc::bad_parameters, "difference vector not in table");
}

AutocorrelationTable empirical_autocorrelation(const WeightedDiracComb& comb,
                                               double radius,
                                               const std::vector<Vec2>& diffs) {
    comb.validate();
    if (radius <= 0.0 || radius > comb.window.inradius() + 1e-12)
        throw ModelError(errc::window_too_small,
                         "autocorrelation radius exceeds window inradius");

    const Vec2 c = comb.window.center();
    const PointIndex index(comb.points, comb.dim);

    std::vector<std::size_t> inner;  // points inside the centered box B_R
    for (std::size_t i = 0; i < comb.points.size(); ++i) {
        const Vec2 d = comb.points[i] - c;
        if (std::abs(d[0]) <= radius && (comb.dim == 1 || std::abs(d[1]) <= radius))
            inner.push_back(i);
    }

    double vol = 2.0 * radius;
    if (comb.dim == 2) vol *= 2.0 * radius;

    AutocorrelationTable table;
    table.dim = comb.dim;
    table.radius = radius;
    table.diffs = diffs;
    table.values.resize(diffs.size());

    auto coefficient = [&](Vec2 z) {
        Complex acc(0.0, 0.0);
        for (std::size_t i : inner) {
            const std::size_t j = index.find(comb.points[i] - z);
            if (j != PointIndex::npos)
                acc += comb.weights[i] * std::conj(comb.weights[j]);
        }
        return acc / vol;
    };

    // Evaluate every difference through its canonical representative so that
    // nu(-z) == conj(nu(z)) holds bit-exactly.
    for (std::size_t t = 0; t < diffs.size(); ++t) {
        const Vec2 z = diffs[t];
        table.values[t] =
            canonical_diff(z) ? coefficient(z) : std::conj(coefficient(-z));
    }
    return table;
}

IntensityGrid periodogram(const WeightedDiracComb& comb, const GridSpec& grid) {
    comb.validate();

    IntensityGrid out;
    out.grid = grid;
    out.volume = comb.window.volume();
    out.values.assign(grid.size(), 0.0);

    const int n0 = grid.count[0];
    const int n1 = (grid.dim == 2) ? grid.count[1] : 1;
    std::vector<Complex> acc(grid.size(), Complex(0.0, 0.0));

    // Phase recurrence along the last axis: one complex multiply per mode.
    for (std::size_t p = 0; p < comb.points.size(); ++p) {
        const Vec2 x = comb.points[p];
        const Complex w = comb.weights[p];
        if (grid.dim == 1) {
            Complex ph = std::polar(1.0, -kTwoPi * grid.origin[0] * x[0]);
            const Complex rot = std::polar(1.0, -kTwoPi * grid.step[0] * x[0]);
            for (int i = 0; i < n0; ++i) {
                acc[i] += w * ph;
                ph *= rot;
            }
        } else {
            const Complex rot1 = std::polar(1.0, -kTwoPi * grid.step[1] * x[1]);
            for (int i = 0; i < n0; ++i) {
                const double k0 = grid.origin[0] + i * grid.step[0];
                Complex ph = std::polar(
                    1.0, -kTwoPi * (k0 * x[0] + grid.origin[1] * x[1]));
                ph *= w;
                Complex* row = acc.data() + static_cast<std::size_t>(i) * n1;
                for (int j = 0; j < n1; ++j) {
                    row[j] += ph;
                    ph *= rot1;
                }
            }
        }
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.values[i] = std::norm(acc[i]) / out.volume;
    return out;
}

std::vector<double> periodogram_at(const WeightedDiracComb& comb,
                                   const std::vector<Vec2>& ks) {
    comb.validate();
    const double vol = comb.window.volume();
    std::vector<double> out(ks.size());
    for (std::size_t t = 0; t < ks.size(); ++t) {
        Complex s(0.0, 0.0);
        for (std::size_t p = 0; p < comb.points.size(); ++p)
            s += comb.weights[p] *
                 std::polar(1.0, -kTwoPi * dot(ks[t], comb.points[p]));
        out[t] = std::norm(s) / vol;
    }
    return out;
}

IntensityGrid periodogram_fft(const WeightedDiracComb& comb, Vec2 pitch) {
    comb.validate();
    const int dim = comb.dim;

    std::array<int, 2> bins{1, 1};
    for (int a = 0; a < dim; ++a) {
        if (pitch[a] <= 0.0)
            throw ModelError(errc::bad_parameters, "pitch must be positive");
        const double nb = comb.window.extent(a) / pitch[a];
        bins[a] = static_cast<int>(std::llround(nb));
        if (bins[a] < 1 || std::abs(nb - bins[a]) > 1e-6)
            throw ModelError(errc::bad_parameters,
                             "window extent is not a multiple of the pitch");
    }

    const std::size_t total = static_cast<std::size_t>(bins[0]) * bins[1];
    std::vector<Complex> field(total, Complex(0.0, 0.0));
    for (std::size_t p = 0; p < comb.points.size(); ++p) {
        std::array<std::int64_t, 2> idx{0, 0};
        for (int a = 0; a < dim; ++a) {
            const double t = (comb.points[p][a] - comb.window.lo[a]) / pitch[a];
            idx[a] = std::llround(t);
            if (std::abs(t - idx[a]) > 1e-9)
                throw ModelError(errc::bad_parameters,
                                 "comb point off the declared lattice");
            if (idx[a] == bins[a]) idx[a] = 0;  // right window edge wraps
        }
        field[static_cast<std::size_t>(idx[0]) * (dim == 2 ? bins[1] : 1) +
              (dim == 2 ? idx[1] : 0)] += comb.weights[p];
    }

    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan =
            dim == 1
                ? fftw_plan_dft_1d(bins[0],
                                   reinterpret_cast<fftw_complex*>(field.data()),
                                   reinterpret_cast<fftw_complex*>(field.data()),
                                   FFTW_FORWARD, FFTW_ESTIMATE)
                : fftw_plan_dft_2d(bins[0], bins[1],
                                   reinterpret_cast<fftw_complex*>(field.data()),
                                   reinterpret_cast<fftw_complex*>(field.data()),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    IntensityGrid out;
    out.grid.dim = dim;
    out.grid.origin = {0.0, 0.0};
    out.grid.step = {1.0 / comb.window.extent(0),
                     dim == 2 ? 1.0 / comb.window.extent(1) : 0.0};
    out.grid.count = {bins[0], dim == 2 ? bins[1] : 1};
    out.volume = comb.window.volume();
    out.values.resize(total);
    // mode j corresponds to k = j / extent; the FFT phase matches e^{-2pi i k.x}
    // only up to the window offset, which contributes a pure phase and drops
    // out of |.|^2.
    for (std::size_t i = 0; i < total; ++i)
        out.values[i] = std::norm(field[i]) / out.volume;
    return out;
}

IntensityGrid bin_average(const IntensityGrid& grid, const GridSpec& centers,
                          double halfwidth, const std::vector<Vec2>& exclude,
                          double exclude_radius) {
    IntensityGrid out;
    out.grid = centers;
    out.volume = grid.volume;
    out.samples = grid.samples;
    out.values.assign(centers.size(), 0.0);

    for (std::size_t t = 0; t < centers.size(); ++t) {
        const Vec2 c = centers.point(t);
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t f = 0; f < grid.grid.size(); ++f) {
            const Vec2 k = grid.grid.point(f);
            if (inf_norm(k - c) > halfwidth) continue;
            bool masked = false;
            for (const auto& e : exclude)
                if (inf_norm(k - e) <= exclude_radius) {
                    masked = true;
                    break;
                }
            if (masked) continue;
            sum += grid.values[f];
            ++n;
        }
        out.values[t] = n > 0 ? sum / n : 0.0;
    }
    return out;
}

IntensityGrid average_grids(const std::vector<IntensityGrid>& grids) {
    if (grids.empty())
        throw ModelError(errc::bad_parameters, "no grids to average");
    IntensityGrid out = grids.front();
    for (std::size_t g = 1; g < grids.size(); ++g) {
        if (grids[g].values.size() != out.values.size())
            throw ModelError(errc::bad_parameters, "grid size mismatch");
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += grids[g].values[i];
    }
    for (auto& v : out.values) v /= grids.size();
    out.samples = static_cast<int>(grids.size());
    return out;
}

PeakClassification classify_peaks(const std::vector<IntensityGrid>& grids,
                                  const ClassifyOptions& opts) {
    if (grids.size() < 3)
        throw ModelError(errc::bad_parameters,
                         "peak classification needs at least 3 volumes");

    std::vector<const IntensityGrid*> sorted;
    for (const auto& g : grids) sorted.push_back(&g);
    std::sort(sorted.begin(), sorted.end(),
              [](const IntensityGrid* a, const IntensityGrid* b) {
                  return a->volume < b->volume;
              });
    if (sorted.front()->volume <= 0.0 ||
        sorted.back()->volume <= sorted.front()->volume)
        throw ModelError(errc::bad_parameters, "volumes must be increasing");

    const IntensityGrid& coarse = *sorted.front();
    const IntensityGrid& fine = *sorted.back();

    PeakClassification out;
    out.bragg.dim = coarse.grid.dim;
    out.background.grid = coarse.grid;
    out.background.volume = fine.volume;
    out.background.samples = fine.samples;

    std::vector<double> logvol;
    for (const auto* g : sorted) logvol.push_back(std::log(g->volume));

    for (std::size_t f = 0; f < coarse.grid.size(); ++f) {
        const Vec2 k = coarse.grid.point(f);

        // locate k in every grid
        std::vector<double> logI;
        double fine_value = 0.0;
        bool found_all = true;
        for (const auto* g : sorted) {
            bool found = false;
            for (std::size_t j = 0; j < g->grid.size(); ++j) {
                if (inf_norm(g->grid.point(j) - k) <= opts.match_tol) {
                    // values are I = |S|^2/vol: Bragg => I ~ A*vol (slope 1),
                    // ac => I ~ const (slope 0)
                    logI.push_back(std::log(std::max(g->values[j], opts.floor)));
                    if (g == &fine) fine_value = g->values[j];
                    found = true;
                    break;
                }
            }
            if (!found) {
                found_all = false;
                break;
            }
        }
        if (!found_all) continue;

        const LinearFit fit = fit_line(logvol, logI);
        out.common_k.push_back(k);
        out.slopes.push_back(fit.slope);

        if (fit.slope >= opts.bragg_slope) {
            out.bragg.peaks.push_back({k, fine_value / fine.volume});
            out.background.values.push_back(0.0);
        } else if (fit.slope <= opts.ac_slope) {
            out.background.values.push_back(fine_value);
        } else {
            out.sc_candidates.push_back(k);
            out.background.values.push_back(fine_value);
        }
    }
    return out;
}

DensityComparison compare_density(const IntensityGrid& empirical,
                                  const AcDensity& analytic,
                                  const PurePointSpectrum* peaks,
                                  double mask_radius) {
    DensityComparison rep;
    double sum_rel = 0.0;
    double scale = 0.0;
    std::size_t n_scale = 0;
    for (std::size_t f = 0; f < empirical.grid.size(); ++f) {
        scale += std::abs(analytic(empirical.grid.point(f)));
        ++n_scale;
    }
    const double floor = n_scale ? 1e-12 * std::max(scale / n_scale, 1e-30) : 1e-12;

    for (std::size_t f = 0; f < empirical.grid.size(); ++f) {
        const Vec2 k = empirical.grid.point(f);
        if (peaks && mask_radius > 0.0) {
            bool masked = false;
            for (const auto& p : peaks->peaks)
                if (inf_norm(k - p.k) <= mask_radius) {
                    masked = true;
                    break;
                }
            if (masked) {
                ++rep.points_masked;
                continue;
            }
        }
        const double a = analytic(k);
        const double e = empirical.values[f];
        const double denom = std::max(std::abs(a), floor);
        const double rel = std::abs(e - a) / denom;
        rep.max_rel_dev = std::max(rep.max_rel_dev, rel);
        sum_rel += rel;
        rep.chi_squared += (e - a) * (e - a) / denom;
        ++rep.points_used;
    }
    if (rep.points_used == 0)
        throw ModelError(errc::disjoint_supports,
                         "no overlapping unmasked points to compare");
    rep.mean_rel_dev = sum_rel / rep.points_used;
    return rep;
}

}  // namespace rtdiff

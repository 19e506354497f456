#ifndef RTDIFF_TYPES_HPP
#define RTDIFF_TYPES_HPP

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtdiff {

using Complex = std::complex<double>;

/// Coordinate vector; 1D data uses component 0 and leaves component 1 at zero.
using Vec2 = std::array<double, 2>;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator-(Vec2 a) { return {-a[0], -a[1]}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a[0], s * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double inf_norm(Vec2 a) {
    return std::max(std::abs(a[0]), std::abs(a[1]));
}

enum class errc {
    bad_parameters,
    not_stochastic,
    not_primitive,
    not_reversible,
    kasteleyn_boundary,
    window_too_small,
    resolution_too_small,
    table_too_small,
    size_cap_exceeded,
    disjoint_supports,
    io_failure,
    bad_config,
};

/// All model/contract violations are reported through this type so the CLI
/// can map them to a uniform "invalid input" exit code.
class ModelError : public std::runtime_error {
  public:
    ModelError(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

/// Axis-aligned box window, the averaging region for all volume
/// normalizations (cube convention).
struct Box {
    int dim = 1;
    Vec2 lo{0.0, 0.0};
    Vec2 hi{0.0, 0.0};

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= extent(a);
        return v;
    }
    /// Largest r such that the centered box of half-width r fits inside.
    double inradius() const {
        double r = extent(0) / 2.0;
        for (int a = 1; a < dim; ++a) r = std::min(r, extent(a) / 2.0);
        return r;
    }
    Vec2 center() const { return 0.5 * (lo + hi); }
    bool contains(Vec2 p, double tol = 1e-9) const {
        for (int a = 0; a < dim; ++a)
            if (p[a] < lo[a] - tol || p[a] > hi[a] + tol) return false;
        return true;
    }
};

/// A finite sampled configuration: scatterer positions with complex weights.
struct WeightedDiracComb {
    int dim = 1;
    std::vector<Vec2> points;
    std::vector<Complex> weights;
    Box window;

    std::size_t size() const { return points.size(); }
    /// Checks the structural invariants (matching lengths, points inside the
    /// window). Pairwise distinctness is the producer's responsibility.
    void validate() const;
};

/// Empirical pair correlations: nu(z) for a requested set of difference
/// vectors, normalized by the volume of the centered averaging box.
struct AutocorrelationTable {
    int dim = 1;
    double radius = 0.0;
    std::vector<Vec2> diffs;
    std::vector<Complex> values;

    /// Looks up nu(z) for a stored difference (within tol); throws if absent.
    Complex at(Vec2 z, double tol = 1e-9) const;
};

struct Peak {
    Vec2 k{0.0, 0.0};
    double intensity = 0.0;
};

/// The Bragg part: point masses of the diffraction measure.  Peaks list a
/// fundamental set; period_lattice (optional basis vectors) generates the
/// rest by translation.
struct PurePointSpectrum {
    int dim = 1;
    std::vector<Peak> peaks;
    std::vector<Vec2> period_lattice;

    /// Total intensity of listed peaks.
    double total() const {
        double s = 0.0;
        for (const auto& p : peaks) s += p.intensity;
        return s;
    }
};

/// Radon-Nikodym density of the absolutely continuous part.  The evaluator
/// must be >= 0 and periodic under the declared lattice.
struct AcDensity {
    int dim = 1;
    std::function<double(Vec2)> density;
    std::vector<Vec2> periods;

    double operator()(Vec2 k) const { return density(k); }
    double operator()(double k) const { return density({k, 0.0}); }
};

/// Regular k-grid specification (origin + step + counts per axis).
struct GridSpec {
    int dim = 1;
    Vec2 origin{0.0, 0.0};
    Vec2 step{0.0, 0.0};
    std::array<int, 2> count{0, 1};

    std::size_t size() const {
        return static_cast<std::size_t>(count[0]) *
               static_cast<std::size_t>(dim == 2 ? count[1] : 1);
    }
    Vec2 point(std::size_t flat) const {
        if (dim == 1) return origin + static_cast<double>(flat) * Vec2{step[0], 0.0};
        const int n1 = count[1];
        const int i = static_cast<int>(flat) / n1;
        const int j = static_cast<int>(flat) % n1;
        return {origin[0] + i * step[0], origin[1] + j * step[1]};
    }
};

/// Finite-volume periodogram values on a k-grid (row-major for 2D).
struct IntensityGrid {
    GridSpec grid;
    std::vector<double> values;
    double volume = 0.0;  // window volume used in the normalization
    int samples = 1;      // number of replicas averaged into `values`

    double at(std::size_t flat) const { return values[flat]; }
};

}  // namespace rtdiff

#endif

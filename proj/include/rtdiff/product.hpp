#ifndef RTDIFF_PRODUCT_HPP
#define RTDIFF_PRODUCT_HPP

#include "rtdiff/tiling1d.hpp"
#include "rtdiff/types.hpp"

namespace rtdiff {

/// Cartesian product of D one-dimensional random tilings.
struct ProductSpec {
    std::vector<RandomTilingSpec1D> factors;

    int dimensions() const { return static_cast<int>(factors.size()); }
    void validate() const;
    double density() const;  // product of factor densities
};

enum class SpectralType { pure_point, absolutely_continuous, singular_continuous };

/// One of the 2^D cross terms of the product diffraction measure: the mask
/// records which factors contribute their Bragg part (the others contribute
/// their ac part).  beta = 1 - m/(2D) for m ac-factors is the finite-size
/// scaling exponent of the term's Fourier-Bohr amplitudes.
struct ProductTerm {
    std::vector<bool> pp_factor;
    int ac_count = 0;
    double beta = 1.0;
    SpectralType type = SpectralType::pure_point;
};

struct ProductSpectrumDescriptor {
    ProductSpec spec;
    std::vector<ProductTerm> terms;

    const ProductTerm& all_pp() const;
    const ProductTerm& all_ac() const;
    /// Peak grid of the all-pp term inside |k_i| <= kmax per axis (D <= 2).
    PurePointSpectrum pp_peaks(double kmax) const;
    /// Product density of the all-ac term (D <= 2 for the Vec2 evaluator).
    AcDensity ac_product() const;
};

/// nu(z) = prod_i nu^(i)(z_i) with per-factor difference multi-indices.
double product_autocorr(const ProductSpec& spec,
                        const std::vector<std::vector<int>>& multi_indices);

/// Enumerates all 2^D terms with spectral types and scaling exponents.
ProductSpectrumDescriptor product_spectrum(const ProductSpec& spec);

/// Cartesian product of independent factor samples (rendering is 2D only).
WeightedDiracComb product_sample(const ProductSpec& spec,
                                 const std::array<std::size_t, 2>& tiles,
                                 std::uint64_t seed);

}  // namespace rtdiff

#endif

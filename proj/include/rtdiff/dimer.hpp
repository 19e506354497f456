#ifndef RTDIFF_DIMER_HPP
#define RTDIFF_DIMER_HPP

#include <cstdint>
#include <map>

#include "rtdiff/types.hpp"

namespace rtdiff {

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

/// Domino (square-lattice dimer) model.  Sites k in Z^2, directed Kasteleyn
/// weights A(k, k+e1) = z1 and A(k, k+e2) = i z2, scatterers at tile centers
/// so that horizontal tiles sit at (k1+1/2, k2) and vertical ones at
/// (k1, k2+1/2).
struct DominoModel {
    double z1 = 1.0, z2 = 1.0;
    double rho1 = 0.5, rho2 = 0.5;  // derived tile fractions, rho1+rho2 = 1
};

/// Lozenge (honeycomb dimer) model on the triangular lattice with basis
/// xhat = (1,0), yhat = (1/2, sqrt(3)/2).  Cell c holds an up-triangle site
/// L_c and the down-triangle site R_c to its upper right; bonds are
///   type 3: L_c - R_c        (weight z3, scatterer at c + (1/2,1/2))
///   type 1: L_c - R_{c-e1}   (weight z1, scatterer at c + (0,1/2))
///   type 2: L_c - R_{c-e2}   (weight z2, scatterer at c + (1/2,0))
/// with scatterer offsets given in lattice coordinates (the Kagome grid).
struct LozengeModel {
    std::array<double, 3> z{1.0, 1.0, 1.0};
    std::array<double, 3> rho{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double phi0 = 2.0943951023931953;  // arccos((z1^2-z2^2-z3^2)/(2 z2 z3))
};

DominoModel make_domino(double z1, double z2);
LozengeModel make_lozenge(double z1, double z2, double z3);

/// Triangular-lattice basis and its dual.
inline Vec2 lozenge_basis(int i) {
    return i == 0 ? Vec2{1.0, 0.0} : Vec2{0.5, 0.8660254037844386};
}
inline Vec2 lozenge_dual_basis(int i) {
    return i == 0 ? Vec2{1.0, -0.5773502691896258}
                  : Vec2{0.0, 1.1547005383792515};
}

// ---------------------------------------------------------------------------
// Coupling functions (inverse Kasteleyn matrix entries)
// ---------------------------------------------------------------------------

/// Domino coupling [x,y] = A^{-1}(k; k+(x,y)) by half-offset midpoint
/// quadrature of the torus integral on an M x M grid (M a power of two,
/// >= 256).  Zero for equal parity, real for x odd / y even, imaginary for
/// y odd / x even, and [x,y] = -[-x,-y] exactly.
Complex domino_coupling(int x, int y, double z1, double z2, int resolution);

/// Same quantity with the angular integral reduced to a single smooth
/// integral (geometric-kernel resummation); spectrally accurate and
/// independent of the torus grid.  Serves as the high-resolution oracle.
Complex domino_coupling_exact(int x, int y, double z1, double z2);

/// Aggregate asymptotic form -(1/pi) z2 x / ((z2 x)^2 + (z1 y)^2) for x odd
/// (times i with z1 y in the numerator for y odd).
Complex domino_coupling_asymptotic(int x, int y, double z1, double z2);

/// Lozenge coupling [x,y]_LR: canonical reduction through the six graph
/// symmetries to first coordinate <= -1, then the single-integral form.
/// Values are real.
double lozenge_coupling(int x, int y, const std::array<double, 3>& z);

/// Direct arc integral, valid for x <= -1 only.
double lozenge_coupling_single(int x, int y, const std::array<double, 3>& z);

/// Half-offset midpoint quadrature of the full torus double integral; slowly
/// convergent near the Kasteleyn zeros, kept as an independent route.
double lozenge_coupling_torus(int x, int y, const std::array<double, 3>& z,
                              int resolution);

/// One of the six symmetry images (index 0..5) of (x, y; z), returned as the
/// transformed coordinates plus permuted activities.
struct SymImage {
    int x, y;
    std::array<double, 3> z;
};
SymImage lozenge_symmetry_image(int x, int y, const std::array<double, 3>& z,
                                int which);

/// Window of coupling values for |x|,|y| <= radius.
struct CouplingTable {
    enum class Model { domino, lozenge } model = Model::domino;
    std::array<double, 3> z{1.0, 1.0, 0.0};
    int radius = 0;
    int resolution = 0;  // quadrature resolution used (0 = exact route)
    std::vector<Complex> values;  // dense, (2R+1)^2, row (x), col (y)

    Complex at(int x, int y) const {
        if (std::abs(x) > radius || std::abs(y) > radius)
            throw ModelError(errc::table_too_small, "coupling window exceeded");
        return values[static_cast<std::size_t>(x + radius) * (2 * radius + 1) +
                      (y + radius)];
    }
};

/// Batch domino table via one FFT of 1/lambda on the half-offset grid;
/// parity zeros, antisymmetry and the realness pattern are exact by
/// construction.
CouplingTable domino_coupling_table(double z1, double z2, int resolution,
                                    int radius);

CouplingTable lozenge_coupling_table(const std::array<double, 3>& z, int radius);

// ---------------------------------------------------------------------------
// Densities, pair probabilities, spectra
// ---------------------------------------------------------------------------

/// Tile fractions from activities through nearest-neighbor bond occupation
/// probabilities z_i |coupling_i| (normalized).
std::array<double, 2> domino_densities(double z1, double z2);
std::array<double, 3> lozenge_densities(const std::array<double, 3>& z);

/// Joint occupation probability of two bonds of the given orientations with
/// cell offset r, plus its distance-dependent part c(r).  Orientations are
/// 1/2 for domino (horizontal/vertical), 1/2/3 for lozenge.
struct JointOccupation {
    double probability = 0.0;
    double connected = 0.0;  // c_ij(r), the part that decays with distance
};
JointOccupation domino_joint(const DominoModel& model, const CouplingTable& t,
                             int alpha, int beta, int x, int y);
JointOccupation lozenge_joint(const LozengeModel& model, const CouplingTable& t,
                              int alpha, int beta, int x, int y);

/// Bragg part of the domino diffraction: (1/4)(rho1 + (-1)^{h+k} rho2)^2 on
/// Z^2 for |k| <= kmax, with optional complex scatterer weights h1, h2.
/// Degenerate densities route to the exact rectangular-lattice comb.
PurePointSpectrum domino_pp(double rho1, double rho2, double kmax = 2.0,
                            Complex h1 = {1.0, 0.0}, Complex h2 = {1.0, 0.0});

/// Bragg part of the lozenge diffraction: (4/3)((-1)^h rho1 + (-1)^k rho2 +
/// rho3)^2 at integer coordinates (h,k) in the dual basis, period 2 Gamma*.
/// Peak positions are physical; |h|,|k| <= hkmax.
PurePointSpectrum lozenge_pp(const std::array<double, 3>& rho, int hkmax = 1);

/// Truncated Fourier series of the connected pair correlations: the
/// absolutely continuous density with a rigorous tail bound from the
/// (x^2+y^2+1)^{-2} decay.
struct DiffuseDensity {
    AcDensity density;
    double tail_bound = 0.0;
};
DiffuseDensity domino_diffuse(const DominoModel& model, const CouplingTable& t,
                              int truncation);
DiffuseDensity lozenge_diffuse(const LozengeModel& model, const CouplingTable& t,
                               int truncation);

// ---------------------------------------------------------------------------
// Samplers and exact finite-size oracles
// ---------------------------------------------------------------------------

/// Perfect matching on an even torus; `partner` holds the matched-neighbor
/// direction per site (domino: R/L/U/D; lozenge: per-cell bond type).
struct DimerConfiguration {
    enum class Kind { domino, lozenge } kind = Kind::domino;
    int m = 0, n = 0;
    std::vector<std::uint8_t> partner;

    /// Tile counts per orientation.
    std::array<std::size_t, 3> counts() const;
    /// Scatterer comb (tile centers).  Lozenge positions are in lattice
    /// coordinates; convert with lozenge_basis for physical rendering.
    WeightedDiracComb scatterers() const;
    void check_matching() const;  // validates the perfect-matching invariant
};

/// Metropolis plaquette-rotation dynamics for the domino model.  A sweep
/// proposes m*n plaquette flips; burn-in defaults to
/// ceil(20 log(mn)) sweeps.  Deterministic per seed.
DimerConfiguration sample_domino_mcmc(const DominoModel& model, int m, int n,
                                      long long sweeps, std::uint64_t seed,
                                      long long burnin_sweeps = -1);

/// Hexagon-rotation dynamics for the lozenge model.  Rotations conserve the
/// per-orientation tile counts on the torus, so the activity dependence
/// enters through the initial staircase configuration, built at the density
/// sector closest to rho(z); the realized fractions are exact rationals
/// (k2/m, k1/n) and are reported by counts().
DimerConfiguration sample_lozenge_mcmc(const LozengeModel& model, int m, int n,
                                       long long sweeps, std::uint64_t seed,
                                       long long burnin_sweeps = -1);

/// Initial lozenge staircase at the sector closest to the target densities.
DimerConfiguration lozenge_initial(int m, int n, double rho1, double rho2);

/// Exact enumeration of weighted perfect matchings on small tori
/// (at most 64 sites).  bond_probability holds the occupation probability of
/// one representative bond per orientation.
struct TorusExact {
    double partition = 0.0;        // sum over matchings of prod z_i^{n_i}
    double log_matchings = 0.0;    // log of the unweighted matching count
    std::array<double, 3> bond_probability{0.0, 0.0, 0.0};
};
TorusExact domino_enumerate(int m, int n, double z1, double z2);
TorusExact lozenge_enumerate(int m, int n, const std::array<double, 3>& z);

/// Probability that two specific domino bonds are jointly occupied, from the
/// exact enumeration with both dimers pinned.
double domino_enumerate_joint(int m, int n, double z1, double z2, int alpha,
                              int beta, int x, int y);

/// Finite-size boundary-condition test: eigenvalue counting functions of the
/// Hermitian i*A for free vs periodic boundaries differ by at most twice the
/// number of modified rows (a vanishing fraction as the torus grows).
struct BoundaryComparison {
    int sites = 0;
    int modified_rows = 0;
    int max_count_discrepancy = 0;  // over a fixed family of intervals
    double relative_discrepancy = 0.0;
};
BoundaryComparison domino_boundary_comparison(int m, int n, double z1, double z2);

}  // namespace rtdiff

#endif

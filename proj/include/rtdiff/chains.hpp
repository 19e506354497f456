#ifndef RTDIFF_CHAINS_HPP
#define RTDIFF_CHAINS_HPP

#include <Eigen/Dense>

#include "rtdiff/types.hpp"

namespace rtdiff {

/// Validated n-state lattice chain: complex scattering strengths h, a
/// primitive reversible stochastic matrix M and its stationary vector p.
struct ChainSpec {
    Eigen::VectorXcd h;
    Eigen::MatrixXd M;
    Eigen::VectorXd p;

    int states() const { return static_cast<int>(h.size()); }
    Complex mean_h() const;       // <h> = sum_i p_i h_i
    double mean_h2() const;       // <|h|^2>
};

/// Spectral data of S = P M P^{-1}, P = diag(sqrt(p)): real eigenvalues
/// (lambda_1 = 1 first), orthonormal basis columns, and the coefficients
/// beta_i of P h in that basis.  S splits into the rank-one projector S0
/// plus the contraction S1.
struct ChainSpectralData {
    Eigen::VectorXd eigenvalues;   // [1, lambda_2, ..., lambda_n]
    Eigen::MatrixXd basis;         // columns b_i
    Eigen::VectorXcd beta;         // beta_i = <b_i, P h>
    Eigen::MatrixXd S;
};

struct AnalyzedChain {
    ChainSpec spec;
    ChainSpectralData spectral;
};

/// Validates stochasticity, primitivity ((I+M)^{n-1} strictly positive) and
/// reversibility (Pi M = M^t Pi), computes the stationary vector and the
/// symmetric spectral decomposition.
AnalyzedChain analyze_chain(const Eigen::VectorXcd& h, const Eigen::MatrixXd& M);

/// Prop.-1 closed form for i.i.d. weights: Bragg comb |<h>|^2 on the integer
/// lattice plus the flat background <|h|^2> - |<h>|^2.
std::pair<PurePointSpectrum, AcDensity> bernoulli_diffraction(
    const Eigen::VectorXcd& h, const Eigen::VectorXd& p);

/// nu(m) = <h| Pi M^{|m|} |h>; real and nonnegative for reversible chains.
double markov_autocorrelation(const AnalyzedChain& chain, long long m);

/// Z-periodic density of the absolutely continuous part,
///   f(k) = sum_{j>=2} |beta_j|^2 (1-lambda_j^2) /
///          (1 - 2 cos(2 pi k) lambda_j + lambda_j^2).
AcDensity markov_ac_density(const AnalyzedChain& chain);

/// Same density through the operator form
///   <h| P (1-S1^2)(1 - 2cos(2 pi k) S1 + S1^2)^{-1} P |h> - |<h>|^2 ;
/// kept as an independent algebraic route for cross-checking.
double markov_ac_density_operator(const AnalyzedChain& chain, double k);

std::pair<PurePointSpectrum, AcDensity> markov_diffraction(
    const AnalyzedChain& chain);

/// Stationary-start sample of the chain on {0, ..., N-1}; deterministic per
/// seed.  Window is [0, N].
WeightedDiracComb sample_chain(const AnalyzedChain& chain, std::size_t length,
                               std::uint64_t seed);

}  // namespace rtdiff

#endif

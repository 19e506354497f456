#include "rtdiff/chains.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rtdiff {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kRowSumTol = 1e-12;
constexpr double kReversibleTol = 1e-12;
}  // namespace

Complex ChainSpec::mean_h() const {
    Complex s(0.0, 0.0);
    for (int i = 0; i < states(); ++i) s += p(i) * h(i);
    return s;
}

double ChainSpec::mean_h2() const {
    double s = 0.0;
    for (int i = 0; i < states(); ++i) s += p(i) * std::norm(h(i));
    return s;
}

AnalyzedChain analyze_chain(const Eigen::VectorXcd& h, const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    if (n < 1 || M.cols() != n || h.size() != n)
        throw ModelError(errc::bad_parameters, "chain dimensions mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && h(i) == h(j))
                throw ModelError(errc::bad_parameters,
                                 "scattering strengths must be pairwise distinct");

    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            if (M(i, j) < 0.0)
                throw ModelError(errc::not_stochastic, "negative transition entry");
            row += M(i, j);
        }
        if (std::abs(row - 1.0) > kRowSumTol)
            throw ModelError(errc::not_stochastic, "row sums must equal 1");
    }

    // primitivity: (I+M)^{n-1} strictly positive
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + M;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < n - 1; ++k) P = P * A;
    if ((P.array() <= 0.0).any())
        throw ModelError(errc::not_primitive, "transition matrix is not primitive");

    // stationary vector: p^t M = p^t, sum p = 1 (linear solve with the
    // normalization replacing one redundant equation)
    Eigen::MatrixXd L = M.transpose() - Eigen::MatrixXd::Identity(n, n);
    L.row(0).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1.0;
    Eigen::VectorXd p = L.fullPivLu().solve(rhs);
    for (int i = 0; i < n; ++i)
        if (!(p(i) > 0.0))
            throw ModelError(errc::not_primitive, "stationary vector not positive");

    Eigen::MatrixXd Pi = p.asDiagonal();
    if (((Pi * M - M.transpose() * Pi).array().abs() > kReversibleTol).any())
        throw ModelError(errc::not_reversible, "chain is not reversible");

    AnalyzedChain out;
    out.spec.h = h;
    out.spec.M = M;
    out.spec.p = p;

    Eigen::VectorXd sq = p.array().sqrt();
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = sq(i) * M(i, j) / sq(j);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success)
        throw ModelError(errc::bad_parameters, "eigendecomposition failed");

    // order with the Perron eigenvalue first, the rest descending
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a) > es.eigenvalues()(b);
    });

    ChainSpectralData sd;
    sd.S = S;
    sd.eigenvalues.resize(n);
    sd.basis.resize(n, n);
    sd.beta.resize(n);
    Eigen::VectorXcd c = sq.cast<Complex>().asDiagonal() * h;
    for (int i = 0; i < n; ++i) {
        sd.eigenvalues(i) = es.eigenvalues()(order[i]);
        sd.basis.col(i) = es.eigenvectors().col(order[i]);
        sd.beta(i) = sd.basis.col(i).cast<Complex>().dot(c);
    }
    out.spectral = sd;
    return out;
}

std::pair<PurePointSpectrum, AcDensity> bernoulli_diffraction(
    const Eigen::VectorXcd& h, const Eigen::VectorXd& p) {
    const int n = static_cast<int>(h.size());
    if (p.size() != n || n < 1)
        throw ModelError(errc::bad_parameters, "h/p length mismatch");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(p(i) > 0.0))
            throw ModelError(errc::bad_parameters, "probabilities must be positive");
        sum += p(i);
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ModelError(errc::bad_parameters, "probabilities must sum to 1");

    Complex mean(0.0, 0.0);
    double mean2 = 0.0;
    for (int i = 0; i < n; ++i) {
        mean += p(i) * h(i);
        mean2 += p(i) * std::norm(h(i));
    }
    const double bragg = std::norm(mean);
    const double flat = mean2 - bragg;

    PurePointSpectrum pp;
    pp.dim = 1;
    pp.peaks.push_back({{0.0, 0.0}, bragg});
    pp.period_lattice.push_back({1.0, 0.0});

    AcDensity ac;
    ac.dim = 1;
    ac.periods.push_back({1.0, 0.0});
    ac.density = [flat](Vec2) { return flat; };
    return {pp, ac};
}

double markov_autocorrelation(const AnalyzedChain& chain, long long m) {
    const auto& sp = chain.spec;
    const long long r = std::llabs(m);
    // <h| Pi M^r |h> evaluated by iterated application of M
    Eigen::VectorXcd v = sp.h;
    for (long long s = 0; s < r; ++s) v = sp.M * v;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < sp.states(); ++i)
        acc += std::conj(sp.h(i)) * sp.p(i) * v(i);
    return acc.real();
}

AcDensity markov_ac_density(const AnalyzedChain& chain) {
    const int n = chain.spec.states();
    std::vector<double> lam(n), b2(n);
    for (int i = 0; i < n; ++i) {
        lam[i] = chain.spectral.eigenvalues(i);
        b2[i] = std::norm(chain.spectral.beta(i));
    }
    AcDensity ac;
    ac.dim = 1;
    ac.periods.push_back({1.0, 0.0});
    ac.density = [lam, b2, n](Vec2 k) {
        const double c = std::cos(kTwoPi * k[0]);
        double f = 0.0;
        for (int j = 1; j < n; ++j)
            f += b2[j] * (1.0 - lam[j] * lam[j]) /
                 (1.0 - 2.0 * c * lam[j] + lam[j] * lam[j]);
        return f;
    };
    return ac;
}

double markov_ac_density_operator(const AnalyzedChain& chain, double k) {
    const int n = chain.spec.states();
    const Eigen::MatrixXd& S = chain.spectral.S;
    Eigen::VectorXd sq = chain.spec.p.array().sqrt();
    Eigen::MatrixXd S0 = sq * sq.transpose();  // projector part
    Eigen::MatrixXd S1 = S - S0;

    const double c = std::cos(kTwoPi * k);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - 2.0 * c * S1 + S1 * S1;
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n) - S1 * S1;
    Eigen::MatrixXd Q = A.fullPivLu().solve(B);

    Eigen::VectorXcd Ph = sq.cast<Complex>().asDiagonal() * chain.spec.h;
    const Complex quad = Ph.dot(Q.cast<Complex>() * Ph);
    return quad.real() - std::norm(chain.spec.mean_h());
}

std::pair<PurePointSpectrum, AcDensity> markov_diffraction(
    const AnalyzedChain& chain) {
    PurePointSpectrum pp;
    pp.dim = 1;
    pp.peaks.push_back({{0.0, 0.0}, std::norm(chain.spec.mean_h())});
    pp.period_lattice.push_back({1.0, 0.0});
    return {pp, markov_ac_density(chain)};
}

WeightedDiracComb sample_chain(const AnalyzedChain& chain, std::size_t length,
                               std::uint64_t seed) {
    if (length < 1)
        throw ModelError(errc::bad_parameters, "chain length must be >= 1");
    const auto& sp = chain.spec;
    const int n = sp.states();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto draw = [&](const double* probs) {
        double u = uni(rng);
        for (int i = 0; i < n - 1; ++i) {
            u -= probs[i];
            if (u < 0.0) return i;
        }
        return n - 1;
    };

    std::vector<double> rows(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rows[i * n + j] = sp.M(i, j);
    std::vector<double> pinit(n);
    for (int i = 0; i < n; ++i) pinit[i] = sp.p(i);

    WeightedDiracComb comb;
    comb.dim = 1;
    comb.window = {1, {0.0, 0.0}, {static_cast<double>(length), 0.0}};
    comb.points.reserve(length);
    comb.weights.reserve(length);

    int state = draw(pinit.data());
    for (std::size_t t = 0; t < length; ++t) {
        comb.points.push_back({static_cast<double>(t), 0.0});
        comb.weights.push_back(sp.h(state));
        state = draw(&rows[static_cast<std::size_t>(state) * n]);
    }
    return comb;
}

}  // namespace rtdiff

#include <doctest.h>

#include <cmath>
#include <random>

#include "rtdiff/chains.hpp"
#include "rtdiff/spectral.hpp"
#include "rtdiff/util.hpp"

using namespace rtdiff;

namespace {

Eigen::VectorXcd strengths(std::initializer_list<double> re) {
    Eigen::VectorXcd h(static_cast<long>(re.size()));
    long i = 0;
    for (double v : re) h(i++) = Complex(v, 0.0);
    return h;
}

Eigen::MatrixXd matrix2(double a, double b, double c, double d) {
    Eigen::MatrixXd M(2, 2);
    M << a, b, c, d;
    return M;
}

AnalyzedChain standard_chain() {
    return analyze_chain(strengths({1.0, 0.0}), matrix2(0.8, 0.2, 0.2, 0.8));
}

// random reversible chain: symmetric positive kernel row-normalized
AnalyzedChain random_reversible(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    Eigen::MatrixXd W(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            W(i, j) = uni(rng);
            W(j, i) = W(i, j);
        }
    // detailed balance holds for M_ij = W_ij / sum_j W_ij with p_i ~ row sums
    Eigen::VectorXd rows = W.rowwise().sum();
    Eigen::MatrixXd M = rows.asDiagonal().inverse() * W;
    Eigen::VectorXcd h(n);
    std::uniform_real_distribution<double> hr(-1.0, 1.0);
    for (int i = 0; i < n; ++i) h(i) = Complex(hr(rng), hr(rng));
    // pairwise distinct with probability one
    return analyze_chain(h, M);
}

}  // namespace

TEST_CASE("uniform transition matrix reduces to Bernoulli") {
    const auto chain =
        analyze_chain(strengths({1.0, 0.0}), matrix2(0.5, 0.5, 0.5, 0.5));
    CHECK(chain.spec.p(0) == doctest::Approx(0.5));
    CHECK(chain.spec.p(1) == doctest::Approx(0.5));
    CHECK(chain.spectral.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(chain.spectral.eigenvalues(1) == doctest::Approx(0.0).epsilon(1e-12));
    // S1 = 0: the density is the Bernoulli constant
    const auto f = markov_ac_density(chain);
    CHECK(f(0.3) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(f(0.9) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("standard two-state chain spectral data") {
    const auto chain = standard_chain();
    CHECK(chain.spec.p(0) == doctest::Approx(0.5));
    CHECK(chain.spectral.eigenvalues(1) == doctest::Approx(0.6));
    CHECK(std::norm(chain.spectral.beta(0)) == doctest::Approx(0.25));
    // |beta_1|^2 = |<h>|^2
    CHECK(std::norm(chain.spectral.beta(0)) ==
          doctest::Approx(std::norm(chain.spec.mean_h())).epsilon(1e-10));
}

TEST_CASE("non-primitive and non-reversible chains are rejected") {
    CHECK_THROWS_WITH_AS(
        analyze_chain(strengths({1.0, 0.0}), matrix2(1.0, 0.0, 0.0, 1.0)),
        doctest::Contains("primitive"), ModelError);

    // rows sum to 1, strictly positive, but detailed balance fails
    Eigen::MatrixXd M(3, 3);
    M << 0.2, 0.5, 0.3, 0.3, 0.2, 0.5, 0.5, 0.3, 0.2;
    Eigen::VectorXcd h = strengths({1.0, 2.0, 3.0});
    try {
        analyze_chain(h, M);
        FAIL("expected rejection");
    } catch (const ModelError& e) {
        CHECK(e.code() == errc::not_reversible);
    }

    CHECK_THROWS_AS(
        analyze_chain(strengths({1.0, 0.0}), matrix2(0.6, 0.5, 0.5, 0.5)),
        ModelError);
}

TEST_CASE("Bernoulli closed form") {
    const auto [pp, ac] = bernoulli_diffraction(
        strengths({1.0, 0.0}), Eigen::Vector2d(0.5, 0.5));
    CHECK(pp.peaks[0].intensity == doctest::Approx(0.25));
    CHECK(ac(0.37) == doctest::Approx(0.25));

    const auto [pp2, ac2] = bernoulli_diffraction(
        strengths({1.0, -1.0}), Eigen::Vector2d(0.5, 0.5));
    CHECK(pp2.peaks[0].intensity == doctest::Approx(0.0));  // extinction
    CHECK(ac2(0.0) == doctest::Approx(1.0));

    Eigen::VectorXcd same(2);
    same << Complex(1.0, 0.0), Complex(1.0, 0.0);
    CHECK_THROWS_AS(bernoulli_diffraction(same, Eigen::Vector2d(0.5, 1.5)),
                    ModelError);
}

TEST_CASE("Markov autocorrelation values and decay") {
    const auto chain = standard_chain();
    CHECK(markov_autocorrelation(chain, 0) == doctest::Approx(0.5));
    CHECK(markov_autocorrelation(chain, 1) == doctest::Approx(0.4));
    CHECK(markov_autocorrelation(chain, -1) == doctest::Approx(0.4));
    // contraction bound: |nu(m) - |<h>|^2| <= |lambda_2|^m ||h||^2
    for (int m : {5, 10, 20, 40}) {
        const double nu = markov_autocorrelation(chain, m);
        CHECK(std::abs(nu - 0.25) <= std::pow(0.6, m) * 1.0 + 1e-12);
        CHECK(nu >= 0.0);
    }
}

TEST_CASE("Markov density closed form and operator form agree") {
    const auto chain = standard_chain();
    const auto f = markov_ac_density(chain);
    CHECK(f(0.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f(0.5) == doctest::Approx(0.0625).epsilon(1e-10));

    for (double k : {0.0, 0.1, 0.25, 0.37, 0.5, 0.83})
        CHECK(f(k) ==
              doctest::Approx(markov_ac_density_operator(chain, k)).epsilon(1e-10));

    // attractive chain (lambda_2 > 0): maximum at integers
    CHECK(f(0.0) > f(0.25));
    CHECK(f(0.25) > f(0.5));

    // repulsive chain: maximum at half-integers
    const auto rep =
        analyze_chain(strengths({1.0, 0.0}), matrix2(0.2, 0.8, 0.8, 0.2));
    const auto g = markov_ac_density(rep);
    CHECK(g(0.5) > g(0.0));
}

TEST_CASE("density nonnegativity and both routes on random reversible chains") {
    for (int trial = 0; trial < 8; ++trial) {
        const auto chain = random_reversible(3 + trial % 3, 100 + trial);
        const auto f = markov_ac_density(chain);
        for (int i = 0; i <= 20; ++i) {
            const double k = i / 20.0;
            const double v = f(k);
            CHECK(v >= -1e-12);
            CHECK(v == doctest::Approx(markov_ac_density_operator(chain, k))
                           .epsilon(1e-10)
                           .scale(1.0));
        }
    }
}

TEST_CASE("Parseval closure by quadrature") {
    // int_0^1 f + |<h>|^2 = nu(0) = <|h|^2> within 1e-8
    for (int trial = 0; trial < 4; ++trial) {
        const auto chain =
            trial == 0 ? standard_chain() : random_reversible(4, 55 + trial);
        const auto f = markov_ac_density(chain);
        // midpoint rule, spectrally accurate for smooth periodic integrands
        const int n = 4096;
        double integral = 0.0;
        for (int i = 0; i < n; ++i) integral += f((i + 0.5) / n);
        integral /= n;
        const double closure = integral + std::norm(chain.spec.mean_h());
        CHECK(closure == doctest::Approx(chain.spec.mean_h2()).epsilon(1e-8));
    }
}

TEST_CASE("sampled chain is deterministic and matches the statistics") {
    const auto chain = standard_chain();
    const auto comb1 = sample_chain(chain, 1000, 42);
    const auto comb2 = sample_chain(chain, 1000, 42);
    REQUIRE(comb1.size() == comb2.size());
    for (std::size_t i = 0; i < comb1.size(); ++i)
        CHECK(comb1.weights[i] == comb2.weights[i]);

    // single site distributed per p: frequency over replicas
    int ones = 0;
    const int reps = 2000;
    for (int s = 0; s < reps; ++s) {
        const auto c = sample_chain(chain, 1, 5000 + s);
        if (std::abs(c.weights[0] - Complex(1.0, 0.0)) < 1e-12) ++ones;
    }
    CHECK(std::abs(ones / static_cast<double>(reps) - 0.5) <
          3.0 * std::sqrt(0.25 / reps));

    // state frequencies and transition counts at length 1e6
    const auto comb = sample_chain(chain, 1000000, 7);
    std::size_t n1 = 0, trans01 = 0, from0 = 0;
    for (std::size_t i = 0; i < comb.size(); ++i) {
        const bool one = std::abs(comb.weights[i] - Complex(1.0, 0.0)) < 1e-12;
        if (one) ++n1;
        if (i + 1 < comb.size() && one) {
            ++from0;
            if (std::abs(comb.weights[i + 1] - Complex(0.0, 0.0)) < 1e-12)
                ++trans01;
        }
    }
    const double freq = n1 / 1e6;
    CHECK(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / 1e6));
    const double t01 = static_cast<double>(trans01) / from0;
    CHECK(std::abs(t01 - 0.2) < 3.0 * std::sqrt(0.2 * 0.8 / from0));
}

TEST_CASE("analytic autocorrelation matches sampled pair correlations") {
    const auto chain = standard_chain();
    std::vector<Vec2> diffs;
    for (int m = 0; m <= 20; ++m) diffs.push_back({static_cast<double>(m), 0.0});

    const int n = 1 << 15;
    std::vector<std::vector<double>> acc(diffs.size());
    const int reps = 24;
    for (int s = 0; s < reps; ++s) {
        const auto comb = sample_chain(chain, n, 300 + s);
        const auto table = empirical_autocorrelation(comb, n / 2.0, diffs);
        for (std::size_t t = 0; t < diffs.size(); ++t)
            acc[t].push_back(table.values[t].real());
    }
    for (std::size_t t = 0; t < diffs.size(); ++t) {
        const auto ms = mean_stddev(acc[t]);
        const double expect =
            markov_autocorrelation(chain, static_cast<long long>(diffs[t][0]));
        CHECK(std::abs(ms.mean - expect) <
              3.5 * standard_error(ms, acc[t].size()) + 1e-4);
    }
}

TEST_CASE("MC periodogram background matches f(k)") {
    const auto chain = standard_chain();
    const auto f = markov_ac_density(chain);

    const int n = 1 << 16;
    std::vector<IntensityGrid> reps;
    for (int s = 0; s < 16; ++s)
        reps.push_back(
            periodogram_fft(sample_chain(chain, n, 9000 + s), {1.0, 0.0}));
    const auto avg = average_grids(reps);

    GridSpec centers{1, {0.5 / 32.0, 0.0}, {1.0 / 32.0, 0.0}, {32, 1}};
    const auto binned = bin_average(avg, centers, 0.5 / 32.0, {{0.0, 0.0}}, 1e-9);
    const auto rep = compare_density(binned, f);
    CHECK(rep.mean_rel_dev < 0.05);
}

#include <cmath>
#include <random>

#include "rtdiff/dimer.hpp"

namespace rtdiff {

namespace {

// partner directions for the domino configuration
enum : std::uint8_t { DIR_R = 0, DIR_L = 1, DIR_U = 2, DIR_D = 3 };

inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }

void check_torus(int m, int n) {
    if (m < 2 || n < 2 || (m % 2) || (n % 2))
        throw ModelError(errc::bad_parameters,
                         "torus dimensions must be even and >= 2");
}

long long default_burnin(int m, int n) {
    return static_cast<long long>(
        std::ceil(20.0 * std::log(static_cast<double>(m) * n)));
}

}  // namespace

std::array<std::size_t, 3> DimerConfiguration::counts() const {
    std::array<std::size_t, 3> c{0, 0, 0};
    if (kind == Kind::domino) {
        for (std::uint8_t d : partner) {
            if (d == DIR_R) ++c[0];
            if (d == DIR_U) ++c[1];
        }
    } else {
        for (std::uint8_t t : partner) ++c[t - 1];
    }
    return c;
}

void DimerConfiguration::check_matching() const {
    if (kind == Kind::domino) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i) {
                const std::uint8_t d = partner[static_cast<std::size_t>(j) * m + i];
                int pi = i, pj = j;
                std::uint8_t back = 0;
                switch (d) {
                    case DIR_R: pi = wrap(i + 1, m); back = DIR_L; break;
                    case DIR_L: pi = wrap(i - 1, m); back = DIR_R; break;
                    case DIR_U: pj = wrap(j + 1, n); back = DIR_D; break;
                    case DIR_D: pj = wrap(j - 1, n); back = DIR_U; break;
                    default:
                        throw ModelError(errc::bad_parameters, "bad direction");
                }
                if (partner[static_cast<std::size_t>(pj) * m + pi] != back)
                    throw ModelError(errc::bad_parameters,
                                     "matching invariant violated");
            }
    } else {
        // every R_c claimed exactly once: by match[c]=3, match[c+e1]=1 or
        // match[c+e2]=2
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < m; ++x) {
                int claims = 0;
                if (partner[static_cast<std::size_t>(y) * m + x] == 3) ++claims;
                if (partner[static_cast<std::size_t>(y) * m + wrap(x + 1, m)] == 1)
                    ++claims;
                if (partner[static_cast<std::size_t>(wrap(y + 1, n)) * m + x] == 2)
                    ++claims;
                if (claims != 1)
                    throw ModelError(errc::bad_parameters,
                                     "matching invariant violated");
            }
    }
}

WeightedDiracComb DimerConfiguration::scatterers() const {
    WeightedDiracComb comb;
    comb.dim = 2;
    comb.window = {2, {0.0, 0.0}, {static_cast<double>(m), static_cast<double>(n)}};
    if (kind == Kind::domino) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i) {
                const std::uint8_t d = partner[static_cast<std::size_t>(j) * m + i];
                if (d == DIR_R) comb.points.push_back({i + 0.5, static_cast<double>(j)});
                if (d == DIR_U) comb.points.push_back({static_cast<double>(i), j + 0.5});
            }
    } else {
        // lattice-coordinate Kagome positions: type 1 -> c + (0, 1/2),
        // type 2 -> c + (1/2, 0), type 3 -> c + (1/2, 1/2)
        static constexpr double off[4][2] = {
            {0, 0}, {0.0, 0.5}, {0.5, 0.0}, {0.5, 0.5}};
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < m; ++x) {
                const std::uint8_t t = partner[static_cast<std::size_t>(y) * m + x];
                comb.points.push_back({x + off[t][0], y + off[t][1]});
            }
    }
    comb.weights.assign(comb.points.size(), Complex(1.0, 0.0));
    return comb;
}

DimerConfiguration sample_domino_mcmc(const DominoModel& model, int m, int n,
                                      long long sweeps, std::uint64_t seed,
                                      long long burnin_sweeps) {
    check_torus(m, n);
    if (burnin_sweeps < 0) burnin_sweeps = default_burnin(m, n);

    DimerConfiguration cfg;
    cfg.kind = DimerConfiguration::Kind::domino;
    cfg.m = m;
    cfg.n = n;
    cfg.partner.assign(static_cast<std::size_t>(m) * n, DIR_R);
    // brick initial state: (2t, j)-(2t+1, j)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; i += 2) {
            cfg.partner[static_cast<std::size_t>(j) * m + i] = DIR_R;
            cfg.partner[static_cast<std::size_t>(j) * m + i + 1] = DIR_L;
        }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double p_hv =
        std::min(1.0, (model.z2 * model.z2) / (model.z1 * model.z1));
    const double p_vh =
        std::min(1.0, (model.z1 * model.z1) / (model.z2 * model.z2));

    auto* a = cfg.partner.data();
    const long long proposals = (burnin_sweeps + sweeps) *
                                static_cast<long long>(m) *
                                static_cast<long long>(n);
    std::uniform_int_distribution<int> ri(0, m - 1), rj(0, n - 1);
    for (long long t = 0; t < proposals; ++t) {
        const int i = ri(rng);
        const int j = rj(rng);
        const int i1 = wrap(i + 1, m);
        const int j1 = wrap(j + 1, n);
        const std::size_t s00 = static_cast<std::size_t>(j) * m + i;
        const std::size_t s10 = static_cast<std::size_t>(j) * m + i1;
        const std::size_t s01 = static_cast<std::size_t>(j1) * m + i;
        const std::size_t s11 = static_cast<std::size_t>(j1) * m + i1;
        if (a[s00] == DIR_R && a[s01] == DIR_R) {
            // two horizontal dominoes -> rotate to vertical
            if (p_hv >= 1.0 || uni(rng) < p_hv) {
                a[s00] = DIR_U;
                a[s01] = DIR_D;
                a[s10] = DIR_U;
                a[s11] = DIR_D;
            }
        } else if (a[s00] == DIR_U && a[s10] == DIR_U) {
            if (p_vh >= 1.0 || uni(rng) < p_vh) {
                a[s00] = DIR_R;
                a[s10] = DIR_L;
                a[s01] = DIR_R;
                a[s11] = DIR_L;
            }
        }
    }
    return cfg;
}

DimerConfiguration lozenge_initial(int m, int n, double rho1, double rho2) {
    check_torus(m, n);
    // staircase sector: k2 vertical paths (type-2 per row), equally spaced
    // with gap g = m/k2, all shifted right S = k1*g steps over one wrap
    int k2 = static_cast<int>(std::llround(rho2 * m));
    while (k2 > 0 && (m % k2)) --k2;  // nearest divisor from below
    const int g = k2 > 0 ? m / k2 : m;
    if (k2 > 0 && g < 3)
        throw ModelError(errc::bad_parameters,
                         "type-2 density too high for the staircase sector");
    const int k1 = static_cast<int>(std::llround(rho1 * n));
    const long long S = static_cast<long long>(k1) * g;
    if (k2 == 0 && k1 > 0)
        throw ModelError(errc::bad_parameters,
                         "staircase sector needs a type-2 carrier path");
    if (k2 > 0 && S > static_cast<long long>(n) * (g - 1))
        throw ModelError(errc::bad_parameters,
                         "type-1 density too high for the staircase sector");

    DimerConfiguration cfg;
    cfg.kind = DimerConfiguration::Kind::lozenge;
    cfg.m = m;
    cfg.n = n;
    cfg.partner.assign(static_cast<std::size_t>(m) * n, 3);
    if (k2 == 0) return cfg;  // all type 3

    // common Bresenham shift schedule keeps the paths parallel: row y holds
    // type-2 at each path position and type-1 on the cells swept while the
    // path moves toward its row-(y+1) position
    std::vector<int> pos(k2);
    for (int j = 0; j < k2; ++j) pos[j] = j * g;
    for (int y = 0; y < n; ++y) {
        const int shift =
            static_cast<int>((static_cast<long long>(y + 1) * S) / n -
                             (static_cast<long long>(y) * S) / n);
        for (int j = 0; j < k2; ++j) {
            cfg.partner[static_cast<std::size_t>(y) * m + pos[j]] = 2;
            for (int s = 1; s <= shift; ++s)
                cfg.partner[static_cast<std::size_t>(y) * m +
                            wrap(pos[j] + s, m)] = 1;
            pos[j] = wrap(pos[j] + shift, m);
        }
    }
    cfg.check_matching();
    return cfg;
}

DimerConfiguration sample_lozenge_mcmc(const LozengeModel& model, int m, int n,
                                       long long sweeps, std::uint64_t seed,
                                       long long burnin_sweeps) {
    check_torus(m, n);
    if (burnin_sweeps < 0) burnin_sweeps = default_burnin(m, n);

    DimerConfiguration cfg = lozenge_initial(m, n, model.rho[0], model.rho[1]);
    auto* a = cfg.partner.data();

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ri(0, m - 1), rj(0, n - 1);
    // hexagon rotations conserve the orientation counts, so the activity
    // ratio of a flip is exactly 1 and every proposal is accepted
    const long long proposals = (burnin_sweeps + sweeps) *
                                static_cast<long long>(m) *
                                static_cast<long long>(n);
    for (long long t = 0; t < proposals; ++t) {
        const int x = ri(rng);
        const int y = rj(rng);
        const std::size_t c0 = static_cast<std::size_t>(y) * m + x;
        const std::size_t c1 =
            static_cast<std::size_t>(y) * m + wrap(x - 1, m);       // c - e1
        const std::size_t c2 =
            static_cast<std::size_t>(wrap(y - 1, n)) * m + x;       // c - e2
        if (a[c0] == 1 && a[c1] == 2 && a[c2] == 3) {
            a[c0] = 2;
            a[c1] = 3;
            a[c2] = 1;
        } else if (a[c0] == 2 && a[c1] == 3 && a[c2] == 1) {
            a[c0] = 1;
            a[c1] = 2;
            a[c2] = 3;
        }
    }
    return cfg;
}

}  // namespace rtdiff

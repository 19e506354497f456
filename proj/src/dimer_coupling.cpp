#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "rtdiff/dimer.hpp"

namespace rtdiff {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

void check_resolution(int m) {
    if (!power_of_two(m) || m < 256)
        throw ModelError(errc::resolution_too_small,
                         "quadrature resolution must be a power of two >= 256");
}

void check_domino_activities(double z1, double z2) {
    if (!(z1 > 0.0) || !(z2 > 0.0))
        throw ModelError(errc::bad_parameters, "activities must be positive");
}

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss_rule(int n) {
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre P_n(x) and derivative by recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

// Integrate f over [a,b] with composite Gauss-Legendre.
template <typename F>
auto gauss_integrate(F&& f, double a, double b, int panels, int order)
    -> decltype(f(0.0)) {
    const GaussRule& rule = gauss_rule(order);
    decltype(f(0.0)) acc{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int i = 0; i < order; ++i)
            acc += rule.w[i] * f(mid + 0.5 * h * rule.x[i]);
    }
    return acc * (0.5 * h);
}

}  // namespace

// ---------------------------------------------------------------------------
// Domino couplings
// ---------------------------------------------------------------------------

Complex domino_coupling(int x, int y, double z1, double z2, int resolution) {
    check_domino_activities(z1, z2);
    check_resolution(resolution);
    if (((x ^ y) & 1) == 0) return {0.0, 0.0};

    // canonical sign so that [x,y] = -[-x,-y] holds exactly
    if (x < 0 || (x == 0 && y < 0))
        return -domino_coupling(-x, -y, z1, z2, resolution);

    // half-offset midpoint rule on the quarter grid [0,pi]^2
    const int q = resolution / 2;
    double acc = 0.0;
    for (int j1 = 0; j1 < q; ++j1) {
        const double p1 = kPi * (j1 + 0.5) / q;
        const double s1 = std::sin(p1);
        const double kx = (x & 1) ? -z1 * s1 * std::sin(x * p1)
                                  : std::cos(x * p1);
        for (int j2 = 0; j2 < q; ++j2) {
            const double p2 = kPi * (j2 + 0.5) / q;
            const double s2 = std::sin(p2);
            const double den = z1 * z1 * s1 * s1 + z2 * z2 * s2 * s2;
            const double ker = (x & 1) ? kx * std::cos(y * p2)
                                       : -z2 * s2 * std::sin(y * p2) * kx;
            acc += ker / den;
        }
    }
    // (1/2 pi^2) * (pi/q)^2 * sum
    const double val = acc / (2.0 * q * q);
    return (x & 1) ? Complex(val, 0.0) : Complex(0.0, val);
}

Complex domino_coupling_exact(int x, int y, double z1, double z2) {
    check_domino_activities(z1, z2);
    if (((x ^ y) & 1) == 0) return {0.0, 0.0};
    if (x < 0 || (x == 0 && y < 0)) return -domino_coupling_exact(-x, -y, z1, z2);

    // integrate out the odd axis: with c(phi) = 1 + 2 (zb sin(phi)/za)^2 and
    // t = c - sqrt(c^2-1),
    //   [x,y] = -(1/(2 pi za)) int_0^pi cos(ye * phi)
    //            t^{(xo-1)/2} (1-t) / sqrt(c^2-1) dphi
    // where (xo, ye) are the odd/even members of (x, y) and (za, zb) the
    // matching activities.
    const bool x_odd = (x & 1) != 0;
    const int xo = x_odd ? std::abs(x) : std::abs(y);
    const int ye = x_odd ? std::abs(y) : std::abs(x);
    const double za = x_odd ? z1 : z2;
    const double zb = x_odd ? z2 : z1;

    auto f = [&](double phi) {
        // stable forms: t = (sqrt(1+a^2) - a)^2, (1-t)/sqrt(c^2-1) = 1 - a/sqrt(1+a^2)
        const double a = zb * std::sin(phi) / za;
        const double r = std::sqrt(1.0 + a * a);
        const double t = (r - a) * (r - a);
        const double ratio = 1.0 - a / r;
        return std::cos(ye * phi) * std::pow(t, (xo - 1) / 2) * ratio;
    };
    const int panels = 8 + (xo + ye) / 2;
    const double integral = gauss_integrate(f, 0.0, kPi, panels, 24);
    const double val = -integral / (kTwoPi * za);

    const double sx = x_odd ? (x > 0 ? 1.0 : -1.0) : (y > 0 ? 1.0 : -1.0);
    return x_odd ? Complex(sx * val, 0.0) : Complex(0.0, sx * val);
}

Complex domino_coupling_asymptotic(int x, int y, double z1, double z2) {
    const double den = kPi * ((z2 * x) * (z2 * x) + (z1 * y) * (z1 * y));
    if ((x & 1) != 0 && (y & 1) == 0) return {-z2 * x / den, 0.0};
    if ((y & 1) != 0 && (x & 1) == 0) return {0.0, -z1 * y / den};
    return {0.0, 0.0};
}

CouplingTable domino_coupling_table(double z1, double z2, int resolution,
                                    int radius) {
    check_domino_activities(z1, z2);
    check_resolution(resolution);
    if (radius < 1 || 2 * radius >= resolution / 2)
        throw ModelError(errc::bad_parameters, "table radius out of range");

    const int M = resolution;
    std::vector<Complex> field(static_cast<std::size_t>(M) * M);
    for (int j1 = 0; j1 < M; ++j1) {
        const double p1 = kTwoPi * (j1 + 0.5) / M;
        const Complex a(0.0, 2.0 * z1 * std::sin(p1));
        for (int j2 = 0; j2 < M; ++j2) {
            const double p2 = kTwoPi * (j2 + 0.5) / M;
            // lambda = 2i z1 sin(p1) - 2 z2 sin(p2)
            field[static_cast<std::size_t>(j1) * M + j2] =
                1.0 / (a - 2.0 * z2 * std::sin(p2));
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan = fftw_plan_dft_2d(
            M, M, reinterpret_cast<fftw_complex*>(field.data()),
            reinterpret_cast<fftw_complex*>(field.data()), FFTW_FORWARD,
            FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    CouplingTable table;
    table.model = CouplingTable::Model::domino;
    table.z = {z1, z2, 0.0};
    table.radius = radius;
    table.resolution = M;
    const int W = 2 * radius + 1;
    table.values.assign(static_cast<std::size_t>(W) * W, Complex(0.0, 0.0));

    auto fetch = [&](int x, int y) {
        const int jx = ((x % M) + M) % M;
        const int jy = ((y % M) + M) % M;
        const Complex raw = field[static_cast<std::size_t>(jx) * M + jy] /
                            static_cast<double>(M) / static_cast<double>(M);
        // half-offset phase e^{-i pi (x+y)/M}
        return raw * std::polar(1.0, -kPi * (x + y) / M);
    };

    for (int x = -radius; x <= radius; ++x) {
        for (int y = -radius; y <= radius; ++y) {
            if (((x ^ y) & 1) == 0) continue;           // parity zero
            if (x < 0 || (x == 0 && y < 0)) continue;   // filled by mirror
            const Complex raw = fetch(x, y);
            const Complex val = (x & 1) ? Complex(raw.real(), 0.0)
                                        : Complex(0.0, raw.imag());
            table.values[static_cast<std::size_t>(x + radius) * W + (y + radius)] = val;
            if (-x >= -radius && -x <= radius)
                table.values[static_cast<std::size_t>(-x + radius) * W +
                             (-y + radius)] = -val;
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Lozenge couplings
// ---------------------------------------------------------------------------

namespace {

void check_lozenge_activities(const std::array<double, 3>& z) {
    for (double zi : z)
        if (!(zi > 0.0))
            throw ModelError(errc::bad_parameters, "activities must be positive");
    for (int i = 0; i < 3; ++i) {
        const double zj = z[(i + 1) % 3], zk = z[(i + 2) % 3];
        if (!(z[i] > std::abs(zj - zk)))
            throw ModelError(errc::kasteleyn_boundary,
                             "activities violate the strict triangle condition");
    }
}

}  // namespace

LozengeModel make_lozenge(double z1, double z2, double z3) {
    std::array<double, 3> z{z1, z2, z3};
    check_lozenge_activities(z);
    LozengeModel model;
    model.z = z;
    model.phi0 = std::acos((z1 * z1 - z2 * z2 - z3 * z3) / (2.0 * z2 * z3));
    model.rho = lozenge_densities(z);
    return model;
}

DominoModel make_domino(double z1, double z2) {
    check_domino_activities(z1, z2);
    DominoModel model;
    model.z1 = z1;
    model.z2 = z2;
    const auto rho = domino_densities(z1, z2);
    model.rho1 = rho[0];
    model.rho2 = rho[1];
    return model;
}

SymImage lozenge_symmetry_image(int x, int y, const std::array<double, 3>& z,
                                int which) {
    const int s = -x - y - 1;
    switch (which) {
        case 0: return {x, y, {z[0], z[1], z[2]}};
        case 1: return {x, s, {z[0], z[2], z[1]}};
        case 2: return {y, x, {z[1], z[0], z[2]}};
        case 3: return {y, s, {z[1], z[2], z[0]}};
        case 4: return {s, x, {z[2], z[0], z[1]}};
        case 5: return {s, y, {z[2], z[1], z[0]}};
        default:
            throw ModelError(errc::bad_parameters, "symmetry index out of range");
    }
}

double lozenge_coupling_single(int x, int y, const std::array<double, 3>& z) {
    check_lozenge_activities(z);
    if (x > -1)
        throw ModelError(errc::bad_parameters,
                         "single-integral form requires x <= -1");

    const double phi0 =
        std::acos((z[0] * z[0] - z[1] * z[1] - z[2] * z[2]) / (2.0 * z[1] * z[2]));
    const int n = -x - 1;

    auto f = [&](double theta) -> Complex {
        const Complex base(z[1] + z[2] * std::cos(theta), z[2] * std::sin(theta));
        Complex p(1.0, 0.0);
        Complex b = base;
        int e = n;
        while (e > 0) {  // pow by squaring
            if (e & 1) p *= b;
            b *= b;
            e >>= 1;
        }
        return std::polar(1.0, -static_cast<double>(y) * theta) * p;
    };
    const int panels = 8 + (std::abs(y) + n) / 2;
    const Complex integral = gauss_integrate(f, phi0, kTwoPi - phi0, panels, 24);

    // -(1/2pi) (-z1)^x * integral, with x <= -1
    const double mag = std::pow(z[0], x);  // z1^x, x negative
    const double sign = (x % 2 == 0) ? 1.0 : -1.0;
    return -(sign * mag) * integral.real() / kTwoPi;
}

double lozenge_coupling(int x, int y, const std::array<double, 3>& z) {
    check_lozenge_activities(z);
    if (x <= -1) return lozenge_coupling_single(x, y, z);
    if (y <= -1) {
        const SymImage im = lozenge_symmetry_image(x, y, z, 2);  // (y, x)
        return lozenge_coupling_single(im.x, im.y, im.z);
    }
    const SymImage im = lozenge_symmetry_image(x, y, z, 4);  // (-x-y-1, x)
    return lozenge_coupling_single(im.x, im.y, im.z);
}

double lozenge_coupling_torus(int x, int y, const std::array<double, 3>& z,
                              int resolution) {
    check_lozenge_activities(z);
    check_resolution(resolution);
    const int M = resolution;
    Complex acc(0.0, 0.0);
    for (int j1 = 0; j1 < M; ++j1) {
        const double p1 = kTwoPi * (j1 + 0.5) / M;
        const Complex t1 = z[0] * std::polar(1.0, -p1);
        for (int j2 = 0; j2 < M; ++j2) {
            const double p2 = kTwoPi * (j2 + 0.5) / M;
            const Complex den = t1 + z[1] * std::polar(1.0, -p2) + z[2];
            acc += std::polar(1.0, p1 * x + p2 * y) / den;
        }
    }
    return (acc / static_cast<double>(M) / static_cast<double>(M)).real();
}

CouplingTable lozenge_coupling_table(const std::array<double, 3>& z, int radius) {
    check_lozenge_activities(z);
    if (radius < 1)
        throw ModelError(errc::bad_parameters, "table radius out of range");
    CouplingTable table;
    table.model = CouplingTable::Model::lozenge;
    table.z = z;
    table.radius = radius;
    table.resolution = 0;
    const int W = 2 * radius + 1;
    table.values.resize(static_cast<std::size_t>(W) * W);
    for (int x = -radius; x <= radius; ++x)
        for (int y = -radius; y <= radius; ++y)
            table.values[static_cast<std::size_t>(x + radius) * W + (y + radius)] =
                Complex(lozenge_coupling(x, y, z), 0.0);
    return table;
}

}  // namespace rtdiff

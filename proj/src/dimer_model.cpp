#include <cmath>

#include "rtdiff/dimer.hpp"

namespace rtdiff {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLatticeDensity = 1.1547005383792515;  // 2/sqrt(3)

// lozenge R-site cell offsets d_i (type i pairs L_c with R_{c - d_i})
constexpr int kD[4][2] = {{0, 0}, {1, 0}, {0, 1}, {0, 0}};  // index 1..3
// scatterer offsets per type, lattice coordinates
constexpr double kSigma[4][2] = {{0, 0}, {0.0, 0.5}, {0.5, 0.0}, {0.5, 0.5}};
}  // namespace

std::array<double, 2> domino_densities(double z1, double z2) {
    const double p1 = 2.0 * z1 * std::abs(domino_coupling_exact(1, 0, z1, z2));
    const double p2 = 2.0 * z2 * std::abs(domino_coupling_exact(0, 1, z1, z2));
    const double s = p1 + p2;
    return {p1 / s, p2 / s};
}

std::array<double, 3> lozenge_densities(const std::array<double, 3>& z) {
    std::array<double, 3> rho{};
    rho[0] = z[0] * std::abs(lozenge_coupling(-1, 0, z));
    rho[1] = z[1] * std::abs(lozenge_coupling(0, -1, z));
    rho[2] = z[2] * std::abs(lozenge_coupling(0, 0, z));
    const double s = rho[0] + rho[1] + rho[2];
    for (auto& r : rho) r /= s;
    return rho;
}

JointOccupation domino_joint(const DominoModel& model, const CouplingTable& t,
                             int alpha, int beta, int x, int y) {
    if (t.model != CouplingTable::Model::domino)
        throw ModelError(errc::bad_parameters, "domino table required");
    if ((alpha != 1 && alpha != 2) || (beta != 1 && beta != 2))
        throw ModelError(errc::bad_parameters, "orientations are 1 or 2");

    const double r1 = model.rho1, r2 = model.rho2;
    JointOccupation out;

    if (alpha == beta && x == 0 && y == 0) {
        const double rho = (alpha == 1) ? r1 : r2;
        out.probability = rho / 2.0;             // a bond jointly with itself
        out.connected = rho / 2.0 - rho * rho / 4.0;
        return out;
    }

    if (alpha == 2 && beta == 1) {
        // P_21(r) = P_12(-r) by translating the pair
        JointOccupation sw = domino_joint(model, t, 1, 2, -x, -y);
        return sw;
    }

    if (alpha == 1 && beta == 1) {
        const Complex c =
            t.at(x, y) * t.at(x, y) - t.at(x - 1, y) * t.at(x + 1, y);
        out.connected = -(model.z1 * model.z1) * c.real();
        out.probability = r1 * r1 / 4.0 + out.connected;
    } else if (alpha == 2 && beta == 2) {
        const Complex c =
            t.at(x, y) * t.at(x, y) - t.at(x, y + 1) * t.at(x, y - 1);
        out.connected = (model.z2 * model.z2) * c.real();
        out.probability = r2 * r2 / 4.0 + out.connected;
    } else {  // (1,2): horizontal at k, vertical at k + (x,y)
        const Complex c = t.at(x, y) * t.at(x - 1, y + 1) -
                          t.at(x, y + 1) * t.at(x - 1, y);
        // -i z1 z2 (...): the bracket is purely imaginary by parity
        out.connected = model.z1 * model.z2 * c.imag();
        out.probability = r1 * r2 / 4.0 + out.connected;
    }
    return out;
}

JointOccupation lozenge_joint(const LozengeModel& model, const CouplingTable& t,
                              int alpha, int beta, int x, int y) {
    if (t.model != CouplingTable::Model::lozenge)
        throw ModelError(errc::bad_parameters, "lozenge table required");
    if (alpha < 1 || alpha > 3 || beta < 1 || beta > 3)
        throw ModelError(errc::bad_parameters, "orientations are 1..3");

    JointOccupation out;
    if (alpha == beta && x == 0 && y == 0) {
        const double rho = model.rho[alpha - 1];
        out.probability = rho;
        out.connected = rho - rho * rho;
        return out;
    }
    // P_ij(D) = rho_i rho_j - z_i z_j [D - d_j] [-D - d_i]
    const int dxj = kD[beta][0], dyj = kD[beta][1];
    const int dxi = kD[alpha][0], dyi = kD[alpha][1];
    const double a = t.at(x - dxj, y - dyj).real();
    const double b = t.at(-x - dxi, -y - dyi).real();
    out.connected = -model.z[alpha - 1] * model.z[beta - 1] * a * b;
    out.probability =
        model.rho[alpha - 1] * model.rho[beta - 1] + out.connected;
    return out;
}

PurePointSpectrum domino_pp(double rho1, double rho2, double kmax, Complex h1,
                            Complex h2) {
    if (rho1 < 0.0 || rho2 < 0.0 || std::abs(rho1 + rho2 - 1.0) > 1e-9)
        throw ModelError(errc::bad_parameters, "densities must sum to 1");

    PurePointSpectrum pp;
    pp.dim = 2;
    const long long n = static_cast<long long>(std::floor(kmax));

    if (rho1 == 0.0 || rho2 == 0.0) {
        // single orientation: exact rectangular-lattice comb, dens = 1/2,
        // peaks 1/4 on the dual lattice
        const bool horizontal = rho2 == 0.0;
        const double sx = horizontal ? 0.5 : 1.0;
        const double sy = horizontal ? 1.0 : 0.5;
        pp.period_lattice = {{sx, 0.0}, {0.0, sy}};
        const double w = 0.25 * std::norm(horizontal ? h1 : h2);
        for (double kx = -std::floor(kmax / sx) * sx; kx <= kmax + 1e-12;
             kx += sx)
            for (double ky = -std::floor(kmax / sy) * sy; ky <= kmax + 1e-12;
                 ky += sy)
                pp.peaks.push_back({{kx, ky}, w});
        return pp;
    }

    pp.period_lattice = {{1.0, 1.0}, {1.0, -1.0}};  // h+k even
    for (long long h = -n; h <= n; ++h)
        for (long long k = -n; k <= n; ++k) {
            const double sign = ((h + k) % 2 == 0) ? 1.0 : -1.0;
            const double inten = 0.25 * std::norm(rho1 * h1 + sign * rho2 * h2);
            pp.peaks.push_back(
                {{static_cast<double>(h), static_cast<double>(k)}, inten});
        }
    return pp;
}

PurePointSpectrum lozenge_pp(const std::array<double, 3>& rho, int hkmax) {
    double s = 0.0;
    for (double r : rho) {
        if (!(r > 0.0))
            throw ModelError(errc::kasteleyn_boundary,
                             "degenerate density (Kasteleyn transition)");
        s += r;
    }
    if (std::abs(s - 1.0) > 1e-9)
        throw ModelError(errc::bad_parameters, "densities must sum to 1");

    const Vec2 b1 = lozenge_dual_basis(0);
    const Vec2 b2 = lozenge_dual_basis(1);

    PurePointSpectrum pp;
    pp.dim = 2;
    pp.period_lattice = {2.0 * b1, 2.0 * b2};
    for (int h = -hkmax; h <= hkmax; ++h)
        for (int k = -hkmax; k <= hkmax; ++k) {
            const double amp = ((h & 1) ? -rho[0] : rho[0]) +
                               ((k & 1) ? -rho[1] : rho[1]) + rho[2];
            pp.peaks.push_back({static_cast<double>(h) * b1 +
                                    static_cast<double>(k) * b2,
                                (4.0 / 3.0) * amp * amp});
        }
    return pp;
}

namespace {

// decay-constant fit |c(r)| <= C (x^2+y^2+1)^{-2} from the outer shells,
// plus the discrete tail mass beyond the truncation radius
double tail_bound_from(const std::vector<double>& cmag,
                       const std::vector<std::array<int, 2>>& coords, int rc) {
    double C = 0.0;
    for (std::size_t i = 0; i < cmag.size(); ++i) {
        const int ax = std::abs(coords[i][0]), ay = std::abs(coords[i][1]);
        if (std::max(ax, ay) < rc - 4) continue;
        const double w = coords[i][0] * coords[i][0] +
                         coords[i][1] * coords[i][1] + 1.0;
        C = std::max(C, cmag[i] * w * w);
    }
    double tail = 0.0;
    for (int x = -8 * rc; x <= 8 * rc; ++x)
        for (int y = -8 * rc; y <= 8 * rc; ++y) {
            if (std::max(std::abs(x), std::abs(y)) <= rc) continue;
            const double w = static_cast<double>(x) * x + static_cast<double>(y) * y + 1.0;
            tail += 1.0 / (w * w);
        }
    tail += 4.0 / (8.0 * rc);  // integral bound beyond the summed window
    return C * tail;
}

}  // namespace

DiffuseDensity domino_diffuse(const DominoModel& model, const CouplingTable& t,
                              int truncation) {
    if (t.model != CouplingTable::Model::domino)
        throw ModelError(errc::bad_parameters, "domino table required");
    if (truncation + 2 > t.radius)
        throw ModelError(errc::table_too_small,
                         "coupling table smaller than the truncation radius");

    const int rc = truncation;
    // integer-offset masses (same-orientation pairs) and half-offset masses
    std::vector<std::array<int, 2>> coords;
    std::vector<double> c_same, c_cross;
    std::vector<double> mags;
    for (int x = -rc; x <= rc; ++x)
        for (int y = -rc; y <= rc; ++y) {
            const double a =
                domino_joint(model, t, 1, 1, x, y).connected +
                domino_joint(model, t, 2, 2, x, y).connected;
            // scatterer displacement (x,y) + (-1/2, 1/2): P_12(x,y) plus the
            // reversed-order pair P_21 at the same displacement
            const double b =
                domino_joint(model, t, 1, 2, x, y).connected +
                domino_joint(model, t, 1, 2, 1 - x, -1 - y).connected;
            coords.push_back({x, y});
            c_same.push_back(a);
            c_cross.push_back(b);
            mags.push_back(std::max(std::abs(a), std::abs(b)));
        }

    DiffuseDensity out;
    out.tail_bound = tail_bound_from(mags, coords, rc);
    out.density.dim = 2;
    out.density.periods = {{1.0, 1.0}, {1.0, -1.0}};
    auto coords_copy = coords;
    auto same = c_same;
    auto cross = c_cross;
    out.density.density = [coords_copy, same, cross](Vec2 k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < coords_copy.size(); ++i) {
            const double ph =
                kTwoPi * (k[0] * coords_copy[i][0] + k[1] * coords_copy[i][1]);
            acc += same[i] * std::cos(ph);
            // half-offset phase for the cross masses at r + (-1/2, 1/2)
            const double ph2 = ph + kTwoPi * 0.5 * (k[1] - k[0]);
            acc += cross[i] * std::cos(ph2);
        }
        return acc;
    };
    return out;
}

DiffuseDensity lozenge_diffuse(const LozengeModel& model, const CouplingTable& t,
                               int truncation) {
    if (t.model != CouplingTable::Model::lozenge)
        throw ModelError(errc::bad_parameters, "lozenge table required");
    if (truncation + 2 > t.radius)
        throw ModelError(errc::table_too_small,
                         "coupling table smaller than the truncation radius");

    const int rc = truncation;
    struct Mass {
        double dx, dy;  // lattice-coordinate displacement
        double c;
    };
    std::vector<Mass> masses;
    std::vector<std::array<int, 2>> coords;
    std::vector<double> mags;
    for (int x = -rc; x <= rc; ++x)
        for (int y = -rc; y <= rc; ++y) {
            double mag = 0.0;
            for (int i = 1; i <= 3; ++i)
                for (int j = 1; j <= 3; ++j) {
                    const double c =
                        lozenge_joint(model, t, i, j, x, y).connected;
                    masses.push_back({x + kSigma[j][0] - kSigma[i][0],
                                      y + kSigma[j][1] - kSigma[i][1], c});
                    mag = std::max(mag, std::abs(c));
                }
            coords.push_back({x, y});
            mags.push_back(mag);
        }

    DiffuseDensity out;
    out.tail_bound = 9.0 * tail_bound_from(mags, coords, rc);
    out.density.dim = 2;
    out.density.periods = {2.0 * lozenge_dual_basis(0), 2.0 * lozenge_dual_basis(1)};
    const Vec2 a1 = lozenge_basis(0), a2 = lozenge_basis(1);
    out.density.density = [masses, a1, a2](Vec2 k) {
        // dual coordinates of k recover integer phases on Gamma
        const double k1 = dot(k, a1);
        const double k2 = dot(k, a2);
        double acc = 0.0;
        for (const auto& m : masses)
            acc += m.c * std::cos(kTwoPi * (k1 * m.dx + k2 * m.dy));
        return kLatticeDensity * acc;
    };
    return out;
}

}  // namespace rtdiff

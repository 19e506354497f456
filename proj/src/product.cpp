#include "rtdiff/product.hpp"

#include <cmath>

namespace rtdiff {

void ProductSpec::validate() const {
    if (factors.empty())
        throw ModelError(errc::bad_parameters, "product needs at least one factor");
    for (const auto& f : factors) f.validate();
}

double ProductSpec::density() const {
    double d = 1.0;
    for (const auto& f : factors) d *= rt_density(f);
    return d;
}

double product_autocorr(const ProductSpec& spec,
                        const std::vector<std::vector<int>>& multi_indices) {
    spec.validate();
    if (multi_indices.size() != spec.factors.size())
        throw ModelError(errc::bad_parameters,
                         "one multi-index per factor required");
    double nu = 1.0;
    for (std::size_t i = 0; i < spec.factors.size(); ++i)
        nu *= rt_autocorr_coeff(spec.factors[i], multi_indices[i]);
    return nu;
}

ProductSpectrumDescriptor product_spectrum(const ProductSpec& spec) {
    spec.validate();
    const int D = spec.dimensions();

    ProductSpectrumDescriptor desc;
    desc.spec = spec;
    for (unsigned mask = 0; mask < (1u << D); ++mask) {
        ProductTerm term;
        term.pp_factor.resize(D);
        for (int i = 0; i < D; ++i) {
            const bool pp = (mask >> i) & 1u;
            term.pp_factor[i] = pp;
            if (!pp) ++term.ac_count;
        }
        term.beta = 1.0 - term.ac_count / (2.0 * D);
        if (term.ac_count == 0)
            term.type = SpectralType::pure_point;
        else if (term.ac_count == D)
            term.type = SpectralType::absolutely_continuous;
        else
            term.type = SpectralType::singular_continuous;
        desc.terms.push_back(std::move(term));
    }
    return desc;
}

const ProductTerm& ProductSpectrumDescriptor::all_pp() const {
    for (const auto& t : terms)
        if (t.ac_count == 0) return t;
    throw ModelError(errc::bad_parameters, "descriptor has no all-pp term");
}

const ProductTerm& ProductSpectrumDescriptor::all_ac() const {
    for (const auto& t : terms)
        if (t.ac_count == spec.dimensions()) return t;
    throw ModelError(errc::bad_parameters, "descriptor has no all-ac term");
}

PurePointSpectrum ProductSpectrumDescriptor::pp_peaks(double kmax) const {
    const int D = spec.dimensions();
    if (D > 2)
        throw ModelError(errc::size_cap_exceeded,
                         "peak grids rendered for D <= 2 only");

    std::vector<PurePointSpectrum> fp;
    for (const auto& f : spec.factors) fp.push_back(rt_pp_part(f, kmax));

    PurePointSpectrum pp;
    pp.dim = D;
    if (D == 1) return fp[0];

    for (const auto& p0 : fp[0].peaks)
        for (const auto& p1 : fp[1].peaks)
            pp.peaks.push_back(
                {{p0.k[0], p1.k[0]}, p0.intensity * p1.intensity});
    for (const auto& b : fp[0].period_lattice)
        pp.period_lattice.push_back({b[0], 0.0});
    for (const auto& b : fp[1].period_lattice)
        pp.period_lattice.push_back({0.0, b[0]});
    return pp;
}

AcDensity ProductSpectrumDescriptor::ac_product() const {
    const int D = spec.dimensions();
    if (D > 2)
        throw ModelError(errc::size_cap_exceeded,
                         "density evaluators provided for D <= 2 only");
    std::vector<AcDensity> fd;
    for (const auto& f : spec.factors) fd.push_back(rt_ac_density(f));

    AcDensity ac;
    ac.dim = D;
    for (int i = 0; i < D; ++i)
        for (const auto& per : fd[i].periods) {
            Vec2 b{0.0, 0.0};
            b[i] = per[0];
            ac.periods.push_back(b);
        }
    if (D == 1) {
        ac.density = fd[0].density;
    } else {
        auto d0 = fd[0].density, d1 = fd[1].density;
        ac.density = [d0, d1](Vec2 k) {
            return d0({k[0], 0.0}) * d1({k[1], 0.0});
        };
    }
    return ac;
}

WeightedDiracComb product_sample(const ProductSpec& spec,
                                 const std::array<std::size_t, 2>& tiles,
                                 std::uint64_t seed) {
    spec.validate();
    if (spec.dimensions() != 2)
        throw ModelError(errc::size_cap_exceeded,
                         "grid output is rendered for D = 2 only");

    const WeightedDiracComb s0 = sample_rt(spec.factors[0], tiles[0], seed);
    const WeightedDiracComb s1 = sample_rt(spec.factors[1], tiles[1], seed + 1);

    WeightedDiracComb comb;
    comb.dim = 2;
    comb.window = {2,
                   {0.0, 0.0},
                   {s0.window.extent(0), s1.window.extent(0)}};
    comb.points.reserve(s0.size() * s1.size());
    for (const auto& x : s0.points)
        for (const auto& y : s1.points) comb.points.push_back({x[0], y[0]});
    comb.weights.assign(comb.points.size(), Complex(1.0, 0.0));
    return comb;
}

}  // namespace rtdiff

#include "rtdiff/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rtdiff {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw ModelError(errc::io_failure, "cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_intensity_csv(const IntensityGrid& grid, const std::string& path) {
    std::ofstream out = open_out(path);
    out.precision(12);
    out << (grid.grid.dim == 1 ? "k1,intensity\n" : "k1,k2,intensity\n");
    for (std::size_t f = 0; f < grid.grid.size(); ++f) {
        const Vec2 k = grid.grid.point(f);
        if (grid.grid.dim == 1)
            out << k[0] << ',' << grid.values[f] << '\n';
        else
            out << k[0] << ',' << k[1] << ',' << grid.values[f] << '\n';
    }
}

void write_density_csv(const AcDensity& density, double k_lo, double k_hi,
                       int samples, const std::string& path) {
    if (samples < 2)
        throw ModelError(errc::bad_parameters, "need at least 2 samples");
    std::ofstream out = open_out(path);
    out.precision(12);
    out << "k1,density\n";
    for (int i = 0; i < samples; ++i) {
        const double k = k_lo + (k_hi - k_lo) * i / (samples - 1);
        out << k << ',' << density({k, 0.0}) << '\n';
    }
}

void write_pgm16(const IntensityGrid& grid, const std::string& path) {
    if (grid.grid.dim != 2)
        throw ModelError(errc::bad_parameters, "PGM output needs a 2D grid");
    const int rows = grid.grid.count[0];
    const int cols = grid.grid.count[1];
    double lo = grid.values.empty() ? 0.0 : grid.values[0];
    double hi = lo;
    for (double v : grid.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;

    std::ofstream out = open_out(path, true);
    out << "P5\n" << cols << ' ' << rows << "\n65535\n";
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double v = grid.values[static_cast<std::size_t>(r) * cols + c];
            const unsigned q =
                static_cast<unsigned>(std::lround((v - lo) * scale));
            out.put(static_cast<char>((q >> 8) & 0xff));
            out.put(static_cast<char>(q & 0xff));
        }

    json side;
    side["min_intensity"] = lo;
    side["max_intensity"] = hi;
    side["origin"] = {grid.grid.origin[0], grid.grid.origin[1]};
    side["step"] = {grid.grid.step[0], grid.grid.step[1]};
    side["count"] = {rows, cols};
    side["volume"] = grid.volume;
    side["samples"] = grid.samples;
    open_out(path + ".json") << side.dump(2) << '\n';
}

void write_peaks_json(const PurePointSpectrum& pp, const std::string& path) {
    json j;
    j["dimension"] = pp.dim;
    j["peaks"] = json::array();
    for (const auto& p : pp.peaks) {
        json e;
        e["k"] = pp.dim == 1 ? json::array({p.k[0]}) : json::array({p.k[0], p.k[1]});
        e["intensity"] = p.intensity;
        j["peaks"].push_back(e);
    }
    j["period_lattice"] = json::array();
    for (const auto& b : pp.period_lattice)
        j["period_lattice"].push_back(
            pp.dim == 1 ? json::array({b[0]}) : json::array({b[0], b[1]}));
    open_out(path) << j.dump(2) << '\n';
}

PurePointSpectrum read_peaks_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError(errc::io_failure, "cannot read: " + path);
    json j;
    in >> j;
    PurePointSpectrum pp;
    pp.dim = j.at("dimension").get<int>();
    for (const auto& e : j.at("peaks")) {
        Peak p;
        p.k[0] = e.at("k")[0].get<double>();
        if (pp.dim == 2) p.k[1] = e.at("k")[1].get<double>();
        p.intensity = e.at("intensity").get<double>();
        pp.peaks.push_back(p);
    }
    if (j.contains("period_lattice"))
        for (const auto& b : j["period_lattice"]) {
            Vec2 v{b[0].get<double>(), 0.0};
            if (pp.dim == 2) v[1] = b[1].get<double>();
            pp.period_lattice.push_back(v);
        }
    return pp;
}

void write_comb_csv(const WeightedDiracComb& comb, const std::string& path) {
    std::ofstream out = open_out(path);
    out.precision(12);
    out << (comb.dim == 1 ? "x,w_re,w_im\n" : "x,y,w_re,w_im\n");
    for (std::size_t i = 0; i < comb.points.size(); ++i) {
        if (comb.dim == 1)
            out << comb.points[i][0];
        else
            out << comb.points[i][0] << ',' << comb.points[i][1];
        out << ',' << comb.weights[i].real() << ',' << comb.weights[i].imag()
            << '\n';
    }
}

void save_coupling_table(const CouplingTable& table, const std::string& path) {
    json head;
    head["model"] = table.model == CouplingTable::Model::domino ? "domino"
                                                                : "lozenge";
    head["z"] = {table.z[0], table.z[1], table.z[2]};
    head["radius"] = table.radius;
    head["resolution"] = table.resolution;
    std::ofstream out = open_out(path, true);
    out << head.dump() << '\n';
    out.write(reinterpret_cast<const char*>(table.values.data()),
              static_cast<std::streamsize>(table.values.size() * sizeof(Complex)));
}

CouplingTable load_coupling_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError(errc::io_failure, "cannot read: " + path);
    std::string header;
    std::getline(in, header);
    json head = json::parse(header);
    CouplingTable table;
    table.model = head.at("model") == "domino" ? CouplingTable::Model::domino
                                               : CouplingTable::Model::lozenge;
    table.z = {head.at("z")[0], head.at("z")[1], head.at("z")[2]};
    table.radius = head.at("radius");
    table.resolution = head.at("resolution");
    const int W = 2 * table.radius + 1;
    table.values.resize(static_cast<std::size_t>(W) * W);
    in.read(reinterpret_cast<char*>(table.values.data()),
            static_cast<std::streamsize>(table.values.size() * sizeof(Complex)));
    if (!in) throw ModelError(errc::io_failure, "truncated table: " + path);
    return table;
}

CouplingTable coupling_table_cached(CouplingTable::Model model,
                                    const std::array<double, 3>& z,
                                    int resolution, int radius,
                                    const std::string& cache_dir) {
    std::string path;
    if (!cache_dir.empty()) {
        std::ostringstream name;
        name.precision(10);
        name << (model == CouplingTable::Model::domino ? "domino" : "lozenge")
             << "_z" << z[0] << '_' << z[1] << '_' << z[2] << "_M" << resolution
             << "_R" << radius << ".tab";
        path = (std::filesystem::path(cache_dir) / name.str()).string();
        if (std::filesystem::exists(path)) {
            try {
                return load_coupling_table(path);
            } catch (const ModelError&) {
                // stale or truncated cache entry: rebuild
            }
        }
    }
    CouplingTable table =
        model == CouplingTable::Model::domino
            ? domino_coupling_table(z[0], z[1], resolution, radius)
            : lozenge_coupling_table({z[0], z[1], z[2]}, radius);
    if (!path.empty()) {
        std::filesystem::create_directories(cache_dir);
        save_coupling_table(table, path);
    }
    return table;
}

}  // namespace rtdiff

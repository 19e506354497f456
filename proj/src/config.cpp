#include "rtdiff/config.hpp"

#include <fstream>
#include <sstream>

namespace rtdiff {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ModelError(errc::bad_config,
                                 "malformed section header, line " +
                                     std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ModelError(errc::bad_config,
                             "expected key = value, line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ModelError(errc::bad_config,
                             "empty key, line " + std::to_string(lineno));
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError(errc::io_failure, "cannot read config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

void KeyValueConfig::note(const std::string& section, const std::string& key,
                          const std::string& value, bool from_default) const {
    std::string line = (section.empty() ? key : section + "." + key) + " = " + value;
    if (from_default) line += "  # default";
    resolved_.push_back(line);
}

bool KeyValueConfig::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string KeyValueConfig::get(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
    if (has(section, key)) {
        const std::string v = sections_.at(section).at(key);
        note(section, key, v, false);
        return v;
    }
    note(section, key, fallback, true);
    return fallback;
}

std::string KeyValueConfig::require(const std::string& section,
                                    const std::string& key) const {
    if (!has(section, key))
        throw ModelError(errc::bad_config, "missing required key " +
                                               (section.empty() ? key
                                                                : section + "." + key));
    const std::string v = sections_.at(section).at(key);
    note(section, key, v, false);
    return v;
}

double KeyValueConfig::get_double(const std::string& section,
                                  const std::string& key, double fallback) const {
    if (!has(section, key)) {
        note(section, key, std::to_string(fallback), true);
        return fallback;
    }
    const std::string v = sections_.at(section).at(key);
    note(section, key, v, false);
    return std::stod(v);
}

long long KeyValueConfig::get_int(const std::string& section,
                                  const std::string& key, long long fallback) const {
    if (!has(section, key)) {
        note(section, key, std::to_string(fallback), true);
        return fallback;
    }
    const std::string v = sections_.at(section).at(key);
    note(section, key, v, false);
    return std::stoll(v);
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& section,
                                                const std::string& key) const {
    const std::string v = require(section, key);
    std::istringstream in(v);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (out.empty())
        throw ModelError(errc::bad_config, "no numbers in " + section + "." + key);
    return out;
}

namespace {

Eigen::VectorXcd parse_strengths(const std::vector<double>& re_im) {
    if (re_im.size() % 2)
        throw ModelError(errc::bad_config,
                         "scattering strengths must be re/im pairs");
    Eigen::VectorXcd h(re_im.size() / 2);
    for (std::size_t i = 0; i < re_im.size() / 2; ++i)
        h(static_cast<long>(i)) = Complex(re_im[2 * i], re_im[2 * i + 1]);
    return h;
}

RandomTilingSpec1D parse_rt(const KeyValueConfig& cfg, const std::string& section) {
    RandomTilingSpec1D spec;
    spec.lengths = cfg.get_doubles(section, "lengths");
    spec.probs = cfg.get_doubles(section, "probs");
    if (cfg.has(section, "rational_a")) {
        RationalTags tags;
        for (double a : cfg.get_doubles(section, "rational_a"))
            tags.a.push_back(static_cast<long long>(std::llround(a)));
        tags.xi = cfg.get_double(section, "xi", 1.0);
        spec.rational = tags;
    }
    spec.validate();
    return spec;
}

}  // namespace

RunConfig run_config_from(const KeyValueConfig& cfg) {
    RunConfig rc;
    rc.model_name = cfg.require("", "model");

    if (rc.model_name == "bernoulli") {
        BernoulliConfig b;
        b.h = parse_strengths(cfg.get_doubles("bernoulli", "h"));
        const auto p = cfg.get_doubles("bernoulli", "p");
        b.p = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<long>(p.size()));
        rc.model = b;
    } else if (rc.model_name == "markov") {
        MarkovConfig m;
        m.h = parse_strengths(cfg.get_doubles("markov", "h"));
        const auto flat = cfg.get_doubles("markov", "M");
        const int n = static_cast<int>(m.h.size());
        if (static_cast<int>(flat.size()) != n * n)
            throw ModelError(errc::bad_config, "M must be n x n row-major");
        m.M.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.M(i, j) = flat[i * n + j];
        rc.model = m;
    } else if (rc.model_name == "rt1d") {
        rc.model = parse_rt(cfg, "rt1d");
    } else if (rc.model_name == "product") {
        ProductSpec spec;
        const int d = static_cast<int>(cfg.get_int("product", "dimensions", 2));
        for (int i = 1; i <= d; ++i)
            spec.factors.push_back(parse_rt(cfg, "factor" + std::to_string(i)));
        spec.validate();
        rc.model = spec;
    } else if (rc.model_name == "domino") {
        DominoConfig d;
        d.z1 = cfg.get_double("domino", "z1", 1.0);
        d.z2 = cfg.get_double("domino", "z2", 1.0);
        d.resolution = static_cast<int>(cfg.get_int("domino", "resolution", 1024));
        d.radius = static_cast<int>(cfg.get_int("domino", "radius", 32));
        d.truncation = static_cast<int>(cfg.get_int("domino", "truncation", 30));
        d.h1 = Complex(cfg.get_double("domino", "h1_re", 1.0),
                       cfg.get_double("domino", "h1_im", 0.0));
        d.h2 = Complex(cfg.get_double("domino", "h2_re", 1.0),
                       cfg.get_double("domino", "h2_im", 0.0));
        rc.model = d;
    } else if (rc.model_name == "lozenge") {
        LozengeConfig l;
        l.z = {cfg.get_double("lozenge", "z1", 1.0),
               cfg.get_double("lozenge", "z2", 1.0),
               cfg.get_double("lozenge", "z3", 1.0)};
        l.radius = static_cast<int>(cfg.get_int("lozenge", "radius", 22));
        l.truncation = static_cast<int>(cfg.get_int("lozenge", "truncation", 20));
        rc.model = l;
    } else if (rc.model_name == "ising") {
        IsingConfig is;
        if (cfg.has("ising", "K")) {
            is.K1 = is.K2 = cfg.get_double("ising", "K", 0.5);
        } else {
            is.K1 = cfg.get_double("ising", "K1", 0.5);
            is.K2 = cfg.get_double("ising", "K2", 0.5);
        }
        is.plus_minus_weights = cfg.get_int("ising", "plus_minus_weights", 0) != 0;
        rc.model = is;
    } else {
        throw ModelError(errc::bad_config, "unknown model: " + rc.model_name);
    }

    rc.kmax = cfg.get_double("spectral", "kmax", 2.0);
    rc.density_samples =
        static_cast<int>(cfg.get_int("spectral", "density_samples", 512));
    rc.grid_bins = static_cast<int>(cfg.get_int("spectral", "grid_bins", 128));

    rc.seeds = static_cast<int>(cfg.get_int("mc", "seeds", 8));
    rc.seed = static_cast<std::uint64_t>(cfg.get_int("mc", "seed", 1));
    rc.size = cfg.get_int("mc", "size", 1 << 16);
    rc.sweeps = cfg.get_int("mc", "sweeps", 2000);

    rc.density_tol = cfg.get_double("compare", "density_tol", 0.05);
    rc.peak_tol = cfg.get_double("compare", "peak_tol", 0.05);
    rc.mask_radius = cfg.get_double("compare", "mask_radius", 0.02);

    rc.provenance = cfg.resolved();
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from(KeyValueConfig::parse_file(path));
}

}  // namespace rtdiff

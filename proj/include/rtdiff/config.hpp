#ifndef RTDIFF_CONFIG_HPP
#define RTDIFF_CONFIG_HPP

#include <map>
#include <string>
#include <variant>

#include "rtdiff/chains.hpp"
#include "rtdiff/dimer.hpp"
#include "rtdiff/ising.hpp"
#include "rtdiff/product.hpp"
#include "rtdiff/tiling1d.hpp"

namespace rtdiff {

/// Plain-text `key = value` file with optional `[section]` headers and `#`
/// comments.  Every lookup is recorded (with its default when one applied)
/// so runs can print their fully resolved configuration.
class KeyValueConfig {
  public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::string require(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    std::vector<double> get_doubles(const std::string& section,
                                    const std::string& key) const;

    /// Fully resolved `section.key = value[  # default]` lines, one per
    /// lookup performed so far.
    std::vector<std::string> resolved() const { return resolved_; }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    mutable std::vector<std::string> resolved_;
    void note(const std::string& section, const std::string& key,
              const std::string& value, bool from_default) const;
};

struct BernoulliConfig {
    Eigen::VectorXcd h;
    Eigen::VectorXd p;
};

struct MarkovConfig {
    Eigen::VectorXcd h;
    Eigen::MatrixXd M;
};

struct DominoConfig {
    double z1 = 1.0, z2 = 1.0;
    int resolution = 1024;
    int radius = 32;
    int truncation = 30;
    Complex h1{1.0, 0.0}, h2{1.0, 0.0};
};

struct LozengeConfig {
    std::array<double, 3> z{1.0, 1.0, 1.0};
    int radius = 22;
    int truncation = 20;
};

struct IsingConfig {
    double K1 = 0.5, K2 = 0.5;
    bool plus_minus_weights = false;
};

using ModelConfig = std::variant<BernoulliConfig, MarkovConfig,
                                 RandomTilingSpec1D, ProductSpec, DominoConfig,
                                 LozengeConfig, IsingConfig>;

/// One CLI run: the model plus spectral, sampling and comparison options.
struct RunConfig {
    ModelConfig model;
    std::string model_name;

    double kmax = 2.0;          // k-window half-width for peaks/densities
    int density_samples = 512;  // CSV resolution for 1D densities
    int grid_bins = 128;        // 2D render resolution per axis

    int seeds = 8;              // replicas
    std::uint64_t seed = 1;     // base seed
    long long size = 1 << 16;   // chain length / tile count / torus side
    long long sweeps = 2000;

    double density_tol = 0.05;
    double peak_tol = 0.05;
    double mask_radius = 0.02;

    std::string out_dir = ".";
    std::string cache_dir;

    std::vector<std::string> provenance;
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from(const KeyValueConfig& cfg);

}  // namespace rtdiff

#endif

#pragma once

#include "chemo/dynamics.hpp"
#include "chemo/grid.hpp"
#include "chemo/initdata.hpp"
#include "chemo/model.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemo {

struct ConfigError : std::runtime_error {
    int line; // 0 when not tied to a source line
    ConfigError(const std::string& what, int line_ = 0)
        : std::runtime_error(what), line(line_) {}
};

// Flat dotted key/value file:  `section.key = value`, `#` comments, blank
// lines ignored.  Values stay strings until a typed getter is called.
class KeyValueConfig {
  public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_text(const std::string& text,
                                     const std::string& origin = "<inline>");

    bool has(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return kv_; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double dflt) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int dflt) const;

    // Keys outside `allowed` prefixes raise ConfigError (typo guard).
    void check_known_keys(const std::vector<std::string>& allowed) const;

    // Canonical "key = value" rendering (sorted), used for hashing and for
    // embedding the resolved configuration into run records.
    std::string canonical() const;

  private:
    std::map<std::string, std::string> kv_;
    std::map<std::string, int> lines_;
    std::string origin_;
    friend struct KeyValueConfigAccess;
};

// FNV-1a 64-bit over the canonical rendering, hex-encoded.
std::string config_hash(const KeyValueConfig& cfg);

struct GridSpec {
    int m = 200;
    bool graded = false;
    double stretch = 1.0;
};

struct InitialSpec {
    enum class Kind { Zero, Constant, Bump, Concentrated, File } kind = Kind::Zero;
    double const_u = 0.0, const_v = 0.0;      // Constant
    double amplitude = 1.0, width = 0.5;      // Bump
    ConcentratedSpec conc;                    // Concentrated
    double split = 0.5;                       // Bump/Concentrated: v0 = split*u0
    std::string path;                         // File (CSV: r,u0,v0 per cell)
};

// Fully resolved run configuration.
struct RunConfig {
    ModelParams model;
    GridSpec grid;
    StepControl control;
    InitialSpec initial;
    MomentConfig moments;
    double profile_eps = 0.0;
    std::optional<double> lp_u, lp_v; // empty = derive from the model
    int sample_stride = 1;
    int fit_tail = 10;
    KeyValueConfig raw; // resolved flat view (defaults filled in)

    static RunConfig from_config(const KeyValueConfig& cfg);
};

RadialGrid build_grid(const RunConfig& rc);
std::pair<RadialField, RadialField> build_initial(const RunConfig& rc,
                                                  const RadialGrid& g);

} // namespace chemo

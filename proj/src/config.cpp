#include "chemo/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chemo {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse_text(const std::string& text,
                                          const std::string& origin) {
    KeyValueConfig out;
    out.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected `key = value`, got `" + line + "`",
                              lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key",
                              lineno);
        out.kv_[key] = value;
        out.lines_[key] = lineno;
    }
    return out;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

bool KeyValueConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        auto it = lines_.find(key);
        throw ConfigError(origin_ + ":" +
                              std::to_string(it == lines_.end() ? 0 : it->second) +
                              ": key `" + key + "` is not a number: `" + v + "`",
                          it == lines_.end() ? 0 : it->second);
    }
}

double KeyValueConfig::get_double(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
}

int KeyValueConfig::get_int(const std::string& key) const {
    double d = get_double(key);
    int i = static_cast<int>(std::lround(d));
    if (static_cast<double>(i) != d)
        throw ConfigError("key `" + key + "` is not an integer");
    return i;
}

int KeyValueConfig::get_int(const std::string& key, int dflt) const {
    return has(key) ? get_int(key) : dflt;
}

void KeyValueConfig::check_known_keys(const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : kv_) {
        (void)value;
        bool ok = false;
        for (const auto& pattern : allowed) {
            if (!pattern.empty() && pattern.back() == '.') {
                if (key.rfind(pattern, 0) == 0) ok = true;
            } else if (key == pattern) {
                ok = true;
            }
            if (ok) break;
        }
        if (!ok) {
            auto it = lines_.find(key);
            int ln = it == lines_.end() ? 0 : it->second;
            throw ConfigError(origin_ + ":" + std::to_string(ln) +
                                  ": unknown config key `" + key + "`",
                              ln);
        }
    }
}

std::string KeyValueConfig::canonical() const {
    std::ostringstream out;
    for (const auto& [key, value] : kv_) out << key << " = " << value << "\n";
    return out.str();
}

std::string config_hash(const KeyValueConfig& cfg) {
    const std::string text = cfg.canonical();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace {

const std::vector<std::string> kRunKeys = {
    "model.", "grid.", "step.", "initial.", "moments.", "run.",
};

SignalKind parse_signal_kind(const std::string& v) {
    if (v == "ks" || v == "keller-segel" || v == "kellersegel") return SignalKind::KellerSegel;
    if (v == "jl" || v == "jaeger-luckhaus" || v == "mean-field") return SignalKind::JaegerLuckhaus;
    throw ConfigError("model.h must be `ks` or `jl`, got `" + v + "`");
}

} // namespace

RunConfig RunConfig::from_config(const KeyValueConfig& cfg) {
    cfg.check_known_keys(kRunKeys);
    RunConfig rc;
    ModelParams& mp = rc.model;
    mp.n = cfg.get_int("model.n", mp.n);
    mp.R = cfg.get_double("model.R", mp.R);
    mp.d1 = cfg.get_double("model.d1", mp.d1);
    mp.d2 = cfg.get_double("model.d2", mp.d2);
    mp.d3 = cfg.get_double("model.d3", mp.d3);
    mp.chi1 = cfg.get_double("model.chi1", mp.chi1);
    mp.chi2 = cfg.get_double("model.chi2", mp.chi2);
    mp.mu1 = cfg.get_double("model.mu1", mp.mu1);
    mp.mu2 = cfg.get_double("model.mu2", mp.mu2);
    mp.a1 = cfg.get_double("model.a1", mp.a1);
    mp.a2 = cfg.get_double("model.a2", mp.a2);
    mp.alpha = cfg.get_double("model.alpha", mp.alpha);
    mp.beta = cfg.get_double("model.beta", mp.beta);
    mp.kappa1 = cfg.get_double("model.kappa1", mp.kappa1);
    mp.kappa2 = cfg.get_double("model.kappa2", mp.kappa2);
    mp.lambda1 = cfg.get_double("model.lambda1", mp.lambda1);
    mp.lambda2 = cfg.get_double("model.lambda2", mp.lambda2);
    mp.h_kind = parse_signal_kind(cfg.get_string("model.h", "ks"));
    mp.gamma = cfg.get_double("model.gamma", mp.gamma);
    mp.validate();

    rc.grid.m = cfg.get_int("grid.m", rc.grid.m);
    const std::string refine = cfg.get_string("grid.refine", "none");
    if (refine == "geometric") {
        rc.grid.graded = true;
        rc.grid.stretch = cfg.get_double("grid.stretch", 8.0);
    } else if (refine != "none") {
        throw ConfigError("grid.refine must be `none` or `geometric`");
    }

    rc.control.cfl_advection = cfg.get_double("step.cfl", rc.control.cfl_advection);
    rc.control.diffusion_theta = cfg.get_double("step.theta", rc.control.diffusion_theta);
    rc.control.dt_min = cfg.get_double("step.dt_min", rc.control.dt_min);
    rc.control.blowup_threshold =
        cfg.get_double("step.blowup_threshold", rc.control.blowup_threshold);
    rc.control.t_end = cfg.get_double("step.t_end", rc.control.t_end);

    const std::string kind = cfg.get_string("initial.kind", "zero");
    InitialSpec& is = rc.initial;
    if (kind == "zero") {
        is.kind = InitialSpec::Kind::Zero;
    } else if (kind == "constant") {
        is.kind = InitialSpec::Kind::Constant;
        is.const_u = cfg.get_double("initial.u", 1.0);
        is.const_v = cfg.get_double("initial.v", 0.0);
    } else if (kind == "bump") {
        is.kind = InitialSpec::Kind::Bump;
        is.amplitude = cfg.get_double("initial.amplitude", 1.0);
        is.width = cfg.get_double("initial.width", 0.5 * mp.R);
        is.split = cfg.get_double("initial.split", 0.5);
    } else if (kind == "concentrated") {
        is.kind = InitialSpec::Kind::Concentrated;
        is.conc.M0 = cfg.get_double("initial.M0");
        is.conc.M0_tilde = cfg.get_double("initial.M0_tilde", 0.0);
        is.conc.r_star = cfg.get_double("initial.r_star", 0.25 * mp.R);
        is.conc.L = cfg.get_double("initial.L");
        const double dflt_split =
            mp.h_kind == SignalKind::JaegerLuckhaus ? 0.0 : 0.5;
        is.conc.split = cfg.get_double("initial.split", dflt_split);
        is.split = is.conc.split;
    } else if (kind == "file") {
        is.kind = InitialSpec::Kind::File;
        is.path = cfg.get_string("initial.path");
    } else {
        throw ConfigError("initial.kind must be zero|constant|bump|concentrated|file");
    }

    rc.moments.regime = mp.h_kind;
    auto window = MomentConfig::b_window(mp.h_kind, mp.n);
    const double b_auto = 0.5 * (window.first + window.second);
    const std::string b_str = cfg.get_string("moments.b", "auto");
    rc.moments.b = (b_str == "auto") ? b_auto : cfg.get_double("moments.b");
    const double smax = std::pow(mp.R, mp.n);
    const std::string s0_str = cfg.get_string("moments.s0", "auto");
    rc.moments.s0 = (s0_str == "auto") ? 0.125 * smax : cfg.get_double("moments.s0");
    const std::string eps_str = cfg.get_string("moments.eps", "auto");
    rc.profile_eps =
        (eps_str == "auto") ? default_profile_eps(mp.n) : cfg.get_double("moments.eps");

    if (cfg.has("run.lp_u")) rc.lp_u = cfg.get_double("run.lp_u");
    if (cfg.has("run.lp_v")) rc.lp_v = cfg.get_double("run.lp_v");
    rc.sample_stride = cfg.get_int("run.sample_stride", 1);
    rc.fit_tail = cfg.get_int("run.fit_tail", 10);

    rc.raw = cfg;
    return rc;
}

RadialGrid build_grid(const RunConfig& rc) {
    if (rc.grid.graded)
        return RadialGrid::graded(rc.model.n, rc.model.R, rc.grid.m, rc.grid.stretch);
    return RadialGrid::uniform(rc.model.n, rc.model.R, rc.grid.m);
}

std::pair<RadialField, RadialField> build_initial(const RunConfig& rc,
                                                  const RadialGrid& g) {
    const InitialSpec& is = rc.initial;
    RadialField u0(g), v0(g);
    switch (is.kind) {
        case InitialSpec::Kind::Zero:
            break;
        case InitialSpec::Kind::Constant:
            for (int i = 0; i < g.m; ++i) {
                u0[i] = is.const_u;
                v0[i] = is.const_v;
            }
            break;
        case InitialSpec::Kind::Bump:
            // C^1 cosine bump supported on [0, width)
            for (int i = 0; i < g.m; ++i) {
                const double r = g.cell_centers[i];
                if (r < is.width) {
                    const double c = std::cos(0.5 * M_PI * r / is.width);
                    u0[i] = is.amplitude * c * c;
                    v0[i] = is.split * u0[i];
                }
            }
            break;
        case InitialSpec::Kind::Concentrated:
            return make_concentrated(g, is.conc);
        case InitialSpec::Kind::File: {
            std::ifstream in(is.path);
            if (!in) throw ConfigError("cannot open initial data file: " + is.path);
            std::string line;
            int i = 0;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#' || line[0] == 'r') continue;
                double r, uu, vv;
                if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &uu, &vv) != 3)
                    throw ConfigError("initial data file: bad row `" + line + "`");
                if (i >= g.m)
                    throw ConfigError("initial data file: more rows than grid cells");
                u0[i] = uu;
                v0[i] = vv;
                ++i;
            }
            if (i != g.m)
                throw ConfigError("initial data file: expected " + std::to_string(g.m) +
                                  " rows, got " + std::to_string(i));
            break;
        }
    }
    return {u0, v0};
}

} // namespace chemo

#include "chemo/harness.hpp"

#include "chemo/dynamics.hpp"
#include "chemo/record_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace chemo {

int log_level() {
    static int level = [] {
        const char* env = std::getenv("CHEMO_LOG");
        if (!env) return 1;
        std::string v(env);
        if (v == "quiet") return 0;
        if (v == "warn") return 1;
        if (v == "info") return 2;
        if (v == "debug") return 3;
        return 1;
    }();
    return level;
}

void log_msg(int level, const std::string& msg) {
    if (level <= log_level()) std::fprintf(stderr, "[chemo] %s\n", msg.c_str());
}

namespace {

// Fills defaulted keys back into the raw view so records carry the full
// resolved configuration.
KeyValueConfig resolved_view(const RunConfig& rc) {
    KeyValueConfig kv = rc.raw;
    auto setd = [&kv](const std::string& key, double v) {
        if (!kv.has(key)) kv.set(key, format_g17(v));
    };
    const ModelParams& m = rc.model;
    setd("model.n", m.n);
    setd("model.R", m.R);
    setd("model.d1", m.d1);
    setd("model.d2", m.d2);
    setd("model.d3", m.d3);
    setd("model.chi1", m.chi1);
    setd("model.chi2", m.chi2);
    setd("model.mu1", m.mu1);
    setd("model.mu2", m.mu2);
    setd("model.a1", m.a1);
    setd("model.a2", m.a2);
    setd("model.alpha", m.alpha);
    setd("model.beta", m.beta);
    setd("model.kappa1", m.kappa1);
    setd("model.kappa2", m.kappa2);
    setd("model.lambda1", m.lambda1);
    setd("model.lambda2", m.lambda2);
    if (!kv.has("model.h"))
        kv.set("model.h", m.h_kind == SignalKind::KellerSegel ? "ks" : "jl");
    if (m.h_kind == SignalKind::KellerSegel) setd("model.gamma", m.gamma);
    setd("grid.m", rc.grid.m);
    if (!kv.has("grid.refine"))
        kv.set("grid.refine", rc.grid.graded ? "geometric" : "none");
    if (rc.grid.graded) setd("grid.stretch", rc.grid.stretch);
    setd("step.cfl", rc.control.cfl_advection);
    setd("step.theta", rc.control.diffusion_theta);
    setd("step.dt_min", rc.control.dt_min);
    setd("step.blowup_threshold", rc.control.blowup_threshold);
    setd("step.t_end", rc.control.t_end);
    if (!kv.has("moments.b")) kv.set("moments.b", format_g17(rc.moments.b));
    if (!kv.has("moments.s0")) kv.set("moments.s0", format_g17(rc.moments.s0));
    if (!kv.has("moments.eps")) kv.set("moments.eps", format_g17(rc.profile_eps));
    setd("run.sample_stride", rc.sample_stride);
    setd("run.fit_tail", rc.fit_tail);
    return kv;
}

double derived_lp(const ModelParams& p, Species sp) {
    if (auto lp = select_lp_exponent(p, sp)) return *lp;
    return 0.5 * p.n + 1.0;
}

bool nonincreasing(const RadialField& f) {
    for (int i = 0; i + 1 < f.size(); ++i)
        if (f[i + 1] > f[i]) return false;
    return true;
}

bool mu_small_conditions(const ModelParams& p) {
    return p.mu1 < p.beta * p.chi1 / (p.a1 * p.d3) &&
           p.mu2 < p.alpha * p.chi2 / (p.a2 * p.d3);
}

} // namespace

namespace {

RunRecord simulate_impl(const RunConfig& rc, const RadialGrid& g, State* final_state) {
    rc.model.validate();
    auto [u0, v0] = build_initial(rc, g);

    DiagnosticsConfig diag;
    diag.moments = rc.moments;
    diag.moments.validate(rc.model.n, std::pow(rc.model.R, rc.model.n));
    diag.profile_eps = rc.profile_eps;
    diag.lp_u = rc.lp_u ? *rc.lp_u : derived_lp(rc.model, Species::First);
    diag.lp_v = rc.lp_v ? *rc.lp_v : derived_lp(rc.model, Species::Second);
    diag.sample_stride = rc.sample_stride;
    diag.fit_tail = rc.fit_tail;

    const bool concavity_expected =
        rc.model.h_kind == SignalKind::JaegerLuckhaus &&
        mu_small_conditions(rc.model) && nonincreasing(u0) && nonincreasing(v0);

    State s = make_state(rc.model, g, u0, v0);
    RunRecord rec = run(rc.model, std::move(s), rc.control, diag, final_state);

    KeyValueConfig resolved = resolved_view(rc);
    rec.config = resolved.entries();
    rec.config_hash = config_hash(resolved);
    rec.audits.concavity_expected = concavity_expected;

    auto ineq = audit_inequality(rec, diag.moments, rc.model);
    rec.audits.inequality_ok = ineq.ok;
    rec.audits.inequality_A = ineq.A;
    rec.audits.inequality_B = ineq.B;
    rec.audits.inequality_gap = ineq.gap_min;
    rec.audits.inequality_predicted_time = ineq.predicted_time;
    return rec;
}

} // namespace

RunRecord simulate_record(const RunConfig& rc) {
    RadialGrid g = build_grid(rc);
    return simulate_impl(rc, g, nullptr);
}

RunRecord cli_simulate(const RunConfig& rc, const std::filesystem::path& out_dir) {
    RadialGrid g = build_grid(rc);
    State final_state;
    RunRecord rec = simulate_impl(rc, g, &final_state);
    write_run_outputs(rec, out_dir);
    write_final_profiles(out_dir, g, final_state.u, final_state.v, final_state.w);
    log_msg(2, "simulate: " + std::string(termination_name(rec.termination.cause)) +
                   " at t=" + format_g17(rec.termination.time));
    return rec;
}

std::string render_classification(const ModelParams& p) {
    RegimePrediction pred = classify_regime(p);
    std::ostringstream out;
    out << "verdict: " << verdict_name(pred.verdict) << "\n";
    out << "chi1 threshold (bounded): "
        << format_g17(chi_threshold_bounded(p, Species::First)) << "\n";
    out << "chi2 threshold (bounded): "
        << format_g17(chi_threshold_bounded(p, Species::Second)) << "\n";
    auto lp1 = select_lp_exponent(p, Species::First);
    auto lp2 = select_lp_exponent(p, Species::Second);
    out << "lp exponent u: " << (lp1 ? format_g17(*lp1) : "none") << "\n";
    out << "lp exponent v: " << (lp2 ? format_g17(*lp2) : "none") << "\n";
    out << "conditions:\n";
    for (const auto& c : pred.details)
        out << "  " << (c.satisfied ? "[ok]  " : "[no]  ") << c.name
            << "  (threshold " << format_g17(c.threshold) << ")\n";
    return out.str();
}

namespace {

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

std::vector<SweepAxis> sweep_axes(const KeyValueConfig& cfg) {
    const std::string prefix = "sweep.values.";
    std::vector<SweepAxis> axes;
    for (const auto& [key, value] : cfg.entries()) {
        if (key.rfind(prefix, 0) != 0) continue;
        SweepAxis ax;
        ax.key = key.substr(prefix.size());
        std::istringstream in(value);
        std::string item;
        while (std::getline(in, item, ',')) {
            size_t a = item.find_first_not_of(" \t");
            size_t b = item.find_last_not_of(" \t");
            if (a == std::string::npos) continue;
            ax.values.push_back(item.substr(a, b - a + 1));
        }
        // an axis with no values collapses the whole grid (header-only atlas)
        axes.push_back(std::move(ax));
    }
    return axes; // map iteration: lexicographic, deterministic
}

KeyValueConfig base_config(const KeyValueConfig& cfg) {
    KeyValueConfig base;
    for (const auto& [key, value] : cfg.entries())
        if (key.rfind("sweep.", 0) != 0) base.set(key, value);
    return base;
}

} // namespace

std::vector<SweepOutcome> cli_sweep(const KeyValueConfig& cfg,
                                    const std::filesystem::path& out_dir,
                                    int workers) {
    namespace fs = std::filesystem;
    const auto axes = sweep_axes(cfg);
    const KeyValueConfig base = base_config(cfg);

    // materialize the cartesian grid in row-major order
    size_t total = 1;
    for (const auto& ax : axes) total *= ax.values.size();
    std::vector<KeyValueConfig> points;
    std::vector<std::map<std::string, std::string>> point_keys;
    points.reserve(total);
    for (size_t idx = 0; idx < total; ++idx) {
        KeyValueConfig kv = base;
        std::map<std::string, std::string> keys;
        size_t rest = idx;
        for (size_t a = axes.size(); a-- > 0;) {
            const auto& ax = axes[a];
            const std::string& val = ax.values[rest % ax.values.size()];
            rest /= ax.values.size();
            kv.set(ax.key, val);
            keys[ax.key] = val;
        }
        points.push_back(std::move(kv));
        point_keys.push_back(std::move(keys));
    }

    std::vector<SweepOutcome> outcomes(total);
    std::atomic<size_t> next{0};
    std::mutex io_mutex;
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= total) return;
            SweepOutcome& oc = outcomes[i];
            oc.point = point_keys[i];
            try {
                RunConfig rc = RunConfig::from_config(points[i]);
                oc.verdict = verdict_name(classify_regime(rc.model).verdict);
                const std::string hash = config_hash(points[i]);
                oc.hash = hash;
                const fs::path pdir = out_dir / "points" / hash;
                const fs::path rec_path = pdir / "runrecord.json";
                RunRecord rec;
                bool reused = false;
                if (fs::exists(rec_path)) {
                    std::ifstream in(rec_path);
                    std::ostringstream buf;
                    buf << in.rdbuf();
                    try {
                        rec = record_from_json(buf.str());
                        reused = true;
                        std::lock_guard<std::mutex> lock(io_mutex);
                        log_msg(2, "sweep: reusing " + hash);
                    } catch (const std::exception&) {
                        reused = false;
                    }
                }
                if (!reused) {
                    rec = simulate_record(rc);
                    write_run_outputs(rec, pdir);
                }
                oc.termination = termination_name(rec.termination.cause);
                oc.t_term = rec.termination.time;
                oc.fit_T = rec.termination.fit_T;
                oc.fit_q = rec.termination.fit_q;
                if (!rec.samples.empty())
                    oc.sup_final =
                        rec.samples.back().sup_u + rec.samples.back().sup_v;
            } catch (const std::exception& e) {
                oc.error = e.what();
                std::lock_guard<std::mutex> lock(io_mutex);
                log_msg(1, "sweep point failed: " + std::string(e.what()));
            }
        }
    };

    int nw = workers > 0 ? workers
                         : std::max(1u, std::thread::hardware_concurrency());
    nw = static_cast<int>(std::min<size_t>(nw, std::max<size_t>(total, 1)));
    std::vector<std::thread> pool;
    for (int i = 1; i < nw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // atlas in grid order
    std::ostringstream atlas;
    atlas << "# chemo-atlas-v1\n";
    atlas << "point";
    for (const auto& ax : axes) atlas << ',' << ax.key;
    atlas << ",hash,verdict,termination,t_term,fit_T,fit_q,sup_final,error\n";
    for (size_t i = 0; i < total; ++i) {
        const SweepOutcome& oc = outcomes[i];
        atlas << i;
        for (const auto& ax : axes) {
            auto it = oc.point.find(ax.key);
            atlas << ',' << (it == oc.point.end() ? "" : it->second);
        }
        atlas << ',' << oc.hash << ',' << oc.verdict << ',' << oc.termination << ','
              << format_g17(oc.t_term) << ','
              << (oc.fit_T ? format_g17(*oc.fit_T) : "") << ','
              << (oc.fit_q ? format_g17(*oc.fit_q) : "") << ','
              << format_g17(oc.sup_final) << ',' << oc.error << "\n";
    }
    write_file_atomic(out_dir / "atlas.csv", atlas.str());
    return outcomes;
}

int cli_audit(const std::filesystem::path& record_path, std::ostream& out) {
    RunRecord rec;
    try {
        std::ifstream in(record_path);
        if (!in) throw std::runtime_error("cannot open " + record_path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        rec = record_from_json(buf.str());
    } catch (const std::exception& e) {
        out << "audit: cannot read record: " << e.what() << "\n";
        return 2;
    }
    KeyValueConfig kv;
    for (const auto& [key, value] : rec.config) kv.set(key, value);
    RunConfig rc;
    try {
        rc = RunConfig::from_config(kv);
    } catch (const std::exception& e) {
        out << "audit: record has an invalid config: " << e.what() << "\n";
        return 2;
    }

    int failures = 0;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        out << (pass ? "[ok]  " : "[FAIL]") << " " << name << ": " << detail << "\n";
        if (!pass) ++failures;
    };

    MassAuditReport mrep = mass_audit(rec, rc.model);
    report("mass growth bound (e^{mu t} M0)", mrep.ok,
           "max relative excess " + format_g17(mrep.max_violation) + " at t=" +
               format_g17(mrep.worst_t));

    report("positivity", rec.audits.positivity_ok,
           rec.audits.positivity_ok ? "nonnegative at every step"
                                    : "negative cell values detected");

    if (rec.audits.concavity_expected) {
        double tol = 0.0;
        for (const auto& s : rec.samples)
            tol = std::max(tol, 1e-6 * std::max(s.sup_u, s.sup_v));
        double cmax = rec.audits.concavity_max;
        report("cumulative-mass concavity", cmax <= tol,
               "max margin " + format_g17(cmax) + " tol " + format_g17(tol));
    } else {
        out << "[--]   cumulative-mass concavity: not expected for this run\n";
    }

    MomentConfig mc = rc.moments;
    auto ineq = audit_inequality(rec, mc, rc.model);
    if (ineq.ok) {
        out << "[info] riccati inequality: A=" << format_g17(ineq.A)
            << " B=" << format_g17(ineq.B) << " gap_min=" << format_g17(ineq.gap_min)
            << " min_slack=" << format_g17(ineq.min_slack) << "\n";
        if (ineq.predicted_time)
            out << "[info] riccati bound: predicted " << format_g17(*ineq.predicted_time)
                << " vs observed " << format_g17(ineq.observed_time) << "\n";
        else
            out << "[info] riccati bound: none (no finite-time prediction)\n";
    } else {
        out << "[info] riccati inequality: " << ineq.message << "\n";
    }

    out << (failures == 0 ? "audit: clean\n" : "audit: FAILURES\n");
    return failures == 0 ? 0 : 1;
}

int cli_make_data(const RunConfig& rc, const std::filesystem::path& out_dir,
                  std::ostream& out) {
    RadialGrid g = build_grid(rc);
    std::pair<RadialField, RadialField> fields;
    try {
        fields = build_initial(rc, g);
    } catch (const InfeasibleData& e) {
        out << "infeasible: " << e.what()
            << " (achievable inner mass " << format_g17(e.achievable) << ")\n";
        return 1;
    }
    const auto& [u0, v0] = fields;
    std::ostringstream csv;
    csv << "# chemo-fields-v1\nr,u0,v0\n";
    for (int i = 0; i < g.m; ++i)
        csv << format_g17(g.cell_centers[i]) << ',' << format_g17(u0[i]) << ','
            << format_g17(v0[i]) << "\n";
    write_file_atomic(out_dir / "fields.csv", csv.str());

    Hypothesis hyp;
    const std::string which = rc.raw.get_string("initial.hypothesis", "auto");
    if (which == "bounded") {
        hyp.set = HypothesisSet::Bounded;
    } else if (which == "ks" ||
               (which == "auto" && rc.model.h_kind == SignalKind::KellerSegel)) {
        hyp.set = HypothesisSet::KSBlowup;
    } else if (which == "jl" ||
               (which == "auto" && rc.model.h_kind == SignalKind::JaegerLuckhaus)) {
        hyp.set = HypothesisSet::JLBlowup;
    } else {
        throw ConfigError("initial.hypothesis must be auto|bounded|ks|jl");
    }
    if (rc.initial.kind == InitialSpec::Kind::Concentrated) {
        hyp.M0 = rc.initial.conc.M0;
        hyp.M0_tilde = rc.initial.conc.M0_tilde;
        hyp.r_star = rc.initial.conc.r_star;
        hyp.L = rc.initial.conc.L;
    } else {
        hyp.M0 = mass(u0) + (hyp.set == HypothesisSet::JLBlowup ? 0.0 : mass(v0));
        hyp.r_star = 0.25 * rc.model.R;
        hyp.L = rc.raw.get_double("initial.L", 0.0);
        if (hyp.L == 0.0) hyp.L = 1e300;
    }
    ValidationReport rep = validate(u0, v0, hyp);
    for (const auto& item : rep.items)
        out << (item.pass ? "[ok]  " : "[FAIL]") << " " << item.name << ": value "
            << format_g17(item.value) << " vs bound " << format_g17(item.bound)
            << "\n";
    out << (rep.all_pass ? "initial data: admissible\n"
                         : "initial data: hypothesis violated\n");
    return rep.all_pass ? 0 : 1;
}

} // namespace chemo

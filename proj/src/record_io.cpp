#include "chemo/record_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace chemo {

using nlohmann::json;

const char* const kSeriesSchemaLine = "# chemo-series-v1";
const char* const kSeriesHeaderLine =
    "t,mass_u,mass_v,sup_u,sup_v,lp_u,lp_v,phi_u,phi_v,psi_u,psi_v,"
    "concavity_margin,profile_constant,dt";

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* termination_name(TerminationCause c) {
    switch (c) {
        case TerminationCause::ReachedTEnd: return "ReachedTEnd";
        case TerminationCause::BlowupThreshold: return "BlowupThreshold";
        case TerminationCause::StepCollapse: return "StepCollapse";
    }
    return "?";
}

namespace {

TerminationCause termination_from_name(const std::string& s) {
    if (s == "ReachedTEnd") return TerminationCause::ReachedTEnd;
    if (s == "BlowupThreshold") return TerminationCause::BlowupThreshold;
    if (s == "StepCollapse") return TerminationCause::StepCollapse;
    throw std::invalid_argument("unknown termination cause: " + s);
}

json sample_to_json(const SampleRow& s) {
    return json::array({s.t, s.mass_u, s.mass_v, s.sup_u, s.sup_v, s.lp_u, s.lp_v,
                        s.mom.phi_u, s.mom.phi_v, s.mom.psi_u, s.mom.psi_v,
                        s.mom.concavity_margin, s.mom.profile_constant, s.dt});
}

SampleRow sample_from_json(const json& j) {
    SampleRow s;
    s.t = j.at(0);
    s.mass_u = j.at(1);
    s.mass_v = j.at(2);
    s.sup_u = j.at(3);
    s.sup_v = j.at(4);
    s.lp_u = j.at(5);
    s.lp_v = j.at(6);
    s.mom.phi_u = j.at(7);
    s.mom.phi_v = j.at(8);
    s.mom.psi_u = j.at(9);
    s.mom.psi_v = j.at(10);
    s.mom.concavity_margin = j.at(11);
    s.mom.profile_constant = j.at(12);
    s.dt = j.at(13);
    return s;
}

} // namespace

std::string record_to_json(const RunRecord& rec) {
    json j;
    j["schema"] = rec.schema;
    j["config_hash"] = rec.config_hash;
    j["config"] = rec.config;
    json samples = json::array();
    for (const auto& s : rec.samples) samples.push_back(sample_to_json(s));
    j["samples"] = samples;
    json term;
    term["cause"] = termination_name(rec.termination.cause);
    term["time"] = rec.termination.time;
    if (rec.termination.fit_T) term["fit_T"] = *rec.termination.fit_T;
    if (rec.termination.fit_q) term["fit_q"] = *rec.termination.fit_q;
    j["termination"] = term;
    json audits;
    audits["mass_max_violation"] = rec.audits.mass_max_violation;
    audits["mass_ok"] = rec.audits.mass_ok;
    audits["concavity_expected"] = rec.audits.concavity_expected;
    audits["concavity_max"] = rec.audits.concavity_max;
    audits["positivity_ok"] = rec.audits.positivity_ok;
    audits["inequality_ok"] = rec.audits.inequality_ok;
    audits["inequality_A"] = rec.audits.inequality_A;
    audits["inequality_B"] = rec.audits.inequality_B;
    audits["inequality_gap"] = rec.audits.inequality_gap;
    if (rec.audits.inequality_predicted_time)
        audits["inequality_predicted_time"] = *rec.audits.inequality_predicted_time;
    j["audits"] = audits;
    return j.dump(2) + "\n";
}

RunRecord record_from_json(const std::string& text) {
    json j = json::parse(text);
    RunRecord rec;
    rec.schema = j.at("schema");
    rec.config_hash = j.at("config_hash");
    for (const auto& [key, value] : j.at("config").items())
        rec.config[key] = value.get<std::string>();
    for (const auto& s : j.at("samples")) rec.samples.push_back(sample_from_json(s));
    const json& term = j.at("termination");
    rec.termination.cause = termination_from_name(term.at("cause"));
    rec.termination.time = term.at("time");
    if (term.contains("fit_T")) rec.termination.fit_T = term.at("fit_T").get<double>();
    if (term.contains("fit_q")) rec.termination.fit_q = term.at("fit_q").get<double>();
    const json& audits = j.at("audits");
    rec.audits.mass_max_violation = audits.at("mass_max_violation");
    rec.audits.mass_ok = audits.at("mass_ok");
    rec.audits.concavity_expected = audits.at("concavity_expected");
    rec.audits.concavity_max = audits.at("concavity_max");
    rec.audits.positivity_ok = audits.at("positivity_ok");
    rec.audits.inequality_ok = audits.at("inequality_ok");
    rec.audits.inequality_A = audits.at("inequality_A");
    rec.audits.inequality_B = audits.at("inequality_B");
    rec.audits.inequality_gap = audits.at("inequality_gap");
    if (audits.contains("inequality_predicted_time"))
        rec.audits.inequality_predicted_time =
            audits.at("inequality_predicted_time").get<double>();
    return rec;
}

std::string series_csv(const RunRecord& rec) {
    std::ostringstream out;
    out << kSeriesSchemaLine << "\n" << kSeriesHeaderLine << "\n";
    for (const auto& s : rec.samples) {
        out << format_g17(s.t) << ',' << format_g17(s.mass_u) << ','
            << format_g17(s.mass_v) << ',' << format_g17(s.sup_u) << ','
            << format_g17(s.sup_v) << ',' << format_g17(s.lp_u) << ','
            << format_g17(s.lp_v) << ',' << format_g17(s.mom.phi_u) << ','
            << format_g17(s.mom.phi_v) << ',' << format_g17(s.mom.psi_u) << ','
            << format_g17(s.mom.psi_v) << ',' << format_g17(s.mom.concavity_margin)
            << ',' << format_g17(s.mom.profile_constant) << ','
            << format_g17(s.dt) << "\n";
    }
    return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

void write_run_outputs(const RunRecord& rec, const std::filesystem::path& out_dir) {
    write_file_atomic(out_dir / "runrecord.json", record_to_json(rec));
    write_file_atomic(out_dir / "series.csv", series_csv(rec));

    std::ostringstream sup;
    sup << "# chemo-supnorms-v1\nt,sup_u,sup_v\n";
    std::ostringstream mom;
    mom << "# chemo-moments-v1\nt,phi_u,phi_v,psi_u,psi_v\n";
    for (const auto& s : rec.samples) {
        sup << format_g17(s.t) << ',' << format_g17(s.sup_u) << ','
            << format_g17(s.sup_v) << "\n";
        mom << format_g17(s.t) << ',' << format_g17(s.mom.phi_u) << ','
            << format_g17(s.mom.phi_v) << ',' << format_g17(s.mom.psi_u) << ','
            << format_g17(s.mom.psi_v) << "\n";
    }
    write_file_atomic(out_dir / "plotdata" / "supnorms.csv", sup.str());
    write_file_atomic(out_dir / "plotdata" / "moments.csv", mom.str());
}

void write_final_profiles(const std::filesystem::path& out_dir,
                          const RadialGrid& g, const RadialField& u,
                          const RadialField& v, const RadialField& w) {
    std::ostringstream out;
    out << "# chemo-profiles-v1\nr,u,v,w\n";
    for (int i = 0; i < g.m; ++i)
        out << format_g17(g.cell_centers[i]) << ',' << format_g17(u[i]) << ','
            << format_g17(v[i]) << ',' << format_g17(w[i]) << "\n";
    write_file_atomic(out_dir / "plotdata" / "profiles_final.csv", out.str());
}

} // namespace chemo

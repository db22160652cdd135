#pragma once

#include "chemo/functionals.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chemo {

enum class TerminationCause { ReachedTEnd, BlowupThreshold, StepCollapse };

const char* termination_name(TerminationCause c);

struct SampleRow {
    double t = 0.0;
    double mass_u = 0.0, mass_v = 0.0;
    double sup_u = 0.0, sup_v = 0.0;
    double lp_u = 0.0, lp_v = 0.0;
    MomentSample mom;
    double dt = 0.0; // step size that produced this state (0 at t=0)
};

struct TerminationInfo {
    TerminationCause cause = TerminationCause::ReachedTEnd;
    double time = 0.0;
    // power-law fit sup ~ C (T-t)^{-q} over the trailing samples; only
    // attempted for blow-up terminations
    std::optional<double> fit_T, fit_q;
};

struct AuditSummary {
    double mass_max_violation = 0.0; // max relative excess over e^{mu t} M(0)
    bool mass_ok = true;
    bool concavity_expected = false; // mean-field run, small mu, monotone data
    double concavity_max = 0.0;      // max margin over samples
    bool positivity_ok = true;
    bool inequality_ok = false;
    double inequality_A = 0.0, inequality_B = 0.0, inequality_gap = 0.0;
    std::optional<double> inequality_predicted_time;
};

// Complete description of one simulation: resolved configuration, sampled
// diagnostics, termination, and post-run audits.
struct RunRecord {
    int schema = 1;
    std::string config_hash;
    std::map<std::string, std::string> config; // resolved flat key/value view
    std::vector<SampleRow> samples;
    TerminationInfo termination;
    AuditSummary audits;
};

} // namespace chemo

#pragma once

#include "chemo/config.hpp"
#include "chemo/record.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace chemo {

// Log verbosity from the CHEMO_LOG environment variable
// (quiet|warn|info|debug; default warn).
int log_level();
void log_msg(int level, const std::string& msg);

// Runs a fully-resolved configuration and returns the audited record (no file
// output).  Deterministic: identical configs produce identical records.
RunRecord simulate_record(const RunConfig& rc);

// simulate_record + output files under out_dir (runrecord.json, series.csv,
// plotdata/*.csv).
RunRecord cli_simulate(const RunConfig& rc, const std::filesystem::path& out_dir);

// Renders the regime classification for a model configuration.
std::string render_classification(const ModelParams& p);

struct SweepOutcome {
    std::string hash;
    std::map<std::string, std::string> point; // swept key -> value
    std::string verdict;
    std::string termination;
    double t_term = 0.0;
    double sup_final = 0.0;
    std::optional<double> fit_T, fit_q;
    std::string error; // nonempty when the point failed
};

// Cartesian sweep over `sweep.values.<key> = v1, v2, ...` axes layered on a
// base run configuration.  Completed points (their runrecord.json already on
// disk under points/<hash>/) are skipped; points run on `workers` threads;
// atlas.csv is written in deterministic grid order.
std::vector<SweepOutcome> cli_sweep(const KeyValueConfig& cfg,
                                    const std::filesystem::path& out_dir,
                                    int workers);

// Re-audits a stored run record; returns the process exit code (0 clean,
// 1 an audit failed, 2 the record could not be read).
int cli_audit(const std::filesystem::path& record_path, std::ostream& out);

// Builds initial data from a config, writes fields.csv under out_dir and a
// validation report to `out`; returns 0/1 like a process exit code.
int cli_make_data(const RunConfig& rc, const std::filesystem::path& out_dir,
                  std::ostream& out);

} // namespace chemo

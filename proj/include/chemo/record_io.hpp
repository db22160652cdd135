#pragma once

#include "chemo/record.hpp"

#include <filesystem>
#include <string>

namespace chemo {

// Pinned series.csv schema: a version comment followed by the column header.
extern const char* const kSeriesSchemaLine;
extern const char* const kSeriesHeaderLine;

std::string format_g17(double v); // shortest round-trippable decimal (%.17g)

std::string record_to_json(const RunRecord& rec);
RunRecord record_from_json(const std::string& text);

std::string series_csv(const RunRecord& rec);

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Writes runrecord.json, series.csv and plotdata/{supnorms,moments}.csv under
// out_dir (plus plotdata/profiles_final.csv when profiles are supplied).
void write_run_outputs(const RunRecord& rec, const std::filesystem::path& out_dir);
void write_final_profiles(const std::filesystem::path& out_dir,
                          const RadialGrid& g, const RadialField& u,
                          const RadialField& v, const RadialField& w);

} // namespace chemo

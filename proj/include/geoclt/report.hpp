#pragma once

#include "geoclt/experiments.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace geoclt {

/// records.csv body: header "n,replication,seed_path,value,aux", values as %.17g.
std::string records_csv(const std::vector<ReplicationRecord>& records);

/// Inverse of records_csv. Throws DataError on malformed rows.
std::vector<ReplicationRecord> parse_records_csv(const std::string& text);

/**
 * Writes into dir (created if missing):
 *   records.csv   replication records (deterministic)
 *   timings.csv   n, replication, wall_time, attempts
 *   report.json   aggregates, fits, config echo, seed, version
 *   hist_n<N>.svg, qq_n<N>.svg, variance.svg, kolmogorov.svg
 * I/O failures throw DataError naming the path.
 */
void emit_report(const CLTReport& report, const std::filesystem::path& dir);

/// report.json plus records.csv from a directory written by emit_report.
CLTReport load_report(const std::filesystem::path& dir);

/// Re-aggregate records.csv against the config echo in report.json and rewrite
/// report.json and the plots.
CLTReport rebuild_report(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

} // namespace geoclt

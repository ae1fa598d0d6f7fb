#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "scio/evaluation.hpp"
#include "scio/simgen.hpp"
#include "scio/solver.hpp"
#include "scio/tuning.hpp"

namespace scio {

nlohmann::json to_json(const SymMatrix& m);
nlohmann::json to_json(const PrecisionEstimate& est);
nlohmann::json to_json(const CVResult& cv);
nlohmann::json to_json(const LossReport& loss);
nlohmann::json to_json(const SupportReport& support);
nlohmann::json to_json(const Summary& s);

/// Configuration, per-p summaries and per-replicate records. Wall-clock time is
/// left out so that equal seeds give byte-identical output.
nlohmann::json to_json(const BenchmarkResult& result);

/// Support-frequency heatmap of one benchmark row as an ASCII PGM (P2).
/// Pixel value = succeeded − count, so frequent edges are dark; maxval is the
/// number of succeeded replicates (1 if none).
void write_pgm(std::ostream& out, const BenchmarkRow& row);
void write_pgm_file(const std::string& path, const BenchmarkRow& row);

/// The same frequencies as characters from " .:-=+*#%@" (blank = never selected).
std::string ascii_heatmap(const BenchmarkRow& row);

/// Whitespace-separated numbers, one per line or all on one line.
std::vector<double> read_number_list(std::istream& in);
std::vector<double> read_number_list_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace scio

#pragma once

#include "hazardgrid/bench.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hazardgrid {

/// Shortest round-trip decimal; integral values keep a trailing ".0"
/// (1.0, 0.5, 4.3e-05).
std::string format_double(double v);

inline constexpr const char* results_csv_header = "size,density,flood_kind,repetition,episode,epoch,outcome,steps,epsilon";
inline constexpr const char* curves_csv_header = "size,density,flood_kind,epoch,success_rate";

void write_results_csv(std::ostream& out, const std::vector<EpisodeResult>& results, int episodes_per_epoch);
void write_curves_csv(std::ostream& out, const std::vector<SuccessCurve>& curves);

/// Line chart of success rate against epoch, one polyline per curve.
void write_svg(std::ostream& out, const std::vector<SuccessCurve>& curves, const std::string& title);

/// File forms; throw std::runtime_error when the path cannot be written.
void write_results_csv(const std::string& path, const std::vector<EpisodeResult>& results, int episodes_per_epoch);
void write_curves_csv(const std::string& path, const std::vector<SuccessCurve>& curves);
void write_svg(const std::string& path, const std::vector<SuccessCurve>& curves, const std::string& title);

/// Writes results.csv, curves.csv, one curves_<size>_<density>.svg per
/// (size, density), and the greedy_* counterparts when present.
void write_benchmark_outputs(const std::string& out_dir, const BenchmarkOutput& output, int episodes_per_epoch);

} // namespace hazardgrid

#pragma once

#include <string>
#include <vector>

#include "fig/embed.hpp"
#include "fig/evaluate.hpp"
#include "fig/types.hpp"

namespace fig {

// Shortest decimal representation that round-trips to the same double; used
// by every writer so identical values always serialize identically.
std::string format_number(double v);

// CSV "t,x1..xd[,label]": an optional header names the columns; "t"/"index"
// columns are ignored, a "label" column is kept as per-row labels, the rest
// are data. Non-finite values are rejected with the offending data row.
TimeSeries load_timeseries(const std::string& path);
void write_timeseries(const std::string& path, const TimeSeries& X);

void write_theta(const std::string& path, const Matrix& theta);  // "t,theta1,theta2"

// Plain numeric matrix CSV (optional header line is skipped on load).
Matrix load_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m, const std::string& header = "");

// "index,label,y1..yr"
void write_embedding_csv(const std::string& path, const Embedding& emb,
                         const std::vector<std::string>& labels);
Embedding load_embedding_csv(const std::string& path, std::vector<std::string>* labels);

// Plain-text key=value sidecar, sorted by key.
void write_metadata(const std::string& path, const Metadata& meta);
Metadata read_metadata(const std::string& path);

// Sweep artifacts. Mantel scores and wall-clock times go to separate files
// so the result CSVs are byte-reproducible across reruns.
void write_sweep_results(const std::string& path, const std::vector<SweepCell>& cells);
void write_sweep_timings(const std::string& path, const std::vector<SweepCell>& cells);
void write_sweep_summary(const std::string& path, const std::vector<SweepSummaryRow>& rows);
void write_robustness_grid(const std::string& path, const RobustnessGrid& grid);
void write_benchmark_csv(const std::string& path, const BenchmarkResult& bench);

}  // namespace fig

#include "fig/io.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fig/errors.hpp"

namespace fig {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);  // binary: no CRLF translation
  if (!out) throw InvalidData("cannot write file: " + path);
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidData("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

TimeSeries load_timeseries(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw InvalidData("empty input file: " + path);

  // Header row: any cell that is not a number.
  const std::vector<std::string> first = split_csv(lines[0]);
  bool has_header = false;
  for (const std::string& cell : first) {
    double ignored;
    if (!parse_number(cell, &ignored)) {
      has_header = true;
      break;
    }
  }

  std::vector<int> data_cols;
  int label_col = -1;
  if (has_header) {
    for (std::size_t c = 0; c < first.size(); ++c) {
      const std::string name = lower(first[c]);
      if (name == "t" || name == "index") continue;
      if (name == "label") {
        label_col = static_cast<int>(c);
        continue;
      }
      data_cols.push_back(static_cast<int>(c));
    }
    if (data_cols.empty()) throw InvalidData(path + ": no data columns in header");
  } else {
    for (std::size_t c = 0; c < first.size(); ++c) data_cols.push_back(static_cast<int>(c));
  }

  const std::size_t start = has_header ? 1 : 0;
  const std::size_t n = lines.size() - start;
  if (n == 0) throw InvalidData(path + ": no data rows");

  TimeSeries out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(data_cols.size()));
  if (label_col >= 0) out.labels.reserve(n);
  for (std::size_t rline = start; rline < lines.size(); ++rline) {
    const std::size_t row = rline - start + 1;  // 1-based data row for messages
    const std::vector<std::string> cells = split_csv(lines[rline]);
    if (cells.size() != first.size())
      throw InvalidData(path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " columns, expected " + std::to_string(first.size()));
    for (std::size_t c = 0; c < data_cols.size(); ++c) {
      double v;
      if (!parse_number(cells[static_cast<std::size_t>(data_cols[c])], &v))
        throw InvalidData(path + ": row " + std::to_string(row) + ": could not parse '" +
                          cells[static_cast<std::size_t>(data_cols[c])] + "'");
      if (!std::isfinite(v))
        throw InvalidData(path + ": non-finite value at row " + std::to_string(row));
      out.values(static_cast<Eigen::Index>(rline - start), static_cast<Eigen::Index>(c)) = v;
    }
    if (label_col >= 0) out.labels.push_back(cells[static_cast<std::size_t>(label_col)]);
  }
  return out;
}

void write_timeseries(const std::string& path, const TimeSeries& X) {
  std::ofstream out = open_out(path);
  out << "t";
  for (Eigen::Index c = 0; c < X.values.cols(); ++c) out << ",x" << (c + 1);
  if (X.has_labels()) out << ",label";
  out << "\n";
  for (Eigen::Index i = 0; i < X.values.rows(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < X.values.cols(); ++c) out << "," << format_number(X.values(i, c));
    if (X.has_labels()) out << "," << X.labels[static_cast<std::size_t>(i)];
    out << "\n";
  }
}

void write_theta(const std::string& path, const Matrix& theta) {
  std::ofstream out = open_out(path);
  out << "t,theta1,theta2\n";
  for (Eigen::Index i = 0; i < theta.rows(); ++i)
    out << i << "," << format_number(theta(i, 0)) << "," << format_number(theta(i, 1)) << "\n";
}

Matrix load_matrix_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw InvalidData("empty input file: " + path);
  std::size_t start = 0;
  {
    double ignored;
    for (const std::string& cell : split_csv(lines[0]))
      if (!parse_number(cell, &ignored)) {
        start = 1;
        break;
      }
  }
  if (start >= lines.size()) throw InvalidData(path + ": no data rows");
  const std::size_t cols = split_csv(lines[start]).size();
  Matrix m(static_cast<Eigen::Index>(lines.size() - start), static_cast<Eigen::Index>(cols));
  for (std::size_t r = start; r < lines.size(); ++r) {
    const std::vector<std::string> cells = split_csv(lines[r]);
    if (cells.size() != cols)
      throw InvalidData(path + ": row " + std::to_string(r - start + 1) + " has inconsistent column count");
    for (std::size_t c = 0; c < cols; ++c) {
      double v;
      if (!parse_number(cells[c], &v))
        throw InvalidData(path + ": row " + std::to_string(r - start + 1) + ": could not parse '" + cells[c] + "'");
      m(static_cast<Eigen::Index>(r - start), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m, const std::string& header) {
  std::ofstream out = open_out(path);
  if (!header.empty()) out << header << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_number(m(i, j));
    }
    out << "\n";
  }
}

void write_embedding_csv(const std::string& path, const Embedding& emb,
                         const std::vector<std::string>& labels) {
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != emb.Y.rows())
    throw InvalidData("label count does not match the embedding size");
  std::ofstream out = open_out(path);
  out << "index,label";
  for (int c = 0; c < emb.r; ++c) out << ",y" << (c + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < emb.Y.rows(); ++i) {
    out << i << "," << (labels.empty() ? "" : labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index c = 0; c < emb.Y.cols(); ++c) out << "," << format_number(emb.Y(i, c));
    out << "\n";
  }
}

Embedding load_embedding_csv(const std::string& path, std::vector<std::string>* labels) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 2) throw InvalidData(path + ": no embedding rows");
  const std::vector<std::string> header = split_csv(lines[0]);
  if (header.size() < 3 || lower(header[0]) != "index" || lower(header[1]) != "label")
    throw InvalidData(path + ": expected header index,label,y1..");
  const std::size_t r = header.size() - 2;

  Embedding emb;
  emb.r = static_cast<int>(r);
  emb.Y.resize(static_cast<Eigen::Index>(lines.size() - 1), static_cast<Eigen::Index>(r));
  if (labels) labels->clear();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> cells = split_csv(lines[i]);
    if (cells.size() != header.size())
      throw InvalidData(path + ": row " + std::to_string(i) + " has inconsistent column count");
    if (labels) labels->push_back(cells[1]);
    for (std::size_t c = 0; c < r; ++c) {
      double v;
      if (!parse_number(cells[c + 2], &v))
        throw InvalidData(path + ": row " + std::to_string(i) + ": could not parse '" + cells[c + 2] + "'");
      emb.Y(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return emb;
}

void write_metadata(const std::string& path, const Metadata& meta) {
  std::ofstream out = open_out(path);
  for (const auto& [k, v] : meta) out << k << "=" << v << "\n";
}

Metadata read_metadata(const std::string& path) {
  Metadata meta;
  for (const std::string& line : read_lines(path)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw InvalidData(path + ": expected key=value");
    meta[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return meta;
}

void write_sweep_results(const std::string& path, const std::vector<SweepCell>& cells) {
  std::ofstream out = open_out(path);
  out << "method,sigma_or_window,seed,mantel_r\n";
  for (const SweepCell& c : cells)
    out << c.method << "," << format_number(c.sigma_or_window) << "," << c.seed << ","
        << format_number(c.mantel_r) << "\n";
}

void write_sweep_timings(const std::string& path, const std::vector<SweepCell>& cells) {
  std::ofstream out = open_out(path);
  out << "method,sigma_or_window,seed,runtime_s\n";
  for (const SweepCell& c : cells)
    out << c.method << "," << format_number(c.sigma_or_window) << "," << c.seed << ","
        << format_number(c.runtime_s) << "\n";
}

void write_sweep_summary(const std::string& path, const std::vector<SweepSummaryRow>& rows) {
  std::ofstream out = open_out(path);
  out << "method,sigma_or_window,mean_r,std_r\n";
  for (const SweepSummaryRow& r : rows)
    out << r.method << "," << format_number(r.sigma_or_window) << "," << format_number(r.mean_r)
        << "," << format_number(r.std_r) << "\n";
}

void write_robustness_grid(const std::string& path, const RobustnessGrid& grid) {
  std::ofstream out = open_out(path);
  out << "l2";
  for (int w : grid.window_values) out << ",mean_" << w;
  for (int w : grid.window_values) out << ",std_" << w;
  out << "\n";
  for (Eigen::Index i = 0; i < grid.mean_grid.rows(); ++i) {
    out << grid.window_values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < grid.mean_grid.cols(); ++j) out << "," << format_number(grid.mean_grid(i, j));
    for (Eigen::Index j = 0; j < grid.std_grid.cols(); ++j) out << "," << format_number(grid.std_grid(i, j));
    out << "\n";
  }
}

void write_benchmark_csv(const std::string& path, const BenchmarkResult& bench) {
  std::ofstream out = open_out(path);
  out << "method,repetition,seconds\n";
  for (const BenchmarkRow& row : bench.rows)
    out << row.method << "," << row.repetition << "," << format_number(row.seconds) << "\n";
  out << "fig,median," << format_number(bench.fig_median) << "\n";
  out << "dig,median," << format_number(bench.dig_median) << "\n";
}

}  // namespace fig

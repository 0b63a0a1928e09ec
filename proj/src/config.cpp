#include "fig/config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fig/errors.hpp"
#include "fig/fpca.hpp"

namespace fig {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const std::string v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw InvalidConfig("config key '" + key + "' expects an integer, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const std::string v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw InvalidConfig("config key '" + key + "' expects a nonnegative integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw InvalidConfig("config key '" + key + "' expects a number, got '" + value + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  if (!parts.empty() && parts.back().empty()) parts.pop_back();
  return parts;
}

using Setter = std::function<void(PipelineConfig*, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = {
      {"basis.family", [](PipelineConfig* c, const std::string&, const std::string& v) { c->basis_family = trim(v); }},
      {"basis.b", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->basis_b = static_cast<int>(parse_int(k, v)); }},
      {"windows.l1", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->l1 = static_cast<int>(parse_int(k, v)); }},
      {"windows.l2", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->l2 = static_cast<int>(parse_int(k, v)); }},
      {"windows.stride", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->stride = static_cast<int>(parse_int(k, v)); }},
      {"fpca.k", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->fpca_k = static_cast<int>(parse_int(k, v)); }},
      {"fpca.normalization", [](PipelineConfig* c, const std::string&, const std::string& v) { c->fpca_normalization = trim(v); }},
      {"dig.bins", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->dig_bins = static_cast<int>(parse_int(k, v)); }},
      {"embed.knn", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->embed_knn = static_cast<int>(parse_int(k, v)); }},
      {"embed.alpha", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->embed_alpha = parse_double(k, v); }},
      {"embed.t_override", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->embed_t_override = static_cast<int>(parse_int(k, v)); }},
      {"embed.t_max", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->embed_t_max = static_cast<int>(parse_int(k, v)); }},
      {"embed.r", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->embed_r = static_cast<int>(parse_int(k, v)); }},
      {"embed.mds_tol", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->embed_mds_tol = parse_double(k, v); }},
      {"embed.mds_max_iter", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->embed_mds_max_iter = static_cast<int>(parse_int(k, v)); }},
      {"method", [](PipelineConfig* c, const std::string&, const std::string& v) { c->method = trim(v); }},
      {"seeds",
       [](PipelineConfig* c, const std::string& k, const std::string& v) {
         c->seeds.clear();
         for (const std::string& part : split_list(v)) c->seeds.push_back(parse_u64(k, part));
       }},
      {"simulate.n", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->simulate_n = static_cast<int>(parse_int(k, v)); }},
      {"simulate.sigma_step", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->simulate_sigma_step = parse_double(k, v); }},
      {"simulate.sigma_noise", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->simulate_sigma_noise = parse_double(k, v); }},
      {"sweep.sigma_grid",
       [](PipelineConfig* c, const std::string& k, const std::string& v) {
         c->sweep_sigma_grid.clear();
         for (const std::string& part : split_list(v)) c->sweep_sigma_grid.push_back(parse_double(k, part));
       }},
      {"sweep.l2_values",
       [](PipelineConfig* c, const std::string& k, const std::string& v) {
         c->sweep_l2_values.clear();
         for (const std::string& part : split_list(v)) c->sweep_l2_values.push_back(static_cast<int>(parse_int(k, part)));
       }},
      {"bench.repetitions", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->bench_repetitions = static_cast<int>(parse_int(k, v)); }},
      {"surrogate.n_segments", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->surrogate_n_segments = static_cast<int>(parse_int(k, v)); }},
      {"surrogate.segment_length", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->surrogate_segment_length = static_cast<int>(parse_int(k, v)); }},
      {"surrogate.d", [](PipelineConfig* c, const std::string& k, const std::string& v) { c->surrogate_d = static_cast<int>(parse_int(k, v)); }},
      {"paths.input", [](PipelineConfig* c, const std::string&, const std::string& v) { c->input_path = trim(v); }},
      {"paths.output", [](PipelineConfig* c, const std::string&, const std::string& v) { c->output_dir = trim(v); }},
      {"paths.cache", [](PipelineConfig* c, const std::string&, const std::string& v) { c->cache_dir = trim(v); }},
  };
  return table;
}

}  // namespace

void apply_key(PipelineConfig* cfg, const std::string& key, const std::string& value) {
  const auto it = key_table().find(trim(key));
  if (it == key_table().end()) throw InvalidConfig("unknown config key '" + trim(key) + "'");
  it->second(cfg, trim(key), value);
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file: " + path);
  PipelineConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = t.substr(0, eq);
    if (key.rfind("artifact.", 0) == 0) continue;  // sidecar extras, not settings
    try {
      apply_key(&cfg, key, t.substr(eq + 1));
    } catch (const InvalidConfig& e) {
      throw InvalidConfig(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.basis_family != "fourier") throw InvalidConfig("basis.family must be 'fourier'");
  if (cfg.basis_b < 1) throw InvalidConfig("basis.b must be positive");
  if (cfg.l1 < 1 || cfg.l2 < 1) throw InvalidConfig("window lengths must be at least 1");
  if (cfg.stride < 1) throw InvalidConfig("windows.stride must be at least 1");
  if (cfg.fpca_k < 0) throw InvalidConfig("fpca.k must be nonnegative (0 keeps all components)");
  score_normalization_from_string(cfg.fpca_normalization);
  if (cfg.dig_bins < 2) throw InvalidConfig("dig.bins must be at least 2");
  if (cfg.embed_knn < 1) throw InvalidConfig("embed.knn must be at least 1");
  if (!(cfg.embed_alpha > 0)) throw InvalidConfig("embed.alpha must be positive");
  if (cfg.embed_t_override < 0) throw InvalidConfig("embed.t_override must be nonnegative");
  if (cfg.embed_t_max < 2) throw InvalidConfig("embed.t_max must be at least 2");
  if (cfg.embed_r < 1) throw InvalidConfig("embed.r must be positive");
  if (!(cfg.embed_mds_tol >= 0)) throw InvalidConfig("embed.mds_tol must be nonnegative");
  if (cfg.embed_mds_max_iter < 0) throw InvalidConfig("embed.mds_max_iter must be nonnegative");
  method_from_string(cfg.method);
  if (cfg.seeds.empty()) throw InvalidConfig("seeds must not be empty");
  if (cfg.simulate_n < 2) throw InvalidConfig("simulate.n must be at least 2");
  if (cfg.simulate_sigma_step < 0 || cfg.simulate_sigma_noise < 0)
    throw InvalidConfig("simulate sigma values must be nonnegative");
  for (double s : cfg.sweep_sigma_grid)
    if (s < 0) throw InvalidConfig("sweep.sigma_grid values must be nonnegative");
  for (int l2 : cfg.sweep_l2_values)
    if (l2 < 1) throw InvalidConfig("sweep.l2_values must be at least 1");
  if (cfg.bench_repetitions < 3) throw InvalidConfig("bench.repetitions must be at least 3");
  if (cfg.surrogate_n_segments < 40) throw InvalidConfig("surrogate.n_segments must be at least 40");
  if (cfg.surrogate_segment_length < 1) throw InvalidConfig("surrogate.segment_length must be positive");
  if (cfg.surrogate_d < 2) throw InvalidConfig("surrogate.d must be at least 2");
}

std::string serialize(const PipelineConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["basis.family"] = cfg.basis_family;
  kv["basis.b"] = std::to_string(cfg.basis_b);
  kv["windows.l1"] = std::to_string(cfg.l1);
  kv["windows.l2"] = std::to_string(cfg.l2);
  kv["windows.stride"] = std::to_string(cfg.stride);
  kv["fpca.k"] = std::to_string(cfg.fpca_k);
  kv["fpca.normalization"] = cfg.fpca_normalization;
  kv["dig.bins"] = std::to_string(cfg.dig_bins);
  kv["embed.knn"] = std::to_string(cfg.embed_knn);
  kv["embed.alpha"] = format_double(cfg.embed_alpha);
  kv["embed.t_override"] = std::to_string(cfg.embed_t_override);
  kv["embed.t_max"] = std::to_string(cfg.embed_t_max);
  kv["embed.r"] = std::to_string(cfg.embed_r);
  kv["embed.mds_tol"] = format_double(cfg.embed_mds_tol);
  kv["embed.mds_max_iter"] = std::to_string(cfg.embed_mds_max_iter);
  kv["method"] = cfg.method;
  std::string seeds;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i) seeds += ',';
    seeds += std::to_string(cfg.seeds[i]);
  }
  kv["seeds"] = seeds;
  kv["simulate.n"] = std::to_string(cfg.simulate_n);
  kv["simulate.sigma_step"] = format_double(cfg.simulate_sigma_step);
  kv["simulate.sigma_noise"] = format_double(cfg.simulate_sigma_noise);
  std::string grid;
  for (std::size_t i = 0; i < cfg.sweep_sigma_grid.size(); ++i) {
    if (i) grid += ',';
    grid += format_double(cfg.sweep_sigma_grid[i]);
  }
  kv["sweep.sigma_grid"] = grid;
  std::string l2s;
  for (std::size_t i = 0; i < cfg.sweep_l2_values.size(); ++i) {
    if (i) l2s += ',';
    l2s += std::to_string(cfg.sweep_l2_values[i]);
  }
  kv["sweep.l2_values"] = l2s;
  kv["bench.repetitions"] = std::to_string(cfg.bench_repetitions);
  kv["surrogate.n_segments"] = std::to_string(cfg.surrogate_n_segments);
  kv["surrogate.segment_length"] = std::to_string(cfg.surrogate_segment_length);
  kv["surrogate.d"] = std::to_string(cfg.surrogate_d);
  kv["paths.input"] = cfg.input_path;
  kv["paths.output"] = cfg.output_dir;
  kv["paths.cache"] = cfg.cache_dir;

  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

Sha256 config_hash(const PipelineConfig& cfg) { return sha256(serialize(cfg)); }

FigConfig to_fig_config(const PipelineConfig& cfg) {
  FigConfig out;
  out.basis_count = cfg.basis_b;
  out.l1 = WindowSpec{cfg.l1};
  out.l2 = WindowSpec{cfg.l2};
  out.stride = cfg.stride;
  out.K = cfg.fpca_k;
  out.normalization = score_normalization_from_string(cfg.fpca_normalization);
  return out;
}

DigConfig to_dig_config(const PipelineConfig& cfg) {
  DigConfig out;
  out.bins = cfg.dig_bins;
  out.l1 = WindowSpec{cfg.l1};
  out.l2 = WindowSpec{cfg.l2};
  out.stride = cfg.stride;
  return out;
}

EmbedConfig to_embed_config(const PipelineConfig& cfg) {
  EmbedConfig out;
  out.knn = cfg.embed_knn;
  out.alpha = cfg.embed_alpha;
  out.t_override = cfg.embed_t_override;
  out.t_max = cfg.embed_t_max;
  out.r = cfg.embed_r;
  out.smacof_max_iter = cfg.embed_mds_max_iter;
  out.smacof_tol = cfg.embed_mds_tol;
  return out;
}

}  // namespace fig

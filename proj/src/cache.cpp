#include "fig/cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "fig/errors.hpp"

namespace fig {

namespace {

constexpr char kMagic[4] = {'F', 'I', 'G', 'D'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::string* out, const void* data, std::size_t len) {
  out->append(static_cast<const char*>(data), len);
}

void put_u32(std::string* out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  put_bytes(out, b, 4);
}

void put_u64(std::string* out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  put_bytes(out, b, 8);
}

void put_f64(std::string* out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

struct Reader {
  const unsigned char* p;
  std::size_t left;

  void need(std::size_t n) const {
    if (left < n) throw InvalidData("distance cache file is truncated");
  }
  void take(void* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, p, n);
    p += n;
    left -= n;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    take(b, 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    take(b, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
};

std::uint8_t method_tag(Method m) {
  switch (m) {
    case Method::Fig: return 0;
    case Method::Dig: return 1;
    case Method::Euclidean: return 2;
  }
  throw InvalidData("unknown distance method tag");
}

Method tag_method(std::uint8_t t) {
  switch (t) {
    case 0: return Method::Fig;
    case 1: return Method::Dig;
    case 2: return Method::Euclidean;
    default: throw InvalidData("distance cache has an unknown method tag");
  }
}

}  // namespace

std::string cache_dir() {
  if (const char* env = std::getenv("FIG_CACHE_DIR"); env && *env) return env;
  return ".fig-cache";
}

std::string cache_path(const Sha256& key) {
  return (std::filesystem::path(cache_dir()) / (hex(key) + ".figd")).string();
}

void write_distance_cache(const std::string& path, const DistanceMatrix& D, const Sha256& key) {
  const std::int64_t n = D.D.rows();
  if (n < 1 || D.D.cols() != n) throw InvalidData("distance matrix must be square");

  std::string buf;
  buf.reserve(49 + static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * 4);
  put_bytes(&buf, kMagic, 4);
  put_u32(&buf, kVersion);
  put_u64(&buf, static_cast<std::uint64_t>(n));
  const std::uint8_t tag = method_tag(D.method);
  put_bytes(&buf, &tag, 1);
  put_bytes(&buf, key.data(), key.size());
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) put_f64(&buf, D.D(i, j));

  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidData("cannot write cache file: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw InvalidData("cannot write cache file: " + path);
  }
  std::filesystem::rename(tmp, target);
}

DistanceMatrix read_distance_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidData("cannot open cache file: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Reader r{reinterpret_cast<const unsigned char*>(buf.data()), buf.size()};
  char magic[4];
  r.take(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw InvalidData("not a distance cache file: " + path);
  if (r.u32() != kVersion) throw InvalidData("unsupported distance cache version in " + path);
  const std::uint64_t n = r.u64();
  if (n < 1 || n > (1u << 20)) throw InvalidData("distance cache has an implausible size");
  std::uint8_t tag;
  r.take(&tag, 1);
  Sha256 key{};
  r.take(key.data(), key.size());

  DistanceMatrix D;
  D.method = tag_method(tag);
  D.metadata["config_hash"] = hex(key);
  D.D = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = i + 1; j < n; ++j) {
      const double v = r.f64();
      D.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      D.D(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  if (r.left != 0) throw InvalidData("distance cache has trailing bytes: " + path);
  return D;
}

std::optional<DistanceMatrix> try_load_cached(const Sha256& key) {
  const std::string path = cache_path(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    DistanceMatrix D = read_distance_cache(path);
    if (D.metadata.at("config_hash") != hex(key)) return std::nullopt;
    return D;
  } catch (const Error&) {
    return std::nullopt;  // corrupt entry: recompute and overwrite
  }
}

void store_cached(const Sha256& key, const DistanceMatrix& D) {
  write_distance_cache(cache_path(key), D, key);
}

}  // namespace fig

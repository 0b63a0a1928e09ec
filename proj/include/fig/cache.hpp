#pragma once

#include <optional>
#include <string>

#include "fig/digest.hpp"
#include "fig/types.hpp"

namespace fig {

// Cache directory: FIG_CACHE_DIR if set, else ".fig-cache" in the working
// directory.
std::string cache_dir();

std::string cache_path(const Sha256& key);

// Little-endian binary layout: magic "FIGD", version u32, n u64, method u8,
// 32-byte content hash, then the n(n-1)/2 upper-triangle float64 entries in
// row-major order.
void write_distance_cache(const std::string& path, const DistanceMatrix& D, const Sha256& key);

// Throws InvalidData on a malformed file. The embedded hash is exposed as
// metadata["config_hash"] (hex).
DistanceMatrix read_distance_cache(const std::string& path);

// Loads the entry for `key` if present and its embedded hash matches.
std::optional<DistanceMatrix> try_load_cached(const Sha256& key);
void store_cached(const Sha256& key, const DistanceMatrix& D);

}  // namespace fig

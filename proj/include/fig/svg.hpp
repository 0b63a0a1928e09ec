#pragma once

#include <string>
#include <vector>

#include "fig/embed.hpp"
#include "fig/evaluate.hpp"

namespace fig {

// Scatter plot of a 2-D or 3-D embedding (3-D drawn as a fixed-angle
// orthographic projection): one circle per point, categorical color per
// label, legend and axes; byte-deterministic for fixed input. Dimensions
// outside {2, 3} throw InvalidConfig.
void emit_scatter_svg(const std::string& path, const Embedding& emb,
                      const std::vector<std::string>& labels);

// Line chart of sweep summaries: mean Mantel r against sigma or window
// length, one polyline per method, one-standard-deviation error bars.
void emit_sweep_svg(const std::string& path, const std::vector<SweepSummaryRow>& summary,
                    const std::string& x_label);

}  // namespace fig

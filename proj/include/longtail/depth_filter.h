#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "longtail/depth_map.h"
#include "longtail/execution.h"

namespace longtail {

enum class GradientScheme { kCentralDifference };

// The defaults are tuning values, not published constants.
struct FilterConfig {
  double tau_depth = 0.25;
  double tau_grad = 0.10;
  GradientScheme gradient_scheme = GradientScheme::kCentralDifference;

  void Validate() const;
};

struct FilterReport {
  double scale_s = 1.0;
  std::size_t removed_by_depth = 0;
  std::size_t removed_by_grad = 0;
  std::size_t removed_total = 0;
  // Pixels valid in the geometric map that survive. Pixels without a valid
  // monocular depth are kept untouched.
  std::size_t kept = 0;
};

// Per-pixel real grid; NaN marks pixels where the quantity is undefined.
struct DiscrepancyMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  bool IsValid(int x, int y) const;
};

// Median of a list; even lengths average the two central elements.
double Median(std::vector<double> values);

// s = med{mono(p)} / med{geom(p)} over pixels valid in both maps.
// Throws InvalidArgument (DimensionMismatch / NoValidOverlap).
double MedianScale(const DepthMap& geom, const DepthMap& mono);

// |s*geom - mono| / (s*geom) on jointly valid pixels.
DiscrepancyMap DepthDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                double scale = 1.0,
                                Execution execution = Execution::kParallel);

// | |grad mono| / mono - |grad (s*geom)| / (s*geom) | with central
// differences inside and one-sided differences on the border. A pixel is
// undefined if any stencil pixel is invalid in either map. Throws
// InvalidArgument (TooSmall) for maps narrower or shorter than 2 pixels.
DiscrepancyMap GradientDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                   double scale = 1.0,
                                   Execution execution = Execution::kParallel);

// Invalidates geometric depths that disagree with the monocular prior. The
// output keeps the original (unscaled) values of the surviving pixels.
std::pair<DepthMap, FilterReport> FilterDepth(
    const DepthMap& geom, const DepthMap& mono, const FilterConfig& config = {},
    Execution execution = Execution::kParallel);

}  // namespace longtail

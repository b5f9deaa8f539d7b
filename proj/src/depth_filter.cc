#include "longtail/depth_filter.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "longtail/errors.h"

namespace longtail {
namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

void CheckDimensions(const DepthMap& a, const DepthMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument(fmt::format("DimensionMismatch: {}x{} vs {}x{}", a.width(),
                                      a.height(), b.width(), b.height()));
  }
}

void CheckGradientSize(const DepthMap& map) {
  if (map.width() < 2 || map.height() < 2) {
    throw InvalidArgument(fmt::format(
        "TooSmall: gradients need at least 2x2 pixels, got {}x{}", map.width(),
        map.height()));
  }
}

bool JointlyValid(const DepthMap& geom, const DepthMap& mono, int x, int y) {
  return geom.IsValid(x, y) && mono.IsValid(x, y);
}

// Stencil along one axis: returns the two sample positions and the divisor.
struct Stencil {
  int lo;
  int hi;
  double span;
};

Stencil AxisStencil(int i, int n) {
  if (i == 0) return {0, 1, 1.0};
  if (i == n - 1) return {n - 2, n - 1, 1.0};
  return {i - 1, i + 1, 2.0};
}

// Normalized gradient magnitude |grad D| / D at (x, y) for D = scale * map.
double NormalizedGradient(const DepthMap& map, double scale, int x, int y) {
  const auto sx = AxisStencil(x, map.width());
  const auto sy = AxisStencil(y, map.height());
  const double dx = (scale * map.at(sx.hi, y) - scale * map.at(sx.lo, y)) / sx.span;
  const double dy = (scale * map.at(x, sy.hi) - scale * map.at(x, sy.lo)) / sy.span;
  return std::sqrt(dx * dx + dy * dy) / (scale * map.at(x, y));
}

bool StencilValid(const DepthMap& geom, const DepthMap& mono, int x, int y) {
  const auto sx = AxisStencil(x, geom.width());
  const auto sy = AxisStencil(y, geom.height());
  return JointlyValid(geom, mono, x, y) && JointlyValid(geom, mono, sx.lo, y) &&
         JointlyValid(geom, mono, sx.hi, y) && JointlyValid(geom, mono, x, sy.lo) &&
         JointlyValid(geom, mono, x, sy.hi);
}

// Serial reference path: whole-image passes, one quantity at a time.
namespace reference {

DiscrepancyMap DepthDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                double scale) {
  DiscrepancyMap out{geom.width(), geom.height(),
                     std::vector<double>(geom.size(), kUndefined)};
  std::vector<double> scaled(geom.size());
  for (std::size_t i = 0; i < geom.size(); ++i) scaled[i] = scale * geom.values()[i];
  for (int y = 0; y < geom.height(); ++y) {
    for (int x = 0; x < geom.width(); ++x) {
      if (!JointlyValid(geom, mono, x, y)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * geom.width() + x;
      out.values[i] = std::abs(scaled[i] - static_cast<double>(mono.values()[i])) / scaled[i];
    }
  }
  return out;
}

DiscrepancyMap GradientDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                   double scale) {
  const int w = geom.width();
  const int h = geom.height();
  std::vector<double> geom_norm(geom.size(), kUndefined);
  std::vector<double> mono_norm(geom.size(), kUndefined);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!StencilValid(geom, mono, x, y)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      geom_norm[i] = NormalizedGradient(geom, scale, x, y);
      mono_norm[i] = NormalizedGradient(mono, 1.0, x, y);
    }
  }
  DiscrepancyMap out{w, h, std::vector<double>(geom.size(), kUndefined)};
  for (std::size_t i = 0; i < geom.size(); ++i) {
    if (std::isnan(geom_norm[i])) continue;
    out.values[i] = std::abs(mono_norm[i] - geom_norm[i]);
  }
  return out;
}

}  // namespace reference

namespace kernel {

DiscrepancyMap DepthDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                double scale) {
  const int w = geom.width();
  const int h = geom.height();
  DiscrepancyMap out{w, h, std::vector<double>(geom.size(), kUndefined)};
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!JointlyValid(geom, mono, x, y)) continue;
      const double d = scale * geom.at(x, y);
      out.values[static_cast<std::size_t>(y) * w + x] =
          std::abs(d - static_cast<double>(mono.at(x, y))) / d;
    }
  }
  return out;
}

DiscrepancyMap GradientDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                   double scale) {
  const int w = geom.width();
  const int h = geom.height();
  DiscrepancyMap out{w, h, std::vector<double>(geom.size(), kUndefined)};
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!StencilValid(geom, mono, x, y)) continue;
      out.values[static_cast<std::size_t>(y) * w + x] =
          std::abs(NormalizedGradient(mono, 1.0, x, y) -
                   NormalizedGradient(geom, scale, x, y));
    }
  }
  return out;
}

}  // namespace kernel

}  // namespace

void FilterConfig::Validate() const {
  if (!(tau_depth > 0.0) || !(tau_grad > 0.0)) {
    throw InvalidArgument("filter thresholds must be strictly positive");
  }
}

bool DiscrepancyMap::IsValid(int x, int y) const { return !std::isnan(at(x, y)); }

double Median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty list");
  const auto n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double MedianScale(const DepthMap& geom, const DepthMap& mono) {
  CheckDimensions(geom, mono);
  std::vector<double> geom_values;
  std::vector<double> mono_values;
  for (int y = 0; y < geom.height(); ++y) {
    for (int x = 0; x < geom.width(); ++x) {
      if (!JointlyValid(geom, mono, x, y)) continue;
      geom_values.push_back(geom.at(x, y));
      mono_values.push_back(mono.at(x, y));
    }
  }
  if (geom_values.empty()) {
    throw InvalidArgument("NoValidOverlap: no pixel is valid in both depth maps");
  }
  return Median(std::move(mono_values)) / Median(std::move(geom_values));
}

DiscrepancyMap DepthDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                double scale, Execution execution) {
  CheckDimensions(geom, mono);
  return execution == Execution::kSerial
             ? reference::DepthDiscrepancy(geom, mono, scale)
             : kernel::DepthDiscrepancy(geom, mono, scale);
}

DiscrepancyMap GradientDiscrepancy(const DepthMap& geom, const DepthMap& mono,
                                   double scale, Execution execution) {
  CheckDimensions(geom, mono);
  CheckGradientSize(geom);
  return execution == Execution::kSerial
             ? reference::GradientDiscrepancy(geom, mono, scale)
             : kernel::GradientDiscrepancy(geom, mono, scale);
}

std::pair<DepthMap, FilterReport> FilterDepth(const DepthMap& geom,
                                              const DepthMap& mono,
                                              const FilterConfig& config,
                                              Execution execution) {
  config.Validate();
  FilterReport report;
  report.scale_s = MedianScale(geom, mono);
  const auto depth = DepthDiscrepancy(geom, mono, report.scale_s, execution);
  const auto grad = GradientDiscrepancy(geom, mono, report.scale_s, execution);

  DepthMap filtered(geom.width(), geom.height());
  for (int y = 0; y < geom.height(); ++y) {
    for (int x = 0; x < geom.width(); ++x) {
      if (!geom.IsValid(x, y)) continue;
      const bool by_depth = depth.IsValid(x, y) && depth.at(x, y) > config.tau_depth;
      const bool by_grad = grad.IsValid(x, y) && grad.at(x, y) > config.tau_grad;
      report.removed_by_depth += by_depth ? 1 : 0;
      report.removed_by_grad += by_grad ? 1 : 0;
      if (by_depth || by_grad) {
        ++report.removed_total;
      } else {
        filtered.at(x, y) = geom.at(x, y);
        ++report.kept;
      }
    }
  }
  return {std::move(filtered), report};
}

}  // namespace longtail

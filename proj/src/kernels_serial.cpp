#include <limits>

#include "steer/kernels.hpp"
#include "steer/steering.hpp"

namespace steer::kernels::serial {

PricingResult price_columns(std::span<const double> columns, std::size_t rows, std::span<const double> y) {
  const std::size_t n = columns.size() / rows;
  PricingResult best{0, -std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < n; ++j) {
    const double* col = columns.data() + j * rows;
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += y[i] * col[i];
    if (s > best.score) best = {j, s};
  }
  return best;
}

std::size_t first_improving(std::span<const double> columns, std::size_t rows, std::span<const double> y,
                            double threshold) {
  const std::size_t n = columns.size() / rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double* col = columns.data() + j * rows;
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += y[i] * col[i];
    if (s > threshold) return j;
  }
  return npos;
}

MaxTraceNorm max_trace_norm(std::span<const Matrix> points) {
  MaxTraceNorm best{0, -1.0};
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double v = trace_norm(points[j]);
    if (v > best.value) best = {j, v};
  }
  return best;
}

std::vector<double> trace_norms(std::span<const Matrix> points) {
  std::vector<double> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = trace_norm(points[j]);
  return out;
}

}  // namespace steer::kernels::serial

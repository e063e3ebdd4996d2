#include <limits>

#include "steer/kernels.hpp"
#include "steer/steering.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace steer::kernels {

namespace omp {

PricingResult price_columns(std::span<const double> columns, std::size_t rows, std::span<const double> y) {
  const auto n = static_cast<std::ptrdiff_t>(columns.size() / rows);
  PricingResult best{0, -std::numeric_limits<double>::infinity()};
#pragma omp parallel
  {
    PricingResult local{0, -std::numeric_limits<double>::infinity()};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const double* col = columns.data() + j * rows;
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += y[i] * col[i];
      if (s > local.score) local = {static_cast<std::size_t>(j), s};
    }
#pragma omp critical(steer_price_merge)
    {
      if (local.score > best.score || (local.score == best.score && local.index < best.index)) best = local;
    }
  }
  return best;
}

std::size_t first_improving(std::span<const double> columns, std::size_t rows, std::span<const double> y,
                            double threshold) {
  const auto n = static_cast<std::ptrdiff_t>(columns.size() / rows);
  std::size_t first = npos;
#pragma omp parallel for schedule(static) reduction(min : first)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double* col = columns.data() + j * rows;
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += y[i] * col[i];
    if (s > threshold && static_cast<std::size_t>(j) < first) first = static_cast<std::size_t>(j);
  }
  return first;
}

MaxTraceNorm max_trace_norm(std::span<const Matrix> points) {
  const std::vector<double> values = trace_norms(points);
  MaxTraceNorm best{0, -1.0};
  for (std::size_t j = 0; j < values.size(); ++j)
    if (values[j] > best.value) best = {j, values[j]};
  return best;
}

std::vector<double> trace_norms(std::span<const Matrix> points) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  std::vector<double> out(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = trace_norm(points[j]);
  return out;
}

}  // namespace omp

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

PricingResult price_columns(std::span<const double> columns, std::size_t rows, std::span<const double> y) {
  return omp::price_columns(columns, rows, y);
}

std::size_t first_improving(std::span<const double> columns, std::size_t rows, std::span<const double> y,
                            double threshold) {
  return omp::first_improving(columns, rows, y, threshold);
}

MaxTraceNorm max_trace_norm(std::span<const Matrix> points) { return omp::max_trace_norm(points); }

std::vector<double> trace_norms(std::span<const Matrix> points) { return omp::trace_norms(points); }

}  // namespace steer::kernels

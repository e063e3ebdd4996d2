#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// steer::kernels::serial and an OpenMP version in steer::kernels::omp; the
// unqualified names in steer::kernels dispatch to the OpenMP version when the
// library was built with OpenMP. The two versions return bit-identical
// results (ties broken by lowest index, per-element work is independent).

#include <cstddef>
#include <span>
#include <vector>

#include "steer/linalg.hpp"

namespace steer::kernels {

struct PricingResult {
  std::size_t index = 0;
  double score = 0.0;
};

struct MaxTraceNorm {
  std::size_t index = 0;
  double value = 0.0;
};

namespace serial {
// Maximize y^T A_j over the columns of a column-major block (column j
// occupies columns[j*rows .. j*rows+rows)). Ties go to the lowest index.
// Requires at least one column.
PricingResult price_columns(std::span<const double> columns, std::size_t rows, std::span<const double> y);
/// First column index with y^T A_j > threshold, or npos.
std::size_t first_improving(std::span<const double> columns, std::size_t rows, std::span<const double> y,
                            double threshold);
MaxTraceNorm max_trace_norm(std::span<const Matrix> points);
std::vector<double> trace_norms(std::span<const Matrix> points);
}  // namespace serial

namespace omp {
PricingResult price_columns(std::span<const double> columns, std::size_t rows, std::span<const double> y);
std::size_t first_improving(std::span<const double> columns, std::size_t rows, std::span<const double> y,
                            double threshold);
MaxTraceNorm max_trace_norm(std::span<const Matrix> points);
std::vector<double> trace_norms(std::span<const Matrix> points);
}  // namespace omp

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// True when the OpenMP versions are compiled with OpenMP enabled.
bool openmp_enabled();
int max_threads();

PricingResult price_columns(std::span<const double> columns, std::size_t rows, std::span<const double> y);
std::size_t first_improving(std::span<const double> columns, std::size_t rows, std::span<const double> y,
                            double threshold);
MaxTraceNorm max_trace_norm(std::span<const Matrix> points);
std::vector<double> trace_norms(std::span<const Matrix> points);

}  // namespace steer::kernels

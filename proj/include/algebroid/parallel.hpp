#pragma once

// Batch evaluation of per-point residual kernels.  The OpenMP and serial
// paths compute identical per-point values; reduction into a report is
// always serial and in point order, so reports do not depend on threading.

#include <exception>
#include <string>
#include <vector>

#include "algebroid/report.hpp"

namespace algebroid {

enum class Exec { Serial, Parallel };

/// Default for all batch checks; tests flip it to compare paths.
Exec default_exec();
void set_default_exec(Exec e);

/// results[i] = kernel(points[i]).  The first exception (in point order) is
/// rethrown after the loop.
template <class Kernel>
auto map_points(const std::vector<WPoint>& points, Kernel&& kernel, Exec exec = default_exec()) {
  using R = decltype(kernel(points.front()));
  std::vector<R> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  const long count = static_cast<long>(points.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = kernel(points[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long i = 0; i < count; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = kernel(points[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

/// Kernel returns one residual per name; each becomes a report check.
template <class Kernel>
void record_batch(ResidualReport& report, const std::vector<std::string>& names, const std::vector<double>& tols,
                  const std::vector<WPoint>& points, Kernel&& kernel, Exec exec = default_exec()) {
  const auto results = map_points(points, kernel, exec);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::vector<double>& r = results[i];
    if (r.size() != names.size()) throw DimensionMismatch("kernel returned the wrong number of residuals");
    for (std::size_t k = 0; k < names.size(); ++k) report.record(names[k], r[k], points[i], tols[k]);
  }
}

}  // namespace algebroid

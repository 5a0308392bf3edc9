#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebroid/dual.hpp"
#include "algebroid/errors.hpp"

namespace algebroid {

/// Coefficient array with index labels, row-major.
struct TensorBlock {
  std::vector<std::string> labels;  // e.g. {"i", "h", "k"}
  std::vector<std::size_t> dims;
  std::vector<Complex> values;
  /// Index pair (positions) in which the defining formula is antisymmetric.
  std::optional<std::pair<std::size_t, std::size_t>> antisymmetric;

  TensorBlock() = default;
  TensorBlock(std::vector<std::string> labels_, std::vector<std::size_t> dims_,
              std::optional<std::pair<std::size_t, std::size_t>> antisym = std::nullopt);

  std::size_t offset(std::initializer_list<std::size_t> idx) const;
  Complex& at(std::initializer_list<std::size_t> idx) { return values[offset(idx)]; }
  const Complex& at(std::initializer_list<std::size_t> idx) const { return values[offset(idx)]; }

  /// max |X(..a..b..) + X(..b..a..)| over the declared pair (0 if none).
  double antisymmetry_defect() const;
  double max_abs() const;
};

struct TensorTable {
  std::map<std::string, TensorBlock> blocks;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;

  const TensorBlock& block(const std::string& name) const;
  TensorBlock& add(const std::string& name, TensorBlock b);
};

}  // namespace algebroid

#include "algebroid/tensor_table.hpp"

#include <algorithm>
#include <cmath>

namespace algebroid {

TensorBlock::TensorBlock(std::vector<std::string> labels_, std::vector<std::size_t> dims_,
                         std::optional<std::pair<std::size_t, std::size_t>> antisym)
    : labels(std::move(labels_)), dims(std::move(dims_)), antisymmetric(antisym) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  values.assign(total, Complex{});
}

std::size_t TensorBlock::offset(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != dims.size()) throw DimensionMismatch("tensor index arity mismatch");
  std::size_t off = 0;
  std::size_t pos = 0;
  for (auto i : idx) {
    if (i >= dims[pos]) throw DimensionMismatch("tensor index out of range");
    off = off * dims[pos] + i;
    ++pos;
  }
  return off;
}

double TensorBlock::antisymmetry_defect() const {
  if (!antisymmetric) return 0.0;
  const auto [a, b] = *antisymmetric;
  double worst = 0;
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t p = dims.size(); p-- > 0;) {
      idx[p] = rem % dims[p];
      rem /= dims[p];
    }
    std::vector<std::size_t> sw = idx;
    std::swap(sw[a], sw[b]);
    std::size_t other = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) other = other * dims[p] + sw[p];
    worst = std::max(worst, std::abs(values[flat] + values[other]));
  }
  return worst;
}

double TensorBlock::max_abs() const {
  double m = 0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

const TensorBlock& TensorTable::block(const std::string& name) const {
  auto it = blocks.find(name);
  if (it == blocks.end()) throw Error("no tensor block named '" + name + "'");
  return it->second;
}

TensorBlock& TensorTable::add(const std::string& name, TensorBlock b) {
  return blocks[name] = std::move(b);
}

}  // namespace algebroid

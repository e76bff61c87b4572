#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace dsel {

/// Sparse real vector: strictly increasing indices, parallel values.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
  bool empty() const { return index.empty(); }

  double dot(std::span<const double> dense) const {
    double s = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k) s += value[k] * dense[index[k]];
    return s;
  }

  double norm() const {
    double s = 0.0;
    for (double v : value) s += v * v;
    return std::sqrt(s);
  }

  std::vector<double> to_dense(std::size_t dim) const {
    std::vector<double> out(dim, 0.0);
    for (std::size_t k = 0; k < index.size(); ++k) out[index[k]] = value[k];
    return out;
  }

  static SparseVector from_dense(std::span<const double> dense) {
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != 0.0) {
        v.index.push_back(static_cast<std::uint32_t>(i));
        v.value.push_back(dense[i]);
      }
    }
    return v;
  }

  bool operator==(const SparseVector&) const = default;
};

}  // namespace dsel

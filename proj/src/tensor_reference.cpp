#include "lossent/error.hpp"
#include "lossent/tensor.hpp"

#include <algorithm>

namespace lossent::reference {

namespace {

void check_square(const CMatrix& mat, const DimVector& dims) {
  if (mat.rows() != mat.cols() || static_cast<std::size_t>(mat.rows()) != dims.total())
    throw InvalidInput("matrix does not match dims " + dims.to_string());
}

bool contains(const IndexSet& s, std::size_t i) { return std::find(s.begin(), s.end(), i) != s.end(); }

}  // namespace

CMatrix partial_trace(const CMatrix& mat, const DimVector& dims, const IndexSet& traced) {
  check_square(mat, dims);
  const IndexSet lost = normalize_index_set(traced, dims.size(), "partial trace");
  if (lost.size() == dims.size()) throw InvalidInput("partial trace leaves an empty remainder");
  const IndexSet kept = complement(lost, dims.size());
  const DimVector out_dims = dims.select(kept);
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(out_dims.total()),
                              static_cast<Eigen::Index>(out_dims.total()));
  const std::size_t n = dims.total();
  for (std::size_t r = 0; r < n; ++r) {
    const auto rd = dims.digits(r);
    for (std::size_t c = 0; c < n; ++c) {
      const auto cd = dims.digits(c);
      bool diagonal_on_lost = true;
      for (std::size_t s : lost) diagonal_on_lost = diagonal_on_lost && rd[s] == cd[s];
      if (!diagonal_on_lost) continue;
      std::vector<std::size_t> ro, co;
      for (std::size_t s : kept) {
        ro.push_back(rd[s]);
        co.push_back(cd[s]);
      }
      out(static_cast<Eigen::Index>(out_dims.index_of(ro)),
          static_cast<Eigen::Index>(out_dims.index_of(co))) +=
          mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

CMatrix partial_transpose(const CMatrix& mat, const DimVector& dims, const IndexSet& transposed) {
  check_square(mat, dims);
  const IndexSet t = normalize_index_set(transposed, dims.size(), "partial transpose");
  const std::size_t n = dims.total();
  CMatrix out(mat.rows(), mat.cols());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      auto rd = dims.digits(r);
      auto cd = dims.digits(c);
      for (std::size_t s = 0; s < dims.size(); ++s)
        if (contains(t, s)) std::swap(rd[s], cd[s]);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          mat(static_cast<Eigen::Index>(dims.index_of(rd)),
              static_cast<Eigen::Index>(dims.index_of(cd)));
    }
  }
  return out;
}

CMatrix permute_subsystems(const CMatrix& mat, const DimVector& dims,
                           const std::vector<std::size_t>& order) {
  check_square(mat, dims);
  if (order.size() != dims.size()) throw InvalidInput("permutation has wrong length");
  std::vector<std::size_t> out_dims_v;
  for (std::size_t o : order) out_dims_v.push_back(dims[o]);
  const DimVector out_dims(out_dims_v);
  const std::size_t n = dims.total();
  CMatrix out(mat.rows(), mat.cols());
  for (std::size_t r = 0; r < n; ++r) {
    const auto rd = out_dims.digits(r);
    std::vector<std::size_t> ri(dims.size());
    for (std::size_t i = 0; i < order.size(); ++i) ri[order[i]] = rd[i];
    for (std::size_t c = 0; c < n; ++c) {
      const auto cd = out_dims.digits(c);
      std::vector<std::size_t> ci(dims.size());
      for (std::size_t i = 0; i < order.size(); ++i) ci[order[i]] = cd[i];
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          mat(static_cast<Eigen::Index>(dims.index_of(ri)),
              static_cast<Eigen::Index>(dims.index_of(ci)));
    }
  }
  return out;
}

}  // namespace lossent::reference

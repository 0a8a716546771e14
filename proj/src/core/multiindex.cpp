#include "core/multiindex.hpp"

#include "core/errors.hpp"

#include <numeric>

namespace musielak {

MultiIndex::MultiIndex(std::vector<int> components) : a_(std::move(components)) {
  for (int c : a_) require(c >= 0, ErrorCode::invalid_argument, "multi-index components must be nonnegative");
}

MultiIndex MultiIndex::zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

MultiIndex MultiIndex::unit(int dim, int axis) {
  require(axis >= 0 && axis < dim, ErrorCode::invalid_argument, "axis out of range");
  std::vector<int> c(static_cast<std::size_t>(dim), 0);
  c[static_cast<std::size_t>(axis)] = 1;
  return MultiIndex(std::move(c));
}

int MultiIndex::order() const noexcept { return std::accumulate(a_.begin(), a_.end(), 0); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  require(dim() == other.dim(), ErrorCode::invalid_argument, "multi-index dimension mismatch");
  std::vector<int> c(a_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.a_[i];
  return MultiIndex(std::move(c));
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a_[i]);
  }
  return s + ")";
}

namespace {

void enumerate(int dim, int m, std::vector<int>& head, std::vector<MultiIndex>& out) {
  if (dim == 1) {
    head.push_back(m);
    out.emplace_back(head);
    head.pop_back();
    return;
  }
  for (int k = m; k >= 0; --k) {
    head.push_back(k);
    enumerate(dim - 1, m - k, head, out);
    head.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> multiindices_of_order(int dim, int m) {
  require(dim >= 1, ErrorCode::invalid_argument, "dimension must be positive");
  require(m >= 0, ErrorCode::invalid_argument, "order must be nonnegative");
  std::vector<MultiIndex> out;
  std::vector<int> head;
  enumerate(dim, m, head, out);
  return out;
}

std::vector<MultiIndex> multiindices_up_to(int dim, int m) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= m; ++k) {
    auto block = multiindices_of_order(dim, k);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

std::size_t count_multiindices_of_order(int dim, int m) {
  // C(dim + m - 1, m), kept in exact integer arithmetic.
  std::size_t num = 1, den = 1;
  for (int i = 1; i <= m; ++i) {
    num *= static_cast<std::size_t>(dim - 1 + i);
    den *= static_cast<std::size_t>(i);
  }
  return num / den;
}

}  // namespace musielak

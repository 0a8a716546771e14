#ifndef MUSIELAK_CORE_MULTIINDEX_HPP
#define MUSIELAK_CORE_MULTIINDEX_HPP

#include <string>
#include <vector>

namespace musielak {

/// Derivative multi-index alpha = (alpha_1, ..., alpha_N) with |alpha| = sum.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);
  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int axis);

  int dim() const noexcept { return static_cast<int>(a_.size()); }
  int order() const noexcept;
  int operator[](int axis) const { return a_.at(static_cast<std::size_t>(axis)); }

  MultiIndex operator+(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const noexcept { return a_ == other.a_; }

  const std::vector<int>& components() const noexcept { return a_; }
  std::string to_string() const;

private:
  std::vector<int> a_;
};

/// All multi-indices of exact order m in the given dimension, in a fixed
/// order (first component descending, then recursively).
std::vector<MultiIndex> multiindices_of_order(int dim, int m);

/// Orders 0, 1, ..., m concatenated, each block in the fixed order above.
std::vector<MultiIndex> multiindices_up_to(int dim, int m);

/// #{alpha : |alpha| = m} = C(dim + m - 1, m).
std::size_t count_multiindices_of_order(int dim, int m);

}  // namespace musielak

#endif

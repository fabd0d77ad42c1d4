#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "kcontract/linalg.hpp"

namespace kcontract {

/// C(n, k) by Pascal recurrence in 64-bit integers; throws InvalidInput on
/// overflow or n > tols::max_compound_dim.
std::int64_t binomial(int n, int k);

/// A strictly increasing k-subset of [1, n]. Its lexicographic rank (0-based
/// position among all C(n, k) subsets) is the single indexing convention for
/// compound-matrix rows and columns and wedge coefficients.
class IndexSet {
 public:
  IndexSet(int n, std::vector<int> members);

  int ambient() const noexcept { return n_; }
  int size() const noexcept { return static_cast<int>(members_.size()); }
  const std::vector<int>& members() const noexcept { return members_; }

  std::size_t rank() const;
  static IndexSet from_rank(int k, int n, std::size_t rank);

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) {
    return a.members_ <=> b.members_;
  }

 private:
  int n_;
  std::vector<int> members_;
};

/// All k-subsets of [1, n] in lexicographic order; length C(n, k).
std::vector<IndexSet> lex_index_sets(int k, int n);

/// k-th multiplicative compound: the C(n,k) x C(m,k) matrix of all order-k
/// minors of A, rows and columns in lexicographic order. Minors are computed
/// by fully pivoted elimination, which keeps the transpose and
/// column-permutation identities bit-exact on generic data.
Matrix mult_compound(const Matrix& a, int k);

/// k-th additive compound, built combinatorially from the entries of A:
/// diagonal entries are k-sums of diagonal entries, entries for index sets
/// differing in one member l -> m are (-1)^sigma a_{lm} with sigma the count
/// of shared members strictly between l and m, all other entries are zero.
/// Agrees with d/de (I + eA)^(k) at e = 0.
Matrix add_compound(const Matrix& a, int k);

/// Coefficients of a simple k-blade over the lexicographic basis.
struct WedgeVector {
  int n = 0;
  int k = 0;
  Vector coeffs;  // length C(n, k)
};

/// Wedge product of k vectors in R^n: the column of order-k minors of
/// [a^1 ... a^k]. Swapping two inputs negates every coefficient exactly, and
/// repeated inputs produce the exact zero vector.
WedgeVector wedge(std::span<const Vector> vectors);

/// L2 norm of the wedge product: the k-volume of the spanned parallelotope.
double k_volume(std::span<const Vector> vectors);

}  // namespace kcontract

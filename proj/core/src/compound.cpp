#include "kcontract/compound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kcontract/tolerances.hpp"

namespace kcontract {

namespace {

// Result matrices are dense in C(n,k) x C(m,k); refuse anything that could
// not be worked with at these problem sizes anyway.
constexpr std::int64_t kMaxCompoundEntries = std::int64_t{1} << 24;

// Determinant by fully pivoted Gaussian elimination. The update is written
// as x - (a*b)/p, whose operands commute under transposition, so minors of
// A and A^T evaluate bit-identically (and column swaps flip only the sign).
double det_full_pivot(std::vector<double>& w, int k) {
  auto at = [&](int i, int j) -> double& { return w[static_cast<std::size_t>(i) * k + j]; };
  double sign = 1.0;
  double det = 1.0;
  for (int s = 0; s < k; ++s) {
    int pi = s, pj = s;
    double best = std::abs(at(s, s));
    for (int i = s; i < k; ++i) {
      for (int j = s; j < k; ++j) {
        const double mag = std::abs(at(i, j));
        if (mag > best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    }
    if (best == 0.0) return 0.0;
    if (pi != s) {
      for (int j = 0; j < k; ++j) std::swap(at(s, j), at(pi, j));
      sign = -sign;
    }
    if (pj != s) {
      for (int i = 0; i < k; ++i) std::swap(at(i, s), at(i, pj));
      sign = -sign;
    }
    const double pivot = at(s, s);
    for (int i = s + 1; i < k; ++i) {
      for (int j = s + 1; j < k; ++j) {
        at(i, j) -= (at(i, s) * at(s, j)) / pivot;
      }
    }
    det *= pivot;
  }
  return sign * det;
}

}  // namespace

std::int64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw InvalidInput("binomial: need 0 <= k <= n");
  if (n > tols::max_compound_dim) {
    throw InvalidInput("binomial: n exceeds the supported cap of 30");
  }
  k = std::min(k, n - k);
  std::vector<std::int64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      if (row[j] > std::numeric_limits<std::int64_t>::max() - row[j - 1]) {
        throw InvalidInput("binomial: 64-bit overflow");
      }
      row[j] += row[j - 1];
    }
  }
  return row[k];
}

IndexSet::IndexSet(int n, std::vector<int> members) : n_(n), members_(std::move(members)) {
  if (n_ < 1 || members_.empty() || static_cast<int>(members_.size()) > n_) {
    throw InvalidInput("IndexSet: need 1 <= k <= n");
  }
  int prev = 0;
  for (int m : members_) {
    if (m <= prev || m > n_) {
      throw InvalidInput("IndexSet: members must be strictly increasing in [1, n]");
    }
    prev = m;
  }
}

std::size_t IndexSet::rank() const {
  const int k = size();
  std::size_t r = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < members_[static_cast<std::size_t>(i)]; ++v) {
      r += static_cast<std::size_t>(binomial(n_ - v, k - i - 1));
    }
    prev = members_[static_cast<std::size_t>(i)];
  }
  return r;
}

IndexSet IndexSet::from_rank(int k, int n, std::size_t rank) {
  if (k < 1 || k > n) throw InvalidInput("IndexSet::from_rank: need 1 <= k <= n");
  if (rank >= static_cast<std::size_t>(binomial(n, k))) {
    throw InvalidInput("IndexSet::from_rank: rank out of range");
  }
  std::vector<int> members;
  members.reserve(static_cast<std::size_t>(k));
  int v = 1;
  for (int i = 0; i < k; ++i) {
    for (;; ++v) {
      const auto block = static_cast<std::size_t>(binomial(n - v, k - i - 1));
      if (rank < block) break;
      rank -= block;
    }
    members.push_back(v);
    ++v;
  }
  return IndexSet(n, std::move(members));
}

std::vector<IndexSet> lex_index_sets(int k, int n) {
  if (k < 1 || k > n) throw InvalidInput("lex_index_sets: need 1 <= k <= n");
  const auto count = static_cast<std::size_t>(binomial(n, k));
  std::vector<IndexSet> out;
  out.reserve(count);

  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
  for (;;) {
    out.emplace_back(n, cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

Matrix mult_compound(const Matrix& a, int k) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  if (k < 1 || k > std::min(n, m)) {
    throw InvalidInput("mult_compound: need 1 <= k <= min(rows, cols)");
  }
  if (k == 1) return a;

  const std::int64_t r_rows = binomial(n, k);
  const std::int64_t r_cols = binomial(m, k);
  if (r_rows * r_cols > kMaxCompoundEntries) {
    throw InvalidInput("mult_compound: result dimension too large");
  }

  const auto row_sets = lex_index_sets(k, n);
  const auto col_sets = lex_index_sets(k, m);

  Matrix out(static_cast<std::size_t>(r_rows), static_cast<std::size_t>(r_cols));
  std::vector<double> sub(static_cast<std::size_t>(k) * k);
  for (std::size_t i = 0; i < row_sets.size(); ++i) {
    for (std::size_t j = 0; j < col_sets.size(); ++j) {
      const auto& rows = row_sets[i].members();
      const auto& cols = col_sets[j].members();
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
          sub[static_cast<std::size_t>(r) * k + c] =
              a(static_cast<std::size_t>(rows[static_cast<std::size_t>(r)] - 1),
                static_cast<std::size_t>(cols[static_cast<std::size_t>(c)] - 1));
        }
      }
      out(i, j) = det_full_pivot(sub, k);
    }
  }
  return out;
}

Matrix add_compound(const Matrix& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != a.rows()) throw InvalidInput("add_compound: matrix must be square");
  if (k < 1 || k > n) throw InvalidInput("add_compound: need 1 <= k <= n");
  if (k == 1) return a;

  const std::int64_t r = binomial(n, k);
  if (r * r > kMaxCompoundEntries) {
    throw InvalidInput("add_compound: result dimension too large");
  }
  const auto sets = lex_index_sets(k, n);

  Matrix out(static_cast<std::size_t>(r), static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& si = sets[i].members();
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const auto& sj = sets[j].members();
      if (i == j) {
        double acc = 0.0;
        for (int l : si) acc += a(static_cast<std::size_t>(l - 1), static_cast<std::size_t>(l - 1));
        out(i, i) = acc;
        continue;
      }
      // Entry is nonzero only when the sets differ in exactly one member:
      // l only in the row set, m only in the column set.
      int l = -1, m = -1;
      bool more_than_one = false;
      std::size_t p = 0, q = 0;
      while (p < si.size() && q < sj.size()) {
        if (si[p] == sj[q]) {
          ++p;
          ++q;
        } else if (si[p] < sj[q]) {
          if (l != -1) { more_than_one = true; break; }
          l = si[p++];
        } else {
          if (m != -1) { more_than_one = true; break; }
          m = sj[q++];
        }
      }
      if (!more_than_one && p < si.size()) {
        if (l != -1 || p + 1 < si.size()) more_than_one = true;
        else l = si[p];
      }
      if (!more_than_one && q < sj.size()) {
        if (m != -1 || q + 1 < sj.size()) more_than_one = true;
        else m = sj[q];
      }
      if (more_than_one || l == -1 || m == -1) continue;

      const int lo = std::min(l, m), hi = std::max(l, m);
      int sigma = 0;
      for (int c : si) {
        if (c > lo && c < hi) ++sigma;
      }
      const double val = a(static_cast<std::size_t>(l - 1), static_cast<std::size_t>(m - 1));
      out(i, j) = (sigma % 2 == 0) ? val : -val;
    }
  }
  return out;
}

WedgeVector wedge(std::span<const Vector> vectors) {
  const int k = static_cast<int>(vectors.size());
  if (k < 1) throw InvalidInput("wedge: need at least one vector");
  const std::size_t n = vectors[0].dim();
  if (static_cast<std::size_t>(k) > n) throw InvalidInput("wedge: more vectors than dimensions");
  for (const auto& v : vectors) {
    if (v.dim() != n) throw InvalidInput("wedge: mixed vector dimensions");
  }

  Matrix cols(n, static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) cols(i, j) = vectors[j][i];
  }
  const Matrix minors = mult_compound(cols, k);

  WedgeVector out{static_cast<int>(n), k, Vector(minors.rows())};
  for (std::size_t i = 0; i < minors.rows(); ++i) out.coeffs[i] = minors(i, 0);
  return out;
}

double k_volume(std::span<const Vector> vectors) {
  return vector_norm(wedge(vectors).coeffs, NormKind::L2);
}

}  // namespace kcontract

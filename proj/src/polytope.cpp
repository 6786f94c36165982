#include "alift/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace alift {

namespace {

// Binomial coefficient with saturation, for the active-set cap check.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k,
                                  std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > cap) return cap + 1;
    r = r * (n - k + i) / i;
  }
  return r;
}

// Gaussian elimination with partial pivoting; returns false when the
// system is singular at the pivot threshold.
bool solve_square(Matrix a, Vector b, Vector& out, double pivot_tol) {
  const Index n = a.rows();
  for (Index col = 0; col < n; ++col) {
    Index pivot = col;
    double best = std::abs(a(col, col));
    for (Index r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best <= pivot_tol) return false;
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b(pivot), b(col));
    }
    for (Index r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      a.row(r).tail(n - col) -= f * a.row(col).tail(n - col);
      b(r) -= f * b(col);
    }
  }
  out.resize(n);
  for (Index r = n - 1; r >= 0; --r) {
    double acc = b(r);
    for (Index c = r + 1; c < n; ++c) acc -= a(r, c) * out(c);
    out(r) = acc / a(r, r);
  }
  return true;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int i, int j) { parent[find(i)] = find(j); }
};

}  // namespace

VertexSet enumerate_vertices(const Channel& s_given_x, const ProbVector& p_s,
                             double eps, std::uint64_t active_set_cap) {
  if (eps < 0.0) {
    throw InfeasibleEpsError("eps must be >= 0, got " + std::to_string(eps));
  }
  const Index n = s_given_x.input_card();   // |X|
  const Index m = s_given_x.output_card();  // |S|
  const Vector bounds = std::exp(eps) * p_s.values();  // e^eps P_S
  const Matrix& c = s_given_x.matrix();
  constexpr double kPivotTol = 1e-11;

  const std::uint64_t total = binomial_saturating(
      static_cast<std::uint64_t>(n + m), static_cast<std::uint64_t>(n - 1),
      active_set_cap);
  if (total > active_set_cap) {
    throw CapExceededError("active-set enumeration would exceed cap");
  }

  auto lift_feasible = [&](const Vector& v) {
    for (Index s = 0; s < m; ++s) {
      if (c.row(s).dot(v) > bounds(s) * (1.0 + kFeasTol)) return false;
    }
    return true;
  };

  std::vector<Vector> found;
  if (n == 1) {
    Vector one = Vector::Ones(1);
    if (lift_feasible(one)) found.push_back(one);
  } else {
    // Constraint rows: indices [0, n) are nonnegativity rows e_x (rhs 0);
    // [n, n+m) are tight lift rows with rhs e^eps P_S(s).
    Matrix a(n, n);
    Vector b(n), v;
    a.row(0).setOnes();
    b(0) = 1.0;
    const Index k = n - 1;       // active rows per system
    const Index n_rows = n + m;  // choices
    std::vector<Index> combo(k);
    std::iota(combo.begin(), combo.end(), Index{0});
    while (true) {
      for (Index r = 0; r < k; ++r) {
        const Index idx = combo[r];
        if (idx < n) {
          a.row(r + 1).setZero();
          a(r + 1, idx) = 1.0;
          b(r + 1) = 0.0;
        } else {
          a.row(r + 1) = c.row(idx - n);
          b(r + 1) = bounds(idx - n);
        }
      }
      if (solve_square(a, b, v, kPivotTol) && v.minCoeff() >= -kFeasTol &&
          (a * v - b).lpNorm<Eigen::Infinity>() <= 1e-8 && lift_feasible(v)) {
        for (Index i = 0; i < n; ++i) {
          if (v(i) < 0.0) v(i) = 0.0;
        }
        const double sum = v.sum();
        if (std::abs(sum - 1.0) > 1e-12) v /= sum;
        found.push_back(v);
      }
      // advance to the next k-combination of [0, n_rows)
      Index pos = k - 1;
      while (pos >= 0 && combo[pos] == n_rows - k + pos) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (Index r = pos + 1; r < k; ++r) combo[r] = combo[r - 1] + 1;
    }
  }

  // Deduplicate: cluster solutions within kDedupeTol and keep the
  // lexicographically smallest representative of each cluster.
  UnionFind uf(found.size());
  const int nfound = static_cast<int>(found.size());
  for (int i = 0; i < nfound; ++i) {
    for (int j = i + 1; j < nfound; ++j) {
      if ((found[i] - found[j]).lpNorm<Eigen::Infinity>() < kDedupeTol) {
        uf.unite(i, j);
      }
    }
  }
  std::vector<int> rep_of_root(found.size(), -1);
  for (int i = 0; i < nfound; ++i) {
    int& rep = rep_of_root[uf.find(i)];
    if (rep < 0 || lex_less(found[i], found[rep])) rep = i;
  }
  std::vector<const Vector*> unique;
  for (int i = 0; i < nfound; ++i) {
    if (rep_of_root[uf.find(i)] == i) unique.push_back(&found[i]);
  }
  std::sort(unique.begin(), unique.end(),
            [](const Vector* x, const Vector* y) { return lex_less(*x, *y); });

  VertexSet out;
  out.eps_level = eps;
  out.provenance = VertexProvenance::kPolytopeVertex;
  out.vertices.resize(n, static_cast<Index>(unique.size()));
  for (size_t i = 0; i < unique.size(); ++i) {
    out.vertices.col(static_cast<Index>(i)) = *unique[i];
  }
  return out;
}

}  // namespace alift

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

// Exact solve of a square rational system by Gauss-Jordan elimination.
// Returns false when singular.
bool solve_exact(RatMatrix a, RatVector b, RatVector& out) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const Rat inv = 1 / a[col][col];
    for (size_t c = col; c < n; ++c) a[col][c] *= inv;
    b[col] *= inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rat f = a[r][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  out = std::move(b);
  return true;
}

double entropy_bits(const alift::Vector& v) {
  double h = 0.0;
  for (alift::Index i = 0; i < v.size(); ++i) {
    if (v(i) > 0.0) h -= v(i) * std::log2(v(i));
  }
  return h;
}

}  // namespace

alift::Matrix RationalJoint::table_double() const {
  alift::Matrix m(s_card, x_card);
  for (int s = 0; s < s_card; ++s) {
    for (int x = 0; x < x_card; ++x) m(s, x) = table[s][x].get_d();
  }
  return m;
}

RationalJoint random_rational_joint(std::mt19937_64& eng, int s_card,
                                    int x_card, int max_cell) {
  RationalJoint j;
  j.s_card = s_card;
  j.x_card = x_card;
  std::uniform_int_distribution<long> cell(1, max_cell);
  long total = 0;
  std::vector<std::vector<long>> raw(s_card, std::vector<long>(x_card));
  for (auto& row : raw) {
    for (long& v : row) {
      v = cell(eng);
      total += v;
    }
  }
  j.table.assign(s_card, RatVector(x_card));
  j.p_s.assign(s_card, 0);
  j.p_x.assign(x_card, 0);
  for (int s = 0; s < s_card; ++s) {
    for (int x = 0; x < x_card; ++x) {
      j.table[s][x] = Rat(raw[s][x], total);
      j.table[s][x].canonicalize();
      j.p_s[s] += j.table[s][x];
      j.p_x[x] += j.table[s][x];
    }
  }
  j.channel.assign(s_card, RatVector(x_card));
  for (int s = 0; s < s_card; ++s) {
    for (int x = 0; x < x_card; ++x) j.channel[s][x] = j.table[s][x] / j.p_x[x];
  }
  return j;
}

Rat max_lift(const RationalJoint& j) {
  Rat best = 0;
  for (int s = 0; s < j.s_card; ++s) {
    for (int x = 0; x < j.x_card; ++x) {
      best = std::max(best, j.channel[s][x] / j.p_s[s]);
    }
  }
  return best;
}

std::vector<RatVector> enumerate_vertices_exact(const RationalJoint& j,
                                                const Rat& lift_bound) {
  const int n = j.x_card;
  const int m = j.s_card;
  RatVector bounds(m);
  for (int s = 0; s < m; ++s) bounds[s] = lift_bound * j.p_s[s];

  std::vector<RatVector> vertices;
  auto consider = [&](const RatVector& v) {
    for (const Rat& coord : v) {
      if (coord < 0) return;
    }
    for (int s = 0; s < m; ++s) {
      Rat dot = 0;
      for (int x = 0; x < n; ++x) dot += j.channel[s][x] * v[x];
      if (dot > bounds[s]) return;
    }
    for (const RatVector& u : vertices) {
      if (u == v) return;
    }
    vertices.push_back(v);
  };

  if (n == 1) {
    consider(RatVector{Rat(1)});
    return vertices;
  }

  std::vector<int> combo(n - 1);
  for (int i = 0; i < n - 1; ++i) combo[i] = i;
  const int n_rows = n + m;
  while (true) {
    RatMatrix a(n, RatVector(n, 0));
    RatVector b(n, 0);
    for (int c = 0; c < n; ++c) a[0][c] = 1;
    b[0] = 1;
    for (int r = 0; r < n - 1; ++r) {
      const int idx = combo[r];
      if (idx < n) {
        a[r + 1][idx] = 1;
        b[r + 1] = 0;
      } else {
        for (int c = 0; c < n; ++c) a[r + 1][c] = j.channel[idx - n][c];
        b[r + 1] = bounds[idx - n];
      }
    }
    RatVector v;
    if (solve_exact(std::move(a), std::move(b), v)) consider(v);

    int pos = n - 2;
    while (pos >= 0 && combo[pos] == n_rows - (n - 1) + pos) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (int r = pos + 1; r < n - 1; ++r) combo[r] = combo[r - 1] + 1;
  }
  return vertices;
}

alift::Matrix to_double_columns(const std::vector<RatVector>& vertices) {
  if (vertices.empty()) return alift::Matrix(0, 0);
  alift::Matrix m(static_cast<alift::Index>(vertices.front().size()),
                  static_cast<alift::Index>(vertices.size()));
  for (size_t c = 0; c < vertices.size(); ++c) {
    for (size_t r = 0; r < vertices[c].size(); ++r) {
      m(static_cast<alift::Index>(r), static_cast<alift::Index>(c)) =
          vertices[c][r].get_d();
    }
  }
  return m;
}

double min_entropy_mixture_exhaustive(const alift::Matrix& candidates,
                                      const alift::Vector& p_x) {
  const alift::Index n = p_x.size();
  const alift::Index m = candidates.cols();
  if (m == 0) throw std::runtime_error("no candidates");

  alift::Matrix a(n + 1, m);
  a.topRows(n) = candidates;
  a.bottomRows(1).setOnes();
  alift::Vector b(n + 1);
  b.head(n) = p_x;
  b(n) = 1.0;

  Eigen::ColPivHouseholderQR<alift::Matrix> full(a);
  full.setThreshold(1e-10);
  const alift::Index rank = full.rank();

  alift::Vector costs(m);
  for (alift::Index i = 0; i < m; ++i) costs(i) = entropy_bits(candidates.col(i));

  double best = std::numeric_limits<double>::infinity();
  std::vector<alift::Index> subset;
  // Every basic feasible solution is supported on at most `rank`
  // linearly independent columns; enumerate all such subsets.
  auto search = [&](auto&& self, alift::Index start, alift::Index remaining) -> void {
    if (!subset.empty()) {
      alift::Matrix sub(n + 1, static_cast<alift::Index>(subset.size()));
      for (size_t i = 0; i < subset.size(); ++i) {
        sub.col(static_cast<alift::Index>(i)) = a.col(subset[i]);
      }
      Eigen::ColPivHouseholderQR<alift::Matrix> qr(sub);
      qr.setThreshold(1e-10);
      if (qr.rank() == sub.cols()) {
        const alift::Vector q = qr.solve(b);
        if ((sub * q - b).lpNorm<Eigen::Infinity>() <= 1e-9 &&
            q.minCoeff() >= -1e-10) {
          double obj = 0.0;
          for (size_t i = 0; i < subset.size(); ++i) {
            obj += std::max(0.0, q(static_cast<alift::Index>(i))) *
                   costs(subset[i]);
          }
          best = std::min(best, obj);
        }
      }
    }
    if (remaining == 0) return;
    for (alift::Index next = start; next < m; ++next) {
      subset.push_back(next);
      self(self, next + 1, remaining - 1);
      subset.pop_back();
    }
  };
  search(search, 0, rank);
  if (!std::isfinite(best)) {
    throw std::runtime_error("no feasible support found");
  }
  return best;
}

double exact_put_utility(const RationalJoint& j, const Rat& lift_bound) {
  const auto vertices = enumerate_vertices_exact(j, lift_bound);
  const alift::Matrix cols = to_double_columns(vertices);
  alift::Vector p_x(j.x_card);
  for (int x = 0; x < j.x_card; ++x) p_x(x) = j.p_x[x].get_d();
  const double h_x = entropy_bits(p_x);
  return h_x - min_entropy_mixture_exhaustive(cols, p_x);
}

}  // namespace oracle

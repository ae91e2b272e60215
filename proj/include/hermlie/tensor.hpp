#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hermlie {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense row-major array with runtime rank. Used for structure constants,
/// connection coefficients, curvature components and k-form coefficient
/// tables, all of which are small (rank <= 4, extent = algebra dimension).
class NdArray {
public:
  /// Rank-0 scalar holding zero.
  NdArray() : shape_(), data_(1, 0.0) {}

  explicit NdArray(std::vector<int> shape) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int s : shape_) {
      if (s <= 0) throw std::invalid_argument("NdArray: axis extents must be positive");
      n *= static_cast<std::size_t>(s);
    }
    data_.assign(n, 0.0);
  }

  /// All axes of equal extent, the common case for form coefficient tables.
  static NdArray cube(int rank, int extent) {
    return NdArray(std::vector<int>(static_cast<std::size_t>(rank), extent));
  }

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int extent(int axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
  std::size_t size() const { return data_.size(); }

  double& flat(std::size_t i) { return data_[i]; }
  double flat(std::size_t i) const { return data_[i]; }

  std::size_t offset(const std::vector<int>& idx) const {
    std::size_t off = 0;
    for (std::size_t a = 0; a < shape_.size(); ++a)
      off = off * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
    return off;
  }

  double& at(const std::vector<int>& idx) { return data_[offset(idx)]; }
  double at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

  template <class... I>
  double& operator()(I... is) {
    return data_[flat_index(is...)];
  }
  template <class... I>
  double operator()(I... is) const {
    return data_[flat_index(is...)];
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  NdArray& operator+=(const NdArray& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  NdArray& operator-=(const NdArray& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  NdArray& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend NdArray operator+(NdArray a, const NdArray& b) { return a += b; }
  friend NdArray operator-(NdArray a, const NdArray& b) { return a -= b; }
  friend NdArray operator*(double s, NdArray a) { return a *= s; }
  friend NdArray operator*(NdArray a, double s) { return a *= s; }
  friend NdArray operator-(NdArray a) { return a *= -1.0; }

private:
  template <class... I>
  std::size_t flat_index(I... is) const {
    if (sizeof...(is) != shape_.size())
      throw std::length_error("NdArray: index arity does not match rank");
    if constexpr (sizeof...(is) == 0) {
      return 0;
    } else {
      const int idx[] = {static_cast<int>(is)...};
      std::size_t off = 0;
      for (std::size_t a = 0; a < sizeof...(is); ++a)
        off = off * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
      return off;
    }
  }

  void require_same_shape(const NdArray& o) const {
    if (shape_ != o.shape_) throw std::invalid_argument("NdArray: shape mismatch");
  }

  std::vector<int> shape_;
  std::vector<double> data_;
};

/// Visit every multi-index of the given shape in row-major order.
/// The callback receives a reference to a reused index vector.
template <class F>
void for_each_index(const std::vector<int>& shape, F&& f) {
  std::vector<int> idx(shape.size(), 0);
  while (true) {
    f(static_cast<const std::vector<int>&>(idx));
    int a = static_cast<int>(shape.size()) - 1;
    while (a >= 0) {
      if (++idx[static_cast<std::size_t>(a)] < shape[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
}

/// Sign of a permutation of 0..n-1, by in-place cycle sort.
inline int perm_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
      sign = -sign;
    }
  }
  return sign;
}

/// Sign of the rearrangement taking the sorted sequence base to perm.
/// Both sequences must hold the same distinct values.
inline int perm_sign_rel(const std::vector<int>& base, const std::vector<int>& perm) {
  std::vector<int> pos(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    auto it = std::find(base.begin(), base.end(), perm[i]);
    if (it == base.end()) throw std::invalid_argument("perm_sign_rel: value not in base");
    pos[i] = static_cast<int>(it - base.begin());
  }
  return perm_sign(std::move(pos));
}

/// All k-subsets of {0..n-1} in lexicographic order; k = 0 yields one empty set.
inline std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> comb(static_cast<std::size_t>(k));
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    out.push_back(comb);
    int a = k - 1;
    while (a >= 0 && comb[static_cast<std::size_t>(a)] == n - k + a) --a;
    if (a < 0) break;
    ++comb[static_cast<std::size_t>(a)];
    for (int t = a + 1; t < k; ++t)
      comb[static_cast<std::size_t>(t)] = comb[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

/// Wedge product of antisymmetric coefficient tables in the shuffle
/// convention: (a ^ b)(X_1..X_{p+q}) sums sign-weighted products over
/// (p,q)-shuffles, with no factorial normalization. Rank-0 factors scale.
inline NdArray wedge(const NdArray& a, const NdArray& b) {
  const int ka = a.rank();
  const int kb = b.rank();
  if (ka == 0) {
    NdArray out = b;
    return out *= a.flat(0);
  }
  if (kb == 0) {
    NdArray out = a;
    return out *= b.flat(0);
  }
  const int dim = a.extent(0);
  if (b.extent(0) != dim) throw std::invalid_argument("wedge: extent mismatch");
  const int k = ka + kb;
  NdArray out = NdArray::cube(k, dim);

  struct Shuffle {
    std::vector<int> first, second;
    int sign;
  };
  std::vector<Shuffle> shuffles;
  for (const auto& comb : combinations(k, ka)) {
    Shuffle sh;
    sh.first = comb;
    for (int t = 0; t < k; ++t)
      if (std::find(comb.begin(), comb.end(), t) == comb.end()) sh.second.push_back(t);
    std::vector<int> joined = sh.first;
    joined.insert(joined.end(), sh.second.begin(), sh.second.end());
    sh.sign = perm_sign(std::move(joined));
    shuffles.push_back(std::move(sh));
  }

  std::vector<int> ia(static_cast<std::size_t>(ka));
  std::vector<int> ib(static_cast<std::size_t>(kb));
  for_each_index(out.shape(), [&](const std::vector<int>& idx) {
    double s = 0.0;
    for (const auto& sh : shuffles) {
      for (std::size_t t = 0; t < ia.size(); ++t) ia[t] = idx[static_cast<std::size_t>(sh.first[t])];
      for (std::size_t t = 0; t < ib.size(); ++t) ib[t] = idx[static_cast<std::size_t>(sh.second[t])];
      s += sh.sign * a.at(ia) * b.at(ib);
    }
    out.at(idx) = s;
  });
  return out;
}

/// Interior product: (i_X a)(Y_1..Y_{k-1}) = a(X, Y_1..Y_{k-1}).
inline NdArray interior_product(const Vec& X, const NdArray& alpha) {
  const int k = alpha.rank();
  if (k == 0) throw std::invalid_argument("interior_product: rank-0 input");
  const int dim = alpha.extent(0);
  NdArray out = NdArray::cube(k - 1, dim);
  std::vector<int> full(static_cast<std::size_t>(k));
  for_each_index(out.shape(), [&](const std::vector<int>& idx) {
    double s = 0.0;
    for (int m = 0; m < dim; ++m) {
      full[0] = m;
      for (std::size_t t = 0; t + 1 < full.size(); ++t) full[t + 1] = idx[t];
      s += X(m) * alpha.at(full);
    }
    out.at(idx) = s;
  });
  return out;
}

/// out(.., x, ..) = sum_y M(y, x) t(.., y, ..) applied to every slot.
/// With M the column matrix of a frame this moves coefficient tables into
/// frame components; with the inverse matrix it moves them back.
inline NdArray contract_each_slot(const NdArray& t, const Mat& M) {
  NdArray cur = t;
  const int k = t.rank();
  for (int slot = 0; slot < k; ++slot) {
    NdArray next(cur.shape());
    const int dim = cur.extent(slot);
    std::vector<int> src;
    for_each_index(cur.shape(), [&](const std::vector<int>& idx) {
      double s = 0.0;
      src = idx;
      for (int y = 0; y < dim; ++y) {
        src[static_cast<std::size_t>(slot)] = y;
        s += M(y, idx[static_cast<std::size_t>(slot)]) * cur.at(src);
      }
      next.at(idx) = s;
    });
    cur = std::move(next);
  }
  return cur;
}

inline NdArray to_nd(const Vec& v) {
  NdArray out(std::vector<int>{static_cast<int>(v.size())});
  for (int i = 0; i < v.size(); ++i) out(i) = v(i);
  return out;
}

inline NdArray to_nd(const Mat& m) {
  NdArray out(std::vector<int>{static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline Vec to_vec(const NdArray& a) {
  if (a.rank() != 1) throw std::invalid_argument("to_vec: rank-1 input required");
  Vec v(a.extent(0));
  for (int i = 0; i < a.extent(0); ++i) v(i) = a(i);
  return v;
}

inline Mat to_mat(const NdArray& a) {
  if (a.rank() != 2) throw std::invalid_argument("to_mat: rank-2 input required");
  Mat m(a.extent(0), a.extent(1));
  for (int i = 0; i < a.extent(0); ++i)
    for (int j = 0; j < a.extent(1); ++j) m(i, j) = a(i, j);
  return m;
}

/// t(i,j,:) of a rank-3 array.
inline Vec fiber_last(const NdArray& t, int i, int j) {
  Vec v(t.extent(2));
  for (int k = 0; k < t.extent(2); ++k) v(k) = t(i, j, k);
  return v;
}

/// t(:,i,j) of a rank-3 array.
inline Vec fiber_first(const NdArray& t, int i, int j) {
  Vec v(t.extent(0));
  for (int k = 0; k < t.extent(0); ++k) v(k) = t(k, i, j);
  return v;
}

/// M(a,b) = t(a,i,b) of a rank-3 array.
inline Mat middle_slice(const NdArray& t, int i) {
  Mat m(t.extent(0), t.extent(2));
  for (int a = 0; a < t.extent(0); ++a)
    for (int b = 0; b < t.extent(2); ++b) m(a, b) = t(a, i, b);
  return m;
}

inline void set_middle_slice(NdArray& t, int i, const Mat& m) {
  for (int a = 0; a < t.extent(0); ++a)
    for (int b = 0; b < t.extent(2); ++b) t(a, i, b) = m(a, b);
}

/// M(a,b) = t(a,i,j,b) of a rank-4 array.
inline Mat pair_slice(const NdArray& t, int i, int j) {
  Mat m(t.extent(0), t.extent(3));
  for (int a = 0; a < t.extent(0); ++a)
    for (int b = 0; b < t.extent(3); ++b) m(a, b) = t(a, i, j, b);
  return m;
}

inline void set_pair_slice(NdArray& t, int i, int j, const Mat& m) {
  for (int a = 0; a < t.extent(0); ++a)
    for (int b = 0; b < t.extent(3); ++b) t(a, i, j, b) = m(a, b);
}

inline Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }
inline Mat antisym(const Mat& m) { return 0.5 * (m - m.transpose()); }

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace hermlie

#pragma once

// Exact integer linear algebra for finitely generated abelian groups:
// Smith normal form with transforms, quotient presentations Z^r / <relations>,
// canonical coset representatives and homomorphisms between presentations.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "windpar/error.hpp"

namespace windpar {

using BigInt = boost::multiprecision::cpp_int;
using BigVec = std::vector<BigInt>;

template <typename Int> BigVec to_big(const std::vector<Int> &v) {
  return BigVec(v.begin(), v.end());
}

inline std::string to_string(const BigVec &v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i)
    out << (i ? ", " : "") << v[i];
  out << ')';
  return out.str();
}

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  /// Matrix whose columns are the given vectors, each of length `rows`.
  static IntMatrix from_columns(std::size_t rows, const std::vector<BigVec> &columns) {
    IntMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows)
        throw DimensionMismatch("column " + std::to_string(j) + " has length " +
                                std::to_string(columns[j].size()) + ", expected " +
                                std::to_string(rows));
      for (std::size_t i = 0; i < rows; ++i)
        m(i, j) = columns[j][i];
    }
    return m;
  }

  static IntMatrix from_rows(const std::vector<BigVec> &rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw DimensionMismatch("ragged row " + std::to_string(i));
      for (std::size_t j = 0; j < cols; ++j)
        m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  BigInt &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  BigVec column(std::size_t j) const {
    BigVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      c[i] = (*this)(i, j);
    return c;
  }

  BigVec operator*(const BigVec &v) const {
    if (v.size() != cols_)
      throw DimensionMismatch("matrix-vector product");
    BigVec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!v[j].is_zero() && !(*this)(i, j).is_zero())
          out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("matrix product");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero())
          continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  friend bool operator==(const IntMatrix &a, const IntMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt &x) { return x.is_zero(); });
  }

  // Elementary operations. Row ops act as left multiplication, column ops as right.
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t i = 0; i < rows_; ++i)
      std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt &factor) {
    if (factor.is_zero())
      return;
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(src, j).is_zero())
        (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const BigInt &factor) {
    if (factor.is_zero())
      return;
    for (std::size_t i = 0; i < rows_; ++i)
      if (!(*this)(i, src).is_zero())
        (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i)
      (*this)(i, c) = -(*this)(i, c);
  }

  friend std::ostream &operator<<(std::ostream &out, const IntMatrix &m) {
    for (std::size_t i = 0; i < m.rows_; ++i) {
      for (std::size_t j = 0; j < m.cols_; ++j)
        out << (j ? " " : "") << m(i, j);
      out << '\n';
    }
    return out;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> data_;
};

/// Determinant by fraction-free (Bareiss) elimination. Square matrices only.
inline BigInt determinant(IntMatrix m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0)
    return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k).is_zero())
        ++swap;
      if (swap == n)
        return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// U * A * V = D with U, V unimodular and D diagonal, d_i >= 0, d_i | d_{i+1}.
/// `u_inverse` is carried along so quotient coordinates can be mapped back.
struct SmithForm {
  IntMatrix u, d, v, u_inverse;

  /// Diagonal of D (length min(rows, cols)).
  BigVec diagonal() const {
    BigVec out(std::min(d.rows(), d.cols()));
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = d(i, i);
    return out;
  }
};

namespace detail {

// Remainder in [0, |m|).
inline BigInt floor_mod(const BigInt &a, const BigInt &m) {
  BigInt r = a % m;
  if (r < 0)
    r += abs(m);
  return r;
}

// Quotient rounded toward zero; leaves |remainder| < |divisor|.
inline BigInt trunc_div(const BigInt &a, const BigInt &b) { return a / b; }

struct SnfState {
  SmithForm f;

  void swap_rows(std::size_t a, std::size_t b) {
    f.d.swap_rows(a, b);
    f.u.swap_rows(a, b);
    f.u_inverse.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    f.d.swap_cols(a, b);
    f.v.swap_cols(a, b);
  }
  void add_row(std::size_t dst, std::size_t src, const BigInt &k) {
    f.d.add_row(dst, src, k);
    f.u.add_row(dst, src, k);
    f.u_inverse.add_col(src, dst, -k);
  }
  void add_col(std::size_t dst, std::size_t src, const BigInt &k) {
    f.d.add_col(dst, src, k);
    f.v.add_col(dst, src, k);
  }
  void negate_row(std::size_t r) {
    f.d.negate_row(r);
    f.u.negate_row(r);
    f.u_inverse.negate_col(r);
  }
};

} // namespace detail

/// Smith normal form by smallest-absolute-value pivoting with row/column
/// remainder reduction.
inline SmithForm smith_normal_form(const IntMatrix &a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  detail::SnfState s{SmithForm{IntMatrix::identity(rows), a, IntMatrix::identity(cols),
                               IntMatrix::identity(rows)}};
  IntMatrix &d = s.f.d;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Global pivot: smallest nonzero |entry| in the trailing block.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (!d(i, j).is_zero() && (!best || abs(d(i, j)) < abs(d(best->first, best->second))))
          best = {i, j};
    if (!best)
      break;
    s.swap_rows(t, best->first);
    s.swap_cols(t, best->second);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (!d(i, t).is_zero()) {
          s.add_row(i, t, -detail::trunc_div(d(i, t), d(t, t)));
          clean = clean && d(i, t).is_zero();
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        if (!d(t, j).is_zero()) {
          s.add_col(j, t, -detail::trunc_div(d(t, j), d(t, t)));
          clean = clean && d(t, j).is_zero();
        }
      if (!clean) {
        // A remainder smaller than the pivot survived; promote it.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (!d(i, t).is_zero() && abs(d(i, t)) < abs(d(bi, bj)))
            bi = i, bj = t;
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!d(t, j).is_zero() && abs(d(t, j)) < abs(d(bi, bj)))
            bi = t, bj = j;
        s.swap_rows(t, bi);
        s.swap_cols(t, bj);
        continue;
      }
      // Row and column are clear; enforce divisibility on the trailing block.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < rows && !offender; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (BigInt(d(i, j) % d(t, t)) != 0) {
            offender = i;
            break;
          }
      if (!offender)
        break;
      s.add_row(t, *offender, 1);
    }
    if (d(t, t) < 0)
      s.negate_row(t);
  }
  return std::move(s.f);
}

class FgAbelianGroup;
using GroupPtr = std::shared_ptr<const FgAbelianGroup>;

/// Z^rank / <relations>. The Smith form is computed once at construction.
class FgAbelianGroup {
public:
  std::size_t rank() const noexcept { return rank_; }
  const IntMatrix &relations() const noexcept { return relations_; }
  const SmithForm &smith() const noexcept { return smith_; }

  /// Invariant factors d_i > 1 in divisibility order.
  BigVec torsion() const {
    BigVec out;
    for (const auto &x : diag_)
      if (x > 1)
        out.push_back(x);
    return out;
  }
  std::size_t free_rank() const {
    std::size_t nonzero = 0;
    for (const auto &x : diag_)
      nonzero += x.is_zero() ? 0 : 1;
    return rank_ - nonzero;
  }
  /// Nonzero diagonal entries of D, ones included.
  const BigVec &diagonal() const noexcept { return diag_; }

  /// e.g. "Z_2 + Z^2", "0" for the trivial group.
  std::string describe() const {
    std::ostringstream out;
    bool first = true;
    for (const auto &t : torsion()) {
      out << (first ? "" : " + ") << "Z_" << t;
      first = false;
    }
    if (const auto f = free_rank(); f > 0) {
      out << (first ? "" : " + ") << "Z";
      if (f > 1)
        out << '^' << f;
      first = false;
    }
    if (first)
      out << '0';
    return out.str();
  }

  /// Coordinates w = U v reduced modulo the invariant factors.
  BigVec reduced_coordinates(const BigVec &v) const {
    if (v.size() != rank_)
      throw DimensionMismatch("vector of length " + std::to_string(v.size()) +
                              " in a group of rank " + std::to_string(rank_));
    BigVec w = smith_.u * v;
    for (std::size_t i = 0; i < diag_.size(); ++i)
      if (!diag_[i].is_zero())
        w[i] = detail::floor_mod(w[i], diag_[i]);
    return w;
  }

  /// The canonical representative of v + <relations>.
  BigVec canonical_rep(const BigVec &v) const { return smith_.u_inverse * reduced_coordinates(v); }

  /// True when v lies in the relation lattice.
  bool contains(const BigVec &v) const {
    const BigVec w = reduced_coordinates(v);
    return std::all_of(w.begin(), w.end(), [](const BigInt &x) { return x.is_zero(); });
  }

  /// Same ambient rank and same relation lattice.
  bool same_group(const FgAbelianGroup &other) const {
    if (this == &other)
      return true;
    if (rank_ != other.rank_)
      return false;
    if (relations_ == other.relations_)
      return true;
    for (std::size_t j = 0; j < relations_.cols(); ++j)
      if (!other.contains(relations_.column(j)))
        return false;
    for (std::size_t j = 0; j < other.relations_.cols(); ++j)
      if (!contains(other.relations_.column(j)))
        return false;
    return true;
  }

private:
  friend GroupPtr quotient(std::size_t rank, const std::vector<BigVec> &relations);

  FgAbelianGroup(std::size_t rank, IntMatrix relations)
      : rank_(rank), relations_(std::move(relations)), smith_(smith_normal_form(relations_)) {
    for (std::size_t i = 0; i < std::min(smith_.d.rows(), smith_.d.cols()); ++i)
      diag_.push_back(smith_.d(i, i));
  }

  std::size_t rank_;
  IntMatrix relations_;
  SmithForm smith_;
  BigVec diag_;
};

/// Z^rank / <relations>.
inline GroupPtr quotient(std::size_t rank, const std::vector<BigVec> &relations) {
  return GroupPtr(new FgAbelianGroup(rank, IntMatrix::from_columns(rank, relations)));
}

/// Z / nZ (Z when n == 0).
inline GroupPtr cyclic_group(const BigInt &n) {
  return quotient(1, n.is_zero() ? std::vector<BigVec>{} : std::vector<BigVec>{{abs(n)}});
}

class GroupElement {
public:
  GroupElement() = default;
  GroupElement(GroupPtr group, const BigVec &v) : group_(std::move(group)) {
    rep_ = group_->canonical_rep(v);
  }

  const GroupPtr &group() const noexcept { return group_; }
  const BigVec &rep() const noexcept { return rep_; }

  bool is_zero() const {
    return std::all_of(rep_.begin(), rep_.end(), [](const BigInt &x) { return x.is_zero(); });
  }

  friend GroupElement operator+(const GroupElement &a, const GroupElement &b) {
    a.require_same(b);
    BigVec sum(a.rep_.size());
    for (std::size_t i = 0; i < sum.size(); ++i)
      sum[i] = a.rep_[i] + b.rep_[i];
    return GroupElement(a.group_, sum);
  }
  friend GroupElement operator-(const GroupElement &a) {
    BigVec neg(a.rep_.size());
    for (std::size_t i = 0; i < neg.size(); ++i)
      neg[i] = -a.rep_[i];
    return GroupElement(a.group_, neg);
  }
  friend GroupElement operator-(const GroupElement &a, const GroupElement &b) { return a + (-b); }
  friend GroupElement operator*(const BigInt &k, const GroupElement &a) {
    BigVec out(a.rep_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = k * a.rep_[i];
    return GroupElement(a.group_, out);
  }

  /// Equality of cosets. Throws GroupMismatch for elements of different groups.
  friend bool operator==(const GroupElement &a, const GroupElement &b) {
    a.require_same(b);
    if (a.group_ == b.group_ || a.group_->relations() == b.group_->relations())
      return a.rep_ == b.rep_;
    BigVec diff(a.rep_.size());
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = a.rep_[i] - b.rep_[i];
    return a.group_->contains(diff);
  }
  friend bool operator!=(const GroupElement &a, const GroupElement &b) { return !(a == b); }

  std::string str() const {
    if (rep_.size() == 1)
      return rep_.front().str();
    return to_string(rep_);
  }

private:
  void require_same(const GroupElement &b) const {
    if (!group_ || !b.group_ || !group_->same_group(*b.group_))
      throw GroupMismatch("elements belong to different groups");
  }

  GroupPtr group_;
  BigVec rep_;
};

inline GroupElement canonical(const GroupPtr &g, const BigVec &v) { return GroupElement(g, v); }
inline GroupElement zero_element(const GroupPtr &g) { return GroupElement(g, BigVec(g->rank())); }

/// A homomorphism given by images of the ambient generators of `source`.
class Hom {
public:
  Hom(GroupPtr source, GroupPtr target, std::vector<GroupElement> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {}

  const GroupPtr &source() const noexcept { return source_; }
  const GroupPtr &target() const noexcept { return target_; }
  const std::vector<GroupElement> &images() const noexcept { return images_; }

  GroupElement operator()(const BigVec &v) const {
    if (v.size() != source_->rank())
      throw DimensionMismatch("hom argument");
    BigVec acc(target_->rank());
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j].is_zero())
        continue;
      const auto &img = images_[j].rep();
      for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += v[j] * img[i];
    }
    return GroupElement(target_, acc);
  }
  GroupElement operator()(const GroupElement &x) const {
    if (!source_->same_group(*x.group()))
      throw GroupMismatch("hom applied to an element of another group");
    return (*this)(x.rep());
  }

private:
  GroupPtr source_, target_;
  std::vector<GroupElement> images_;
};

struct InconsistencyWitness {
  std::size_t relation;  // column index in the source relation matrix
  BigVec relation_vector;
  GroupElement image;    // nonzero
};

using HomResult = std::variant<Hom, InconsistencyWitness>;

/// Extends generator images linearly; fails on the first relation whose image is nonzero.
inline HomResult solve_hom(const GroupPtr &source, const GroupPtr &target,
                           std::vector<GroupElement> images) {
  if (images.size() != source->rank())
    throw DimensionMismatch("expected " + std::to_string(source->rank()) + " generator images, got " +
                            std::to_string(images.size()));
  for (const auto &img : images)
    if (!img.group() || !img.group()->same_group(*target))
      throw GroupMismatch("generator image outside the target group");
  Hom hom(source, target, std::move(images));
  const auto &rel = source->relations();
  for (std::size_t j = 0; j < rel.cols(); ++j) {
    BigVec column = rel.column(j);
    GroupElement image = hom(column);
    if (!image.is_zero())
      return InconsistencyWitness{j, std::move(column), std::move(image)};
  }
  return hom;
}

} // namespace windpar

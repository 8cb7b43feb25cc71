#pragma once

// Exact rational scalars, vectors and small dense linear algebra.
// All geometric predicates in this library run over Q; no floating point.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropdp {

using Q = mpq_class;
using Z = mpz_class;

using QVec = std::vector<Q>;
using ZVec = std::vector<long>;

inline Q qof(long num, long den = 1) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q" or "p" (used by the CLI; whitespace not allowed).
inline Q parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Q q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  return q;
}

inline std::string rational_str(const Q& q) {
  return q.get_str();
}

inline int sgn(const Q& q) { return ::sgn(q); }

// ---------------------------------------------------------------------------
// vectors over Q

inline QVec qvec(std::initializer_list<long> xs) {
  QVec v;
  v.reserve(xs.size());
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline QVec operator+(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVec operator-(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVec operator*(const Q& c, const QVec& a) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline bool is_zero(const QVec& a) {
  for (const Q& x : a)
    if (x != 0) return false;
  return true;
}

inline Q dot(const QVec& a, const QVec& b) {
  Q s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Lexicographic order; used everywhere canonical sorting is required.
inline bool lex_less(const QVec& a, const QVec& b) {
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

// ---------------------------------------------------------------------------
// integer lattice utilities

// Clears denominators and divides by the content, preserving direction.
// Zero vectors stay zero.
inline QVec primitive(const QVec& v) {
  Z den = 1;
  for (const Q& x : v) den = lcm(den, Z(x.get_den()));
  Z g = 0;
  std::vector<Z> ints(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    ints[i] = Z(v[i].get_num()) * (den / Z(v[i].get_den()));
    g = gcd(g, ints[i]);
  }
  if (g == 0) return QVec(v.size(), Q(0));
  QVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Q(ints[i] / g);
  return r;
}

inline bool is_integral(const QVec& v) {
  for (const Q& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

// Lattice length of an integer vector: gcd of the entries.
inline Z content(const QVec& v) {
  Z g = 0;
  for (const Q& x : v) {
    if (x.get_den() != 1) throw std::invalid_argument("content of non-integer vector");
    g = gcd(g, Z(x.get_num()));
  }
  return g;
}

// Lattice length of the image of u in Z^n / Z*delta (delta primitive):
// gcd of the 2x2 minors of [u; delta].  For delta = 0 this is content(u).
inline Z content_mod(const QVec& u, const QVec& delta) {
  if (is_zero(delta)) return content(u);
  Z g = 0;
  for (size_t a = 0; a < u.size(); ++a)
    for (size_t b = a + 1; b < u.size(); ++b) {
      Q m = u[a] * delta[b] - u[b] * delta[a];
      if (m.get_den() != 1) throw std::invalid_argument("content_mod of non-integer data");
      g = gcd(g, Z(m.get_num()));
    }
  return g;
}

// ---------------------------------------------------------------------------
// small dense matrices over Q (row major)

struct QMat {
  size_t rows = 0, cols = 0;
  std::vector<Q> a;

  QMat() = default;
  QMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, Q(0)) {}

  Q& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  const Q& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
};

// Row-reduces in place; returns pivot columns. Exact fraction-free-ish
// Gauss-Jordan (plain rational pivoting is fine at our sizes).
inline std::vector<size_t> rref(QMat& m) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
    size_t piv = row;
    while (piv < m.rows && m(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    for (size_t j = 0; j < m.cols; ++j) std::swap(m(row, j), m(piv, j));
    Q inv = 1 / m(row, col);
    for (size_t j = col; j < m.cols; ++j) m(row, j) *= inv;
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == row || m(i, col) == 0) continue;
      Q f = m(i, col);
      for (size_t j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline size_t rank(QMat m) { return rref(m).size(); }

inline size_t rank_of_vectors(const std::vector<QVec>& vs) {
  if (vs.empty()) return 0;
  QMat m(vs.size(), vs[0].size());
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = 0; j < vs[0].size(); ++j) m(i, j) = vs[i][j];
  return rank(std::move(m));
}

// Solves A x = b exactly. Returns one solution if consistent (free variables
// set to 0 under a fixed pivot rule, so the result is deterministic).
inline std::optional<QVec> solve(QMat A, QVec b) {
  size_t n = A.cols;
  QMat aug(A.rows, n + 1);
  for (size_t i = 0; i < A.rows; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
    aug(i, n) = b[i];
  }
  std::vector<size_t> piv = rref(aug);
  for (size_t k = 0; k < piv.size(); ++k)
    if (piv[k] == n) return std::nullopt;  // inconsistent
  QVec x(n, Q(0));
  for (size_t k = 0; k < piv.size(); ++k) {
    // find pivot row k's rhs
    x[piv[k]] = aug(k, n);
  }
  return x;
}

// Membership of v in the rational span of gens.
inline bool in_span(const std::vector<QVec>& gens, const QVec& v) {
  if (is_zero(v)) return true;
  if (gens.empty()) return false;
  QMat A(v.size(), gens.size());
  for (size_t j = 0; j < gens.size(); ++j)
    for (size_t i = 0; i < v.size(); ++i) A(i, j) = gens[j][i];
  return solve(std::move(A), v).has_value();
}

}  // namespace tropdp

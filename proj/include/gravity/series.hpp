#pragma once

// Generating-series layer: Poincare polynomials of the moduli spaces, the
// compositional inversion that produces the Betti numbers of Brown's moduli
// spaces, Euler-characteristic cross-checks, and closed-form dissection
// counts.  All arithmetic is exact over the integers.

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "gravity/exact_linalg.hpp"
#include "gravity/polygon.hpp"

namespace gravity {

class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
  static IntPolynomial constant(const Int& v) { return IntPolynomial({v}); }
  static IntPolynomial monomial(const Int& v, int deg) {
    std::vector<Int> c(deg + 1, 0);
    c[deg] = v;
    return IntPolynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool isZero() const { return c_.empty(); }
  Int coeff(int i) const {
    return (i < 0 || i >= static_cast<int>(c_.size())) ? Int(0) : c_[i];
  }

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return IntPolynomial(std::move(c));
  }
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return IntPolynomial(std::move(c));
  }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.isZero() || b.isZero()) return {};
    std::vector<Int> c(a.c_.size() + b.c_.size() - 1, 0);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(c));
  }
  IntPolynomial operator-() const {
    std::vector<Int> c(c_);
    for (auto& v : c) v = -v;
    return IntPolynomial(std::move(c));
  }
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  std::string str(const std::string& var = "t") const {
    if (isZero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += (c_[i] > 0 ? " + " : " - ");
      else if (c_[i] < 0) s += "-";
      Int av = abs(c_[i]);
      if (av != 1 || i == 0) s += av.get_str();
      if (i >= 1) {
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;  // c_[i] is the t^i coefficient; trailing zeros trimmed
};

// Truncated power series in x whose x^m coefficient is an integer polynomial
// in t, for m <= order.
class BivariateSeries {
 public:
  explicit BivariateSeries(int order) : order_(order), cx_(order + 1) {
    if (order < 1) throw std::invalid_argument("BivariateSeries: order >= 1 required");
  }

  int order() const { return order_; }
  const IntPolynomial& coeff(int m) const { return cx_.at(m); }
  void setCoeff(int m, IntPolynomial p) { cx_.at(m) = std::move(p); }

  static BivariateSeries x(int order) {
    BivariateSeries s(order);
    s.setCoeff(1, IntPolynomial::constant(1));
    return s;
  }

  friend BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b) {
    int ord = std::min(a.order_, b.order_);
    BivariateSeries s(ord);
    for (int m = 0; m <= ord; ++m) s.cx_[m] = a.cx_[m] + b.cx_[m];
    return s;
  }
  friend BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b) {
    int ord = std::min(a.order_, b.order_);
    BivariateSeries s(ord);
    for (int m = 0; m <= ord; ++m) s.cx_[m] = a.cx_[m] - b.cx_[m];
    return s;
  }
  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    int ord = std::min(a.order_, b.order_);
    BivariateSeries s(ord);
    for (int i = 0; i <= ord; ++i) {
      if (a.cx_[i].isZero()) continue;
      for (int j = 0; i + j <= ord; ++j) {
        if (b.cx_[j].isZero()) continue;
        s.cx_[i + j] = s.cx_[i + j] + a.cx_[i] * b.cx_[j];
      }
    }
    return s;
  }

  // f(g) for g with zero constant term, truncated at min(order_, g.order())
  BivariateSeries compose(const BivariateSeries& g) const {
    if (!g.cx_[0].isZero())
      throw std::invalid_argument("compose: inner series must have zero constant term");
    int ord = std::min(order_, g.order_);
    BivariateSeries result(ord);
    result.cx_[0] = cx_[0];
    BivariateSeries pw = x(ord);  // will hold g^m
    pw = g;
    for (int m = 1; m <= ord; ++m) {
      if (!cx_[m].isZero())
        for (int j = 0; j <= ord; ++j)
          result.cx_[j] = result.cx_[j] + cx_[m] * pw.cx_[j];
      if (m < ord) pw = pw * g;
    }
    return result;
  }

  bool isIdentityX() const {
    if (!cx_[0].isZero()) return false;
    if (!(cx_[1] == IntPolynomial::constant(1))) return false;
    for (int m = 2; m <= order_; ++m)
      if (!cx_[m].isZero()) return false;
    return true;
  }

 private:
  int order_;
  std::vector<IntPolynomial> cx_;
};

// Betti numbers of M_{0,n} as coefficients of prod_{j=2}^{n-2} (1 + j x).
// The paper prints the identity with the product prod (x - j); Betti numbers
// are non-negative, so the (1 + j x) normalization is the one implemented,
// and the nbc count is the oracle that confirms it.
inline IntPolynomial poincare_moduli(int n) {
  if (n < 3) throw std::invalid_argument("poincare_moduli: n >= 3 required");
  IntPolynomial p = IntPolynomial::constant(1);
  for (int j = 2; j <= n - 2; ++j)
    p = p * IntPolynomial({Int(1), Int(j)});
  return p;
}

// a_n(t) = sum_k (-1)^k b_k(M_{0,n}) t^{n-3-k}
inline IntPolynomial alternating_poincare(int n) {
  IntPolynomial b = poincare_moduli(n);
  std::vector<Int> c(n - 2, 0);
  for (int k = 0; k <= n - 3; ++k) {
    Int v = b.coeff(k);
    if (k % 2 == 1) v = -v;
    c[n - 3 - k] = v;
  }
  return IntPolynomial(std::move(c));
}

// f(x,t) = x - sum_{n>=3} a_n(t) x^{n-1}, truncated at the given order in x.
inline BivariateSeries moduli_series(int order = 12) {
  if (order < 2) throw std::invalid_argument("moduli_series: order >= 2 required");
  BivariateSeries f = BivariateSeries::x(order);
  for (int n = 3; n - 1 <= order; ++n)
    f.setCoeff(n - 1, -alternating_poincare(n));
  return f;
}

// Compositional inverse g of f = x + O(x^2): g(f) = f(g) = x to truncation
// order, computed degree by degree.  Both composition identities are checked.
inline BivariateSeries compositional_inverse(const BivariateSeries& f) {
  if (!f.coeff(0).isZero() || !(f.coeff(1) == IntPolynomial::constant(1)))
    throw std::invalid_argument("compositional_inverse: series must be x + O(x^2)");
  int ord = f.order();
  BivariateSeries g = BivariateSeries::x(ord);
  for (int m = 2; m <= ord; ++m) {
    BivariateSeries h = f.compose(g);
    g.setCoeff(m, -h.coeff(m));
  }
  if (!f.compose(g).isIdentityX() || !g.compose(f).isIdentityX())
    throw std::logic_error("compositional_inverse: verification failed");
  return g;
}

// Betti numbers of Brown's moduli space M^delta_{0,n}, read off the
// compositional inverse of the moduli series:
// f^delta = x + sum_n (sum_k (-1)^k b_k(M^delta_{0,n}) t^{n-3-k}) x^{n-1}.
inline std::vector<long> brown_betti_series(int n) {
  if (n < 3) throw std::invalid_argument("brown_betti_series: n >= 3 required");
  BivariateSeries g = compositional_inverse(moduli_series(std::max(n - 1, 2)));
  IntPolynomial cn = g.coeff(n - 1);
  std::vector<long> b(n - 2);
  for (int k = 0; k <= n - 3; ++k) {
    Int v = cn.coeff(n - 3 - k);
    if (k % 2 == 1) v = -v;
    if (v < 0) throw std::logic_error("brown_betti_series: negative Betti number extracted");
    if (!v.fits_slong_p()) throw std::overflow_error("brown_betti_series: value too large");
    b[k] = v.get_si();
  }
  return b;
}

// Cayley's count of dissections of an n-gon with k chords:
// (1/(k+1)) C(n-3,k) C(n+k-1,k).
inline Int cayley_count(int n, int k) {
  if (n < 3 || k < 0 || k > n - 3) {
    if (n >= 3 && (k < 0 || k > n - 3)) return 0;
    throw std::invalid_argument("cayley_count: n >= 3 required");
  }
  Int a, b;
  mpz_bin_uiui(a.get_mpz_t(), n - 3, k);
  mpz_bin_uiui(b.get_mpz_t(), n + k - 1, k);
  Int num = a * b;
  if (num % (k + 1) != 0) throw std::logic_error("cayley_count: formula not integral");
  return num / (k + 1);
}

// Euler-characteristic computation of the Brown Betti numbers: for each k,
// b_k(M^delta) = sum_p (-1)^p sum_{d in Diss_p} [x^{k-p}] prod_i P(M_{0,|p_i|}),
// using only dissection enumeration and the Poincare polynomials.
struct EulerReport {
  int n = 0;
  std::vector<long> euler;   // per degree k
  std::vector<long> series;  // brown_betti_series(n)
  bool agrees = false;
};

inline EulerReport euler_check(int n) {
  if (n < 3) throw std::invalid_argument("euler_check: n >= 3 required");
  EulerReport rep;
  rep.n = n;
  IntPolynomial acc;  // signed sum of Kunneth polynomials in x
  for (int p = 0; p <= n - 3; ++p) {
    IntPolynomial level;
    for (const auto& d : dissections(n, p)) {
      IntPolynomial prod = IntPolynomial::constant(1);
      for (const auto& sp : subpolygons(n, d)) prod = prod * poincare_moduli(sp.size());
      level = level + prod;
    }
    // shift by x^p (residues drop the degree by one per chord)
    level = level * IntPolynomial::monomial(p % 2 == 0 ? 1 : -1, p);
    acc = acc + level;
  }
  rep.euler.resize(n - 2);
  for (int k = 0; k <= n - 3; ++k) {
    Int v = acc.coeff(k);
    if (!v.fits_slong_p()) throw std::overflow_error("euler_check: value too large");
    rep.euler[k] = v.get_si();
  }
  rep.series = brown_betti_series(n);
  rep.agrees = (rep.euler == rep.series);
  return rep;
}

}  // namespace gravity

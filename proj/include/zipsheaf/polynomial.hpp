#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace zipsheaf {

using Integer = boost::multiprecision::cpp_int;

/// Univariate polynomial in q with integer coefficients (constant term first).
class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(Integer constant);
  /// c q^k.
  static QPolynomial monomial(Integer c, unsigned k);
  /// q^k + sign.
  static QPolynomial q_power_plus(unsigned k, int sign);

  friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b);
  friend QPolynomial operator+(const QPolynomial& a, const QPolynomial& b);
  friend bool operator==(const QPolynomial& a, const QPolynomial& b) { return a.c_ == b.c_; }

  Integer operator()(const Integer& q) const;
  unsigned degree() const { return c_.empty() ? 0 : static_cast<unsigned>(c_.size() - 1); }
  const std::vector<Integer>& coefficients() const { return c_; }
  /// Expanded form such as "q^4 - q^3 - q + 1".
  std::string to_string() const;

 private:
  void trim();
  std::vector<Integer> c_;
};

}  // namespace zipsheaf

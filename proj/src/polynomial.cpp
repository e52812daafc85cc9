#include "zipsheaf/polynomial.hpp"

#include <sstream>

namespace zipsheaf {

QPolynomial::QPolynomial(Integer constant) {
  c_.push_back(std::move(constant));
  trim();
}

QPolynomial QPolynomial::monomial(Integer c, unsigned k) {
  QPolynomial p;
  p.c_.assign(k + 1, Integer(0));
  p.c_[k] = std::move(c);
  p.trim();
  return p;
}

QPolynomial QPolynomial::q_power_plus(unsigned k, int sign) {
  return monomial(1, k) + QPolynomial(Integer(sign));
}

void QPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
  QPolynomial r;
  if (a.c_.empty() || b.c_.empty()) return r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  r.trim();
  return r;
}

QPolynomial operator+(const QPolynomial& a, const QPolynomial& b) {
  QPolynomial r;
  r.c_.assign(std::max(a.c_.size(), b.c_.size()), Integer(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
  r.trim();
  return r;
}

Integer QPolynomial::operator()(const Integer& q) const {
  Integer acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * q + c_[i];
  return acc;
}

std::string QPolynomial::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Integer& c = c_[i];
    if (c == 0) continue;
    const Integer mag = c < 0 ? Integer(-c) : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (mag != 1 || i == 0) os << mag;
    if (i >= 1) os << "q";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

}  // namespace zipsheaf

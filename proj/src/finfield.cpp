#include "zipsheaf/finfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "zipsheaf/error.hpp"

namespace zipsheaf::ff {

namespace detail {

struct FieldData {
  std::uint32_t p = 0;
  unsigned m = 0;
  std::uint32_t size = 0;
  std::vector<std::uint32_t> modulus;  // monic, constant term first
  std::vector<std::uint32_t> exp_table;
  std::vector<std::uint32_t> log_table;
};

}  // namespace detail

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q) {
  if (q < 2) return {0, 0};
  auto f = prime_factors(q);
  if (f.size() != 1) return {0, 0};
  unsigned e = 0;
  while (q > 1) {
    q /= f[0];
    ++e;
  }
  return {static_cast<std::uint32_t>(f[0]), e};
}

namespace {

// Dense polynomial arithmetic in F_p[x]/(f), used to search for moduli and
// for fields too large for log tables.
using Poly = std::vector<std::uint32_t>;

struct PolyRing {
  std::uint32_t p;
  unsigned m;
  const Poly* f;  // monic degree m

  Poly mulmod(const Poly& a, const Poly& b) const {
    std::vector<std::uint64_t> prod(2 * m - 1, 0);
    for (unsigned i = 0; i < m; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    }
    for (unsigned k = 2 * m - 1; k-- > m;) {
      std::uint64_t c = prod[k];
      if (c == 0) continue;
      // x^k = x^{k-m} * (x^m) = -x^{k-m} * (f - x^m)
      for (unsigned i = 0; i < m; ++i)
        prod[k - m + i] = (prod[k - m + i] + (p - c) * (*f)[i]) % p;
      prod[k] = 0;
    }
    Poly r(m);
    for (unsigned i = 0; i < m; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
    return r;
  }

  Poly one() const {
    Poly r(m, 0);
    r[0] = 1;
    return r;
  }

  Poly x() const {
    Poly r(m, 0);
    if (m == 1)
      r[0] = (p - (*f)[0]) % p;
    else
      r[1] = 1;
    return r;
  }

  Poly pow(Poly base, std::uint64_t e) const {
    Poly r = one();
    while (e) {
      if (e & 1) r = mulmod(r, base);
      base = mulmod(base, base);
      e >>= 1;
    }
    return r;
  }

  // Evaluates a polynomial with F_p coefficients at `at`.
  Poly eval(const Poly& g, const Poly& at) const {
    Poly r(m, 0);
    for (std::size_t k = g.size(); k-- > 0;) {
      r = mulmod(r, at);
      r[0] = (r[0] + g[k]) % p;
    }
    return r;
  }
};

bool is_zero_poly(const Poly& a) {
  return std::all_of(a.begin(), a.end(), [](std::uint32_t c) { return c == 0; });
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::recursive_mutex& registry_mutex() {
  static std::recursive_mutex mu;
  return mu;
}

std::map<std::pair<std::uint32_t, unsigned>, std::shared_ptr<const detail::FieldData>>& registry() {
  static std::map<std::pair<std::uint32_t, unsigned>, std::shared_ptr<const detail::FieldData>> reg;
  return reg;
}

// Least primitive monic polynomial of degree m, in the order of its
// coefficient code (leading non-monic coefficient most significant), that is
// compatible with every subfield modulus.
Poly find_modulus(std::uint32_t p, unsigned m, const std::vector<std::pair<unsigned, Poly>>& sub_moduli) {
  const std::uint64_t field_size = ipow(p, m);
  const std::uint64_t n_units = field_size - 1;
  const auto factors = prime_factors(n_units);
  Poly f(m + 1, 0);
  f[m] = 1;
  for (std::uint64_t code = 0; code < field_size; ++code) {
    std::uint64_t c = code;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    if (f[0] == 0) continue;
    PolyRing ring{p, m, &f};
    const Poly gen = ring.x();
    if (ring.pow(gen, n_units) != ring.one()) continue;
    bool primitive = true;
    for (auto r : factors) {
      if (ring.pow(gen, n_units / r) == ring.one()) {
        primitive = false;
        break;
      }
    }
    if (!primitive) continue;
    bool compatible = true;
    for (const auto& [d, g] : sub_moduli) {
      const std::uint64_t expo = n_units / (ipow(p, d) - 1);
      if (!is_zero_poly(ring.eval(g, ring.pow(gen, expo)))) {
        compatible = false;
        break;
      }
    }
    if (compatible) return f;
  }
  throw Error("no compatible primitive modulus found");  // unreachable for valid input
}

std::uint32_t poly_to_code(const Poly& a, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

Poly code_to_poly(std::uint32_t code, std::uint32_t p, unsigned m) {
  Poly a(m);
  for (unsigned i = 0; i < m; ++i) {
    a[i] = code % p;
    code /= p;
  }
  return a;
}

}  // namespace

FieldSpec make_field(std::uint32_t p, unsigned m) {
  if (!is_prime(p)) throw InvalidArgument("make_field: p = " + std::to_string(p) + " is not prime");
  if (m < 1 || m > 16) throw InvalidArgument("make_field: degree must lie in [1,16]");
  if (ipow(p, m) > kMaxFieldSize) throw InvalidArgument("make_field: p^m exceeds 2^24");

  std::lock_guard lock(registry_mutex());
  auto& reg = registry();
  if (auto it = reg.find({p, m}); it != reg.end()) return FieldSpec(it->second);

  // Compatibility with maximal proper subfields implies compatibility with all.
  std::vector<std::pair<unsigned, Poly>> subs;
  for (auto r : prime_factors(m)) {
    const unsigned d = m / static_cast<unsigned>(r);
    subs.emplace_back(d, make_field(p, d).modulus());
  }

  auto data = std::make_shared<detail::FieldData>();
  data->p = p;
  data->m = m;
  data->size = static_cast<std::uint32_t>(ipow(p, m));
  data->modulus = find_modulus(p, m, subs);

  if (data->size <= kMaxEnumerationSize) {
    PolyRing ring{p, m, &data->modulus};
    const std::uint32_t n = data->size - 1;
    data->exp_table.resize(n);
    data->log_table.assign(data->size, 0);
    Poly cur = ring.one();
    const Poly gen = ring.x();
    for (std::uint32_t k = 0; k < n; ++k) {
      const std::uint32_t code = poly_to_code(cur, p);
      data->exp_table[k] = code;
      data->log_table[code] = k;
      cur = ring.mulmod(cur, gen);
    }
  }
  reg.emplace(std::make_pair(p, m), data);
  return FieldSpec(std::move(data));
}

std::uint32_t FieldSpec::p() const { return data_->p; }
unsigned FieldSpec::degree() const { return data_->m; }
std::uint32_t FieldSpec::size() const { return data_->size; }
const std::vector<std::uint32_t>& FieldSpec::modulus() const { return data_->modulus; }
bool FieldSpec::has_tables() const { return !data_->exp_table.empty(); }

std::string FieldSpec::to_string() const {
  std::ostringstream os;
  os << "F_" << data_->size;
  return os.str();
}

bool operator==(const FieldSpec& a, const FieldSpec& b) {
  if (a.data_ == b.data_) return true;
  if (!a.data_ || !b.data_) return false;
  return a.data_->p == b.data_->p && a.data_->m == b.data_->m;
}

std::uint32_t FieldSpec::add(std::uint32_t a, std::uint32_t b) const {
  const std::uint32_t p = data_->p;
  if (p == 2) return a ^ b;
  std::uint32_t r = 0, scale = 1;
  for (unsigned i = 0; i < data_->m; ++i) {
    r += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return r;
}

std::uint32_t FieldSpec::neg(std::uint32_t a) const {
  const std::uint32_t p = data_->p;
  if (p == 2) return a;
  std::uint32_t r = 0, scale = 1;
  for (unsigned i = 0; i < data_->m; ++i) {
    r += ((p - a % p) % p) * scale;
    a /= p;
    scale *= p;
  }
  return r;
}

std::uint32_t FieldSpec::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t FieldSpec::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  const auto& d = *data_;
  if (!d.exp_table.empty()) {
    std::uint64_t s = std::uint64_t{d.log_table[a]} + d.log_table[b];
    const std::uint32_t n = d.size - 1;
    if (s >= n) s -= n;
    return d.exp_table[s];
  }
  PolyRing ring{d.p, d.m, &d.modulus};
  return poly_to_code(ring.mulmod(code_to_poly(a, d.p, d.m), code_to_poly(b, d.p, d.m)), d.p);
}

std::uint32_t FieldSpec::pow(std::uint32_t a, std::uint64_t e) const {
  const auto& d = *data_;
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (!d.exp_table.empty()) {
    const std::uint64_t n = d.size - 1;
    return d.exp_table[static_cast<std::uint32_t>((d.log_table[a] * (e % n)) % n)];
  }
  PolyRing ring{d.p, d.m, &d.modulus};
  return poly_to_code(ring.pow(code_to_poly(a, d.p, d.m), e), d.p);
}

std::uint32_t FieldSpec::inv(std::uint32_t a) const {
  if (a == 0) throw InvalidArgument("inverse of zero");
  const auto& d = *data_;
  if (!d.exp_table.empty()) {
    const std::uint32_t n = d.size - 1;
    const std::uint32_t l = d.log_table[a];
    return d.exp_table[l == 0 ? 0 : n - l];
  }
  return pow(a, d.size - 2);
}

std::uint32_t FieldSpec::generator() const {
  const auto& d = *data_;
  if (d.m == 1) return (d.p - d.modulus[0]) % d.p;
  return d.p;
}

std::uint32_t FieldSpec::log(std::uint32_t a) const {
  if (a == 0) throw InvalidArgument("logarithm of zero");
  if (!has_tables()) throw Unsupported("discrete logarithm needs an enumerable field");
  return data_->log_table[a];
}

std::uint32_t FieldSpec::exp(std::uint64_t k) const {
  if (has_tables()) return data_->exp_table[k % (data_->size - 1)];
  return pow(generator(), k);
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(FieldSpec spec, std::uint32_t code) : spec_(std::move(spec)), code_(code) {
  if (!spec_.valid()) throw InvalidArgument("field element without a field");
  if (code_ >= spec_.size()) throw InvalidArgument("field element code out of range");
}

FieldElement FieldElement::from_coeffs(const FieldSpec& spec, std::span<const std::uint32_t> coeffs) {
  if (coeffs.size() != spec.degree()) throw InvalidArgument("coefficient count must equal the field degree");
  std::uint32_t code = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) code = code * spec.p() + coeffs[i] % spec.p();
  return {spec, code};
}

std::vector<std::uint32_t> FieldElement::coeffs() const { return code_to_poly(code_, spec_.p(), spec_.degree()); }

namespace {
void require_same(const FieldElement& a, const FieldElement& b) {
  if (!(a.spec() == b.spec())) throw InvalidArgument("operands live in different fields");
}
}  // namespace

FieldElement FieldElement::inverse() const { return {spec_, spec_.inv(code_)}; }
FieldElement FieldElement::pow(std::uint64_t e) const { return {spec_, spec_.pow(code_, e)}; }
FieldElement FieldElement::operator-() const { return {spec_, spec_.neg(code_)}; }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.spec_, a.spec_.add(a.code_, b.code_)};
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.spec_, a.spec_.sub(a.code_, b.code_)};
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.spec_, a.spec_.mul(a.code_, b.code_)};
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

bool operator==(const FieldElement& a, const FieldElement& b) { return a.spec_ == b.spec_ && a.code_ == b.code_; }

std::string FieldElement::to_string() const {
  const auto c = coeffs();
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || c[i] != 1) os << c[i];
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

FieldElement field_arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add:
      return a + b;
    case ArithOp::Mul:
      return a * b;
    case ArithOp::Inv:
      return a.inverse();
    case ArithOp::Neg:
      return -a;
  }
  throw InvalidArgument("unknown arithmetic operation");
}

FieldElement frobenius(const FieldElement& x, unsigned e, std::uint64_t k) {
  if (e == 0) throw InvalidArgument("frobenius: base exponent must be positive");
  const unsigned m = x.spec().degree();
  // x^{p^{ek}} only depends on ek mod m.
  const std::uint64_t steps = (std::uint64_t{e} * k) % m;
  FieldElement r = x;
  for (std::uint64_t i = 0; i < steps; ++i) r = r.pow(x.spec().p());
  return r;
}

FieldElement embed(const FieldElement& x, const FieldSpec& target) {
  const FieldSpec& src = x.spec();
  if (src.p() != target.p() || target.degree() % src.degree() != 0)
    throw InvalidArgument("embed: source degree must divide target degree");
  if (src == target) return x;
  // The source generator maps to generator_target^{(p^b-1)/(p^a-1)}.
  const std::uint64_t expo = (std::uint64_t{target.size()} - 1) / (std::uint64_t{src.size()} - 1);
  const std::uint32_t root = target.pow(target.generator(), expo);
  const auto c = x.coeffs();
  std::uint32_t acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = target.add(target.mul(acc, root), c[i]);
  return {target, acc};
}

bool in_subfield(const FieldElement& x, unsigned sub_degree) {
  const auto& f = x.spec();
  if (sub_degree == 0 || f.degree() % sub_degree != 0) return false;
  return frobenius(x, sub_degree, 1) == x;
}

FieldElement norm_map(const FieldElement& x, unsigned d, unsigned e) {
  if (x.is_zero()) throw InvalidArgument("norm_map: zero input");
  if (!in_subfield(x, 2 * d * e)) throw InvalidArgument("norm_map: element not in F_{q^{2d}}");
  return x * frobenius(x, e, d);
}

std::vector<FieldElement> enumerate_units(const FieldSpec& spec) {
  if (spec.size() > kMaxEnumerationSize) throw InvalidArgument("enumerate_units: field too large");
  std::vector<FieldElement> out;
  out.reserve(spec.size() - 1);
  for (std::uint32_t c = 1; c < spec.size(); ++c) out.emplace_back(spec, c);
  return out;
}

}  // namespace zipsheaf::ff

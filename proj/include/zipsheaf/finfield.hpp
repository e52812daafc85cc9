#pragma once

// Exact arithmetic in small finite fields F_{p^m}.
//
// Elements are stored in the polynomial basis 1, x, ..., x^{m-1} of
// F_p[x]/(f) and packed into a single integer code  c_0 + c_1 p + ... .
// The modulus f is primitive (x generates the unit group) and compatible
// with the moduli of all subfields: for d | m the element
// x^{(p^m-1)/(p^d-1)} is a root of the degree-d modulus.  This makes the
// subfield embeddings canonical and transitive.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace zipsheaf::ff {

namespace detail {
struct FieldData;
}

/// Largest field for which make_field() succeeds.
inline constexpr std::uint64_t kMaxFieldSize = std::uint64_t{1} << 24;
/// Largest field for which enumeration (and table arithmetic) is available.
inline constexpr std::uint64_t kMaxEnumerationSize = std::uint64_t{1} << 20;

class FieldSpec {
 public:
  FieldSpec() = default;

  std::uint32_t p() const;
  unsigned degree() const;
  /// Number of elements p^m.
  std::uint32_t size() const;
  /// Coefficients of the monic modulus, constant term first (length m+1).
  const std::vector<std::uint32_t>& modulus() const;
  std::string to_string() const;

  bool valid() const { return static_cast<bool>(data_); }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b);

  // Raw arithmetic on element codes.  Codes are in [0, size()).
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  /// Requires a != 0.
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  /// Code of the primitive element x (the residue of the indeterminate).
  std::uint32_t generator() const;
  /// Discrete logarithm to base generator(); requires a != 0 and tables.
  std::uint32_t log(std::uint32_t a) const;
  /// generator()^k.
  std::uint32_t exp(std::uint64_t k) const;
  bool has_tables() const;

 private:
  friend FieldSpec make_field(std::uint32_t, unsigned);
  explicit FieldSpec(std::shared_ptr<const detail::FieldData> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::FieldData> data_;
};

/// Returns the field F_{p^m}.  Repeated calls return the same field.
/// Throws InvalidArgument if p is not prime, m is outside [1,16] or p^m > 2^24.
FieldSpec make_field(std::uint32_t p, unsigned m);

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldSpec spec, std::uint32_t code);
  static FieldElement zero(const FieldSpec& spec) { return {spec, 0}; }
  static FieldElement one(const FieldSpec& spec) { return {spec, 1}; }
  static FieldElement from_coeffs(const FieldSpec& spec, std::span<const std::uint32_t> coeffs);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t code() const { return code_; }
  std::vector<std::uint32_t> coeffs() const;
  bool is_zero() const { return code_ == 0; }
  bool is_one() const { return code_ == 1; }

  FieldElement inverse() const;
  FieldElement pow(std::uint64_t e) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::string to_string() const;

 private:
  FieldSpec spec_;
  std::uint32_t code_ = 0;
};

enum class ArithOp { Add, Mul, Inv, Neg };

/// Applies `op`; the unary operations ignore `b`.
FieldElement field_arith(const FieldElement& a, const FieldElement& b, ArithOp op);

/// x^{q^k} where q = p^e.  The caller chooses e.
FieldElement frobenius(const FieldElement& x, unsigned e, std::uint64_t k);

/// Canonical embedding into a field whose degree is a multiple of x's.
FieldElement embed(const FieldElement& x, const FieldSpec& target);

/// x * x^{q^d} for x in F_{q^{2d}} (q = p^e), which lies in F_{q^d}.
FieldElement norm_map(const FieldElement& x, unsigned d, unsigned e);

/// True iff x lies in the subfield with p^sub_degree elements.
bool in_subfield(const FieldElement& x, unsigned sub_degree);

/// All nonzero elements in increasing code order.
std::vector<FieldElement> enumerate_units(const FieldSpec& spec);

/// Number theory helpers shared with the rest of the library.
bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
/// If q = p^e with p prime, returns {p, e}; otherwise {0, 0}.
std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q);

}  // namespace zipsheaf::ff

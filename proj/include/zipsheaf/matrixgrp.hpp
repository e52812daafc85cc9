#pragma once

// Brute-force oracle: explicit finite matrix groups over small fields and
// the twisted-Frobenius fixed points  { h in H_w : h = phi(L h L^{-1}) }
// computed straight from the defining equation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zipsheaf/finfield.hpp"
#include "zipsheaf/polynomial.hpp"
#include "zipsheaf/stabilizer.hpp"
#include "zipsheaf/zipdata.hpp"

namespace zipsheaf::mg {

using Code = std::uint32_t;

/// Hard cap on candidate evaluations per oracle call.
inline constexpr std::uint64_t kCandidateBudget = 10'000'000;
/// Largest fixed-point set that is materialized element by element.
inline constexpr std::uint64_t kMaterializeLimit = 400'000;
/// Largest set handed to conjugacy_class_count().
inline constexpr std::uint64_t kClassCountLimit = 100'000;

/// Square matrix of field codes, row-major.
struct Matrix {
  unsigned n = 0;
  std::vector<Code> a;

  Matrix() = default;
  explicit Matrix(unsigned size) : n(size), a(std::size_t{size} * size, 0) {}

  Code& operator()(unsigned i, unsigned j) { return a[std::size_t{i} * n + j]; }
  Code operator()(unsigned i, unsigned j) const { return a[std::size_t{i} * n + j]; }

  friend bool operator==(const Matrix& x, const Matrix& y) { return x.n == y.n && x.a == y.a; }
  friend bool operator<(const Matrix& x, const Matrix& y) { return x.n != y.n ? x.n < y.n : x.a < y.a; }
};

/// Matrix arithmetic over F_{p^k}, with a fixed base power q for the
/// entrywise Frobenius x -> x^q.
class MatrixRing {
 public:
  MatrixRing(ff::FieldSpec field, std::uint64_t q);

  const ff::FieldSpec& field() const { return field_; }
  std::uint64_t q() const { return q_; }

  Code frob(Code x) const { return frob_[x]; }
  Matrix frob(const Matrix& m) const;
  Matrix identity(unsigned n) const;
  Matrix mul(const Matrix& x, const Matrix& y) const;
  Matrix transpose(const Matrix& x) const;
  Matrix scale(const Matrix& x, Code c) const;
  Code det(const Matrix& x) const;
  std::optional<Matrix> inverse(const Matrix& x) const;
  /// Matrix with entries in {-1, 0, 1}.
  Matrix from_signed(const std::vector<int>& entries, unsigned n) const;
  /// Antidiagonal with all entries 1.
  Matrix antidiag(unsigned n) const;
  std::string to_string(const Matrix& x) const;

 private:
  ff::FieldSpec field_;
  std::uint64_t q_;
  std::vector<Code> frob_;
};

enum class GroupKind { GL, Sp, GU, U };

std::string kind_name(GroupKind k);

/// A classical group of size n (matrix size n, or 2n for Sp) over F_q.
/// GU and U are realized inside GL_n(F_{q^2}) with the antidiagonal
/// hermitian form; Sp uses J_n = [[0, antidiag(1)], [antidiag(-1), 0]].
struct MatrixGroupSpec {
  GroupKind kind = GroupKind::GL;
  unsigned n = 1;
  std::uint64_t q = 2;

  unsigned matrix_size() const { return kind == GroupKind::Sp ? 2 * n : n; }
  /// Field the entries live in: F_q, or F_{q^2} for GU and U.
  ff::FieldSpec field() const;
  /// Membership predicate.
  bool contains(const MatrixRing& ring, const Matrix& g) const;
  /// Number of raw matrices that enumerate_group() has to test.
  Integer candidate_count() const;
};

/// The symplectic form J_n as a signed matrix of size 2n.
std::vector<int> symplectic_form(unsigned n);

/// Similitude factor c(g) with g^dagger g = c(g) 1, or nullopt if g is not
/// a unitary similitude.  g^dagger = W0 conj(g)^T W0, conj = x -> x^q.
std::optional<Code> similitude_factor(const MatrixRing& ring, const Matrix& g);

/// All elements, sorted.  Throws BudgetExceeded if the raw candidate count
/// exceeds the budget.
std::vector<Matrix> enumerate_group(const MatrixGroupSpec& spec, std::uint64_t budget = kCandidateBudget);

/// Signed permutation matrix (entries -1, 0, 1), row-major.
struct SignedMatrix {
  unsigned n = 0;
  std::vector<int> e;

  int operator()(unsigned i, unsigned j) const { return e[std::size_t{i} * n + j]; }
  friend bool operator==(const SignedMatrix& x, const SignedMatrix& y) { return x.n == y.n && x.e == y.e; }
  friend SignedMatrix operator*(const SignedMatrix& x, const SignedMatrix& y);
  /// The underlying permutation: column j has its nonzero entry in row w(j).
  weyl::WeylElement permutation() const;
  bool is_scalar() const;
};

SignedMatrix permutation_matrix(const weyl::WeylElement& w);
/// Lift of the simple reflection s_{i+1} of Sp_2n.
SignedMatrix sp_simple_lift(unsigned n, unsigned i);
/// Lift of w: permutation matrices for GL and GU, products of simple lifts
/// along a reduced word for Sp.
SignedMatrix weyl_lift(const zip::ZipDatum& d, const weyl::WeylElement& w);

struct TwistData {
  stab::GroupFamily family = stab::GroupFamily::GL;
  SignedMatrix lift;  // the lift of y w
  std::uint64_t q = 2;
};

/// The lift of y w.  GL and GU: permutation matrix of y w.  Sp: y_dot w_dot
/// with w_dot from a reduced word and y_dot = [[0, 1], [-1, 0]] when n >= 3
/// and y is i -> n+i, otherwise from a reduced word.
TwistData build_lift(const zip::ZipDatum& d, const weyl::WeylElement& w);

/// The Levi H_w of type K: diagonal blocks given by runs of K, plus a middle
/// Sp block when s_n is in K.
struct LeviSpec {
  stab::GroupFamily family = stab::GroupFamily::GL;
  unsigned rank = 1;
  std::uint64_t q = 2;
  std::vector<std::vector<unsigned>> blocks;  // 1-based, upper half for Sp
  unsigned middle = 0;                        // Sp middle block rank

  /// Size of the matrices representing H_w: n, 2n, or n+1 for GU (the
  /// similitude factor sits in the last diagonal entry).
  unsigned matrix_size() const;
};

LeviSpec levi_spec(const zip::ZipDatum& d, const zip::Stratum& s);

struct FixedPointResult {
  enum class Status { Computed, Skipped };
  Status status = Status::Skipped;
  std::string note;
  unsigned field_degree = 0;  // enumeration happens over F_{q^m}
  std::uint64_t candidates = 0;
  Integer order = 0;
  bool materialized = false;
  std::vector<Matrix> elements;  // sorted, when materialized
  bool is_group = false;         // verified closure, when materialized
  std::optional<std::uint64_t> class_count;
};

/// Fixed points of h -> F(L h L^{-1}) on H_w(F_{q^m}); for GU the map is
/// (A, c) -> (c^q W0 F(P A P^{-1})^{-T} W0, c^q).  Returns Skipped when the
/// candidate budget or field size is exceeded.
FixedPointResult twisted_fixed_points(const LeviSpec& levi, const TwistData& twist,
                                      std::uint64_t budget = kCandidateBudget);

/// Convenience wrapper for a stratum.
FixedPointResult stratum_fixed_points(const zip::ZipDatum& d, const zip::Stratum& s,
                                      std::uint64_t budget = kCandidateBudget);

struct GroupCheck {
  bool ok = false;
  std::vector<Matrix> generators;
  std::string failure;
};

/// Verifies that a sorted set of matrices is a group by building a
/// generating set greedily and closing it.
GroupCheck verify_group(const MatrixRing& ring, const std::vector<Matrix>& sorted_elements);

/// Number of conjugacy classes.  Throws Error if the set is not a group and
/// InvalidArgument if it has more than kClassCountLimit elements.
std::uint64_t conjugacy_class_count(const MatrixRing& ring, const std::vector<Matrix>& sorted_elements);

}  // namespace zipsheaf::mg

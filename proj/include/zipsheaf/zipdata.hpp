#pragma once

// Combinatorial shadow of a zip datum: the Weyl group with Frobenius, the
// type I of the parabolic P, and everything derived from them (J, y, the
// strata ^I W, the Levi types K_w and the closure order on strata).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zipsheaf/weyl.hpp"

namespace zipsheaf::zip {

using weyl::CoxeterDescriptor;
using weyl::ReflectionSet;
using weyl::WeylElement;

struct ZipDatum {
  CoxeterDescriptor cox;
  ReflectionSet I;
  std::uint64_t q = 0;
  /// Degree of the reflex field over F_q: 2 for GU, 1 otherwise.
  unsigned kappa_degree = 1;

  /// Validates I and q and fills kappa_degree from the family.
  static ZipDatum make(CoxeterDescriptor cox, ReflectionSet I, std::uint64_t q);
};

struct Stratum {
  WeylElement w;
  unsigned length = 0;
  ReflectionSet K;
  bool is_open = false;
  bool is_closed = false;
};

/// J = ^{w0} phi(I).
ReflectionSet compute_J(const ZipDatum& d);

/// y = w0 w_{0,I}.
WeylElement compute_y(const ZipDatum& d);

/// Largest subset of J ∩ ^{w^{-1}}I stable under phi∘int(yw).  Throws
/// InvalidArgument if w is not in ^I W.
ReflectionSet compute_Kw(const ZipDatum& d, const WeylElement& w);

/// One stratum per Galois orbit on ^I W, in (length, one-line) order.
/// Throws Unsupported if the Galois action is not trivial.
std::vector<Stratum> strata(const ZipDatum& d);

struct ClosureOrder {
  enum class Source { CandidateRule, StoredDiagram, Omitted };

  std::vector<WeylElement> nodes;  // same order as strata()
  /// below[i][j]: stratum i lies in the closure of stratum j (reflexive).
  std::vector<std::vector<bool>> below;
  /// Hasse edges (from, to) pointing from the larger (more open) stratum to
  /// the specialization.
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  Source source = Source::CandidateRule;
  std::vector<std::string> diagnostics;
};

/// Upper bound on |^I W|^2 |W_I| for computing the candidate rule.
inline constexpr std::uint64_t kClosureBudget = 50'000'000;

/// The candidate rule  w' <= w  iff  u w' delta(u)^{-1} <= w  (Bruhat) for
/// some u in W_I, delta = phi∘int(y), closed under transitivity.
ClosureOrder candidate_closure_order(const ZipDatum& d);

/// Specialization diagrams stated explicitly for GL_4 of type (2,2) and GU_n
/// of signature (1,n-1); nullopt for every other datum.
std::optional<ClosureOrder> stored_diagram(const ZipDatum& d);

/// Candidate rule, cross-checked against the stored diagram when one
/// exists.  On disagreement the stored diagram is returned together with a
/// diagnostic.
ClosureOrder closure_order(const ZipDatum& d);

struct ClosureValidation {
  bool ok = true;
  std::vector<std::string> messages;
};

/// Runs the candidate rule against every stored diagram (GL_4 (2,2) and
/// GU_n (1,n-1) for 2 <= n <= 6).  Computed once per process.
const ClosureValidation& validate_closure_rule();

/// Rebuilds covers from `below`.
void compute_covers(ClosureOrder& order);

}  // namespace zipsheaf::zip

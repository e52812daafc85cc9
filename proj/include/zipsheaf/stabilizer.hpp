#pragma once

// Symbolic description of the component groups
//   Pi_w = { h in H_w : h = phi(y'w' h (y'w')^{-1}) }
// as products (and, for unitary similitude groups, extensions) of finite
// groups of Lie type, together with their order polynomials.

#include <optional>
#include <string>
#include <vector>

#include "zipsheaf/polynomial.hpp"
#include "zipsheaf/zipdata.hpp"

namespace zipsheaf::stab {

enum class GroupFamily { GL, Sp, GU };

std::string family_name(GroupFamily f);
/// Group family of a Weyl-group descriptor.
GroupFamily family_of(const weyl::CoxeterDescriptor& cox);

enum class AtomKind {
  TorusRes,    ///< F_{q^d}^x
  NormKernel,  ///< {x in F_{q^{2d}}^x : x^{q^d+1} = 1}
  GLBlock,     ///< GL_k(F_{q^d})
  UBlock,      ///< U_k(F_{q^d})
  GUBlock,     ///< GU_k(F_q), with GU_0(F_q) = F_q^x
  SpBlock,     ///< Sp_2k(F_q)
  FullGroup,   ///< G(F_q) for the family and rank stored in the atom
};

struct Atom {
  AtomKind kind = AtomKind::TorusRes;
  unsigned k = 1;
  unsigned d = 1;
  GroupFamily family = GroupFamily::GL;  // FullGroup only

  static Atom torus(unsigned d) { return {AtomKind::TorusRes, 1, d}; }
  static Atom norm_kernel(unsigned d) { return {AtomKind::NormKernel, 1, d}; }
  static Atom gl(unsigned k, unsigned d) { return {AtomKind::GLBlock, k, d}; }
  static Atom unitary(unsigned k, unsigned d) { return {AtomKind::UBlock, k, d}; }
  static Atom gu(unsigned k) { return {AtomKind::GUBlock, k, 1}; }
  static Atom sp(unsigned k) { return {AtomKind::SpBlock, k, 1}; }
  static Atom full(GroupFamily f, unsigned n) { return {AtomKind::FullGroup, n, 1, f}; }

  /// GL_1 -> torus, U_1 -> norm kernel.
  Atom canonical() const;
  /// True for GL_0, U_0 and Sp_0.
  bool is_trivial() const;
  bool is_abelian() const;
  QPolynomial order_polynomial() const;
  std::string to_string() const;
  std::string kind_name() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.kind == b.kind && a.k == b.k && a.d == b.d && (a.kind != AtomKind::FullGroup || a.family == b.family);
  }
  friend bool operator<(const Atom& a, const Atom& b);
};

struct Extension {
  std::vector<Atom> kernel;
  Atom quotient;
};

/// Pi_w as a direct product of atoms, or as an extension
///   1 -> kernel -> Pi_w -> quotient -> 1
/// (the extension class is not recorded).
struct GroupDescriptor {
  std::vector<Atom> factors;
  std::optional<Extension> extension;

  /// Canonical atoms, trivial factors dropped, atoms sorted.
  GroupDescriptor canonical() const;
  bool is_abelian() const;
  QPolynomial order_polynomial() const;
  std::string to_string() const;

  friend bool operator==(const GroupDescriptor& a, const GroupDescriptor& b);
};

/// Action of a twisted Frobenius on a family of blocks: block i is sent to
/// block perm[i], composed with transpose-inverse when sign[i] = -1.
struct BlockAction {
  std::vector<unsigned> sizes;
  std::vector<unsigned> perm;
  std::vector<int> sign;
};

/// Torus coordinate i goes to coordinate perm[i] raised to sign[i] * q.
struct SignedMonomialAction {
  std::vector<unsigned> perm;
  std::vector<int> sign;
};

struct BlockCycle {
  std::vector<unsigned> blocks;  // in the order visited
  unsigned size = 0;             // common block size
  int sign = 1;                  // product of signs along the cycle
  unsigned length() const { return static_cast<unsigned>(blocks.size()); }
};

/// Cycles of a block action; throws Error if a block is mapped to a block
/// of different size or perm is not a bijection.
std::vector<BlockCycle> block_cycles(const BlockAction& act);

/// Fixed points on the torus: one TorusRes(d) per cycle of length d with
/// sign product +1, one NormKernel(d) per cycle with sign product -1.
GroupDescriptor torus_fixed_points(const SignedMonomialAction& act);

/// Fixed points of a block action without similitude factor: GLBlock(k,d)
/// or UBlock(k,d) per cycle.
GroupDescriptor block_fixed_points(const BlockAction& act);

/// The block structure of the Levi of type K and the action of
/// phi∘int(y w) on it, as used by stabilizer_descriptor().  For Sp the
/// blocks are the runs inside {1..n}; a middle Sp block (when s_n is in K)
/// is reported separately.
struct LeviBlocks {
  std::vector<std::vector<unsigned>> blocks;  // 1-based positions
  BlockAction action;
  unsigned middle_sp_rank = 0;  // Sp only
  bool has_similitude = false;  // GU only
};
LeviBlocks levi_blocks(const zip::ZipDatum& d, const zip::Stratum& s);

/// Symbolic Pi_w.  Throws Unsupported outside the implemented patterns.
GroupDescriptor stabilizer_descriptor(const zip::ZipDatum& d, const zip::Stratum& s);

/// f(n,k) for GU_n of signature (1,n-1).
unsigned gu_f(unsigned n, unsigned k);
/// epsilon(n,k) = -1 if k <= (n+1)/2, else +1.
int gu_epsilon(unsigned n, unsigned k);
/// The set M(n,k) of positions outside the long cycle of w_{0,I} w.
std::vector<unsigned> gu_m_set(unsigned n, unsigned k);
/// {(i i+1) in I : i, i+1 in M(n,k)} as 0-based reflection indices.
weyl::ReflectionSet gu_signature_kw(unsigned n, unsigned k);
/// Closed form for the stratum w = (1...k) of GU_n with signature (1,n-1).
GroupDescriptor gu_signature_descriptor(unsigned n, unsigned k);

/// Closed form for the stratum w_k = (1...k), k >= 3, of GL_n of type (1,n-1).
GroupDescriptor gl_one_n_descriptor(unsigned n, unsigned k);

Integer order_at(const GroupDescriptor& g, std::uint64_t q);

/// Number of irreducible complex representations when it follows from the
/// descriptor alone (abelian groups: the order); nullopt means the count has
/// to come from a conjugacy-class computation.
std::optional<Integer> irrep_count(const GroupDescriptor& g, std::uint64_t q);

}  // namespace zipsheaf::stab

#pragma once

// Weyl groups of GL_n / GU_n (symmetric group S_n) and of Sp_2n (the
// centralizer of the involution i -> 2n+1-i inside S_2n), as permutation
// groups with their Coxeter structure.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace zipsheaf::weyl {

/// A permutation of {1, ..., N}, stored in one-line form.  Products compose
/// right to left: (a * b)(i) = a(b(i)).
class WeylElement {
 public:
  WeylElement() = default;
  /// Identity of S_N.
  explicit WeylElement(unsigned degree);
  /// From one-line notation with 1-based values.  Throws on non-bijections.
  static WeylElement from_one_line(const std::vector<unsigned>& images);
  /// From disjoint or non-disjoint cycles (1-based), applied right to left.
  static WeylElement from_cycles(unsigned degree, const std::vector<std::vector<unsigned>>& cycles);

  unsigned degree() const { return static_cast<unsigned>(img_.size()); }
  /// Image of the 1-based point i.
  unsigned operator()(unsigned i) const { return img_[i - 1] + 1u; }
  std::vector<unsigned> one_line() const;

  WeylElement inverse() const;
  bool is_identity() const;
  /// Packs the one-line form into 4-bit nibbles; injective for degree <= 16.
  std::uint64_t code() const;

  /// Cycle notation such as "(1342)" or "(13)(24)"; "id" for the identity.
  std::string to_string() const;

  friend WeylElement operator*(const WeylElement& a, const WeylElement& b);
  friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.img_ == b.img_; }
  /// Lexicographic on one-line form.
  friend bool operator<(const WeylElement& a, const WeylElement& b) { return a.img_ < b.img_; }

 private:
  std::vector<std::uint8_t> img_;  // 0-based images
};

struct Cycle {
  std::vector<unsigned> points;  // 1-based, starting at the smallest point
  unsigned length() const { return static_cast<unsigned>(points.size()); }
};

/// Disjoint cycles covering {1..N} (fixed points as 1-cycles), ordered by
/// smallest point.
std::vector<Cycle> cycle_decomposition(const WeylElement& w);

/// Subset of the simple reflections, as a bitmask over their indices 0..r-1.
class ReflectionSet {
 public:
  ReflectionSet() = default;
  explicit ReflectionSet(std::uint32_t mask) : mask_(mask) {}
  static ReflectionSet all(unsigned rank) { return ReflectionSet(rank >= 32 ? ~0u : (1u << rank) - 1u); }
  /// From 0-based indices.
  static ReflectionSet of(const std::vector<unsigned>& indices);

  bool contains(unsigned i) const { return (mask_ >> i) & 1u; }
  void insert(unsigned i) { mask_ |= 1u << i; }
  void erase(unsigned i) { mask_ &= ~(1u << i); }
  std::uint32_t mask() const { return mask_; }
  unsigned size() const;
  bool empty() const { return mask_ == 0; }
  std::vector<unsigned> indices() const;

  friend ReflectionSet operator&(ReflectionSet a, ReflectionSet b) { return ReflectionSet(a.mask_ & b.mask_); }
  friend ReflectionSet operator|(ReflectionSet a, ReflectionSet b) { return ReflectionSet(a.mask_ | b.mask_); }
  friend bool operator==(ReflectionSet a, ReflectionSet b) { return a.mask_ == b.mask_; }

 private:
  std::uint32_t mask_ = 0;
};

enum class Family {
  TypeA,         ///< S_n for GL_n, trivial Frobenius
  TypeC,         ///< hyperoctahedral group inside S_2n for Sp_2n
  TypeATwisted,  ///< S_n for GU_n, Frobenius w -> w0 w w0
};

enum class FrobeniusKind { Identity, ConjugateByW0 };

namespace detail {
struct CoxeterData;
}

/// A finite Weyl group with simple reflections and Frobenius.  Element
/// lengths and reduced words are computed once at construction by a
/// breadth-first search of the Cayley graph; the descriptor is immutable
/// and cheap to copy.
class CoxeterDescriptor {
 public:
  static constexpr unsigned kMaxRankA = 8;
  static constexpr unsigned kMaxRankC = 6;

  /// Weyl group of GL_n (n >= 1).
  static CoxeterDescriptor type_a(unsigned n);
  /// Weyl group of Sp_2n (n >= 1).
  static CoxeterDescriptor type_c(unsigned n);
  /// Weyl group of GU_n (n >= 1) with the non-trivial Frobenius.
  static CoxeterDescriptor type_a_twisted(unsigned n);

  Family family() const;
  FrobeniusKind frobenius_kind() const;
  /// n for GL_n, GU_n and Sp_2n.
  unsigned rank() const;
  /// Degree N of the ambient symmetric group (n, or 2n for type C).
  unsigned degree() const;
  unsigned num_simple() const;
  const std::vector<WeylElement>& simple_reflections() const;
  const WeylElement& simple(unsigned i) const { return simple_reflections()[i]; }
  /// Index of s if it is a simple reflection, else -1.
  int simple_index(const WeylElement& s) const;
  /// Display name of the simple reflection i: "(i i+1)" in type A, "s_i" in type C.
  std::string simple_name(unsigned i) const;

  /// All elements of W sorted by (length, one-line form).
  const std::vector<WeylElement>& elements() const;
  std::size_t order() const { return elements().size(); }
  /// Membership in W (type C symmetry constraint).
  bool contains(const WeylElement& w) const;
  /// Reduced word (indices of simple reflections) with w = s_{i1} ... s_{ik}.
  std::vector<unsigned> reduced_word(const WeylElement& w) const;

  /// Length from the breadth-first table.
  unsigned bfs_length(const WeylElement& w) const;

 private:
  explicit CoxeterDescriptor(std::shared_ptr<const detail::CoxeterData> d) : data_(std::move(d)) {}
  static CoxeterDescriptor build(Family fam, unsigned n);
  std::shared_ptr<const detail::CoxeterData> data_;
};

/// Minimal word length; type A uses the inversion count.  Throws
/// InvalidArgument if w is not in W.
unsigned length(const CoxeterDescriptor& cox, const WeylElement& w);

/// Elements of the parabolic subgroup W_K.
std::vector<WeylElement> parabolic_subgroup(const CoxeterDescriptor& cox, ReflectionSet K);

/// Longest element w_{0,K} of W_K.
WeylElement longest_element(const CoxeterDescriptor& cox, ReflectionSet K);

/// ^I W: the w with l(sw) > l(w) for all s in I, ordered by (length, one-line).
std::vector<WeylElement> min_coset_reps(const CoxeterDescriptor& cox, ReflectionSet I);

/// Bruhat order.  Type A uses the tableau criterion; type C restricts the
/// Bruhat order of the ambient S_2n.
bool bruhat_leq(const CoxeterDescriptor& cox, const WeylElement& u, const WeylElement& v);

/// The Frobenius on W: identity for split groups, w -> w0 w w0 for GU.
WeylElement frobenius_w(const CoxeterDescriptor& cox, const WeylElement& w);

/// a b a^{-1}.
WeylElement conjugate(const CoxeterDescriptor& cox, const WeylElement& a, const WeylElement& b);

/// Image of a set of simple reflections under x -> g x g^{-1} (optionally
/// followed by Frobenius).  Returns false if some image is not simple.
bool map_reflections(const CoxeterDescriptor& cox, ReflectionSet K, const WeylElement& g, bool apply_frobenius,
                     ReflectionSet& out);

/// Tableau criterion for the Bruhat order of S_N, independent of a descriptor.
bool symmetric_bruhat_leq(const WeylElement& u, const WeylElement& v);

/// Number of inversions i < j with w(i) > w(j).
unsigned inversions(const WeylElement& w);

}  // namespace zipsheaf::weyl

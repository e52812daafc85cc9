#include "zipsheaf/matrixgrp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "zipsheaf/error.hpp"

namespace zipsheaf::mg {

using stab::GroupFamily;
using weyl::WeylElement;

// ---------------------------------------------------------------- MatrixRing

MatrixRing::MatrixRing(ff::FieldSpec field, std::uint64_t q) : field_(std::move(field)), q_(q) {
  if (field_.size() > ff::kMaxEnumerationSize) throw InvalidArgument("MatrixRing: field too large");
  frob_.resize(field_.size());
  for (Code x = 0; x < field_.size(); ++x) frob_[x] = field_.pow(x, q_);
}

Matrix MatrixRing::frob(const Matrix& m) const {
  Matrix r(m.n);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = frob_[m.a[i]];
  return r;
}

Matrix MatrixRing::identity(unsigned n) const {
  Matrix r(n);
  for (unsigned i = 0; i < n; ++i) r(i, i) = 1;
  return r;
}

Matrix MatrixRing::mul(const Matrix& x, const Matrix& y) const {
  const unsigned n = x.n;
  Matrix r(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned k = 0; k < n; ++k) {
      const Code xik = x(i, k);
      if (xik == 0) continue;
      for (unsigned j = 0; j < n; ++j) {
        const Code ykj = y(k, j);
        if (ykj != 0) r(i, j) = field_.add(r(i, j), field_.mul(xik, ykj));
      }
    }
  return r;
}

Matrix MatrixRing::transpose(const Matrix& x) const {
  Matrix r(x.n);
  for (unsigned i = 0; i < x.n; ++i)
    for (unsigned j = 0; j < x.n; ++j) r(j, i) = x(i, j);
  return r;
}

Matrix MatrixRing::scale(const Matrix& x, Code c) const {
  Matrix r(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = field_.mul(x.a[i], c);
  return r;
}

Code MatrixRing::det(const Matrix& x) const {
  Matrix m = x;
  const unsigned n = m.n;
  Code d = 1;
  for (unsigned col = 0; col < n; ++col) {
    unsigned piv = col;
    while (piv < n && m(piv, col) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (unsigned j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      d = field_.neg(d);
    }
    d = field_.mul(d, m(col, col));
    const Code inv = field_.inv(m(col, col));
    for (unsigned r = col + 1; r < n; ++r) {
      if (m(r, col) == 0) continue;
      const Code f = field_.mul(m(r, col), inv);
      for (unsigned j = col; j < n; ++j) m(r, j) = field_.sub(m(r, j), field_.mul(f, m(col, j)));
    }
  }
  return d;
}

std::optional<Matrix> MatrixRing::inverse(const Matrix& x) const {
  const unsigned n = x.n;
  Matrix m = x, r = identity(n);
  for (unsigned col = 0; col < n; ++col) {
    unsigned piv = col;
    while (piv < n && m(piv, col) == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col)
      for (unsigned j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(r(piv, j), r(col, j));
      }
    const Code inv = field_.inv(m(col, col));
    for (unsigned j = 0; j < n; ++j) {
      m(col, j) = field_.mul(m(col, j), inv);
      r(col, j) = field_.mul(r(col, j), inv);
    }
    for (unsigned row = 0; row < n; ++row) {
      if (row == col || m(row, col) == 0) continue;
      const Code f = m(row, col);
      for (unsigned j = 0; j < n; ++j) {
        m(row, j) = field_.sub(m(row, j), field_.mul(f, m(col, j)));
        r(row, j) = field_.sub(r(row, j), field_.mul(f, r(col, j)));
      }
    }
  }
  return r;
}

Matrix MatrixRing::from_signed(const std::vector<int>& entries, unsigned n) const {
  Matrix r(n);
  const Code minus_one = field_.neg(1);
  for (std::size_t i = 0; i < entries.size(); ++i) r.a[i] = entries[i] == 0 ? 0 : (entries[i] > 0 ? 1 : minus_one);
  return r;
}

Matrix MatrixRing::antidiag(unsigned n) const {
  Matrix r(n);
  for (unsigned i = 0; i < n; ++i) r(i, n - 1 - i) = 1;
  return r;
}

std::string MatrixRing::to_string(const Matrix& x) const {
  std::ostringstream os;
  os << "[";
  for (unsigned i = 0; i < x.n; ++i) {
    os << (i ? "; " : "");
    for (unsigned j = 0; j < x.n; ++j) os << (j ? " " : "") << x(i, j);
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- groups

std::string kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::GL: return "GL";
    case GroupKind::Sp: return "Sp";
    case GroupKind::GU: return "GU";
    case GroupKind::U: return "U";
  }
  return "?";
}

ff::FieldSpec MatrixGroupSpec::field() const {
  const auto [p, e] = ff::prime_power(q);
  if (p == 0) throw InvalidArgument("q = " + std::to_string(q) + " is not a prime power");
  const bool hermitian = kind == GroupKind::GU || kind == GroupKind::U;
  return ff::make_field(p, hermitian ? 2 * e : e);
}

std::vector<int> symplectic_form(unsigned n) {
  const unsigned N = 2 * n;
  std::vector<int> j(std::size_t{N} * N, 0);
  for (unsigned i = 0; i < N; ++i) j[std::size_t{i} * N + (N - 1 - i)] = i < n ? 1 : -1;
  return j;
}

namespace {

bool is_symplectic(const MatrixRing& ring, const Matrix& g, const Matrix& J) {
  return ring.mul(ring.transpose(g), ring.mul(J, g)) == J;
}

std::optional<Code> scalar_value(const Matrix& m) {
  const Code c = m(0, 0);
  for (unsigned i = 0; i < m.n; ++i)
    for (unsigned j = 0; j < m.n; ++j)
      if (m(i, j) != (i == j ? c : 0)) return std::nullopt;
  return c;
}

Integer ipow(std::uint64_t base, std::uint64_t exp) {
  Integer r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Odometer over all matrices of size n with entries in [0, Q).
template <class F>
void for_each_matrix(unsigned n, Code Q, F&& f) {
  Matrix m(n);
  for (;;) {
    f(m);
    std::size_t i = 0;
    while (i < m.a.size() && ++m.a[i] == Q) m.a[i++] = 0;
    if (i == m.a.size()) return;
  }
}

}  // namespace

std::optional<Code> similitude_factor(const MatrixRing& ring, const Matrix& g) {
  const unsigned n = g.n;
  Matrix dag(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) dag(i, j) = ring.frob(g(n - 1 - j, n - 1 - i));
  const auto c = scalar_value(ring.mul(dag, g));
  if (!c || *c == 0 || ring.frob(*c) != *c) return std::nullopt;
  return c;
}

bool MatrixGroupSpec::contains(const MatrixRing& ring, const Matrix& g) const {
  if (g.n != matrix_size()) return false;
  switch (kind) {
    case GroupKind::GL: return ring.det(g) != 0;
    case GroupKind::Sp: return is_symplectic(ring, g, ring.from_signed(symplectic_form(n), 2 * n));
    case GroupKind::GU: return similitude_factor(ring, g).has_value();
    case GroupKind::U: {
      const auto c = similitude_factor(ring, g);
      return c && *c == 1;
    }
  }
  return false;
}

Integer MatrixGroupSpec::candidate_count() const {
  const unsigned N = matrix_size();
  return ipow(field().size(), std::uint64_t{N} * N);
}

std::vector<Matrix> enumerate_group(const MatrixGroupSpec& spec, std::uint64_t budget) {
  if (spec.candidate_count() > budget)
    throw BudgetExceeded("enumerate_group: " + kind_name(spec.kind) + "_" + std::to_string(spec.n) +
                         " needs more than " + std::to_string(budget) + " candidates");
  const MatrixRing ring(spec.field(), spec.q);
  std::vector<Matrix> out;
  const Matrix J = spec.kind == GroupKind::Sp ? ring.from_signed(symplectic_form(spec.n), 2 * spec.n) : Matrix();
  for_each_matrix(spec.matrix_size(), ring.field().size(), [&](const Matrix& m) {
    const bool in = spec.kind == GroupKind::Sp ? is_symplectic(ring, m, J) : spec.contains(ring, m);
    if (in) out.push_back(m);
  });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- lifts

SignedMatrix operator*(const SignedMatrix& x, const SignedMatrix& y) {
  SignedMatrix r{x.n, std::vector<int>(x.e.size(), 0)};
  for (unsigned i = 0; i < x.n; ++i)
    for (unsigned k = 0; k < x.n; ++k)
      if (x(i, k) != 0)
        for (unsigned j = 0; j < x.n; ++j) r.e[std::size_t{i} * x.n + j] += x(i, k) * y(k, j);
  return r;
}

WeylElement SignedMatrix::permutation() const {
  std::vector<unsigned> img(n, 0);
  for (unsigned j = 0; j < n; ++j)
    for (unsigned i = 0; i < n; ++i)
      if ((*this)(i, j) != 0) img[j] = i + 1;
  return WeylElement::from_one_line(img);
}

bool SignedMatrix::is_scalar() const {
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if ((*this)(i, j) != (i == j ? (*this)(0, 0) : 0)) return false;
  return true;
}

SignedMatrix permutation_matrix(const WeylElement& w) {
  const unsigned n = w.degree();
  SignedMatrix m{n, std::vector<int>(std::size_t{n} * n, 0)};
  for (unsigned j = 1; j <= n; ++j) m.e[std::size_t{w(j) - 1} * n + (j - 1)] = 1;
  return m;
}

SignedMatrix sp_simple_lift(unsigned n, unsigned i) {
  if (i >= n) throw InvalidArgument("sp_simple_lift: index out of range");
  const unsigned N = 2 * n;
  SignedMatrix m{N, std::vector<int>(std::size_t{N} * N, 0)};
  // column j holds the image of e_j
  auto set = [&](unsigned from, unsigned to, int sign) { m.e[std::size_t{to - 1} * N + (from - 1)] = sign; };
  std::vector<bool> moved(N + 1, false);
  auto swap_pair = [&](unsigned a, unsigned b) {
    set(a, b, -1);  // e_a -> -e_b
    set(b, a, +1);  // e_b ->  e_a
    moved[a] = moved[b] = true;
  };
  const unsigned t = i + 1;
  if (t < n) {
    swap_pair(t, t + 1);
    set(N - t, N + 1 - t, +1);
    set(N + 1 - t, N - t, -1);
    moved[N - t] = moved[N + 1 - t] = true;
  } else {
    swap_pair(n, n + 1);
  }
  for (unsigned j = 1; j <= N; ++j)
    if (!moved[j]) set(j, j, 1);
  return m;
}

SignedMatrix weyl_lift(const zip::ZipDatum& d, const WeylElement& w) {
  if (d.cox.family() != weyl::Family::TypeC) return permutation_matrix(w);
  const unsigned n = d.cox.rank();
  SignedMatrix m = permutation_matrix(WeylElement(2 * n));
  for (auto i : d.cox.reduced_word(w)) m = m * sp_simple_lift(n, i);
  return m;
}

TwistData build_lift(const zip::ZipDatum& d, const WeylElement& w) {
  TwistData t;
  t.family = stab::family_of(d.cox);
  t.q = d.q;
  const WeylElement y = zip::compute_y(d);
  if (t.family != GroupFamily::Sp) {
    t.lift = permutation_matrix(y * w);
    return t;
  }
  const unsigned n = d.cox.rank();
  bool shift = n >= 3;
  for (unsigned i = 1; i <= n && shift; ++i) shift = y(i) == n + i;
  SignedMatrix ydot;
  if (shift) {
    // [[0, 1_n], [-1_n, 0]]
    ydot = SignedMatrix{2 * n, std::vector<int>(std::size_t{4} * n * n, 0)};
    for (unsigned i = 0; i < n; ++i) {
      ydot.e[std::size_t{i} * 2 * n + (n + i)] = 1;
      ydot.e[std::size_t{n + i} * 2 * n + i] = -1;
    }
  } else {
    ydot = weyl_lift(d, y);
  }
  t.lift = ydot * weyl_lift(d, w);
  return t;
}

// ---------------------------------------------------------------- Levi

unsigned LeviSpec::matrix_size() const {
  switch (family) {
    case GroupFamily::GL: return rank;
    case GroupFamily::Sp: return 2 * rank;
    case GroupFamily::GU: return rank + 1;
  }
  return rank;
}

LeviSpec levi_spec(const zip::ZipDatum& d, const zip::Stratum& s) {
  LeviSpec l;
  l.family = stab::family_of(d.cox);
  l.rank = d.cox.rank();
  l.q = d.q;
  unsigned start = 1;
  for (unsigned p = 1; p <= l.rank; ++p) {
    if (p < l.rank && s.K.contains(p - 1)) continue;
    std::vector<unsigned> b(p - start + 1);
    std::iota(b.begin(), b.end(), start);
    l.blocks.push_back(std::move(b));
    start = p + 1;
  }
  if (l.family == GroupFamily::Sp && s.K.contains(l.rank - 1)) {
    l.middle = static_cast<unsigned>(l.blocks.back().size());
    l.blocks.pop_back();
  }
  return l;
}

namespace {

// A point of H_w: one matrix per slot (the upper blocks, then the middle
// Sp block if any) and the similitude factor c for GU.
struct Point {
  std::vector<Matrix> slots;
  Code c = 1;
};

class TwistedMap {
 public:
  TwistedMap(const LeviSpec& levi, const TwistData& twist, const MatrixRing& ring)
      : levi_(levi), ring_(ring), n_(levi.rank) {
    const unsigned lift_size = levi.family == GroupFamily::Sp ? 2 * n_ : n_;
    if (twist.lift.n != lift_size) throw InvalidArgument("twist lift has the wrong size");
    L_ = ring.from_signed(twist.lift.e, lift_size);
    Lt_ = ring.transpose(L_);
    W0_ = ring.antidiag(n_);
    sigma_ = twist.lift.permutation();
    upper_ = n_ - levi.middle;
    // slot successors from the lift permutation
    const std::size_t nb = levi.blocks.size();
    succ_.resize(num_slots());
    for (std::size_t b = 0; b < nb; ++b) {
      std::vector<unsigned> img;
      for (auto p : levi.blocks[b]) {
        unsigned x = sigma_(p);
        if (levi.family == GroupFamily::Sp && x > n_) x = 2 * n_ + 1 - x;
        if (levi.family == GroupFamily::GU) x = n_ + 1 - x;
        img.push_back(x);
      }
      std::sort(img.begin(), img.end());
      std::size_t target = nb;
      for (std::size_t c = 0; c < nb; ++c)
        if (levi.blocks[c] == img) target = c;
      if (target == nb) throw Error("lift does not permute the Levi blocks");
      succ_[b] = target;
    }
    if (levi.middle > 0) succ_[nb] = nb;
  }

  std::size_t num_slots() const { return levi_.blocks.size() + (levi_.middle > 0 ? 1 : 0); }
  std::size_t successor(std::size_t slot) const { return succ_[slot]; }
  unsigned slot_size(std::size_t slot) const {
    return slot < levi_.blocks.size() ? static_cast<unsigned>(levi_.blocks[slot].size()) : 2 * levi_.middle;
  }

  Point identity_point(Code c = 1) const {
    Point p;
    for (std::size_t s = 0; s < num_slots(); ++s) p.slots.push_back(ring_.identity(slot_size(s)));
    p.c = c;
    return p;
  }

  Matrix assemble(const Point& pt) const {
    Matrix h = ring_.identity(levi_.matrix_size());
    for (std::size_t b = 0; b < levi_.blocks.size(); ++b) {
      const auto& pos = levi_.blocks[b];
      for (unsigned i = 0; i < pos.size(); ++i)
        for (unsigned j = 0; j < pos.size(); ++j) h(pos[i] - 1, pos[j] - 1) = pt.slots[b](i, j);
    }
    if (levi_.family == GroupFamily::Sp) {
      if (upper_ > 0) {
        Matrix A(upper_);
        for (unsigned i = 0; i < upper_; ++i)
          for (unsigned j = 0; j < upper_; ++j) A(i, j) = h(i, j);
        const auto inv = ring_.inverse(A);
        if (!inv) throw Error("singular Levi block");
        // lower block = E A^{-T} E
        const unsigned off = 2 * n_ - upper_;
        for (unsigned i = 0; i < upper_; ++i)
          for (unsigned j = 0; j < upper_; ++j) h(off + i, off + j) = (*inv)(upper_ - 1 - j, upper_ - 1 - i);
      }
      if (levi_.middle > 0) {
        const Matrix& M = pt.slots.back();
        for (unsigned i = 0; i < M.n; ++i)
          for (unsigned j = 0; j < M.n; ++j) h(upper_ + i, upper_ + j) = M(i, j);
      }
    }
    if (levi_.family == GroupFamily::GU) h(n_, n_) = pt.c;
    return h;
  }

  Point decompose(const Matrix& h) const {
    Point pt;
    for (const auto& pos : levi_.blocks) {
      Matrix b(static_cast<unsigned>(pos.size()));
      for (unsigned i = 0; i < pos.size(); ++i)
        for (unsigned j = 0; j < pos.size(); ++j) b(i, j) = h(pos[i] - 1, pos[j] - 1);
      pt.slots.push_back(std::move(b));
    }
    if (levi_.middle > 0) {
      Matrix M(2 * levi_.middle);
      for (unsigned i = 0; i < M.n; ++i)
        for (unsigned j = 0; j < M.n; ++j) M(i, j) = h(upper_ + i, upper_ + j);
      pt.slots.push_back(std::move(M));
    }
    if (levi_.family == GroupFamily::GU) pt.c = h(n_, n_);
    return pt;
  }

  Matrix apply(const Matrix& h) const {
    if (levi_.family != GroupFamily::GU) return ring_.frob(ring_.mul(L_, ring_.mul(h, Lt_)));
    Matrix A(n_);
    for (unsigned i = 0; i < n_; ++i)
      for (unsigned j = 0; j < n_; ++j) A(i, j) = h(i, j);
    const Code c = h(n_, n_);
    const Matrix X = ring_.frob(ring_.mul(L_, ring_.mul(A, Lt_)));
    const auto inv = ring_.inverse(X);
    if (!inv) throw Error("singular element in twisted map");
    const Code cq = ring_.frob(c);
    const Matrix B = ring_.scale(ring_.mul(W0_, ring_.mul(ring_.transpose(*inv), W0_)), cq);
    Matrix r(n_ + 1);
    for (unsigned i = 0; i < n_; ++i)
      for (unsigned j = 0; j < n_; ++j) r(i, j) = B(i, j);
    r(n_, n_) = cq;
    return r;
  }

  /// Smallest m such that the m-fold twisted map is the plain q^m-Frobenius.
  unsigned enumeration_degree(const SignedMatrix& lift) const {
    if (levi_.family == GroupFamily::GU) {
      // Q = W0 P; the square of the twisted map is int(Q^2) composed with phi^2.
      std::vector<unsigned> rev(n_);
      for (unsigned i = 0; i < n_; ++i) rev[i] = n_ - i;
      const WeylElement Q = WeylElement::from_one_line(rev) * sigma_;
      unsigned ord = 1;
      for (WeylElement x = Q; !x.is_identity(); x = x * Q) ++ord;
      return std::lcm(2u, ord);
    }
    SignedMatrix x = lift;
    for (unsigned m = 1; m <= 4096; ++m, x = x * lift)
      if (x.is_scalar()) return m;
    throw Error("lift has no finite projective order");
  }

 private:
  const LeviSpec& levi_;
  const MatrixRing& ring_;
  unsigned n_;
  unsigned upper_ = 0;
  Matrix L_, Lt_, W0_;
  WeylElement sigma_;
  std::vector<std::size_t> succ_;
};

std::vector<Matrix> slot_candidates(const MatrixRing& ring, unsigned size, bool symplectic) {
  std::vector<Matrix> out;
  const Matrix J = symplectic ? ring.from_signed(symplectic_form(size / 2), size) : Matrix();
  for_each_matrix(size, ring.field().size(), [&](const Matrix& m) {
    if (symplectic ? is_symplectic(ring, m, J) : ring.det(m) != 0) out.push_back(m);
  });
  return out;
}

std::size_t index_of(const std::vector<Matrix>& sorted, const Matrix& m) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), m);
  if (it == sorted.end() || !(*it == m)) return sorted.size();
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

FixedPointResult twisted_fixed_points(const LeviSpec& levi, const TwistData& twist, std::uint64_t budget) {
  FixedPointResult res;
  const auto [p, e] = ff::prime_power(levi.q);
  if (p == 0) throw InvalidArgument("q is not a prime power");

  // The enumeration degree only depends on the lift; use a throwaway ring.
  unsigned m = 0;
  {
    const MatrixRing base(ff::make_field(p, e), levi.q);
    m = TwistedMap(levi, twist, base).enumeration_degree(twist.lift);
  }
  res.field_degree = m;
  const Integer field_size = ipow(p, std::uint64_t{e} * m);
  if (std::uint64_t{e} * m > 16 || field_size > ff::kMaxEnumerationSize) {
    res.note = "oracle-skipped: F_{q^" + std::to_string(m) + "} is too large to enumerate";
    return res;
  }
  const MatrixRing ring(ff::make_field(p, e * m), levi.q);
  const TwistedMap F(levi, twist, ring);
  const Code Q = ring.field().size();

  // Cycles of slots.
  std::vector<std::vector<std::size_t>> cycles;
  {
    std::vector<bool> seen(F.num_slots(), false);
    for (std::size_t s = 0; s < F.num_slots(); ++s) {
      if (seen[s]) continue;
      std::vector<std::size_t> cyc;
      for (std::size_t t = s; !seen[t]; t = F.successor(t)) {
        seen[t] = true;
        cyc.push_back(t);
      }
      cycles.push_back(std::move(cyc));
    }
  }

  // Budget estimate (raw candidate evaluations).
  const bool gu = levi.family == GroupFamily::GU;
  Integer estimate = gu ? Integer(Q) : Integer(0);
  const Integer c_rounds = gu ? Integer(levi.q - 1) : Integer(1);
  std::vector<unsigned> sizes;
  for (const auto& cyc : cycles) {
    const unsigned k = F.slot_size(cyc.front());
    const Integer raw = ipow(Q, std::uint64_t{k} * k);
    estimate += raw * c_rounds;
    if (std::find(sizes.begin(), sizes.end(), k) == sizes.end()) {
      sizes.push_back(k);
      estimate += raw;
    }
  }
  if (estimate > budget) {
    res.note = "oracle-skipped: about " + estimate.str() + " candidates exceed the budget of " + std::to_string(budget);
    return res;
  }

  // Candidate lists per slot size (invertible, or symplectic for the middle).
  std::vector<std::vector<Matrix>> cand(F.num_slots());
  std::map<std::pair<unsigned, bool>, std::vector<Matrix>> cache;
  for (std::size_t s = 0; s < F.num_slots(); ++s) {
    const bool mid = levi.middle > 0 && s == levi.blocks.size();
    auto key = std::make_pair(F.slot_size(s), mid);
    auto it = cache.find(key);
    if (it == cache.end()) {
      res.candidates += static_cast<std::uint64_t>(ipow(Q, std::uint64_t{key.first} * key.first));
      it = cache.emplace(key, slot_candidates(ring, key.first, mid)).first;
    }
    cand[s] = it->second;
  }

  // Check that the m-fold twisted map is the identity on H(F_{q^m}).
  {
    std::mt19937_64 rng(0x5eed);
    for (int trial = 0; trial < 4; ++trial) {
      Point pt = F.identity_point();
      for (std::size_t s = 0; s < F.num_slots(); ++s) pt.slots[s] = cand[s][rng() % cand[s].size()];
      if (gu) pt.c = 1 + static_cast<Code>(rng() % (Q - 1));
      const Matrix h = F.assemble(pt);
      Matrix x = h;
      for (unsigned i = 0; i < m; ++i) x = F.apply(x);
      if (!(x == h)) throw Error("enumeration degree check failed: F^m differs from the q^m-Frobenius");
    }
  }

  // Scalars c (GU only; c must be fixed by the twisted map).
  std::vector<Code> cs{1};
  if (gu) {
    cs.clear();
    res.candidates += Q - 1;
    for (Code c = 1; c < Q; ++c)
      if (ring.frob(c) == c) cs.push_back(c);
  }

  // For each c and each cycle: representatives X with F^d(X) = X, kept
  // together with their orbit (the blocks along the cycle).
  using Chain = std::vector<Matrix>;
  std::vector<std::vector<std::vector<Chain>>> passing(cs.size());
  Integer total = 0;
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    Integer prod = 1;
    for (const auto& cyc : cycles) {
      std::vector<Chain> good;
      for (const auto& X : cand[cyc.front()]) {
        ++res.candidates;
        Chain chain{X};
        for (std::size_t j = 0; j < cyc.size(); ++j) {
          Point pt = F.identity_point(cs[ci]);
          pt.slots[cyc[j]] = chain.back();
          const Point img = F.decompose(F.apply(F.assemble(pt)));
          chain.push_back(img.slots[cyc[(j + 1) % cyc.size()]]);
        }
        if (chain.back() == X) {
          chain.pop_back();
          good.push_back(std::move(chain));
        }
      }
      prod *= good.size();
      passing[ci].push_back(std::move(good));
    }
    total += prod;
  }
  res.order = total;
  res.status = FixedPointResult::Status::Computed;

  if (total > kMaterializeLimit) {
    res.note = "order counted; set too large to materialize";
    return res;
  }

  // Materialize: cartesian product over cycles, full check h = F(h).
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& lists = passing[ci];
    if (std::any_of(lists.begin(), lists.end(), [](const auto& l) { return l.empty(); })) continue;
    std::vector<std::size_t> idx(cycles.size(), 0);
    for (;;) {
      Point pt = F.identity_point(cs[ci]);
      for (std::size_t k = 0; k < cycles.size(); ++k) {
        const Chain& ch = lists[k][idx[k]];
        for (std::size_t j = 0; j < cycles[k].size(); ++j) pt.slots[cycles[k][j]] = ch[j];
      }
      Matrix h = F.assemble(pt);
      if (!(F.apply(h) == h)) throw Error("propagated element is not a fixed point");
      res.elements.push_back(std::move(h));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == lists[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  std::sort(res.elements.begin(), res.elements.end());
  res.materialized = true;
  const GroupCheck gc = verify_group(ring, res.elements);
  res.is_group = gc.ok;
  if (!gc.ok) {
    res.note = "fixed points are not a group: " + gc.failure;
    return res;
  }
  if (res.elements.size() <= kClassCountLimit) res.class_count = conjugacy_class_count(ring, res.elements);
  return res;
}

FixedPointResult stratum_fixed_points(const zip::ZipDatum& d, const zip::Stratum& s, std::uint64_t budget) {
  return twisted_fixed_points(levi_spec(d, s), build_lift(d, s.w), budget);
}

// ---------------------------------------------------------------- group checks

namespace {

// Closure of {1} under right multiplication by gens, restricted to S.
bool close_under(const MatrixRing& ring, const std::vector<Matrix>& S, const std::vector<Matrix>& gens,
                 std::vector<bool>& reached, std::size_t& count, std::string& failure) {
  reached.assign(S.size(), false);
  const std::size_t id = index_of(S, ring.identity(S.front().n));
  if (id == S.size()) {
    failure = "identity missing";
    return false;
  }
  std::deque<std::size_t> queue{id};
  reached[id] = true;
  count = 1;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      const std::size_t y = index_of(S, ring.mul(S[x], g));
      if (y == S.size()) {
        failure = "product leaves the set";
        return false;
      }
      if (!reached[y]) {
        reached[y] = true;
        ++count;
        queue.push_back(y);
      }
    }
  }
  return true;
}

}  // namespace

GroupCheck verify_group(const MatrixRing& ring, const std::vector<Matrix>& S) {
  GroupCheck gc;
  if (S.empty()) {
    gc.failure = "empty set";
    return gc;
  }
  if (!std::is_sorted(S.begin(), S.end()) || std::adjacent_find(S.begin(), S.end()) != S.end()) {
    gc.failure = "elements not sorted and distinct";
    return gc;
  }
  std::vector<bool> reached;
  std::size_t count = 0;
  if (!close_under(ring, S, gc.generators, reached, count, gc.failure)) return gc;
  while (count < S.size()) {
    const auto it = std::find(reached.begin(), reached.end(), false);
    const Matrix& g = S[static_cast<std::size_t>(it - reached.begin())];
    // A finite set of invertible matrices closed under products is a group.
    if (ring.det(g) == 0) {
      gc.failure = "singular element";
      return gc;
    }
    gc.generators.push_back(g);
    if (!close_under(ring, S, gc.generators, reached, count, gc.failure)) return gc;
  }
  gc.ok = true;
  return gc;
}

std::uint64_t conjugacy_class_count(const MatrixRing& ring, const std::vector<Matrix>& S) {
  if (S.size() > kClassCountLimit) throw InvalidArgument("conjugacy_class_count: set too large");
  const GroupCheck gc = verify_group(ring, S);
  if (!gc.ok) throw Error("conjugacy_class_count: not a group (" + gc.failure + ")");
  std::vector<std::pair<Matrix, Matrix>> conj;
  for (const auto& g : gc.generators) conj.emplace_back(g, *ring.inverse(g));
  std::vector<bool> seen(S.size(), false);
  std::uint64_t classes = 0;
  for (std::size_t start = 0; start < S.size(); ++start) {
    if (seen[start]) continue;
    ++classes;
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (const auto& [g, gi] : conj) {
        const std::size_t y = index_of(S, ring.mul(g, ring.mul(S[x], gi)));
        if (y == S.size()) throw Error("conjugacy_class_count: conjugate leaves the set");
        if (!seen[y]) {
          seen[y] = true;
          queue.push_back(y);
        }
      }
    }
  }
  return classes;
}

}  // namespace zipsheaf::mg

#include "zipsheaf/stabilizer.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "zipsheaf/error.hpp"

namespace zipsheaf::stab {

using weyl::Family;
using weyl::ReflectionSet;
using weyl::WeylElement;

std::string family_name(GroupFamily f) {
  switch (f) {
    case GroupFamily::GL: return "GL";
    case GroupFamily::Sp: return "Sp";
    case GroupFamily::GU: return "GU";
  }
  return "?";
}

GroupFamily family_of(const weyl::CoxeterDescriptor& cox) {
  switch (cox.family()) {
    case Family::TypeA: return GroupFamily::GL;
    case Family::TypeC: return GroupFamily::Sp;
    case Family::TypeATwisted: return GroupFamily::GU;
  }
  throw Unsupported("unknown Weyl group family");
}

// ---------------------------------------------------------------- atoms

namespace {

// q^{d k(k-1)/2} prod_{i=1}^k (q^{di} - s^i), s = +1 for GL, -1 for U.
QPolynomial classical_order(unsigned k, unsigned d, int s) {
  QPolynomial p = QPolynomial::monomial(1, d * k * (k - 1) / 2);
  int sgn = 1;
  for (unsigned i = 1; i <= k; ++i) {
    sgn *= s;
    p = p * QPolynomial::q_power_plus(d * i, -sgn);
  }
  return p;
}

QPolynomial gu_order(unsigned k) { return QPolynomial::q_power_plus(1, -1) * classical_order(k, 1, -1); }

QPolynomial sp_order(unsigned k) {
  QPolynomial p = QPolynomial::monomial(1, k * k);
  for (unsigned i = 1; i <= k; ++i) p = p * QPolynomial::q_power_plus(2 * i, -1);
  return p;
}

std::string field_name(unsigned d) { return d == 1 ? "F_q" : "F_{q^" + std::to_string(d) + "}"; }

}  // namespace

Atom Atom::canonical() const {
  if (kind == AtomKind::GLBlock && k == 1) return torus(d);
  if (kind == AtomKind::UBlock && k == 1) return norm_kernel(d);
  if (kind == AtomKind::GUBlock && k == 0) return torus(1);
  return *this;
}

bool Atom::is_trivial() const {
  return (kind == AtomKind::GLBlock || kind == AtomKind::UBlock || kind == AtomKind::SpBlock) && k == 0;
}

bool Atom::is_abelian() const {
  switch (kind) {
    case AtomKind::TorusRes:
    case AtomKind::NormKernel: return true;
    case AtomKind::GLBlock:
    case AtomKind::UBlock:
    case AtomKind::GUBlock: return k <= 1;
    case AtomKind::SpBlock: return k == 0;
    case AtomKind::FullGroup: return family == GroupFamily::Sp ? k == 0 : k <= 1;
  }
  return false;
}

QPolynomial Atom::order_polynomial() const {
  switch (kind) {
    case AtomKind::TorusRes: return QPolynomial::q_power_plus(d, -1);
    case AtomKind::NormKernel: return QPolynomial::q_power_plus(d, +1);
    case AtomKind::GLBlock: return classical_order(k, d, +1);
    case AtomKind::UBlock: return classical_order(k, d, -1);
    case AtomKind::GUBlock: return gu_order(k);
    case AtomKind::SpBlock: return sp_order(k);
    case AtomKind::FullGroup:
      switch (family) {
        case GroupFamily::GL: return classical_order(k, 1, +1);
        case GroupFamily::Sp: return sp_order(k);
        case GroupFamily::GU: return gu_order(k);
      }
  }
  throw Unsupported("order polynomial of unknown atom");
}

std::string Atom::kind_name() const {
  switch (kind) {
    case AtomKind::TorusRes: return "TorusRes";
    case AtomKind::NormKernel: return "NormKernel";
    case AtomKind::GLBlock: return "GLBlock";
    case AtomKind::UBlock: return "UBlock";
    case AtomKind::GUBlock: return "GUBlock";
    case AtomKind::SpBlock: return "SpBlock";
    case AtomKind::FullGroup: return "FullGroup";
  }
  return "?";
}

std::string Atom::to_string() const {
  const std::string ks = std::to_string(k);
  switch (kind) {
    case AtomKind::TorusRes: return field_name(d) + "^x";
    case AtomKind::NormKernel: return "ker(N: " + field_name(2 * d) + "^x -> " + field_name(d) + "^x)";
    case AtomKind::GLBlock: return "GL_" + ks + "(" + field_name(d) + ")";
    case AtomKind::UBlock: return "U_" + ks + "(" + field_name(d) + ")";
    case AtomKind::GUBlock: return "GU_" + ks + "(F_q)";
    case AtomKind::SpBlock: return "Sp_" + std::to_string(2 * k) + "(F_q)";
    case AtomKind::FullGroup:
      if (family == GroupFamily::Sp) return "G(F_q) = Sp_" + std::to_string(2 * k) + "(F_q)";
      return "G(F_q) = " + family_name(family) + "_" + ks + "(F_q)";
  }
  return "?";
}

bool operator<(const Atom& a, const Atom& b) {
  const int fa = a.kind == AtomKind::FullGroup ? static_cast<int>(a.family) : 0;
  const int fb = b.kind == AtomKind::FullGroup ? static_cast<int>(b.family) : 0;
  return std::tie(a.kind, a.k, a.d, fa) < std::tie(b.kind, b.k, b.d, fb);
}

// ---------------------------------------------------------------- descriptors

namespace {

std::vector<Atom> canonical_list(const std::vector<Atom>& in) {
  std::vector<Atom> out;
  for (const auto& a : in) {
    Atom c = a.canonical();
    if (!c.is_trivial()) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string product_string(const std::vector<Atom>& atoms) {
  if (atoms.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < atoms.size();) {
    std::size_t j = i;
    while (j < atoms.size() && atoms[j] == atoms[i]) ++j;
    std::string s = atoms[i].to_string();
    const std::size_t mult = j - i;
    if (mult > 1 && (s.back() == 'x' || s.find(' ') != std::string::npos)) s = "(" + s + ")";
    if (i > 0) os << " x ";
    os << s;
    if (mult > 1) os << "^" << mult;
    i = j;
  }
  return os.str();
}

}  // namespace

GroupDescriptor GroupDescriptor::canonical() const {
  GroupDescriptor g;
  g.factors = canonical_list(factors);
  if (extension) g.extension = Extension{canonical_list(extension->kernel), extension->quotient.canonical()};
  return g;
}

bool GroupDescriptor::is_abelian() const {
  for (const auto& a : factors)
    if (!a.is_abelian()) return false;
  if (extension) {
    for (const auto& a : extension->kernel)
      if (!a.is_abelian()) return false;
    if (!extension->quotient.is_abelian()) return false;
  }
  return true;
}

QPolynomial GroupDescriptor::order_polynomial() const {
  QPolynomial p(1);
  for (const auto& a : factors) p = p * a.order_polynomial();
  if (extension) {
    for (const auto& a : extension->kernel) p = p * a.order_polynomial();
    p = p * extension->quotient.order_polynomial();
  }
  return p;
}

std::string GroupDescriptor::to_string() const {
  const GroupDescriptor g = canonical();
  std::string out;
  if (!g.factors.empty() || !g.extension) out = product_string(g.factors);
  if (g.extension) {
    std::string kern = product_string(g.extension->kernel);
    if (g.extension->kernel.size() > 1) kern = "(" + kern + ")";
    const std::string ext = kern + " . " + g.extension->quotient.to_string();
    out = out.empty() ? ext : out + " x (" + ext + ")";
  }
  return out;
}

bool operator==(const GroupDescriptor& a, const GroupDescriptor& b) {
  const GroupDescriptor ca = a.canonical(), cb = b.canonical();
  if (ca.factors != cb.factors) return false;
  if (ca.extension.has_value() != cb.extension.has_value()) return false;
  if (!ca.extension) return true;
  return ca.extension->kernel == cb.extension->kernel && ca.extension->quotient == cb.extension->quotient;
}

// ---------------------------------------------------------------- actions

std::vector<BlockCycle> block_cycles(const BlockAction& act) {
  const std::size_t n = act.perm.size();
  if (act.sizes.size() != n || act.sign.size() != n) throw Error("block action: inconsistent lengths");
  std::vector<bool> hit(n, false);
  for (auto p : act.perm) {
    if (p >= n || hit[p]) throw Error("block action: perm is not a bijection");
    hit[p] = true;
  }
  std::vector<BlockCycle> out;
  std::vector<bool> seen(n, false);
  for (unsigned start = 0; start < n; ++start) {
    if (seen[start]) continue;
    BlockCycle c;
    c.size = act.sizes[start];
    for (unsigned b = start; !seen[b]; b = act.perm[b]) {
      seen[b] = true;
      if (act.sizes[b] != c.size) throw Error("block action maps blocks of different sizes");
      if (act.sign[b] != 1 && act.sign[b] != -1) throw Error("block action: sign must be +1 or -1");
      c.blocks.push_back(b);
      c.sign *= act.sign[b];
    }
    out.push_back(std::move(c));
  }
  return out;
}

GroupDescriptor block_fixed_points(const BlockAction& act) {
  GroupDescriptor g;
  for (const auto& c : block_cycles(act))
    g.factors.push_back(c.sign > 0 ? Atom::gl(c.size, c.length()) : Atom::unitary(c.size, c.length()));
  return g.canonical();
}

GroupDescriptor torus_fixed_points(const SignedMonomialAction& act) {
  BlockAction b{std::vector<unsigned>(act.perm.size(), 1u), act.perm, act.sign};
  return block_fixed_points(b);
}

// ---------------------------------------------------------------- Levi blocks

namespace {

unsigned block_of(const std::vector<int>& owner, unsigned pos) {
  if (owner[pos] < 0) throw Unsupported("Levi block maps outside the block structure");
  return static_cast<unsigned>(owner[pos]);
}

// Block index whose positions are exactly `img` (as a set), or throws.
unsigned matching_block(const std::vector<std::vector<unsigned>>& blocks, const std::vector<int>& owner,
                        std::vector<unsigned> img) {
  std::sort(img.begin(), img.end());
  const unsigned b = block_of(owner, img.front());
  if (blocks[b] != img) throw Unsupported("Frobenius twist does not permute the Levi blocks");
  return b;
}

}  // namespace

LeviBlocks levi_blocks(const zip::ZipDatum& d, const zip::Stratum& s) {
  const GroupFamily fam = family_of(d.cox);
  const unsigned n = d.cox.rank();
  const WeylElement y = zip::compute_y(d);
  const WeylElement yw = y * s.w;

  LeviBlocks lb;
  unsigned start = 1;
  for (unsigned p = 1; p <= n; ++p) {
    if (p < n && s.K.contains(p - 1)) continue;
    std::vector<unsigned> blk;
    for (unsigned i = start; i <= p; ++i) blk.push_back(i);
    lb.blocks.push_back(std::move(blk));
    start = p + 1;
  }
  if (fam == GroupFamily::Sp && s.K.contains(n - 1)) {
    lb.middle_sp_rank = static_cast<unsigned>(lb.blocks.back().size());
    lb.blocks.pop_back();
    // The middle block {n-m+1, ..., n+m} must be stable.
    const unsigned m = lb.middle_sp_rank;
    for (unsigned i = n - m + 1; i <= n + m; ++i)
      if (yw(i) < n - m + 1 || yw(i) > n + m) throw Unsupported("twist does not preserve the symplectic Levi block");
  }
  lb.has_similitude = fam == GroupFamily::GU;

  const unsigned deg = d.cox.degree();
  std::vector<int> owner(deg + 1, -1);
  for (unsigned b = 0; b < lb.blocks.size(); ++b)
    for (auto p : lb.blocks[b]) owner[p] = static_cast<int>(b);

  WeylElement pos_map = yw;
  if (fam == GroupFamily::GU) pos_map = d.cox.elements().back() * yw;  // w_{0,I} w

  const std::size_t nb = lb.blocks.size();
  lb.action.sizes.resize(nb);
  lb.action.perm.resize(nb);
  lb.action.sign.resize(nb);
  for (unsigned b = 0; b < nb; ++b) {
    const auto& blk = lb.blocks[b];
    std::vector<unsigned> img;
    for (auto p : blk) img.push_back(pos_map(p));
    int sign = fam == GroupFamily::GU ? -1 : 1;
    if (fam == GroupFamily::Sp) {
      const bool upper = std::all_of(img.begin(), img.end(), [n](unsigned x) { return x <= n; });
      const bool lower = std::all_of(img.begin(), img.end(), [n](unsigned x) { return x > n; });
      if (!upper && !lower) throw Unsupported("Levi block straddles the Lagrangian halves");
      if (lower) {
        for (auto& x : img) x = 2 * n + 1 - x;
        sign = -1;
      }
    }
    lb.action.sizes[b] = static_cast<unsigned>(blk.size());
    lb.action.perm[b] = matching_block(lb.blocks, owner, img);
    lb.action.sign[b] = sign;
  }
  return lb;
}

GroupDescriptor stabilizer_descriptor(const zip::ZipDatum& d, const zip::Stratum& s) {
  const GroupFamily fam = family_of(d.cox);
  const WeylElement yw = zip::compute_y(d) * s.w;
  if (s.K == ReflectionSet::all(d.cox.num_simple()) && yw.is_identity()) {
    GroupDescriptor g;
    g.factors.push_back(Atom::full(fam, d.cox.rank()));
    return g;
  }
  const LeviBlocks lb = levi_blocks(d, s);
  if (fam != GroupFamily::GU) {
    GroupDescriptor g = block_fixed_points(lb.action);
    if (lb.middle_sp_rank > 0) g.factors.push_back(Atom::sp(lb.middle_sp_rank));
    return g.canonical();
  }
  // GU: the similitude factor rides on the largest self-dual block.
  const auto cycles = block_cycles(lb.action);
  int quotient = -1;
  for (std::size_t i = 0; i < cycles.size(); ++i)
    if (cycles[i].length() == 1 && (quotient < 0 || cycles[i].size > cycles[quotient].size))
      quotient = static_cast<int>(i);
  Extension ext{{}, Atom::gu(quotient < 0 ? 0 : cycles[quotient].size)};
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (static_cast<int>(i) == quotient) continue;
    const auto& c = cycles[i];
    ext.kernel.push_back(c.sign > 0 ? Atom::gl(c.size, c.length()) : Atom::unitary(c.size, c.length()));
  }
  GroupDescriptor g;
  g.extension = std::move(ext);
  return g.canonical();
}

// ---------------------------------------------------------------- closed forms

unsigned gu_f(unsigned n, unsigned k) {
  if (n < 2 || k < 1 || k > n) throw InvalidArgument("gu_f: need n >= 2 and 1 <= k <= n");
  return 2 * k <= n + 1 ? n + 1 - 2 * k : 2 * k - n - 2;
}

int gu_epsilon(unsigned n, unsigned k) {
  gu_f(n, k);
  return 2 * k <= n + 1 ? -1 : +1;
}

std::vector<unsigned> gu_m_set(unsigned n, unsigned k) {
  gu_f(n, k);
  std::vector<unsigned> m;
  const unsigned lo = 2 * k <= n + 1 ? k + 1 : n + 2 - k;
  const unsigned hi = 2 * k <= n + 1 ? n + 1 - k : k - 1;
  for (unsigned i = lo; i <= hi; ++i) m.push_back(i);
  return m;
}

weyl::ReflectionSet gu_signature_kw(unsigned n, unsigned k) {
  const auto m = gu_m_set(n, k);
  ReflectionSet out;
  // I = {(23), ..., (n-1 n)}; (i i+1) has index i-1.
  for (unsigned i = 2; i + 1 <= n; ++i)
    if (std::find(m.begin(), m.end(), i) != m.end() && std::find(m.begin(), m.end(), i + 1) != m.end())
      out.insert(i - 1);
  return out;
}

GroupDescriptor gu_signature_descriptor(unsigned n, unsigned k) {
  const unsigned f = gu_f(n, k);
  Extension ext{{gu_epsilon(n, k) > 0 ? Atom::torus(n - f) : Atom::norm_kernel(n - f)}, Atom::gu(f)};
  GroupDescriptor g;
  g.extension = std::move(ext);
  return g.canonical();
}

GroupDescriptor gl_one_n_descriptor(unsigned n, unsigned k) {
  if (k < 3 || k > n) throw InvalidArgument("gl_one_n_descriptor: need 3 <= k <= n");
  GroupDescriptor g;
  g.factors = {Atom::torus(1), Atom::torus(1), Atom::gl(k - 3, 1), Atom::torus(n - k + 1)};
  return g.canonical();
}

Integer order_at(const GroupDescriptor& g, std::uint64_t q) {
  if (q < 2) throw InvalidArgument("order_at: q must be at least 2");
  return g.order_polynomial()(Integer(q));
}

std::optional<Integer> irrep_count(const GroupDescriptor& g, std::uint64_t q) {
  if (g.is_abelian()) return order_at(g, q);
  return std::nullopt;
}

}  // namespace zipsheaf::stab

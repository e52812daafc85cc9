#include "zipsheaf/weyl.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "zipsheaf/error.hpp"

namespace zipsheaf::weyl {

WeylElement::WeylElement(unsigned degree) : img_(degree) {
  if (degree > 16) throw InvalidArgument("permutation degree above 16");
  for (unsigned i = 0; i < degree; ++i) img_[i] = static_cast<std::uint8_t>(i);
}

WeylElement WeylElement::from_one_line(const std::vector<unsigned>& images) {
  WeylElement w(static_cast<unsigned>(images.size()));
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const unsigned v = images[i];
    if (v < 1 || v > images.size() || seen[v - 1]) throw InvalidArgument("one-line form is not a permutation");
    seen[v - 1] = true;
    w.img_[i] = static_cast<std::uint8_t>(v - 1);
  }
  return w;
}

WeylElement WeylElement::from_cycles(unsigned degree, const std::vector<std::vector<unsigned>>& cycles) {
  WeylElement result(degree);
  for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
    WeylElement c(degree);
    const auto& pts = *it;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const unsigned a = pts[k], b = pts[(k + 1) % pts.size()];
      if (a < 1 || a > degree) throw InvalidArgument("cycle entry out of range");
      c.img_[a - 1] = static_cast<std::uint8_t>(b - 1);
    }
    // Reject cycles with repeated points.
    std::vector<unsigned> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("cycle with repeated point");
    result = c * result;
  }
  return result;
}

std::vector<unsigned> WeylElement::one_line() const {
  std::vector<unsigned> out(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) out[i] = img_[i] + 1u;
  return out;
}

WeylElement WeylElement::inverse() const {
  WeylElement r(degree());
  for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<std::uint8_t>(i);
  return r;
}

bool WeylElement::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

std::uint64_t WeylElement::code() const {
  std::uint64_t c = 0;
  for (auto v : img_) c = (c << 4) | v;
  return c;
}

WeylElement operator*(const WeylElement& a, const WeylElement& b) {
  if (a.degree() != b.degree()) throw InvalidArgument("product of permutations of different degree");
  WeylElement r(a.degree());
  for (std::size_t i = 0; i < a.img_.size(); ++i) r.img_[i] = a.img_[b.img_[i]];
  return r;
}

std::vector<Cycle> cycle_decomposition(const WeylElement& w) {
  std::vector<Cycle> out;
  std::vector<bool> seen(w.degree() + 1, false);
  for (unsigned i = 1; i <= w.degree(); ++i) {
    if (seen[i]) continue;
    Cycle c;
    for (unsigned j = i; !seen[j]; j = w(j)) {
      seen[j] = true;
      c.points.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string WeylElement::to_string() const {
  std::ostringstream os;
  bool any = false;
  const bool wide = degree() >= 10;
  for (const auto& c : cycle_decomposition(*this)) {
    if (c.length() == 1) continue;
    any = true;
    os << "(";
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      if (k && wide) os << " ";
      os << c.points[k];
    }
    os << ")";
  }
  return any ? os.str() : "id";
}

unsigned inversions(const WeylElement& w) {
  unsigned n = 0;
  for (unsigned i = 1; i <= w.degree(); ++i)
    for (unsigned j = i + 1; j <= w.degree(); ++j)
      if (w(i) > w(j)) ++n;
  return n;
}

bool symmetric_bruhat_leq(const WeylElement& u, const WeylElement& v) {
  const unsigned n = u.degree();
  if (v.degree() != n) return false;
  // u <= v iff for all i, k: #{j <= i : u(j) >= k} <= #{j <= i : v(j) >= k}.
  std::vector<int> cu(n + 2, 0), cv(n + 2, 0);
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned k = 1; k <= u(i); ++k) ++cu[k];
    for (unsigned k = 1; k <= v(i); ++k) ++cv[k];
    for (unsigned k = 1; k <= n; ++k)
      if (cu[k] > cv[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

ReflectionSet ReflectionSet::of(const std::vector<unsigned>& indices) {
  ReflectionSet s;
  for (auto i : indices) s.insert(i);
  return s;
}

unsigned ReflectionSet::size() const { return static_cast<unsigned>(std::popcount(mask_)); }

std::vector<unsigned> ReflectionSet::indices() const {
  std::vector<unsigned> out;
  for (unsigned i = 0; i < 32; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

namespace detail {

struct CoxeterData {
  Family family;
  unsigned rank;
  unsigned degree;
  std::vector<WeylElement> simple;
  std::vector<WeylElement> elements;  // sorted by (length, one-line)
  std::unordered_map<std::uint64_t, std::uint32_t> index;  // code -> position in bfs order
  std::vector<WeylElement> bfs_order;
  std::vector<std::uint8_t> bfs_len;
  std::vector<std::int32_t> parent;     // position of w * s in bfs order
  std::vector<std::uint8_t> parent_gen;  // s
  WeylElement w0;
};

}  // namespace detail

CoxeterDescriptor CoxeterDescriptor::type_a(unsigned n) { return build(Family::TypeA, n); }
CoxeterDescriptor CoxeterDescriptor::type_c(unsigned n) { return build(Family::TypeC, n); }
CoxeterDescriptor CoxeterDescriptor::type_a_twisted(unsigned n) { return build(Family::TypeATwisted, n); }

CoxeterDescriptor CoxeterDescriptor::build(Family fam, unsigned n) {
  if (n < 1) throw InvalidArgument("rank must be positive");
  if (fam == Family::TypeC && n > kMaxRankC) throw InvalidArgument("type C rank above cap 6");
  if (fam != Family::TypeC && n > kMaxRankA) throw InvalidArgument("type A rank above cap 8");

  auto d = std::make_shared<detail::CoxeterData>();
  d->family = fam;
  d->rank = n;
  d->degree = fam == Family::TypeC ? 2 * n : n;
  const unsigned N = d->degree;
  if (fam == Family::TypeC) {
    for (unsigned i = 1; i < n; ++i)
      d->simple.push_back(WeylElement::from_cycles(N, {{i, i + 1}, {2 * n - i, 2 * n - i + 1}}));
    d->simple.push_back(WeylElement::from_cycles(N, {{n, n + 1}}));
  } else {
    for (unsigned i = 1; i < n; ++i) d->simple.push_back(WeylElement::from_cycles(N, {{i, i + 1}}));
  }

  // Breadth-first search from the identity; right multiplication by s.
  const WeylElement e(N);
  d->bfs_order.push_back(e);
  d->bfs_len.push_back(0);
  d->parent.push_back(-1);
  d->parent_gen.push_back(0);
  d->index.emplace(e.code(), 0);
  for (std::size_t head = 0; head < d->bfs_order.size(); ++head) {
    const WeylElement cur = d->bfs_order[head];
    for (unsigned s = 0; s < d->simple.size(); ++s) {
      WeylElement nxt = cur * d->simple[s];
      if (d->index.count(nxt.code())) continue;
      d->index.emplace(nxt.code(), static_cast<std::uint32_t>(d->bfs_order.size()));
      d->bfs_order.push_back(nxt);
      d->bfs_len.push_back(static_cast<std::uint8_t>(d->bfs_len[head] + 1));
      d->parent.push_back(static_cast<std::int32_t>(head));
      d->parent_gen.push_back(static_cast<std::uint8_t>(s));
    }
  }
  std::vector<std::uint32_t> perm(d->bfs_order.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (d->bfs_len[a] != d->bfs_len[b]) return d->bfs_len[a] < d->bfs_len[b];
    return d->bfs_order[a] < d->bfs_order[b];
  });
  for (auto i : perm) d->elements.push_back(d->bfs_order[i]);
  d->w0 = d->elements.back();
  return CoxeterDescriptor(std::move(d));
}

Family CoxeterDescriptor::family() const { return data_->family; }
FrobeniusKind CoxeterDescriptor::frobenius_kind() const {
  return data_->family == Family::TypeATwisted ? FrobeniusKind::ConjugateByW0 : FrobeniusKind::Identity;
}
unsigned CoxeterDescriptor::rank() const { return data_->rank; }
unsigned CoxeterDescriptor::degree() const { return data_->degree; }
unsigned CoxeterDescriptor::num_simple() const { return static_cast<unsigned>(data_->simple.size()); }
const std::vector<WeylElement>& CoxeterDescriptor::simple_reflections() const { return data_->simple; }
const std::vector<WeylElement>& CoxeterDescriptor::elements() const { return data_->elements; }

int CoxeterDescriptor::simple_index(const WeylElement& s) const {
  for (unsigned i = 0; i < data_->simple.size(); ++i)
    if (data_->simple[i] == s) return static_cast<int>(i);
  return -1;
}

std::string CoxeterDescriptor::simple_name(unsigned i) const {
  if (data_->family == Family::TypeC) return "s" + std::to_string(i + 1);
  return "(" + std::to_string(i + 1) + (data_->degree >= 10 ? " " : "") + std::to_string(i + 2) + ")";
}

bool CoxeterDescriptor::contains(const WeylElement& w) const {
  return w.degree() == data_->degree && data_->index.count(w.code()) > 0;
}

unsigned CoxeterDescriptor::bfs_length(const WeylElement& w) const {
  auto it = data_->index.find(w.code());
  if (w.degree() != data_->degree || it == data_->index.end())
    throw InvalidArgument("element " + w.to_string() + " is not in the Weyl group");
  return data_->bfs_len[it->second];
}

std::vector<unsigned> CoxeterDescriptor::reduced_word(const WeylElement& w) const {
  auto it = data_->index.find(w.code());
  if (w.degree() != data_->degree || it == data_->index.end())
    throw InvalidArgument("element " + w.to_string() + " is not in the Weyl group");
  std::vector<unsigned> word;
  for (std::int32_t pos = static_cast<std::int32_t>(it->second); data_->parent[pos] >= 0; pos = data_->parent[pos])
    word.push_back(data_->parent_gen[pos]);
  std::reverse(word.begin(), word.end());
  return word;
}

unsigned length(const CoxeterDescriptor& cox, const WeylElement& w) {
  if (!cox.contains(w)) throw InvalidArgument("element " + w.to_string() + " is not in the Weyl group");
  if (cox.family() != Family::TypeC) return inversions(w);
  return cox.bfs_length(w);
}

std::vector<WeylElement> parabolic_subgroup(const CoxeterDescriptor& cox, ReflectionSet K) {
  const WeylElement e(cox.degree());
  std::vector<WeylElement> out{e};
  std::unordered_map<std::uint64_t, bool> seen{{e.code(), true}};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (auto s : K.indices()) {
      WeylElement nxt = out[head] * cox.simple(s);
      if (seen.emplace(nxt.code(), true).second) out.push_back(nxt);
    }
  }
  return out;
}

WeylElement longest_element(const CoxeterDescriptor& cox, ReflectionSet K) {
  const auto group = parabolic_subgroup(cox, K);
  const WeylElement* best = &group.front();
  unsigned best_len = 0;
  for (const auto& w : group) {
    const unsigned l = length(cox, w);
    if (l > best_len) {
      best_len = l;
      best = &w;
    }
  }
  return *best;
}

std::vector<WeylElement> min_coset_reps(const CoxeterDescriptor& cox, ReflectionSet I) {
  std::vector<WeylElement> out;
  for (const auto& w : cox.elements()) {
    const unsigned lw = length(cox, w);
    bool minimal = true;
    for (auto s : I.indices()) {
      if (length(cox, cox.simple(s) * w) < lw) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(w);
  }
  return out;  // elements() is already in (length, one-line) order
}

bool bruhat_leq(const CoxeterDescriptor& cox, const WeylElement& u, const WeylElement& v) {
  if (!cox.contains(u) || !cox.contains(v)) throw InvalidArgument("bruhat_leq: element not in W");
  return symmetric_bruhat_leq(u, v);
}

WeylElement frobenius_w(const CoxeterDescriptor& cox, const WeylElement& w) {
  if (cox.frobenius_kind() == FrobeniusKind::Identity) return w;
  const WeylElement& w0 = cox.elements().back();
  return w0 * w * w0;
}

WeylElement conjugate(const CoxeterDescriptor&, const WeylElement& a, const WeylElement& b) {
  return a * b * a.inverse();
}

bool map_reflections(const CoxeterDescriptor& cox, ReflectionSet K, const WeylElement& g, bool apply_frobenius,
                     ReflectionSet& out) {
  out = ReflectionSet();
  for (auto s : K.indices()) {
    WeylElement img = conjugate(cox, g, cox.simple(s));
    if (apply_frobenius) img = frobenius_w(cox, img);
    const int idx = cox.simple_index(img);
    if (idx < 0) return false;
    out.insert(static_cast<unsigned>(idx));
  }
  return true;
}

}  // namespace zipsheaf::weyl

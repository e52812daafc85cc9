#pragma once

// Brute-force reference computations used by the tests.  They rely only on
// plain integer arithmetic and permutations, never on library internals,
// except where noted (twisted_class_count works on library matrices).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <vector>

#include "zipsheaf/matrixgrp.hpp"

namespace oracle {

// ------------------------------------------------------------ permutations

using Perm = std::vector<unsigned>;  // 0-based one-line form

inline Perm identity_perm(unsigned n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

// (a b)(i) = a(b(i))
inline Perm compose(const Perm& a, const Perm& b) {
  Perm r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
  return r;
}

inline Perm transposition(unsigned n, unsigned i, unsigned j) {
  Perm p = identity_perm(n);
  std::swap(p[i], p[j]);
  return p;
}

// Simple reflections of S_n: (i i+1), 0-based.
inline std::vector<Perm> type_a_generators(unsigned n) {
  std::vector<Perm> g;
  for (unsigned i = 0; i + 1 < n; ++i) g.push_back(transposition(n, i, i + 1));
  return g;
}

// Simple reflections of the hyperoctahedral group inside S_2n.
inline std::vector<Perm> type_c_generators(unsigned n) {
  std::vector<Perm> g;
  const unsigned N = 2 * n;
  for (unsigned i = 0; i + 1 < n; ++i) {
    g.push_back(compose(transposition(N, i, i + 1), transposition(N, N - 2 - i, N - 1 - i)));
  }
  g.push_back(transposition(N, n - 1, n));
  return g;
}

// Word length of every group element, by breadth-first search.
inline std::map<Perm, unsigned> bfs_lengths(const std::vector<Perm>& gens, unsigned degree) {
  std::map<Perm, unsigned> len;
  const Perm e = identity_perm(degree);
  len[e] = 0;
  std::queue<Perm> todo;
  todo.push(e);
  while (!todo.empty()) {
    Perm x = todo.front();
    todo.pop();
    for (const Perm& s : gens) {
      Perm y = compose(x, s);
      if (len.emplace(y, len[x] + 1).second) todo.push(y);
    }
  }
  return len;
}

// A reduced word for x (generator indices), read off the length table.
inline std::vector<unsigned> reduced_word(const std::map<Perm, unsigned>& len, const std::vector<Perm>& gens,
                                          Perm x) {
  std::vector<unsigned> word;
  while (len.at(x) > 0) {
    for (unsigned i = 0; i < gens.size(); ++i) {
      Perm y = compose(x, gens[i]);
      if (len.at(y) + 1 == len.at(x)) {
        word.push_back(i);
        x = y;
        break;
      }
    }
  }
  std::reverse(word.begin(), word.end());
  return word;
}

// Subword criterion: u <= v iff u is a product of a subword of a reduced
// word for v.
inline bool bruhat_leq_subword(const std::map<Perm, unsigned>& len, const std::vector<Perm>& gens, const Perm& u,
                               const Perm& v) {
  const auto word = reduced_word(len, gens, v);
  const std::size_t k = word.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Perm x = identity_perm(static_cast<unsigned>(u.size()));
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1u) x = compose(x, gens[word[i]]);
    }
    if (x == u) return true;
  }
  return false;
}

// ------------------------------------------------- matrices over F_p, p prime

struct ModMat {
  unsigned n = 0;
  std::vector<unsigned> a;
  unsigned& at(unsigned i, unsigned j) { return a[i * n + j]; }
  unsigned at(unsigned i, unsigned j) const { return a[i * n + j]; }
  friend bool operator<(const ModMat& x, const ModMat& y) { return x.a < y.a; }
  friend bool operator==(const ModMat& x, const ModMat& y) { return x.a == y.a; }
};

inline ModMat mod_identity(unsigned n) {
  ModMat m{n, std::vector<unsigned>(n * n, 0)};
  for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

inline ModMat mod_mul(const ModMat& x, const ModMat& y, unsigned p) {
  ModMat r{x.n, std::vector<unsigned>(x.n * x.n, 0)};
  for (unsigned i = 0; i < x.n; ++i)
    for (unsigned k = 0; k < x.n; ++k)
      for (unsigned j = 0; j < x.n; ++j) r.at(i, j) = (r.at(i, j) + x.at(i, k) * y.at(k, j)) % p;
  return r;
}

inline unsigned mod_inv(unsigned a, unsigned p) {
  for (unsigned b = 1; b < p; ++b)
    if (a * b % p == 1) return b;
  return 0;
}

inline unsigned mod_det(ModMat m, unsigned p) {
  unsigned det = 1;
  for (unsigned c = 0; c < m.n; ++c) {
    unsigned r = c;
    while (r < m.n && m.at(r, c) == 0) ++r;
    if (r == m.n) return 0;
    if (r != c) {
      for (unsigned j = 0; j < m.n; ++j) std::swap(m.at(r, j), m.at(c, j));
      det = (p - det) % p;
    }
    det = det * m.at(c, c) % p;
    const unsigned inv = mod_inv(m.at(c, c), p);
    for (unsigned i = c + 1; i < m.n; ++i) {
      const unsigned f = m.at(i, c) * inv % p;
      for (unsigned j = c; j < m.n; ++j) m.at(i, j) = (m.at(i, j) + (p - f) * m.at(c, j)) % p;
    }
  }
  return det;
}

inline std::uint64_t mod_code(const ModMat& m, unsigned p) {
  std::uint64_t c = 0;
  for (unsigned v : m.a) c = c * p + v;
  return c;
}

inline ModMat mod_decode(std::uint64_t c, unsigned n, unsigned p) {
  ModMat m{n, std::vector<unsigned>(n * n, 0)};
  for (unsigned k = n * n; k-- > 0;) {
    m.a[k] = static_cast<unsigned>(c % p);
    c /= p;
  }
  return m;
}

// GL_n(F_p) by filtering all p^{n^2} matrices.
inline std::vector<ModMat> enumerate_gl(unsigned n, unsigned p) {
  std::uint64_t total = 1;
  for (unsigned i = 0; i < n * n; ++i) total *= p;
  std::vector<ModMat> out;
  for (std::uint64_t c = 0; c < total; ++c) {
    ModMat m = mod_decode(c, n, p);
    if (mod_det(m, p) != 0) out.push_back(std::move(m));
  }
  return out;
}

inline ModMat mod_inverse(const ModMat& m, const std::vector<ModMat>& group, unsigned p) {
  const ModMat e = mod_identity(m.n);
  for (const ModMat& x : group)
    if (mod_mul(m, x, p) == e) return x;
  return e;
}

// Number of conjugacy classes, conjugating by every element.
inline std::uint64_t class_count(const std::vector<ModMat>& group, unsigned p) {
  std::vector<ModMat> inv;
  for (const ModMat& g : group) inv.push_back(mod_inverse(g, group, p));
  std::set<ModMat> seen;
  std::uint64_t classes = 0;
  for (const ModMat& h : group) {
    if (seen.count(h)) continue;
    ++classes;
    for (std::size_t i = 0; i < group.size(); ++i) seen.insert(mod_mul(mod_mul(group[i], h, p), inv[i], p));
  }
  return classes;
}

// Number of orbits of E = {(l u, l v)} on GL_n(F_p), acting by
// g -> a g b^{-1}, where l runs over the block-diagonal Levi of the given
// block sizes, u over the upper and v over the lower unipotent radical.
inline std::uint64_t zip_orbit_count(unsigned n, const std::vector<unsigned>& blocks, unsigned p) {
  std::vector<unsigned> block_of;
  for (unsigned b = 0; b < blocks.size(); ++b) block_of.insert(block_of.end(), blocks[b], b);
  const std::vector<ModMat> gl = enumerate_gl(n, p);
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < gl.size(); ++i) index[mod_code(gl[i], p)] = i;

  std::vector<std::pair<ModMat, ModMat>> gens;  // (a, b^{-1})
  for (const ModMat& g : gl) {
    bool levi = true;
    for (unsigned i = 0; i < n && levi; ++i)
      for (unsigned j = 0; j < n; ++j)
        if (block_of[i] != block_of[j] && g.at(i, j) != 0) levi = false;
    if (levi) gens.emplace_back(g, mod_inverse(g, gl, p));
  }
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      if (block_of[i] >= block_of[j]) continue;
      ModMat u = mod_identity(n);
      u.at(i, j) = 1;
      ModMat v = mod_identity(n);
      v.at(j, i) = p - 1;  // (1 + E_ji)^{-1}
      gens.emplace_back(u, mod_identity(n));
      gens.emplace_back(mod_identity(n), v);
    }
  }

  std::vector<bool> seen(gl.size(), false);
  std::uint64_t orbits = 0;
  for (std::size_t s = 0; s < gl.size(); ++s) {
    if (seen[s]) continue;
    ++orbits;
    seen[s] = true;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      const ModMat g = gl[stack.back()];
      stack.pop_back();
      for (const auto& [a, binv] : gens) {
        const std::size_t t = index.at(mod_code(mod_mul(mod_mul(a, g, p), binv, p), p));
        if (!seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
      }
    }
  }
  return orbits;
}

// --------------------------------------------------------- library matrices

// Orbits of h -> x h frob(x)^{-1} for x in the group generated by gens.
inline std::uint64_t twisted_class_count(const zipsheaf::mg::MatrixRing& ring,
                                         const std::vector<zipsheaf::mg::Matrix>& sorted,
                                         const std::vector<zipsheaf::mg::Matrix>& gens) {
  using zipsheaf::mg::Matrix;
  std::vector<std::pair<Matrix, Matrix>> act;
  for (const Matrix& x : gens) act.emplace_back(x, *ring.inverse(ring.frob(x)));
  auto find = [&](const Matrix& m) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), m) - sorted.begin());
  };
  std::vector<bool> seen(sorted.size(), false);
  std::uint64_t orbits = 0;
  for (std::size_t s = 0; s < sorted.size(); ++s) {
    if (seen[s]) continue;
    ++orbits;
    seen[s] = true;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      const Matrix h = sorted[stack.back()];
      stack.pop_back();
      for (const auto& [x, fxinv] : act) {
        const std::size_t t = find(ring.mul(ring.mul(x, h), fxinv));
        if (t < sorted.size() && !seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
      }
    }
  }
  return orbits;
}

// ------------------------------------------------------------ order formulas

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::uint64_t gl_order(unsigned n, std::uint64_t q) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < n; ++i) r *= ipow(q, n) - ipow(q, i);
  return r;
}

inline std::int64_t u_order(unsigned n, std::int64_t q) {
  std::int64_t r = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(q), n * (n - 1) / 2));
  std::int64_t sign = -1;
  for (unsigned i = 1; i <= n; ++i, sign = -sign) r *= static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(q), i)) - sign;
  return r;
}

}  // namespace oracle

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "zipsheaf/census.hpp"
#include "zipsheaf/error.hpp"
#include "zipsheaf/matrixgrp.hpp"

using namespace zipsheaf;
using namespace zipsheaf::mg;

namespace {

zip::ZipDatum datum(const std::string& fam, unsigned n, const std::string& cochar, std::uint64_t q = 2) {
  census::CensusConfig cfg;
  cfg.family = fam;
  cfg.rank = n;
  cfg.cochar = cochar;
  cfg.q = q;
  return census::make_datum(cfg);
}

TEST(EnumerateGroup, SmallGroups) {
  EXPECT_EQ(enumerate_group({GroupKind::GL, 2, 2}).size(), 6u);
  EXPECT_EQ(enumerate_group({GroupKind::Sp, 1, 2}).size(), 6u);
  EXPECT_EQ(enumerate_group({GroupKind::GU, 1, 2}).size(), 3u);
  EXPECT_EQ(enumerate_group({GroupKind::U, 1, 2}).size(), 3u);
  EXPECT_EQ(enumerate_group({GroupKind::Sp, 1, 3}).size(), 24u);
  EXPECT_EQ(enumerate_group({GroupKind::Sp, 2, 2}).size(), 720u);
}

TEST(EnumerateGroup, MatchesIndependentGLEnumeration) {
  for (auto [n, p] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}, {2u, 5u}}) {
    EXPECT_EQ(enumerate_group({GroupKind::GL, n, p}).size(), oracle::enumerate_gl(n, p).size());
  }
}

TEST(EnumerateGroup, BudgetIsEnforced) {
  EXPECT_THROW(enumerate_group({GroupKind::GL, 3, 4}, 1000), BudgetExceeded);
  EXPECT_EQ(MatrixGroupSpec({GroupKind::GL, 3, 4}).candidate_count(), Integer(262144));
}

TEST(EnumerateGroup, OutputIsSortedAndSatisfiesPredicate) {
  const MatrixGroupSpec spec{GroupKind::GU, 2, 3};
  const MatrixRing ring(spec.field(), spec.q);
  const auto G = enumerate_group(spec);
  EXPECT_TRUE(std::is_sorted(G.begin(), G.end()));
  for (const Matrix& g : G) EXPECT_TRUE(spec.contains(ring, g));
  EXPECT_TRUE(verify_group(ring, G).ok);
}

TEST(ConjugacyClasses, MatchBruteForce) {
  for (auto [n, p, expected] : {std::tuple{2u, 2u, 3u}, {2u, 3u, 8u}, {3u, 2u, 6u}}) {
    const MatrixGroupSpec spec{GroupKind::GL, n, p};
    const MatrixRing ring(spec.field(), spec.q);
    const auto G = enumerate_group(spec);
    EXPECT_EQ(conjugacy_class_count(ring, G), expected);
    EXPECT_EQ(oracle::class_count(oracle::enumerate_gl(n, p), p), expected);
  }
}

TEST(ConjugacyClasses, TrivialAndAbelian) {
  const MatrixRing ring(ff::make_field(2, 1), 2);
  EXPECT_EQ(conjugacy_class_count(ring, {ring.identity(2)}), 1u);
  const auto U1 = enumerate_group({GroupKind::U, 1, 4});
  const MatrixRing ring16(ff::make_field(2, 4), 4);
  EXPECT_EQ(conjugacy_class_count(ring16, U1), U1.size());
}

TEST(ConjugacyClasses, RejectsNonGroups) {
  const MatrixRing ring(ff::make_field(3, 1), 3);
  Matrix two(1);
  two(0, 0) = 2;
  Matrix one = ring.identity(1);
  Matrix zero(1);
  EXPECT_THROW(conjugacy_class_count(ring, {zero, one}), Error);
  EXPECT_TRUE(verify_group(ring, {one, two}).ok);
}

TEST(Similitude, FactorIsMultiplicative) {
  for (std::uint64_t q : {2u, 3u}) {
    const MatrixGroupSpec spec{GroupKind::GU, 2, q};
    const MatrixRing ring(spec.field(), q);
    const auto G = enumerate_group(spec);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, G.size() - 1);
    for (int t = 0; t < 2000; ++t) {
      const Matrix& g = G[pick(rng)];
      const Matrix& h = G[pick(rng)];
      const auto cg = similitude_factor(ring, g), ch = similitude_factor(ring, h);
      const auto cgh = similitude_factor(ring, ring.mul(g, h));
      ASSERT_TRUE(cg && ch && cgh);
      EXPECT_EQ(*cgh, ring.field().mul(*cg, *ch));
      // c(g) lies in F_q.
      EXPECT_EQ(ring.field().pow(*cg, q), *cg);
    }
  }
}

SignedMatrix from_rows(std::vector<int> e) { return SignedMatrix{4, std::move(e)}; }

TEST(Lifts, Sp4TableOfLifts) {
  const zip::ZipDatum d = datum("sp", 2, "I=");
  const auto s = d.cox.simple(0), r = d.cox.simple(1);
  const std::vector<std::pair<weyl::WeylElement, SignedMatrix>> table{
      {weyl::WeylElement(4), from_rows({1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1})},
      {s, from_rows({0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0})},
      {r, from_rows({1, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 1})},
      {r * s, from_rows({0, 1, 0, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 0, 1, 0})},
      {s * r, from_rows({0, 0, 1, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, -1, 0, 0})},
      {r * s * r, from_rows({0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, -1, 0, 0})},
      {s * r * s, from_rows({0, 0, 0, -1, 0, -1, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0})},
      {r * s * r * s, from_rows({0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0})},
  };
  for (const auto& [w, m] : table) {
    EXPECT_EQ(weyl_lift(d, w), m) << w.to_string();
    EXPECT_EQ(m.permutation(), w);
  }
}

TEST(Lifts, SymplecticLiftsPreserveTheForm) {
  for (unsigned n : {2u, 3u, 4u}) {
    const zip::ZipDatum d = datum("sp", n, "I=");
    const std::vector<int> J = symplectic_form(n);
    const unsigned N = 2 * n;
    for (const auto& w : d.cox.elements()) {
      const SignedMatrix A = weyl_lift(d, w);
      EXPECT_EQ(A.permutation(), w);
      for (unsigned i = 0; i < N; ++i) {
        for (unsigned j = 0; j < N; ++j) {
          int v = 0;
          for (unsigned a = 0; a < N; ++a)
            for (unsigned b = 0; b < N; ++b) v += A(a, i) * J[a * N + b] * A(b, j);
          EXPECT_EQ(v, J[i * N + j]) << w.to_string();
        }
      }
    }
  }
}

TEST(Lifts, LiftIsMultiplicativeOnLengthAdditivePairs) {
  const zip::ZipDatum d = datum("sp", 3, "I=");
  for (const auto& w : d.cox.elements()) {
    for (const auto& v : d.cox.elements()) {
      if (weyl::length(d.cox, w * v) == weyl::length(d.cox, w) + weyl::length(d.cox, v)) {
        EXPECT_EQ(weyl_lift(d, w * v), weyl_lift(d, w) * weyl_lift(d, v));
      }
    }
  }
}

TEST(Lifts, GLUsesPermutationMatrices) {
  const zip::ZipDatum d = datum("gl", 3, "1,2");
  const auto w = weyl::WeylElement::from_cycles(3, {{1, 2}});
  const SignedMatrix m = weyl_lift(d, w);
  EXPECT_EQ(m.e, (std::vector<int>{0, 1, 0, 1, 0, 0, 0, 0, 1}));
  EXPECT_EQ(build_lift(d, w).lift.permutation(), zip::compute_y(d) * w);
}

TEST(Lifts, OpenAndClosedSpLiftsUseTheBlockAntidiagonal) {
  const zip::ZipDatum d = datum("sp", 3, "3,3");
  const TwistData t = build_lift(d, weyl::WeylElement(6));
  for (unsigned i = 0; i < 3; ++i) {
    EXPECT_EQ(t.lift(i, 3 + i), 1);
    EXPECT_EQ(t.lift(3 + i, i), -1);
  }
}

TEST(TwistedFixedPoints, KnownStrata) {
  {
    const zip::ZipDatum d = datum("sp", 2, "2,2");
    const auto S = zip::strata(d);
    const auto fp = stratum_fixed_points(d, S[0]);
    EXPECT_EQ(fp.order, Integer(enumerate_group({GroupKind::U, 2, 2}).size()));
    EXPECT_TRUE(fp.is_group);
  }
  {
    const zip::ZipDatum d = datum("gl", 4, "2,2");
    const auto fp = stratum_fixed_points(d, zip::strata(d)[0]);
    EXPECT_EQ(fp.order, Integer(180));
    EXPECT_TRUE(fp.materialized);
    EXPECT_TRUE(fp.is_group);
    EXPECT_EQ(fp.field_degree, 2u);
  }
}

TEST(TwistedFixedPoints, TrivialTwistGivesRationalPoints) {
  for (auto [fam, n, I, kind] : {std::tuple{"gl", 2u, "I=1", GroupKind::GL}, {"gl", 3u, "I=1,2", GroupKind::GL},
                                 {"sp", 2u, "I=1,2", GroupKind::Sp}, {"gu", 2u, "I=1", GroupKind::GU}}) {
    const zip::ZipDatum d = datum(fam, n, I);
    const auto fp = stratum_fixed_points(d, zip::strata(d)[0]);
    EXPECT_EQ(fp.order, Integer(enumerate_group({kind, n, 2}).size())) << fam << n;
  }
}

TEST(TwistedFixedPoints, AbelianSetsHaveOneClassPerElement) {
  const zip::ZipDatum d = datum("gl", 4, "2,2");
  for (const auto& s : zip::strata(d)) {
    const auto fp = stratum_fixed_points(d, s);
    ASSERT_TRUE(fp.class_count.has_value());
    const auto g = stab::stabilizer_descriptor(d, s);
    if (g.is_abelian()) {
      EXPECT_EQ(Integer(*fp.class_count), fp.order);
    }
  }
}

TEST(TwistedFixedPoints, BudgetSkipsInsteadOfTruncating) {
  const zip::ZipDatum d = datum("gl", 4, "2,2");
  const auto fp = stratum_fixed_points(d, zip::strata(d)[0], 10);
  EXPECT_EQ(fp.status, FixedPointResult::Status::Skipped);
  EXPECT_FALSE(fp.note.empty());
}

}  // namespace

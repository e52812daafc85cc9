#include <gtest/gtest.h>

#include <optional>
#include <set>

#include "zipsheaf/census.hpp"
#include "zipsheaf/error.hpp"
#include "zipsheaf/zipdata.hpp"

using namespace zipsheaf;
using namespace zipsheaf::zip;

namespace {

ZipDatum datum(const std::string& fam, unsigned n, const std::string& cochar, std::uint64_t q = 2) {
  census::CensusConfig cfg;
  cfg.family = fam;
  cfg.rank = n;
  cfg.cochar = cochar;
  cfg.q = q;
  return census::make_datum(cfg);
}

// All data with split Frobenius or GU, every I, small rank.
std::vector<ZipDatum> all_small_data() {
  std::vector<ZipDatum> out;
  for (const CoxeterDescriptor& cox :
       {CoxeterDescriptor::type_a(2), CoxeterDescriptor::type_a(3), CoxeterDescriptor::type_a(4),
        CoxeterDescriptor::type_c(2), CoxeterDescriptor::type_c(3), CoxeterDescriptor::type_a_twisted(2),
        CoxeterDescriptor::type_a_twisted(3), CoxeterDescriptor::type_a_twisted(4)}) {
    for (std::uint32_t mask = 0; mask < (1u << cox.num_simple()); ++mask) {
      out.push_back(ZipDatum::make(cox, ReflectionSet(mask), 2));
    }
  }
  return out;
}

WeylElement phi(const CoxeterDescriptor& cox, const WeylElement& x) {
  if (cox.family() != weyl::Family::TypeATwisted) return x;
  std::vector<unsigned> rev(cox.degree());
  for (unsigned i = 0; i < cox.degree(); ++i) rev[i] = cox.degree() - i;
  const WeylElement w0 = WeylElement::from_one_line(rev);
  return w0 * x * w0;
}

// Image of a reflection set under x -> phi(g x g^{-1}); nullopt if some
// image is not simple.
std::optional<ReflectionSet> image(const CoxeterDescriptor& cox, ReflectionSet K, const WeylElement& g) {
  ReflectionSet out;
  for (unsigned i : K.indices()) {
    const int j = cox.simple_index(phi(cox, g * cox.simple(i) * g.inverse()));
    if (j < 0) return std::nullopt;
    out.insert(static_cast<unsigned>(j));
  }
  return out;
}

// Union of all subsets of J ∩ w^{-1} I w mapped onto themselves.
ReflectionSet kw_oracle(const ZipDatum& d, const WeylElement& w) {
  const CoxeterDescriptor& cox = d.cox;
  ReflectionSet A;
  for (unsigned i : compute_J(d).indices()) {
    const int j = cox.simple_index(w * cox.simple(i) * w.inverse());
    if (j >= 0 && d.I.contains(static_cast<unsigned>(j))) A.insert(i);
  }
  const WeylElement yw = compute_y(d) * w;
  ReflectionSet result;
  for (std::uint32_t sub = A.mask();; sub = (sub - 1) & A.mask()) {
    const auto img = image(cox, ReflectionSet(sub), yw);
    if (img && *img == ReflectionSet(sub)) result = result | ReflectionSet(sub);
    if (sub == 0) break;
  }
  return result;
}

TEST(ZipData, GL4TwoTwoBasics) {
  const ZipDatum d = datum("gl", 4, "2,2");
  EXPECT_EQ(d.I, ReflectionSet::of({0, 2}));
  EXPECT_EQ(compute_J(d), d.I);
  EXPECT_EQ(compute_y(d).to_string(), "(13)(24)");
  std::vector<std::string> names;
  for (const Stratum& s : strata(d)) names.push_back(s.w.to_string());
  EXPECT_EQ(names, (std::vector<std::string>{"id", "(23)", "(234)", "(132)", "(1342)", "(13)(24)"}));
}

TEST(ZipData, StratumCountIsCosetCount) {
  for (const ZipDatum& d : all_small_data()) {
    const auto S = strata(d);
    EXPECT_EQ(S.size() * weyl::parabolic_subgroup(d.cox, d.I).size(), d.cox.order());
  }
}

TEST(ZipData, KwIsGreatestStableSubset) {
  for (const ZipDatum& d : all_small_data()) {
    for (const Stratum& s : strata(d)) {
      EXPECT_EQ(s.K, kw_oracle(d, s.w)) << s.w.to_string() << " I=" << d.I.mask();
      EXPECT_EQ(compute_Kw(d, s.w), s.K);
    }
  }
}

TEST(ZipData, KwIsMappedBijectively) {
  for (const ZipDatum& d : all_small_data()) {
    for (const Stratum& s : strata(d)) {
      const auto img = image(d.cox, s.K, compute_y(d) * s.w);
      ASSERT_TRUE(img.has_value());
      EXPECT_EQ(*img, s.K);
    }
  }
}

TEST(ZipData, OpenStratumIsYInverse) {
  for (const ZipDatum& d : all_small_data()) {
    const auto S = strata(d);
    const WeylElement yinv = compute_y(d).inverse();
    unsigned max_len = 0, at_max = 0;
    for (const Stratum& s : S) max_len = std::max(max_len, s.length);
    for (const Stratum& s : S) {
      if (s.length == max_len) {
        ++at_max;
        EXPECT_EQ(s.w, yinv);
        EXPECT_TRUE(s.is_open);
      }
    }
    EXPECT_EQ(at_max, 1u);
    EXPECT_TRUE(S.front().w.is_identity());
    EXPECT_TRUE(S.front().is_closed);
  }
}

TEST(ZipData, KwOfGLOneNMinusOneStrata) {
  // w_k = (1 ... k): K is {(12), ..., (k-2 k-1)}.
  for (unsigned n : {3u, 4u, 5u}) {
    const ZipDatum d = datum("gl", n, "1,n-1");
    const auto S = strata(d);
    ASSERT_EQ(S.size(), n);
    for (unsigned k = 1; k <= n; ++k) {
      std::vector<unsigned> cyc;
      for (unsigned i = 1; i <= k; ++i) cyc.push_back(i);
      const WeylElement wk = k == 1 ? WeylElement(n) : WeylElement::from_cycles(n, {cyc});
      EXPECT_EQ(S[k - 1].w, wk);
      ReflectionSet expected;
      for (unsigned i = 0; i + 2 < k; ++i) expected.insert(i);
      EXPECT_EQ(S[k - 1].K, expected) << "n=" << n << " k=" << k;
    }
  }
}

TEST(ZipData, ClosureRuleAgreesWithStoredDiagrams) {
  const ClosureValidation& v = validate_closure_rule();
  EXPECT_TRUE(v.ok);
  if (!v.ok)
    for (const auto& m : v.messages) ADD_FAILURE() << m;
}

TEST(ZipData, ClosureOrderIsAPartialOrderWithExtremes) {
  for (const ZipDatum& d : all_small_data()) {
    const ClosureOrder c = closure_order(d);
    const std::size_t n = c.nodes.size();
    if (c.source == ClosureOrder::Source::Omitted) continue;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_TRUE(c.below[i][i]);
      EXPECT_TRUE(c.below[0][i]);      // id is in every closure
      EXPECT_TRUE(c.below[i][n - 1]);  // the open stratum is dense
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) EXPECT_FALSE(c.below[i][j] && c.below[j][i]);
        for (std::size_t k = 0; k < n; ++k) {
          if (c.below[i][j] && c.below[j][k]) EXPECT_TRUE(c.below[i][k]);
        }
      }
    }
  }
}

TEST(ZipData, GL4TwoTwoDiagram) {
  const ClosureOrder c = closure_order(datum("gl", 4, "2,2"));
  std::set<std::pair<std::string, std::string>> edges;
  for (auto [a, b] : c.covers) edges.emplace(c.nodes[a].to_string(), c.nodes[b].to_string());
  const std::set<std::pair<std::string, std::string>> expected{
      {"(13)(24)", "(1342)"}, {"(1342)", "(132)"}, {"(1342)", "(234)"},
      {"(132)", "(23)"},      {"(234)", "(23)"},   {"(23)", "id"}};
  EXPECT_EQ(edges, expected);
  EXPECT_EQ(c.source, ClosureOrder::Source::CandidateRule);
}

TEST(ZipData, InvalidInputs) {
  EXPECT_THROW(ZipDatum::make(CoxeterDescriptor::type_a(3), ReflectionSet(0b100), 2), InvalidArgument);
  EXPECT_THROW(ZipDatum::make(CoxeterDescriptor::type_a(3), ReflectionSet(0), 6), InvalidArgument);
  const ZipDatum d = datum("gl", 3, "1,2");
  EXPECT_THROW(compute_Kw(d, WeylElement::from_cycles(3, {{2, 3}})), InvalidArgument);
}

}  // namespace

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "zipsheaf/census.hpp"
#include "zipsheaf/error.hpp"

using namespace zipsheaf;
using namespace zipsheaf::census;
using nlohmann::json;

namespace {

CensusConfig config(const std::string& fam, unsigned n, const std::string& cochar, std::uint64_t q,
                    bool oracle = false) {
  CensusConfig c;
  c.family = fam;
  c.rank = n;
  c.cochar = cochar;
  c.q = q;
  c.oracle = oracle;
  return c;
}

TEST(Cochar, BlockSignatures) {
  const auto a4 = weyl::CoxeterDescriptor::type_a(4);
  EXPECT_EQ(parse_cochar(a4, "2,2"), weyl::ReflectionSet::of({0, 2}));
  EXPECT_EQ(parse_cochar(a4, "1,n-1"), weyl::ReflectionSet::of({1, 2}));
  EXPECT_EQ(parse_cochar(a4, "1,n−1"), weyl::ReflectionSet::of({1, 2}));
  EXPECT_EQ(parse_cochar(a4, "n"), weyl::ReflectionSet::all(3));
  EXPECT_EQ(parse_cochar(a4, "1,1,1,1"), weyl::ReflectionSet());
  EXPECT_EQ(parse_cochar(a4, "I=1,3"), weyl::ReflectionSet::of({0, 2}));
  EXPECT_EQ(parse_cochar(a4, "I="), weyl::ReflectionSet());
  const auto c2 = weyl::CoxeterDescriptor::type_c(2);
  EXPECT_EQ(parse_cochar(c2, "2,2"), weyl::ReflectionSet::of({0}));
  EXPECT_EQ(parse_cochar(c2, "1,2,1"), weyl::ReflectionSet::of({1}));
}

TEST(Cochar, Malformed) {
  const auto a4 = weyl::CoxeterDescriptor::type_a(4);
  for (const char* bad : {"", "2,3", "0,4", "a,b", "I=4", "I=0", "2,,2", "n-5,1"}) {
    EXPECT_THROW(parse_cochar(a4, bad), InvalidArgument) << bad;
  }
}

TEST(Census, GL4TwoTwo) {
  const CensusReport r = run_census(config("gl", 4, "2,2", 2, true));
  ASSERT_EQ(r.rows.size(), 6u);
  const std::vector<int> orders{180, 15, 7, 7, 3, 36};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(r.rows[i].order, Integer(orders[i]));
    EXPECT_EQ(r.rows[i].oracle.status, OracleStatus::Match);
  }
  EXPECT_EQ(r.mismatches(), 0u);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_EQ(r.closure.size(), 6u);
  // GL_2(F_4) has 15 classes, GL_2(F_2)^2 has 9.
  EXPECT_EQ(r.total_irreps(), Integer(15 + 15 + 7 + 7 + 3 + 9));
}

TEST(Census, IrrepsOfNonabelianStrataComeFromClassCounts) {
  const CensusReport r = run_census(config("sp", 2, "2,2", 3));
  const StratumRow& open = r.rows.back();
  EXPECT_EQ(open.order, Integer(48));
  EXPECT_EQ(open.irreps, Integer(8));
  EXPECT_EQ(open.irreps_source, "classes");
}

TEST(Census, JsonRoundTripsIntegerFields) {
  const CensusReport r = run_census(config("gu", 3, "1,2", 3, true));
  const json j = json::parse(render_json(r));
  EXPECT_EQ(j["schema_version"], 1);
  ASSERT_EQ(j["strata"].size(), r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& s = j["strata"][i];
    EXPECT_EQ(s["w"], r.rows[i].w_text);
    EXPECT_EQ(s["length"], r.rows[i].length);
    EXPECT_EQ(Integer(s["order"].get<std::uint64_t>()), r.rows[i].order);
    EXPECT_EQ(Integer(s["irreps"].get<std::uint64_t>()), *r.rows[i].irreps);
    EXPECT_EQ(s["oracle"]["status"], "match");
  }
  EXPECT_EQ(j["closure"].size(), r.closure.size());
  EXPECT_EQ(j["totals"]["strata"], r.rows.size());
  EXPECT_EQ(Integer(j["totals"]["simple_perverse_sheaves"].get<std::uint64_t>()), *r.total_irreps());
}

TEST(Census, OutputIsDeterministic) {
  const CensusConfig c = config("sp", 3, "3,3", 2, true);
  CensusConfig c1 = c;
  c1.threads = 1;
  const std::string a = render_json(run_census(c));
  EXPECT_EQ(a, render_json(run_census(c)));
  EXPECT_EQ(a, render_json(run_census(c1)));
  EXPECT_EQ(render_table(run_census(c)), render_table(run_census(c1)));
}

TEST(Census, DotForSingleStratumHasNoEdges) {
  const std::string dot = render_dot(run_census(config("gl", 3, "n", 2)));
  EXPECT_EQ(dot.find("->"), std::string::npos);
  EXPECT_NE(dot.find("s0 [label=\"id | "), std::string::npos);
}

TEST(Census, DotForGL4TwoTwo) {
  const std::string dot = render_dot(run_census(config("gl", 4, "2,2", 2)));
  const std::regex node(R"(s\d+ \[label=)"), edge(R"(s\d+ -> s\d+;)");
  EXPECT_EQ(std::distance(std::sregex_iterator(dot.begin(), dot.end(), node), std::sregex_iterator()), 6);
  EXPECT_EQ(std::distance(std::sregex_iterator(dot.begin(), dot.end(), edge), std::sregex_iterator()), 6);
}

TEST(Census, PartialTotalsWhenOracleSkips) {
  const CensusReport r = run_census(config("gu", 4, "1,3", 3, true));
  EXPECT_EQ(r.oracle_skipped(), 1u);
  EXPECT_EQ(r.mismatches(), 0u);
  EXPECT_FALSE(r.total_irreps().has_value());
  const json j = json::parse(render_json(r));
  EXPECT_EQ(j["totals"]["complete"], false);
  EXPECT_TRUE(j["totals"]["simple_perverse_sheaves"].is_null());
}

TEST(Census, InvalidConfigurations) {
  EXPECT_THROW(run_census(config("gl", 4, "2,3", 2)), InvalidArgument);
  EXPECT_THROW(run_census(config("gl", 4, "2,2", 6)), InvalidArgument);
  EXPECT_THROW(run_census(config("so", 4, "2,2", 2)), InvalidArgument);
  EXPECT_THROW(run_census(config("gl", 0, "n", 2)), InvalidArgument);
  EXPECT_THROW(parse_format("xml"), InvalidArgument);
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  const auto path = std::filesystem::temp_directory_path() / ("census_cli_" + std::to_string(::getpid()) + ".txt");
  const std::string cmd = std::string(CENSUS_BIN) + " " + args + " > " + path.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    *out = ss.str();
  }
  std::filesystem::remove(path);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  std::string out;
  EXPECT_EQ(run_cli("--family gl --rank 4 --cochar 2,2 --q 2 --oracle", &out), 0);
  EXPECT_NE(out.find("6 strata"), std::string::npos) << out;
  EXPECT_EQ(run_cli("--family gl --rank 4 --cochar 2,3 --q 2"), 2);
  EXPECT_EQ(run_cli("--family gl --rank 4 --cochar 2,2 --q 6"), 2);
  EXPECT_EQ(run_cli("--family xx --rank 4 --cochar 2,2 --q 2"), 2);
  EXPECT_EQ(run_cli("--rank 4 --cochar 2,2 --q 2"), 2);
}

TEST(Cli, FormatsAndOutputFile) {
  std::string out;
  ASSERT_EQ(run_cli("--family sp --rank 2 --cochar 2,2 --q 2 --format json", &out), 0);
  EXPECT_EQ(json::parse(out)["totals"]["strata"], 4);
  ASSERT_EQ(run_cli("--family gu --rank 3 --cochar 1,2 --q 2 --format dot", &out), 0);
  EXPECT_EQ(out.rfind("digraph", 0), 0u);
  const auto path = std::filesystem::temp_directory_path() / ("census_out_" + std::to_string(::getpid()) + ".json");
  ASSERT_EQ(run_cli("--family gl --rank 3 --cochar 1,2 --q 2 --format json --out " + path.string(), &out), 0);
  EXPECT_TRUE(out.empty());
  std::ifstream f(path);
  EXPECT_EQ(json::parse(f)["strata"].size(), 3u);
  std::filesystem::remove(path);
}

}  // namespace

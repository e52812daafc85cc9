// census: classification table of simple perverse sheaves on G-zip stacks.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "zipsheaf/census.hpp"
#include "zipsheaf/error.hpp"

int main(int argc, char** argv) {
  using namespace zipsheaf;
  CLI::App app{"Strata, component groups and simple perverse sheaf counts for G-zip stacks"};
  census::CensusConfig cfg;
  std::string format = "table";
  std::string out_path;
  app.add_option("--family", cfg.family, "gl, sp or gu")->required()->check(CLI::IsMember({"gl", "sp", "gu"}));
  app.add_option("--rank", cfg.rank, "n for GL_n, GU_n, Sp_2n")->required();
  app.add_option("--cochar", cfg.cochar, "block signature (\"2,2\", \"1,n-1\", \"n\") or explicit \"I=1,3\"")
      ->required();
  app.add_option("--q", cfg.q, "prime power")->required();
  app.add_flag("--oracle", cfg.oracle, "verify every order by brute-force enumeration");
  app.add_option("--format", format, "table, json or dot")->check(CLI::IsMember({"table", "json", "dot"}));
  app.add_option("--out", out_path, "write output to a file instead of stdout");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware default)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const census::CensusReport rep = census::run_census(cfg);
    const std::string text = census::render(rep, census::parse_format(format));
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path);
      if (!f) {
        std::cerr << "census: cannot write " << out_path << "\n";
        return 2;
      }
      f << text;
    }
    return rep.exit_code();
  } catch (const InvalidArgument& e) {
    std::cerr << "census: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const Unsupported& e) {
    std::cerr << "census: unsupported configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "census: error: " << e.what() << "\n";
    return 3;
  }
}

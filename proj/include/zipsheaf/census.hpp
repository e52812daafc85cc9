#pragma once

// Full classification table for one (family, rank, cocharacter, q):
// strata, Levi types, component groups, orders, irreducible-representation
// counts, optional oracle verification and the closure order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zipsheaf/matrixgrp.hpp"
#include "zipsheaf/stabilizer.hpp"
#include "zipsheaf/zipdata.hpp"

namespace zipsheaf::census {

enum class Format { Table, Json, Dot };

struct CensusConfig {
  std::string family;  // "gl", "sp" or "gu"
  unsigned rank = 0;
  /// Block signature such as "2,2", "1,n-1" or "n", or explicit simple
  /// reflections "I=1,3" (1-based; "I=" is the empty set).
  std::string cochar;
  std::uint64_t q = 2;
  bool oracle = false;
  /// Worker threads for per-stratum work; 0 picks the hardware default.
  unsigned threads = 0;
};

Format parse_format(const std::string& s);

/// Translates a cocharacter spec into the type I of the parabolic.  Throws
/// InvalidArgument on malformed input.
weyl::ReflectionSet parse_cochar(const weyl::CoxeterDescriptor& cox, const std::string& spec);

/// Builds the zip datum for a config.  Throws InvalidArgument.
zip::ZipDatum make_datum(const CensusConfig& cfg);

enum class OracleStatus { NotRun, Match, Mismatch, Skipped };
std::string status_name(OracleStatus s);

struct OracleVerdict {
  OracleStatus status = OracleStatus::NotRun;
  std::optional<Integer> order;
  unsigned field_degree = 0;
  std::uint64_t candidates = 0;
  std::string note;
};

struct StratumRow {
  weyl::WeylElement w;
  std::string w_text;
  unsigned length = 0;
  std::vector<std::string> k_w;  // simple reflection names
  bool is_open = false;
  bool is_closed = false;
  stab::GroupDescriptor descriptor;
  Integer order = 0;
  std::optional<Integer> irreps;
  /// "abelian" (count = order), "classes" (oracle conjugacy classes) or
  /// "deferred" (= number of conjugacy classes, not computed).
  std::string irreps_source;
  OracleVerdict oracle;
};

struct CensusReport {
  CensusConfig config;
  std::string group_name;         // e.g. "GL_4"
  std::vector<std::string> I;     // simple reflection names
  std::vector<StratumRow> rows;   // in (length, one-line) order
  std::vector<std::pair<std::size_t, std::size_t>> closure;  // Hasse edges (open side, closed side)
  std::string closure_source;     // "candidate-rule", "stored-diagram" or "omitted"
  std::vector<std::string> diagnostics;

  std::size_t mismatches() const;
  std::size_t oracle_skipped() const;
  /// Sum of irreps over all strata, when every count is resolved.
  std::optional<Integer> total_irreps() const;
  /// 0 clean, 1 on any symbolic/oracle mismatch.
  int exit_code() const { return mismatches() > 0 ? 1 : 0; }
};

CensusReport run_census(const CensusConfig& cfg);

std::string render(const CensusReport& r, Format f);
std::string render_table(const CensusReport& r);
std::string render_json(const CensusReport& r);
std::string render_dot(const CensusReport& r);

}  // namespace zipsheaf::census

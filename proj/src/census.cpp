#include "zipsheaf/census.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "zipsheaf/error.hpp"

namespace zipsheaf::census {

using weyl::CoxeterDescriptor;
using weyl::Family;
using weyl::ReflectionSet;

Format parse_format(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "json") return Format::Json;
  if (s == "dot") return Format::Dot;
  throw InvalidArgument("unknown format '" + s + "' (expected table, json or dot)");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

unsigned parse_uint(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw InvalidArgument("malformed " + what + " '" + s + "'");
  if (s.size() > 6) throw InvalidArgument(what + " '" + s + "' is too large");
  return static_cast<unsigned>(std::stoul(s));
}

// An integer, "n", or "n-<int>" / "n+<int>".
unsigned parse_block(const std::string& tok, unsigned n) {
  std::string t;
  for (char c : tok)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  // accept the unicode minus sign as well
  for (std::size_t pos; (pos = t.find("\xE2\x88\x92")) != std::string::npos;) t.replace(pos, 3, "-");
  if (!t.empty() && t[0] == 'n') {
    if (t.size() == 1) return n;
    const unsigned k = parse_uint(t.substr(2), "block size");
    if (t[1] == '-') {
      if (k >= n) throw InvalidArgument("block size '" + tok + "' is not positive");
      return n - k;
    }
    if (t[1] == '+') return n + k;
    throw InvalidArgument("malformed block size '" + tok + "'");
  }
  return parse_uint(t, "block size");
}

}  // namespace

ReflectionSet parse_cochar(const CoxeterDescriptor& cox, const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  const unsigned r = cox.num_simple();
  const unsigned n = cox.rank();
  if (spec.rfind("I=", 0) == 0) {
    ReflectionSet I;
    const std::string body = trim(spec.substr(2));
    if (body.empty()) return I;
    for (const auto& tok : split(body, ',')) {
      const unsigned i = parse_uint(tok, "reflection index");
      if (i < 1 || i > r) throw InvalidArgument("reflection index " + tok + " outside 1.." + std::to_string(r));
      I.insert(i - 1);
    }
    return I;
  }
  if (spec.empty()) throw InvalidArgument("empty cocharacter spec");
  const bool sp = cox.family() == Family::TypeC;
  const unsigned total = sp ? 2 * n : n;
  std::vector<unsigned> blocks;
  unsigned sum = 0;
  for (const auto& tok : split(spec, ',')) {
    const unsigned b = parse_block(tok, n);
    if (b == 0) throw InvalidArgument("block sizes must be positive");
    blocks.push_back(b);
    sum += b;
  }
  if (sum != total)
    throw InvalidArgument("block signature '" + spec + "' sums to " + std::to_string(sum) + ", expected " +
                          std::to_string(total));
  std::vector<bool> boundary(total + 1, false);
  unsigned acc = 0;
  for (std::size_t i = 0; i + 1 < blocks.size(); ++i) boundary[acc += blocks[i]] = true;
  ReflectionSet I = ReflectionSet::all(r);
  for (unsigned i = 1; i <= r; ++i) {
    bool crosses = boundary[i];
    if (sp && i < n) crosses = crosses || boundary[2 * n - i];
    if (crosses) I.erase(i - 1);
  }
  return I;
}

zip::ZipDatum make_datum(const CensusConfig& cfg) {
  if (cfg.rank == 0) throw InvalidArgument("rank must be positive");
  CoxeterDescriptor cox = [&] {
    if (cfg.family == "gl") {
      if (cfg.rank > CoxeterDescriptor::kMaxRankA) throw InvalidArgument("GL rank above the supported maximum of 8");
      return CoxeterDescriptor::type_a(cfg.rank);
    }
    if (cfg.family == "sp") {
      if (cfg.rank > CoxeterDescriptor::kMaxRankC) throw InvalidArgument("Sp rank above the supported maximum of 6");
      return CoxeterDescriptor::type_c(cfg.rank);
    }
    if (cfg.family == "gu") {
      if (cfg.rank > CoxeterDescriptor::kMaxRankA) throw InvalidArgument("GU rank above the supported maximum of 8");
      return CoxeterDescriptor::type_a_twisted(cfg.rank);
    }
    throw InvalidArgument("unknown family '" + cfg.family + "' (expected gl, sp or gu)");
  }();
  const ReflectionSet I = parse_cochar(cox, cfg.cochar);
  return zip::ZipDatum::make(std::move(cox), I, cfg.q);
}

std::string status_name(OracleStatus s) {
  switch (s) {
    case OracleStatus::NotRun: return "not-run";
    case OracleStatus::Match: return "match";
    case OracleStatus::Mismatch: return "mismatch";
    case OracleStatus::Skipped: return "skipped";
  }
  return "?";
}

std::size_t CensusReport::mismatches() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.oracle.status == OracleStatus::Mismatch; }));
}

std::size_t CensusReport::oracle_skipped() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.oracle.status == OracleStatus::Skipped; }));
}

std::optional<Integer> CensusReport::total_irreps() const {
  Integer sum = 0;
  for (const auto& r : rows) {
    if (!r.irreps) return std::nullopt;
    sum += *r.irreps;
  }
  return sum;
}

namespace {

std::vector<std::string> reflection_names(const CoxeterDescriptor& cox, ReflectionSet K) {
  std::vector<std::string> out;
  for (auto i : K.indices()) out.push_back(cox.simple_name(i));
  return out;
}

std::string group_name(const CoxeterDescriptor& cox) {
  switch (cox.family()) {
    case Family::TypeA: return "GL_" + std::to_string(cox.rank());
    case Family::TypeC: return "Sp_" + std::to_string(2 * cox.rank());
    case Family::TypeATwisted: return "GU_" + std::to_string(cox.rank());
  }
  return "?";
}

void fill_row(const zip::ZipDatum& d, const zip::Stratum& s, bool oracle, StratumRow& row) {
  row.w = s.w;
  row.w_text = s.w.to_string();
  row.length = s.length;
  row.k_w = reflection_names(d.cox, s.K);
  row.is_open = s.is_open;
  row.is_closed = s.is_closed;
  row.descriptor = stab::stabilizer_descriptor(d, s);
  row.order = stab::order_at(row.descriptor, d.q);

  if (auto n = stab::irrep_count(row.descriptor, d.q)) {
    row.irreps = *n;
    row.irreps_source = "abelian";
  } else {
    row.irreps_source = "deferred";
  }
  if (!oracle && row.irreps) return;

  const mg::FixedPointResult fp = mg::stratum_fixed_points(d, s);
  if (fp.status == mg::FixedPointResult::Status::Computed) {
    if (!row.irreps && fp.class_count) {
      row.irreps = Integer(*fp.class_count);
      row.irreps_source = "classes";
    }
  }
  if (!oracle) return;
  row.oracle.field_degree = fp.field_degree;
  row.oracle.candidates = fp.candidates;
  row.oracle.note = fp.note;
  if (fp.status == mg::FixedPointResult::Status::Skipped) {
    row.oracle.status = OracleStatus::Skipped;
    return;
  }
  row.oracle.order = fp.order;
  const bool group_ok = !fp.materialized || fp.is_group;
  row.oracle.status = (fp.order == row.order && group_ok) ? OracleStatus::Match : OracleStatus::Mismatch;
  if (fp.order != row.order)
    row.oracle.note = "oracle order " + fp.order.str() + " differs from symbolic order " + row.order.str();
}

}  // namespace

CensusReport run_census(const CensusConfig& cfg) {
  const zip::ZipDatum d = make_datum(cfg);
  CensusReport rep;
  rep.config = cfg;
  rep.group_name = group_name(d.cox);
  rep.I = reflection_names(d.cox, d.I);

  const auto strata = zip::strata(d);
  rep.rows.resize(strata.size());

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(strata.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < strata.size();) {
      try {
        fill_row(d, strata[i], cfg.oracle, rep.rows[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const zip::ClosureOrder order = zip::closure_order(d);
  rep.closure = order.covers;
  rep.diagnostics = order.diagnostics;
  switch (order.source) {
    case zip::ClosureOrder::Source::CandidateRule: rep.closure_source = "candidate-rule"; break;
    case zip::ClosureOrder::Source::StoredDiagram: rep.closure_source = "stored-diagram"; break;
    case zip::ClosureOrder::Source::Omitted: rep.closure_source = "omitted"; break;
  }
  return rep;
}

// ---------------------------------------------------------------- rendering

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string set_text(const std::vector<std::string>& v) { return "{" + join(v, ", ") + "}"; }

std::string irreps_text(const StratumRow& r) {
  if (r.irreps) return r.irreps->str();
  return "= #conjugacy classes";
}

std::string oracle_text(const StratumRow& r) {
  switch (r.oracle.status) {
    case OracleStatus::NotRun: return "-";
    case OracleStatus::Match: return "match";
    case OracleStatus::Mismatch: return "MISMATCH";
    case OracleStatus::Skipped: return "skipped";
  }
  return "?";
}

nlohmann::ordered_json int_json(const Integer& x) {
  if (x >= 0 && x <= Integer(std::numeric_limits<std::uint64_t>::max())) return static_cast<std::uint64_t>(x);
  return x.str();
}

nlohmann::ordered_json atom_json(const stab::Atom& a) {
  nlohmann::ordered_json j;
  j["kind"] = a.kind_name();
  j["k"] = a.k;
  j["d"] = a.d;
  if (a.kind == stab::AtomKind::FullGroup) j["family"] = stab::family_name(a.family);
  j["text"] = a.to_string();
  return j;
}

nlohmann::ordered_json atoms_json(const std::vector<stab::Atom>& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& a : v) arr.push_back(atom_json(a));
  return arr;
}

}  // namespace

std::string render_table(const CensusReport& r) {
  std::ostringstream os;
  os << r.group_name << ", cocharacter " << r.config.cochar << ", I = " << set_text(r.I) << ", q = " << r.config.q
     << "\n\n";
  const std::vector<std::string> head{"w", "l(w)", "K_w", "Pi_w", "|Pi_w|", "irreps", "oracle"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : r.rows)
    cells.push_back({row.w_text, std::to_string(row.length), set_text(row.k_w), row.descriptor.to_string(),
                     row.order.str(), irreps_text(row), oracle_text(row)});
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s;
    for (std::size_t c = 0; c < line.size(); ++c) {
      s += line[c];
      if (c + 1 < line.size()) s += std::string(width[c] - line[c].size() + 2, ' ');
    }
    os << s << "\n";
  };
  emit(head);
  std::vector<std::string> rule;
  for (auto w : width) rule.push_back(std::string(w, '-'));
  emit(rule);
  for (const auto& line : cells) emit(line);
  os << "\n" << r.rows.size() << " strata";
  if (auto t = r.total_irreps())
    os << ", " << *t << " simple perverse sheaves";
  else
    os << ", simple perverse sheaf count partial";
  if (r.config.oracle) os << ", " << r.mismatches() << " mismatches, " << r.oracle_skipped() << " oracle-skipped";
  os << "\n";
  os << "closure (" << r.closure_source << "):";
  if (r.closure.empty()) os << " none";
  os << "\n";
  for (const auto& [hi, lo] : r.closure) os << "  " << r.rows[hi].w_text << " -> " << r.rows[lo].w_text << "\n";
  for (const auto& row : r.rows)
    if (!row.oracle.note.empty()) os << "note " << row.w_text << ": " << row.oracle.note << "\n";
  for (const auto& d : r.diagnostics) os << d << "\n";
  return os.str();
}

std::string render_json(const CensusReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["config"] = {{"family", r.config.family}, {"rank", r.config.rank}, {"cochar", r.config.cochar},
                 {"I", r.I},                  {"q", r.config.q},       {"oracle", r.config.oracle}};
  nlohmann::ordered_json strata = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json s;
    s["w"] = row.w_text;
    s["one_line"] = row.w.one_line();
    s["length"] = row.length;
    s["k_w"] = row.k_w;
    s["open"] = row.is_open;
    s["closed"] = row.is_closed;
    const stab::GroupDescriptor g = row.descriptor.canonical();
    nlohmann::ordered_json desc;
    desc["text"] = g.to_string();
    desc["factors"] = atoms_json(g.factors);
    if (g.extension)
      desc["extension"] = {{"kernel", atoms_json(g.extension->kernel)}, {"quotient", atom_json(g.extension->quotient)}};
    else
      desc["extension"] = nullptr;
    desc["abelian"] = g.is_abelian();
    desc["order_polynomial"] = g.order_polynomial().to_string();
    s["descriptor"] = desc;
    s["order"] = int_json(row.order);
    if (row.irreps)
      s["irreps"] = int_json(*row.irreps);
    else
      s["irreps"] = nullptr;
    s["irreps_source"] = row.irreps_source;
    nlohmann::ordered_json o;
    o["status"] = status_name(row.oracle.status);
    if (row.oracle.order)
      o["order"] = int_json(*row.oracle.order);
    else
      o["order"] = nullptr;
    o["field_degree"] = row.oracle.field_degree;
    o["candidates"] = row.oracle.candidates;
    o["note"] = row.oracle.note;
    s["oracle"] = o;
    strata.push_back(std::move(s));
  }
  j["strata"] = std::move(strata);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [hi, lo] : r.closure) edges.push_back({r.rows[hi].w_text, r.rows[lo].w_text});
  j["closure"] = std::move(edges);
  j["closure_source"] = r.closure_source;
  j["diagnostics"] = r.diagnostics;
  nlohmann::ordered_json totals;
  totals["strata"] = r.rows.size();
  if (auto t = r.total_irreps())
    totals["simple_perverse_sheaves"] = int_json(*t);
  else
    totals["simple_perverse_sheaves"] = nullptr;
  totals["complete"] = r.total_irreps().has_value();
  totals["mismatches"] = r.mismatches();
  totals["oracle_skipped"] = r.oracle_skipped();
  j["totals"] = std::move(totals);
  return j.dump(2) + "\n";
}

std::string render_dot(const CensusReport& r) {
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '"' || c == '\\') o += '\\';
      o += c;
    }
    return o;
  };
  std::ostringstream os;
  os << "digraph strata {\n  rankdir=TB;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    os << "  s" << i << " [label=\"" << esc(r.rows[i].w_text + " | " + r.rows[i].descriptor.to_string()) << "\"];\n";
  for (const auto& [hi, lo] : r.closure) os << "  s" << hi << " -> s" << lo << ";\n";
  os << "}\n";
  return os.str();
}

std::string render(const CensusReport& r, Format f) {
  switch (f) {
    case Format::Table: return render_table(r);
    case Format::Json: return render_json(r);
    case Format::Dot: return render_dot(r);
  }
  return {};
}

}  // namespace zipsheaf::census

#pragma once

// Per-class obstruction table for PSp4(F3): computation, output formats,
// module loading and comparison with the transcribed fixture.

#include "obstruct/burnside.hpp"
#include "obstruct/cohomology.hpp"
#include "obstruct/gmodule.hpp"
#include "obstruct/lattice.hpp"
#include "obstruct/symplectic.hpp"

#include "json.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace obstruct {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TableRow {
  std::size_t id = 0;
  std::size_t order = 0;
  Fingerprint fp;
  Integer burnside = 1;
  std::optional<Integer> lcm;  // needs the module
  std::optional<AbelianInvariants> h1_m, h1_mdual;
  bool irreducible = false;
  std::vector<std::size_t> maximal;

  /// True when an obstruction is nonzero; unknown when Burnside is trivial
  /// and no module was supplied.
  std::optional<bool> not_rational() const {
    if (burnside > 1) return true;
    if (lcm) return *lcm > 1;
    return std::nullopt;
  }
  /// Divides the degree of any rational cover.
  std::optional<Integer> cover_degree_bound() const { return lcm; }
};

// ---- modules ---------------------------------------------------------------

/// pi40 + pi45 - chi24 on the classes of G.
inline ClassFunction picard_character(const SymplecticModel& m) {
  const auto& g = m.group();
  return permutation_character(g, m.point_stabilizer(0)) +
         permutation_character(g, m.perp_pair_stabilizer(m.perp_pairs().front())) - m.chi24();
}

inline constexpr std::size_t kPicardRank = 61;

/// Unimodularity and relators always; the character identity for rank 61.
inline void validate_for_model(const GIntModule& mod, const SymplecticModel& m) {
  validate_module(mod, m.psp4());
  if (mod.rank() == kPicardRank) check_character(mod, m.group(), picard_character(m));
}

inline GIntModule load_module(const std::string& path, const SymplecticModel& m) {
  GIntModule mod = read_module_file(path);
  validate_for_model(mod, m);
  return mod;
}

// ---- computation -------------------------------------------------------------

struct TableOptions {
  std::size_t jobs = 1;
  LatticeOptions lattice;  // for the per-class lattices behind the Burnside test
};

namespace detail {

template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](std::size_t w) {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
    } catch (...) {
      errors[w] = std::current_exception();
      next = n;
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Burnside order of chi24 restricted to the class rep.
inline Integer class_burnside_order(const SymplecticModel& m, const SubgroupLattice& lat, std::size_t id,
                                    const LatticeOptions& opt = {}) {
  const auto& g = m.group();
  const auto& c = lat[id];
  FiniteGroup h(to_perm_group(g, c.rep));
  PermCharacterMatrix pm = c.order == g.order() ? perm_characters(h, lat) : perm_characters(h, opt);
  return burnside_order(h, pm, restrict_classfn(g, m.chi24(), h));
}

inline ClassCohomology class_cohomology(const SymplecticModel& m, const Subgroup& h, const GIntModule& mod,
                                        const GIntModule& mod_dual) {
  const auto& g = m.group();
  return {h1(restrict_module(mod, g, h)), h1(restrict_module(mod_dual, g, h))};
}

inline std::vector<TableRow> compute_table(const SymplecticModel& m, const SubgroupLattice& lat,
                                           const std::optional<GIntModule>& mod, const TableOptions& opt = {}) {
  std::vector<TableRow> rows(lat.size());
  std::vector<ClassCohomology> coh(lat.size());
  std::optional<GIntModule> mod_dual;
  if (mod) mod_dual = dual(*mod);
  detail::parallel_for(lat.size(), opt.jobs, [&](std::size_t id) {
    const auto& c = lat[id];
    TableRow r;
    r.id = id;
    r.order = c.order;
    r.fp = c.fp;
    r.maximal = c.maximal;
    r.irreducible = m.is_absolutely_irreducible(c.rep);
    r.burnside = class_burnside_order(m, lat, id, opt.lattice);
    if (mod) {
      coh[id] = class_cohomology(m, c.rep, *mod, *mod_dual);
      r.h1_m = coh[id].h1_m;
      r.h1_mdual = coh[id].h1_mdual;
    }
    rows[id] = std::move(r);
  });
  if (mod)
    for (auto& r : rows) r.lcm = lcm_obstruction(lat, r.id, coh);
  return rows;
}

// ---- output ----------------------------------------------------------------------

inline const std::vector<std::string>& table_columns() {
  static const std::vector<std::string> cols{"id",      "order",   "fingerprint", "burnside",  "lcm",
                                             "h1_m",    "h1_mdual", "irreducible", "maximal",   "not_rational",
                                             "cover_degree_bound"};
  return cols;
}

inline constexpr const char* kUnavailable = "NA";

namespace detail {

inline std::string join_ids(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline std::vector<std::string> row_cells(const TableRow& r) {
  auto opt_int = [](const std::optional<Integer>& x) { return x ? x->get_str() : std::string(kUnavailable); };
  auto opt_inv = [](const std::optional<AbelianInvariants>& x) { return x ? x->to_string() : std::string(kUnavailable); };
  auto verdict = r.not_rational();
  return {std::to_string(r.id),
          std::to_string(r.order),
          r.fp.to_string(),
          r.burnside.get_str(),
          opt_int(r.lcm),
          opt_inv(r.h1_m),
          opt_inv(r.h1_mdual),
          r.irreducible ? "yes" : "no",
          join_ids(r.maximal),
          verdict ? (*verdict ? "yes" : "no") : kUnavailable,
          opt_int(r.cover_degree_bound())};
}

}  // namespace detail

/// Header line then one line per row; every field is quoted only if it
/// contains a comma or quote (none of the current fields do).
inline void write_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  const auto& cols = table_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : rows) {
    auto cells = detail::row_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cell(cells[i]);
    out << "\n";
  }
}

inline void write_markdown(std::ostream& out, const std::vector<TableRow>& rows) {
  const auto& cols = table_columns();
  out << "|";
  for (const auto& c : cols) out << " " << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < cols.size(); ++i) out << " --- |";
  out << "\n";
  for (const auto& r : rows) {
    out << "|";
    for (const auto& c : detail::row_cells(r)) out << " " << c << " |";
    out << "\n";
  }
}

inline nlohmann::json table_to_json(const std::vector<TableRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["id"] = r.id;
    j["order"] = r.order;
    j["fingerprint"] = r.fp.to_string();
    j["burnside"] = r.burnside.get_str();
    j["lcm"] = r.lcm ? nlohmann::json(r.lcm->get_str()) : nlohmann::json(nullptr);
    j["h1_m"] = r.h1_m ? nlohmann::json(r.h1_m->to_string()) : nlohmann::json(nullptr);
    j["h1_mdual"] = r.h1_mdual ? nlohmann::json(r.h1_mdual->to_string()) : nlohmann::json(nullptr);
    j["irreducible"] = r.irreducible;
    j["maximal"] = r.maximal;
    auto v = r.not_rational();
    j["not_rational"] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    j["cover_degree_bound"] = r.lcm ? nlohmann::json(r.lcm->get_str()) : nlohmann::json(nullptr);
    arr.push_back(j);
  }
  return nlohmann::json{{"format", "obstruction-table"}, {"version", 1}, {"rows", arr}};
}

namespace detail {

inline Fingerprint parse_fingerprint(const std::string& s) {
  Fingerprint f;
  std::map<std::string, std::string> kv;
  std::istringstream in(s);
  for (std::string part; std::getline(in, part, ';');) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw PipelineError("bad fingerprint '" + s + "'");
    kv[part.substr(0, eq)] = part.substr(eq + 1);
  }
  try {
    f.order = std::stoul(kv.at("order"));
    f.abelianization = AbelianInvariants::parse(kv.at("ab"));
    f.exponent = std::stoul(kv.at("exp"));
    f.class_count = std::stoul(kv.at("classes"));
    f.derived_length = kv.at("dl") == "inf" ? -1 : std::stoi(kv.at("dl"));
    f.nilpotent = kv.at("nil") == "1";
  } catch (const std::exception&) {
    throw PipelineError("bad fingerprint '" + s + "'");
  }
  if (f.to_string() != s) throw PipelineError("non-canonical fingerprint '" + s + "'");
  return f;
}

}  // namespace detail

inline std::vector<TableRow> table_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "obstruction-table") throw PipelineError("table json: wrong format tag");
  std::vector<TableRow> rows;
  for (const auto& e : j.at("rows")) {
    TableRow r;
    r.id = e.at("id").get<std::size_t>();
    r.order = e.at("order").get<std::size_t>();
    r.fp = detail::parse_fingerprint(e.at("fingerprint").get<std::string>());
    r.burnside = Integer(e.at("burnside").get<std::string>());
    if (!e.at("lcm").is_null()) r.lcm = Integer(e.at("lcm").get<std::string>());
    if (!e.at("h1_m").is_null()) r.h1_m = AbelianInvariants::parse(e.at("h1_m").get<std::string>());
    if (!e.at("h1_mdual").is_null()) r.h1_mdual = AbelianInvariants::parse(e.at("h1_mdual").get<std::string>());
    r.irreducible = e.at("irreducible").get<bool>();
    r.maximal = e.at("maximal").get<std::vector<std::size_t>>();
    rows.push_back(std::move(r));
  }
  return rows;
}

enum class TableFormat { csv, json, markdown };

inline void write_table(std::ostream& out, const std::vector<TableRow>& rows, TableFormat f) {
  switch (f) {
    case TableFormat::csv:
      write_csv(out, rows);
      break;
    case TableFormat::markdown:
      write_markdown(out, rows);
      break;
    case TableFormat::json:
      out << table_to_json(rows).dump(2) << "\n";
      break;
  }
}

// ---- fixture -----------------------------------------------------------------------

struct FixtureRow {
  std::size_t row = 0;  // 1-based
  std::size_t order = 0;
  std::string label;
  Integer burnside = 1;
  Integer lcm = 1;
  bool irreducible = false;
  std::vector<std::size_t> maximal;  // 1-based rows
  AbelianInvariants h1_m, h1_mdual;
};

inline std::vector<FixtureRow> parse_fixture(std::istream& in) {
  std::vector<FixtureRow> rows;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() == 8) f.emplace_back();
    if (f.size() != 9) throw PipelineError("fixture line " + std::to_string(lineno) + ": expected 9 fields");
    try {
      FixtureRow r;
      r.row = std::stoul(f[0]);
      r.order = std::stoul(f[1]);
      r.label = f[2];
      r.burnside = Integer(f[3]);
      r.lcm = Integer(f[4]);
      if (f[5] != "yes" && f[5] != "no") throw PipelineError("irred must be yes or no");
      r.irreducible = f[5] == "yes";
      std::istringstream ms(f[6]);
      for (std::size_t x; ms >> x;) r.maximal.push_back(x);
      r.h1_m = AbelianInvariants::parse(f[7]);
      r.h1_mdual = AbelianInvariants::parse(f[8]);
      if (r.row != rows.size() + 1) throw PipelineError("rows out of sequence");
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw PipelineError("fixture line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& r : rows)
    for (std::size_t x : r.maximal)
      if (x == 0 || x >= r.row) throw PipelineError("fixture row " + std::to_string(r.row) + ": bad maximal index");
  return rows;
}

inline std::vector<FixtureRow> read_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PipelineError("cannot open fixture " + path);
  return parse_fixture(in);
}

// ---- matching -----------------------------------------------------------------------

/// Rows grouped by order refined by the keys of their maximal subgroups
/// until stable; each group pairs computed ids with fixture rows.
struct MatchGroup {
  std::vector<std::size_t> computed;  // class ids
  std::vector<std::size_t> fixture;   // 1-based rows
};

struct MatchReport {
  std::vector<MatchGroup> groups;
  std::vector<std::string> mismatches;
  bool structural_ok = true;
  std::map<std::string, bool> column_ok;

  bool ok() const {
    if (!structural_ok) return false;
    for (const auto& [k, v] : column_ok)
      if (!v) return false;
    return true;
  }
  std::size_t singletons() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.computed.size() == 1 && g.fixture.size() == 1;
    return n;
  }
};

namespace detail {

// colour refinement on the union of both row sets
inline std::vector<std::size_t> refine(const std::vector<std::size_t>& orders,
                                       const std::vector<std::vector<std::size_t>>& children) {
  const std::size_t n = orders.size();
  std::vector<std::size_t> color(n);
  {
    std::map<std::size_t, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) color[i] = ids.emplace(orders[i], ids.size()).first->second;
  }
  for (std::size_t distinct = 0;;) {
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> ch;
      for (std::size_t c : children[i]) ch.push_back(color[c]);
      std::sort(ch.begin(), ch.end());
      next[i] = ids.emplace(std::make_pair(color[i], ch), ids.size()).first->second;
    }
    color = std::move(next);
    if (ids.size() == distinct) break;
    distinct = ids.size();
  }
  return color;
}

}  // namespace detail

inline MatchReport compare_fixture(const std::vector<TableRow>& rows, const std::vector<FixtureRow>& fixture) {
  MatchReport rep;
  const std::size_t nc = rows.size();
  std::vector<std::size_t> orders;
  std::vector<std::vector<std::size_t>> children;
  for (const auto& r : rows) {
    orders.push_back(r.order);
    children.push_back(r.maximal);
  }
  for (const auto& f : fixture) {
    orders.push_back(f.order);
    std::vector<std::size_t> ch;
    for (std::size_t x : f.maximal) ch.push_back(nc + x - 1);
    children.push_back(ch);
  }
  auto color = detail::refine(orders, children);
  std::map<std::size_t, MatchGroup> by_color;
  for (std::size_t i = 0; i < nc; ++i) by_color[color[i]].computed.push_back(rows[i].id);
  for (std::size_t i = 0; i < fixture.size(); ++i) by_color[color[nc + i]].fixture.push_back(fixture[i].row);
  if (nc != fixture.size())
    rep.mismatches.push_back("row count: computed " + std::to_string(nc) + ", fixture " + std::to_string(fixture.size()));

  auto describe = [&](const MatchGroup& g) {
    std::ostringstream os;
    os << "computed {" << detail::join_ids(g.computed) << "} vs fixture rows {" << detail::join_ids(g.fixture) << "}";
    return os.str();
  };
  const bool with_module = !rows.empty() && rows.front().lcm.has_value();
  rep.column_ok = {{"burnside", true}, {"irreducible", true}};
  if (with_module) rep.column_ok.insert({{"lcm", true}, {"h1_m", true}, {"h1_mdual", true}});
  for (auto& [c, g] : by_color) {
    if (g.computed.size() != g.fixture.size()) {
      rep.structural_ok = false;
      rep.mismatches.push_back("structure: " + describe(g));
    } else {
      auto check = [&](const std::string& col, auto computed_value, auto fixture_value) {
        std::vector<std::string> a, b;
        for (std::size_t id : g.computed) a.push_back(computed_value(rows.at(id)));
        for (std::size_t r : g.fixture) b.push_back(fixture_value(fixture.at(r - 1)));
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
          rep.column_ok[col] = false;
          std::ostringstream os;
          os << col << ": " << describe(g) << ": computed [";
          for (std::size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a[i];
          os << "], fixture [";
          for (std::size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << b[i];
          os << "]";
          rep.mismatches.push_back(os.str());
        }
      };
      check("burnside", [](const TableRow& r) { return r.burnside.get_str(); },
            [](const FixtureRow& f) { return f.burnside.get_str(); });
      check("irreducible", [](const TableRow& r) { return std::string(r.irreducible ? "yes" : "no"); },
            [](const FixtureRow& f) { return std::string(f.irreducible ? "yes" : "no"); });
      if (with_module) {
        check("lcm", [](const TableRow& r) { return r.lcm->get_str(); }, [](const FixtureRow& f) { return f.lcm.get_str(); });
        check("h1_m", [](const TableRow& r) { return r.h1_m->to_string(); },
              [](const FixtureRow& f) { return f.h1_m.to_string(); });
        check("h1_mdual", [](const TableRow& r) { return r.h1_mdual->to_string(); },
              [](const FixtureRow& f) { return f.h1_mdual.to_string(); });
      }
    }
    rep.groups.push_back(std::move(g));
  }
  return rep;
}

}  // namespace obstruct

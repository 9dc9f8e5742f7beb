#include "obstruct/checks.hpp"
#include "obstruct/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace obstruct;

namespace {

constexpr int kFailed = 1;
constexpr int kError = 2;

struct Opts {
  std::optional<std::uint64_t> seed;
  std::string cache, lattice, module, out, fixture, format = "csv";
  std::size_t jobs = 1, class_id = 0;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("OBSTRUCTION_SEED")) {
    try {
      std::size_t used = 0;
      std::uint64_t s = std::stoull(env, &used);
      if (used == std::string(env).size()) return s;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("OBSTRUCTION_SEED is not an unsigned integer: ") + env);
  }
  return 1;
}

SubgroupLattice get_lattice(const SymplecticModel& m, const Opts& o) {
  if (o.lattice.empty()) {
    std::cerr << "computing subgroup lattice\n";
    return subgroup_classes(m.group(), {.seed = resolve_seed(o.seed)});
  }
  std::ifstream in(o.lattice);
  if (!in) throw std::runtime_error("cannot open lattice cache " + o.lattice);
  return lattice_from_json(m.group(), nlohmann::json::parse(in));
}

std::optional<GIntModule> get_module(const SymplecticModel& m, const Opts& o) {
  if (o.module.empty()) return std::nullopt;
  return load_module(o.module, m);
}

void print_checks(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    std::cout << (c.ok ? "ok    " : "FAIL  ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
}

int group_info() {
  SymplecticModel m;
  auto checks = group_checks(m);
  auto chars = character_checks(m);
  checks.insert(checks.end(), chars.begin(), chars.end());
  print_checks(checks);
  std::cout << "element classes: " << m.group().classes().size() << "\n";
  std::cout << "generators (row action; module files use this order):\n";
  for (std::size_t k = 0; k < m.generator_matrices().size(); ++k)
    std::cout << "  " << k << ": " << m.generator_matrices()[k] << "\n";
  return all_ok(checks) ? 0 : kFailed;
}

int lattice_compute(const Opts& o) {
  SymplecticModel m;
  const std::uint64_t seed = resolve_seed(o.seed);
  SubgroupLattice lat = subgroup_classes(m.group(), {.seed = seed});
  std::ofstream out(o.cache);
  if (!out) throw std::runtime_error("cannot write " + o.cache);
  out << lattice_to_json(m.group(), lat).dump(1) << "\n";
  if (!out) throw std::runtime_error("write failed: " + o.cache);
  std::cout << "seed " << seed << ": " << lat.size() << " classes, " << lat.total_subgroups() << " subgroups -> "
            << o.cache << "\n";
  return 0;
}

TableFormat parse_format(const std::string& s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  return TableFormat::markdown;
}

int table_compute(const Opts& o) {
  SymplecticModel m;
  auto mod = get_module(m, o);
  SubgroupLattice lat = get_lattice(m, o);
  auto rows = compute_table(m, lat, mod, {.jobs = o.jobs, .lattice = {}});
  if (o.out.empty() || o.out == "-") {
    write_table(std::cout, rows, parse_format(o.format));
  } else {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + o.out);
    write_table(out, rows, parse_format(o.format));
    if (!out) throw std::runtime_error("write failed: " + o.out);
  }
  return 0;
}

int table_check(const Opts& o) {
  SymplecticModel m;
  auto fixture = read_fixture(o.fixture);
  auto mod = get_module(m, o);
  SubgroupLattice lat = get_lattice(m, o);
  auto rows = compute_table(m, lat, mod, {.jobs = o.jobs, .lattice = {}});
  auto rep = compare_fixture(rows, fixture);
  std::cout << "rows: computed " << rows.size() << ", fixture " << fixture.size() << "\n";
  std::cout << "groups: " << rep.groups.size() << " (" << rep.singletons() << " singletons)\n";
  std::cout << (rep.structural_ok ? "ok    " : "FAIL  ") << "structure\n";
  for (const auto& [col, ok] : rep.column_ok) std::cout << (ok ? "ok    " : "FAIL  ") << col << "\n";
  if (!mod) std::cout << "skip  lcm, h1_m, h1_mdual (no module)\n";
  for (const auto& s : rep.mismatches) std::cout << "  " << s << "\n";
  return rep.ok() ? 0 : kFailed;
}

int module_verify(const Opts& o) {
  SymplecticModel m;
  GIntModule mod = read_module_file(o.module);
  std::cout << "rank " << mod.rank() << ", " << mod.generator_count() << " generators\n";
  try {
    validate_for_model(mod, m);
  } catch (const ModuleError& e) {
    std::cout << "FAIL  " << e.what() << "\n";
    return kFailed;
  }
  std::cout << "ok    unimodular, relators hold\n";
  if (mod.rank() == kPicardRank)
    std::cout << "ok    character = pi40 + pi45 - chi24\n";
  else
    std::cout << "skip  character identity (rank " << mod.rank() << " != " << kPicardRank << ")\n";
  return 0;
}

int cohomology_one(const Opts& o) {
  SymplecticModel m;
  GIntModule mod = load_module(o.module, m);
  SubgroupLattice lat = get_lattice(m, o);
  if (o.class_id >= lat.size()) throw std::invalid_argument("class id out of range");
  GIntModule md = dual(mod);
  std::vector<ClassCohomology> coh(lat.size());
  const auto& below = lat.classes_contained_in(o.class_id);
  detail::parallel_for(below.size(), o.jobs,
                       [&](std::size_t i) { coh[below[i]] = class_cohomology(m, lat[below[i]].rep, mod, md); });
  std::size_t witness = 0;
  Integer l = lcm_obstruction(lat, o.class_id, coh, &witness);
  const auto& c = lat[o.class_id];
  std::cout << "class " << c.id << "  order " << c.order << "  " << c.fp.to_string() << "\n";
  std::cout << "H1(H, M)      " << coh[c.id].h1_m.to_string() << "\n";
  std::cout << "H1(H, M dual) " << coh[c.id].h1_mdual.to_string() << "\n";
  std::cout << "lcm over subgroups " << l.get_str();
  if (l > 1) std::cout << "  (witness class " << witness << ")";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rationality obstructions for subgroups of PSp4(F3)"};
  app.require_subcommand(1);
  Opts o;
  int rc = 0;

  auto* group = app.add_subcommand("group", "group construction");
  group->require_subcommand(1);
  group->add_subcommand("info", "orders, actions, chi24 and generators")->callback([&] { rc = group_info(); });

  auto* lattice = app.add_subcommand("lattice", "subgroup lattice");
  lattice->require_subcommand(1);
  auto* lc = lattice->add_subcommand("compute", "compute all conjugacy classes and write the cache");
  lc->add_option("--cache", o.cache, "output JSON path")->required();
  lc->add_option("--seed", o.seed, "search order seed (default: $OBSTRUCTION_SEED or 1)");
  lc->callback([&] { rc = lattice_compute(o); });

  auto* table = app.add_subcommand("table", "obstruction table");
  table->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--lattice", o.lattice, "lattice cache (computed when absent)")->check(CLI::ExistingFile);
    c->add_option("--module", o.module, "rank-61 module file")->check(CLI::ExistingFile);
    c->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "seed when the lattice is computed");
  };
  auto* tc = table->add_subcommand("compute", "compute and emit the table");
  add_common(tc);
  tc->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json", "markdown"}));
  tc->add_option("--out", o.out, "output path (stdout when absent)");
  tc->callback([&] { rc = table_compute(o); });
  auto* tk = table->add_subcommand("check", "compare the computed table with a fixture");
  add_common(tk);
  tk->add_option("--fixture", o.fixture)->required()->check(CLI::ExistingFile);
  tk->callback([&] { rc = table_check(o); });

  auto* module = app.add_subcommand("module", "module files");
  module->require_subcommand(1);
  auto* mv = module->add_subcommand("verify", "unimodularity, relators and character");
  mv->add_option("--module", o.module)->required()->check(CLI::ExistingFile);
  mv->callback([&] { rc = module_verify(o); });

  auto* cohomology = app.add_subcommand("cohomology", "single-class cohomology");
  cohomology->require_subcommand(1);
  auto* co = cohomology->add_subcommand("one", "H1 of M and M dual for one class");
  co->add_option("--class", o.class_id)->required();
  co->add_option("--module", o.module)->required()->check(CLI::ExistingFile);
  co->add_option("--lattice", o.lattice)->check(CLI::ExistingFile);
  co->add_option("--jobs", o.jobs)->check(CLI::PositiveNumber);
  co->add_option("--seed", o.seed);
  co->callback([&] { rc = cohomology_one(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return rc;
}

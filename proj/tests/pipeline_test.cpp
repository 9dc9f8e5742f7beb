#include "obstruct/pipeline.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

using namespace obstruct;
using namespace obstruct::testing;

namespace {

const std::vector<TableRow>& plain_table() {
  static const std::vector<TableRow> rows = compute_table(model(), lattice(), std::nullopt, {.jobs = 2, .lattice = {}});
  return rows;
}

const std::vector<TableRow>& surrogate_table() {
  static const std::vector<TableRow> rows =
      compute_table(model(), lattice(), surrogate_picard_module(model()), {.jobs = 4, .lattice = {}});
  return rows;
}

const std::vector<FixtureRow>& fixture() {
  static const std::vector<FixtureRow> f = read_fixture(OBSTRUCT_DATA_DIR "/fixture.csv");
  return f;
}

std::string csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

std::vector<FixtureRow> fixture_from(const std::vector<TableRow>& rows) {
  std::vector<FixtureRow> out;
  for (const auto& r : rows) {
    FixtureRow f;
    f.row = r.id + 1;
    f.order = r.order;
    f.burnside = r.burnside;
    f.lcm = r.lcm.value_or(1);
    f.irreducible = r.irreducible;
    for (std::size_t m : r.maximal) f.maximal.push_back(m + 1);
    if (r.h1_m) f.h1_m = *r.h1_m;
    if (r.h1_mdual) f.h1_mdual = *r.h1_mdual;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TEST(Emit, EmptyIsHeaderOnly) {
  std::string s = csv({});
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1);
  EXPECT_EQ(s.rfind("id,order,fingerprint,burnside,", 0), 0u);
}

TEST(Emit, OneLinePerClass) {
  std::string s = csv(plain_table());
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 117);
  std::ostringstream md;
  write_markdown(md, plain_table());
  std::string m = md.str();
  EXPECT_EQ(std::count(m.begin(), m.end(), '\n'), 118);
}

TEST(Emit, UnavailableColumnsWithoutModule) {
  for (const auto& r : plain_table()) {
    EXPECT_FALSE(r.lcm.has_value());
    EXPECT_FALSE(r.h1_m.has_value());
  }
  std::istringstream in(csv(plain_table()));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_NE(line.find(",NA,NA,NA,"), std::string::npos) << line;
}

TEST(Emit, JsonRoundTrip) {
  for (const auto* rows : {&plain_table(), &surrogate_table()}) {
    auto j = table_to_json(*rows);
    auto back = table_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(csv(back), csv(*rows));
    EXPECT_EQ(table_to_json(back), j);
  }
  EXPECT_THROW(table_from_json(nlohmann::json{{"format", "other"}}), PipelineError);
  auto j = table_to_json(plain_table());
  j["rows"][3]["fingerprint"] = "order=2;ab=Z/2";
  EXPECT_THROW(table_from_json(j), PipelineError);
}

TEST(Emit, IndependentOfJobCount) {
  auto one = compute_table(model(), lattice(), std::nullopt, {.jobs = 1, .lattice = {}});
  EXPECT_EQ(csv(one), csv(plain_table()));
  auto many = compute_table(model(), lattice(), std::nullopt, {.jobs = 7, .lattice = {}});
  EXPECT_EQ(csv(many), csv(plain_table()));
}

TEST(Verdict, Basics) {
  TableRow r;
  EXPECT_FALSE(r.not_rational().has_value());
  r.lcm = 1;
  EXPECT_EQ(r.not_rational(), false);
  r.lcm = 3;
  EXPECT_EQ(r.not_rational(), true);
  EXPECT_EQ(r.cover_degree_bound(), Integer(3));
  r.lcm = 1;
  r.burnside = 2;
  EXPECT_EQ(r.not_rational(), true);

  const auto& rows = plain_table();
  EXPECT_FALSE(rows.front().not_rational().has_value());
  EXPECT_EQ(rows.back().order, 25920u);
  EXPECT_EQ(rows.back().not_rational(), true);
}

TEST(Fixture, Parses) {
  const auto& f = fixture();
  ASSERT_EQ(f.size(), 116u);
  std::set<std::size_t> b2;
  std::size_t yes = 0;
  for (const auto& r : f) {
    if (r.burnside > 1) b2.insert(r.row);
    yes += r.irreducible;
  }
  EXPECT_EQ(b2, (std::set<std::size_t>{89, 101, 104, 110, 111, 114, 116}));
  EXPECT_EQ(yes, 21u);
  EXPECT_EQ(f.back().lcm, Integer(6));
  EXPECT_EQ(f[5].h1_m.to_string(), "Z/3");
  EXPECT_EQ(f[5].h1_mdual.to_string(), "Z/3");
  std::size_t verdict_false = 0;
  for (const auto& r : f) verdict_false += r.burnside == 1 && r.lcm == 1;
  EXPECT_EQ(verdict_false, 27u);
}

TEST(Fixture, RejectsMalformed) {
  const std::string head = "row,order,small_group,burnside,lcm,irred,maximal,h1_m,h1_mdual\n";
  auto parse = [&](const std::string& body) {
    std::istringstream in(head + body);
    return parse_fixture(in);
  };
  EXPECT_EQ(parse("1,1,x,1,1,no,,0,0\n2,2,x,1,1,no,1,0,0\n").size(), 2u);
  EXPECT_THROW(parse("1,1,x,1,1,maybe,,0,0\n"), PipelineError);
  EXPECT_THROW(parse("2,1,x,1,1,no,,0,0\n"), PipelineError);
  EXPECT_THROW(parse("1,1,x,1,1,no,1,0,0\n"), PipelineError);
  EXPECT_THROW(parse("1,1,x,1,1,no\n"), PipelineError);
  EXPECT_THROW(parse("1,1,x,1,1,no,,Z/,0\n"), PipelineError);
}

TEST(Matching, SelfFixtureMatchesUnderRelabelling) {
  const auto& rows = surrogate_table();
  auto f = fixture_from(rows);
  auto rep = compare_fixture(rows, f);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.mismatches.empty());
  EXPECT_EQ(rep.column_ok.size(), 5u);

  // reverse the row numbering within blocks of equal order
  std::vector<std::size_t> perm(rows.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].order == rows[i].order) ++j;
    std::reverse(perm.begin() + i, perm.begin() + j);
    i = j;
  }
  std::vector<FixtureRow> shuffled(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    FixtureRow r = f[i];
    r.row = perm[i] + 1;
    for (auto& m : r.maximal) m = perm[m - 1] + 1;
    shuffled[perm[i]] = r;
  }
  EXPECT_TRUE(compare_fixture(rows, shuffled).ok());

  f[40].irreducible = !f[40].irreducible;
  auto bad = compare_fixture(rows, f);
  EXPECT_TRUE(bad.structural_ok);
  EXPECT_FALSE(bad.column_ok.at("irreducible"));
  EXPECT_FALSE(bad.ok());

  f = fixture_from(rows);
  f[50].maximal.pop_back();
  EXPECT_FALSE(compare_fixture(rows, f).structural_ok);
}

TEST(Matching, TranscribedFixtureIsStructurallyConsistent) {
  auto rep = compare_fixture(plain_table(), fixture());
  EXPECT_TRUE(rep.structural_ok);
  EXPECT_EQ(rep.column_ok.count("lcm"), 0u);
  std::size_t c = 0, f = 0;
  for (const auto& g : rep.groups) {
    c += g.computed.size();
    f += g.fixture.size();
  }
  EXPECT_EQ(c, 116u);
  EXPECT_EQ(f, 116u);
}

TEST(Validator, SurrogatePasses) {
  GIntModule s = surrogate_picard_module(model());
  ASSERT_EQ(s.rank(), kPicardRank);
  EXPECT_NO_THROW(validate_for_model(s, model()));
  EXPECT_EQ(character(s, model().group()), picard_character(model()));
  EXPECT_EQ(h0(s), 2u);
}

TEST(Validator, WrongCharacterNamesClass) {
  const auto& m = model();
  GIntModule wrong = direct_sum(perm_module(m.psp4()), trivial_module(m.psp4().generators().size(), 21));
  ASSERT_EQ(wrong.rank(), kPicardRank);
  try {
    validate_for_model(wrong, m);
    FAIL() << "accepted a module with the wrong character";
  } catch (const ModuleError& e) {
    EXPECT_NE(std::string(e.what()).find("class"), std::string::npos) << e.what();
  }
  // other ranks skip the character identity
  EXPECT_NO_THROW(validate_for_model(perm_module(m.psp4()), m));
}

TEST(SurrogateTable, Invariants) {
  const auto& rows = surrogate_table();
  const auto& lat = lattice();
  ASSERT_EQ(rows.size(), 116u);
  EXPECT_EQ(rows.front().lcm, Integer(1));
  EXPECT_EQ(rows.front().not_rational(), false);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.lcm && r.h1_m && r.h1_mdual);
    for (const auto* inv : {&*r.h1_m, &*r.h1_mdual}) {
      EXPECT_EQ(inv->free_rank, 0u);
      EXPECT_EQ(Integer(r.order) % exponent(*inv), 0) << r.id;
    }
    for (std::size_t m : r.maximal) {
      EXPECT_LT(m, r.id);
      EXPECT_LT(rows[m].order, r.order);
    }
    // lcm along containment
    for (std::size_t p : lat.classes_contained_in(r.id)) {
      EXPECT_EQ(*r.lcm % *rows[p].lcm, 0) << p << " in " << r.id;
      if (*rows[p].lcm > 1) {
        EXPECT_EQ(r.not_rational(), true);
      }
    }
  }
}

TEST(Irreducibility, MatchesEnvelopingAlgebraOracle) {
  // absolutely irreducible iff the lifted matrices span all of M4(F3);
  // the span is grown as an algebra from the generators
  const auto& m = model();
  auto add = [](std::vector<std::array<int, 16>>& basis, const F3Matrix& x) {
    std::array<int, 16> v{};
    for (int i = 0; i < 16; ++i) v[i] = x(i / 4, i % 4);
    for (const auto& b : basis) {
      int p = 0;
      while (b[p] == 0) ++p;
      if (v[p] == 0) continue;
      const int c = v[p];  // b[p] == 1
      for (int i = 0; i < 16; ++i) v[i] = ((v[i] - c * b[i]) % 3 + 3) % 3;
    }
    int p = 0;
    while (p < 16 && v[p] == 0) ++p;
    if (p == 16) return false;
    const int inv = v[p];  // 1 and 2 are self-inverse mod 3
    for (auto& x : v) x = x * inv % 3;
    basis.push_back(v);
    return true;
  };
  std::size_t yes = 0;
  for (std::size_t id = 0; id < lattice().size(); ++id) {
    auto gens = m.lift_to_sp(lattice()[id].rep).generators;
    std::vector<std::array<int, 16>> basis;
    std::vector<F3Matrix> elems{F3Matrix::identity()};
    add(basis, elems[0]);
    for (std::size_t k = 0; k < elems.size() && basis.size() < 16; ++k)
      for (const auto& g : gens) {
        F3Matrix y = elems[k] * g;
        if (add(basis, y)) elems.push_back(y);
      }
    const bool oracle = basis.size() == 16;
    EXPECT_EQ(plain_table()[id].irreducible, oracle) << id;
    yes += oracle;
  }
  EXPECT_EQ(yes, 21u);
}

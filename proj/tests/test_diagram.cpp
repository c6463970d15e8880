#include <random>
#include <set>

#include "doctest.h"
#include "mmp/diagram.hpp"
#include "test_support.hpp"

using namespace mmp;

namespace {

std::size_t error_offset(std::string_view line) {
  try {
    parse_mmp(line);
  } catch (const MmpParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for ", line);
  return 0;
}

// Oracle: condition ids violated, computed straight from the definitions.
std::set<int> violated(const MmpDiagram& d) {
  std::set<int> out;
  std::vector<int> cover(static_cast<std::size_t>(d.vertex_count()), 0);
  for (const Block& b : d.blocks())
    for (Vertex v : b) cover[static_cast<std::size_t>(v)] = 1;
  for (int c : cover)
    if (!c) out.insert(1);
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    if (d.vertex_count() >= 2 && d.block(i).size() < 2) out.insert(2);
    for (std::size_t j = 0; j < d.block_count(); ++j) {
      if (i == j) continue;
      bool meet = false;
      for (Vertex v : d.block(i)) meet = meet || std::count(d.block(j).begin(), d.block(j).end(), v) > 0;
      if (meet && d.block(i).size() < 3) out.insert(3);
      std::set<Vertex> a(d.block(i).begin(), d.block(i).end()), b(d.block(j).begin(), d.block(j).end());
      if (a == b) out.insert(0);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("parse: printed diagrams") {
  const MmpDiagram d = parse_mmp(fixtures::kSevenFive);
  CHECK(d.vertex_count() == 7);
  CHECK(d.block_count() == 5);
  for (const Block& b : d.blocks()) CHECK(b.size() == 3);
  CHECK(d.block(1) == Block{2, 3, 4});

  const MmpDiagram one = parse_mmp("abc.");
  CHECK(one.vertex_count() == 3);
  CHECK(one.block_count() == 1);

  const MmpDiagram c = parse_mmp(fixtures::kCabello);
  CHECK(c.vertex_count() == 18);
  CHECK(c.block_count() == 9);
  for (const Block& b : c.blocks()) CHECK(b.size() == 4);
}

TEST_CASE("parse: vertices numbered by first appearance") {
  const MmpDiagram d = parse_mmp("zyx,xwv.");
  CHECK(d.block(0) == Block{0, 1, 2});
  CHECK(d.block(1) == Block{2, 3, 4});
  CHECK(d.label(0) == "z");
  CHECK(d.vertex_of("w") == 3);
  CHECK_FALSE(d.vertex_of("a").has_value());
}

TEST_CASE("parse: errors carry byte offsets") {
  CHECK(error_offset("abc,,cd.") == 4);
  CHECK(error_offset("aba.") == 2);
  CHECK(error_offset("ab$c.") == 2);
  CHECK(error_offset("abc") == 3);
  CHECK(error_offset("abc. x") == 5);
  CHECK(error_offset(".") == 0);
  CHECK(error_offset("1 2,0 3.") == 4);
}

TEST_CASE("parse: trailing whitespace and newline are accepted") {
  CHECK(parse_mmp("abc.  \n").block_count() == 1);
  CHECK(parse_mmp("abc.\r\n").vertex_count() == 3);
}

TEST_CASE("parse: numeric dialect") {
  const MmpDiagram n = parse_mmp("1 2 3,3 4 5.");
  CHECK(n == parse_mmp("abc,cde."));
  CHECK(n.label(3) == "4");
  CHECK(parse_mmp("10 20 30.", MmpFormat::Numeric).vertex_count() == 3);
}

TEST_CASE("comment and blank lines") {
  CHECK(is_comment_or_blank("# note"));
  CHECK(is_comment_or_blank("   "));
  CHECK(is_comment_or_blank(""));
  CHECK_FALSE(is_comment_or_blank("abc."));
}

TEST_CASE("serialize: printed forms") {
  CHECK(serialize_mmp(parse_mmp(fixtures::kSevenFive)) == fixtures::kSevenFive);
  CHECK(serialize_mmp(parse_mmp("abc.")) == "abc.");
  CHECK(serialize_mmp(parse_mmp("xyz,zuv.")) == "abc,cde.");
  CHECK(serialize_mmp(parse_mmp("abc,cde."), MmpFormat::Numeric) == "1 2 3,3 4 5.");
}

TEST_CASE("serialize: alphabet order and numeric fallback") {
  CHECK(kLabelAlphabet.size() == 62);
  CHECK(default_label(26, 62) == "A");
  CHECK(default_label(61, 62) == "0");
  CHECK(default_label(62, 63) == "63");

  std::vector<Block> blocks;
  for (int i = 0; i + 2 < 63; i += 2) blocks.push_back({i, i + 1, i + 2});
  const MmpDiagram big(63, blocks);
  const std::string text = serialize_mmp(big);
  CHECK(text.find(' ') != std::string::npos);
  CHECK(text.rfind("61 62 63.") == text.size() - 9);
  CHECK(parse_mmp(text) == big);

  std::vector<Block> b62(blocks.begin(), blocks.end() - 1);
  b62.push_back({58, 59, 60, 61});
  const MmpDiagram full(62, b62);
  CHECK(serialize_mmp(full).find(' ') == std::string::npos);
  CHECK(parse_mmp(serialize_mmp(full)) == full);
}

TEST_CASE("property: parse(serialize(d)) equals d renumbered by first appearance") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const MmpDiagram d = oracle::random_valid(rng, 62, 25, 2, 5);
    const MmpDiagram scrambled = oracle::scramble(d, rng);
    const MmpDiagram back = parse_mmp(serialize_mmp(scrambled));
    CHECK(back == oracle::compact(scrambled.vertex_count(), scrambled.blocks()));
    CHECK(oracle::sorted_blocks(parse_mmp(serialize_mmp(d, MmpFormat::Numeric))) ==
          oracle::sorted_blocks(oracle::compact(d.vertex_count(), d.blocks())));
  }
}

TEST_CASE("constructor rejects malformed index data") {
  CHECK_THROWS_AS(MmpDiagram(2, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(MmpDiagram(3, {{0, 1, 1}}), std::invalid_argument);
  CHECK_NOTHROW(MmpDiagram(4, {{0, 1, 2}}));  // uncovered vertex is a validation matter
}

TEST_CASE("with_block and without_block") {
  const MmpDiagram d = parse_mmp("abc.");
  const MmpDiagram e = d.with_block({2, 3, 4});
  CHECK(e == parse_mmp("abc,cde."));
  CHECK(e.without_block(0) == parse_mmp("abc."));
  CHECK(e.without_block(0).label(0) == "c");
  CHECK(e.without_block(1) == d);
}

TEST_CASE("validate: examples") {
  CHECK(validate(parse_mmp("abc,cde.")).passed);
  CHECK(validate(parse_mmp(fixtures::kSevenFive)).passed);
  CHECK(validate(parse_mmp(fixtures::kCabello)).passed);

  const ValidationReport r = validate(parse_mmp("ab,bc."));
  CHECK_FALSE(r.passed);
  REQUIRE(r.violations.size() == 2);
  for (const auto& v : r.violations) {
    CHECK(v.kind == ViolationKind::SmallIntersectingBlock);
    CHECK(condition_id(v.kind) == 3);
  }
  CHECK(r.violations[0].blocks == std::vector<std::size_t>{0});
  CHECK(r.violations[1].blocks == std::vector<std::size_t>{1});
}

TEST_CASE("validate: condition 1 and 2 witnesses") {
  const ValidationReport r1 = validate(MmpDiagram(4, {{0, 1, 2}}));
  REQUIRE(r1.violations.size() == 1);
  CHECK(condition_id(r1.violations[0].kind) == 1);
  CHECK(r1.violations[0].vertices == std::vector<Vertex>{3});

  const ValidationReport r2 = validate(parse_mmp("a,bc."));
  REQUIRE(r2.violations.size() == 1);
  CHECK(condition_id(r2.violations[0].kind) == 2);
  CHECK(r2.violations[0].blocks == std::vector<std::size_t>{0});

  // A lone vertex is fine: the size condition needs two vertices.
  CHECK(validate(parse_mmp("a.")).passed);
}

TEST_CASE("validate: duplicate blocks are rejected") {
  const ValidationReport r = validate(parse_mmp("abc,bca."));
  CHECK_FALSE(r.passed);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == ViolationKind::DuplicateBlock);
}

TEST_CASE("validate: strict warnings never fail validation") {
  ValidationOptions strict{true};
  const ValidationReport shared = validate(parse_mmp("abc,bcd."), strict);
  CHECK(shared.passed);
  REQUIRE(shared.warnings.size() == 1);
  CHECK(shared.warnings[0].kind == WarningKind::LargeIntersection);

  const ValidationReport triangle = validate(parse_mmp("abc,cde,efa."), strict);
  CHECK(triangle.passed);
  REQUIRE(triangle.warnings.size() == 1);
  CHECK(triangle.warnings[0].kind == WarningKind::ShortLoop);

  const ValidationReport square = validate(parse_mmp("abc,cde,efg,gha."), strict);
  REQUIRE(square.warnings.size() == 1);
  CHECK(square.warnings[0].blocks.size() == 4);

  CHECK(validate(parse_mmp("abc,cde,efg,ghi,ija."), strict).warnings.empty());
  CHECK(validate(parse_mmp("abc,cde,efa.")).warnings.empty());
}

TEST_CASE("property: validate agrees with a direct reading of the conditions") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 7)(rng);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<Block> blocks;
    for (int i = 0; i < k; ++i) {
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      const int s = std::uniform_int_distribution<int>(1, std::min(n, 4))(rng);
      blocks.emplace_back(all.begin(), all.begin() + s);
    }
    const MmpDiagram d(n, blocks);
    const ValidationReport r = validate(d);
    std::set<int> got;
    for (const auto& v : r.violations) got.insert(condition_id(v.kind));
    CHECK(got == violated(d));
    CHECK(r.passed == r.violations.empty());
  }
}

TEST_CASE("is_connected") {
  CHECK(is_connected(parse_mmp("abc,cde.")));
  CHECK_FALSE(is_connected(parse_mmp("abc,def.")));
  CHECK(is_connected(MmpDiagram()));
}

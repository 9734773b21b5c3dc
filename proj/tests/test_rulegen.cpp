#include <doctest.h>

#include <random>

#include "coverdx/rulegen.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace coverdx;
using coverdx::testing::kb3;
namespace oracle = coverdx::testing::oracle;

TEST_CASE("discriminating_sets") {
  const auto kb = kb3();
  CHECK(discriminating_sets(kb, "f1", 3) == std::vector<SymptomSet>{{"s1"}});
  CHECK(discriminating_sets(kb, "f2", 3) == std::vector<SymptomSet>{{"s3"}});
  CHECK(discriminating_sets(kb, "f3", 3) == std::vector<SymptomSet>{{"s4"}});
  for (const auto& f : kb.fault_ids()) {
    CHECK(discriminating_sets(kb, f, 3) == oracle::discriminating_by_enumeration(kb, f, 3));
  }
  CHECK_THROWS_AS(discriminating_sets(kb, "f9", 3), UnknownIdError);

  // g's effects are a subset of f's: g has no discriminating set.
  const KnowledgeBase nested({}, {{"f", "", 0.1, {}}, {"g", "", 0.1, {}}},
                             {{"a", "", "", 1, {}}, {"b", "", "", 1, {}}},
                             {{"f", "a", 0.5, {}}, {"f", "b", 0.5, {}}, {"g", "a", 0.5, {}}});
  CHECK(discriminating_sets(nested, "g", 3).empty());
  CHECK(discriminating_sets(nested, "f", 3) == std::vector<SymptomSet>{{"b"}});
}

TEST_CASE("generate_rules") {
  const auto result = generate_rules(kb3(), 1);
  REQUIRE(result.rules.size() == 3);
  CHECK(result.rules[0] == DeductiveRule{{"s1"}, "f1", 1.0});
  CHECK(result.rules[1] == DeductiveRule{{"s3"}, "f2", 1.0});
  CHECK(result.rules[2] == DeductiveRule{{"s4"}, "f3", 1.0});
  CHECK(result.undiscriminated.empty());

  const KnowledgeBase one({}, {{"f", "", 0.2, {}}}, {{"s", "", "", 1, {}}}, {{"f", "s", 0.4, {}}});
  const auto single = generate_rules(one);
  REQUIRE(single.rules.size() == 1);
  CHECK(single.rules[0].confidence == doctest::Approx(1.0));

  CHECK(generate_rules(KnowledgeBase{}).rules.empty());

  // Two faults with identical effects are reported, not ruled.
  const KnowledgeBase twins({}, {{"a", "", 0.1, {}}, {"b", "", 0.1, {}}}, {{"s", "", "", 1, {}}},
                            {{"a", "s", 0.5, {}}, {"b", "s", 0.5, {}}});
  const auto none = generate_rules(twins);
  CHECK(none.rules.empty());
  CHECK(none.undiscriminated == std::vector<std::string>{"a", "b"});
}

TEST_CASE("verify_rules") {
  const auto kb = kb3();
  CHECK(verify_rules(kb, generate_rules(kb).rules).empty());
  const auto bad = verify_rules(kb, {{{"s2"}, "f1", 0.5}});
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].message.find("f2") != std::string::npos);
  CHECK(verify_rules(kb, {}).empty());
  CHECK(verify_rules(kb, {{{}, "f1", 0.5}}).size() == 1);
  CHECK(verify_rules(kb, {{{"s4"}, "f1", 0.5}}).size() == 2);  // not an effect of f1; f3 explains it
  CHECK(verify_rules(kb, {{{"s1"}, "f9", 0.5}}).size() == 1);
}

TEST_CASE("rule export round trip") {
  const auto rules = generate_rules(kb3()).rules;
  CHECK(rules_from_json(to_json(rules)) == rules);
  CHECK_THROWS_AS(rules_from_json(nlohmann::json::object()), ParseError);
}

TEST_CASE("property: rules are sound, minimal and complete at the bound") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const auto kb = coverdx::testing::random_kb(rng);
    const std::size_t bound = 1 + trial % 3;
    const auto result = generate_rules(kb, bound);
    CHECK(verify_rules(kb, result.rules).empty());
    for (const auto& f : kb.fault_ids()) {
      CHECK(discriminating_sets(kb, f, bound) == oracle::discriminating_by_enumeration(kb, f, bound));
    }
    for (const auto& rule : result.rules) {
      CHECK(rule.confidence >= 0.0);
      CHECK(rule.confidence <= 1.0);
      for (const auto& s : rule.antecedent) {
        auto smaller = rule.antecedent;
        smaller.erase(s);
        if (smaller.empty()) continue;
        CHECK_FALSE(verify_rules(kb, {{smaller, rule.consequent, 1.0}}).empty());
      }
    }
  }
}

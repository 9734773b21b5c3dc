#include <doctest.h>

#include <random>
#include <sstream>

#include "coverdx/kb_io.hpp"
#include "support/fixtures.hpp"

using namespace coverdx;
using coverdx::testing::kb3;
using nlohmann::json;

namespace {

json kb3_doc() { return serialize_kb(kb3()); }

KnowledgeBase load_text(const std::string& text, LoadOptions options = {}) {
  std::istringstream in(text);
  return load_kb(in, options);
}

std::vector<Violation> load_errors(const json& doc) {
  try {
    load_kb_document(doc);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<Violation>& vs, const std::string& text) {
  for (const auto& v : vs) {
    if (v.message.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("load_kb reads the fixture document") {
  const auto kb = load_kb_file(COVERDX_FIXTURE_DIR "/kb3.json");
  CHECK(kb.faults().size() == 3);
  CHECK(kb.symptoms().size() == 4);
  CHECK(kb.links().size() == 5);
  CHECK(kb.fault("f3").prior == 0.05);
  CHECK(kb == kb3());
}

TEST_CASE("load_kb rejects invalid documents") {
  SUBCASE("link to unknown fault names the id") {
    auto doc = kb3_doc();
    doc["links"].push_back({{"fault", "f9"}, {"symptom", "s1"}, {"causal_strength", 0.5}});
    const auto errors = load_errors(doc);
    REQUIRE(has_errors(errors));
    CHECK(mentions(errors, "f9"));
  }
  SUBCASE("strength above one") {
    auto doc = kb3_doc();
    doc["links"][0]["causal_strength"] = 1.3;
    CHECK(mentions(load_errors(doc), "strength out of range"));
  }
  SUBCASE("zero strength") {
    auto doc = kb3_doc();
    doc["links"][0]["causal_strength"] = 0.0;
    CHECK(mentions(load_errors(doc), "strength out of range"));
  }
  SUBCASE("duplicate link and fault") {
    auto doc = kb3_doc();
    doc["links"].push_back(doc["links"][0]);
    doc["faults"].push_back(doc["faults"][0]);
    const auto errors = load_errors(doc);
    CHECK(mentions(errors, "duplicate link"));
    CHECK(mentions(errors, "duplicate fault id"));
  }
  SUBCASE("prior and cost ranges") {
    auto doc = kb3_doc();
    doc["faults"][0]["prior"] = -0.1;
    doc["symptoms"][0]["cost"] = -1;
    const auto errors = load_errors(doc);
    CHECK(mentions(errors, "prior out of range"));
    CHECK(mentions(errors, "cost out of range"));
  }
  SUBCASE("malformed JSON") {
    CHECK_THROWS_AS(load_text("{\"faults\": ["), ParseError);
  }
  SUBCASE("wrong field type") {
    auto doc = kb3_doc();
    doc["faults"][0]["prior"] = "high";
    CHECK_THROWS_AS(load_kb_document(doc), ParseError);
  }
}

TEST_CASE("unknown keys: strict rejects, lenient warns") {
  auto doc = kb3_doc();
  doc["faults"][0]["colour"] = "red";
  CHECK_THROWS_AS(load_kb_document(doc), ParseError);
  const auto loaded = load_kb_document(doc, {true});
  CHECK(mentions(loaded.warnings, "colour"));
}

TEST_CASE("missing prior defaults to 0.05 with a warning") {
  auto doc = kb3_doc();
  doc["faults"][0].erase("prior");
  const auto loaded = load_kb_document(doc);
  CHECK(loaded.kb.fault("f1").prior == kDefaultPrior);
  CHECK(mentions(loaded.warnings, "defaulted"));
}

TEST_CASE("validate_kb") {
  SUBCASE("fixture is clean") { CHECK(validate_kb(kb3()).empty()); }

  SUBCASE("orphan symptom is a single warning") {
    auto symptoms = kb3().symptoms();
    symptoms.push_back({"s5", "", "", 1.0, {}});
    const KnowledgeBase kb({}, kb3().faults(), symptoms, kb3().links());
    const auto vs = validate_kb(kb);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].severity == Severity::Warning);
    CHECK(vs[0].message == "orphan symptom s5");
  }

  SUBCASE("taxonomy cycle is a hard violation") {
    std::vector<TaxonomyNode> tax{{"a", "", "b", MemberKind::FaultCategory, {}},
                                  {"b", "", "a", MemberKind::FaultCategory, {}}};
    auto faults = kb3().faults();
    faults[0].category = "a";
    const KnowledgeBase kb({}, faults, kb3().symptoms(), kb3().links(), tax);
    const auto vs = validate_kb(kb);
    CHECK(has_errors(vs));
    CHECK(mentions(vs, "taxonomy cycle"));
    std::size_t cycles = 0;
    for (const auto& v : vs) cycles += v.message.find("taxonomy cycle") != std::string::npos;
    CHECK(cycles == 1);
  }

  SUBCASE("taxonomy kinds, parents and reachability") {
    std::vector<TaxonomyNode> tax{{"root", "", {}, MemberKind::FaultCategory, {}},
                                  {"child", "", "root", MemberKind::SymptomCategory, {}},
                                  {"lost", "", "nowhere", MemberKind::FaultCategory, 1.5},
                                  {"idle", "", {}, MemberKind::FaultCategory, {}}};
    auto faults = kb3().faults();
    faults[0].category = "root";
    auto symptoms = kb3().symptoms();
    symptoms[0].category = "root";
    const KnowledgeBase kb({}, faults, symptoms, kb3().links(), tax);
    const auto vs = validate_kb(kb);
    CHECK(mentions(vs, "kind differs from parent"));
    CHECK(mentions(vs, "unknown taxonomy parent"));
    CHECK(mentions(vs, "taxonomy weight out of range"));
    CHECK(mentions(vs, "has kind fault-category"));
    CHECK(mentions(vs, "unreachable taxonomy node idle"));
  }

  SUBCASE("inconsistent evoking strength is only a warning") {
    auto links = kb3().links();
    links[0].evoking_strength = 0.2;  // implied value is 1.0
    const KnowledgeBase kb({}, kb3().faults(), kb3().symptoms(), links);
    const auto vs = validate_kb(kb);
    CHECK_FALSE(has_errors(vs));
    CHECK(mentions(vs, "inconsistent"));
  }
}

TEST_CASE("effects and causes") {
  const auto kb = kb3();
  CHECK(kb.effects("f1") == SymptomSet{"s1", "s2"});
  CHECK(kb.effects("f3") == SymptomSet{"s4"});
  CHECK(kb.causes("s2") == FaultSet{"f1", "f2"});
  CHECK(kb.causes("s1") == FaultSet{"f1"});
  CHECK_THROWS_AS(kb.effects("f9"), UnknownIdError);
  CHECK_THROWS_AS(kb.causes("s9"), UnknownIdError);
}

TEST_CASE("property: inverse consistency and round trip on random KBs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kb = coverdx::testing::random_kb(rng);
    REQUIRE_FALSE(has_errors(validate_kb(kb)));
    for (const auto& f : kb.faults()) {
      for (const auto& s : kb.symptoms()) {
        CHECK(kb.effects(f.id).contains(s.id) == kb.causes(s.id).contains(f.id));
      }
    }
    std::istringstream in(serialize_kb(kb).dump());
    const auto back = load_kb(in);
    CHECK(back == kb);
    CHECK_FALSE(has_errors(validate_kb(back)));
  }
}

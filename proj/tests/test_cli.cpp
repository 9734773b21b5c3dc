#include <doctest.h>

#include <fstream>
#include <sstream>

#include "coverdx/cli.hpp"
#include "coverdx/kb_io.hpp"
#include "support/fixtures.hpp"
#include "support/temp_dir.hpp"

using namespace coverdx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(args, in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kKb = COVERDX_FIXTURE_DIR "/kb3.json";

}  // namespace

TEST_CASE("kbcheck") {
  auto r = run({"kbcheck", kKb});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 errors, 0 warnings") != std::string::npos);

  coverdx::testing::TempDir dir;
  auto doc = serialize_kb(coverdx::testing::kb3());
  doc["links"][0]["causal_strength"] = 1.3;
  const auto bad = (dir.path() / "bad.json").string();
  std::ofstream(bad) << doc.dump();
  r = run({"kbcheck", bad});
  CHECK(r.code == 1);
  CHECK(r.out.find("1 errors") != std::string::npos);

  r = run({"kbcheck", (dir.path() / "missing.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("diagnose") {
  auto r = run({"diagnose", "--kb", kKb, "--present", "s1,s3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1. {f1,f2}") != std::string::npos);

  r = run({"diagnose", "--kb", kKb, "--present", "s4", "--format", "json"});
  CHECK(r.code == 0);
  const auto view = nlohmann::json::parse(r.out);
  CHECK(view.at("top") == nlohmann::json::array({"f3"}));
  CHECK(view.at("status") == "concluded");

  r = run({"diagnose", "--kb", kKb, "--present", "s1", "--absent", "s1"});
  CHECK(r.code == 2);
  r = run({"diagnose", "--kb", kKb, "--present", "s9"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error: unknown id: s9") != std::string::npos);
  r = run({"diagnose", "--kb", kKb, "--mode", "triple"});
  CHECK(r.code == 2);
  r = run({"diagnose", "--kb", kKb, "--mode", "single", "--present", "s2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("{f2}") != std::string::npos);
}

TEST_CASE("rulegen, cluster, estimate") {
  auto r = run({"rulegen", "--kb", kKb});
  CHECK(r.code == 0);
  CHECK(r.out.find("3 rules") != std::string::npos);
  r = run({"rulegen", "--kb", kKb, "--format", "json"});
  CHECK(nlohmann::json::parse(r.out).size() == 3);

  r = run({"cluster", "--kb", kKb});
  CHECK(r.out == "((f1:0.75,f2:0.75):0.25,f3:1);\n");
  r = run({"cluster", "--kb", kKb, "--symptoms", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out).at("leaves").size() == 4);

  coverdx::testing::TempDir dir;
  const auto cases = (dir.path() / "cases.csv").string();
  std::ofstream(cases) << "case_id,faults,s1,s2,s3,s4\nc1,f1,1,1,0,0\nc2,f3,0,0,0,1\n";
  const auto updated = (dir.path() / "out.json").string();
  r = run({"estimate", "--kb", kKb, "--cases", cases, "--out", updated});
  CHECK(r.code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report.at("total_cases") == 2);
  const auto kb = load_kb_file(updated);
  CHECK(kb.causal_strength("f1", "s1") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("consult loop") {
  auto r = run({"consult", "--kb", kKb, "--threshold", "0.9", "--mode", "single"}, "n\nu\ny\ny\ny\n");
  CHECK(r.code == 0);
  CHECK(r.out.find("status:") != std::string::npos);
  r = run({"consult", "--kb", kKb}, "q\n");
  CHECK(r.out.find("still-open") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"diagnose"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

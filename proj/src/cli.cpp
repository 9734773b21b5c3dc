#include "coverdx/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "coverdx/clustering.hpp"
#include "coverdx/estimation.hpp"
#include "coverdx/kb_io.hpp"
#include "coverdx/rulegen.hpp"
#include "coverdx/service.hpp"
#include "coverdx/session.hpp"
#include "coverdx/test_selection.hpp"

namespace coverdx {

using nlohmann::json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

SymptomSet split_ids(const std::string& text) {
  SymptomSet out;
  std::istringstream in(text);
  for (std::string id; std::getline(in, id, ',');) {
    if (!id.empty()) out.insert(id);
  }
  return out;
}

std::shared_ptr<const KnowledgeBase> read_kb(const std::string& path, bool lenient,
                                             std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  auto loaded = load_kb_document(in, {lenient});
  for (const auto& w : loaded.warnings) err << "warning: " << w.location << ": " << w.message << '\n';
  return std::make_shared<const KnowledgeBase>(std::move(loaded.kb));
}

struct SessionFlags {
  std::string mode = "multiple";
  double threshold = 0.95;
  std::size_t max_cover = kDefaultMaxCoverSize;
  std::size_t budget = 50;
  bool costs = false;
  std::string strategy = "bayes-noisy-or";

  void add_to(CLI::App* app) {
    app->add_option("--mode", mode, "Fault hypothesis: single|multiple")
        ->check(CLI::IsMember({"single", "multiple"}));
    app->add_option("--threshold", threshold, "Conclusion threshold on the top posterior");
    app->add_option("--max-cover", max_cover, "Largest fault set considered");
    app->add_option("--budget", budget, "Question budget");
    app->add_flag("--costs", costs, "Rank questions by gain per unit cost");
    app->add_option("--strategy", strategy, "bayes-noisy-or|heuristic-match");
  }

  SessionConfig config() const {
    SessionConfig c;
    c.mode = mode == "single" ? FaultMode::Single : FaultMode::Multiple;
    c.conclusion_threshold = threshold;
    c.max_cover_size = max_cover;
    c.question_budget = budget;
    c.costs_enabled = costs;
    c.strategy.kind = parse_strategy(strategy);
    c.check();
    return c;
  }
};

int cmd_kbcheck(const std::string& path, bool lenient, const std::string& format,
                std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed KB document: ") + e.what());
  }
  std::vector<Violation> all;
  auto kb = parse_kb(doc, {lenient}, &all);
  auto violations = validate_kb(kb);
  all.insert(all.end(), violations.begin(), violations.end());
  std::size_t errors = 0;
  for (const auto& v : all) errors += v.severity == Severity::Error;
  const std::size_t warnings = all.size() - errors;
  if (format == "json") {
    json list = json::array();
    for (const auto& v : all) {
      list.push_back({{"severity", to_string(v.severity)}, {"location", v.location},
                      {"message", v.message}});
    }
    out << json{{"errors", errors}, {"warnings", warnings}, {"violations", list}}.dump(2) << '\n';
  } else {
    for (const auto& v : all) {
      out << to_string(v.severity) << ": " << v.location << ": " << v.message << '\n';
    }
    out << errors << " errors, " << warnings << " warnings\n";
  }
  return errors == 0 ? kExitOk : kExitDomainError;
}

int cmd_diagnose(const std::shared_ptr<const KnowledgeBase>& kb, const SessionConfig& config,
                 const SymptomSet& present, const SymptomSet& absent, const std::string& format,
                 std::ostream& out) {
  for (const auto& s : present) {
    if (absent.contains(s)) throw UsageError("symptom " + s + " listed as present and absent");
  }
  const auto state = assess(kb, config, ObservationState::from_sets(present, absent));
  if (format == "json") {
    out << session_view(state).dump(2) << '\n';
    return kExitOk;
  }
  out << "mode: " << to_string(config.mode) << "\n";
  out << "status: " << to_string(state.status) << " (" << to_string(state.reason) << ")\n";
  if (state.candidates.empty()) out << "no explanation within the size bound\n";
  std::size_t rank = 1;
  for (const auto& c : state.candidates) {
    out << std::setw(3) << rank++ << ". " << format_fault_set(c.faults)
        << "  posterior=" << c.posterior << "  score=" << c.raw_score
        << (c.covers_all ? "" : "  [partial]") << '\n';
  }
  if (state.next) {
    out << "next question: " << *state.next << " - " << kb->symptom(*state.next).question << '\n';
  }
  return kExitOk;
}

int cmd_consult(const std::shared_ptr<const KnowledgeBase>& kb, const SessionConfig& config,
                std::istream& in, std::ostream& out) {
  auto state = start_session(kb, config);
  out << "answers: y (present), n (absent), u (unknown), q (quit)\n";
  while (state.status == SessionStatus::InProgress) {
    const auto& s = kb->symptom(*state.next);
    if (const auto* top = state.top()) {
      out << "leading: " << format_fault_set(top->faults) << " (" << top->posterior << ")\n";
    }
    out << "[" << s.id << "] " << (s.question.empty() ? s.label : s.question) << " > " << std::flush;
    std::string line;
    if (!std::getline(in, line) || line == "q") break;
    std::optional<Finding> finding;
    if (line == "y") finding = Finding::Present;
    if (line == "n") finding = Finding::Absent;
    if (line == "u" || line == "?") finding = Finding::Unknown;
    if (!finding) finding = parse_finding(line);
    if (!finding) {
      out << "please answer y, n, u or q\n";
      continue;
    }
    state = submit_answer(state, s.id, *finding);
  }
  out << render_summary(summary(state));
  return kExitOk;
}

int cmd_rulegen(const KnowledgeBase& kb, std::size_t max_antecedent, const std::string& format,
                std::ostream& out, std::ostream& err) {
  auto result = generate_rules(kb, max_antecedent);
  if (format == "json") {
    out << to_json(result.rules).dump(2) << '\n';
    for (const auto& f : result.undiscriminated) err << "note: no discriminating set for " << f << '\n';
    return kExitOk;
  }
  for (const auto& r : result.rules) {
    out << format_fault_set(r.antecedent) << " => " << r.consequent
        << "  (confidence " << r.confidence << ")\n";
  }
  for (const auto& f : result.undiscriminated) out << "no rule: " << f << '\n';
  out << result.rules.size() << " rules\n";
  return kExitOk;
}

int cmd_cluster(const KnowledgeBase& kb, bool symptoms, std::optional<double> cut,
                const std::string& format, std::ostream& out) {
  std::vector<std::string> items;
  Similarity sim;
  if (symptoms) {
    for (const auto& s : kb.symptom_ids()) items.push_back(s);
    sim = [&](const std::string& a, const std::string& b) { return symptom_similarity(kb, a, b); };
  } else {
    for (const auto& f : kb.fault_ids()) items.push_back(f);
    sim = [&](const std::string& a, const std::string& b) { return fault_similarity(kb, a, b); };
  }
  const auto tree = agglomerate(items, sim);
  if (format == "json") {
    json merges = json::array();
    for (const auto& m : tree.merges) {
      merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}});
    }
    json doc{{"leaves", tree.leaves}, {"merges", merges}, {"newick", tree.to_newick()}};
    if (cut) doc["clusters"] = tree.cut(*cut);
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << tree.to_newick() << '\n';
  if (cut) {
    for (const auto& group : tree.cut(*cut)) {
      out << "{";
      for (std::size_t i = 0; i < group.size(); ++i) out << (i ? "," : "") << group[i];
      out << "}\n";
    }
  }
  return kExitOk;
}

int cmd_estimate(const KnowledgeBase& kb, const std::string& cases_path,
                 const std::string& out_path, std::ostream& out) {
  std::ifstream in(cases_path);
  if (!in) throw ParseError("cannot open " + cases_path);
  const auto cases = read_cases_csv(in);
  auto result = estimate_weights(cases, kb);
  out << to_json(result.report).dump(2) << '\n';
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    file << serialize_kb(result.kb).dump(2) << '\n';
    if (!file) throw Error("cannot write " + out_path);
  }
  return kExitOk;
}

HttpServer* g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(ServiceConfig config, std::ostream& out) {
  SessionService service(config);
  HttpServer server(service);
  g_server = &server;
  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);
  out << "serving " << service.kb_names().size() << " knowledge base(s) on "
      << config.bind_address << ":" << config.port << std::endl;
  server.run(config.bind_address, config.port);
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Set-covering diagnosis engine", "coverdx"};
  app.require_subcommand(1);

  std::string kb_path;
  std::string format = "text";
  bool lenient = false;
  auto add_common = [&](CLI::App* sub, bool kb_required) {
    auto* opt = sub->add_option("--kb", kb_path, "Knowledge base file");
    if (kb_required) opt->required();
    sub->add_option("--format", format, "Output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--lenient", lenient, "Warn about unknown keys instead of rejecting");
  };

  auto* kbcheck = app.add_subcommand("kbcheck", "Validate a knowledge base file");
  std::string check_path;
  kbcheck->add_option("file", check_path, "Knowledge base file")->required();
  add_common(kbcheck, false);

  auto* diagnose = app.add_subcommand("diagnose", "Rank explanations for given findings");
  std::string present_text;
  std::string absent_text;
  SessionFlags diag_flags;
  add_common(diagnose, true);
  diagnose->add_option("--present", present_text, "Comma-separated present symptom ids");
  diagnose->add_option("--absent", absent_text, "Comma-separated absent symptom ids");
  diag_flags.add_to(diagnose);

  auto* consult = app.add_subcommand("consult", "Interactive question/answer session");
  SessionFlags consult_flags;
  add_common(consult, true);
  consult_flags.add_to(consult);

  auto* rulegen = app.add_subcommand("rulegen", "Compile deductive rules");
  std::size_t max_antecedent = kDefaultMaxAntecedent;
  add_common(rulegen, true);
  rulegen->add_option("--max-antecedent", max_antecedent, "Largest antecedent size");

  auto* cluster = app.add_subcommand("cluster", "Agglomerative clustering of faults or symptoms");
  bool cluster_symptoms = false;
  std::optional<double> cut;
  add_common(cluster, true);
  cluster->add_flag("--symptoms", cluster_symptoms, "Cluster symptoms instead of faults");
  cluster->add_option("--cut", cut, "Print the clusters formed at this height");

  auto* estimate = app.add_subcommand("estimate", "Estimate weights from case data");
  std::string cases_path;
  std::string out_path;
  add_common(estimate, true);
  estimate->add_option("--cases", cases_path, "Case CSV file")->required();
  estimate->add_option("--out", out_path, "Write the re-weighted KB here");

  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  ServiceConfig service;
  std::string kb_dir;
  serve->add_option("--kb-dir", kb_dir, "Knowledge base directory");
  serve->add_option("--bind", service.bind_address, "Bind address");
  serve->add_option("--port", service.port, "Port")->check(CLI::Range(0, 65535));
  serve->add_option("--store", service.session_store, "Session store directory");
  serve->add_option("--max-sessions", service.max_sessions, "Concurrent session limit");
  serve->add_flag("--lenient", service.lenient, "Accept unknown keys in KB files");

  std::vector<std::string> argv_storage{"coverdx"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*kbcheck) return cmd_kbcheck(check_path, lenient, format, out);
    if (*serve) {
      if (const char* env = std::getenv("COVERDX_KB_DIR"); env && *env) service.kb_dir = env;
      if (!kb_dir.empty()) service.kb_dir = kb_dir;
      return cmd_serve(service, out);
    }
    const auto kb = read_kb(kb_path, lenient, err);
    if (*diagnose) {
      return cmd_diagnose(kb, diag_flags.config(), split_ids(present_text),
                          split_ids(absent_text), format, out);
    }
    if (*consult) return cmd_consult(kb, consult_flags.config(), in, out);
    if (*rulegen) return cmd_rulegen(*kb, max_antecedent, format, out, err);
    if (*cluster) return cmd_cluster(*kb, cluster_symptoms, cut, format, out);
    if (*estimate) return cmd_estimate(*kb, cases_path, out_path, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& v : e.violations()) {
      err << "error: " << to_string(v.severity) << ": " << v.location << ": " << v.message << '\n';
    }
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace coverdx

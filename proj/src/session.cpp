#include "coverdx/session.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "coverdx/kb_io.hpp"
#include "coverdx/test_selection.hpp"

namespace coverdx {

using nlohmann::json;

namespace {

std::vector<FaultSet> candidate_sets(const KnowledgeBase& kb, const SessionConfig& config,
                                     const SymptomSet& present) {
  if (config.mode == FaultMode::Multiple) {
    return irredundant_covers(kb, present, config.max_cover_size);
  }
  std::vector<FaultSet> out{FaultSet{}};
  for (auto& f : single_fault_candidates(kb, present)) out.push_back(FaultSet{std::move(f)});
  return out;
}

// Covers plus every one-fault extension that stays within the size bound.
// Used to pick a question when the covers alone cannot be told apart, e.g.
// before any symptom is present.
std::vector<FaultSet> lookahead_sets(const KnowledgeBase& kb, const SessionConfig& config,
                                     const std::vector<FaultSet>& covers) {
  std::set<FaultSet> all(covers.begin(), covers.end());
  for (const auto& d : covers) {
    if (d.size() >= config.max_cover_size) continue;
    for (const auto& f : kb.fault_ids()) {
      if (d.contains(f)) continue;
      auto extended = d;
      extended.insert(f);
      all.insert(std::move(extended));
    }
  }
  std::vector<FaultSet> out(all.begin(), all.end());
  std::sort(out.begin(), out.end(), cover_order);
  return out;
}

void evaluate(SessionState& state) {
  const auto& kb = *state.kb;
  const auto& config = state.config;
  const auto present = state.observations.present();
  const double leak = config.strategy.leak();

  const auto sets = candidate_sets(kb, config, present);
  state.candidates.clear();
  if (!sets.empty()) {
    state.candidates = rank_hypotheses(kb, sets, state.observations, config.strategy);
  }
  state.next.reset();

  const auto* top = state.top();
  if (top && !top->faults.empty() && top->covers_all &&
      top->posterior >= config.conclusion_threshold) {
    state.status = SessionStatus::Concluded;
    state.reason = StopReason::ThresholdMet;
    return;
  }
  if (state.transcript.size() >= config.question_budget) {
    state.status = SessionStatus::Exhausted;
    state.reason = StopReason::BudgetSpent;
    return;
  }
  if (!state.candidates.empty()) {
    state.next = next_question(kb, state.candidates, state.observations,
                               config.costs_enabled, leak);
    if (!state.next && config.mode == FaultMode::Multiple) {
      const auto wider = rank_hypotheses(kb, lookahead_sets(kb, config, sets),
                                         state.observations, config.strategy);
      state.next = next_question(kb, wider, state.observations, config.costs_enabled, leak);
    }
  }
  if (state.next) {
    state.status = SessionStatus::InProgress;
    state.reason = StopReason::StillOpen;
  } else {
    state.status = SessionStatus::Exhausted;
    state.reason = StopReason::NoInformativeQuestion;
  }
}

}  // namespace

void SessionConfig::check() const {
  if (max_cover_size == 0) throw ConfigError("max_cover_size must be positive");
  if (!(conclusion_threshold > 0.0 && conclusion_threshold <= 1.0)) {
    throw ConfigError("threshold must lie in (0,1]");
  }
  if (question_budget == 0) throw ConfigError("question_budget must be positive");
  strategy.check();
}

bool SessionState::operator==(const SessionState& other) const {
  const bool same_kb = kb == other.kb || (kb && other.kb && *kb == *other.kb);
  return same_kb && config == other.config && observations == other.observations &&
         candidates == other.candidates && next == other.next && status == other.status &&
         reason == other.reason && transcript == other.transcript;
}

SessionState start_session(std::shared_ptr<const KnowledgeBase> kb, const SessionConfig& config) {
  if (!kb) throw ConfigError("session requires a knowledge base");
  config.check();
  SessionState state;
  state.kb = std::move(kb);
  state.config = config;
  evaluate(state);
  return state;
}

SessionState submit_answer(const SessionState& state, const std::string& symptom,
                           Finding finding) {
  state.kb->symptom(symptom);
  if (state.observations.observed(symptom)) throw AlreadyObservedError(symptom);
  if (state.status != SessionStatus::InProgress) {
    throw SessionStateError("session is " + to_string(state.status) + ", not in progress");
  }
  SessionState next = state;
  next.observations.set(symptom, finding);
  next.transcript.push_back({symptom, finding});
  evaluate(next);
  return next;
}

SessionState what_if(const SessionState& state, const std::string& symptom, Finding finding) {
  return submit_answer(state, symptom, finding);
}

SessionSummary summary(const SessionState& state) {
  SessionSummary out;
  out.status = state.status;
  out.reason = state.reason;
  out.explanations = state.candidates;
  out.transcript = state.transcript;
  const auto present = state.observations.present();
  for (const auto& s : present) {
    const auto* top = state.top();
    const auto& causes = state.kb->causes(s);
    const bool covered =
        top && std::any_of(top->faults.begin(), top->faults.end(),
                           [&](const std::string& f) { return causes.contains(f); });
    if (!covered) out.uncovered.insert(s);
  }
  return out;
}

SessionState assess(std::shared_ptr<const KnowledgeBase> kb, const SessionConfig& config,
                    const ObservationState& observations) {
  if (!kb) throw ConfigError("session requires a knowledge base");
  config.check();
  observations.validate(*kb);
  SessionState state;
  state.kb = std::move(kb);
  state.config = config;
  state.observations = observations;
  evaluate(state);
  return state;
}

SessionState replay(std::shared_ptr<const KnowledgeBase> kb, const SessionConfig& config,
                    const Transcript& transcript) {
  auto state = start_session(std::move(kb), config);
  for (const auto& entry : transcript) state = submit_answer(state, entry.symptom, entry.finding);
  return state;
}

std::string to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::InProgress: return "in-progress";
    case SessionStatus::Concluded: return "concluded";
    case SessionStatus::Exhausted: return "exhausted";
  }
  return "in-progress";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ThresholdMet: return "threshold-met";
    case StopReason::NoInformativeQuestion: return "no-informative-question";
    case StopReason::BudgetSpent: return "budget-spent";
    case StopReason::StillOpen: return "still-open";
  }
  return "still-open";
}

std::string to_string(FaultMode mode) {
  return mode == FaultMode::Single ? "single" : "multiple";
}

std::string format_fault_set(const FaultSet& faults) {
  std::string out = "{";
  for (const auto& f : faults) {
    if (out.size() > 1) out += ",";
    out += f;
  }
  return out + "}";
}

json to_json(const SessionConfig& config) {
  return {{"mode", to_string(config.mode)},
          {"max_cover_size", config.max_cover_size},
          {"threshold", config.conclusion_threshold},
          {"question_budget", config.question_budget},
          {"costs_enabled", config.costs_enabled},
          {"strategy", {{"name", to_string(config.strategy.kind)},
                        {"parameters", config.strategy.parameters}}}};
}

SessionConfig session_config_from_json(const json& doc) {
  SessionConfig config;
  if (doc.is_null()) return config;
  if (!doc.is_object()) throw ConfigError("config must be an object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "mode") {
        const auto mode = value.get<std::string>();
        if (mode == "single" || mode == "single-fault") {
          config.mode = FaultMode::Single;
        } else if (mode == "multiple" || mode == "multiple-fault") {
          config.mode = FaultMode::Multiple;
        } else {
          throw ConfigError("unknown mode '" + mode + "'");
        }
      } else if (key == "max_cover_size") {
        if (!value.is_number_unsigned()) throw ConfigError("max_cover_size must be a positive integer");
        config.max_cover_size = value.get<std::size_t>();
      } else if (key == "threshold") {
        config.conclusion_threshold = value.get<double>();
      } else if (key == "question_budget") {
        if (!value.is_number_unsigned()) throw ConfigError("question_budget must be a positive integer");
        config.question_budget = value.get<std::size_t>();
      } else if (key == "costs_enabled") {
        config.costs_enabled = value.get<bool>();
      } else if (key == "strategy") {
        if (value.is_string()) {
          config.strategy.kind = parse_strategy(value.get<std::string>());
        } else {
          config.strategy.kind = parse_strategy(value.at("name").get<std::string>());
          if (value.contains("parameters")) {
            config.strategy.parameters = value.at("parameters").get<std::map<std::string, double>>();
          }
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  config.check();
  return config;
}

json to_json(const Transcript& transcript) {
  json out = json::array();
  for (const auto& e : transcript) {
    out.push_back({{"symptom", e.symptom}, {"finding", to_string(e.finding)}});
  }
  return out;
}

Transcript transcript_from_json(const json& doc) {
  if (!doc.is_array()) throw ParseError("transcript must be an array");
  Transcript out;
  for (const auto& e : doc) {
    if (!e.is_object() || !e.contains("symptom") || !e.contains("finding") ||
        !e.at("symptom").is_string() || !e.at("finding").is_string()) {
      throw ParseError("transcript entries need string 'symptom' and 'finding'");
    }
    auto finding = parse_finding(e.at("finding").get<std::string>());
    if (!finding) throw ParseError("bad finding '" + e.at("finding").get<std::string>() + "'");
    out.push_back({e.at("symptom").get<std::string>(), *finding});
  }
  return out;
}

json to_json(const ScoredHypothesis& h) {
  return {{"faults", to_json(h.faults)},
          {"raw_score", h.raw_score},
          {"posterior", h.posterior},
          {"covers_all", h.covers_all}};
}

json session_view(const SessionState& state) {
  json view;
  view["status"] = to_string(state.status);
  view["reason"] = to_string(state.reason);
  view["mode"] = to_string(state.config.mode);
  view["observations"] = json::object();
  for (const auto& [s, f] : state.observations.entries()) view["observations"][s] = to_string(f);
  view["candidates"] = json::array();
  for (const auto& c : state.candidates) view["candidates"].push_back(to_json(c));
  view["top"] = state.top() ? to_json(state.top()->faults) : json(nullptr);
  if (state.next) {
    const auto& s = state.kb->symptom(*state.next);
    view["next_question"] = {{"symptom", s.id}, {"question", s.question}, {"label", s.label}};
  } else {
    view["next_question"] = nullptr;
  }
  view["transcript"] = to_json(state.transcript);
  return view;
}

json to_json(const SessionSummary& s) {
  json out;
  out["status"] = to_string(s.status);
  out["reason"] = to_string(s.reason);
  out["explanations"] = json::array();
  for (const auto& h : s.explanations) out["explanations"].push_back(to_json(h));
  out["uncovered"] = to_json(s.uncovered);
  out["transcript"] = to_json(s.transcript);
  out["note"] = "posteriors are normalized over the listed candidates only";
  return out;
}

std::string render_summary(const SessionSummary& s) {
  std::ostringstream out;
  out << "status: " << to_string(s.status) << " (" << to_string(s.reason) << ")\n";
  out << "explanations (posterior over listed candidates):\n";
  for (const auto& h : s.explanations) {
    out << "  " << format_fault_set(h.faults) << "  posterior=" << h.posterior
        << "  score=" << h.raw_score << (h.covers_all ? "" : "  [partial]") << '\n';
  }
  if (!s.uncovered.empty()) out << "uncovered: " << format_fault_set(s.uncovered) << '\n';
  if (!s.transcript.empty()) {
    out << "transcript:\n";
    for (const auto& e : s.transcript) out << "  " << e.symptom << " = " << to_string(e.finding) << '\n';
  }
  return out.str();
}

}  // namespace coverdx

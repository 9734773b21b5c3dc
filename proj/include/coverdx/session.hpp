#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverdx/covering.hpp"
#include "coverdx/kb.hpp"
#include "coverdx/observations.hpp"
#include "coverdx/scoring.hpp"

namespace coverdx {

enum class FaultMode { Single, Multiple };

struct SessionConfig {
  FaultMode mode = FaultMode::Multiple;
  std::size_t max_cover_size = kDefaultMaxCoverSize;
  double conclusion_threshold = 0.95;
  std::size_t question_budget = 50;
  bool costs_enabled = false;
  ScoringStrategy strategy;

  /// Throws ConfigError (or NotImplementedError for reserved strategies).
  void check() const;

  bool operator==(const SessionConfig&) const = default;
};

enum class SessionStatus { InProgress, Concluded, Exhausted };
enum class StopReason { ThresholdMet, NoInformativeQuestion, BudgetSpent, StillOpen };

struct TranscriptEntry {
  std::string symptom;
  Finding finding = Finding::Unknown;

  bool operator==(const TranscriptEntry&) const = default;
};

using Transcript = std::vector<TranscriptEntry>;

/// Snapshot of a consultation. Everything except the transcript and
/// observations is recomputed from (kb, config, observations).
struct SessionState {
  std::shared_ptr<const KnowledgeBase> kb;
  SessionConfig config;
  ObservationState observations;
  std::vector<ScoredHypothesis> candidates;
  std::optional<std::string> next;
  SessionStatus status = SessionStatus::InProgress;
  StopReason reason = StopReason::StillOpen;
  Transcript transcript;

  const ScoredHypothesis* top() const { return candidates.empty() ? nullptr : &candidates.front(); }

  bool operator==(const SessionState& other) const;
};

struct SessionSummary {
  SessionStatus status = SessionStatus::InProgress;
  StopReason reason = StopReason::StillOpen;
  std::vector<ScoredHypothesis> explanations;
  /// Present symptoms the top explanation does not cover.
  SymptomSet uncovered;
  Transcript transcript;
};

SessionState start_session(std::shared_ptr<const KnowledgeBase> kb, const SessionConfig& config);

/// Records an answer and recomputes candidates, next question and status.
/// Throws UnknownIdError, AlreadyObservedError or SessionStateError.
SessionState submit_answer(const SessionState& state, const std::string& symptom,
                           Finding finding);

/// The state submit_answer would produce; `state` is left untouched.
SessionState what_if(const SessionState& state, const std::string& symptom, Finding finding);

SessionSummary summary(const SessionState& state);

/// Candidates, next question and status for a batch of observations, as a
/// session would report them with an empty transcript.
SessionState assess(std::shared_ptr<const KnowledgeBase> kb, const SessionConfig& config,
                    const ObservationState& observations);

/// Rebuilds a session by applying a transcript from a fresh start.
SessionState replay(std::shared_ptr<const KnowledgeBase> kb, const SessionConfig& config,
                    const Transcript& transcript);

std::string to_string(SessionStatus status);
std::string to_string(StopReason reason);
std::string to_string(FaultMode mode);
std::string format_fault_set(const FaultSet& faults);

nlohmann::json to_json(const SessionConfig& config);
/// Missing fields keep their defaults.
SessionConfig session_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Transcript& transcript);
Transcript transcript_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ScoredHypothesis& hypothesis);
/// {status, reason, observations, candidates, top, next_question, transcript}.
nlohmann::json session_view(const SessionState& state);
nlohmann::json to_json(const SessionSummary& summary);
std::string render_summary(const SessionSummary& summary);

}  // namespace coverdx

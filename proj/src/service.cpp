#include "coverdx/service.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "coverdx/kb_io.hpp"

namespace coverdx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ApiResponse error_response(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

ApiResponse violations_response(const std::vector<Violation>& violations) {
  json list = json::array();
  for (const auto& v : violations) {
    list.push_back({{"severity", to_string(v.severity)},
                    {"location", v.location},
                    {"message", v.message}});
  }
  return {422, {{"error", "knowledge base validation failed"}, {"violations", list}}};
}

bool valid_name(const std::string& name) {
  static const std::regex pattern("[A-Za-z0-9_.-]+");
  return !name.empty() && name.front() != '.' && std::regex_match(name, pattern);
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON body: ") + e.what());
  }
}

// Maps engine errors onto HTTP status codes.
template <typename Fn>
ApiResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    return violations_response(e.violations());
  } catch (const AlreadyObservedError& e) {
    return error_response(409, e.what());
  } catch (const SessionStateError& e) {
    return error_response(409, e.what());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  } catch (const Error& e) {
    return error_response(422, e.what());
  }
}

std::pair<std::string, Finding> parse_answer(const json& doc) {
  if (!doc.is_object() || !doc.contains("symptom") || !doc.at("symptom").is_string()) {
    throw ParseError("answer needs a string 'symptom'");
  }
  if (!doc.contains("finding") || !doc.at("finding").is_string()) {
    throw ParseError("answer needs a string 'finding'");
  }
  auto finding = parse_finding(doc.at("finding").get<std::string>());
  if (!finding) throw ParseError("finding must be present, absent or unknown");
  return {doc.at("symptom").get<std::string>(), *finding};
}

void append_line(const fs::path& path, const json& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot write session log " + path.string());
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw Error("cannot write session log " + path.string());
}

}  // namespace

void ServiceConfig::check() const {
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
  if (max_sessions == 0) throw ConfigError("max sessions must be positive");
}

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
  config_.check();
  load_kbs();
  std::error_code ec;
  fs::create_directories(config_.session_store, ec);
  if (ec) throw ConfigError("cannot create session store " + config_.session_store.string());
  recover_sessions();
}

void SessionService::load_kbs() {
  if (!fs::is_directory(config_.kb_dir)) {
    throw ConfigError("KB directory not found: " + config_.kb_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config_.kb_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    try {
      auto loaded = load_kb_document(in, {config_.lenient});
      kbs_[path.stem().string()] = std::make_shared<const KnowledgeBase>(std::move(loaded.kb));
    } catch (const ValidationError& e) {
      auto violations = e.violations();
      for (auto& v : violations) v.location = path.filename().string() + ": " + v.location;
      throw ValidationError(std::move(violations));
    } catch (const ParseError& e) {
      throw ParseError(path.filename().string() + ": " + e.what());
    }
  }
  if (kbs_.empty()) throw ConfigError("no knowledge base in " + config_.kb_dir.string());
}

void SessionService::recover_sessions() {
  std::vector<fs::path> logs;
  for (const auto& entry : fs::directory_iterator(config_.session_store)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line)) continue;
    const auto header = parse_body(line);
    auto entry = std::make_shared<Entry>();
    entry->id = header.at("id").get<std::string>();
    entry->kb_name = header.at("kb").get<std::string>();
    entry->log = path;
    auto kb = std::make_shared<const KnowledgeBase>(
        parse_kb(header.at("kb_document"), LoadOptions{true}, nullptr));
    auto config = session_config_from_json(header.at("config"));
    Transcript transcript;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json doc;
      try {
        doc = json::parse(line);
      } catch (const json::parse_error&) {
        break;  // torn final write
      }
      auto [symptom, finding] = parse_answer(doc);
      transcript.push_back({symptom, finding});
    }
    entry->state = replay(std::move(kb), config, transcript);
    if (auto n = entry->id.rfind('-'); n != std::string::npos) {
      try {
        next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(entry->id.substr(n + 1)) + 1);
      } catch (const std::exception&) {
      }
    }
    sessions_[entry->id] = std::move(entry);
  }
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionService::active_sessions() const {
  std::size_t n = 0;
  for (const auto& [_, entry] : sessions_) {
    std::lock_guard guard(entry->mutex);
    if (entry->state.status == SessionStatus::InProgress) ++n;
  }
  return n;
}

ApiResponse SessionService::put_kb(const std::string& name, const std::string& body) {
  if (!valid_name(name)) return error_response(400, "invalid KB name '" + name + "'");
  return guarded([&]() -> ApiResponse {
    std::istringstream in(body);
    auto loaded = load_kb_document(in, {config_.lenient});
    const fs::path path = config_.kb_dir / (name + ".json");
    const fs::path tmp = config_.kb_dir / (name + ".json.tmp");
    {
      std::ofstream out(tmp);
      out << serialize_kb(loaded.kb).dump(2) << '\n';
      if (!out) throw Error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
    json warnings = json::array();
    for (const auto& v : loaded.warnings) {
      warnings.push_back({{"location", v.location}, {"message", v.message}});
    }
    std::unique_lock lock(mutex_);
    kbs_[name] = std::make_shared<const KnowledgeBase>(std::move(loaded.kb));
    return {200, {{"name", name}, {"warnings", warnings}}};
  });
}

ApiResponse SessionService::get_kb(const std::string& name) const {
  std::shared_lock lock(mutex_);
  auto it = kbs_.find(name);
  if (it == kbs_.end()) return error_response(404, "no knowledge base '" + name + "'");
  return {200, serialize_kb(*it->second)};
}

ApiResponse SessionService::create_session(const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const auto doc = parse_body(body);
    if (!doc.is_object() || !doc.contains("kb") || !doc.at("kb").is_string()) {
      throw ParseError("request needs a string 'kb'");
    }
    const auto kb_name = doc.at("kb").get<std::string>();
    const auto config = session_config_from_json(doc.value("config", json()));

    std::unique_lock lock(mutex_);
    auto kb = kbs_.find(kb_name);
    if (kb == kbs_.end()) return error_response(404, "no knowledge base '" + kb_name + "'");
    if (active_sessions() >= config_.max_sessions) {
      return error_response(503, "session limit reached");
    }
    auto entry = std::make_shared<Entry>();
    char id[32];
    std::snprintf(id, sizeof id, "sess-%06llu", static_cast<unsigned long long>(next_id_++));
    entry->id = id;
    entry->kb_name = kb_name;
    entry->state = start_session(kb->second, config);
    entry->log = config_.session_store / (entry->id + ".jsonl");
    append_line(entry->log, {{"id", entry->id},
                             {"kb", kb_name},
                             {"config", to_json(config)},
                             {"kb_document", serialize_kb(*kb->second)}});
    sessions_[entry->id] = entry;

    auto view = session_view(entry->state);
    view["id"] = entry->id;
    view["kb"] = kb_name;
    return {201, std::move(view)};
  });
}

ApiResponse SessionService::get_session(const std::string& id) const {
  auto entry = find(id);
  if (!entry) return error_response(404, "no session '" + id + "'");
  std::lock_guard guard(entry->mutex);
  auto view = session_view(entry->state);
  view["id"] = entry->id;
  view["kb"] = entry->kb_name;
  return {200, std::move(view)};
}

ApiResponse SessionService::answer(const std::string& id, const std::string& body) {
  auto entry = find(id);
  if (!entry) return error_response(404, "no session '" + id + "'");
  return guarded([&]() -> ApiResponse {
    auto [symptom, finding] = parse_answer(parse_body(body));
    std::lock_guard guard(entry->mutex);
    auto next = submit_answer(entry->state, symptom, finding);
    append_line(entry->log, {{"symptom", symptom}, {"finding", to_string(finding)}});
    entry->state = std::move(next);
    auto view = session_view(entry->state);
    view["id"] = entry->id;
    view["kb"] = entry->kb_name;
    return {200, std::move(view)};
  });
}

ApiResponse SessionService::preview(const std::string& id, const std::string& body) const {
  auto entry = find(id);
  if (!entry) return error_response(404, "no session '" + id + "'");
  return guarded([&]() -> ApiResponse {
    auto [symptom, finding] = parse_answer(parse_body(body));
    std::lock_guard guard(entry->mutex);
    auto view = session_view(what_if(entry->state, symptom, finding));
    view["id"] = entry->id;
    view["kb"] = entry->kb_name;
    view["preview"] = true;
    return {200, std::move(view)};
  });
}

ApiResponse SessionService::get_summary(const std::string& id) const {
  auto entry = find(id);
  if (!entry) return error_response(404, "no session '" + id + "'");
  std::lock_guard guard(entry->mutex);
  auto body = to_json(summary(entry->state));
  body["id"] = entry->id;
  return {200, std::move(body)};
}

std::vector<std::string> SessionService::kb_names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, _] : kbs_) out.push_back(name);
  return out;
}

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::optional<SessionState> SessionService::session_state(const std::string& id) const {
  auto entry = find(id);
  if (!entry) return std::nullopt;
  std::lock_guard guard(entry->mutex);
  return entry->state;
}

}  // namespace coverdx

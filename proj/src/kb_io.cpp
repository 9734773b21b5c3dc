#include "coverdx/kb_io.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

namespace coverdx {

using nlohmann::json;

namespace {

class DocReader {
 public:
  DocReader(const LoadOptions& options, std::vector<Violation>* notes)
      : options_(options), notes_(notes) {}

  void check_keys(const json& obj, std::string_view where,
                  std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ParseError(std::string(where) + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (known) continue;
      const auto msg = std::string(where) + ": unknown key '" + key + "'";
      if (!options_.lenient) throw ParseError(msg);
      note(std::string(where), msg);
    }
  }

  void note(std::string location, std::string message) {
    if (notes_) notes_->push_back({Severity::Warning, std::move(location), std::move(message)});
  }

  static std::string str(const json& obj, const char* key, std::string_view where,
                         bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) throw ParseError(std::string(where) + ": missing '" + key + "'");
      return {};
    }
    if (!it->is_string()) throw ParseError(std::string(where) + ": '" + key + "' must be a string");
    return it->get<std::string>();
  }

  static std::optional<std::string> opt_str(const json& obj, const char* key,
                                            std::string_view where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return str(obj, key, where);
  }

  static std::optional<double> opt_num(const json& obj, const char* key,
                                       std::string_view where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw ParseError(std::string(where) + ": '" + key + "' must be a number");
    return it->get<double>();
  }

  static const json& array(const json& doc, const char* key) {
    static const json empty = json::array();
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return empty;
    if (!it->is_array()) throw ParseError(std::string("'") + key + "' must be an array");
    return *it;
  }

 private:
  const LoadOptions& options_;
  std::vector<Violation>* notes_;
};

}  // namespace

KnowledgeBase parse_kb(const json& doc, const LoadOptions& options,
                       std::vector<Violation>* notes) {
  DocReader reader(options, notes);
  reader.check_keys(doc, "document", {"meta", "faults", "symptoms", "links", "taxonomy"});

  KbMeta meta;
  if (doc.contains("meta") && !doc.at("meta").is_null()) {
    const auto& m = doc.at("meta");
    reader.check_keys(m, "meta", {"name", "version", "description"});
    meta.name = DocReader::str(m, "name", "meta", false);
    meta.version = DocReader::str(m, "version", "meta", false);
  }

  std::vector<FaultNode> faults;
  for (const auto& f : DocReader::array(doc, "faults")) {
    reader.check_keys(f, "faults", {"id", "label", "prior", "category"});
    FaultNode node;
    node.id = DocReader::str(f, "id", "faults");
    const auto where = "faults/" + node.id;
    node.label = DocReader::str(f, "label", where, false);
    if (auto prior = DocReader::opt_num(f, "prior", where)) {
      node.prior = *prior;
    } else {
      node.prior = kDefaultPrior;
      reader.note(where, "prior missing for " + node.id + ", defaulted to 0.05");
    }
    node.category = DocReader::opt_str(f, "category", where);
    faults.push_back(std::move(node));
  }

  std::vector<SymptomNode> symptoms;
  for (const auto& s : DocReader::array(doc, "symptoms")) {
    reader.check_keys(s, "symptoms", {"id", "label", "question", "cost", "category"});
    SymptomNode node;
    node.id = DocReader::str(s, "id", "symptoms");
    const auto where = "symptoms/" + node.id;
    node.label = DocReader::str(s, "label", where, false);
    node.question = DocReader::str(s, "question", where, false);
    node.cost = DocReader::opt_num(s, "cost", where).value_or(1.0);
    node.category = DocReader::opt_str(s, "category", where);
    symptoms.push_back(std::move(node));
  }

  std::vector<CausalLink> links;
  for (const auto& l : DocReader::array(doc, "links")) {
    reader.check_keys(l, "links", {"fault", "symptom", "causal_strength", "evoking_strength"});
    CausalLink link;
    link.fault = DocReader::str(l, "fault", "links");
    link.symptom = DocReader::str(l, "symptom", "links");
    const auto where = "links/" + link.fault + "->" + link.symptom;
    auto strength = DocReader::opt_num(l, "causal_strength", where);
    if (!strength) throw ParseError(where + ": missing 'causal_strength'");
    link.causal_strength = *strength;
    link.evoking_strength = DocReader::opt_num(l, "evoking_strength", where);
    links.push_back(std::move(link));
  }

  std::vector<TaxonomyNode> taxonomy;
  for (const auto& t : DocReader::array(doc, "taxonomy")) {
    reader.check_keys(t, "taxonomy", {"id", "label", "parent", "kind", "weight"});
    TaxonomyNode node;
    node.id = DocReader::str(t, "id", "taxonomy");
    const auto where = "taxonomy/" + node.id;
    node.label = DocReader::str(t, "label", where, false);
    node.parent = DocReader::opt_str(t, "parent", where);
    auto kind = parse_member_kind(DocReader::str(t, "kind", where));
    if (!kind) throw ParseError(where + ": 'kind' must be fault-category or symptom-category");
    node.kind = *kind;
    node.weight = DocReader::opt_num(t, "weight", where);
    taxonomy.push_back(std::move(node));
  }

  return KnowledgeBase(std::move(meta), std::move(faults), std::move(symptoms),
                       std::move(links), std::move(taxonomy));
}

LoadedKb load_kb_document(const json& doc, const LoadOptions& options) {
  std::vector<Violation> notes;
  auto kb = parse_kb(doc, options, &notes);
  auto violations = validate_kb(kb);
  if (has_errors(violations)) throw ValidationError(std::move(violations));
  notes.insert(notes.end(), violations.begin(), violations.end());
  return {std::move(kb), std::move(notes)};
}

LoadedKb load_kb_document(std::istream& in, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed KB document: ") + e.what());
  }
  return load_kb_document(doc, options);
}

KnowledgeBase load_kb(std::istream& in, const LoadOptions& options) {
  return load_kb_document(in, options).kb;
}

KnowledgeBase load_kb_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return load_kb(in, options);
}

json serialize_kb(const KnowledgeBase& kb) {
  json doc;
  doc["meta"] = {{"name", kb.meta().name}, {"version", kb.meta().version}};
  doc["faults"] = json::array();
  for (const auto& f : kb.faults()) {
    json j = {{"id", f.id}, {"label", f.label}, {"prior", f.prior}};
    if (f.category) j["category"] = *f.category;
    doc["faults"].push_back(std::move(j));
  }
  doc["symptoms"] = json::array();
  for (const auto& s : kb.symptoms()) {
    json j = {{"id", s.id}, {"label", s.label}, {"question", s.question}, {"cost", s.cost}};
    if (s.category) j["category"] = *s.category;
    doc["symptoms"].push_back(std::move(j));
  }
  doc["links"] = json::array();
  for (const auto& l : kb.links()) {
    json j = {{"fault", l.fault}, {"symptom", l.symptom}, {"causal_strength", l.causal_strength}};
    if (l.evoking_strength) j["evoking_strength"] = *l.evoking_strength;
    doc["links"].push_back(std::move(j));
  }
  doc["taxonomy"] = json::array();
  for (const auto& t : kb.taxonomy()) {
    json j = {{"id", t.id}, {"label", t.label}, {"kind", to_string(t.kind)}};
    if (t.parent) j["parent"] = *t.parent;
    if (t.weight) j["weight"] = *t.weight;
    doc["taxonomy"].push_back(std::move(j));
  }
  return doc;
}

json to_json(const IdSet& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id);
  return out;
}

IdSet id_set_from_json(const json& value) {
  if (!value.is_array()) throw ParseError("expected an array of ids");
  IdSet out;
  for (const auto& v : value) {
    if (!v.is_string()) throw ParseError("expected an array of ids");
    out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace coverdx

#include <sstream>

#include "coverdx/estimation.hpp"

namespace coverdx {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

// RFC 4180 style: commas separate, double quotes group, "" escapes a quote.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(trim(field));
  return fields;
}

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::vector<CaseRecord> read_cases_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split_csv_line(line, line_no);
  }
  if (header.size() < 2 || header[0] != "case_id" || header[1] != "faults") {
    throw ParseError("case file header must start with case_id,faults");
  }

  std::vector<CaseRecord> cases;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    CaseRecord record;
    record.case_id = fields[0];
    std::istringstream faults(fields[1]);
    for (std::string id; std::getline(faults, id, ';');) {
      if (auto t = trim(id); !t.empty()) record.faults.insert(t);
    }
    for (std::size_t i = 2; i < fields.size(); ++i) {
      if (fields[i].empty()) continue;
      if (fields[i] == "1") {
        record.findings.set(header[i], Finding::Present);
      } else if (fields[i] == "0") {
        record.findings.set(header[i], Finding::Absent);
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": finding for " + header[i] +
                         " must be 1, 0 or blank");
      }
    }
    cases.push_back(std::move(record));
  }
  return cases;
}

void write_cases_csv(std::ostream& out, const std::vector<CaseRecord>& cases,
                     const std::vector<std::string>& symptom_columns) {
  out << "case_id,faults";
  for (const auto& s : symptom_columns) out << ',' << s;
  out << '\n';
  for (const auto& c : cases) {
    out << quote_if_needed(c.case_id) << ',';
    bool first = true;
    for (const auto& f : c.faults) {
      if (!first) out << ';';
      out << f;
      first = false;
    }
    for (const auto& s : symptom_columns) {
      out << ',';
      switch (c.findings.get(s)) {
        case Finding::Present: out << '1'; break;
        case Finding::Absent: out << '0'; break;
        case Finding::Unknown: break;
      }
    }
    out << '\n';
  }
}

}  // namespace coverdx

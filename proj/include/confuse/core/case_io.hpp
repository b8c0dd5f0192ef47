#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "confuse/core/json.hpp"

namespace confuse {

// Reads newline-delimited JSON records. Blank lines are skipped; any other
// malformed line raises ParseError with its 1-based line number.
template <typename T, typename Parse>
std::vector<T> read_jsonl(const std::filesystem::path& path, Parse parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(parse(ojson::parse(line)));
    } catch (const ojson::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

template <typename Range, typename Encode>
void write_jsonl(const std::filesystem::path& path, const Range& records, Encode encode) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) out << encode(r).dump() << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

inline void check_unique_ids(const std::vector<Case>& cases) {
  std::unordered_set<std::string> seen;
  for (const auto& c : cases) {
    if (!seen.insert(c.id).second) throw DuplicateIdError(c.id);
  }
}

inline std::vector<Case> read_cases(const std::filesystem::path& path) {
  auto cases = read_jsonl<Case>(path, [](const ojson& j) { return case_from_json(j); });
  check_unique_ids(cases);
  return cases;
}

inline void write_cases(const std::filesystem::path& path, const std::vector<Case>& cases) {
  check_unique_ids(cases);
  write_jsonl(path, cases, [](const Case& c) { return to_json(c); });
}

enum class IoMode { Read, Write };

// Single entry point mirroring the read/write contract: Write persists
// `cases` and returns them; Read returns the file contents in order.
inline std::vector<Case> case_io(const std::filesystem::path& path, IoMode mode,
                                 const std::vector<Case>* cases = nullptr) {
  if (mode == IoMode::Write) {
    if (cases == nullptr) throw ParameterError("case_io(Write) requires cases");
    write_cases(path, *cases);
    return *cases;
  }
  return read_cases(path);
}

inline std::vector<Document> read_documents(const std::filesystem::path& path) {
  return read_jsonl<Document>(path, [](const ojson& j) { return document_from_json(j); });
}

inline std::vector<Judgment> read_judgments(const std::filesystem::path& path) {
  return read_jsonl<Judgment>(path, [](const ojson& j) { return judgment_from_json(j); });
}

inline void write_judgments(const std::filesystem::path& path, const std::vector<Judgment>& js) {
  write_jsonl(path, js, [](const Judgment& j) { return to_json(j); });
}

inline std::vector<InteractionTranscript> read_transcripts(const std::filesystem::path& path) {
  return read_jsonl<InteractionTranscript>(path, [](const ojson& j) { return transcript_from_json(j); });
}

inline void write_transcripts(const std::filesystem::path& path,
                              const std::vector<InteractionTranscript>& ts) {
  write_jsonl(path, ts, [](const InteractionTranscript& t) { return to_json(t); });
}

}  // namespace confuse

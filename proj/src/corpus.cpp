#include "patret/corpus.hpp"

#include <algorithm>
#include <iostream>
#include <utility>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

namespace {

constexpr const char* kPatentHeader = "patent_id\ttitle\tabstract\tcpc_codes";

std::set<std::string> parse_codes(const std::string& field) {
  std::set<std::string> codes;
  std::size_t start = 0;
  while (start <= field.size()) {
    const std::size_t pos = field.find(';', start);
    const std::string code = field.substr(
        start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!code.empty()) codes.insert(code);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return codes;
}

[[noreturn]] void malformed(const std::string& path, std::size_t lineno,
                            const std::string& what) {
  fail(Errc::malformed_row,
       path + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

CorpusIndex load_patents(const std::string& path, bool lenient,
                         std::size_t* skipped_out) {
  CorpusIndex corpus;
  std::set<std::string> codes_seen;
  std::size_t skipped = 0;
  bool header_seen = false;

  for_each_line(path, [&](std::size_t lineno, const std::string& line) {
    if (!header_seen) {
      if (line != kPatentHeader)
        malformed(path, lineno,
                  "expected header '" + std::string(kPatentHeader) + "'");
      header_seen = true;
      return;
    }
    if (line.empty()) return;

    const auto fields = split_tabs(line);
    const auto reject = [&](const std::string& what) {
      if (!lenient) malformed(path, lineno, what);
      std::cerr << "warning: " << path << ":" << lineno << ": skipped: " << what
                << "\n";
      ++skipped;
    };

    if (fields.size() != 4) {
      reject("expected 4 fields, got " + std::to_string(fields.size()));
      return;
    }
    if (fields[0].empty()) {
      reject("empty patent_id");
      return;
    }
    if (fields[1].empty()) {
      reject("empty title");
      return;
    }
    if (corpus.patent_order.count(fields[0]))
      fail(Errc::duplicate_id,
           path + ":" + std::to_string(lineno) + ": duplicate patent_id '" +
               fields[0] + "'");

    PatentRecord rec{fields[0], fields[1], fields[2], parse_codes(fields[3])};
    codes_seen.insert(rec.cpc_codes.begin(), rec.cpc_codes.end());
    corpus.patent_order.emplace(rec.patent_id,
                                static_cast<Index>(corpus.patents.size()));
    corpus.patents.push_back(std::move(rec));
  });

  if (!header_seen) malformed(path, 1, "empty file (missing header)");
  corpus.label_space.assign(codes_seen.begin(), codes_seen.end());  // sorted
  if (skipped_out) *skipped_out = skipped;
  return corpus;
}

void save_patents(const CorpusIndex& corpus, const std::string& path) {
  auto out = open_output(path);
  out << kPatentHeader << '\n';
  for (const auto& rec : corpus.patents) {
    out << rec.patent_id << '\t' << rec.title << '\t' << rec.abstract << '\t';
    bool first = true;
    for (const auto& code : rec.cpc_codes) {
      if (!first) out << ';';
      out << code;
      first = false;
    }
    out << '\n';
  }
}

void save_citation_edges(const std::vector<CitationEdge>& edges,
                         const std::string& path) {
  auto out = open_output(path);
  for (const auto& e : edges) out << e.citing << '\t' << e.cited << '\n';
}

void save_inventor_edges(const std::vector<InventorEdge>& edges,
                         const std::string& path) {
  auto out = open_output(path);
  for (const auto& e : edges) out << e.inventor_id << '\t' << e.patent_id << '\n';
}

namespace {

// Shared two-column edge loader; `self_loop_check` enables the
// citing != cited rule (citation graphs only).
std::vector<std::pair<std::string, std::string>> load_pairs(
    const std::string& path, bool lenient, bool self_loop_check,
    EdgeLoadReport* report, const CorpusIndex* corpus) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::pair<std::string, std::string>> seen;
  EdgeLoadReport rep;

  for_each_line(path, [&](std::size_t lineno, const std::string& line) {
    if (line.empty()) return;
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      if (!lenient)
        malformed(path, lineno, "expected 2 non-empty fields");
      std::cerr << "warning: " << path << ":" << lineno
                << ": skipped malformed row\n";
      ++rep.skipped;
      return;
    }
    ++rep.rows;
    if (self_loop_check && fields[0] == fields[1]) {
      std::cerr << "warning: " << path << ":" << lineno
                << ": self-citation '" << fields[0] << "' dropped\n";
      ++rep.self_loops;
      return;
    }
    auto pair = std::make_pair(fields[0], fields[1]);
    if (!seen.insert(pair).second) {
      ++rep.duplicates;
      return;
    }
    if (corpus &&
        (!corpus->contains(fields[0]) || !corpus->contains(fields[1])))
      ++rep.dangling;
    edges.push_back(std::move(pair));
  });

  if (corpus && rep.dangling > 0)
    std::cerr << "note: " << path << ": " << rep.dangling
              << " edge(s) reference patents outside the corpus (kept)\n";
  if (report) *report = rep;
  return edges;
}

}  // namespace

std::vector<CitationEdge> load_citation_edges(const std::string& path,
                                              bool lenient,
                                              EdgeLoadReport* report,
                                              const CorpusIndex* corpus) {
  auto pairs = load_pairs(path, lenient, /*self_loop_check=*/true, report, corpus);
  std::vector<CitationEdge> edges;
  edges.reserve(pairs.size());
  for (auto& p : pairs) edges.push_back({std::move(p.first), std::move(p.second)});
  return edges;
}

std::vector<InventorEdge> load_inventor_edges(const std::string& path,
                                              bool lenient,
                                              EdgeLoadReport* report,
                                              const CorpusIndex* corpus) {
  // For inventor edges only the patent endpoint can dangle; recompute.
  std::vector<std::pair<std::string, std::string>> pairs =
      load_pairs(path, lenient, /*self_loop_check=*/false, report, nullptr);
  std::vector<InventorEdge> edges;
  edges.reserve(pairs.size());
  std::size_t dangling = 0;
  for (auto& p : pairs) {
    if (corpus && !corpus->contains(p.second)) ++dangling;
    edges.push_back({std::move(p.first), std::move(p.second)});
  }
  if (report) report->dangling = dangling;
  if (corpus && dangling > 0)
    std::cerr << "note: " << path << ": " << dangling
              << " edge(s) reference patents outside the corpus (kept)\n";
  return edges;
}

std::string ValidationReport::to_string() const {
  std::string s;
  s += "patents:            " + std::to_string(patent_count) + "\n";
  s += "label space:        " + std::to_string(label_count) + "\n";
  s += "citation edges:     " + std::to_string(citation_edges) + "\n";
  s += "inventor edges:     " + std::to_string(inventor_edges) + "\n";
  s += "citation dangling:  " + std::to_string(citation_dangling) + "\n";
  s += "inventor dangling:  " + std::to_string(inventor_dangling) + "\n";
  s += "citation isolated:  " + std::to_string(citation_isolated) + "\n";
  s += "inventor isolated:  " + std::to_string(inventor_isolated) + "\n";
  return s;
}

ValidationReport validate_corpus(const CorpusIndex& corpus,
                                 const std::vector<CitationEdge>& citations,
                                 const std::vector<InventorEdge>& inventors) {
  ValidationReport rep;
  rep.patent_count = corpus.patents.size();
  rep.label_count = corpus.label_space.size();
  rep.citation_edges = citations.size();
  rep.inventor_edges = inventors.size();

  std::set<std::string> cited_touched, inventor_touched;
  for (const auto& e : citations) {
    if (!corpus.contains(e.citing) || !corpus.contains(e.cited))
      ++rep.citation_dangling;
    cited_touched.insert(e.citing);
    cited_touched.insert(e.cited);
  }
  for (const auto& e : inventors) {
    if (!corpus.contains(e.patent_id)) ++rep.inventor_dangling;
    inventor_touched.insert(e.patent_id);
  }
  for (const auto& rec : corpus.patents) {
    if (!cited_touched.count(rec.patent_id)) ++rep.citation_isolated;
    if (!inventor_touched.count(rec.patent_id)) ++rep.inventor_isolated;
  }
  return rep;
}

}  // namespace patret

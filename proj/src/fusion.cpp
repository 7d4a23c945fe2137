#include "patret/fusion.hpp"

#include <json.hpp>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

void FusionSpec::validate() const {
  if (parts.empty()) fail(Errc::invalid_argument, "fusion spec has no parts");
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (static_cast<int>(parts[i]) <= static_cast<int>(parts[i - 1]))
      fail(Errc::invalid_argument,
           "fusion parts must be ordered A before B before C without repeats");
}

std::string FusionSpec::to_string() const {
  if (parts.size() == 1) return std::string(1, block_letter(parts[0]));
  std::string s;
  if (op == FusionOp::concat) {
    s += '[';
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) s += ',';
      s += block_letter(parts[i]);
    }
    s += ']';
  } else {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) s += '+';
      s += block_letter(parts[i]);
    }
  }
  return s;
}

namespace {

Block parse_block(const std::string& token, const std::string& whole) {
  std::string t;
  for (char c : token)
    if (c != ' ') t += c;
  if (t == "A" || t == "a") return Block::text;
  if (t == "B" || t == "b") return Block::citation;
  if (t == "C" || t == "c") return Block::inventor;
  fail(Errc::invalid_argument, "bad fusion part '" + token + "' in '" + whole + "'");
}

std::vector<Block> parse_parts(const std::string& body, char sep,
                               const std::string& whole) {
  std::vector<Block> parts;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t pos = body.find(sep, start);
    parts.push_back(parse_block(
        body.substr(start, pos == std::string::npos ? std::string::npos : pos - start),
        whole));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

FusionSpec FusionSpec::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) fail(Errc::invalid_argument, "empty fusion spec");

  FusionSpec spec;
  if (s.front() == '[') {
    if (s.back() != ']')
      fail(Errc::invalid_argument, "unterminated '[' in fusion spec '" + text + "'");
    spec.op = FusionOp::concat;
    spec.parts = parse_parts(s.substr(1, s.size() - 2), ',', text);
  } else if (s.find('+') != std::string::npos) {
    spec.op = FusionOp::add;
    spec.parts = parse_parts(s, '+', text);
  } else {
    spec.op = FusionOp::concat;
    spec.parts = {parse_block(s, text)};
  }
  spec.validate();
  return spec;
}

std::vector<FusionSpec> all_fusion_specs() {
  const char* names[] = {"A",     "B",     "C",     "A+B",   "B+C",  "A+C",
                         "A+B+C", "[A,B]", "[B,C]", "[A,C]", "[A,B,C]"};
  std::vector<FusionSpec> specs;
  for (const char* n : names) specs.push_back(FusionSpec::parse(n));
  return specs;
}

const VectorTable& BlockTables::get(Block b) const {
  const VectorTable* t = nullptr;
  switch (b) {
    case Block::text:     t = text; break;
    case Block::citation: t = citation; break;
    case Block::inventor: t = inventor; break;
  }
  if (!t)
    fail(Errc::invalid_argument,
         std::string("no table supplied for block ") + block_letter(b));
  return *t;
}

FusedVector fuse(const FusionSpec& spec, const std::string& patent_id,
                 const BlockTables& tables, MissingPolicy policy,
                 bool normalize_blocks) {
  spec.validate();

  FusedVector out;
  out.patent_id = patent_id;
  out.spec = spec;

  if (spec.op == FusionOp::add) {
    const Index d = tables.get(spec.parts[0]).dim();
    for (Block b : spec.parts)
      if (tables.get(b).dim() != d)
        fail(Errc::dim_mismatch,
             "add requires equal block dims; block " +
                 std::string(1, block_letter(b)) + " has dim " +
                 std::to_string(tables.get(b).dim()) + ", expected " +
                 std::to_string(d));
    out.vector = Vector::Zero(d);
  } else {
    Index total = 0;
    for (Block b : spec.parts) total += tables.get(b).dim();
    out.vector = Vector::Zero(total);
  }

  Index offset = 0;
  for (std::size_t p = 0; p < spec.parts.size(); ++p) {
    const VectorTable& table = tables.get(spec.parts[p]);
    const Index row = table.find(patent_id);
    if (row < 0) {
      if (policy == MissingPolicy::error)
        fail(Errc::missing_embedding,
             "patent '" + patent_id + "' has no block " +
                 std::string(1, block_letter(spec.parts[p])) + " embedding");
      out.missing_mask |= 1u << p;  // zero block stays in place
    } else {
      Vector block = table.vectors.row(row).transpose();
      if (normalize_blocks) {
        const Real n = block.norm();
        if (n > 0) block /= n;
      }
      if (spec.op == FusionOp::add)
        out.vector += block;
      else
        out.vector.segment(offset, table.dim()) = block;
    }
    if (spec.op == FusionOp::concat) offset += table.dim();
  }
  return out;
}

FusedTable fuse_all(const FusionSpec& spec, const CorpusIndex& corpus,
                    const BlockTables& tables, MissingPolicy policy,
                    bool normalize_blocks) {
  FusedTable fused;
  fused.spec = spec;
  fused.coverage.total = corpus.patents.size();

  bool sized = false;
  Index row = 0;
  for (const auto& rec : corpus.patents) {
    FusedVector v = fuse(spec, rec.patent_id, tables, policy, normalize_blocks);
    if (!sized) {
      fused.table.vectors.resize(corpus.size(), v.vector.size());
      sized = true;
    }
    fused.table.vectors.row(row) = v.vector.transpose();
    fused.table.keys.push_back(rec.patent_id);
    fused.table.index.emplace(rec.patent_id, row);
    ++row;

    if (!v.complete()) {
      ++fused.coverage.flagged;
      for (std::size_t p = 0; p < spec.parts.size(); ++p)
        if (v.missing_mask & (1u << p))
          ++fused.coverage.missing_by_block[static_cast<std::size_t>(spec.parts[p])];
    }
  }
  return fused;
}

void save_fusion_manifest(const FusedTable& fused, const std::string& path) {
  nlohmann::json j;
  j["spec"] = fused.spec.to_string();
  j["operator"] = fused.spec.op == FusionOp::concat ? "concat" : "add";
  std::string parts;
  for (Block b : fused.spec.parts) parts += block_letter(b);
  j["parts"] = parts;
  j["dim"] = fused.table.dim();
  j["patents"] = fused.coverage.total;
  j["zero_filled"] = fused.coverage.flagged;

  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace patret

// patret: patent retrieval from fused text / citation / inventor embeddings.
//
// Subcommands cover the full pipeline: ingest -> build-kg -> train-kg ->
// embed-text -> fuse -> select-embedding -> retrieve -> eval-recall ->
// concepts, plus demo-synthetic, which generates a small self-contained
// world and runs everything end to end.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "patret/classifier.hpp"
#include "patret/concepts.hpp"
#include "patret/corpus.hpp"
#include "patret/error.hpp"
#include "patret/evalrecall.hpp"
#include "patret/fusion.hpp"
#include "patret/kgraph.hpp"
#include "patret/retrieval.hpp"
#include "patret/synthetic.hpp"
#include "patret/textembed.hpp"
#include "patret/transe.hpp"
#include "patret/tsv.hpp"
#include "patret/vector_table.hpp"

namespace {

using namespace patret;

struct GlobalOpts {
  std::uint64_t seed = 42;
  int threads = 1;
  bool lenient = false;
};

Norm parse_norm(const std::string& s) {
  if (s == "L1" || s == "l1") return Norm::l1;
  if (s == "L2" || s == "l2") return Norm::l2;
  fail(Errc::invalid_argument, "norm must be L1 or L2, got '" + s + "'");
}

std::array<int, 3> parse_ratios(const std::string& s) {
  std::array<int, 3> ratios{};
  int parsed = 0;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t pos = s.find(':', start);
    const std::string tok = s.substr(
        start, pos == std::string::npos ? std::string::npos : pos - start);
    try {
      ratios[static_cast<std::size_t>(i)] = std::stoi(tok);
      ++parsed;
    } catch (const std::exception&) {
      break;
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parsed != 3)
    fail(Errc::invalid_argument, "ratios must look like 8:1:1, got '" + s + "'");
  return ratios;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(',', start);
    parts.push_back(s.substr(
        start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

void write_loss_history(const std::vector<Real>& history, const std::string& path) {
  auto out = open_output(path);
  out << "epoch\tmean_loss\n";
  for (std::size_t i = 0; i < history.size(); ++i)
    out << (i + 1) << '\t' << format_real(history[i], 6) << '\n';
}

// ---------------------------------------------------------------- ingest

struct IngestOpts {
  std::string patents, citations, inventors, out_report, out_patents;
};

void run_ingest(const IngestOpts& opt, const GlobalOpts& global) {
  const CorpusIndex corpus = load_patents(opt.patents, global.lenient);
  std::vector<CitationEdge> cites;
  std::vector<InventorEdge> inv;
  if (!opt.citations.empty())
    cites = load_citation_edges(opt.citations, global.lenient, nullptr, &corpus);
  if (!opt.inventors.empty())
    inv = load_inventor_edges(opt.inventors, global.lenient, nullptr, &corpus);

  const ValidationReport report = validate_corpus(corpus, cites, inv);
  std::cout << report.to_string();
  if (!opt.out_report.empty()) {
    auto out = open_output(opt.out_report);
    out << report.to_string();
  }
  if (!opt.out_patents.empty()) save_patents(corpus, opt.out_patents);
}

// -------------------------------------------------------------- build-kg

struct BuildKgOpts {
  std::string kind, edges, patents, out;
};

TripleStore load_and_build(const std::string& kind, const std::string& edges_path,
                           const CorpusIndex* corpus, bool lenient) {
  if (kind == "citation")
    return build_graph(load_citation_edges(edges_path, lenient, nullptr, corpus));
  if (kind == "inventor")
    return build_graph(load_inventor_edges(edges_path, lenient, nullptr, corpus));
  fail(Errc::invalid_argument, "kind must be citation or inventor");
}

void run_build_kg(const BuildKgOpts& opt, const GlobalOpts& global) {
  CorpusIndex corpus;
  const bool have_corpus = !opt.patents.empty();
  if (have_corpus) corpus = load_patents(opt.patents, global.lenient);
  const TripleStore store = load_and_build(
      opt.kind, opt.edges, have_corpus ? &corpus : nullptr, global.lenient);
  save_triples(store, opt.out);
  std::cout << opt.kind << " graph: " << store.triples.size() << " triples, "
            << store.entities.size() << " entities\n";
}

// -------------------------------------------------------------- train-kg

struct TrainKgOpts {
  std::string graph, edges, out, out_relations, loss_history;
  TransEConfig config;
  std::string norm = "L2";
  bool no_normalize = false;
};

void run_train_kg(const TrainKgOpts& opt, const GlobalOpts& global) {
  TransEConfig config = opt.config;
  config.norm = parse_norm(opt.norm);
  config.normalize_entities = !opt.no_normalize;
  config.seed = global.seed;
  config.threads = global.threads;

  const TripleStore store =
      load_and_build(opt.graph, opt.edges, nullptr, global.lenient);
  const TrainResult result = train(store, config);

  save_table(make_table(store.entities.keys, result.table.entity_vectors), opt.out);
  if (!opt.out_relations.empty())
    save_table(make_table(store.relations.keys, result.table.relation_vectors),
               opt.out_relations);
  if (!opt.loss_history.empty())
    write_loss_history(result.loss_history, opt.loss_history);

  std::cout << opt.graph << ": trained " << store.entities.size()
            << " entities for " << config.epochs << " epochs, final mean loss "
            << format_real(result.loss_history.back(), 6);
  if (result.skipped_facts > 0)
    std::cout << " (" << result.skipped_facts << " facts skipped)";
  std::cout << "\n";
}

// ------------------------------------------------------------ embed-text

struct EmbedTextOpts {
  std::string patents, mode = "fallback", in, out;
  Index dim = 384;
  std::size_t max_tokens = 256;
};

void run_embed_text(const EmbedTextOpts& opt, const GlobalOpts& global) {
  if (opt.mode == "ingest") {
    const VectorTable table = load_text_embeddings(opt.in);
    save_table(table, opt.out);
    std::cout << "ingested " << table.size() << " text embeddings (dim "
              << table.dim() << ")\n";
    return;
  }
  const CorpusIndex corpus = load_patents(opt.patents, global.lenient);
  if (opt.mode == "sequences") {
    emit_sequences(corpus, opt.out, opt.max_tokens);
    std::cout << "wrote " << corpus.size() << " sequences\n";
    return;
  }
  if (opt.mode != "fallback")
    fail(Errc::invalid_argument, "mode must be fallback, ingest, or sequences");
  const VectorTable table =
      fallback_embed_corpus(corpus, opt.dim, global.seed, opt.max_tokens);
  save_table(table, opt.out);
  std::cout << "embedded " << table.size() << " patents (dim " << opt.dim
            << ", fallback encoder)\n";
}

// ------------------------------------------------------------------ fuse

struct FuseOpts {
  std::string patents, text, citation, inventor, spec = "[A,B,C]", out;
  std::string missing_policy = "zero";
  bool normalize_blocks = false;
};

struct LoadedBlocks {
  VectorTable text, citation, inventor;
  BlockTables tables;
};

LoadedBlocks load_blocks(const std::string& text, const std::string& citation,
                         const std::string& inventor) {
  LoadedBlocks blocks;
  if (!text.empty()) {
    blocks.text = load_table(text);
    blocks.tables.text = &blocks.text;
  }
  if (!citation.empty()) {
    blocks.citation = load_table(citation);
    blocks.tables.citation = &blocks.citation;
  }
  if (!inventor.empty()) {
    blocks.inventor = load_table(inventor);
    blocks.tables.inventor = &blocks.inventor;
  }
  return blocks;
}

MissingPolicy parse_policy(const std::string& s) {
  if (s == "error") return MissingPolicy::error;
  if (s == "zero") return MissingPolicy::zero;
  fail(Errc::invalid_argument, "missing-policy must be error or zero");
}

void run_fuse(const FuseOpts& opt, const GlobalOpts& global) {
  const CorpusIndex corpus = load_patents(opt.patents, global.lenient);
  const LoadedBlocks blocks = load_blocks(opt.text, opt.citation, opt.inventor);
  const FusionSpec spec = FusionSpec::parse(opt.spec);

  const FusedTable fused = fuse_all(spec, corpus, blocks.tables,
                                    parse_policy(opt.missing_policy),
                                    opt.normalize_blocks);
  save_table(fused.table, opt.out);
  save_fusion_manifest(fused, opt.out + ".manifest.json");

  std::cout << "fused " << fused.coverage.total << " patents under "
            << spec.to_string() << " (dim " << fused.table.dim() << ")\n";
  if (fused.coverage.flagged > 0)
    std::cout << "zero-filled blocks for " << fused.coverage.flagged
              << " patents (A:" << fused.coverage.missing_by_block[0]
              << " B:" << fused.coverage.missing_by_block[1]
              << " C:" << fused.coverage.missing_by_block[2] << ")\n";
}

// ------------------------------------------------------ select-embedding

struct SelectOpts {
  std::string patents, text, citation, inventor, out;
  std::vector<std::string> specs;
  std::string ratios = "8:1:1";
  std::string averaging = "micro";
  MlpConfig config;
};

void run_select_embedding(const SelectOpts& opt, const GlobalOpts& global) {
  const CorpusIndex corpus = load_patents(opt.patents, global.lenient);
  const LoadedBlocks blocks = load_blocks(opt.text, opt.citation, opt.inventor);

  std::vector<FusionSpec> specs;
  if (opt.specs.empty()) {
    specs = all_fusion_specs();
  } else {
    for (const auto& s : opt.specs) specs.push_back(FusionSpec::parse(s));
  }

  MlpConfig config = opt.config;
  config.split_ratios = parse_ratios(opt.ratios);
  config.seed = global.seed;
  // input/output dims are derived per spec inside the selection run
  config.input_dim = 1;
  config.output_dim = 1;

  const PrfAveraging averaging =
      opt.averaging == "macro" ? PrfAveraging::macro : PrfAveraging::micro;
  const SelectionResult result =
      run_embedding_selection(corpus, specs, blocks.tables, config, averaging);
  save_selection_table(result, opt.out);

  if (result.excluded_zero_label > 0)
    std::cout << "excluded " << result.excluded_zero_label
              << " patents without labels\n";
  for (const auto& row : result.rows)
    std::cout << row.spec.to_string() << "\tdim " << row.embedding_size
              << "\ttop1 " << format_real(row.metrics.top1, 4) << "\tf1 "
              << format_real(row.metrics.f1, 4) << "\n";
}

// -------------------------------------------------------------- retrieve

struct RetrieveOpts {
  std::string seeds, embeddings, method = "mean", out;
  std::size_t k = 36;
  double min_score = -2.0;  // cosines live in [-1, 1]; default keeps all
};

void run_retrieve(const RetrieveOpts& opt, const GlobalOpts& global) {
  const VectorTable universe = load_table(opt.embeddings);
  const SeedSet seeds = SeedSet::create(load_id_file(opt.seeds), universe);
  auto results = retrieve_top_k(seeds, universe, parse_aggregation(opt.method),
                                opt.k, global.threads);
  std::erase_if(results,
                [&](const RankedResult& r) { return r.score < opt.min_score; });
  save_ranked(results, opt.out);
  std::cout << "retrieved " << results.size() << " of " << universe.size()
            << " candidates for " << seeds.patent_ids.size() << " seeds ("
            << opt.method << ")\n";
}

// ------------------------------------------------------------ eval-recall

struct EvalRecallOpts {
  std::string seeds, holdout, embeddings, methods = "mean,median,min,max";
  std::string out_curves, out_auc;
};

void run_eval_recall(const EvalRecallOpts& opt, const GlobalOpts& global) {
  const VectorTable universe = load_table(opt.embeddings);
  const SeedSet seeds = SeedSet::create(load_id_file(opt.seeds), universe);
  const auto holdout = load_id_file(opt.holdout);

  std::vector<Aggregation> methods;
  for (const auto& name : split_commas(opt.methods))
    methods.push_back(parse_aggregation(name));

  const auto curves =
      recall_experiment(seeds, holdout, universe, methods, global.threads);
  const auto compared = compare_methods(curves);
  if (!opt.out_curves.empty()) save_curves(curves, opt.out_curves);
  if (!opt.out_auc.empty()) save_aucs(compared, opt.out_auc);

  for (const auto& c : compared)
    std::cout << c.curve.method << "\tauc " << format_real(c.auc, 6)
              << (&c == &compared.front() ? "\t<- best" : "") << "\n";
}

// -------------------------------------------------------------- concepts

struct ConceptsOpts {
  std::string tokens_initial, tokens_retrieved;
  std::string patents_initial, patents_retrieved;
  std::vector<std::string> keywords;
  std::size_t min_freq = 2;
  std::string out_concepts, out_diff;
};

std::vector<TaggedDoc> docs_for(const std::string& tokens_path,
                                const std::string& patents_path, bool lenient) {
  std::vector<TaggedDoc> docs;
  if (!tokens_path.empty()) {
    for (auto& [id, doc] : load_tagged_tokens(tokens_path))
      docs.push_back(std::move(doc));
    return docs;
  }
  const CorpusIndex corpus = load_patents(patents_path, lenient);
  for (const auto& rec : corpus.patents)
    docs.push_back(fallback_tag(prepare_sequence(rec)));
  return docs;
}

void run_concepts(const ConceptsOpts& opt, const GlobalOpts& global) {
  if (opt.tokens_initial.empty() == opt.patents_initial.empty())
    fail(Errc::invalid_argument,
         "provide exactly one of --tokens-initial / --patents-initial");
  if (opt.tokens_retrieved.empty() == opt.patents_retrieved.empty())
    fail(Errc::invalid_argument,
         "provide exactly one of --tokens-retrieved / --patents-retrieved");

  const auto initial_docs =
      docs_for(opt.tokens_initial, opt.patents_initial, global.lenient);
  const auto retrieved_docs =
      docs_for(opt.tokens_retrieved, opt.patents_retrieved, global.lenient);

  const auto initial = count_concepts(initial_docs, opt.min_freq);
  const auto retrieved = count_concepts(retrieved_docs, opt.min_freq);
  const auto diff = compare_sets(initial, retrieved, opt.keywords);

  if (!opt.out_concepts.empty()) save_concepts(initial, retrieved, opt.out_concepts);
  if (!opt.out_diff.empty()) save_diff(diff, opt.out_diff);

  std::cout << initial.size() << " initial concepts, " << retrieved.size()
            << " retrieved concepts, " << diff.shared.size() << " shared\n";
  for (const auto& [keyword, present] : diff.keyword_presence)
    std::cout << "keyword '" << keyword << "' "
              << (present ? "present in" : "absent from") << " the retrieved set\n";
}

// -------------------------------------------------------- demo-synthetic

struct DemoOpts {
  std::string out_dir;
  Index kg_dim = 32;
  int kg_epochs = 150;
  int mlp_epochs = 30;
  std::size_t k = 36;
};

void run_demo(const DemoOpts& opt, const GlobalOpts& global) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  const auto path = [&](const char* name) {
    return (fs::path(opt.out_dir) / name).string();
  };

  DemoConfig demo_config;
  demo_config.seed = global.seed;
  const DemoData demo = make_demo_corpus(demo_config);

  save_patents(demo.corpus, path("patents.tsv"));
  save_citation_edges(demo.citations, path("citations.tsv"));
  save_inventor_edges(demo.inventors, path("inventors.tsv"));
  {
    auto out = open_output(path("seeds.txt"));
    for (const auto& id : demo.seed_ids) out << id << '\n';
    auto hout = open_output(path("holdout.txt"));
    for (const auto& id : demo.holdout_ids) hout << id << '\n';
  }
  std::cout << "[1/8] fixtures: " << demo.corpus.size() << " patents, "
            << demo.citations.size() << " citations, " << demo.inventors.size()
            << " inventor links\n";

  IngestOpts ingest;
  ingest.patents = path("patents.tsv");
  ingest.citations = path("citations.tsv");
  ingest.inventors = path("inventors.tsv");
  ingest.out_report = path("report.txt");
  run_ingest(ingest, global);
  std::cout << "[2/8] ingest report written\n";

  for (const std::string kind : {"citation", "inventor"}) {
    TrainKgOpts kg;
    kg.graph = kind;
    kg.edges = path(kind == "citation" ? "citations.tsv" : "inventors.tsv");
    kg.out = path(kind == "citation" ? "citation.emb" : "inventor.emb");
    kg.loss_history = kg.out + ".loss.tsv";
    kg.config.dim = opt.kg_dim;
    kg.config.epochs = opt.kg_epochs;
    run_train_kg(kg, global);
  }
  std::cout << "[3/8] knowledge graphs trained\n";

  EmbedTextOpts text;
  text.patents = path("patents.tsv");
  text.dim = opt.kg_dim;
  text.out = path("text.emb");
  run_embed_text(text, global);
  EmbedTextOpts seqs;
  seqs.patents = path("patents.tsv");
  seqs.mode = "sequences";
  seqs.out = path("sequences.tsv");
  run_embed_text(seqs, global);
  std::cout << "[4/8] text embeddings written\n";

  FuseOpts fuse_opt;
  fuse_opt.patents = path("patents.tsv");
  fuse_opt.text = path("text.emb");
  fuse_opt.citation = path("citation.emb");
  fuse_opt.inventor = path("inventor.emb");
  fuse_opt.out = path("fused.emb");
  run_fuse(fuse_opt, global);
  std::cout << "[5/8] fused [A,B,C] table written\n";

  SelectOpts select;
  select.patents = path("patents.tsv");
  select.text = path("text.emb");
  select.citation = path("citation.emb");
  select.inventor = path("inventor.emb");
  select.out = path("table1.tsv");
  select.config.epochs = opt.mlp_epochs;
  select.config.learning_rate = 1e-3;  // scaled up for the small demo corpus
  run_select_embedding(select, global);
  std::cout << "[6/8] embedding selection table written\n";

  RetrieveOpts retrieve;
  retrieve.seeds = path("seeds.txt");
  retrieve.embeddings = path("fused.emb");
  retrieve.k = opt.k;
  retrieve.out = path("ranked.tsv");
  run_retrieve(retrieve, global);

  EvalRecallOpts recall;
  recall.seeds = path("seeds.txt");
  recall.holdout = path("holdout.txt");
  recall.embeddings = path("fused.emb");
  recall.out_curves = path("curves.tsv");
  recall.out_auc = path("auc.tsv");
  run_eval_recall(recall, global);
  std::cout << "[7/8] retrieval and recall curves written\n";

  // concept diff: seed patents vs retrieved patents, built-in tagger
  const CorpusIndex corpus = load_patents(path("patents.tsv"));
  const auto write_subset = [&](const std::vector<std::string>& ids,
                                const char* name) {
    CorpusIndex subset;
    for (const auto& id : ids) {
      subset.patent_order.emplace(id, subset.size());
      subset.patents.push_back(*corpus.find(id));
    }
    save_patents(subset, path(name));
  };
  write_subset(demo.seed_ids, "initial_set.tsv");

  std::vector<std::string> retrieved_ids;
  for_each_line(path("ranked.tsv"),
                [&](std::size_t lineno, const std::string& line) {
                  if (lineno == 1 || line.empty()) return;
                  retrieved_ids.push_back(split_tabs(line)[1]);
                });
  write_subset(retrieved_ids, "retrieved_set.tsv");

  ConceptsOpts concepts;
  concepts.patents_initial = path("initial_set.tsv");
  concepts.patents_retrieved = path("retrieved_set.tsv");
  concepts.keywords = demo.keywords;
  concepts.out_concepts = path("concepts.tsv");
  concepts.out_diff = path("diff.tsv");
  run_concepts(concepts, global);
  std::cout << "[8/8] concept diff written\n"
            << "demo outputs in " << opt.out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patent retrieval from fused text and knowledge-graph embeddings"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (flags take precedence)");

  GlobalOpts global;
  app.add_option("--seed", global.seed, "base RNG seed")->capture_default_str();
  app.add_option("--threads", global.threads, "intra-command parallelism")
      ->capture_default_str();
  app.add_flag("--lenient", global.lenient,
               "skip malformed input rows instead of aborting");

  IngestOpts ingest;
  auto* cmd_ingest =
      app.add_subcommand("ingest", "load and validate the input tables");
  cmd_ingest->add_option("--patents", ingest.patents)->required();
  cmd_ingest->add_option("--citations", ingest.citations);
  cmd_ingest->add_option("--inventors", ingest.inventors);
  cmd_ingest->add_option("--out-report", ingest.out_report);
  cmd_ingest->add_option("--out-patents", ingest.out_patents,
                         "write the normalized corpus back out");

  BuildKgOpts build_kg;
  auto* cmd_build =
      app.add_subcommand("build-kg", "materialize a knowledge graph as triples");
  cmd_build->add_option("--kind", build_kg.kind, "citation|inventor")->required();
  cmd_build->add_option("--edges", build_kg.edges)->required();
  cmd_build->add_option("--patents", build_kg.patents,
                        "optional corpus for dangling-edge reporting");
  cmd_build->add_option("--out", build_kg.out, "triple TSV")->required();

  TrainKgOpts train_kg;
  auto* cmd_train = app.add_subcommand("train-kg", "train TransE on one graph");
  cmd_train->add_option("--graph", train_kg.graph, "citation|inventor")->required();
  cmd_train->add_option("--edges", train_kg.edges)->required();
  cmd_train->add_option("--out", train_kg.out, "entity embedding file")->required();
  cmd_train->add_option("--out-relations", train_kg.out_relations);
  cmd_train->add_option("--loss-history", train_kg.loss_history);
  cmd_train->add_option("--dim", train_kg.config.dim)->capture_default_str();
  cmd_train->add_option("--margin", train_kg.config.margin)->capture_default_str();
  cmd_train->add_option("--norm", train_kg.norm, "L1|L2")->capture_default_str();
  cmd_train->add_option("--lr", train_kg.config.learning_rate)->capture_default_str();
  cmd_train->add_option("--epochs", train_kg.config.epochs)->capture_default_str();
  cmd_train->add_option("--negatives", train_kg.config.negatives_per_positive)
      ->capture_default_str();
  cmd_train->add_option("--batch-size", train_kg.config.batch_size)
      ->capture_default_str();
  cmd_train->add_flag("--no-normalize", train_kg.no_normalize,
                      "skip per-batch entity normalization");
  cmd_train->add_flag("--type-constrained",
                      train_kg.config.type_constrained_negatives,
                      "draw negatives from slot-compatible entities only");

  EmbedTextOpts embed_text;
  auto* cmd_embed =
      app.add_subcommand("embed-text", "prepare sequences / text embeddings");
  cmd_embed->add_option("--patents", embed_text.patents);
  cmd_embed->add_option("--mode", embed_text.mode, "fallback|ingest|sequences")
      ->capture_default_str();
  cmd_embed->add_option("--in", embed_text.in, "external embedding file (ingest)");
  cmd_embed->add_option("--out", embed_text.out)->required();
  cmd_embed->add_option("--dim", embed_text.dim)->capture_default_str();
  cmd_embed->add_option("--max-tokens", embed_text.max_tokens)->capture_default_str();

  FuseOpts fuse_opts;
  auto* cmd_fuse = app.add_subcommand("fuse", "combine embedding blocks");
  cmd_fuse->add_option("--patents", fuse_opts.patents)->required();
  cmd_fuse->add_option("--text", fuse_opts.text, "block A embeddings");
  cmd_fuse->add_option("--citation", fuse_opts.citation, "block B embeddings");
  cmd_fuse->add_option("--inventor", fuse_opts.inventor, "block C embeddings");
  cmd_fuse->add_option("--spec", fuse_opts.spec)->capture_default_str();
  cmd_fuse->add_option("--missing-policy", fuse_opts.missing_policy, "error|zero")
      ->capture_default_str();
  cmd_fuse->add_flag("--normalize-blocks", fuse_opts.normalize_blocks);
  cmd_fuse->add_option("--out", fuse_opts.out)->required();

  SelectOpts select;
  auto* cmd_select = app.add_subcommand(
      "select-embedding", "train the classifier on every fusion scheme");
  cmd_select->add_option("--patents", select.patents)->required();
  cmd_select->add_option("--text", select.text);
  cmd_select->add_option("--citation", select.citation);
  cmd_select->add_option("--inventor", select.inventor);
  cmd_select->add_option("--spec", select.specs,
                         "fusion spec (repeatable; default: all 11)");
  cmd_select->add_option("--hidden", select.config.hidden_dim)->capture_default_str();
  cmd_select->add_option("--dropout", select.config.dropout_rate)
      ->capture_default_str();
  cmd_select->add_option("--lr", select.config.learning_rate)->capture_default_str();
  cmd_select->add_option("--batch-size", select.config.batch_size)
      ->capture_default_str();
  cmd_select->add_option("--epochs", select.config.epochs)->capture_default_str();
  cmd_select->add_option("--split-ratios", select.ratios)->capture_default_str();
  cmd_select->add_option("--averaging", select.averaging, "micro|macro")
      ->capture_default_str();
  cmd_select->add_option("--out", select.out)->required();

  RetrieveOpts retrieve;
  auto* cmd_retrieve =
      app.add_subcommand("retrieve", "rank candidates against a seed set");
  cmd_retrieve->add_option("--seeds", retrieve.seeds, "one patent id per line")
      ->required();
  cmd_retrieve->add_option("--embeddings", retrieve.embeddings)->required();
  cmd_retrieve->add_option("--method", retrieve.method, "mean|median|min|max")
      ->capture_default_str();
  cmd_retrieve->add_option("--k", retrieve.k)->capture_default_str();
  cmd_retrieve->add_option("--min-score", retrieve.min_score,
                           "drop results scoring below this");
  cmd_retrieve->add_option("--out", retrieve.out)->required();

  EvalRecallOpts recall;
  auto* cmd_recall = app.add_subcommand(
      "eval-recall", "rank a known-relevant holdout and compare aggregations");
  cmd_recall->add_option("--seeds", recall.seeds)->required();
  cmd_recall->add_option("--holdout", recall.holdout)->required();
  cmd_recall->add_option("--embeddings", recall.embeddings)->required();
  cmd_recall->add_option("--methods", recall.methods)->capture_default_str();
  cmd_recall->add_option("--out-curves", recall.out_curves);
  cmd_recall->add_option("--out-auc", recall.out_auc);

  ConceptsOpts concepts;
  auto* cmd_concepts = app.add_subcommand(
      "concepts", "extract and diff noun-phrase concepts between two sets");
  cmd_concepts->add_option("--tokens-initial", concepts.tokens_initial,
                           "doc_id<TAB>surface<TAB>pos file");
  cmd_concepts->add_option("--tokens-retrieved", concepts.tokens_retrieved);
  cmd_concepts->add_option("--patents-initial", concepts.patents_initial,
                           "patent TSV (built-in tagger)");
  cmd_concepts->add_option("--patents-retrieved", concepts.patents_retrieved);
  cmd_concepts->add_option("--keyword", concepts.keywords,
                           "seed keyword to flag (repeatable)");
  cmd_concepts->add_option("--min-freq", concepts.min_freq)->capture_default_str();
  cmd_concepts->add_option("--out-concepts", concepts.out_concepts);
  cmd_concepts->add_option("--out-diff", concepts.out_diff);

  DemoOpts demo;
  auto* cmd_demo = app.add_subcommand(
      "demo-synthetic", "generate a synthetic corpus and run the whole pipeline");
  cmd_demo->add_option("--out-dir", demo.out_dir)->required();
  cmd_demo->add_option("--kg-dim", demo.kg_dim)->capture_default_str();
  cmd_demo->add_option("--kg-epochs", demo.kg_epochs)->capture_default_str();
  cmd_demo->add_option("--mlp-epochs", demo.mlp_epochs)->capture_default_str();
  cmd_demo->add_option("--k", demo.k)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
  }

  try {
    if (cmd_ingest->parsed()) run_ingest(ingest, global);
    if (cmd_build->parsed()) run_build_kg(build_kg, global);
    if (cmd_train->parsed()) run_train_kg(train_kg, global);
    if (cmd_embed->parsed()) run_embed_text(embed_text, global);
    if (cmd_fuse->parsed()) run_fuse(fuse_opts, global);
    if (cmd_select->parsed()) run_select_embedding(select, global);
    if (cmd_retrieve->parsed()) run_retrieve(retrieve, global);
    if (cmd_recall->parsed()) run_eval_recall(recall, global);
    if (cmd_concepts->parsed()) run_concepts(concepts, global);
    if (cmd_demo->parsed()) run_demo(demo, global);
  } catch (const patret::Error& e) {
    std::cerr << "patret: error [" << e.code_name() << "] " << e.what() << "\n";
    return e.code() == Errc::diverged_loss ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "patret: error [Internal] " << e.what() << "\n";
    return 1;
  }
  return 0;
}

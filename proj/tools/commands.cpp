#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/corpus.hpp"
#include "alignkit/error.hpp"
#include "alignkit/eval.hpp"
#include "alignkit/hmm.hpp"
#include "alignkit/kernels.hpp"
#include "alignkit/model1.hpp"
#include "alignkit/model2.hpp"
#include "alignkit/model_io.hpp"
#include "alignkit/parallel.hpp"
#include "alignkit/phrase.hpp"
#include "alignkit/project.hpp"
#include "alignkit/synth.hpp"

namespace alignkit::cli {
namespace {

struct Settings {
  std::string config;
  unsigned threads = 0;
  std::string kernels = "auto";

  // train / align
  std::string bitext = "-";
  std::string out = "-";
  std::string model_path;
  std::string src_vocab;
  std::string tgt_vocab;
  std::string model_kind = "model1";
  std::size_t iters = 5;
  std::size_t model1_iters = 5;
  bool no_null = false;
  double lambda = 4.0;
  std::optional<double> p0;
  std::size_t width = 5;
  double epsilon = 1.0;
  double floor = kDefaultFloor;
  std::size_t max_vocab = 0;
  bool lowercase = false;
  bool reverse = false;

  // symmetrize
  std::string fwd;
  std::string rev;
  std::string heuristic = "grow-diag-final";
  bool transpose_rev = false;

  // eval
  std::string hyp = "-";
  std::string gold;
  bool per_sentence = false;
  std::string format = "summary";

  // extract-phrases / project
  std::string align;
  std::size_t max_len = kDefaultMaxPhraseLength;
  std::string tags;
  std::string spans;
  std::string spans_out;

  // synth
  SynthConfig synth;
  std::string gold_out;
  std::string pharaoh_out;
};

const CLI::Validator kAtLeastOne(
    [](std::string& value) -> std::string {
      long long n = 0;
      if (!CLI::detail::lexical_cast(value, n) || n < 1) return "must be >= 1, got " + value;
      return {};
    },
    ">=1");

std::unique_ptr<CLI::App> make_app(Settings& s) {
  auto app = std::make_unique<CLI::App>(
      "alignkit: unsupervised word alignment (IBM Model 1, diagonal Model 2, HMM), "
      "symmetrization, AER evaluation, phrase extraction and annotation projection",
      "alignkit");
  app->require_subcommand(1);
  app->fallthrough();
  app->option_defaults()->always_capture_default();

  app->add_option("--config", s.config,
                  "key=value file supplying defaults for the chosen subcommand "
                  "(keys are flag names without dashes; [section] headers scope keys to a "
                  "subcommand; command-line flags win)");
  app->add_option("--threads", s.threads, "Worker threads; 0 = available parallelism");
  app->add_option("--kernels", s.kernels, "Numeric kernel backend")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  auto lowercase = [&](CLI::App* sub) {
    sub->add_flag("--lowercase", s.lowercase, "Lowercase ASCII letters while tokenizing");
  };

  auto* train = app->add_subcommand("train", "Train an alignment model on a bitext");
  train->add_option("--bitext", s.bitext, "Input bitext, one 'source ||| target' pair per line");
  train->add_option("--out,-o", s.model_path,
                    "Model file to write; vocabularies go to OUT.src.vcb and OUT.tgt.vcb")
      ->required();
  train->add_option("--model", s.model_kind, "Model to train")
      ->check(CLI::IsMember({"model1", "model2", "hmm"}));
  train->add_option("--iters", s.iters,
                    "EM iterations (Baum-Welch iterations for hmm); must be >= 1")
      ->check(kAtLeastOne);
  train->add_option("--model1-iters", s.model1_iters,
                    "hmm only: Model 1 iterations used to initialize the t-table (0 = uniform)");
  train->add_flag("--no-null", s.no_null, "Disable the NULL target word");
  train->add_option("--lambda", s.lambda, "model2 only: diagonal tension")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--p0", s.p0,
                    "NULL probability: model2 prior mass on NULL (default 0.08), hmm NULL "
                    "transition probability (default 0.2)")
      ->check(CLI::Range(0.0, 1.0));
  train->add_option("--width", s.width, "hmm only: jump buckets cover [-w, w]")
      ->check(kAtLeastOne);
  train->add_option("--epsilon", s.epsilon, "Length constant epsilon in the likelihood")
      ->check(CLI::PositiveNumber);
  train->add_option("--floor", s.floor, "Probability floor applied before normalization")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--max-vocab", s.max_vocab,
                    "Keep only the N most frequent words per side (0 = unlimited)");
  lowercase(train);
  train->add_flag("--reverse", s.reverse, "Swap sides: train p(target words | source words)");

  auto* align = app->add_subcommand("align", "Decode alignments with a trained model");
  align->add_option("--model", s.model_path, "Model file written by 'train'")->required();
  align->add_option("--bitext", s.bitext, "Input bitext ('-' = stdin)");
  align->add_option("--out,-o", s.out, "Pharaoh output ('-' = stdout)");
  align->add_option("--src-vocab", s.src_vocab, "Source vocabulary (default MODEL.src.vcb)");
  align->add_option("--tgt-vocab", s.tgt_vocab, "Target vocabulary (default MODEL.tgt.vcb)");
  lowercase(align);
  align->add_flag("--reverse", s.reverse,
                  "The model was trained with --reverse; links are still written source-target");
  align->add_option("--floor", s.floor, "Probability for unseen word pairs")
      ->check(CLI::NonNegativeNumber);

  auto* sym = app->add_subcommand("symmetrize", "Combine forward and reverse alignments");
  sym->add_option("--fwd", s.fwd, "Forward alignments, Pharaoh ('-' = stdin)")->required();
  sym->add_option("--rev", s.rev,
                  "Reverse alignments in source-target orientation ('-' = stdin)")
      ->required();
  sym->add_flag("--transpose-rev", s.transpose_rev,
                "The reverse file is in target-source orientation; transpose it first");
  sym->add_option("--heuristic", s.heuristic, "Combination heuristic")
      ->check(CLI::IsMember({"intersect", "union", "grow-diag-final", "grow-diag-final-and"}));
  sym->add_option("--bitext", s.bitext,
                  "Optional bitext giving sentence lengths (otherwise inferred from links)");
  sym->add_option("--out,-o", s.out, "Pharaoh output ('-' = stdout)");

  auto* ev = app->add_subcommand("eval", "Score alignments against gold (AER, P, R, F1)");
  ev->add_option("--hyp", s.hyp, "Hypothesis alignments, Pharaoh ('-' = stdin)");
  ev->add_option("--gold", s.gold, "Gold links: 'sent_id src tgt [S|P]', 1-based")->required();
  ev->add_option("--format", s.format, "Corpus report layout")
      ->check(CLI::IsMember({"summary", "tsv"}));
  ev->add_flag("--per-sentence", s.per_sentence, "Append a per-sentence TSV table");
  ev->add_option("--out,-o", s.out, "Report output ('-' = stdout)");

  auto* ex = app->add_subcommand("extract-phrases", "Extract a phrase table");
  ex->add_option("--bitext", s.bitext, "Input bitext")->required();
  ex->add_option("--align", s.align, "Alignments, Pharaoh, one line per bitext line")->required();
  ex->add_option("--max-len", s.max_len, "Maximum phrase length on either side")
      ->check(kAtLeastOne);
  lowercase(ex);
  ex->add_option("--out,-o", s.out, "Phrase table output ('-' = stdout)");

  auto* pr = app->add_subcommand("project", "Project source annotations onto the target side");
  pr->add_option("--bitext", s.bitext, "Input bitext")->required();
  pr->add_option("--align", s.align, "Alignments, Pharaoh, one line per bitext line")->required();
  pr->add_option("--tags", s.tags, "Tagged source sentences, 'token/TAG ...' per line");
  pr->add_option("--spans", s.spans,
                 "Source spans, TSV 'sent_id start end label' (1-based id, 0-based inclusive)");
  pr->add_option("--out,-o", s.out, "Projected tagged target sentences ('-' = stdout)");
  pr->add_option("--spans-out", s.spans_out,
                 "Projected spans output (default: --out when --tags is not given)");
  lowercase(pr);

  auto* sy = app->add_subcommand("synth", "Generate a synthetic bitext with gold alignments");
  sy->add_option("--pairs", s.synth.pairs, "Number of sentence pairs");
  sy->add_option("--vocab", s.synth.vocabulary, "Lexicon size");
  sy->add_option("--min-len", s.synth.min_length, "Minimum source length");
  sy->add_option("--max-len", s.synth.max_length, "Maximum source length");
  sy->add_option("--swap", s.synth.swap_prob, "Adjacent-swap probability")
      ->check(CLI::Range(0.0, 1.0));
  sy->add_option("--null-rate", s.synth.null_rate, "Unaligned filler insertion rate")
      ->check(CLI::Range(0.0, 1.0));
  sy->add_option("--zipf", s.synth.zipf, "Zipf exponent of the word distribution")
      ->check(CLI::NonNegativeNumber);
  sy->add_option("--seed", s.synth.seed, "Random seed");
  sy->add_option("--out,-o", s.out, "Bitext output ('-' = stdout)");
  sy->add_option("--gold-out", s.gold_out, "Gold links file (all sure)");
  sy->add_option("--pharaoh-out", s.pharaoh_out, "Gold links as Pharaoh lines");

  return app;
}

// ---------------------------------------------------------------------------
// files

class Input {
 public:
  Input(const std::string& path, std::istream& fallback) : stream_(&fallback) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw IoError("cannot open '" + path + "' for reading");
      stream_ = &file_;
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path), stream_(&fallback) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw IoError("error writing '" + path_ + "'");
    if (file_.is_open()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

void warn_skipped(std::ostream& err, const LoadReport& report) {
  if (report.skipped_lines.empty()) return;
  err << "warning: " << report.skipped_lines.size()
      << " pair(s) with an empty side skipped (first at line " << report.skipped_lines.front()
      << ")\n";
}

std::vector<std::pair<std::size_t, std::size_t>> lengths_of(const std::vector<RawPair>& lines) {
  std::vector<std::pair<std::size_t, std::size_t>> lengths;
  lengths.reserve(lines.size());
  for (const auto& p : lines) lengths.emplace_back(p.source.size(), p.target.size());
  return lengths;
}

void require_same_count(std::size_t a, std::size_t b, const char* what_a, const char* what_b) {
  if (a == b) return;
  throw FormatError(std::string(what_a) + " has " + std::to_string(a) + " records but " + what_b +
                        " has " + std::to_string(b),
                    std::min(a, b) + 1);
}

// ---------------------------------------------------------------------------
// train

void print_ll(std::ostream& err, const char* stage, const std::vector<double>& lls) {
  for (std::size_t k = 0; k < lls.size(); ++k) {
    err << stage << " iteration " << k + 1 << " log-likelihood " << std::setprecision(12)
        << lls[k] << '\n';
  }
}

int cmd_train(const Settings& s, std::istream& in, std::ostream& err) {
  LoadOptions options;
  options.lowercase = s.lowercase;
  options.max_vocabulary = s.max_vocab == 0 ? kUnlimitedVocabulary : s.max_vocab;
  options.threads = s.threads;
  LoadReport report;
  Bitext bitext;
  {
    Input input(s.bitext, in);
    bitext = load_bitext(input.get(), options, &report);
  }
  warn_skipped(err, report);
  if (bitext.empty()) throw FormatError("bitext contains no usable sentence pairs");
  if (s.reverse) bitext = reversed(bitext);

  Model1Config lexical;
  lexical.iterations = s.iters;
  lexical.use_null = !s.no_null;
  lexical.epsilon = s.epsilon;
  lexical.floor = s.floor;
  lexical.threads = s.threads;

  std::ostringstream model;
  if (s.model_kind == "model1") {
    const auto trained = model1::train(bitext, lexical);
    print_ll(err, "model1", trained.log_likelihoods);
    write_model1(model, trained.table);
  } else if (s.model_kind == "model2") {
    Model2Config config;
    config.lexical = lexical;
    config.prior.tension = s.lambda;
    config.prior.null_prob = s.p0.value_or(DiagonalPrior{}.null_prob);
    const auto trained = model2::train(bitext, config);
    print_ll(err, "model2", trained.log_likelihoods);
    write_model2(model, trained.params);
  } else {
    HmmConfig config;
    config.iterations = s.iters;
    config.model1_iterations = s.model1_iters;
    config.use_null = !s.no_null;
    config.width = s.width;
    config.null_prob = s.p0.value_or(HmmConfig{}.null_prob);
    config.epsilon = s.epsilon;
    config.floor = s.floor;
    config.threads = s.threads;
    const auto trained = hmm::train(bitext, config);
    print_ll(err, "model1", trained.model1_log_likelihoods);
    print_ll(err, "hmm", trained.log_likelihoods);
    write_hmm(model, trained.params);
  }

  // Vocabularies are written in the model's own orientation.
  const std::pair<std::string, const Vocabulary*> files[] = {
      {s.model_path + ".src.vcb", &bitext.source_vocab},
      {s.model_path + ".tgt.vcb", &bitext.target_vocab},
  };
  for (const auto& [path, vocab] : files) {
    Output o(path, err);
    write_vocabulary(o.get(), *vocab);
    o.close();
  }
  Output o(s.model_path, err);
  o.get() << model.str();
  o.close();
  return kOk;
}

// ---------------------------------------------------------------------------
// align

Vocabulary load_vocab(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open vocabulary '" + path + "'");
  return read_vocabulary(f);
}

bool vocab_mismatch(const TranslationTable& table, const Vocabulary& src, const Vocabulary& tgt) {
  if (table.row_count() > tgt.size() + 1) return true;
  for (TargetRow r = 0; r < table.row_count(); ++r) {
    for (const WordId f : table.row_sources(r)) {
      if (f >= src.size()) return true;
    }
  }
  return false;
}

int cmd_align(const Settings& s, std::istream& in, std::ostream& out, std::ostream& err) {
  LoadedModel model;
  {
    Input input(s.model_path, in);
    model = read_model(input.get());
  }
  const auto src_vocab = load_vocab(s.src_vocab.empty() ? s.model_path + ".src.vcb" : s.src_vocab);
  const auto tgt_vocab = load_vocab(s.tgt_vocab.empty() ? s.model_path + ".tgt.vcb" : s.tgt_vocab);
  if (vocab_mismatch(model.table, src_vocab, tgt_vocab)) {
    err << "warning: model and vocabulary files do not match; "
           "out-of-range words are treated as UNK\n";
  }

  LoadOptions options;
  options.lowercase = s.lowercase;
  LoadReport report;
  std::vector<RawPair> lines;
  {
    Input input(s.bitext, in);
    lines = read_raw_lines(input.get(), options, &report);
  }
  if (!report.skipped_lines.empty()) {
    err << "warning: " << report.skipped_lines.size()
        << " pair(s) with an empty side get empty alignments (first at line "
        << report.skipped_lines.front() << ")\n";
  }

  const auto m2 = model.model2();
  const auto hp = model.hmm();
  std::vector<AlignmentSet> result(lines.size());
  parallel_chunks(lines.size(), s.threads, [] { return 0; },
                  [&](int&, std::size_t begin, std::size_t end) {
                    for (std::size_t k = begin; k < end; ++k) {
                      const auto& raw = lines[k];
                      const auto& src = s.reverse ? raw.target : raw.source;
                      const auto& tgt = s.reverse ? raw.source : raw.target;
                      if (src.empty() || tgt.empty()) {
                        result[k] = AlignmentSet(raw.source.size(), raw.target.size());
                        continue;
                      }
                      const SentencePair pair = encode(src, tgt, src_vocab, tgt_vocab);
                      AlignmentFunction a;
                      switch (model.kind) {
                        case ModelKind::model1:
                          a = model1::posterior_align(pair, model.table, model.use_null, s.floor);
                          break;
                        case ModelKind::model2:
                          a = model2::align(pair, m2, s.floor);
                          break;
                        case ModelKind::hmm:
                          a = hmm::viterbi_decode(pair, hp, s.floor);
                          break;
                      }
                      result[k] = s.reverse ? transpose(to_set(a)) : to_set(a);
                    }
                  });

  Output o(s.out, out);
  write_pharaoh(o.get(), result);
  o.close();
  return kOk;
}

// ---------------------------------------------------------------------------
// symmetrize

AlignmentSet reshape(const AlignmentSet& a, std::size_t m, std::size_t n) {
  return AlignmentSet(m, n, std::vector<Link>(a.links().begin(), a.links().end()));
}

int cmd_symmetrize(const Settings& s, std::istream& in, std::ostream& out) {
  if (s.fwd == "-" && s.rev == "-") throw ConfigError("--fwd and --rev cannot both be stdin");
  std::vector<std::pair<std::size_t, std::size_t>> lengths;
  const bool have_bitext = s.bitext != "-";
  if (have_bitext) {
    Input input(s.bitext, in);
    lengths = lengths_of(read_raw_lines(input.get()));
  }
  std::vector<std::pair<std::size_t, std::size_t>> rev_lengths;
  for (const auto& [m, n] : lengths) rev_lengths.emplace_back(s.transpose_rev ? n : m, s.transpose_rev ? m : n);

  std::vector<AlignmentSet> fwd;
  std::vector<AlignmentSet> rev;
  {
    Input input(s.fwd, in);
    fwd = read_pharaoh(input.get(), lengths);
  }
  {
    Input input(s.rev, in);
    rev = read_pharaoh(input.get(), rev_lengths);
  }
  require_same_count(fwd.size(), rev.size(), "forward alignment file", "reverse alignment file");
  if (have_bitext) require_same_count(fwd.size(), lengths.size(), "alignment files", "bitext");

  std::vector<AlignmentSet> combined;
  combined.reserve(fwd.size());
  for (std::size_t k = 0; k < fwd.size(); ++k) {
    AlignmentSet f = fwd[k];
    AlignmentSet r = s.transpose_rev ? transpose(rev[k]) : rev[k];
    if (!have_bitext) {
      const auto m = std::max(f.source_length(), r.source_length());
      const auto n = std::max(f.target_length(), r.target_length());
      f = reshape(f, m, n);
      r = reshape(r, m, n);
    }
    if (s.heuristic == "intersect") {
      combined.push_back(intersect(f, r));
    } else if (s.heuristic == "union") {
      combined.push_back(unite(f, r));
    } else if (s.heuristic == "grow-diag-final") {
      combined.push_back(grow_diag_final(f, r, FinalVariant::final_or));
    } else {
      combined.push_back(grow_diag_final(f, r, FinalVariant::final_and));
    }
  }
  Output o(s.out, out);
  write_pharaoh(o.get(), combined);
  o.close();
  return kOk;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const Settings& s, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<AlignmentSet> hyp;
  {
    Input input(s.hyp, in);
    hyp = read_pharaoh(input.get());
  }
  GoldAlignment gold;
  {
    Input input(s.gold, in);
    gold = parse_gold(input.get());
  }
  const auto report = evaluate_corpus(hyp, gold);
  if (!report.missing_gold.empty()) {
    err << "warning: " << report.missing_gold.size()
        << " hypothesis sentence(s) have no gold and were skipped\n";
  }
  if (!report.missing_hypothesis.empty()) {
    err << "warning: " << report.missing_hypothesis.size()
        << " gold sentence(s) have no hypothesis and were skipped\n";
  }
  Output o(s.out, out);
  if (s.format == "tsv") {
    write_report_tsv(o.get(), report);
  } else {
    write_report_summary(o.get(), report);
  }
  if (s.per_sentence) write_sentence_tsv(o.get(), report);
  o.close();
  return kOk;
}

// ---------------------------------------------------------------------------
// extract-phrases / project

std::vector<RawPair> read_lines(const Settings& s, std::istream& in) {
  LoadOptions options;
  options.lowercase = s.lowercase;
  Input input(s.bitext, in);
  return read_raw_lines(input.get(), options);
}

std::vector<AlignmentSet> read_alignments(const Settings& s, std::istream& in,
                                          const std::vector<RawPair>& lines) {
  const auto lengths = lengths_of(lines);
  Input input(s.align, in);
  auto alignments = read_pharaoh(input.get(), lengths);
  require_same_count(lines.size(), alignments.size(), "bitext", "alignment file");
  return alignments;
}

int cmd_extract(const Settings& s, std::istream& in, std::ostream& out) {
  const auto lines = read_lines(s, in);
  const auto alignments = read_alignments(s, in, lines);
  std::vector<std::pair<std::string, std::string>> extracted;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    for (const auto& phrase : extract_consistent_phrases(alignments[k], s.max_len)) {
      extracted.push_back(realize(phrase, lines[k].source, lines[k].target));
    }
  }
  const auto table = build_phrase_table(extracted);
  Output o(s.out, out);
  write_phrase_table(o.get(), table);
  o.close();
  return kOk;
}

int cmd_project(const Settings& s, std::istream& in, std::ostream& out) {
  if (s.tags.empty() && s.spans.empty()) throw ConfigError("project needs --tags and/or --spans");
  const auto lines = read_lines(s, in);
  const auto alignments = read_alignments(s, in, lines);

  std::vector<LabeledSentence> annotations;
  if (!s.tags.empty()) {
    Input input(s.tags, in);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input.get(), line)) {
      annotations.push_back(parse_tagged_line(line, ++line_no));
    }
  } else {
    for (const auto& p : lines) annotations.push_back(LabeledSentence{p.source, {}, {}});
  }
  if (!s.spans.empty()) {
    Input input(s.spans, in);
    for (auto& record : read_span_records(input.get())) {
      if (record.sentence == 0 || record.sentence > annotations.size()) {
        throw FormatError("span record refers to sentence " + std::to_string(record.sentence) +
                          " but there are " + std::to_string(annotations.size()));
      }
      annotations[record.sentence - 1].spans.push_back(std::move(record.span));
    }
  }

  const auto projected = project_corpus(lines, alignments, annotations);

  if (!s.tags.empty()) {
    Output o(s.out, out);
    for (const auto& sentence : projected.sentences) {
      o.get() << format_tagged(sentence.tokens, sentence.tags) << '\n';
    }
    o.close();
  }
  if (!s.spans.empty()) {
    std::vector<SpanRecord> records;
    for (std::size_t k = 0; k < projected.sentences.size(); ++k) {
      for (const auto& span : projected.sentences[k].spans) records.push_back({k + 1, span});
    }
    const std::string path = !s.spans_out.empty() ? s.spans_out : (s.tags.empty() ? s.out : "");
    if (path.empty()) throw ConfigError("--spans-out is required when both --tags and --spans are given");
    Output o(path, out);
    write_span_records(o.get(), records);
    o.close();
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const Settings& s, std::ostream& out) {
  const auto corpus = generate_synthetic(s.synth);
  {
    Output o(s.out, out);
    for (const auto& p : corpus.pairs) {
      auto& os = o.get();
      for (std::size_t k = 0; k < p.source.size(); ++k) os << (k ? " " : "") << p.source[k];
      os << kPairSeparator;
      for (std::size_t k = 0; k < p.target.size(); ++k) os << (k ? " " : "") << p.target[k];
      os << '\n';
    }
    o.close();
  }
  if (!s.gold_out.empty()) {
    Output o(s.gold_out, out);
    write_gold(o.get(), corpus.gold);
    o.close();
  }
  if (!s.pharaoh_out.empty()) {
    Output o(s.pharaoh_out, out);
    write_pharaoh(o.get(), corpus.gold);
    o.close();
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// config file

std::string trim(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(" \t\r");
  return std::string(text.substr(b, e - b + 1));
}

// Appends "--key=value" for every config entry whose flag was not given on
// the command line. Unknown keys are usage errors.
std::vector<std::string> apply_config(const std::string& path, const CLI::App& app,
                                      const CLI::App& sub, std::vector<std::string> args) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open config file '" + path + "'");
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(text).substr(0, eq));
    std::string value = trim(std::string_view(text).substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      section = key.substr(0, dot);
      key = key.substr(dot + 1);
    }
    if (!section.empty() && section != sub.get_name()) continue;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw ConfigError("config files cannot include other config files");
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

const CLI::App* selected(const CLI::App& app) {
  const auto subs = app.get_subcommands();
  return subs.empty() ? nullptr : subs.front();
}

int dispatch(const std::string& name, const Settings& s, std::istream& in, std::ostream& out,
             std::ostream& err) {
  if (s.kernels == "scalar") {
    kernels::set_active_backend(kernels::Backend::scalar);
  } else if (s.kernels == "avx2") {
    if (!kernels::backend_available(kernels::Backend::avx2)) {
      throw ConfigError("avx2 kernels are not available on this machine");
    }
    kernels::set_active_backend(kernels::Backend::avx2);
  } else {
    kernels::set_active_backend(kernels::detect_backend());
  }

  if (name == "train") return cmd_train(s, in, err);
  if (name == "align") return cmd_align(s, in, out, err);
  if (name == "symmetrize") return cmd_symmetrize(s, in, out);
  if (name == "eval") return cmd_eval(s, in, out, err);
  if (name == "extract-phrases") return cmd_extract(s, in, out);
  if (name == "project") return cmd_project(s, in, out);
  return cmd_synth(s, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Settings settings;
  auto app = make_app(settings);
  try {
    std::vector<std::string> reversed_args(args.rbegin(), args.rend());
    app->parse(reversed_args);

    if (!settings.config.empty()) {
      const auto* sub = selected(*app);
      auto augmented = apply_config(settings.config, *app, *sub, args);
      settings = Settings{};
      app = make_app(settings);
      std::vector<std::string> again(augmented.rbegin(), augmented.rend());
      app->parse(again);
    }
  } catch (const CLI::ParseError& e) {
    return app->exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const auto* sub = selected(*app);
  try {
    return dispatch(sub->get_name(), settings, in, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kData;
  }
}

}  // namespace alignkit::cli

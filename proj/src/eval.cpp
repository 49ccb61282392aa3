#include "alignkit/eval.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include "alignkit/error.hpp"

namespace alignkit {
namespace {

std::size_t intersection_size(std::span<const Link> a, std::span<const Link> b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

void sort_unique(std::vector<Link>& links) {
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
}

}  // namespace

LinkCounts& LinkCounts::operator+=(const LinkCounts& other) {
  hypothesis += other.hypothesis;
  sure += other.sure;
  hypothesis_sure += other.hypothesis_sure;
  hypothesis_possible += other.hypothesis_possible;
  return *this;
}

LinkCounts count_links(std::span<const Link> hypothesis, std::span<const Link> sure,
                       std::span<const Link> possible) {
  return LinkCounts{hypothesis.size(), sure.size(), intersection_size(hypothesis, sure),
                    intersection_size(hypothesis, possible)};
}

Metrics metrics_from_counts(const LinkCounts& c) {
  Metrics m;
  const std::size_t denom = c.hypothesis + c.sure;
  m.aer = denom == 0 ? 0.0
                     : 1.0 - static_cast<double>(c.hypothesis_sure + c.hypothesis_possible) /
                                 static_cast<double>(denom);
  m.precision = c.hypothesis == 0 ? 1.0
                                  : static_cast<double>(c.hypothesis_possible) /
                                        static_cast<double>(c.hypothesis);
  m.recall = c.sure == 0 ? 1.0
                         : static_cast<double>(c.hypothesis_sure) / static_cast<double>(c.sure);
  const double s = m.precision + m.recall;
  m.f1 = s == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / s;
  return m;
}

double aer(std::span<const Link> hypothesis, std::span<const Link> sure,
           std::span<const Link> possible) {
  return metrics_from_counts(count_links(hypothesis, sure, possible)).aer;
}

Metrics precision_recall(std::span<const Link> hypothesis, std::span<const Link> sure,
                         std::span<const Link> possible) {
  return metrics_from_counts(count_links(hypothesis, sure, possible));
}

GoldAlignment parse_gold(std::istream& in) {
  GoldAlignment gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> parts{std::istream_iterator<std::string>(fields),
                                   std::istream_iterator<std::string>()};
    if (parts.empty()) continue;
    if (parts.size() < 3 || parts.size() > 4) {
      throw FormatError("expected 'sentence_id src_pos tgt_pos [S|P]'", line_no);
    }
    std::size_t values[3];
    for (int k = 0; k < 3; ++k) {
      const auto& text = parts[static_cast<std::size_t>(k)];
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), values[k]);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("non-integer field '" + text + "'", line_no);
      }
    }
    if (values[1] == 0 || values[2] == 0) throw FormatError("positions are 1-based", line_no);
    bool sure = true;
    if (parts.size() == 4) {
      if (parts[3] == "S") {
        sure = true;
      } else if (parts[3] == "P") {
        sure = false;
      } else {
        throw FormatError("flag must be S or P, got '" + parts[3] + "'", line_no);
      }
    }
    const Link link{static_cast<std::uint32_t>(values[1] - 1),
                    static_cast<std::uint32_t>(values[2] - 1)};
    auto& sentence = gold.sentences[values[0]];
    if (sure) sentence.sure.push_back(link);
    sentence.possible.push_back(link);
  }
  for (auto& [id, sentence] : gold.sentences) {
    sort_unique(sentence.sure);
    sort_unique(sentence.possible);
  }
  return gold;
}

void write_gold(std::ostream& out, std::span<const AlignmentSet> alignments) {
  for (std::size_t k = 0; k < alignments.size(); ++k) {
    for (const Link& link : alignments[k].links()) {
      out << k + 1 << ' ' << link.source + 1 << ' ' << link.target + 1 << " S\n";
    }
  }
}

EvalReport evaluate_corpus(std::span<const AlignmentSet> hypotheses, const GoldAlignment& gold) {
  EvalReport report;
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    const std::size_t id = k + 1;
    const auto it = gold.sentences.find(id);
    if (it == gold.sentences.end()) {
      report.missing_gold.push_back(id);
      continue;
    }
    SentenceReport s;
    s.id = id;
    s.counts = count_links(hypotheses[k].links(), it->second.sure, it->second.possible);
    s.metrics = metrics_from_counts(s.counts);
    report.totals += s.counts;
    report.sentences.push_back(s);
  }
  for (const auto& [id, sentence] : gold.sentences) {
    if (id == 0 || id > hypotheses.size()) report.missing_hypothesis.push_back(id);
  }
  report.evaluated = report.sentences.size();
  report.corpus = metrics_from_counts(report.totals);
  return report;
}

void write_report_tsv(std::ostream& out, const EvalReport& report) {
  out << "aer\t" << report.corpus.aer << '\n'
      << "precision\t" << report.corpus.precision << '\n'
      << "recall\t" << report.corpus.recall << '\n'
      << "f1\t" << report.corpus.f1 << '\n'
      << "hypothesis_links\t" << report.totals.hypothesis << '\n'
      << "sure_links\t" << report.totals.sure << '\n'
      << "hypothesis_sure\t" << report.totals.hypothesis_sure << '\n'
      << "hypothesis_possible\t" << report.totals.hypothesis_possible << '\n'
      << "sentences_evaluated\t" << report.evaluated << '\n'
      << "sentences_missing_gold\t" << report.missing_gold.size() << '\n'
      << "sentences_missing_hypothesis\t" << report.missing_hypothesis.size() << '\n';
}

void write_report_summary(std::ostream& out, const EvalReport& report) {
  const auto pct = [](double v) { return v * 100.0; };
  out << "Evaluated " << report.evaluated << " sentences";
  if (!report.missing_gold.empty() || !report.missing_hypothesis.empty()) {
    out << " (skipped " << report.missing_gold.size() << " without gold, "
        << report.missing_hypothesis.size() << " without hypothesis)";
  }
  out << "\n  AER       " << pct(report.corpus.aer) << "\n  Precision " << pct(report.corpus.precision)
      << "\n  Recall    " << pct(report.corpus.recall) << "\n  F1        " << pct(report.corpus.f1)
      << "\n  |A|=" << report.totals.hypothesis << " |S|=" << report.totals.sure
      << " |A&S|=" << report.totals.hypothesis_sure
      << " |A&P|=" << report.totals.hypothesis_possible << '\n';
}

void write_sentence_tsv(std::ostream& out, const EvalReport& report) {
  out << "id\taer\tprecision\trecall\tf1\n";
  for (const auto& r : report.sentences) {
    out << r.id << '\t' << r.metrics.aer << '\t' << r.metrics.precision << '\t' << r.metrics.recall
        << '\t' << r.metrics.f1 << '\n';
  }
}

}  // namespace alignkit

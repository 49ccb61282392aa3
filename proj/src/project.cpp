#include "alignkit/project.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "alignkit/error.hpp"

namespace alignkit {
namespace {

void check_fits(const AlignmentSet& alignment, std::size_t m, std::size_t n) {
  for (const Link l : alignment.links()) {
    if (l.source >= m || l.target >= n) {
      throw DimensionError("alignment link " + std::to_string(l.source) + "-" +
                           std::to_string(l.target) + " outside a " + std::to_string(m) + "x" +
                           std::to_string(n) + " sentence pair");
    }
  }
}

std::size_t parse_size(std::string_view text, std::size_t line_no) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("non-integer field '" + std::string(text) + "'", line_no);
  }
  return value;
}

}  // namespace

std::vector<std::string> project_token_labels(std::span<const std::string> source_tags,
                                              const AlignmentSet& alignment,
                                              std::size_t target_length) {
  check_fits(alignment, source_tags.size(), target_length);
  std::vector<std::vector<std::uint32_t>> sources(target_length);
  for (const Link l : alignment.links()) sources[l.target].push_back(l.source);

  std::vector<std::string> out(target_length, std::string(kOutsideTag));
  for (std::size_t i = 0; i < target_length; ++i) {
    const auto& linked = sources[i];  // ascending source order
    if (linked.empty()) continue;
    // Candidates in order of first (leftmost) appearance; a strictly larger
    // count is needed to displace an earlier candidate.
    std::vector<std::pair<std::string_view, std::size_t>> votes;
    for (const auto j : linked) {
      const std::string_view tag = source_tags[j];
      auto it = std::find_if(votes.begin(), votes.end(), [&](const auto& v) { return v.first == tag; });
      if (it == votes.end()) {
        votes.emplace_back(tag, 1);
      } else {
        ++it->second;
      }
    }
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    out[i] = std::string(best->first);
  }
  return out;
}

std::vector<LabeledSpan> project_spans(std::span<const LabeledSpan> source_spans,
                                       const AlignmentSet& alignment, std::size_t target_length) {
  std::size_t m = alignment.source_length();
  for (const auto& s : source_spans) m = std::max(m, s.last + 1);
  check_fits(alignment, m, target_length);

  std::vector<const LabeledSpan*> order;
  for (const auto& s : source_spans) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const LabeledSpan* a, const LabeledSpan* b) { return a->first < b->first; });

  std::vector<LabeledSpan> kept;
  for (const LabeledSpan* s : order) {
    if (s->first > s->last) throw DimensionError("span start after span end");
    bool any = false;
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (const Link l : alignment.links()) {
      if (l.source < s->first || l.source > s->last) continue;
      lo = any ? std::min<std::size_t>(lo, l.target) : l.target;
      hi = any ? std::max<std::size_t>(hi, l.target) : l.target;
      any = true;
    }
    if (!any) continue;
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const LabeledSpan& k) {
      return lo <= k.last && k.first <= hi;
    });
    if (!overlaps) kept.push_back({lo, hi, s->label});
  }
  std::sort(kept.begin(), kept.end(),
            [](const LabeledSpan& a, const LabeledSpan& b) { return a.first < b.first; });
  return kept;
}

std::vector<Arc> project_arcs(std::span<const Arc> source_arcs, const AlignmentSet& alignment) {
  auto image = [&](std::size_t j) -> std::optional<std::size_t> {
    for (const Link l : alignment.links()) {
      if (l.source == j) return l.target;  // links sorted, so this is the leftmost
    }
    return std::nullopt;
  };
  std::vector<Arc> out;
  for (const Arc& arc : source_arcs) {
    const auto head = image(arc.head);
    const auto dep = image(arc.dependent);
    if (head && dep) out.push_back({*head, *dep, arc.label});
  }
  return out;
}

LabeledSentence parse_tagged_line(std::string_view line, std::size_t line_no) {
  LabeledSentence sentence;
  std::vector<std::string> items;
  try {
    items = tokenize(line);
  } catch (const EncodingError& e) {
    throw FormatError(e.what(), line_no);
  }
  for (const auto& item : items) {
    const auto slash = item.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == item.size()) {
      sentence.tokens.push_back(item);
      sentence.tags.emplace_back(kOutsideTag);
    } else {
      sentence.tokens.push_back(item.substr(0, slash));
      sentence.tags.push_back(item.substr(slash + 1));
    }
  }
  return sentence;
}

std::string format_tagged(std::span<const std::string> tokens, std::span<const std::string> tags) {
  std::string out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k > 0) out += ' ';
    out += tokens[k];
    out += '/';
    out += k < tags.size() ? tags[k] : std::string(kOutsideTag);
  }
  return out;
}

std::vector<SpanRecord> read_span_records(std::istream& in) {
  std::vector<SpanRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (int k = 0; k < 3; ++k) {
      const auto tab = rest.find('\t');
      if (tab == std::string_view::npos) {
        throw FormatError("expected sent_id<TAB>start<TAB>end<TAB>label", line_no);
      }
      fields.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    SpanRecord record;
    record.sentence = parse_size(fields[0], line_no);
    record.span.first = parse_size(fields[1], line_no);
    record.span.last = parse_size(fields[2], line_no);
    record.span.label = std::string(rest);
    if (record.sentence == 0) throw FormatError("sentence ids are 1-based", line_no);
    if (record.span.first > record.span.last) throw FormatError("span start after end", line_no);
    out.push_back(std::move(record));
  }
  return out;
}

void write_span_records(std::ostream& out, std::span<const SpanRecord> records) {
  for (const auto& r : records) {
    out << r.sentence << '\t' << r.span.first << '\t' << r.span.last << '\t' << r.span.label << '\n';
  }
}

ProjectedCorpus project_corpus(std::span<const RawPair> bitext,
                               std::span<const AlignmentSet> alignments,
                               std::span<const LabeledSentence> annotations) {
  const std::size_t common = std::min({bitext.size(), alignments.size(), annotations.size()});
  if (bitext.size() != alignments.size() || bitext.size() != annotations.size()) {
    throw FormatError("bitext, alignment and annotation record counts differ (" +
                          std::to_string(bitext.size()) + "/" + std::to_string(alignments.size()) +
                          "/" + std::to_string(annotations.size()) + "); first divergent record " +
                          std::to_string(common + 1),
                      common + 1);
  }

  ProjectedCorpus out;
  out.sentences.reserve(bitext.size());
  for (std::size_t k = 0; k < bitext.size(); ++k) {
    const auto& pair = bitext[k];
    const auto& ann = annotations[k];
    if (ann.tokens.size() != pair.source.size()) {
      throw FormatError("annotation has " + std::to_string(ann.tokens.size()) +
                            " tokens but the source sentence has " +
                            std::to_string(pair.source.size()),
                        k + 1);
    }
    LabeledSentence projected;
    projected.tokens = pair.target;
    try {
      if (!ann.tags.empty()) {
        projected.tags = project_token_labels(ann.tags, alignments[k], pair.target.size());
      }
      projected.spans = project_spans(ann.spans, alignments[k], pair.target.size());
    } catch (const DimensionError& e) {
      throw FormatError(e.what(), k + 1);
    }
    out.sentences.push_back(std::move(projected));
  }
  return out;
}

}  // namespace alignkit

#include "alignkit/ttable.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "alignkit/error.hpp"

namespace alignkit {
namespace {

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

TranslationTable TranslationTable::from_cooccurrence(const Bitext& bitext, bool use_null) {
  WordId max_target = 0;
  for (const auto& p : bitext.pairs) {
    for (const WordId e : p.target) max_target = std::max(max_target, e);
  }
  const std::size_t rows = bitext.empty() ? 1 : static_cast<std::size_t>(max_target) + 2;

  std::vector<std::vector<WordId>> pattern(rows);
  for (const auto& p : bitext.pairs) {
    for (const WordId e : p.target) {
      auto& row = pattern[row_of(e)];
      row.insert(row.end(), p.source.begin(), p.source.end());
    }
    if (use_null) pattern[kNullRow].insert(pattern[kNullRow].end(), p.source.begin(), p.source.end());
  }

  TranslationTable table;
  table.row_offsets_.assign(rows + 1, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    auto& row = pattern[r];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    table.row_offsets_[r + 1] = table.row_offsets_[r] + row.size();
  }
  table.sources_.reserve(table.row_offsets_.back());
  table.probs_.reserve(table.row_offsets_.back());
  for (const auto& row : pattern) {
    const double uniform = row.empty() ? 0.0 : 1.0 / static_cast<double>(row.size());
    table.sources_.insert(table.sources_.end(), row.begin(), row.end());
    table.probs_.insert(table.probs_.end(), row.size(), uniform);
  }
  return table;
}

TranslationTable TranslationTable::from_entries(std::size_t row_count, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.source < b.source;
  });
  TranslationTable table;
  table.row_offsets_.assign(row_count + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.row >= row_count) throw FormatError("table row " + std::to_string(e.row) + " out of range");
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].source == e.source) {
      throw FormatError("duplicate table entry (" + std::to_string(e.row) + ", " +
                        std::to_string(e.source) + ")");
    }
    ++table.row_offsets_[e.row + 1];
    table.sources_.push_back(e.source);
    table.probs_.push_back(e.prob);
  }
  for (std::size_t r = 0; r < row_count; ++r) table.row_offsets_[r + 1] += table.row_offsets_[r];
  return table;
}

std::optional<std::size_t> TranslationTable::slot(TargetRow row, WordId source) const {
  if (row >= row_count()) return std::nullopt;
  const auto first = sources_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
  const auto last = sources_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, source);
  if (it == last || *it != source) return std::nullopt;
  return static_cast<std::size_t>(it - sources_.begin());
}

double TranslationTable::prob_or(TargetRow row, WordId source, double fallback) const {
  const auto s = slot(row, source);
  return s ? probs_[*s] : fallback;
}

std::span<const WordId> TranslationTable::row_sources(TargetRow row) const {
  return std::span<const WordId>(sources_).subspan(row_offsets_[row], row_size(row));
}

std::span<const double> TranslationTable::row_probs(TargetRow row) const {
  return std::span<const double>(probs_).subspan(row_offsets_[row], row_size(row));
}

void TranslationTable::normalize_counts(std::span<const double> counts, double floor) {
  if (counts.size() != probs_.size()) throw DimensionError("count buffer does not match table");
  for (std::size_t r = 0; r < row_count(); ++r) {
    const std::size_t begin = row_offsets_[r];
    const std::size_t end = row_offsets_[r + 1];
    double total = 0.0;
    for (std::size_t s = begin; s < end; ++s) {
      probs_[s] = std::max(counts[s], floor);
      total += probs_[s];
    }
    for (std::size_t s = begin; s < end; ++s) probs_[s] /= total;
  }
}

double max_abs_difference(const TranslationTable& a, const TranslationTable& b) {
  if (a.row_count() != b.row_count() || a.entry_count() != b.entry_count()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (TargetRow r = 0; r < a.row_count(); ++r) {
    const auto sa = a.row_sources(r);
    const auto sb = b.row_sources(r);
    if (!std::equal(sa.begin(), sa.end(), sb.begin(), sb.end())) {
      return std::numeric_limits<double>::infinity();
    }
  }
  for (std::size_t s = 0; s < a.entry_count(); ++s) {
    worst = std::max(worst, std::abs(a.probs()[s] - b.probs()[s]));
  }
  return worst;
}

void write_table_rows(std::ostream& out, const TranslationTable& table) {
  out << kTableHeader << '\n';
  for (TargetRow r = 0; r < table.row_count(); ++r) {
    const long long e_id = static_cast<long long>(r) - 1;
    const auto sources = table.row_sources(r);
    const auto probs = table.row_probs(r);
    for (std::size_t k = 0; k < sources.size(); ++k) {
      out << e_id << '\t' << sources[k] << '\t' << format_double(probs[k]) << '\n';
    }
  }
}

TableReadResult read_table(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FormatError("empty model file", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTableHeader) {
    throw FormatError("expected header '" + std::string(kTableHeader) + "'", line_no);
  }

  TableReadResult result;
  std::vector<TranslationTable::Entry> entries;
  std::size_t rows = 1;
  bool in_trailer = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!in_trailer) {
      const auto tab1 = line.find('\t');
      const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
      long long e_id = 0;
      unsigned long long f_id = 0;
      double prob = 0.0;
      bool numeric = tab2 != std::string::npos && line.find('\t', tab2 + 1) == std::string::npos;
      if (numeric) {
        const char* b = line.data();
        const auto r1 = std::from_chars(b, b + tab1, e_id);
        const auto r2 = std::from_chars(b + tab1 + 1, b + tab2, f_id);
        const auto r3 = std::from_chars(b + tab2 + 1, b + line.size(), prob);
        numeric = r1.ec == std::errc{} && r1.ptr == b + tab1 && r2.ec == std::errc{} &&
                  r2.ptr == b + tab2 && r3.ec == std::errc{} && r3.ptr == b + line.size();
      }
      if (numeric) {
        if (e_id < -1 || f_id > std::numeric_limits<WordId>::max() || !(prob >= 0.0) ||
            !std::isfinite(prob)) {
          throw FormatError("table entry out of range", line_no);
        }
        const auto row = static_cast<TargetRow>(e_id + 1);
        rows = std::max<std::size_t>(rows, static_cast<std::size_t>(row) + 1);
        entries.push_back({row, static_cast<WordId>(f_id), prob});
        continue;
      }
      in_trailer = true;
      result.trailer_first_line = line_no;
    }
    result.trailer.push_back(line);
  }
  try {
    result.table = TranslationTable::from_entries(rows, std::move(entries));
  } catch (const FormatError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
  return result;
}

}  // namespace alignkit

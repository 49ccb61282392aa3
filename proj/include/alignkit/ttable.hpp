#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "alignkit/corpus.hpp"

namespace alignkit {

/// Row index into a TranslationTable: row 0 is the NULL pseudo-target, row
/// e + 1 holds target word e.
using TargetRow = std::uint32_t;
inline constexpr TargetRow kNullRow = 0;
inline constexpr TargetRow row_of(WordId target) { return target + 1; }

inline constexpr std::string_view kTableHeader = "alignkit-ttable v1";

/// Lexical parameters t(f|e): for each target row a sparse distribution over
/// source ids, stored in compressed rows sorted by source id. The sparsity
/// pattern is fixed at construction; training only rewrites probabilities.
class TranslationTable {
 public:
  TranslationTable() = default;

  /// Pattern of every (e, f) that co-occurs in some pair, plus (NULL, f) for
  /// every source id in the bitext when use_null is set. Probabilities are
  /// uniform within each row.
  static TranslationTable from_cooccurrence(const Bitext& bitext, bool use_null);

  /// Rows and entries given explicitly; entries need not be sorted.
  struct Entry {
    TargetRow row;
    WordId source;
    double prob;
  };
  static TranslationTable from_entries(std::size_t row_count, std::vector<Entry> entries);

  std::size_t row_count() const { return row_offsets_.empty() ? 0 : row_offsets_.size() - 1; }
  std::size_t entry_count() const { return sources_.size(); }
  bool has_null() const { return row_count() > 0 && row_size(kNullRow) > 0; }
  std::size_t row_size(TargetRow row) const {
    return row < row_count() ? row_offsets_[row + 1] - row_offsets_[row] : 0;
  }

  /// Flat slot of (row, source) or nullopt when the pair is not stored.
  std::optional<std::size_t> slot(TargetRow row, WordId source) const;

  /// Stored probability, or `fallback` when (row, source) is not stored.
  double prob_or(TargetRow row, WordId source, double fallback) const;

  std::span<const double> probs() const { return probs_; }
  std::span<double> probs() { return probs_; }
  std::span<const WordId> row_sources(TargetRow row) const;
  std::span<const double> row_probs(TargetRow row) const;
  std::size_t row_begin(TargetRow row) const { return row_offsets_[row]; }

  /// M-step: counts indexed by slot; each count is floored at `floor` and
  /// every non-empty row is renormalized.
  void normalize_counts(std::span<const double> counts, double floor);

  friend bool operator==(const TranslationTable&, const TranslationTable&) = default;

 private:
  std::vector<std::size_t> row_offsets_;
  std::vector<WordId> sources_;
  std::vector<double> probs_;
};

/// Largest absolute difference between two tables with the same pattern;
/// +infinity when the patterns differ.
double max_abs_difference(const TranslationTable& a, const TranslationTable& b);

/// Writes the header and "e_id<TAB>f_id<TAB>prob" rows in (e_id, f_id) order,
/// NULL as e_id -1. Probabilities use round-trip precision.
void write_table_rows(std::ostream& out, const TranslationTable& table);

/// Reads the header and rows; stops at (and returns) the first line that is
/// not a table row so callers can parse model-specific trailers.
struct TableReadResult {
  TranslationTable table;
  std::vector<std::string> trailer;  // remaining non-empty lines
  std::size_t trailer_first_line = 0;
};
TableReadResult read_table(std::istream& in);

}  // namespace alignkit

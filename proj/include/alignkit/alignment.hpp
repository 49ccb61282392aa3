#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alignkit {

/// One alignment point: source position j, target position i (both 0-based).
struct Link {
  std::uint32_t source = 0;
  std::uint32_t target = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

/// Relation view of an alignment: a duplicate-free set of in-bounds links for a
/// sentence pair of lengths m (source) and n (target). Links are kept sorted by
/// (source, target).
class AlignmentSet {
 public:
  AlignmentSet() = default;
  AlignmentSet(std::size_t source_length, std::size_t target_length);
  /// Sorts and deduplicates; throws DimensionError on out-of-bounds links.
  AlignmentSet(std::size_t source_length, std::size_t target_length, std::vector<Link> links);

  std::size_t source_length() const { return source_length_; }
  std::size_t target_length() const { return target_length_; }
  std::span<const Link> links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }

  bool contains(Link link) const;
  /// Returns false if the link was already present. Throws DimensionError if out of bounds.
  bool insert(Link link);

  friend bool operator==(const AlignmentSet&, const AlignmentSet&) = default;

 private:
  std::size_t source_length_ = 0;
  std::size_t target_length_ = 0;
  std::vector<Link> links_;
};

/// Function view: for every source position, a target position or NULL (the
/// null word e_0).
class AlignmentFunction {
 public:
  using Entry = std::optional<std::uint32_t>;

  AlignmentFunction() = default;
  /// All source positions start NULL.
  AlignmentFunction(std::size_t source_length, std::size_t target_length);
  /// Throws DimensionError if an entry is out of bounds.
  AlignmentFunction(std::size_t target_length, std::vector<Entry> entries);

  std::size_t source_length() const { return entries_.size(); }
  std::size_t target_length() const { return target_length_; }
  const Entry& operator[](std::size_t j) const { return entries_[j]; }
  void set(std::size_t j, Entry target);
  std::span<const Entry> entries() const { return entries_; }

  friend bool operator==(const AlignmentFunction&, const AlignmentFunction&) = default;

 private:
  std::size_t target_length_ = 0;
  std::vector<Entry> entries_;
};

/// Link (j, a_j) for every non-NULL entry.
AlignmentSet to_set(const AlignmentFunction& alignment);

/// (j, i) -> (i, j); lengths swap.
AlignmentSet transpose(const AlignmentSet& alignment);

/// Both operands must share dimensions (rev already transposed); DimensionError otherwise.
AlignmentSet intersect(const AlignmentSet& fwd, const AlignmentSet& rev);
AlignmentSet unite(const AlignmentSet& fwd, const AlignmentSet& rev);

enum class FinalVariant {
  /// Moses grow-diag-final: final step adds a point if its row OR column is unaligned.
  final_or,
  /// grow-diag-final-and: final step requires both row AND column unaligned.
  final_and,
};

/// Intersection, then 8-neighbour growth from the union to a fixpoint, then
/// the final pass over fwd and rev links. Scan orders are fixed so the
/// result is deterministic.
AlignmentSet grow_diag_final(const AlignmentSet& fwd, const AlignmentSet& rev,
                             FinalVariant variant = FinalVariant::final_or);

/// "j-i" pairs separated by single spaces, 0-based.
std::string format_pharaoh(const AlignmentSet& alignment);

/// Parses one Pharaoh line. line_no is used only in error messages.
std::vector<Link> parse_pharaoh_links(std::string_view line, std::size_t line_no = 0);

/// Reads one alignment per line. Dimensions come from `lengths` when given
/// (one (m, n) per line; bounds are then checked), otherwise from the largest
/// index on the line.
std::vector<AlignmentSet> read_pharaoh(
    std::istream& in, std::span<const std::pair<std::size_t, std::size_t>> lengths = {});

void write_pharaoh(std::ostream& out, std::span<const AlignmentSet> alignments);

}  // namespace alignkit

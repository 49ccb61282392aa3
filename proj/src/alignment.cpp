#include "alignkit/alignment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>

#include "alignkit/error.hpp"

namespace alignkit {
namespace {

void check_bounds(Link link, std::size_t m, std::size_t n) {
  if (link.source >= m || link.target >= n) {
    throw DimensionError("link " + std::to_string(link.source) + "-" + std::to_string(link.target) +
                         " outside a " + std::to_string(m) + "x" + std::to_string(n) + " pair");
  }
}

void check_same_shape(const AlignmentSet& a, const AlignmentSet& b) {
  if (a.source_length() != b.source_length() || a.target_length() != b.target_length()) {
    throw DimensionError("alignment dimensions differ: " + std::to_string(a.source_length()) + "x" +
                         std::to_string(a.target_length()) + " vs " +
                         std::to_string(b.source_length()) + "x" +
                         std::to_string(b.target_length()));
  }
}

// Dense occupancy grid plus row/column link counts, used by the symmetrizer.
class Grid {
 public:
  Grid(std::size_t m, std::size_t n) : m_(m), n_(n), cells_(m * n, 0), rows_(m, 0), cols_(n, 0) {}

  bool inside(long j, long i) const {
    return j >= 0 && i >= 0 && static_cast<std::size_t>(j) < m_ && static_cast<std::size_t>(i) < n_;
  }
  bool has(std::size_t j, std::size_t i) const { return cells_[j * n_ + i] != 0; }
  bool row_aligned(std::size_t j) const { return rows_[j] != 0; }
  bool col_aligned(std::size_t i) const { return cols_[i] != 0; }

  void add(std::size_t j, std::size_t i) {
    cells_[j * n_ + i] = 1;
    ++rows_[j];
    ++cols_[i];
  }

  AlignmentSet to_set() const {
    std::vector<Link> links;
    for (std::size_t j = 0; j < m_; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (has(j, i)) links.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(i)});
      }
    }
    return AlignmentSet(m_, n_, std::move(links));
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<unsigned char> cells_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
};

// (dj, di) offsets, clockwise starting at (-1,-1).
constexpr std::array<std::pair<int, int>, 8> kNeighbours = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1},
}};

}  // namespace

AlignmentSet::AlignmentSet(std::size_t source_length, std::size_t target_length)
    : source_length_(source_length), target_length_(target_length) {}

AlignmentSet::AlignmentSet(std::size_t source_length, std::size_t target_length,
                           std::vector<Link> links)
    : source_length_(source_length), target_length_(target_length), links_(std::move(links)) {
  for (const Link l : links_) check_bounds(l, source_length_, target_length_);
  std::sort(links_.begin(), links_.end());
  links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
}

bool AlignmentSet::contains(Link link) const {
  return std::binary_search(links_.begin(), links_.end(), link);
}

bool AlignmentSet::insert(Link link) {
  check_bounds(link, source_length_, target_length_);
  const auto it = std::lower_bound(links_.begin(), links_.end(), link);
  if (it != links_.end() && *it == link) return false;
  links_.insert(it, link);
  return true;
}

AlignmentFunction::AlignmentFunction(std::size_t source_length, std::size_t target_length)
    : target_length_(target_length), entries_(source_length) {}

AlignmentFunction::AlignmentFunction(std::size_t target_length, std::vector<Entry> entries)
    : target_length_(target_length), entries_(std::move(entries)) {
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (entries_[j] && *entries_[j] >= target_length_) {
      throw DimensionError("a_" + std::to_string(j) + " = " + std::to_string(*entries_[j]) +
                           " exceeds target length " + std::to_string(target_length_));
    }
  }
}

void AlignmentFunction::set(std::size_t j, Entry target) {
  if (j >= entries_.size() || (target && *target >= target_length_)) {
    throw DimensionError("alignment function entry out of bounds");
  }
  entries_[j] = target;
}

AlignmentSet to_set(const AlignmentFunction& alignment) {
  std::vector<Link> links;
  for (std::size_t j = 0; j < alignment.source_length(); ++j) {
    if (const auto& a = alignment[j]) links.push_back({static_cast<std::uint32_t>(j), *a});
  }
  return AlignmentSet(alignment.source_length(), alignment.target_length(), std::move(links));
}

AlignmentSet transpose(const AlignmentSet& alignment) {
  std::vector<Link> links;
  links.reserve(alignment.size());
  for (const Link l : alignment.links()) links.push_back({l.target, l.source});
  return AlignmentSet(alignment.target_length(), alignment.source_length(), std::move(links));
}

AlignmentSet intersect(const AlignmentSet& fwd, const AlignmentSet& rev) {
  check_same_shape(fwd, rev);
  std::vector<Link> links;
  std::set_intersection(fwd.links().begin(), fwd.links().end(), rev.links().begin(),
                        rev.links().end(), std::back_inserter(links));
  return AlignmentSet(fwd.source_length(), fwd.target_length(), std::move(links));
}

AlignmentSet unite(const AlignmentSet& fwd, const AlignmentSet& rev) {
  check_same_shape(fwd, rev);
  std::vector<Link> links;
  std::set_union(fwd.links().begin(), fwd.links().end(), rev.links().begin(), rev.links().end(),
                 std::back_inserter(links));
  return AlignmentSet(fwd.source_length(), fwd.target_length(), std::move(links));
}

AlignmentSet grow_diag_final(const AlignmentSet& fwd, const AlignmentSet& rev,
                             FinalVariant variant) {
  check_same_shape(fwd, rev);
  const std::size_t m = fwd.source_length();
  const std::size_t n = fwd.target_length();
  const AlignmentSet candidates = unite(fwd, rev);

  Grid grid(m, n);
  const AlignmentSet common = intersect(fwd, rev);
  for (const Link l : common.links()) grid.add(l.source, l.target);

  // Growth sees points added earlier in the same sweep.
  bool added = true;
  while (added) {
    added = false;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!grid.has(j, i)) continue;
        for (const auto& [dj, di] : kNeighbours) {
          const long pj = static_cast<long>(j) + dj;
          const long pi = static_cast<long>(i) + di;
          if (!grid.inside(pj, pi)) continue;
          const auto uj = static_cast<std::size_t>(pj);
          const auto ui = static_cast<std::size_t>(pi);
          if (grid.has(uj, ui)) continue;
          if (!candidates.contains({static_cast<std::uint32_t>(uj), static_cast<std::uint32_t>(ui)})) {
            continue;
          }
          if (!grid.row_aligned(uj) || !grid.col_aligned(ui)) {
            grid.add(uj, ui);
            added = true;
          }
        }
      }
    }
  }

  // Row/column tests in the final step look at the grown alignment, not at
  // points added by the final step itself. Updating them live (as Moses does)
  // lets final-and accept a point that blocks a later final-or addition, so
  // final-and would no longer be a subset of final.
  const Grid grown = grid;
  auto final_pass = [&](const AlignmentSet& side) {
    for (const Link l : side.links()) {
      if (grown.has(l.source, l.target)) continue;
      const bool row_free = !grown.row_aligned(l.source);
      const bool col_free = !grown.col_aligned(l.target);
      const bool accept = variant == FinalVariant::final_and ? (row_free && col_free)
                                                             : (row_free || col_free);
      if (accept && !grid.has(l.source, l.target)) grid.add(l.source, l.target);
    }
  };
  final_pass(fwd);
  final_pass(rev);
  return grid.to_set();
}

std::string format_pharaoh(const AlignmentSet& alignment) {
  std::string out;
  for (const Link l : alignment.links()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l.source);
    out += '-';
    out += std::to_string(l.target);
  }
  return out;
}

std::vector<Link> parse_pharaoh_links(std::string_view line, std::size_t line_no) {
  std::vector<Link> links;
  std::size_t k = 0;
  auto parse_index = [&](std::string_view text) {
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
      throw FormatError("bad alignment point '" + std::string(text) + "'", line_no);
    }
    return value;
  };
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    if (k == start) break;
    const std::string_view item = line.substr(start, k - start);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      throw FormatError("alignment point '" + std::string(item) + "' is not j-i", line_no);
    }
    links.push_back({parse_index(item.substr(0, dash)), parse_index(item.substr(dash + 1))});
  }
  return links;
}

std::vector<AlignmentSet> read_pharaoh(
    std::istream& in, std::span<const std::pair<std::size_t, std::size_t>> lengths) {
  std::vector<AlignmentSet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto links = parse_pharaoh_links(line, line_no);
    if (!lengths.empty()) {
      if (line_no > lengths.size()) {
        throw FormatError("more alignment lines than sentence pairs", line_no);
      }
      const auto [m, n] = lengths[line_no - 1];
      try {
        out.emplace_back(m, n, std::move(links));
      } catch (const DimensionError& e) {
        throw FormatError(e.what(), line_no);
      }
      continue;
    }
    std::size_t m = 0;
    std::size_t n = 0;
    for (const Link l : links) {
      m = std::max<std::size_t>(m, l.source + 1);
      n = std::max<std::size_t>(n, l.target + 1);
    }
    out.emplace_back(m, n, std::move(links));
  }
  return out;
}

void write_pharaoh(std::ostream& out, std::span<const AlignmentSet> alignments) {
  for (const auto& a : alignments) out << format_pharaoh(a) << '\n';
}

}  // namespace alignkit

#include "alignkit/model_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "alignkit/error.hpp"

namespace alignkit {
namespace {

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

template <class T>
T parse_number(std::string_view text, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("bad number '" + std::string(text) + "' in model trailer", line_no);
  }
  return value;
}

}  // namespace

void write_model1(std::ostream& out, const TranslationTable& table) { write_table_rows(out, table); }

void write_model2(std::ostream& out, const Model2Params& params) {
  write_table_rows(out, params.table);
  out << "diag\t" << format_double(params.prior.tension) << '\t'
      << format_double(params.prior.null_prob) << '\n';
}

void write_hmm(std::ostream& out, const HmmParams& params) {
  write_table_rows(out, params.table);
  out << "hmm\t" << params.jumps.width << '\t' << format_double(params.jumps.null_prob) << '\n';
  const long w = static_cast<long>(params.jumps.width);
  for (long d = -w; d <= w; ++d) {
    out << "jump\t" << d << '\t' << format_double(params.jumps.prob(d)) << '\n';
  }
}

LoadedModel read_model(std::istream& in) {
  auto read = read_table(in);
  LoadedModel model;
  model.table = std::move(read.table);
  model.use_null = model.table.has_null();

  std::size_t line_no = read.trailer_first_line;
  std::vector<bool> seen_jump;
  for (const auto& line : read.trailer) {
    const auto fields = split_tabs(line);
    if (fields[0] == "diag" && fields.size() == 3 && model.kind == ModelKind::model1) {
      model.kind = ModelKind::model2;
      model.prior.tension = parse_number<double>(fields[1], line_no);
      model.prior.null_prob = parse_number<double>(fields[2], line_no);
    } else if (fields[0] == "hmm" && fields.size() == 3 && model.kind == ModelKind::model1) {
      model.kind = ModelKind::hmm;
      const auto width = parse_number<std::size_t>(fields[1], line_no);
      model.jumps = JumpTable::uniform(width, parse_number<double>(fields[2], line_no));
      seen_jump.assign(2 * width + 1, false);
    } else if (fields[0] == "jump" && fields.size() == 3 && model.kind == ModelKind::hmm) {
      const auto d = parse_number<long>(fields[1], line_no);
      const long w = static_cast<long>(model.jumps.width);
      if (d < -w || d > w) throw FormatError("jump bucket outside [-w, w]", line_no);
      model.jumps.probs[static_cast<std::size_t>(d + w)] = parse_number<double>(fields[2], line_no);
      seen_jump[static_cast<std::size_t>(d + w)] = true;
    } else {
      throw FormatError("unexpected line in model file", line_no);
    }
    ++line_no;
  }

  try {
    if (model.kind == ModelKind::model2) model.prior.validate();
    if (model.kind == ModelKind::hmm) {
      for (const bool s : seen_jump) {
        if (!s) throw FormatError("HMM model is missing jump buckets");
      }
      model.jumps.validate();
    }
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
  return model;
}

}  // namespace alignkit

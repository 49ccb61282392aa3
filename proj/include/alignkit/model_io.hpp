#pragma once

// Model files: the t-table format followed by a model-specific trailer.
//
//   alignkit-ttable v1
//   e_id<TAB>f_id<TAB>prob        (NULL target as e_id -1)
//   ...
//   diag<TAB>tension<TAB>p0       (Model 2 only)
//   hmm<TAB>width<TAB>p0          (HMM only, followed by one line per bucket)
//   jump<TAB>d<TAB>prob

#include <iosfwd>

#include "alignkit/hmm.hpp"
#include "alignkit/model2.hpp"
#include "alignkit/ttable.hpp"

namespace alignkit {

enum class ModelKind { model1, model2, hmm };

/// Whatever a model file contained. `use_null` is inferred from the presence
/// of NULL rows.
struct LoadedModel {
  ModelKind kind = ModelKind::model1;
  TranslationTable table;
  bool use_null = false;
  DiagonalPrior prior;  // model2
  JumpTable jumps;      // hmm

  Model2Params model2() const { return {table, prior, use_null}; }
  HmmParams hmm() const { return {table, jumps, use_null}; }
};

void write_model1(std::ostream& out, const TranslationTable& table);
void write_model2(std::ostream& out, const Model2Params& params);
void write_hmm(std::ostream& out, const HmmParams& params);

/// Throws FormatError on malformed content.
LoadedModel read_model(std::istream& in);

}  // namespace alignkit

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "defjump/config.hpp"
#include "defjump/dgla.hpp"
#include "defjump/hodge.hpp"
#include "defjump/models.hpp"
#include "defjump/series.hpp"

namespace defjump {

inline constexpr int kFormatVersion = 1;

struct DglaSection {
  ComplexSpec complex;
  std::vector<BracketEntry> bracket;
  /// Present (possibly empty) when the file declares an action on the complex.
  std::optional<std::vector<RepresentationEntry>> representation;
};

struct SeriesSection {
  int order = 0;
  /// terms[k-1][q - min_degree] = P_k out of degree q; empty means zero.
  std::vector<std::vector<Matrix>> terms;
};

/// In-memory form of a model file. Sparse triplets are densified on read and
/// duplicate triplets are summed.
struct ModelFile {
  ComplexSpec complex;
  /// del out of each degree, indexed from min_degree.
  std::vector<Matrix> companion_del;
  std::optional<DglaSection> dgla;
  std::optional<MaurerCartanSeries> mc_series;
  std::optional<SeriesSection> operator_series;
  /// Free-form description carried through unchanged.
  nlohmann::json metadata;
};

/// Throws ParseError (malformed or out-of-range data) or UsageError.
ModelFile parse_model(const nlohmann::json& j);
ModelFile load_model(const std::string& path);

nlohmann::json model_to_json(const ModelFile& m);

/// Model file for a nilmanifold model and a Maurer-Cartan series.
ModelFile model_file_from(const InvariantModel& m, const MaurerCartanSeries& x, nlohmann::json metadata);

/// Nilmanifold recipe: {"n", "holomorphic": [[k, i, j, re, im]], "mixed": [...],
/// "bundle": "trivial" | "tangent" | "wedge_cotangent", "p", "xi": [[j, a, re, im]],
/// "order", "name"}. Indices are 0-based.
ModelRecipe parse_recipe(const nlohmann::json& j);
nlohmann::json recipe_to_json(const ModelRecipe& r);

/// A validated model ready for the algorithms.
struct ResolvedModel {
  GradedComplex complex;
  HodgeData hodge;
  std::optional<Dgla> dgla;
  std::optional<Representation> representation;
  std::optional<MaurerCartanSeries> mc_series;
  std::optional<OperatorSeries> series;
};

/// Validates every section present. The operator series comes either from
/// operator_series or from dgla + representation + mc_series, never both.
ResolvedModel resolve_model(const ModelFile& m, const Config& c);

/// Throws UsageError naming the missing sections when no series is available.
const OperatorSeries& require_series(const ResolvedModel& r);

}  // namespace defjump

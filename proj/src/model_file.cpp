#include "defjump/model_file.hpp"

#include <fstream>

namespace defjump {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing '" + key + "'");
  return j.at(key);
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + ": expected a number");
  return j.get<double>();
}

Complex as_complex(const json& re, const json& im, const std::string& where) {
  return {as_double(re, where), as_double(im, where)};
}

// Adds [[row, col, re, im], ...] into m.
void add_triplets(Matrix& m, const json& entries, const std::string& where) {
  if (!entries.is_array()) fail(where + ": entries must be an array");
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 4) fail(where + ": entry must be [row, col, re, im]");
    const int r = as_int(e[0], where);
    const int c = as_int(e[1], where);
    if (r < 0 || r >= m.rows() || c < 0 || c >= m.cols()) {
      fail(where + ": entry (" + std::to_string(r) + ", " + std::to_string(c) + ") outside a " +
           std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
    }
    m(r, c) += as_complex(e[2], e[3], where);
  }
}

json triplets(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) == Complex(0.0)) continue;
      out.push_back({r, c, m(r, c).real(), m(r, c).imag()});
    }
  }
  return out;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

Vector parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != 2) fail(where + ": expected [re, im]");
    v[static_cast<Eigen::Index>(i)] = as_complex(j[i][0], j[i][1], where);
  }
  return v;
}

int dim_of(const ComplexSpec& s, int q) {
  const int i = q - s.min_degree;
  return (i >= 0 && i < static_cast<int>(s.dims.size())) ? s.dims[i] : 0;
}

bool in_spec(const ComplexSpec& s, int q) { return q >= s.min_degree && q - s.min_degree < static_cast<int>(s.dims.size()); }

ComplexSpec parse_complex(const json& j, const std::string& where) {
  ComplexSpec s;
  s.min_degree = j.contains("min_degree") ? as_int(j.at("min_degree"), where + ".min_degree") : 0;
  const json& dims = field(j, "dims", where);
  if (!dims.is_array() || dims.empty()) fail(where + ".dims: expected a nonempty array");
  for (const auto& d : dims) {
    const int v = as_int(d, where + ".dims");
    if (v < 0) fail(where + ".dims: negative dimension");
    s.dims.push_back(v);
  }
  const int count = static_cast<int>(s.dims.size());
  for (int i = 0; i + 1 < count; ++i) s.differentials.push_back(Matrix::Zero(s.dims[i + 1], s.dims[i]));
  if (j.contains("differential")) {
    for (const auto& block : j.at("differential")) {
      const int q = as_int(field(block, "degree", where + ".differential"), where + ".differential.degree");
      if (!in_spec(s, q) || !in_spec(s, q + 1)) {
        fail(where + ".differential: degree " + std::to_string(q) + " has no target in range");
      }
      add_triplets(s.differentials[q - s.min_degree], field(block, "entries", where + ".differential"),
                   where + ".differential[" + std::to_string(q) + "]");
    }
  }
  if (j.contains("metric")) {
    s.metrics.resize(count);
    for (const auto& block : j.at("metric")) {
      const int q = as_int(field(block, "degree", where + ".metric"), where + ".metric.degree");
      if (!in_spec(s, q)) fail(where + ".metric: degree " + std::to_string(q) + " out of range");
      Matrix& m = s.metrics[q - s.min_degree];
      if (m.size() == 0) m = Matrix::Zero(dim_of(s, q), dim_of(s, q));
      add_triplets(m, field(block, "entries", where + ".metric"), where + ".metric[" + std::to_string(q) + "]");
    }
  }
  return s;
}

json complex_json(const ComplexSpec& s) {
  json j;
  j["min_degree"] = s.min_degree;
  j["dims"] = s.dims;
  json diffs = json::array();
  for (std::size_t i = 0; i < s.differentials.size(); ++i) {
    json t = triplets(s.differentials[i]);
    if (t.empty()) continue;
    diffs.push_back({{"degree", s.min_degree + static_cast<int>(i)}, {"entries", t}});
  }
  j["differential"] = diffs;
  bool any_metric = false;
  json metrics = json::array();
  for (std::size_t i = 0; i < s.metrics.size(); ++i) {
    if (s.metrics[i].size() == 0) continue;
    any_metric = true;
    metrics.push_back({{"degree", s.min_degree + static_cast<int>(i)}, {"entries", triplets(s.metrics[i])}});
  }
  if (any_metric) j["metric"] = metrics;
  return j;
}

ComplexSpec spec_of(const GradedComplex& cx) {
  ComplexSpec s;
  s.min_degree = cx.min_degree();
  for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
    s.dims.push_back(cx.dim(q));
    if (q < cx.max_degree()) s.differentials.push_back(cx.differential(q));
  }
  return s;
}

}  // namespace

ModelFile parse_model(const json& j) {
  if (!j.is_object()) fail("model file must be a JSON object");
  const int version = as_int(field(j, "format_version", "model"), "format_version");
  if (version != kFormatVersion) fail("unsupported format_version " + std::to_string(version));
  for (const auto& [key, value] : j.items()) {
    static const char* known[] = {"format_version", "complex", "companion_del", "dgla",
                                  "mc_series", "operator_series", "metadata"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) fail("unknown section '" + key + "'");
  }
  ModelFile m;
  try {
    m.complex = parse_complex(field(j, "complex", "model"), "complex");
    if (j.contains("metadata")) m.metadata = j.at("metadata");
    if (j.contains("companion_del")) {
      const int count = static_cast<int>(m.complex.dims.size());
      m.companion_del.resize(count);
      for (int i = 0; i < count; ++i) m.companion_del[i] = Matrix(0, m.complex.dims[i]);
      for (const auto& block : j.at("companion_del")) {
        const int q = as_int(field(block, "degree", "companion_del"), "companion_del.degree");
        if (!in_spec(m.complex, q)) fail("companion_del: degree " + std::to_string(q) + " out of range");
        const int rows = as_int(field(block, "rows", "companion_del"), "companion_del.rows");
        if (rows < 0) fail("companion_del: negative row count");
        Matrix d = Matrix::Zero(rows, dim_of(m.complex, q));
        add_triplets(d, field(block, "entries", "companion_del"), "companion_del[" + std::to_string(q) + "]");
        m.companion_del[q - m.complex.min_degree] = std::move(d);
      }
    }
    if (j.contains("dgla")) {
      const json& dj = j.at("dgla");
      DglaSection d;
      d.complex = parse_complex(field(dj, "complex", "dgla"), "dgla.complex");
      for (const auto& e : field(dj, "bracket", "dgla")) {
        if (!e.is_array() || e.size() != 7) fail("dgla.bracket: entry must be [p1, i, p2, j, k, re, im]");
        d.bracket.push_back({as_int(e[0], "dgla.bracket"), as_int(e[1], "dgla.bracket"), as_int(e[2], "dgla.bracket"),
                             as_int(e[3], "dgla.bracket"), as_int(e[4], "dgla.bracket"),
                             as_complex(e[5], e[6], "dgla.bracket")});
      }
      if (dj.contains("representation")) {
        d.representation.emplace();
        for (const auto& e : dj.at("representation")) {
          if (!e.is_array() || e.size() != 7) fail("dgla.representation: entry must be [p, i, q, j, k, re, im]");
          const std::string w = "dgla.representation";
          d.representation->push_back({as_int(e[0], w), as_int(e[1], w), as_int(e[2], w), as_int(e[3], w),
                                      as_int(e[4], w), as_complex(e[5], e[6], w)});
        }
      }
      m.dgla = std::move(d);
    }
    if (j.contains("mc_series")) {
      const json& mj = j.at("mc_series");
      MaurerCartanSeries x;
      x.order = as_int(field(mj, "order", "mc_series"), "mc_series.order");
      const json& coeffs = field(mj, "coeffs", "mc_series");
      if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != x.order) {
        fail("mc_series: expected " + std::to_string(x.order) + " coefficient vectors");
      }
      for (const auto& c : coeffs) x.coeffs.push_back(parse_vector(c, "mc_series.coeffs"));
      m.mc_series = std::move(x);
    }
    if (j.contains("operator_series")) {
      const json& sj = j.at("operator_series");
      SeriesSection s;
      s.order = as_int(field(sj, "order", "operator_series"), "operator_series.order");
      if (s.order < 0) fail("operator_series: negative order");
      const int count = static_cast<int>(m.complex.dims.size());
      s.terms.assign(s.order, std::vector<Matrix>(count));
      for (const auto& t : field(sj, "terms", "operator_series")) {
        const int k = as_int(field(t, "order", "operator_series.terms"), "operator_series.terms.order");
        const int q = as_int(field(t, "degree", "operator_series.terms"), "operator_series.terms.degree");
        if (k < 1 || k > s.order) fail("operator_series: term order " + std::to_string(k) + " out of range");
        if (!in_spec(m.complex, q)) fail("operator_series: degree " + std::to_string(q) + " out of range");
        Matrix& p = s.terms[k - 1][q - m.complex.min_degree];
        if (p.size() == 0) p = Matrix::Zero(dim_of(m.complex, q + 1), dim_of(m.complex, q));
        add_triplets(p, field(t, "entries", "operator_series.terms"),
                     "operator_series P_" + std::to_string(k) + "[" + std::to_string(q) + "]");
      }
      m.operator_series = std::move(s);
    }
  } catch (const json::exception& e) {
    fail(std::string("malformed model: ") + e.what());
  }
  return m;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, "cannot open model file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
  return parse_model(j);
}

json model_to_json(const ModelFile& m) {
  json j;
  j["format_version"] = kFormatVersion;
  j["complex"] = complex_json(m.complex);
  if (!m.metadata.is_null()) j["metadata"] = m.metadata;
  if (!m.companion_del.empty()) {
    json blocks = json::array();
    for (std::size_t i = 0; i < m.companion_del.size(); ++i) {
      const Matrix& d = m.companion_del[i];
      blocks.push_back({{"degree", m.complex.min_degree + static_cast<int>(i)},
                        {"rows", d.rows()},
                        {"entries", triplets(d)}});
    }
    j["companion_del"] = blocks;
  }
  if (m.dgla) {
    json bracket = json::array();
    for (const auto& e : m.dgla->bracket) {
      bracket.push_back({e.p1, e.i, e.p2, e.j, e.k, e.value.real(), e.value.imag()});
    }
    j["dgla"] = {{"complex", complex_json(m.dgla->complex)}, {"bracket", bracket}};
    if (m.dgla->representation) {
      json rep = json::array();
      for (const auto& e : *m.dgla->representation) {
        rep.push_back({e.p, e.i, e.q, e.j, e.k, e.value.real(), e.value.imag()});
      }
      j["dgla"]["representation"] = rep;
    }
  }
  if (m.mc_series) {
    json coeffs = json::array();
    for (const auto& c : m.mc_series->coeffs) coeffs.push_back(vector_json(c));
    j["mc_series"] = {{"order", m.mc_series->order}, {"coeffs", coeffs}};
  }
  if (m.operator_series) {
    json terms = json::array();
    for (int k = 1; k <= m.operator_series->order; ++k) {
      const auto& row = m.operator_series->terms[k - 1];
      for (std::size_t i = 0; i < row.size(); ++i) {
        json t = triplets(row[i]);
        if (t.empty()) continue;
        terms.push_back({{"order", k}, {"degree", m.complex.min_degree + static_cast<int>(i)}, {"entries", t}});
      }
    }
    j["operator_series"] = {{"order", m.operator_series->order}, {"terms", terms}};
  }
  return j;
}

ModelFile model_file_from(const InvariantModel& im, const MaurerCartanSeries& x, json metadata) {
  ModelFile m;
  m.complex = spec_of(im.complex);
  m.companion_del = im.companion_del;
  DglaSection d;
  d.complex = spec_of(im.ks.complex());
  d.bracket = im.ks.entries();
  d.representation = im.action.entries();
  m.dgla = std::move(d);
  m.mc_series = x;
  m.metadata = std::move(metadata);
  return m;
}

ModelRecipe parse_recipe(const json& j) {
  ModelRecipe r;
  try {
    r.name = j.value("name", std::string("custom"));
    r.spec.n = as_int(field(j, "n", "recipe"), "recipe.n");
    for (const char* key : {"holomorphic", "mixed"}) {
      if (!j.contains(key)) continue;
      for (const auto& e : j.at(key)) {
        if (!e.is_array() || e.size() != 5) fail(std::string("recipe.") + key + ": entry must be [k, i, j, re, im]");
        StructureTerm t{as_int(e[0], key), as_int(e[1], key), as_int(e[2], key), as_complex(e[3], e[4], key)};
        (std::string(key) == "holomorphic" ? r.spec.holomorphic : r.spec.mixed).push_back(t);
      }
    }
    const std::string bundle = j.value("bundle", std::string("trivial"));
    if (bundle == "trivial") {
      r.spec.bundle = {BundleKind::Trivial, 0};
    } else if (bundle == "tangent") {
      r.spec.bundle = {BundleKind::Tangent, 0};
    } else if (bundle == "wedge_cotangent") {
      r.spec.bundle = {BundleKind::WedgeCotangent, as_int(field(j, "p", "recipe"), "recipe.p")};
    } else {
      fail("recipe.bundle must be trivial, tangent or wedge_cotangent");
    }
    if (j.contains("xi")) {
      for (const auto& e : j.at("xi")) {
        if (!e.is_array() || e.size() != 4) fail("recipe.xi: entry must be [j, a, re, im]");
        r.xi.push_back({as_int(e[0], "xi"), as_int(e[1], "xi"), as_complex(e[2], e[3], "xi")});
      }
    }
    if (j.contains("order")) r.order = as_int(j.at("order"), "recipe.order");
  } catch (const json::exception& e) {
    fail(std::string("malformed recipe: ") + e.what());
  }
  return r;
}

json recipe_to_json(const ModelRecipe& r) {
  auto terms = [](const std::vector<StructureTerm>& ts) {
    json out = json::array();
    for (const auto& t : ts) out.push_back({t.k, t.i, t.j, t.c.real(), t.c.imag()});
    return out;
  };
  json xi = json::array();
  for (const auto& t : r.xi) xi.push_back({t.j, t.a, t.c.real(), t.c.imag()});
  json j = {{"name", r.name},
            {"n", r.spec.n},
            {"holomorphic", terms(r.spec.holomorphic)},
            {"mixed", terms(r.spec.mixed)},
            {"xi", xi},
            {"order", r.order}};
  switch (r.spec.bundle.kind) {
    case BundleKind::Trivial: j["bundle"] = "trivial"; break;
    case BundleKind::Tangent: j["bundle"] = "tangent"; break;
    case BundleKind::WedgeCotangent:
      j["bundle"] = "wedge_cotangent";
      j["p"] = r.spec.bundle.p;
      break;
  }
  return j;
}

ResolvedModel resolve_model(const ModelFile& m, const Config& c) {
  ResolvedModel r;
  r.complex = validate_complex(m.complex, c.hodge_tol);
  r.hodge = hodge_data(r.complex, c.rank_tol);
  for (std::size_t i = 0; i < m.companion_del.size(); ++i) {
    const int q = m.complex.min_degree + static_cast<int>(i);
    if (m.companion_del[i].cols() != r.complex.dim(q)) {
      throw Error(ErrorKind::ShapeMismatch, "companion_del out of degree " + std::to_string(q) + " has wrong width");
    }
  }
  if (m.dgla) {
    GradedComplex lc = validate_complex(m.dgla->complex, c.hodge_tol);
    BracketTable table = bracket_table(lc, m.dgla->bracket);
    r.dgla = validate_dgla(std::move(lc), std::move(table), c.rank_tol, c.hodge_tol);
    if (m.dgla->representation) {
      r.representation = validate_representation(
          *r.dgla, r.complex, representation_table(*r.dgla, r.complex, *m.dgla->representation), c.hodge_tol);
    }
  }
  if (m.mc_series) {
    if (!r.dgla) throw Error(ErrorKind::UsageError, "mc_series needs a dgla section");
    MaurerCartanSeries x = *m.mc_series;
    for (const Vector& v : x.coeffs) {
      if (v.size() != r.dgla->complex().dim(1)) {
        throw Error(ErrorKind::ShapeMismatch, "mc_series coefficient has dimension " + std::to_string(v.size()) +
                                                  ", expected " + std::to_string(r.dgla->complex().dim(1)));
      }
    }
    x.integrable = false;
    mark_integrability(*r.dgla, x, c.hodge_tol);
    r.mc_series = std::move(x);
  }
  if (m.operator_series && m.mc_series) {
    throw Error(ErrorKind::UsageError, "model has both operator_series and mc_series; keep exactly one");
  }
  if (m.operator_series) {
    r.series = OperatorSeries(r.complex, m.operator_series->terms);
  } else if (r.mc_series && r.representation) {
    r.series = represent(*r.representation, *r.mc_series);
  }
  return r;
}

const OperatorSeries& require_series(const ResolvedModel& r) {
  if (!r.series) {
    throw Error(ErrorKind::UsageError,
                "model has no operator series: add operator_series, or dgla with representation plus mc_series");
  }
  return *r.series;
}

}  // namespace defjump

#include "defjump/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace defjump {

using nlohmann::json;

double tidy(double x) {
  if (!std::isfinite(x)) return x;
  if (std::abs(x) < 1e-13) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json vector_report(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({tidy(v[i].real()), tidy(v[i].imag())});
  return out;
}

namespace {

json finding_report(const JumpFinding& f) {
  json j = {{"side", std::string(to_string(f.side))},
            {"source_degree", f.source_degree},
            {"order", f.order},
            {"witness_degree", f.source_degree + 1},
            {"witness", vector_report(f.witness)}};
  if (f.class_index >= 0) j["class_index"] = f.class_index;
  return j;
}

json doubles(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(tidy(x));
  return out;
}

void render(std::ostringstream& os, const json& j, int indent, const std::string& key) {
  const std::string pad(indent, ' ');
  const bool scalar_array = j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) {
                              return e.is_primitive() || (e.is_array() && e.size() <= 2 &&
                                                          std::all_of(e.begin(), e.end(),
                                                                      [](const json& x) { return x.is_primitive(); }));
                            });
  if (j.is_object()) {
    if (!key.empty()) os << pad << key << ":\n";
    for (const auto& [k, v] : j.items()) render(os, v, key.empty() ? indent : indent + 2, k);
  } else if (j.is_array() && !scalar_array) {
    os << pad << key << ":\n";
    int i = 0;
    for (const auto& e : j) render(os, e, indent + 2, "[" + std::to_string(i++) + "]");
  } else {
    os << pad << key << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

json envelope(const std::string& command, const std::string& model, const Config& c, json result,
              const std::string& summary) {
  json prov = config_to_json(c);
  return {{"format_version", kFormatVersion},
          {"command", command},
          {"model", model},
          {"provenance", prov},
          {"result", std::move(result)},
          {"summary", summary}};
}

json validate_report(const ResolvedModel& r) {
  json j;
  j["dims"] = json::array();
  for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) j["dims"].push_back(r.complex.dim(q));
  j["min_degree"] = r.complex.min_degree();
  j["dgla"] = r.dgla.has_value();
  j["representation"] = r.representation.has_value();
  if (r.mc_series) {
    j["mc_series"] = {{"order", r.mc_series->order}, {"integrable", r.mc_series->integrable}};
  }
  if (r.series) {
    const IntegrabilityReport ir = check_integrability(*r.series);
    j["operator_series"] = {{"order", r.series->order()},
                            {"integrable", ir.passes()},
                            {"residual", doubles(ir.residual)}};
    if (ir.first_failure) j["operator_series"]["first_failure"] = *ir.first_failure;
  }
  return j;
}

json hodge_report(const GradedComplex& cx, const HodgeData& hd) {
  json degrees = json::array();
  for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
    const HodgeResiduals r = hodge_residuals(cx, hd, q);
    degrees.push_back({{"degree", q},
                       {"dim", cx.dim(q)},
                       {"harmonic_dim", hd.harmonic_dim(q)},
                       {"max_residual", tidy(r.max())}});
  }
  int euler_dims = 0, euler_h = 0;
  for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
    const int s = (q % 2 == 0) ? 1 : -1;
    euler_dims += s * cx.dim(q);
    euler_h += s * hd.harmonic_dim(q);
  }
  return {{"degrees", degrees},
          {"euler_characteristic", euler_dims},
          {"euler_characteristic_cohomology", euler_h},
          {"warnings", hd.warnings()}};
}

json kuranishi_report(const Dgla& l, const KuranishiResult& k, const Vector& xi, const Config& c) {
  json coeffs = json::array();
  for (const auto& v : k.series.coeffs) coeffs.push_back(vector_report(v));
  json residual = json::array();
  for (const auto& r : mc_residual(l, k.series, k.series.order)) residual.push_back(tidy(r.norm()));
  json j = {{"order", k.series.order},
            {"ob_convention", std::string(to_string(c.ob_convention))},
            {"xi", vector_report(xi)},
            {"coeffs", coeffs},
            {"obstruction_norms", doubles(k.obstruction_norms)},
            {"mc_residual_norms", residual},
            {"fixed_point_residual", tidy(kuranishi_fixed_point_residual(l, k.series, xi))},
            {"integrable", k.series.integrable}};
  j["first_obstructed"] = k.first_obstructed ? json(*k.first_obstructed) : json(nullptr);
  return j;
}

json extension_report(const OperatorSeries& p, const HodgeData& hd, const Extension& e) {
  json coeffs = json::array();
  for (const auto& v : e.coeffs) coeffs.push_back(vector_report(v));
  json j = {{"degree", e.degree},
            {"order", e.order},
            {"coeffs", coeffs},
            {"harmonic_norms", doubles(e.harmonic_norms)},
            {"scales", doubles(e.scales)},
            {"fixed_point_residual", tidy(extension_fixed_point_residual(p, hd, e))},
            {"closedness", doubles(extension_closedness(p, e))}};
  if (e.obstructed_at) {
    j["obstructed_at"] = *e.obstructed_at;
    j["witness"] = vector_report(normalize_witness(e.obstruction_witness));
    j["certified_through"] = *e.obstructed_at - 1;
  } else {
    j["obstructed_at"] = nullptr;
    j["certified_through"] = e.order;
  }
  return j;
}

json obstructions_report(const std::vector<ObstructionImage>& images) {
  json orders = json::array();
  for (const auto& img : images) {
    json basis = json::array();
    for (Eigen::Index c = 0; c < img.basis.cols(); ++c) basis.push_back(vector_report(normalize_witness(img.basis.col(c))));
    orders.push_back({{"order", img.order},
                      {"domain_dim", img.domain_dim},
                      {"rank", img.rank()},
                      {"threshold", tidy(img.threshold)},
                      {"exact_leak", tidy(img.exact_leak)},
                      {"image_basis", basis}});
  }
  json j = {{"orders", orders}};
  if (!images.empty()) {
    j["degree"] = images.front().degree;
    j["target_degree"] = images.front().degree + 1;
  }
  return j;
}

std::string verdict_summary(const JumpVerdict& v) {
  std::ostringstream os;
  if (v.jump) {
    os << "Jump{" << to_string(v.jump->side) << "(" << v.jump->source_degree << "), order " << v.jump->order << "}";
  } else {
    os << "NoJumpDetected(" << v.order_checked << ")";
  }
  return os.str();
}

json verdict_report(const JumpVerdict& v) {
  json ext = json::array();
  for (const auto& f : v.extension_findings) ext.push_back(finding_report(f));
  json exa = json::array();
  for (const auto& f : v.exactness_findings) exa.push_back(finding_report(f));
  json j = {{"degree", v.degree},
            {"order_checked", v.order_checked},
            {"verdict", v.jump ? "Jump" : "NoJumpDetected"},
            {"statement", verdict_summary(v)},
            {"extension_findings", ext},
            {"exactness_findings", exa},
            {"exactness_ranks", v.exactness_ranks}};
  if (v.jump) {
    j["jump"] = finding_report(*v.jump);
  } else {
    j["jump"] = nullptr;
    j["attestation"] = "no obstruction through order " + std::to_string(v.order_checked) +
                       "; this is an order-bounded attestation, not a proof for all orders";
  }
  return j;
}

json oracle_report(const OracleReport& o) {
  json samples = json::array();
  for (const auto& s : o.samples) samples.push_back({{"t", {tidy(s.t.real()), tidy(s.t.imag())}}, {"dim", s.dim}});
  return {{"degree", o.degree},
          {"dim_at_zero", o.dim_at_zero},
          {"generic_dim", o.generic_dim},
          {"jumps", o.jumps},
          {"samples", samples},
          {"discordant", o.discordant},
          {"semicontinuous", o.semicontinuous},
          {"warnings", o.warnings},
          {"seed", o.spec.seed}};
}

std::string dump_structured(const json& doc) { return doc.dump(2) + "\n"; }

std::string render_text(const json& doc) {
  std::ostringstream os;
  if (doc.contains("summary")) os << doc.at("summary").get<std::string>() << "\n";
  if (doc.contains("command")) os << "command: " << doc.at("command").get<std::string>() << "\n";
  if (doc.contains("model")) os << "model: " << doc.at("model").get<std::string>() << "\n";
  if (doc.contains("result")) render(os, doc.at("result"), 0, "result");
  if (doc.contains("provenance")) render(os, doc.at("provenance"), 0, "provenance");
  return os.str();
}

}  // namespace defjump

#pragma once

#include <string>

#include <json.hpp>

#include "defjump/config.hpp"
#include "defjump/dgla.hpp"
#include "defjump/jump.hpp"
#include "defjump/model_file.hpp"
#include "defjump/oracle.hpp"

namespace defjump {

/// Rounds to 12 significant digits and flushes values below 1e-13 to zero so
/// reports do not depend on the last bits of floating point arithmetic.
double tidy(double x);

nlohmann::json vector_report(const Vector& v);

/// Common envelope: format_version, command, model name, provenance, result, summary.
nlohmann::json envelope(const std::string& command, const std::string& model, const Config& c,
                        nlohmann::json result, const std::string& summary);

nlohmann::json validate_report(const ResolvedModel& r);
nlohmann::json hodge_report(const GradedComplex& cx, const HodgeData& hd);
nlohmann::json kuranishi_report(const Dgla& l, const KuranishiResult& k, const Vector& xi, const Config& c);
nlohmann::json extension_report(const OperatorSeries& p, const HodgeData& hd, const Extension& e);
nlohmann::json obstructions_report(const std::vector<ObstructionImage>& images);
nlohmann::json verdict_report(const JumpVerdict& v);
nlohmann::json oracle_report(const OracleReport& o);

std::string verdict_summary(const JumpVerdict& v);

/// Single structured document, keys sorted, two-space indent, trailing newline.
std::string dump_structured(const nlohmann::json& doc);

/// Human-readable rendering of a report document.
std::string render_text(const nlohmann::json& doc);

}  // namespace defjump

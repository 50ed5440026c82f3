#pragma once

#include <string>

#include <json.hpp>

#include "ccpnet/bell.hpp"
#include "ccpnet/commoncause.hpp"
#include "ccpnet/localnet.hpp"
#include "ccpnet/minkowski.hpp"
#include "ccpnet/qprob.hpp"

// Shared JSON schemas. Matrices: {"kind": ..., "dims": [d1,...,dk],
// "entries": [[[re,im],...],...]} row-major. Regions: tagged union mirroring
// the expression tree. Unknown fields are rejected.
namespace ccpnet::io {

using nlohmann::json;

json to_json(const Mat& m, const TensorSpace& space, const std::string& kind);
json to_json(const qprob::Operator& op);
json to_json(const qprob::Projection& p);
json to_json(const qprob::State& s);

qprob::Operator operator_from_json(const json& j);
qprob::Projection projection_from_json(const json& j);
qprob::State state_from_json(const json& j, const Tolerances& tol = {});

json to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const json& j);

json to_json(const minkowski::Event& e);
minkowski::Event event_from_json(const json& j);
json to_json(const minkowski::RegionPtr& r);
minkowski::RegionPtr region_from_json(const json& j);

json to_json(const commoncause::RankInterval& ri);
json to_json(const commoncause::FeasibilityReport& fr);
json to_json(const commoncause::CommonCauseCertificate& cert, const Tolerances& tol);

json to_json(const bell::BellConfiguration& config);
json to_json(const bell::SurveyResult& result);
std::string survey_csv(const bell::SurveyResult& result, uint64_t seed);

json to_json(const minkowski::LocalizationSlab& slab);
json to_json(const localnet::DemoReport& report);

// Round-trip helpers with schema diagnostics (field path in the message).
json parse_file(const std::string& path);
void write_file(const std::string& path, const json& j);
void require_fields(const json& j, std::initializer_list<const char*> required,
                    const std::string& where);

}  // namespace ccpnet::io

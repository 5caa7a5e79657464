#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gmmds/construct.hpp"
#include "gmmds/family.hpp"
#include "gmmds/reduce.hpp"
#include "gmmds/tmatrix.hpp"
#include "gmmds/verify.hpp"

namespace gmmds {

using json = nlohmann::ordered_json;

/// Malformed input; the message names the offending field.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Parses text, turning parser failures into InputError with line/column.
json parse_json(const std::string& text);

/// {"k","n","sets","multiplicities"} or {"k","n","msets"}; columns 1-indexed.
/// Missing multiplicities default to k - |S_i|; missing n to the largest column.
Family family_from_json(const json& j);
json family_to_json(const Family& fam);

struct RowsetInput {
  int k = 0;
  int n = 0;
  std::vector<std::vector<int>> rowsets;  // 0-based
};
/// {"k","n","rowsets"}; k defaults to the number of rows.
RowsetInput rowsets_from_json(const json& j);

json to_json(const ConditionVerdict& v);
json to_json(const AuditReport& a);
json to_json(const ReductionStep& s);
json to_json(const ReductionTrace& t);
json to_json(const ReducedVerdict& v);
json to_json(const TInstance& t, std::uint64_t p);
json to_json(const IdentityVerdict& v);
json to_json(const ExactResult& r);
json to_json(const Certificate& c);
json to_json(const CellReport& c);
json to_json(const VerificationReport& r);
json to_json(const NecessityReport& r);
json to_json(const CrossCheckReport& r);
json to_json(const CodeArtifact& a);
json matrix_to_json(const Matrix& m);

Matrix matrix_from_json(const json& j, const std::string& field);
CodeArtifact artifact_from_json(const json& j);
IdentityVerdict identity_verdict_from_json(const json& j);
ConditionVerdict condition_verdict_from_json(const json& j);

}  // namespace gmmds

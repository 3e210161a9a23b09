// File formats: code specs (explicit matrix or decimal column form),
// schedule files, rate-matrix JSON, store dumps, and plan/response
// transcripts.  All JSON uses insertion-ordered objects so that equal
// inputs serialize byte-identically.

#ifndef PIR_SERIALIZE_HPP
#define PIR_SERIALIZE_HPP

#include <json.hpp>
#include <optional>
#include <string>

#include "pir/schedule.hpp"

namespace pir {

using Json = nlohmann::ordered_json;

// Decimal column form: column value sum_j G[j][col] q^j, first row least
// significant (13 <-> transpose(1,0,1,1) over GF(2)).
LinearCode code_from_decimal(const Field& F, int k, const std::vector<long long>& columns);
std::vector<long long> code_to_decimal(const LinearCode& code);

LinearCode code_from_json(const Json& j);
Json code_to_json(const LinearCode& code);

// Text or JSON code file.  Text payloads need the format/q/k hints; JSON
// files are self-describing.
LinearCode load_code_file(const std::string& path, std::optional<int> q, std::optional<int> k,
                          const std::string& format);

Json lambda_to_json(const RateMatrix& M);
RateMatrix lambda_from_json(const Json& j);

Schedule schedule_from_json(const Json& j);
std::optional<Json> schedule_embedded_code(const Json& j);
Json schedule_to_json(const Schedule& s);

Json store_to_json(const CodedStore& store);
CodedStore store_from_json(const Json& j);

Json plan_to_json(const QueryPlan& plan, const Field& F);
Json responses_to_json(const std::vector<NodeResponse>& rs);

Json rate_report_to_json(const RateReport& r);

}  // namespace pir

#endif

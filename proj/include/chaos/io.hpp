#pragma once

#include <string>

#include <json.hpp>

#include "chaos/bounds.hpp"
#include "chaos/nets.hpp"
#include "chaos/norms.hpp"
#include "chaos/oracle.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

using Json = nlohmann::ordered_json;

// Tensor files: {"dims":[...], "entries":[[i_1,...,i_d, value],...]} with
// 1-based indices, or {"dims":[...], "dense":[...]} row-major.
CoefficientTensor tensor_from_json(const Json& j, std::size_t entry_cap = kDefaultEntryCap);
Json tensor_to_json(const CoefficientTensor& a);
CoefficientTensor load_tensor(const std::string& path, std::size_t entry_cap = kDefaultEntryCap);

Json norm_result_to_json(const NormResult& r);
Json study_to_json(const ChaosStudy& s);
Json bound_report_to_json(const BoundReport& r);
Json u_partition_to_json(const UPartition& p);

// CSV row for a study: statistic,param,estimate,se,lo,hi,n,seed
std::string study_csv_header();
std::string study_csv_row(const ChaosStudy& s);

// Fixed shortest-roundtrip decimal text for a double.
std::string format_double(double v);

}  // namespace chaos

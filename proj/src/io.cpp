#include "chaos/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "chaos/errors.hpp"

namespace chaos {

CoefficientTensor tensor_from_json(const Json& j, std::size_t entry_cap) {
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_array()) {
    throw ValidationError("tensor json: expected an object with a \"dims\" array");
  }
  std::vector<int> dims;
  for (const auto& v : j["dims"]) {
    if (!v.is_number_integer() || v.get<int>() < 1) {
      throw ValidationError("tensor json: dims must be positive integers");
    }
    dims.push_back(v.get<int>());
  }
  if (j.contains("dense")) {
    if (!j["dense"].is_array()) throw ValidationError("tensor json: \"dense\" must be an array");
    std::vector<double> coeffs;
    coeffs.reserve(j["dense"].size());
    for (const auto& v : j["dense"]) {
      if (!v.is_number()) throw ValidationError("tensor json: dense entries must be numbers");
      coeffs.push_back(v.get<double>());
    }
    return make_tensor(std::move(dims), std::move(coeffs), entry_cap);
  }
  if (j.contains("entries")) {
    if (!j["entries"].is_array()) throw ValidationError("tensor json: \"entries\" must be an array");
    std::vector<SparseEntry> entries;
    for (const auto& row : j["entries"]) {
      if (!row.is_array() || row.size() != dims.size() + 1) {
        throw ValidationError("tensor json: each entry needs d indices and a value");
      }
      SparseEntry e;
      for (std::size_t p = 0; p < dims.size(); ++p) {
        if (!row[p].is_number_integer()) throw ValidationError("tensor json: indices must be integers");
        e.index.push_back(row[p].get<int>());
      }
      if (!row.back().is_number()) throw ValidationError("tensor json: entry value must be a number");
      e.value = row.back().get<double>();
      entries.push_back(std::move(e));
    }
    return make_tensor(std::move(dims), entries, entry_cap);
  }
  throw ValidationError("tensor json: need \"dense\" or \"entries\"");
}

Json tensor_to_json(const CoefficientTensor& a) {
  Json j;
  j["dims"] = a.dims();
  Json entries = Json::array();
  const int d = a.order();
  std::vector<int> idx(d, 0);
  for (std::size_t lin = 0; lin < a.size(); ++lin) {
    if (a.coeffs()[lin] != 0.0) {
      Json row = Json::array();
      for (int p = 0; p < d; ++p) row.push_back(idx[p] + 1);
      row.push_back(a.coeffs()[lin]);
      entries.push_back(std::move(row));
    }
    for (int p = d - 1; p >= 0; --p) {
      if (++idx[p] < a.dims()[p]) break;
      idx[p] = 0;
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

CoefficientTensor load_tensor(const std::string& path, std::size_t entry_cap) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open tensor file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError("tensor file " + path + ": " + e.what());
  }
  return tensor_from_json(j, entry_cap);
}

Json norm_result_to_json(const NormResult& r) {
  Json j;
  j["value"] = r.value;
  j["exact"] = r.exact;
  j["converged"] = r.converged;
  j["restarts_used"] = r.restarts_used;
  j["witness"] = r.witness;
  return j;
}

Json study_to_json(const ChaosStudy& s) {
  Json j;
  j["statistic"] = statistic_name(s.statistic);
  j["parameter"] = s.parameter;
  j["estimate"] = s.estimate;
  j["std_error"] = s.std_error;
  j["ci95"] = {s.ci_lo, s.ci_hi};
  j["n_samples"] = s.n_samples;
  j["seed"] = s.seed;
  j["heavy_tail_caveat"] = s.heavy_tail_caveat;
  return j;
}

Json bound_report_to_json(const BoundReport& r) {
  Json j;
  j["M"] = r.m;
  j["C"] = r.c_used;
  Json alphas = Json::array();
  for (const auto& av : r.alphas) {
    alphas.push_back(Json{{"s", av.s}, {"value", av.value}, {"exact", av.exact}});
  }
  j["alphas"] = std::move(alphas);
  j["raw_factor"] = r.raw_factor;
  j["log_moment_bound"] = r.log_moment_bound;
  j["moment_bound"] = r.moment_bound;
  j["overflowed"] = r.overflowed;
  if (r.tail_x) {
    j["tail_x"] = *r.tail_x;
    j["tail_bound"] = *r.tail_bound;
  }
  return j;
}

Json u_partition_to_json(const UPartition& p) {
  Json parts = Json::array();
  for (const auto& part : p.parts) {
    Json jp;
    jp["shift"] = part.shift.parts;
    Json members = Json::array();
    for (const auto& m : part.members) members.push_back(m.parts);
    jp["members"] = std::move(members);
    jp["size"] = part.members.size();
    parts.push_back(std::move(jp));
  }
  Json j;
  j["cardinality"] = p.cardinality;
  j["parts"] = std::move(parts);
  return j;
}

std::string study_csv_header() { return "statistic,param,estimate,se,lo,hi,n,seed"; }

std::string study_csv_row(const ChaosStudy& s) {
  std::ostringstream out;
  out << statistic_name(s.statistic) << ',' << format_double(s.parameter) << ','
      << format_double(s.estimate) << ',' << format_double(s.std_error) << ','
      << format_double(s.ci_lo) << ',' << format_double(s.ci_hi) << ',' << s.n_samples << ','
      << s.seed;
  return out.str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Trim to the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

}  // namespace chaos

#pragma once

#include <string>

#include "req2tc/corpus.hpp"
#include "req2tc/doc_model.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(REQ2TC_TEST_DATA) + "/" + name; }

inline req2tc::doc::FeatureElementDocument vehicle_speed_check() {
  return req2tc::doc::parse_document(req2tc::corpus::read_file(data_path("vehicle_speed_check.txt")));
}

}  // namespace fixtures

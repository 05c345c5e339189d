#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "kbqa/amr.hpp"
#include "kbqa/translate.hpp"

namespace kbqa::test {

inline std::string fixture(const std::string& rel) { return std::string(KBQA_FIXTURES) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline lambda::LambdaExpr lambda_of(const std::string& amr_name) {
  return translate::translate(amr::parse_penman(slurp(fixture("amr/" + amr_name + ".amr")))).expr;
}

inline lambda::LambdaExpr lambda_of_text(const std::string& penman) {
  return translate::translate(amr::parse_penman(penman)).expr;
}

}  // namespace kbqa::test

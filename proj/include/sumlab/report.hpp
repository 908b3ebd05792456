#pragma once

#include "sumlab/rational.hpp"

#include <json.hpp>

#include <string>

namespace sumlab {

enum class Verdict { pass, fail, inapplicable };

std::string to_string(Verdict v);

// One exact inequality lhs (<= or >=) rhs from a lemma or claim.
struct ClaimReport {
  std::string claim;
  std::string instance;
  Rat lhs = 0, rhs = 0;
  std::string relation = ">=";
  Verdict verdict = Verdict::inapplicable;
  std::string note;

  bool passed() const { return verdict == Verdict::pass; }
  bool failed() const { return verdict == Verdict::fail; }
  nlohmann::json to_json() const;
};

// Sets the verdict from the relation: "<=", ">=" or "==".
ClaimReport decide(std::string claim, std::string instance, const Rat& lhs, const std::string& relation,
                   const Rat& rhs, std::string note = {});
ClaimReport inapplicable(std::string claim, std::string instance, std::string why);

}  // namespace sumlab

#include "sumlab/report.hpp"

#include <stdexcept>

namespace sumlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "?";
}

nlohmann::json ClaimReport::to_json() const {
  nlohmann::json j;
  j["claim"] = claim;
  j["instance"] = instance;
  j["lhs"] = to_string(lhs);
  j["rhs"] = to_string(rhs);
  j["relation"] = relation;
  j["verdict"] = to_string(verdict);
  if (verdict == Verdict::inapplicable)
    j["pass"] = nullptr;
  else
    j["pass"] = passed();
  if (!note.empty()) j["note"] = note;
  return j;
}

ClaimReport decide(std::string claim, std::string instance, const Rat& lhs, const std::string& relation,
                   const Rat& rhs, std::string note) {
  bool ok;
  if (relation == "<=")
    ok = lhs <= rhs;
  else if (relation == ">=")
    ok = lhs >= rhs;
  else if (relation == "==")
    ok = lhs == rhs;
  else
    throw std::invalid_argument("decide: relation must be <=, >= or ==");
  return {std::move(claim), std::move(instance), lhs, rhs, relation, ok ? Verdict::pass : Verdict::fail, std::move(note)};
}

ClaimReport inapplicable(std::string claim, std::string instance, std::string why) {
  ClaimReport r;
  r.claim = std::move(claim);
  r.instance = std::move(instance);
  r.note = std::move(why);
  return r;
}

}  // namespace sumlab

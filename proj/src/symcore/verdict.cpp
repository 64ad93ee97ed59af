#include "cartalg/verdict.hpp"

#include "cartalg/errors.hpp"

namespace cartalg {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Undecidable: return "undecidable";
  }
  return "?";
}

const Verdict* Verdict::find(const std::string& sub) const {
  for (const auto& v : subs) {
    if (v.name == sub) return &v;
  }
  return nullptr;
}

Verdict Verdict::pass(std::string name, std::string detail) {
  Verdict v;
  v.name = std::move(name);
  v.detail = std::move(detail);
  return v;
}

Verdict Verdict::fail(std::string name, std::string detail, std::optional<Witness> w) {
  Verdict v;
  v.name = std::move(name);
  v.status = Status::Fail;
  v.detail = std::move(detail);
  v.witness = std::move(w);
  return v;
}

Verdict Verdict::all_of(std::string name, std::vector<Verdict> subs) {
  Verdict v;
  v.name = std::move(name);
  for (const auto& s : subs) {
    if (s.path == DecisionPath::Probabilistic) v.path = DecisionPath::Probabilistic;
    if (v.status == Status::Pass && s.status != Status::Pass) {
      v.status = s.status;
      v.witness = s.witness;
      v.detail = s.name + (s.detail.empty() ? "" : ": " + s.detail);
    }
  }
  v.subs = std::move(subs);
  return v;
}

Verdict check_zero(std::string name, const ZeroTester& tester, const std::vector<Component>& comps) {
  Verdict v;
  v.name = std::move(name);
  BatchEvaluator cache = tester.evaluator();
  for (const auto& c : comps) {
    ZeroResult r;
    try {
      r = tester.test(c.value, cache);
    } catch (const UndecidableError& e) {
      v.status = Status::Undecidable;
      v.detail = e.what();
      v.witness = Witness{{}, c.indices, 0.0};
      return v;
    }
    if (r.path == DecisionPath::Probabilistic) v.path = DecisionPath::Probabilistic;
    if (!r.zero) {
      v.status = Status::Fail;
      v.witness = Witness{r.witness, c.indices, r.value};
      return v;
    }
  }
  return v;
}

}  // namespace cartalg

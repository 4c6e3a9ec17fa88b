#include "torcor/json.hpp"

namespace torcor {

using nlohmann::json;

void to_json(json& j, const Rational& r) { j = r.to_string(); }

void to_json(json& j, const CorrelationResult& r) {
  j = json{{"k", r.k},
           {"alpha", r.alpha},
           {"s", r.s},
           {"N", r.n},
           {"raw_count", r.raw_count},
           {"excluded_C", r.excluded_c},
           {"normalized", r.normalized},
           {"comparison", std::string(to_string(r.comparison))},
           {"exact_threshold", r.exact_threshold}};
}

void to_json(json& j, const CorrelationDiscrepancy& r) {
  j = json{{"k", r.k}, {"T", r.t}, {"value", r.value}, {"argmax_s", r.argmax_s}, {"normalized", r.normalized}};
}

void to_json(json& j, const IdentityCheckReport& r) {
  j = json{{"N", r.n},
           {"k", r.k},
           {"t", r.t},
           {"M", r.max_frequency},
           {"A_direct", r.a_direct},
           {"A_fourier", r.a_fourier},
           {"R_direct", r.r_direct},
           {"R_from_identity", r.r_from_identity},
           {"excluded_C", r.excluded_c},
           {"tail_bound", r.tail_bound},
           {"rounding_bound", r.rounding_bound},
           {"holds", r.holds}};
}

void to_json(json& j, const EtConstants& c) { j = json{{"C_add", c.c_add}, {"C_mul", c.c_mul}}; }

void to_json(json& j, const BoundInputs& b) {
  j = json{{"k", b.k}, {"T", b.t}, {"N", b.n}, {"D2k", b.d2k}, {"F", b.f}, {"alpha", b.alpha}, {"delta", b.delta}};
}

void to_json(json& j, const Theorem5Bound& b) {
  j = json{{"value", b.value},
           {"spacing_term", b.spacing_term},
           {"correlation_term", b.correlation_term},
           {"explicit_value", b.explicit_value},
           {"M", b.m},
           {"constants", b.constants}};
}

void to_json(json& j, const DeltaFormBound& b) {
  j = json{{"pair_form", b.pair_form}, {"general_form", b.general_form}};
}

void to_json(json& j, const KeyInequality& k) {
  j = json{{"k", k.k},
           {"T", k.t},
           {"cutoff", k.cutoff},
           {"lhs", k.lhs},
           {"lhs_error", k.lhs_error},
           {"D2k", k.d2k},
           {"rhs", k.rhs},
           {"margin", k.margin},
           {"holds", k.holds}};
}

void to_json(json& j, const DiscrepancyReport& r) {
  j = json{{"N", r.n},
           {"D_N", r.d_n},
           {"et_bound", r.et_bound},
           {"M", r.m},
           {"constants_used", r.constants},
           {"k", r.k},
           {"T", r.t},
           {"D2k", r.d2k},
           {"theorem5", r.theorem5},
           {"F_TN", r.f_tn},
           {"delta", r.delta}};
}

void to_json(json& j, const EnergySample& s) {
  j = json{{"N", s.n}, {"energy", s.energy}, {"ratio", s.ratio}, {"excess", s.excess}};
}

void to_json(json& j, const EnergyVerdict& v) {
  j = json{{"samples", v.samples},
           {"slope", v.slope},
           {"epsilon", v.epsilon},
           {"sub_cubic", v.sub_cubic},
           {"obstructs_fourfold", v.obstructs_fourfold}};
}

}  // namespace torcor

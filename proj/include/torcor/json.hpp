#pragma once

#include <nlohmann/json.hpp>

#include "torcor/correlation.hpp"
#include "torcor/discrepancy.hpp"
#include "torcor/energy.hpp"
#include "torcor/sequence.hpp"
#include "torcor/spectral.hpp"

namespace torcor {

void to_json(nlohmann::json& j, const Rational& r);
void to_json(nlohmann::json& j, const CorrelationResult& r);
void to_json(nlohmann::json& j, const CorrelationDiscrepancy& r);
void to_json(nlohmann::json& j, const IdentityCheckReport& r);
void to_json(nlohmann::json& j, const EtConstants& c);
void to_json(nlohmann::json& j, const BoundInputs& b);
void to_json(nlohmann::json& j, const Theorem5Bound& b);
void to_json(nlohmann::json& j, const DeltaFormBound& b);
void to_json(nlohmann::json& j, const KeyInequality& k);
void to_json(nlohmann::json& j, const DiscrepancyReport& r);
void to_json(nlohmann::json& j, const EnergySample& s);
void to_json(nlohmann::json& j, const EnergyVerdict& v);

}  // namespace torcor

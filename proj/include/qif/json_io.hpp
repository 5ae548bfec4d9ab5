#pragma once

#include <json.hpp>

#include "qif/collateral.hpp"
#include "qif/hmm.hpp"
#include "qif/hyper.hpp"
#include "qif/measures.hpp"
#include "qif/refine.hpp"

namespace qif {

using json = nlohmann::json;

// Wire formats. Rationals travel as strings "p/q" (plain "p" for integers);
// values as their printed form; all matrices as dense row-major tables.

json to_json(const Rat& r);
json to_json(const Domain& d);
json to_json(const Dist& d);
json to_json(const StochMatrix& m);
json to_json(const Joint& j);
json to_json(const Hyper& h);
json to_json(const HmmMatrix& h);
json to_json(const HmmSteps& steps);
json to_json(const GainFunction& g);
json to_json(const Correlation& c);
json to_json(const LeakageReport& r);
json to_json(const Bits& b);
json to_json(const RefinementVerdict& v);

Rat rat_from_json(const json& j);
DomainPtr domain_from_json(const json& j);
Dist dist_from_json(const json& j);
StochMatrix stoch_from_json(const json& j);
Joint joint_from_json(const json& j);
Hyper hyper_from_json(const json& j);
HmmMatrix hmm_from_json(const json& j);
HmmSteps steps_from_json(const json& j);
GainFunction gain_from_json(const json& j);
Correlation correlation_from_json(const json& j);

} // namespace qif

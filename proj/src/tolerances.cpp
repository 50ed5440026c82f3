#include "ccpnet/tolerances.hpp"

#include <map>

#include "ccpnet/errors.hpp"

namespace ccpnet {

namespace {

const std::map<std::string, double Tolerances::*>& field_map() {
  static const std::map<std::string, double Tolerances::*> fields = {
      {"idem", &Tolerances::idem},
      {"comm", &Tolerances::comm},
      {"trace", &Tolerances::trace},
      {"psd", &Tolerances::psd},
      {"faithful_eps", &Tolerances::faithful_eps},
      {"prob_floor", &Tolerances::prob_floor},
      {"meet", &Tolerances::meet},
      {"herm", &Tolerances::herm},
      {"screen", &Tolerances::screen},
      {"eps_strict", &Tolerances::eps_strict},
      {"bell_margin", &Tolerances::bell_margin},
      {"geo", &Tolerances::geo},
  };
  return fields;
}

}  // namespace

void Tolerances::set(const std::string& name, double value) {
  auto it = field_map().find(name);
  if (it == field_map().end()) throw InvalidArgument("unknown tolerance: " + name);
  this->*(it->second) = value;
}

double Tolerances::get(const std::string& name) const {
  auto it = field_map().find(name);
  if (it == field_map().end()) throw InvalidArgument("unknown tolerance: " + name);
  return this->*(it->second);
}

}  // namespace ccpnet

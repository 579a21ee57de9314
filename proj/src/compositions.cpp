#include "randseries/compositions.hpp"

#include <cmath>

#include "randseries/common.hpp"

namespace randseries {

namespace {

void extend(int remaining, int part, Composition& current, std::vector<Composition>& out) {
  const int parts = static_cast<int>(current.size());
  if (part == parts - 1) {
    current[static_cast<std::size_t>(part)] = remaining;
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    current[static_cast<std::size_t>(part)] = v;
    extend(remaining - v, part + 1, current, out);
  }
}

}  // namespace

std::vector<Composition> enumerate_compositions(int total, int parts) {
  if (total < 0) throw ConfigError("composition total must be nonnegative");
  if (parts < 1) throw ConfigError("composition needs at least one part");
  std::vector<Composition> out;
  Composition current(static_cast<std::size_t>(parts), 0);
  extend(total, 0, current, out);
  return out;
}

double composition_count(int total, int parts) {
  return std::round(std::exp(log_gamma(total + parts) - log_gamma(parts) - log_gamma(total + 1.0)));
}

}  // namespace randseries

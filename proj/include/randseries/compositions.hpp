#pragma once

#include <vector>

namespace randseries {

using Composition = std::vector<int>;

/// All weak compositions of total into the given number of parts, in
/// lexicographic order. There are C(total + parts - 1, parts - 1) of them.
std::vector<Composition> enumerate_compositions(int total, int parts);

/// C(total + parts - 1, parts - 1) as a double (exact while below 2^53).
double composition_count(int total, int parts);

}  // namespace randseries

#pragma once

#include <cstdint>
#include <limits>

namespace ridepool {

using VertexId = int32_t;
using EdgeId = int32_t;
using VehicleId = int32_t;
using RequestId = int32_t;
using StopId = int32_t;

// Travel times and schedule times in whole seconds. Distances are 32-bit
// non-negative values; INFTY is the reserved "unreachable" sentinel and is
// chosen so that INFTY + INFTY does not overflow.
using Seconds = int32_t;
using Meters = int32_t;

constexpr Seconds INFTY = std::numeric_limits<int32_t>::max() / 2;
constexpr int32_t INVALID_ID = -1;

// Costs are accumulated in milli-weighted seconds so fractional weight
// parameters stay exact integers (see CostParameters).
using CostMilli = int64_t;
constexpr CostMilli COST_INFTY = std::numeric_limits<int64_t>::max() / 4;

} // namespace ridepool

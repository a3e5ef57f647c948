#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ridepool/types.hpp"

namespace ridepool {

struct Vehicle {
    VehicleId id = INVALID_ID;
    EdgeId initialEdge = INVALID_ID;
    int capacity = 4;
    Seconds servMin = 0;
    Seconds servMax = 0;
};

// Constraint parameters. alpha is kept milli-scaled so the trip bound
// alpha*T_t + beta compares exactly in integers:
//   trip' <= alpha*T_t + beta  <=>  1000*trip' <= alphaMilli*T_t + 1000*beta
struct ConstraintParams {
    int64_t alphaMilli = 1400;
    Seconds beta = 600;
    Seconds maxWait = 600;
    Seconds dwell = 0;
};

struct Stop {
    StopId id = INVALID_ID;
    EdgeId edge = INVALID_ID;
    Seconds arr = 0;         // t_arr_min
    Seconds dep = 0;         // scheduled departure; last stop: == arr until extended
    Seconds minDep = 0;      // latest earliest-pickup among boarders
    Seconds depFloor = 0;    // dispatch-time anchor: the stop cannot be departed earlier
    Seconds distToNext = 0;  // leg distance to the following stop (0 for last)
    std::vector<RequestId> boarding, alighting;
    bool hasActivity() const { return !boarding.empty() || !alighting.empty(); }
};

struct RiderLedgerEntry {
    RequestId request = INVALID_ID;
    VehicleId vehicle = INVALID_ID;
    Seconds tReq = 0;
    Seconds access = 0, egress = 0;
    Seconds earliestPickup = 0;   // tReq + access
    Seconds tentativePickup = 0;  // T_p, fixed at acceptance
    Seconds tentativeTrip = 0;    // T_t, fixed at acceptance
    StopId pickupStop = INVALID_ID, dropoffStop = INVALID_ID;
};

// A fully located insertion candidate: the pickup goes between stops i and
// i+1 (or the rider boards at the existing stop i+1 when pickupMerge), the
// dropoff between j and j+1 (or alights at j+1 when dropoffMerge). i == n-1
// appends the pickup after the last stop and forces j == n-1; j == n-1
// without merge appends the dropoff. Distances a shape does not use stay
// INFTY.
struct InsertionCandidate {
    VehicleId vehicle = INVALID_ID;
    int pickupLeg = -1;  // i
    int dropoffLeg = -1; // j >= i
    bool pickupMerge = false;
    bool dropoffMerge = false;
    EdgeId pickupEdge = INVALID_ID;
    EdgeId dropoffEdge = INVALID_ID;
    Seconds access = 0, egress = 0;
    Seconds distStopToPickup = INFTY;    // d(s_i, p)
    Seconds distPickupToNext = INFTY;    // d(p, s_{i+1})
    Seconds distPickupToDropoff = INFTY; // d(p, d) for i == j chains
    Seconds distStopToDropoff = INFTY;   // d(s_j, d) for j > i
    Seconds distDropoffToNext = INFTY;   // d(d, s_{j+1})
};

struct NewRiderInfo {
    RequestId request = INVALID_ID;
    Seconds tReq = 0;
};

enum class Violation { None, Malformed, Capacity, ServiceEnd, Wait, Trip };

const char *violationName(Violation v);

// Outcome of evaluating a candidate against the hypothetical post-insertion
// schedule. All times are exact integers.
struct InsertionEval {
    Violation violation = Violation::Malformed;
    Seconds tTrip = 0;      // access + wait + in-vehicle + egress for the new rider
    Seconds tTripPlus = 0;  // summed trip-time increases of existing riders
    Seconds tDetour = 0;    // added vehicle operation time incl. waiting
    Seconds tWalk = 0;      // access + egress
    Seconds pickupTime = 0; // departure at the pickup stop (becomes T_p)
    Seconds dropoffTime = 0;
    Seconds newLastArr = 0;
    bool feasible() const { return violation == Violation::None; }
};

class RouteState {
public:
    struct StopDelta {
        VehicleId vehicle = INVALID_ID;
        std::vector<StopId> removedStops;
        std::vector<StopId> addedStops;
        bool lastStopChanged = false;
        bool scheduleChanged = false;
    };

    struct ExecutedStop {
        VehicleId vehicle;
        StopId stop;
        EdgeId edge;
        Seconds arr, dep;
        int numBoard, numAlight;
        int occupancyAfter; // riders on the leg leaving this stop
    };

    explicit RouteState(std::vector<Vehicle> fleet);

    int numVehicles() const { return static_cast<int>(vehicles_.size()); }
    const Vehicle &vehicle(VehicleId v) const { return vehicles_[v]; }
    const std::vector<Stop> &route(VehicleId v) const { return routes_[v]; }
    const std::vector<int> &occupancy(VehicleId v) const { return occupancy_[v]; }
    bool started(VehicleId v) const { return started_[v]; }
    int ridersAboardEnteringCurrentStop(VehicleId v) const { return aboardEnteringFirst_[v]; }
    int maxCapacity() const;

    bool hasRider(RequestId r) const { return ledger_.count(r) > 0; }
    const RiderLedgerEntry &rider(RequestId r) const { return ledger_.at(r); }

    // Evaluates the candidate against the hypothetical post-insertion
    // schedule without mutating state. `now` anchors departures of idle
    // vehicles and appended legs.
    InsertionEval evaluate(const InsertionCandidate &cand, const NewRiderInfo &rider,
                           const ConstraintParams &params, Seconds now) const;

    // Creates the initial stop at the vehicle's initial location.
    StopDelta startVehicle(VehicleId v, Seconds time);

    // Applies a feasible candidate and records T_p/T_t in the ledger.
    // Throws std::logic_error if the candidate does not evaluate feasible.
    StopDelta applyInsertion(const InsertionCandidate &cand, const NewRiderInfo &rider,
                             const ConstraintParams &params, Seconds now);

    // Vehicle reached its next stop: s_0 is removed, indices shift. Returns
    // the executed record of the removed stop; riders alighting at the newly
    // current stop are completed and leave the ledger.
    struct AdvanceResult {
        StopDelta delta;
        ExecutedStop executed{};
        std::vector<RiderLedgerEntry> completedRiders;
        Seconds reachedArr = 0;
    };
    AdvanceResult advanceVehicle(VehicleId v, Seconds now);

    // Largest extra detour on each leg that violates no wait/trip/service-end
    // constraint downstream; waiting slack at intermediate stops absorbs
    // delay. out receives route.size()-1 values.
    void legLeeways(VehicleId v, const ConstraintParams &params, std::vector<Seconds> &out) const;

    // Debug validator: schedule consistency, occupancy bookkeeping, service
    // window, and the ledger guarantees. Throws std::logic_error on failure.
    void validate(const ConstraintParams &params,
                  const std::function<Seconds(EdgeId, EdgeId)> &distance = {}) const;

private:
    struct Materialized {
        std::vector<Seconds> newArr, newDep;
        int firstWalked = 0;
        int lastWalked = -1;
        Seconds arrP = 0, depP = 0, arrD = 0, depD = 0;
        Seconds lastStopNewDep = 0; // append anchor, also the new depFloor
    };

    InsertionEval walkSchedule(const InsertionCandidate &cand, const NewRiderInfo &rider,
                               const ConstraintParams &params, Seconds now, Materialized *mat) const;
    int64_t latestArrivalValue(VehicleId v, int k, const ConstraintParams &params) const;
    Seconds dwellAt(const Stop &s, const ConstraintParams &params) const {
        return s.hasActivity() ? params.dwell : 0;
    }

    std::vector<Vehicle> vehicles_;
    std::vector<std::vector<Stop>> routes_;
    std::vector<std::vector<int>> occupancy_; // per leg
    std::vector<uint8_t> started_;
    std::vector<int> aboardEnteringFirst_; // riders on board when arriving at the current stop
    std::unordered_map<RequestId, RiderLedgerEntry> ledger_;
    StopId nextStopId_ = 0;
};

} // namespace ridepool

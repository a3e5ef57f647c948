#include "ridepool/fleet.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ridepool {

namespace {

Seconds max3(Seconds a, Seconds b, Seconds c) { return std::max(a, std::max(b, c)); }

// Latest arrival at the dropoff implied by one rider's trip bound, floored
// to whole seconds. The feasibility comparison itself is done in milli
// units; flooring is equivalent for integer arrivals.
Seconds tripLatestArrival(const RiderLedgerEntry &le, const ConstraintParams &params) {
    const int64_t milli = params.alphaMilli * le.tentativeTrip +
                          1000LL * (static_cast<int64_t>(params.beta) + le.tReq - le.egress);
    int64_t sec = milli >= 0 ? milli / 1000 : -((-milli + 999) / 1000);
    if (sec >= INFTY)
        sec = INFTY;
    return static_cast<Seconds>(sec);
}

} // namespace

const char *violationName(Violation v) {
    switch (v) {
    case Violation::None: return "none";
    case Violation::Malformed: return "malformed";
    case Violation::Capacity: return "capacity";
    case Violation::ServiceEnd: return "service-end";
    case Violation::Wait: return "wait";
    case Violation::Trip: return "trip";
    }
    return "?";
}

RouteState::RouteState(std::vector<Vehicle> fleet) : vehicles_(std::move(fleet)) {
    routes_.resize(vehicles_.size());
    occupancy_.resize(vehicles_.size());
    started_.assign(vehicles_.size(), 0);
    aboardEnteringFirst_.assign(vehicles_.size(), 0);
    for (size_t v = 0; v < vehicles_.size(); ++v) {
        if (vehicles_[v].capacity < 1)
            throw std::invalid_argument("vehicle capacity must be >= 1");
        if (vehicles_[v].servMin > vehicles_[v].servMax)
            throw std::invalid_argument("vehicle service interval is empty");
    }
}

int RouteState::maxCapacity() const {
    int m = 0;
    for (const auto &v : vehicles_)
        m = std::max(m, v.capacity);
    return m;
}

InsertionEval RouteState::walkSchedule(const InsertionCandidate &cand, const NewRiderInfo &rider,
                                       const ConstraintParams &params, Seconds now,
                                       Materialized *mat) const {
    InsertionEval ev;
    const VehicleId veh = cand.vehicle;
    if (veh < 0 || veh >= numVehicles() || !started_[veh])
        return ev;
    const auto &st = routes_[veh];
    const int n = static_cast<int>(st.size());
    const int i = cand.pickupLeg, j = cand.dropoffLeg;
    const Seconds ep = rider.tReq + cand.access;

    // --- shape validation -------------------------------------------------
    if (n == 0 || i < 0 || j < i || j > n - 1)
        return ev;
    if (i == n - 1 && (cand.pickupMerge || cand.dropoffMerge || j != n - 1))
        return ev;
    if (cand.pickupMerge) {
        if (i + 1 > n - 1 || j < i + 1 || st[i + 1].edge != cand.pickupEdge)
            return ev;
        if (i + 1 < n - 1 && st[i + 1].dep < ep)
            return ev; // boarding would delay the stop's departure
    }
    if (cand.dropoffMerge) {
        if (j + 1 > n - 1 || st[j + 1].edge != cand.dropoffEdge)
            return ev;
        if (cand.pickupMerge && j + 1 == i + 1)
            return ev; // alighting at the boarding stop
    }
    auto have = [](Seconds d) { return d >= 0 && d < INFTY; };
    if (!cand.pickupMerge && !have(cand.distStopToPickup))
        return ev;
    if (i == n - 1 && !have(cand.distPickupToDropoff))
        return ev;
    if (!cand.pickupMerge && i < n - 1) {
        if (i == j && !cand.dropoffMerge) {
            if (!have(cand.distPickupToDropoff) || !have(cand.distDropoffToNext))
                return ev;
        } else if (!have(cand.distPickupToNext)) {
            return ev;
        }
    }
    if (j > i && !cand.dropoffMerge) {
        if (!have(cand.distStopToDropoff))
            return ev;
        if (j < n - 1 && !have(cand.distDropoffToNext))
            return ev;
    }

    // --- capacity ---------------------------------------------------------
    const auto &occ = occupancy_[veh];
    const int cap = vehicles_[veh].capacity;
    const int firstOccLeg = cand.pickupMerge ? i + 1 : i;
    const int lastOccLeg = std::min(j, n - 2);
    bool violCapacity = false;
    for (int k = firstOccLeg; k <= lastOccLeg; ++k)
        if (occ[k] >= cap)
            violCapacity = true;

    // --- timeline ---------------------------------------------------------
    bool violWait = false, violTrip = false;
    Seconds tTripPlus = 0;
    Seconds pickupTime = 0, dropoffTime = 0;
    Seconds arrP = 0, depP = 0, arrD = 0, depD = 0;
    Seconds newLastArr = st[n - 1].arr;

    auto checkStop = [&](int k, Seconds arrK, Seconds depK) {
        for (RequestId rid : st[k].boarding) {
            const auto &le = ledger_.at(rid);
            if (depK > le.tentativePickup + params.maxWait)
                violWait = true;
        }
        for (RequestId rid : st[k].alighting) {
            const auto &le = ledger_.at(rid);
            if (1000LL * (static_cast<int64_t>(arrK) + le.egress - le.tReq) >
                params.alphaMilli * le.tentativeTrip + 1000LL * params.beta)
                violTrip = true;
            tTripPlus += arrK - st[k].arr;
        }
    };
    auto recordMat = [&](int k, Seconds arrK, Seconds depK) {
        if (mat != nullptr) {
            mat->firstWalked = std::min(mat->firstWalked, k);
            mat->lastWalked = std::max(mat->lastWalked, k);
            mat->newArr[k] = arrK;
            mat->newDep[k] = depK;
        }
    };
    if (mat != nullptr) {
        mat->newArr.assign(n, 0);
        mat->newDep.assign(n, 0);
        mat->firstWalked = n;
        mat->lastWalked = -1;
    }
    auto appendBase = [&](int k, Seconds arrK, Seconds extraMinDep, bool extraActivity) {
        const Seconds dw = (st[k].hasActivity() || extraActivity) ? params.dwell : 0;
        return max3(arrK + dw, std::max(std::max(st[k].minDep, extraMinDep), st[k].depFloor), now);
    };

    if (i == n - 1) {
        // pickup and dropoff appended after the last stop
        const Seconds base = appendBase(n - 1, st[n - 1].arr, 0, false);
        arrP = base + cand.distStopToPickup;
        depP = std::max(arrP + params.dwell, ep);
        arrD = depP + cand.distPickupToDropoff;
        pickupTime = depP;
        dropoffTime = arrD;
        newLastArr = arrD;
        checkStop(n - 1, st[n - 1].arr, base);
        if (mat != nullptr)
            mat->lastStopNewDep = base;
    } else {
        int k = n;          // first original stop the walk arrives at
        Seconds curArr = 0; // its new arrival
        bool dropoffPlaced = cand.dropoffMerge;   // insertion of D done / not applicable
        bool dropoffSeen = false;                 // dropoffTime determined

        if (cand.pickupMerge) {
            const int m = i + 1;
            pickupTime = st[m].dep;
            if (cand.dropoffMerge) {
                dropoffTime = st[j + 1].arr; // schedule entirely unchanged
                dropoffSeen = true;
            } else if (j == n - 1) {
                const Seconds base = appendBase(n - 1, st[n - 1].arr, m == n - 1 ? ep : 0, m == n - 1);
                if (m == n - 1)
                    pickupTime = base;
                arrD = base + cand.distStopToDropoff;
                dropoffTime = arrD;
                newLastArr = arrD;
                dropoffPlaced = dropoffSeen = true;
                checkStop(n - 1, st[n - 1].arr, base);
                if (mat != nullptr)
                    mat->lastStopNewDep = base;
            } else {
                // inner dropoff; schedule unchanged through stop j
                arrD = st[j].dep + cand.distStopToDropoff;
                depD = arrD + params.dwell;
                dropoffTime = arrD;
                dropoffPlaced = dropoffSeen = true;
                k = j + 1;
                curArr = depD + cand.distDropoffToNext;
            }
        } else {
            arrP = st[i].dep + cand.distStopToPickup;
            depP = std::max(arrP + params.dwell, ep);
            pickupTime = depP;
            if (i == j && !cand.dropoffMerge) {
                arrD = depP + cand.distPickupToDropoff;
                depD = arrD + params.dwell;
                dropoffTime = arrD;
                dropoffPlaced = dropoffSeen = true;
                k = i + 1;
                curArr = depD + cand.distDropoffToNext;
            } else {
                k = i + 1;
                curArr = depP + cand.distPickupToNext;
            }
        }

        for (; k <= n - 1; ++k) {
            const Seconds arrK = curArr;
            if (cand.dropoffMerge && k == j + 1) {
                dropoffTime = arrK;
                dropoffSeen = true;
            }
            const bool isLast = k == n - 1;
            if (isLast && j == n - 1 && !cand.dropoffMerge) {
                // dropoff appended after the (shifted) last stop
                const Seconds base = appendBase(n - 1, arrK, 0, false);
                arrD = base + cand.distStopToDropoff;
                dropoffTime = arrD;
                newLastArr = arrD;
                dropoffPlaced = dropoffSeen = true;
                checkStop(k, arrK, base);
                recordMat(k, arrK, base);
                if (mat != nullptr)
                    mat->lastStopNewDep = base;
                break;
            }
            const Seconds depK =
                max3(arrK + dwellAt(st[k], params), st[k].minDep, st[k].depFloor);
            checkStop(k, arrK, depK);
            recordMat(k, arrK, isLast ? arrK : depK);
            if (isLast) {
                newLastArr = arrK;
                break;
            }
            if (!cand.dropoffMerge && !dropoffPlaced && j == k) {
                arrD = depK + cand.distStopToDropoff;
                depD = arrD + params.dwell;
                dropoffTime = arrD;
                dropoffPlaced = dropoffSeen = true;
                curArr = depD + cand.distDropoffToNext;
            } else {
                if (arrK == st[k].arr && depK == st[k].dep && dropoffPlaced && dropoffSeen) {
                    // delay fully absorbed and nothing left to insert
                    newLastArr = st[n - 1].arr;
                    break;
                }
                curArr = depK + st[k].distToNext;
            }
        }
    }

    // --- verdict ----------------------------------------------------------
    const bool violService = newLastArr > vehicles_[veh].servMax;
    if (violCapacity)
        ev.violation = Violation::Capacity;
    else if (violService)
        ev.violation = Violation::ServiceEnd;
    else if (violWait)
        ev.violation = Violation::Wait;
    else if (violTrip)
        ev.violation = Violation::Trip;
    else
        ev.violation = Violation::None;

    ev.pickupTime = pickupTime;
    ev.dropoffTime = dropoffTime;
    ev.newLastArr = newLastArr;
    ev.tTrip = dropoffTime + cand.egress - rider.tReq;
    ev.tTripPlus = tTripPlus;
    ev.tDetour = std::max(0, newLastArr - std::max(st[n - 1].arr, now));
    ev.tWalk = cand.access + cand.egress;
    if (mat != nullptr) {
        mat->arrP = arrP;
        mat->depP = depP;
        mat->arrD = arrD;
        mat->depD = depD;
    }
    return ev;
}

InsertionEval RouteState::evaluate(const InsertionCandidate &cand, const NewRiderInfo &rider,
                                   const ConstraintParams &params, Seconds now) const {
    return walkSchedule(cand, rider, params, now, nullptr);
}

RouteState::StopDelta RouteState::startVehicle(VehicleId v, Seconds time) {
    if (started_[v])
        throw std::logic_error("vehicle already started");
    started_[v] = 1;
    Stop s;
    s.id = nextStopId_++;
    s.edge = vehicles_[v].initialEdge;
    s.arr = time;
    s.dep = time;
    routes_[v].push_back(s);
    StopDelta delta;
    delta.vehicle = v;
    delta.addedStops.push_back(s.id);
    delta.lastStopChanged = true;
    return delta;
}

RouteState::StopDelta RouteState::applyInsertion(const InsertionCandidate &cand,
                                                 const NewRiderInfo &rider,
                                                 const ConstraintParams &params, Seconds now) {
    Materialized mat;
    const InsertionEval ev = walkSchedule(cand, rider, params, now, &mat);
    if (!ev.feasible())
        throw std::logic_error(std::string("applyInsertion: infeasible candidate (") +
                               violationName(ev.violation) + ")");

    auto &st = routes_[cand.vehicle];
    auto &occ = occupancy_[cand.vehicle];
    const int n = static_cast<int>(st.size());
    const int i = cand.pickupLeg, j = cand.dropoffLeg;
    const Seconds ep = rider.tReq + cand.access;
    const bool pickupAppended = i == n - 1;
    const bool dropoffAppended = j == n - 1 && !cand.dropoffMerge;

    StopDelta delta;
    delta.vehicle = cand.vehicle;
    delta.scheduleChanged = true;

    // New times of walked original stops (indices still unshifted).
    for (int k = mat.firstWalked; k <= mat.lastWalked; ++k) {
        st[k].arr = mat.newArr[k];
        st[k].dep = mat.newDep[k];
    }
    if (pickupAppended || dropoffAppended) {
        st[n - 1].dep = mat.lastStopNewDep;
        st[n - 1].depFloor = mat.lastStopNewDep;
    }

    RiderLedgerEntry ledger;
    ledger.request = rider.request;
    ledger.vehicle = cand.vehicle;
    ledger.tReq = rider.tReq;
    ledger.access = cand.access;
    ledger.egress = cand.egress;
    ledger.earliestPickup = ep;
    ledger.tentativePickup = ev.pickupTime;
    ledger.tentativeTrip = ev.tTrip;

    // --- pickup -----------------------------------------------------------
    int pickupPos;
    int pickupShift = 0;
    if (cand.pickupMerge) {
        pickupPos = i + 1;
        st[pickupPos].boarding.push_back(rider.request);
        if (i + 1 < n - 1 || !dropoffAppended) // append case already handled above
            st[pickupPos].minDep = std::max(st[pickupPos].minDep, ep);
    } else {
        Stop p;
        p.id = nextStopId_++;
        p.edge = cand.pickupEdge;
        p.arr = mat.arrP;
        p.dep = mat.depP;
        p.minDep = ep;
        p.boarding.push_back(rider.request);
        if (i == j && !cand.dropoffMerge)
            p.distToNext = cand.distPickupToDropoff; // the dropoff follows directly
        else
            p.distToNext = cand.distPickupToNext;
        pickupPos = i + 1;
        st[pickupPos - 1].distToNext = cand.distStopToPickup;
        st.insert(st.begin() + pickupPos, p);
        delta.addedStops.push_back(p.id);
        pickupShift = 1;
    }
    ledger.pickupStop = st[pickupPos].id;

    // --- dropoff ----------------------------------------------------------
    int dropoffPos;
    if (cand.dropoffMerge) {
        dropoffPos = j + 1 + pickupShift;
        st[dropoffPos].alighting.push_back(rider.request);
    } else {
        Stop d;
        d.id = nextStopId_++;
        d.edge = cand.dropoffEdge;
        d.arr = mat.arrD;
        d.alighting.push_back(rider.request);
        if (i == j && !cand.pickupMerge)
            dropoffPos = pickupPos + 1; // directly after the new pickup stop
        else {
            dropoffPos = j + 1 + pickupShift;
            st[dropoffPos - 1].distToNext = cand.distStopToDropoff;
        }
        if (dropoffPos == static_cast<int>(st.size())) {
            d.dep = d.arr;
            d.distToNext = 0;
        } else {
            d.dep = d.arr + params.dwell;
            d.distToNext = cand.distDropoffToNext;
        }
        st.insert(st.begin() + dropoffPos, d);
        delta.addedStops.push_back(d.id);
    }
    ledger.dropoffStop = st[dropoffPos].id;
    ledger_[rider.request] = ledger;

    // --- occupancy --------------------------------------------------------
    occ.assign(st.size() - 1, 0);
    int aboard = aboardEnteringFirst_[cand.vehicle];
    for (size_t k = 0; k + 1 < st.size(); ++k) {
        aboard += static_cast<int>(st[k].boarding.size()) - static_cast<int>(st[k].alighting.size());
        occ[k] = aboard;
    }

    delta.lastStopChanged = pickupAppended || dropoffAppended;
    return delta;
}

RouteState::AdvanceResult RouteState::advanceVehicle(VehicleId v, Seconds now) {
    auto &st = routes_[v];
    if (st.size() < 2)
        throw std::logic_error("advanceVehicle: vehicle has no next stop");

    AdvanceResult res;
    res.delta.vehicle = v;
    const Stop &popped = st[0];
    res.executed = {v,
                    popped.id,
                    popped.edge,
                    popped.arr,
                    popped.dep,
                    static_cast<int>(popped.boarding.size()),
                    static_cast<int>(popped.alighting.size()),
                    occupancy_[v][0]};
    res.delta.removedStops.push_back(popped.id);
    aboardEnteringFirst_[v] = occupancy_[v][0];

    st.erase(st.begin());
    occupancy_[v].erase(occupancy_[v].begin());
    res.reachedArr = st[0].arr;

    for (RequestId rid : st[0].alighting) {
        auto it = ledger_.find(rid);
        if (it != ledger_.end()) {
            res.completedRiders.push_back(it->second);
            ledger_.erase(it);
        }
    }
    (void)now;
    return res;
}

int64_t RouteState::latestArrivalValue(VehicleId v, int k, const ConstraintParams &params) const {
    const auto &st = routes_[v];
    const Stop &s = st[k];
    int64_t la = INFTY;
    if (k == static_cast<int>(st.size()) - 1)
        la = vehicles_[v].servMax;
    for (RequestId rid : s.boarding) {
        const auto &le = ledger_.at(rid);
        la = std::min<int64_t>(la, static_cast<int64_t>(le.tentativePickup) + params.maxWait -
                                       dwellAt(s, params));
    }
    for (RequestId rid : s.alighting) {
        const auto &le = ledger_.at(rid);
        la = std::min<int64_t>(la, tripLatestArrival(le, params));
    }
    return la;
}

void RouteState::legLeeways(VehicleId v, const ConstraintParams &params,
                            std::vector<Seconds> &out) const {
    const auto &st = routes_[v];
    const int n = static_cast<int>(st.size());
    out.assign(std::max(0, n - 1), 0);
    if (n < 2)
        return;

    // S(x) = total absorbable waiting slack at stops 1..x
    std::vector<int64_t> slackPrefix(n, 0);
    for (int m = 1; m <= n - 1; ++m) {
        int64_t slack = 0;
        if (m < n - 1)
            slack = static_cast<int64_t>(st[m].dep) - (st[m].arr + dwellAt(st[m], params));
        slackPrefix[m] = slackPrefix[m - 1] + std::max<int64_t>(0, slack);
    }

    // leeway(i) = min_{k>i} [LA(k) - arr(k) + S(k-1)] - S(i)
    std::vector<int64_t> suffixMin(n + 1, INFTY);
    for (int k = n - 1; k >= 1; --k) {
        const int64_t la = latestArrivalValue(v, k, params);
        const int64_t g = la >= INFTY ? INFTY : la - st[k].arr + slackPrefix[k - 1];
        suffixMin[k] = std::min(g, suffixMin[k + 1]);
    }
    for (int i = 0; i <= n - 2; ++i) {
        int64_t lw = suffixMin[i + 1] >= INFTY ? INFTY : suffixMin[i + 1] - slackPrefix[i];
        lw = std::max<int64_t>(0, std::min<int64_t>(lw, INFTY));
        out[i] = static_cast<Seconds>(lw);
    }
}

void RouteState::validate(const ConstraintParams &params,
                          const std::function<Seconds(EdgeId, EdgeId)> &distance) const {
    auto fail = [](const std::string &msg) { throw std::logic_error("route validation: " + msg); };
    for (VehicleId v = 0; v < numVehicles(); ++v) {
        const auto &st = routes_[v];
        const int n = static_cast<int>(st.size());
        if (n == 0)
            continue;
        if (static_cast<int>(occupancy_[v].size()) != n - 1)
            fail("occupancy size mismatch");
        int aboard = aboardEnteringFirst_[v];
        for (int k = 0; k < n; ++k) {
            const Stop &s = st[k];
            aboard += static_cast<int>(s.boarding.size()) - static_cast<int>(s.alighting.size());
            if (k < n - 1) {
                if (occupancy_[v][k] != aboard)
                    fail("occupancy bookkeeping broken");
                if (aboard > vehicles_[v].capacity)
                    fail("occupancy exceeds capacity");
                if (aboard < 0)
                    fail("negative occupancy");
                if (distance) {
                    const Seconds d = distance(s.edge, st[k + 1].edge);
                    if (d != s.distToNext)
                        fail("stored leg distance differs from shortest path");
                }
                if (st[k + 1].arr != s.dep + s.distToNext)
                    fail("schedule consistency: arr != dep + dist");
                if (k >= 1 && s.dep != max3(s.arr + dwellAt(s, params), s.minDep, s.depFloor))
                    fail("departure rule broken");
            }
            if (s.dep < s.arr)
                fail("departure before arrival");
        }
        if (aboard != 0)
            fail("riders left aboard after the last stop");
        if (st[n - 1].arr > vehicles_[v].servMax)
            fail("stop scheduled past the service end");
        if (st[0].arr < vehicles_[v].servMin)
            fail("stop scheduled before the service start");
        for (int k = 0; k < n; ++k) {
            for (RequestId rid : st[k].boarding) {
                const auto &le = ledger_.at(rid);
                if (k == n - 1)
                    fail("boarder at a terminal stop");
                if (st[k].dep > le.tentativePickup + params.maxWait)
                    fail("wait bound violated in schedule");
                if (st[k].dep < le.earliestPickup)
                    fail("pickup before the rider can reach the stop");
            }
            for (RequestId rid : st[k].alighting) {
                const auto &le = ledger_.at(rid);
                if (st[k].arr > tripLatestArrival(le, params))
                    fail("trip bound violated in schedule");
            }
        }
    }
}

} // namespace ridepool

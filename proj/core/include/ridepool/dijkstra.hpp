#pragma once

#include <queue>
#include <span>
#include <vector>

#include "ridepool/road_graph.hpp"
#include "ridepool/types.hpp"

namespace ridepool {

enum class SearchDirection { Forward, Reverse };

// Stop criterion for a Dijkstra run: settle everything, settle exactly the
// vertices within a radius, or stop once a target set is settled.
struct StopCriterion {
    Seconds radius = INFTY;
    std::span<const VertexId> targets{};

    static StopCriterion none() { return {}; }
    static StopCriterion withinRadius(Seconds r) { return {r, {}}; }
    static StopCriterion targetSet(std::span<const VertexId> t) { return {INFTY, t}; }
};

// Reusable search labels. Once a vertex is settled its distance is final;
// unsettled vertices report INFTY. Single-threaded, one instance per
// concurrent search. clear() is O(1) via generation stamps.
class SearchState {
public:
    SearchState() = default;
    explicit SearchState(int numVertices) { resize(numVertices); }

    void resize(int numVertices) {
        dist_.assign(numVertices, INFTY);
        parentVertex_.assign(numVertices, INVALID_ID);
        parentEdge_.assign(numVertices, INVALID_ID);
        generation_.assign(numVertices, 0);
        settledBit_.assign(numVertices, 0);
        currentGen_ = 0;
    }

    void clear() {
        ++currentGen_;
        settledOrder_.clear();
    }

    bool reached(VertexId v) const { return generation_[v] == currentGen_ && dist_[v] < INFTY; }
    bool settled(VertexId v) const { return reached(v) && settledFlag_(v); }
    Seconds distance(VertexId v) const { return settled(v) ? dist_[v] : INFTY; }
    Seconds tentativeDistance(VertexId v) const { return reached(v) ? dist_[v] : INFTY; }
    VertexId parentVertex(VertexId v) const { return reached(v) ? parentVertex_[v] : INVALID_ID; }
    EdgeId parentEdge(VertexId v) const { return reached(v) ? parentEdge_[v] : INVALID_ID; }

    // Settled vertices in settle order (nondecreasing distance).
    const std::vector<VertexId> &settledOrder() const { return settledOrder_; }

private:
    friend void runDijkstra(const RoadGraph &, SearchDirection,
                            std::span<const std::pair<VertexId, Seconds>>, SearchState &,
                            const StopCriterion &);

    bool settledFlag_(VertexId v) const { return settledBit_[v]; }

    std::vector<Seconds> dist_;
    std::vector<VertexId> parentVertex_;
    std::vector<EdgeId> parentEdge_;
    std::vector<uint32_t> generation_;
    std::vector<uint8_t> settledBit_;
    std::vector<VertexId> settledOrder_;
    uint32_t currentGen_ = 0;
};

// Multi-source Dijkstra with per-source distance offsets. Forward searches
// relax out-edges, reverse searches relax in-edges (distances then mean
// "distance from v to the source side"). Settles in nondecreasing distance
// order with vertex-id tie-breaking, so runs are deterministic.
void runDijkstra(const RoadGraph &graph, SearchDirection dir,
                 std::span<const std::pair<VertexId, Seconds>> sources, SearchState &state,
                 const StopCriterion &stop = StopCriterion::none());

inline void runDijkstra(const RoadGraph &graph, SearchDirection dir, VertexId source,
                        SearchState &state, const StopCriterion &stop = StopCriterion::none()) {
    const std::pair<VertexId, Seconds> s[1] = {{source, 0}};
    runDijkstra(graph, dir, std::span<const std::pair<VertexId, Seconds>>(s, 1), state, stop);
}

} // namespace ridepool

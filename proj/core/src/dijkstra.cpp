#include "ridepool/dijkstra.hpp"

#include <cassert>

namespace ridepool {

namespace {

struct QueueEntry {
    Seconds dist;
    VertexId vertex;
    bool operator>(const QueueEntry &o) const {
        return dist != o.dist ? dist > o.dist : vertex > o.vertex;
    }
};

} // namespace

void runDijkstra(const RoadGraph &graph, SearchDirection dir,
                 std::span<const std::pair<VertexId, Seconds>> sources, SearchState &state,
                 const StopCriterion &stop) {
    if (static_cast<int>(state.generation_.size()) < graph.numVertices())
        state.resize(graph.numVertices());
    state.clear();

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> queue;
    auto label = [&](VertexId v) -> Seconds & {
        if (state.generation_[v] != state.currentGen_) {
            state.generation_[v] = state.currentGen_;
            state.dist_[v] = INFTY;
            state.parentVertex_[v] = INVALID_ID;
            state.parentEdge_[v] = INVALID_ID;
            state.settledBit_[v] = 0;
        }
        return state.dist_[v];
    };

    for (const auto &[v, offset] : sources) {
        assert(v >= 0 && v < graph.numVertices());
        Seconds &d = label(v);
        if (offset < d) {
            d = offset;
            queue.push({offset, v});
        }
    }

    size_t targetsRemaining = 0;
    for (VertexId t : stop.targets) {
        (void)t;
        ++targetsRemaining;
    }

    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (state.generation_[v] == state.currentGen_ && (state.settledBit_[v] || d > state.dist_[v]))
            continue; // stale entry
        if (d > stop.radius)
            break;
        state.settledBit_[v] = 1;
        state.settledOrder_.push_back(v);

        if (targetsRemaining > 0) {
            for (VertexId t : stop.targets)
                if (t == v) {
                    --targetsRemaining;
                    break;
                }
            if (targetsRemaining == 0)
                break;
        }

        if (dir == SearchDirection::Forward) {
            for (EdgeId e : graph.outEdges(v)) {
                const auto &edge = graph.edge(e);
                Seconds cand = d + edge.weight;
                Seconds &dw = label(edge.head);
                if (cand < dw) {
                    dw = cand;
                    state.parentVertex_[edge.head] = v;
                    state.parentEdge_[edge.head] = e;
                    queue.push({cand, edge.head});
                }
            }
        } else {
            for (EdgeId e : graph.inEdges(v)) {
                const auto &edge = graph.edge(e);
                Seconds cand = d + edge.weight;
                Seconds &dw = label(edge.tail);
                if (cand < dw) {
                    dw = cand;
                    state.parentVertex_[edge.tail] = v;
                    state.parentEdge_[edge.tail] = e;
                    queue.push({cand, edge.tail});
                }
            }
        }
    }
}

} // namespace ridepool

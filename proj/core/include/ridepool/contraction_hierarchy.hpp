#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ridepool/road_graph.hpp"
#include "ridepool/types.hpp"

namespace ridepool {

class ChSearchState;

// Shortcut-augmented hierarchy over a RoadGraph. Vertices carry a rank
// (contraction order); every shortest path in the input is representable as
// an up-down path over the augmented edge set, and every shortcut unpacks
// recursively into a contiguous sequence of input edges of equal weight.
class ContractionHierarchy {
public:
    struct ChEdge {
        VertexId tail, head;
        Seconds weight;
        // For shortcuts, the two constituent CH edges; for input edges both
        // are INVALID_ID and inputEdge holds the dense input edge id.
        int32_t child1 = INVALID_ID, child2 = INVALID_ID;
        EdgeId inputEdge = INVALID_ID;
    };

    struct QueryResult {
        Seconds distance = INFTY;
        std::vector<EdgeId> path; // input edge ids, empty if s == t or unreachable
        bool reachable() const { return distance < INFTY; }
    };

    // Deterministic construction: lazy minimum of (edge difference + number
    // of contracted neighbors), hop-limited witness searches.
    static ContractionHierarchy build(const RoadGraph &graph, int witnessHopLimit = 16);

    int numVertices() const { return static_cast<int>(rank_.size()); }
    int32_t rank(VertexId v) const { return rank_[v]; }
    int numChEdges() const { return static_cast<int>(edges_.size()); }
    const ChEdge &chEdge(int32_t e) const { return edges_[e]; }

    // Exact point-to-point distance with unpacked input-edge path.
    QueryResult query(VertexId s, VertexId t) const;
    Seconds queryDistance(VertexId s, VertexId t) const;
    Seconds queryDistance(VertexId s, VertexId t, ChSearchState &fwd, ChSearchState &bwd) const;

    // Appends the input edges of CH edge e (recursively unpacked) to out.
    void unpackEdge(int32_t e, std::vector<EdgeId> &out) const;

    // Upward adjacency (rank-increasing CH edges, for forward searches) and
    // reverse-downward adjacency (rank-decreasing CH edges indexed by head,
    // for reverse searches). Both expose (neighbor, weight, chEdge) triples.
    struct Arc {
        VertexId to;
        Seconds weight;
        int32_t chEdge;
    };
    struct ArcRange {
        const Arc *beginPtr, *endPtr;
        const Arc *begin() const { return beginPtr; }
        const Arc *end() const { return endPtr; }
    };
    ArcRange upArcs(VertexId v) const {
        return {upArcs_.data() + upFirst_[v], upArcs_.data() + upFirst_[v + 1]};
    }
    ArcRange downArcsReversed(VertexId v) const {
        return {downArcs_.data() + downFirst_[v], downArcs_.data() + downFirst_[v + 1]};
    }

    // Binary cache with a versioned header and an input-graph fingerprint;
    // load returns nullopt on any mismatch.
    void save(const std::string &path, const RoadGraph &graph) const;
    static std::optional<ContractionHierarchy> load(const std::string &path, const RoadGraph &graph);

    static uint64_t fingerprint(const RoadGraph &graph);

private:
    void buildSearchGraphs();

    std::vector<int32_t> rank_;
    std::vector<ChEdge> edges_;
    std::vector<int32_t> upFirst_, downFirst_;
    std::vector<Arc> upArcs_, downArcs_;
};

// Scratch state for CH searches (upward or reverse-downward Dijkstra over
// the hierarchy). Single-use per search, reusable across searches.
class ChSearchState {
public:
    void resize(int numVertices) {
        dist_.assign(numVertices, INFTY);
        parentArc_.assign(numVertices, INVALID_ID);
        generation_.assign(numVertices, 0);
        currentGen_ = 0;
    }
    void clear() {
        ++currentGen_;
        settledOrder_.clear();
    }
    bool reached(VertexId v) const {
        return v < static_cast<VertexId>(generation_.size()) && generation_[v] == currentGen_;
    }
    Seconds distance(VertexId v) const { return reached(v) ? dist_[v] : INFTY; }
    int32_t parentChEdge(VertexId v) const { return reached(v) ? parentArc_[v] : INVALID_ID; }
    const std::vector<VertexId> &settledOrder() const { return settledOrder_; }

    // Runs a full Dijkstra over the given CH adjacency (up arcs for forward,
    // reverse-down arcs for backward). Sources carry distance offsets.
    enum class Side { Upward, ReverseDownward };
    void run(const ContractionHierarchy &ch, Side side,
             std::span<const std::pair<VertexId, Seconds>> sources, Seconds bound = INFTY);

private:
    std::vector<Seconds> dist_;
    std::vector<int32_t> parentArc_;
    std::vector<uint32_t> generation_;
    std::vector<VertexId> settledOrder_;
    uint32_t currentGen_ = 0;

    friend class ContractionHierarchy;
};

} // namespace ridepool

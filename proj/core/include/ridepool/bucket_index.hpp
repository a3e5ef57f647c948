#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "ridepool/contraction_hierarchy.hpp"
#include "ridepool/dijkstra.hpp"
#include "ridepool/road_graph.hpp"

namespace ridepool {

// Which side of an up-down path the stored entries represent.
//   FromTargets: entry at v holds a distance target -> v; one-to-many queries
//                answer dist(target, source) via a reverse-downward search
//                from the source location.
//   ToTargets:   entry at v holds a distance v -> target; queries answer
//                dist(source, target) via a forward-upward search.
enum class BucketKind { FromTargets, ToTargets };

struct RawBucketEntry {
    VertexId vertex;
    Seconds dist;
    int32_t parentArc; // CH edge (unpruned) or input edge (elliptic) toward the target
};

// Per-vertex stores of distance entries keyed by target. Targets are dense
// slots internally so queries can use flat scratch arrays; the public ids are
// arbitrary int32 (stop ids). Supports many concurrent readers or one
// writer; the simulation enforces the phase discipline.
class BucketIndex {
public:
    // inputArcParents: entry parents are input-graph edges (elliptic entries)
    // rather than CH arcs (unpruned entries).
    BucketIndex(BucketKind kind, bool sortedByDist, bool inputArcParents = false)
        : kind_(kind), sorted_(sortedByDist), inputArcs_(inputArcParents) {}

    void attach(const RoadGraph *graph, const ContractionHierarchy *ch) {
        graph_ = graph;
        ch_ = ch;
        buckets_.resize(graph->numVertices());
    }

    BucketKind kind() const { return kind_; }
    bool sorted() const { return sorted_; }
    bool contains(int32_t target) const { return slotByTarget_.count(target) > 0; }
    EdgeId targetEdge(int32_t target) const { return slots_[slotByTarget_.at(target)].edge; }
    int numTargets() const { return static_cast<int>(slotByTarget_.size()); }
    size_t numEntries() const { return numEntries_; }
    int numSlots() const { return static_cast<int>(slots_.size()); }

    // Generates entries over the full CH search space of the target location
    // (upward space for FromTargets, reverse-downward for ToTargets).
    void insertTargetUnpruned(int32_t target, EdgeId locationEdge, ChSearchState &scratch);

    // Inserts precomputed entries (elliptic pruning computes them per leg).
    void insertTargetWithEntries(int32_t target, EdgeId locationEdge,
                                 std::span<const RawBucketEntry> entries);

    // Removes every entry of the target; throws std::out_of_range if unknown.
    void removeTarget(int32_t target);

    struct Hit {
        int32_t target;
        Seconds distance;
        VertexId meetVertex;
    };

    struct QueryScratch {
        ChSearchState search;
        std::vector<Seconds> best;
        std::vector<VertexId> meet;
        std::vector<uint32_t> gen;
        uint32_t currentGen = 0;
    };

    // One-to-many from an edge location. Exact for every target whose
    // distance is representable through a bucketed vertex; targets whose
    // distance provably exceeds distanceBound may be omitted, targets within
    // the bound never are. A target registered on the source's own edge
    // reports distance 0.
    void oneToMany(EdgeId sourceEdge, Seconds distanceBound, QueryScratch &scratch,
                   std::vector<Hit> &out) const;

    // Reconstructs the input-edge path between the meet vertex and the
    // target location by chasing per-entry parents (target side) and is
    // intended together with the caller's search-side parents.
    std::vector<EdgeId> targetSidePath(VertexId meetVertex, int32_t target) const;

    template <typename Fn> void forEachEntry(Fn fn) const {
        for (VertexId v = 0; v < static_cast<VertexId>(buckets_.size()); ++v)
            for (const auto &e : buckets_[v])
                fn(v, slots_[e.slot].target, e.dist);
    }

private:
    struct Entry {
        int32_t slot;
        Seconds dist;
        int32_t parentArc;
    };
    struct Slot {
        int32_t target = INVALID_ID;
        EdgeId edge = INVALID_ID;
        std::vector<VertexId> vertices; // where this target has entries
        bool live = false;
    };

    int32_t allocateSlot(int32_t target, EdgeId edge);
    void insertEntry(VertexId v, const Entry &e);

    BucketKind kind_;
    bool sorted_;
    bool inputArcs_;
    const RoadGraph *graph_ = nullptr;
    const ContractionHierarchy *ch_ = nullptr;
    std::vector<std::vector<Entry>> buckets_;
    std::vector<Slot> slots_;
    std::vector<int32_t> freeSlots_;
    std::unordered_map<int32_t, int32_t> slotByTarget_;
    std::unordered_map<EdgeId, std::vector<int32_t>> slotsByEdge_;
    size_t numEntries_ = 0;
};

// Exact detour ellipse of a route leg: every vertex v with
//   dist(from, v) + dist(v, to) <= legDistance + leeway
// using edge-location semantics on both ends. Produces entry lists for both
// bucket sides (distances from the leg start resp. to the leg end) with
// input-graph parent edges. Searches are plain bounded Dijkstras, so entry
// distances are true shortest-path distances.
struct EllipseEntries {
    std::vector<RawBucketEntry> fromStart; // dist(from, v)
    std::vector<RawBucketEntry> toEnd;     // dist(v, to)
};

void computeDetourEllipse(const RoadGraph &graph, EdgeId fromLoc, EdgeId toLoc, Seconds legDistance,
                          Seconds leeway, SearchState &fwd, SearchState &bwd, EllipseEntries &out);

} // namespace ridepool

#include "ridepool/bucket_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace ridepool {

int32_t BucketIndex::allocateSlot(int32_t target, EdgeId edge) {
    if (slotByTarget_.count(target))
        throw std::invalid_argument("bucket index: target already present: " + std::to_string(target));
    int32_t slot;
    if (!freeSlots_.empty()) {
        slot = freeSlots_.back();
        freeSlots_.pop_back();
    } else {
        slot = static_cast<int32_t>(slots_.size());
        slots_.push_back({});
    }
    slots_[slot] = {target, edge, {}, true};
    slotByTarget_.emplace(target, slot);
    slotsByEdge_[edge].push_back(slot);
    return slot;
}

void BucketIndex::insertEntry(VertexId v, const Entry &e) {
    auto &bucket = buckets_[v];
    if (sorted_) {
        auto pos = std::upper_bound(bucket.begin(), bucket.end(), e, [](const Entry &a, const Entry &b) {
            return a.dist != b.dist ? a.dist < b.dist : a.slot < b.slot;
        });
        bucket.insert(pos, e);
    } else {
        bucket.push_back(e);
    }
    ++numEntries_;
}

void BucketIndex::insertTargetUnpruned(int32_t target, EdgeId locationEdge, ChSearchState &scratch) {
    const int32_t slot = allocateSlot(target, locationEdge);
    std::pair<VertexId, Seconds> seed[1];
    ChSearchState::Side side;
    if (kind_ == BucketKind::FromTargets) {
        // Distances from the location: upward search starting past the edge head.
        seed[0] = {graph_->head(locationEdge), 0};
        side = ChSearchState::Side::Upward;
    } else {
        // Distances to the location: the full edge is traversed on arrival.
        seed[0] = {graph_->tail(locationEdge), graph_->weight(locationEdge)};
        side = ChSearchState::Side::ReverseDownward;
    }
    scratch.run(*ch_, side, std::span<const std::pair<VertexId, Seconds>>(seed, 1));
    auto &vertices = slots_[slot].vertices;
    for (VertexId v : scratch.settledOrder()) {
        insertEntry(v, {slot, scratch.distance(v), scratch.parentChEdge(v)});
        vertices.push_back(v);
    }
}

void BucketIndex::insertTargetWithEntries(int32_t target, EdgeId locationEdge,
                                          std::span<const RawBucketEntry> entries) {
    const int32_t slot = allocateSlot(target, locationEdge);
    auto &vertices = slots_[slot].vertices;
    for (const auto &raw : entries) {
        insertEntry(raw.vertex, {slot, raw.dist, raw.parentArc});
        vertices.push_back(raw.vertex);
    }
}

void BucketIndex::removeTarget(int32_t target) {
    auto it = slotByTarget_.find(target);
    if (it == slotByTarget_.end())
        throw std::out_of_range("bucket index: unknown target: " + std::to_string(target));
    const int32_t slot = it->second;
    for (VertexId v : slots_[slot].vertices) {
        auto &bucket = buckets_[v];
        bucket.erase(std::remove_if(bucket.begin(), bucket.end(),
                                    [slot](const Entry &e) { return e.slot == slot; }),
                     bucket.end());
    }
    numEntries_ -= slots_[slot].vertices.size();
    auto &edgeSlots = slotsByEdge_[slots_[slot].edge];
    edgeSlots.erase(std::remove(edgeSlots.begin(), edgeSlots.end(), slot), edgeSlots.end());
    if (edgeSlots.empty())
        slotsByEdge_.erase(slots_[slot].edge);
    slots_[slot] = {};
    freeSlots_.push_back(slot);
    slotByTarget_.erase(it);
}

void BucketIndex::oneToMany(EdgeId sourceEdge, Seconds distanceBound, QueryScratch &scratch,
                            std::vector<Hit> &out) const {
    out.clear();
    if (scratch.best.size() < slots_.size()) {
        scratch.best.resize(slots_.size());
        scratch.meet.resize(slots_.size());
        scratch.gen.resize(slots_.size(), 0);
    }
    ++scratch.currentGen;
    auto record = [&](int32_t slot, Seconds dist, VertexId meetVertex) {
        if (scratch.gen[slot] != scratch.currentGen) {
            scratch.gen[slot] = scratch.currentGen;
            scratch.best[slot] = INFTY;
            scratch.meet[slot] = INVALID_ID;
        }
        if (dist < scratch.best[slot]) {
            scratch.best[slot] = dist;
            scratch.meet[slot] = meetVertex;
        }
    };

    // Targets registered on the query edge are at distance 0 by definition.
    auto sameEdge = slotsByEdge_.find(sourceEdge);
    if (sameEdge != slotsByEdge_.end())
        for (int32_t slot : sameEdge->second)
            record(slot, 0, INVALID_ID);

    std::pair<VertexId, Seconds> seed[1];
    ChSearchState::Side side;
    if (kind_ == BucketKind::FromTargets) {
        seed[0] = {graph_->tail(sourceEdge), graph_->weight(sourceEdge)};
        side = ChSearchState::Side::ReverseDownward;
    } else {
        seed[0] = {graph_->head(sourceEdge), 0};
        side = ChSearchState::Side::Upward;
    }
    scratch.search.run(*ch_, side, std::span<const std::pair<VertexId, Seconds>>(seed, 1),
                       distanceBound);

    for (VertexId v : scratch.search.settledOrder()) {
        const Seconds searchDist = scratch.search.distance(v);
        for (const Entry &e : buckets_[v]) {
            const Seconds cand = searchDist + e.dist;
            if (cand > distanceBound) {
                if (sorted_)
                    break; // remaining entries are at least as distant
                continue;
            }
            record(e.slot, cand, v);
        }
    }

    for (int32_t slot = 0; slot < static_cast<int32_t>(slots_.size()); ++slot) {
        if (scratch.gen[slot] == scratch.currentGen && slots_[slot].live &&
            scratch.best[slot] <= distanceBound)
            out.push_back({slots_[slot].target, scratch.best[slot], scratch.meet[slot]});
    }
}

std::vector<EdgeId> BucketIndex::targetSidePath(VertexId meetVertex, int32_t target) const {
    const int32_t slot = slotByTarget_.at(target);
    std::vector<EdgeId> path;
    if (meetVertex == INVALID_ID)
        return path; // same-edge hit, nothing to traverse

    auto entryAt = [&](VertexId v) -> const Entry * {
        for (const auto &e : buckets_[v])
            if (e.slot == slot)
                return &e;
        return nullptr;
    };

    // Collect the parent chain first; shortcut unpacking must happen in path
    // order, so FromTargets chains are reversed at the arc level.
    std::vector<int32_t> chain;
    VertexId v = meetVertex;
    size_t guard = numEntries_ + ch_->numChEdges() + 2;
    while (guard-- > 0) {
        const Entry *e = entryAt(v);
        if (e == nullptr)
            throw std::runtime_error("bucket index: broken parent chain");
        if (e->parentArc == INVALID_ID)
            break;
        chain.push_back(e->parentArc);
        if (inputArcs_)
            v = kind_ == BucketKind::FromTargets ? graph_->tail(e->parentArc)
                                                 : graph_->head(e->parentArc);
        else
            v = kind_ == BucketKind::FromTargets ? ch_->chEdge(e->parentArc).tail
                                                 : ch_->chEdge(e->parentArc).head;
    }

    if (kind_ == BucketKind::FromTargets) {
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            if (inputArcs_)
                path.push_back(*it);
            else
                ch_->unpackEdge(*it, path);
        }
    } else {
        for (int32_t arc : chain) {
            if (inputArcs_)
                path.push_back(arc);
            else
                ch_->unpackEdge(arc, path);
        }
        path.push_back(slots_[slot].edge); // the target's own edge is traversed last
    }
    return path;
}

void computeDetourEllipse(const RoadGraph &graph, EdgeId fromLoc, EdgeId toLoc, Seconds legDistance,
                          Seconds leeway, SearchState &fwd, SearchState &bwd, EllipseEntries &out) {
    out.fromStart.clear();
    out.toEnd.clear();
    if (leeway < 0)
        leeway = 0;
    const Seconds bound = legDistance >= INFTY ? INFTY : legDistance + std::min(leeway, INFTY - legDistance);

    const std::pair<VertexId, Seconds> fwdSeed[1] = {{graph.head(fromLoc), 0}};
    runDijkstra(graph, SearchDirection::Forward,
                std::span<const std::pair<VertexId, Seconds>>(fwdSeed, 1), fwd,
                StopCriterion::withinRadius(bound));
    const std::pair<VertexId, Seconds> bwdSeed[1] = {{graph.tail(toLoc), graph.weight(toLoc)}};
    runDijkstra(graph, SearchDirection::Reverse,
                std::span<const std::pair<VertexId, Seconds>>(bwdSeed, 1), bwd,
                StopCriterion::withinRadius(bound));

    for (VertexId v : fwd.settledOrder()) {
        const Seconds df = fwd.distance(v);
        const Seconds db = bwd.distance(v);
        if (db >= INFTY || df + db > bound)
            continue;
        out.fromStart.push_back({v, df, fwd.parentEdge(v)});
        out.toEnd.push_back({v, db, bwd.parentEdge(v)});
    }
}

} // namespace ridepool

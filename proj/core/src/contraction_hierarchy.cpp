#include "ridepool/contraction_hierarchy.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <fstream>
#include <queue>

namespace ridepool {

namespace {

struct DynArc {
    VertexId to;
    Seconds weight;
    int32_t chEdge;
};

// Local hop- and distance-bounded Dijkstra used for witness searches during
// contraction. Hop limiting can miss witnesses, which only means extra
// shortcuts, never wrong distances.
class WitnessSearch {
public:
    void resize(int n) {
        dist_.assign(n, INFTY);
        hops_.assign(n, 0);
        generation_.assign(n, 0);
        gen_ = 0;
    }

    // Distances from u in the remaining graph, excluding `excluded`.
    // Settles until the queue exceeds maxDist or settleCap vertices.
    template <typename OutArcsFn>
    void run(VertexId u, VertexId excluded, Seconds maxDist, int hopLimit, int settleCap,
             const std::vector<uint8_t> &contracted, OutArcsFn outArcs) {
        ++gen_;
        queue_ = {};
        touch(u);
        dist_[u] = 0;
        queue_.push({0, 0, u});
        int settledCount = 0;
        while (!queue_.empty()) {
            auto [d, h, v] = queue_.top();
            queue_.pop();
            if (generation_[v] != gen_ || d > dist_[v])
                continue;
            if (d > maxDist || ++settledCount > settleCap)
                break;
            if (h >= hopLimit)
                continue;
            for (const DynArc &a : outArcs(v)) {
                if (a.to == excluded || contracted[a.to])
                    continue;
                Seconds cand = d + a.weight;
                if (cand > maxDist)
                    continue;
                touch(a.to);
                if (cand < dist_[a.to]) {
                    dist_[a.to] = cand;
                    hops_[a.to] = h + 1;
                    queue_.push({cand, static_cast<int32_t>(h + 1), a.to});
                }
            }
        }
    }

    Seconds distance(VertexId v) const { return generation_[v] == gen_ ? dist_[v] : INFTY; }

private:
    void touch(VertexId v) {
        if (generation_[v] != gen_) {
            generation_[v] = gen_;
            dist_[v] = INFTY;
            hops_[v] = 0;
        }
    }

    struct Entry {
        Seconds dist;
        int32_t hops;
        VertexId vertex;
        bool operator>(const Entry &o) const {
            if (dist != o.dist)
                return dist > o.dist;
            return vertex > o.vertex;
        }
    };

    std::vector<Seconds> dist_;
    std::vector<int32_t> hops_;
    std::vector<uint32_t> generation_;
    uint32_t gen_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue_;
};

constexpr int kWitnessSettleCap = 2000;

struct PrioEntry {
    int64_t prio;
    VertexId vertex;
    bool operator>(const PrioEntry &o) const {
        if (prio != o.prio)
            return prio > o.prio;
        return vertex > o.vertex;
    }
};

} // namespace

ContractionHierarchy ContractionHierarchy::build(const RoadGraph &graph, int witnessHopLimit) {
    const int n = graph.numVertices();
    ContractionHierarchy ch;
    ch.rank_.assign(n, -1);

    std::vector<std::vector<DynArc>> out(n), in(n);
    std::vector<uint8_t> contracted(n, 0);
    std::vector<int32_t> contractedNeighbors(n, 0);

    auto findArc = [&](std::vector<DynArc> &arcs, VertexId to) -> DynArc * {
        for (auto &a : arcs)
            if (a.to == to)
                return &a;
        return nullptr;
    };

    // Seed from input edges, keeping only the lightest of parallel edges
    // (ties towards the smaller edge id) and dropping self-loops, which can
    // never lie on a shortest path.
    for (EdgeId e = 0; e < graph.numEdges(); ++e) {
        const auto &edge = graph.edge(e);
        if (edge.tail == edge.head)
            continue;
        DynArc *existing = findArc(out[edge.tail], edge.head);
        if (existing != nullptr) {
            if (edge.weight < existing->weight) {
                existing->weight = edge.weight;
                ch.edges_[existing->chEdge] = {edge.tail, edge.head, edge.weight,
                                               INVALID_ID, INVALID_ID, e};
                findArc(in[edge.head], edge.tail)->weight = edge.weight;
            }
            continue;
        }
        int32_t chId = static_cast<int32_t>(ch.edges_.size());
        ch.edges_.push_back({edge.tail, edge.head, edge.weight, INVALID_ID, INVALID_ID, e});
        out[edge.tail].push_back({edge.head, edge.weight, chId});
        in[edge.head].push_back({edge.tail, edge.weight, chId});
    }

    WitnessSearch witness;
    witness.resize(n);
    auto outArcsFn = [&](VertexId v) -> const std::vector<DynArc> & { return out[v]; };

    // Counts the shortcuts contraction of v would create; addThem performs
    // the insertion (improving an existing parallel arc in place is safe:
    // arcs are only referenced as shortcut children once an endpoint is
    // contracted, after which they are never improved again).
    auto processContraction = [&](VertexId v, bool addThem) -> int {
        int shortcuts = 0;
        for (const DynArc &ua : in[v]) {
            const VertexId u = ua.to;
            if (contracted[u] || u == v)
                continue;
            Seconds maxBound = 0;
            bool anyTarget = false;
            for (const DynArc &wa : out[v]) {
                if (contracted[wa.to] || wa.to == v || wa.to == u)
                    continue;
                maxBound = std::max(maxBound, ua.weight + wa.weight);
                anyTarget = true;
            }
            if (!anyTarget)
                continue;
            witness.run(u, v, maxBound, witnessHopLimit, kWitnessSettleCap, contracted, outArcsFn);
            for (const DynArc &wa : out[v]) {
                const VertexId w = wa.to;
                if (contracted[w] || w == v || w == u)
                    continue;
                const Seconds bound = ua.weight + wa.weight;
                if (witness.distance(w) <= bound)
                    continue;
                ++shortcuts;
                if (!addThem)
                    continue;
                DynArc *existing = findArc(out[u], w);
                if (existing != nullptr) {
                    if (bound < existing->weight) {
                        existing->weight = bound;
                        ch.edges_[existing->chEdge] = {u, w, bound, ua.chEdge, wa.chEdge, INVALID_ID};
                        findArc(in[w], u)->weight = bound;
                    }
                } else {
                    int32_t chId = static_cast<int32_t>(ch.edges_.size());
                    ch.edges_.push_back({u, w, bound, ua.chEdge, wa.chEdge, INVALID_ID});
                    out[u].push_back({w, bound, chId});
                    in[w].push_back({u, bound, chId});
                }
            }
        }
        return shortcuts;
    };

    auto priority = [&](VertexId v) -> int64_t {
        int removed = 0;
        for (const DynArc &a : out[v])
            if (!contracted[a.to] && a.to != v)
                ++removed;
        for (const DynArc &a : in[v])
            if (!contracted[a.to] && a.to != v)
                ++removed;
        const int shortcuts = processContraction(v, false);
        return static_cast<int64_t>(shortcuts) - removed + contractedNeighbors[v];
    };

    std::priority_queue<PrioEntry, std::vector<PrioEntry>, std::greater<PrioEntry>> queue;
    for (VertexId v = 0; v < n; ++v)
        queue.push({priority(v), v});

    int32_t nextRank = 0;
    std::vector<VertexId> neighborScratch;
    while (!queue.empty()) {
        auto [prio, v] = queue.top();
        queue.pop();
        if (contracted[v])
            continue;
        const int64_t fresh = priority(v);
        if (!queue.empty()) {
            PrioEntry cand{fresh, v};
            if (cand > queue.top()) {
                queue.push(cand);
                continue;
            }
        }

        processContraction(v, true);
        contracted[v] = 1;
        ch.rank_[v] = nextRank++;

        neighborScratch.clear();
        for (const DynArc &a : out[v])
            if (!contracted[a.to])
                neighborScratch.push_back(a.to);
        for (const DynArc &a : in[v])
            if (!contracted[a.to])
                neighborScratch.push_back(a.to);
        std::sort(neighborScratch.begin(), neighborScratch.end());
        neighborScratch.erase(std::unique(neighborScratch.begin(), neighborScratch.end()),
                              neighborScratch.end());
        for (VertexId u : neighborScratch)
            ++contractedNeighbors[u];
    }

    ch.buildSearchGraphs();
    return ch;
}

void ContractionHierarchy::buildSearchGraphs() {
    const int n = numVertices();
    upFirst_.assign(n + 1, 0);
    downFirst_.assign(n + 1, 0);
    for (const auto &e : edges_) {
        if (rank_[e.tail] < rank_[e.head])
            ++upFirst_[e.tail + 1];
        else
            ++downFirst_[e.head + 1];
    }
    for (int v = 0; v < n; ++v) {
        upFirst_[v + 1] += upFirst_[v];
        downFirst_[v + 1] += downFirst_[v];
    }
    upArcs_.resize(upFirst_[n]);
    downArcs_.resize(downFirst_[n]);
    std::vector<int32_t> upPos(upFirst_.begin(), upFirst_.end() - 1);
    std::vector<int32_t> downPos(downFirst_.begin(), downFirst_.end() - 1);
    for (int32_t i = 0; i < static_cast<int32_t>(edges_.size()); ++i) {
        const auto &e = edges_[i];
        if (rank_[e.tail] < rank_[e.head])
            upArcs_[upPos[e.tail]++] = {e.head, e.weight, i};
        else
            downArcs_[downPos[e.head]++] = {e.tail, e.weight, i};
    }
}

void ChSearchState::run(const ContractionHierarchy &ch, Side side,
                        std::span<const std::pair<VertexId, Seconds>> sources, Seconds bound) {
    if (static_cast<int>(generation_.size()) < ch.numVertices())
        resize(ch.numVertices());
    clear();

    struct Entry {
        Seconds dist;
        VertexId vertex;
        bool operator>(const Entry &o) const {
            return dist != o.dist ? dist > o.dist : vertex > o.vertex;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    auto touch = [&](VertexId v) {
        if (generation_[v] != currentGen_) {
            generation_[v] = currentGen_;
            dist_[v] = INFTY;
            parentArc_[v] = INVALID_ID;
        }
    };
    for (const auto &[v, offset] : sources) {
        touch(v);
        if (offset < dist_[v]) {
            dist_[v] = offset;
            queue.push({offset, v});
        }
    }
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d > dist_[v])
            continue;
        if (d > bound)
            break;
        settledOrder_.push_back(v);
        auto arcs = side == Side::Upward ? ch.upArcs(v) : ch.downArcsReversed(v);
        for (const auto &a : arcs) {
            Seconds cand = d + a.weight;
            if (cand > bound)
                continue;
            touch(a.to);
            if (cand < dist_[a.to]) {
                dist_[a.to] = cand;
                parentArc_[a.to] = a.chEdge;
                queue.push({cand, a.to});
            }
        }
    }
}

void ContractionHierarchy::unpackEdge(int32_t e, std::vector<EdgeId> &out) const {
    // Iterative pre-order over (child1, child2) keeps input edges in path order.
    std::vector<int32_t> stack{e};
    while (!stack.empty()) {
        int32_t cur = stack.back();
        stack.pop_back();
        const ChEdge &edge = edges_[cur];
        if (edge.inputEdge != INVALID_ID) {
            out.push_back(edge.inputEdge);
        } else {
            stack.push_back(edge.child2);
            stack.push_back(edge.child1);
        }
    }
}

Seconds ContractionHierarchy::queryDistance(VertexId s, VertexId t, ChSearchState &fwd,
                                            ChSearchState &bwd) const {
    if (s == t)
        return 0;
    const std::pair<VertexId, Seconds> src[1] = {{s, 0}};
    const std::pair<VertexId, Seconds> dst[1] = {{t, 0}};
    fwd.run(*this, ChSearchState::Side::Upward, src);
    bwd.run(*this, ChSearchState::Side::ReverseDownward, dst);
    Seconds best = INFTY;
    const auto &smaller = fwd.settledOrder().size() <= bwd.settledOrder().size() ? fwd : bwd;
    const auto &other = (&smaller == &fwd) ? bwd : fwd;
    for (VertexId v : smaller.settledOrder()) {
        if (other.reached(v))
            best = std::min(best, fwd.distance(v) + bwd.distance(v));
    }
    return best >= INFTY ? INFTY : best;
}

Seconds ContractionHierarchy::queryDistance(VertexId s, VertexId t) const {
    ChSearchState fwd, bwd;
    return queryDistance(s, t, fwd, bwd);
}

ContractionHierarchy::QueryResult ContractionHierarchy::query(VertexId s, VertexId t) const {
    QueryResult result;
    if (s == t) {
        result.distance = 0;
        return result;
    }
    ChSearchState fwd, bwd;
    fwd.resize(numVertices());
    bwd.resize(numVertices());
    const std::pair<VertexId, Seconds> src[1] = {{s, 0}};
    const std::pair<VertexId, Seconds> dst[1] = {{t, 0}};
    fwd.run(*this, ChSearchState::Side::Upward, src);
    bwd.run(*this, ChSearchState::Side::ReverseDownward, dst);

    Seconds best = INFTY;
    VertexId meet = INVALID_ID;
    for (VertexId v : fwd.settledOrder()) {
        if (!bwd.reached(v))
            continue;
        Seconds d = fwd.distance(v) + bwd.distance(v);
        if (d < best || (d == best && v < meet)) {
            best = d;
            meet = v;
        }
    }
    if (meet == INVALID_ID)
        return result;
    result.distance = best;

    std::vector<int32_t> upChain; // CH edges from s to meet, reversed
    for (VertexId v = meet; v != s;) {
        int32_t arc = fwd.parentChEdge(v);
        assert(arc != INVALID_ID);
        upChain.push_back(arc);
        v = edges_[arc].tail;
    }
    for (auto it = upChain.rbegin(); it != upChain.rend(); ++it)
        unpackEdge(*it, result.path);
    for (VertexId v = meet; v != t;) {
        int32_t arc = bwd.parentChEdge(v);
        assert(arc != INVALID_ID);
        unpackEdge(arc, result.path);
        v = edges_[arc].head;
    }
    return result;
}

uint64_t ContractionHierarchy::fingerprint(const RoadGraph &graph) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(graph.numVertices()));
    mix(static_cast<uint64_t>(graph.numEdges()));
    for (EdgeId e = 0; e < graph.numEdges(); ++e) {
        const auto &edge = graph.edge(e);
        mix(static_cast<uint64_t>(edge.tail));
        mix(static_cast<uint64_t>(edge.head));
        mix(static_cast<uint64_t>(edge.weight));
    }
    return h;
}

namespace {
constexpr char kCacheMagic[8] = {'R', 'P', 'C', 'H', '0', '0', '0', '1'};
}

void ContractionHierarchy::save(const std::string &path, const RoadGraph &graph) const {
    std::ofstream outFile(path, std::ios::binary);
    if (!outFile.good())
        throw std::runtime_error("cannot write CH cache: " + path);
    outFile.write(kCacheMagic, sizeof(kCacheMagic));
    const uint64_t fp = fingerprint(graph);
    outFile.write(reinterpret_cast<const char *>(&fp), sizeof(fp));
    const int32_t n = numVertices();
    const int32_t m = numChEdges();
    outFile.write(reinterpret_cast<const char *>(&n), sizeof(n));
    outFile.write(reinterpret_cast<const char *>(&m), sizeof(m));
    outFile.write(reinterpret_cast<const char *>(rank_.data()), n * sizeof(int32_t));
    outFile.write(reinterpret_cast<const char *>(edges_.data()), m * sizeof(ChEdge));
}

std::optional<ContractionHierarchy> ContractionHierarchy::load(const std::string &path,
                                                               const RoadGraph &graph) {
    std::ifstream inFile(path, std::ios::binary);
    if (!inFile.good())
        return std::nullopt;
    char magic[8];
    inFile.read(magic, sizeof(magic));
    if (!inFile.good() || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
        return std::nullopt;
    uint64_t fp = 0;
    inFile.read(reinterpret_cast<char *>(&fp), sizeof(fp));
    if (!inFile.good() || fp != fingerprint(graph))
        return std::nullopt;
    int32_t n = 0, m = 0;
    inFile.read(reinterpret_cast<char *>(&n), sizeof(n));
    inFile.read(reinterpret_cast<char *>(&m), sizeof(m));
    if (!inFile.good() || n != graph.numVertices() || m < 0)
        return std::nullopt;
    ContractionHierarchy ch;
    ch.rank_.resize(n);
    ch.edges_.resize(m);
    inFile.read(reinterpret_cast<char *>(ch.rank_.data()), n * sizeof(int32_t));
    inFile.read(reinterpret_cast<char *>(ch.edges_.data()), m * sizeof(ChEdge));
    if (!inFile.good())
        return std::nullopt;
    ch.buildSearchGraphs();
    return ch;
}

} // namespace ridepool

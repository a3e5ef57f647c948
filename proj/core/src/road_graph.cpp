#include "ridepool/road_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace ridepool {

RoadGraph::RoadGraph(int numVertices, std::vector<Edge> edges) : edges_(std::move(edges)) {
    firstOut_.assign(numVertices + 1, 0);
    firstIn_.assign(numVertices + 1, 0);
    for (const auto &e : edges_) {
        if (e.tail < 0 || e.tail >= numVertices || e.head < 0 || e.head >= numVertices)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.weight < 0)
            throw std::invalid_argument("negative edge weight");
        ++firstOut_[e.tail + 1];
        ++firstIn_[e.head + 1];
    }
    for (int v = 0; v < numVertices; ++v) {
        firstOut_[v + 1] += firstOut_[v];
        firstIn_[v + 1] += firstIn_[v];
    }
    outEdgeIds_.resize(edges_.size());
    inEdgeIds_.resize(edges_.size());
    std::vector<int32_t> outPos(firstOut_.begin(), firstOut_.end() - 1);
    std::vector<int32_t> inPos(firstIn_.begin(), firstIn_.end() - 1);
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
        outEdgeIds_[outPos[edges_[e].tail]++] = e;
        inEdgeIds_[inPos[edges_[e].head]++] = e;
    }
}

EdgeId NetworkBundle::vehicleEdgeFromExternal(EdgeId externalId) const {
    auto it = vehicleEdgeByExternalId.find(externalId);
    return it == vehicleEdgeByExternalId.end() ? INVALID_ID : it->second;
}

EdgeId NetworkBundle::pedestrianEdgeFromExternal(EdgeId externalId) const {
    auto it = pedestrianEdgeByExternalId.find(externalId);
    return it == pedestrianEdgeByExternalId.end() ? INVALID_ID : it->second;
}

Projection Projection::forCoords(const std::vector<LatLon> &coords) {
    Projection p;
    if (coords.empty())
        return p;
    double sum = 0.0;
    for (const auto &c : coords)
        sum += c.lat;
    constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
    p.refLatRad = sum / static_cast<double>(coords.size()) * kDegToRad;
    return p;
}

} // namespace ridepool

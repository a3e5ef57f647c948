#include "ridepool/location_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace ridepool {

LocationIndex LocationIndex::build(const NetworkBundle &nets) {
    LocationIndex index;
    index.projection_ = Projection::forCoords(nets.coords);

    std::vector<uint8_t> dual(nets.coords.size(), 0);
    for (EdgeId pe = 0; pe < nets.pedestrian.numEdges(); ++pe) {
        if (nets.pedToVehicleEdge[pe] == INVALID_ID)
            continue;
        dual[nets.pedestrian.tail(pe)] = 1;
        dual[nets.pedestrian.head(pe)] = 1;
    }
    for (VertexId v = 0; v < static_cast<VertexId>(dual.size()); ++v) {
        if (!dual[v])
            continue;
        auto [x, y] = index.projection_.toPlane(nets.coords[v]);
        index.points_.push_back({x, y, v});
    }
    if (index.points_.empty())
        throw std::runtime_error("location index: no dual-accessible vertices");

    index.nodes_.reserve(index.points_.size());
    index.root_ = index.buildRec(0, static_cast<int>(index.points_.size()), 0);
    return index;
}

int LocationIndex::buildRec(int lo, int hi, int depth) {
    if (lo >= hi)
        return -1;
    const uint8_t axis = static_cast<uint8_t>(depth % 2);
    int mid = lo + (hi - lo) / 2;
    std::nth_element(points_.begin() + lo, points_.begin() + mid, points_.begin() + hi,
                     [axis](const Point &a, const Point &b) {
                         return axis == 0 ? a.x < b.x : a.y < b.y;
                     });
    int nodeIdx = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[nodeIdx].pointIndex = mid;
    nodes_[nodeIdx].axis = axis;
    int left = buildRec(lo, mid, depth + 1);
    int right = buildRec(mid + 1, hi, depth + 1);
    nodes_[nodeIdx].left = left;
    nodes_[nodeIdx].right = right;
    return nodeIdx;
}

void LocationIndex::nearestRec(int node, double qx, double qy, double &bestDist2,
                               VertexId &bestVertex) const {
    if (node < 0)
        return;
    const Node &n = nodes_[node];
    const Point &p = points_[n.pointIndex];
    const double dx = p.x - qx, dy = p.y - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < bestDist2 || (d2 == bestDist2 && p.vertex < bestVertex)) {
        bestDist2 = d2;
        bestVertex = p.vertex;
    }
    const double diff = n.axis == 0 ? qx - p.x : qy - p.y;
    const int near = diff < 0 ? n.left : n.right;
    const int far = diff < 0 ? n.right : n.left;
    nearestRec(near, qx, qy, bestDist2, bestVertex);
    // The far side can still hold an equally distant, smaller-id vertex, so
    // do not prune on exact equality.
    if (diff * diff <= bestDist2)
        nearestRec(far, qx, qy, bestDist2, bestVertex);
}

VertexId LocationIndex::mapLocation(const LatLon &coord) const {
    if (points_.empty())
        throw std::runtime_error("location index: empty");
    auto [qx, qy] = projection_.toPlane(coord);
    double bestDist2 = std::numeric_limits<double>::infinity();
    VertexId bestVertex = std::numeric_limits<VertexId>::max();
    nearestRec(root_, qx, qy, bestDist2, bestVertex);
    return bestVertex;
}

} // namespace ridepool

#pragma once

#include <vector>

#include "ridepool/road_graph.hpp"

namespace ridepool {

// Nearest-neighbor index over the projected coordinates of dual-accessible
// vertices, i.e. vertices incident to at least one edge that is present in
// both the vehicle and the pedestrian network. Ties are broken towards the
// smallest vertex id. Immutable after build.
class LocationIndex {
public:
    LocationIndex() = default;

    // Builds the index from the bundle; throws if no vertex qualifies.
    static LocationIndex build(const NetworkBundle &nets);

    // Nearest indexed vertex in the projected plane; throws on empty index.
    VertexId mapLocation(const LatLon &coord) const;

    int size() const { return static_cast<int>(points_.size()); }
    const Projection &projection() const { return projection_; }

private:
    struct Point {
        double x, y;
        VertexId vertex;
    };
    struct Node {
        int left = -1, right = -1;
        int pointIndex = -1;
        uint8_t axis = 0;
    };

    int buildRec(int lo, int hi, int depth);
    void nearestRec(int node, double qx, double qy, double &bestDist2, VertexId &bestVertex) const;

    std::vector<Point> points_;
    std::vector<Node> nodes_;
    int root_ = -1;
    Projection projection_;
};

} // namespace ridepool

#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "ridepool/types.hpp"

namespace ridepool {

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

// Directed graph in adjacency-array form with one integral weight per edge.
// Vertices and edges use dense internal ids; the original file ids are kept
// for I/O and error messages. Both forward and reverse adjacency are built so
// searches can run in either direction. Immutable after construction.
class RoadGraph {
public:
    struct Edge {
        VertexId tail = INVALID_ID;
        VertexId head = INVALID_ID;
        int32_t weight = 0;     // seconds (vehicle) or meters (pedestrian)
        EdgeId externalId = INVALID_ID;
    };

    RoadGraph() = default;
    RoadGraph(int numVertices, std::vector<Edge> edges);

    int numVertices() const { return static_cast<int>(firstOut_.size()) - 1; }
    int numEdges() const { return static_cast<int>(edges_.size()); }

    const Edge &edge(EdgeId e) const { return edges_[e]; }
    VertexId tail(EdgeId e) const { return edges_[e].tail; }
    VertexId head(EdgeId e) const { return edges_[e].head; }
    int32_t weight(EdgeId e) const { return edges_[e].weight; }

    // Out-edges of v as a contiguous range of dense edge ids.
    struct EdgeRange {
        const EdgeId *beginPtr;
        const EdgeId *endPtr;
        const EdgeId *begin() const { return beginPtr; }
        const EdgeId *end() const { return endPtr; }
    };
    EdgeRange outEdges(VertexId v) const {
        return {outEdgeIds_.data() + firstOut_[v], outEdgeIds_.data() + firstOut_[v + 1]};
    }
    EdgeRange inEdges(VertexId v) const {
        return {inEdgeIds_.data() + firstIn_[v], inEdgeIds_.data() + firstIn_[v + 1]};
    }

private:
    std::vector<Edge> edges_;
    std::vector<int32_t> firstOut_, firstIn_;
    std::vector<EdgeId> outEdgeIds_, inEdgeIds_;
};

// Vehicle and pedestrian networks share one vertex set loaded from
// vertices.csv. Edge rows flagged veh=1 go into the vehicle graph with
// travel_time_s as weight; rows flagged ped=1 go into the pedestrian graph
// with length_m as weight. A pedestrian edge cross-references the vehicle
// edge with the same file id when that row is also flagged veh=1.
struct NetworkBundle {
    RoadGraph vehicle;
    RoadGraph pedestrian;
    std::vector<LatLon> coords;                  // per dense vertex
    std::vector<int64_t> vertexExternalIds;      // dense -> file id
    std::unordered_map<int64_t, VertexId> vertexByExternalId;

    // file edge id -> dense edge id per network (INVALID_ID if absent)
    std::unordered_map<EdgeId, EdgeId> vehicleEdgeByExternalId;
    std::unordered_map<EdgeId, EdgeId> pedestrianEdgeByExternalId;

    // dense pedestrian edge -> dense vehicle edge (INVALID_ID if none)
    std::vector<EdgeId> pedToVehicleEdge;
    // dense vehicle edge -> dense pedestrian edge (INVALID_ID if none)
    std::vector<EdgeId> vehicleToPedEdge;

    EdgeId vehicleEdgeFromExternal(EdgeId externalId) const;
    EdgeId pedestrianEdgeFromExternal(EdgeId externalId) const;
};

// Local equirectangular projection around a reference latitude; adequate at
// city scale for nearest-neighbor queries.
struct Projection {
    double refLatRad = 0.0;

    static Projection forCoords(const std::vector<LatLon> &coords);

    std::pair<double, double> toPlane(const LatLon &c) const {
        constexpr double kEarthRadius = 6371000.0;
        constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
        return {kEarthRadius * c.lon * kDegToRad * std::cos(refLatRad),
                kEarthRadius * c.lat * kDegToRad};
    }
};

} // namespace ridepool

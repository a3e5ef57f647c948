#pragma once

#include <string>

#include "ridepool/road_graph.hpp"

namespace ridepool {

// Loads vertices.csv (header id,lat,lon) and edges.csv (header
// id,tail,head,travel_time_s,length_m,veh,ped) into the two networks.
// Throws std::runtime_error with file/line context on parse errors,
// dangling vertex references, negative weights, or duplicate ids.
NetworkBundle loadNetworks(const std::string &verticesPath, const std::string &edgesPath);

struct LoadSummary {
    int numVertices = 0;
    int numVehicleEdges = 0;
    int numPedestrianEdges = 0;
};

LoadSummary summarize(const NetworkBundle &nets);

} // namespace ridepool

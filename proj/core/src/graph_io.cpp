#include "ridepool/graph_io.hpp"

#include <cmath>

#include "ridepool/csv.hpp"

namespace ridepool {

NetworkBundle loadNetworks(const std::string &verticesPath, const std::string &edgesPath) {
    NetworkBundle nets;

    CsvReader vertexReader(verticesPath, {"id", "lat", "lon"});
    std::vector<std::string> row;
    while (vertexReader.next(row)) {
        int64_t id = vertexReader.asInt(row, 0);
        if (nets.vertexByExternalId.count(id))
            throw std::runtime_error(vertexReader.parseError("duplicate vertex id " + std::to_string(id)));
        VertexId dense = static_cast<VertexId>(nets.vertexExternalIds.size());
        nets.vertexByExternalId.emplace(id, dense);
        nets.vertexExternalIds.push_back(id);
        nets.coords.push_back({vertexReader.asDouble(row, 1), vertexReader.asDouble(row, 2)});
    }
    const int numVertices = static_cast<int>(nets.vertexExternalIds.size());

    std::vector<RoadGraph::Edge> vehEdges, pedEdges;
    std::vector<EdgeId> pedExternal, vehExternal;
    CsvReader edgeReader(edgesPath, {"id", "tail", "head", "travel_time_s", "length_m", "veh", "ped"});
    while (edgeReader.next(row)) {
        int64_t id = edgeReader.asInt(row, 0);
        int64_t tailExt = edgeReader.asInt(row, 1);
        int64_t headExt = edgeReader.asInt(row, 2);
        auto tailIt = nets.vertexByExternalId.find(tailExt);
        if (tailIt == nets.vertexByExternalId.end())
            throw std::runtime_error(edgeReader.parseError("edge tail references unknown vertex '" +
                                                           std::to_string(tailExt) + "'"));
        auto headIt = nets.vertexByExternalId.find(headExt);
        if (headIt == nets.vertexByExternalId.end())
            throw std::runtime_error(edgeReader.parseError("edge head references unknown vertex '" +
                                                           std::to_string(headExt) + "'"));
        int64_t veh = edgeReader.asInt(row, 5);
        int64_t ped = edgeReader.asInt(row, 6);
        if (veh != 0 && veh != 1)
            throw std::runtime_error(edgeReader.parseError("veh flag must be 0 or 1"));
        if (ped != 0 && ped != 1)
            throw std::runtime_error(edgeReader.parseError("ped flag must be 0 or 1"));

        if (veh == 1) {
            double tt = edgeReader.asDouble(row, 3);
            if (tt < 0)
                throw std::runtime_error(edgeReader.parseError("negative travel time"));
            if (nets.vehicleEdgeByExternalId.count(static_cast<EdgeId>(id)))
                throw std::runtime_error(edgeReader.parseError("duplicate vehicle edge id " + std::to_string(id)));
            EdgeId dense = static_cast<EdgeId>(vehEdges.size());
            vehEdges.push_back({tailIt->second, headIt->second,
                                static_cast<int32_t>(std::llround(tt)), static_cast<EdgeId>(id)});
            nets.vehicleEdgeByExternalId.emplace(static_cast<EdgeId>(id), dense);
            vehExternal.push_back(static_cast<EdgeId>(id));
        }
        if (ped == 1) {
            double len = edgeReader.asDouble(row, 4);
            if (len < 0)
                throw std::runtime_error(edgeReader.parseError("negative length"));
            if (nets.pedestrianEdgeByExternalId.count(static_cast<EdgeId>(id)))
                throw std::runtime_error(edgeReader.parseError("duplicate pedestrian edge id " + std::to_string(id)));
            EdgeId dense = static_cast<EdgeId>(pedEdges.size());
            pedEdges.push_back({tailIt->second, headIt->second,
                                static_cast<int32_t>(std::llround(len)), static_cast<EdgeId>(id)});
            nets.pedestrianEdgeByExternalId.emplace(static_cast<EdgeId>(id), dense);
            pedExternal.push_back(static_cast<EdgeId>(id));
        }
    }

    nets.vehicle = RoadGraph(numVertices, std::move(vehEdges));
    nets.pedestrian = RoadGraph(numVertices, std::move(pedEdges));

    // A pedestrian edge cross-references the vehicle edge with the same id.
    nets.pedToVehicleEdge.assign(nets.pedestrian.numEdges(), INVALID_ID);
    nets.vehicleToPedEdge.assign(nets.vehicle.numEdges(), INVALID_ID);
    for (EdgeId pe = 0; pe < nets.pedestrian.numEdges(); ++pe) {
        EdgeId ve = nets.vehicleEdgeFromExternal(pedExternal[pe]);
        if (ve != INVALID_ID) {
            nets.pedToVehicleEdge[pe] = ve;
            nets.vehicleToPedEdge[ve] = pe;
        }
    }
    return nets;
}

LoadSummary summarize(const NetworkBundle &nets) {
    return {static_cast<int>(nets.coords.size()), nets.vehicle.numEdges(), nets.pedestrian.numEdges()};
}

} // namespace ridepool

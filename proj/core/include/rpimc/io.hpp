// File formats: line-oriented point-cloud text, legacy-VTK point data, CSV.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rpimc/geometry.hpp"
#include "rpimc/monodomain.hpp"

namespace rpimc {

// Point-cloud text format: header "dim N", then N lines
// "x y [z] tag nx ny [nz]" with tag 0=interior, 1=dirichlet, 2=neumann and
// zero normals for interior nodes.
void write_cloud(const NodeCloud& cloud, std::ostream& out);
NodeCloud read_cloud(std::istream& in);
NodeCloud read_cloud_file(const std::string& path);
void write_cloud_file(const NodeCloud& cloud, const std::string& path);

// Legacy-VTK polydata with one scalar point-data array.
void write_vtk_points(const NodeCloud& cloud, const std::vector<double>& scalars,
                      const std::string& array_name, std::ostream& out);

// CSV "node_id, x, y, z, lat_ms"; unactivated nodes carry -1.
void write_lat_csv(const NodeCloud& cloud, const ActivationMap& lat, std::ostream& out);

}  // namespace rpimc
